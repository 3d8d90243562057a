//! Small dense helpers: Kronecker / Khatri-Rao products, vec-permutation
//! matrices and normalized DFT matrices.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::{CMat, CVec, C64};

/// Left Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Column-wise Kronecker (Khatri-Rao) product: column `k` is `a_k ⊗ b_k`.
pub fn khatri_rao(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols(), "khatri_rao: column counts differ");
    let br = b.nrows();
    CMat::from_fn(a.nrows() * br, a.ncols(), |i, k| {
        a[(i / br, k)] * b[(i % br, k)]
    })
}

/// Stacks the columns of `m` into one vector.
pub fn vec(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

/// Inverse of [`vec`].
pub fn unvec(v: &[C64], rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v)
}

/// Vec-permutation matrix mapping index `i*b + j` to `j*a + i`
/// (`i < a`, `j < b`). For `A` of shape `b x a`, it maps `vec(A)` to
/// `vec(Aᵀ)`.
pub fn vec_permutation(a: usize, b: usize) -> CMat {
    let n = a * b;
    let mut p = CMat::zeros(n, n);
    for i in 0..a {
        for j in 0..b {
            p[(j * a + i, i * b + j)] = C64::new(1.0, 0.0);
        }
    }
    p
}

/// Normalized `q`-point DFT matrix, `[F]_{a,b} = exp(-j2πab/q)/√q`.
pub fn dft_matrix(q: usize) -> CMat {
    let s = 1.0 / (q as f64).sqrt();
    CMat::from_fn(q, q, |a, b| {
        let ang = -2.0 * PI * ((a * b) % q) as f64 / q as f64;
        C64::from_polar(s, ang)
    })
}

/// Dominant singular triplet `(σ₁, u₁, v₁)` of a complex matrix, `Z ≈ σ₁u₁v₁ᴴ`.
///
/// Computed from the real SVD of `[[Re Z, −Im Z], [Im Z, Re Z]]`, whose
/// singular values are those of `Z` doubled; the complex SVD in nalgebra
/// returns wrong factors for some tall rank-deficient inputs.
pub fn dominant_singular_triplet(z: &CMat) -> Option<(f64, CVec, CVec)> {
    let (r, c) = z.shape();
    let emb = DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let v = z[(i % r, j % c)];
        match (i / r, j / c) {
            (0, 0) | (1, 1) => v.re,
            (0, 1) => -v.im,
            _ => v.im,
        }
    });
    let svd = emb.svd(false, true);
    let vt = svd.v_t?;
    let k = svd.singular_values.imax();
    let sigma = svd.singular_values[k];
    let mut v = CVec::from_fn(c, |j, _| C64::new(vt[(k, j)], vt[(k, j + c)]));
    let n = v.norm();
    if !(n > 0.0) || !(sigma > 0.0) {
        return None;
    }
    v /= C64::new(n, 0.0);
    let u = z * &v / C64::new(sigma, 0.0);
    Some((sigma, u, v))
}

/// `A† = (AᴴA)⁻¹Aᴴ` for a full-column-rank `A`.
pub fn left_pseudo_inverse(a: &CMat) -> Option<CMat> {
    let ah = a.adjoint();
    (&ah * a).lu().solve(&ah)
}

pub fn frob_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `exp(j·theta)`
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// `j^k` exactly (no trigonometric rounding).
#[inline]
pub fn j_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> CMat {
        CMat::from_fn(rows, cols, |i, j| C64::new(f(i, j), 0.5 * f(j, i)))
    }

    #[test]
    fn khatri_rao_columns_are_kronecker_products() {
        let a = m(2, 3, |i, j| (i + 2 * j) as f64);
        let b = m(4, 3, |i, j| (3 * i) as f64 - j as f64);
        let kr = khatri_rao(&a, &b);
        for k in 0..3 {
            let col = kron(&a.columns(k, 1).into_owned(), &b.columns(k, 1).into_owned());
            assert_eq!(kr.column(k).into_owned(), col.column(0).into_owned());
        }
    }

    #[test]
    fn vec_permutation_transposes() {
        let a = m(3, 2, |i, j| (i * 5 + j) as f64);
        let p = vec_permutation(2, 3);
        let lhs = &p * vec(&a);
        assert_eq!(lhs, vec(&a.transpose()));
    }

    #[test]
    fn dft_is_unitary() {
        let f = dft_matrix(6);
        let e = &f * f.adjoint() - CMat::identity(6, 6);
        assert!(frob_sq(&e) < 1e-26);
    }

    #[test]
    fn dominant_triplet_reconstructs_rank_one() {
        let u = CMat::from_fn(24, 1, |i, _| C64::new((i as f64).sin(), (2.0 * i as f64).cos()));
        let v = CMat::from_fn(1, 2, |_, j| C64::new(1.0 - j as f64, 0.5 + j as f64));
        let z = &u * &v;
        let (s, uu, vv) = dominant_singular_triplet(&z).unwrap();
        let rec = uu * vv.adjoint() * C64::new(s, 0.0);
        assert!(frob_sq(&(rec - &z)) < 1e-24);
        assert!((s * s - frob_sq(&z)).abs() < 1e-10);
    }

    #[test]
    fn left_pseudo_inverse_is_left_inverse() {
        let a = m(5, 3, |i, j| ((i + 1) * (j + 2)) as f64 + (i == j) as u8 as f64);
        let p = left_pseudo_inverse(&a).unwrap();
        assert!(frob_sq(&(p * &a - CMat::identity(3, 3))) < 1e-20);
    }

    #[test]
    fn j_pow_matches_cis() {
        for k in -9..9 {
            let d = j_pow(k) - cis(k as f64 * PI / 2.0);
            assert!(d.norm() < 1e-15);
        }
    }
}
