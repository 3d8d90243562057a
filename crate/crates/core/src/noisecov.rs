//! Covariance of analysis-filter-bank noise, its block-circulant
//! approximation, and the colored-noise weighted LS estimators.
//!
//! Noise vectors are ordered as `vec(W^{(r)})`, i.e. index `n·M + m`.

use std::f64::consts::PI;

use crate::linalg::{dft_matrix, kron, vec_permutation};
use crate::txmodel::ReceivedTensor;
use crate::waveform::{interference_weight_with, InterferenceTable, WaveformSpec};
use crate::{CMat, CVec, Error, Result, C64};

/// Relation between the FFT size and the symbol spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovCase {
    /// `ε = 1`: block Toeplitz.
    PEqMss,
    /// `ε = −1` (FBMC/OQAM): block Toeplitz after the `S̄` transform.
    PEq2Mss,
    General,
}

/// Normalized block-tridiagonal covariance `B̄` built from the 3×3
/// weights of the receive prototype with itself.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredNoiseCov {
    pub m: usize,
    pub n: usize,
    pub case: CovCase,
    /// Weights with `g̃` in both filter slots.
    pub tilde: InterferenceTable,
    wrap: bool,
    b: Vec<CMat>,
    t: Vec<CMat>,
}

/// `M × M` Toeplitz band with `diag` on the diagonal, `upper` above it and
/// `upper*` below; the corners carry the wrapped band when `wrap`.
fn band(m: usize, diag: C64, upper: C64, wrap: bool) -> CMat {
    let mut a = CMat::from_fn(m, m, |i, j| {
        if i == j {
            diag
        } else if j == i + 1 {
            upper
        } else if i == j + 1 {
            upper.conj()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    if wrap && m > 2 {
        a[(m - 1, 0)] += upper;
        a[(0, m - 1)] += upper.conj();
    }
    a
}

/// `S_M = diag(1, −1, 1, −1, …)`.
pub fn s_matrix(m: usize) -> CMat {
    CMat::from_fn(m, m, |i, j| {
        if i != j {
            C64::new(0.0, 0.0)
        } else if i % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    })
}

fn assemble(m: usize, n: usize, diag: impl Fn(usize) -> CMat, upper: impl Fn(usize) -> CMat, lower: impl Fn(usize) -> CMat) -> CMat {
    let mut out = CMat::zeros(m * n, m * n);
    for q in 0..n {
        out.view_mut((q * m, q * m), (m, m)).copy_from(&diag(q));
        if q + 1 < n {
            out.view_mut((q * m, (q + 1) * m), (m, m)).copy_from(&upper(q + 1));
            out.view_mut(((q + 1) * m, q * m), (m, m)).copy_from(&lower(q + 1));
        }
    }
    out
}

/// Analytic normalized covariance of AFB-processed white noise over an
/// `M × N` frame, truncated to the 3×3 neighbourhood.
pub fn analytic_noise_cov(spec: &WaveformSpec, n: usize) -> Result<StructuredNoiseCov> {
    let g = &spec.rx_prototype;
    let tilde = InterferenceTable::from_prototypes(g, g, spec.p, spec.m_ss)?;
    let eps = tilde.epsilon;
    let case = if (eps - C64::new(1.0, 0.0)).norm() < 1e-12 {
        CovCase::PEqMss
    } else if (eps + C64::new(1.0, 0.0)).norm() < 1e-12 {
        CovCase::PEq2Mss
    } else {
        CovCase::General
    };
    let m = spec.m;
    let wrap = spec.wraps_in_frequency();
    let b = (0..n)
        .map(|q| band(m, C64::new(1.0, 0.0), tilde.b(q as i64), wrap))
        .collect();
    // block (q−1, q): entry (p, p+u) is the weight of (u, v = +1) at time q−1
    let t = (1..n)
        .map(|q| band(m, C64::new(tilde.gamma, 0.0), tilde.weight(1, 1, q as i64 - 1), wrap))
        .collect();
    Ok(StructuredNoiseCov { m, n, case, tilde, wrap, b, t })
}

impl StructuredNoiseCov {
    /// Diagonal block `B_q`.
    pub fn b_block(&self, q: usize) -> &CMat {
        &self.b[q]
    }

    /// Off-diagonal block `T_q` at block position `(q−1, q)` and `(q, q−1)`,
    /// `q = 1, …, N−1`.
    pub fn t_block(&self, q: usize) -> &CMat {
        &self.t[q - 1]
    }

    /// `T₀` built from `Γ̃` and `Δ̃₀`.
    pub fn t0(&self) -> CMat {
        band(self.m, C64::new(self.tilde.gamma, 0.0), self.tilde.delta0, self.wrap)
    }

    pub fn b0(&self) -> CMat {
        band(self.m, C64::new(1.0, 0.0), self.tilde.b0, self.wrap)
    }

    /// Dense `B̄` (`MN × MN`).
    pub fn bbar(&self) -> CMat {
        assemble(self.m, self.n, |q| self.b[q].clone(), |q| self.t[q - 1].clone(), |q| self.t[q - 1].adjoint())
    }

    /// `S̄ = diag(I_M, S_M, I_M, S_M, …)`.
    pub fn s_bar(&self) -> CMat {
        let s = s_matrix(self.m);
        let mut out = CMat::zeros(self.m * self.n, self.m * self.n);
        for q in 0..self.n {
            let blk = if q % 2 == 0 { CMat::identity(self.m, self.m) } else { s.clone() };
            out.view_mut((q * self.m, q * self.m), (self.m, self.m)).copy_from(&blk);
        }
        out
    }

    /// `B̄_S`, block Toeplitz with `B₀` on the diagonal, `S_M·T₀` above and
    /// `T₀·S_M` below. Only for `P = 2M_ss`.
    pub fn b_s(&self) -> Result<CMat> {
        if self.case != CovCase::PEq2Mss {
            return Err(Error::UnsupportedCase(format!("S-transform needs P = 2M_ss, case is {:?}", self.case)));
        }
        let s = s_matrix(self.m);
        let b0 = self.b0();
        let t0 = self.t0();
        let st = &s * &t0;
        let ts = &t0 * &s;
        Ok(assemble(self.m, self.n, |_| b0.clone(), |_| st.clone(), |_| ts.clone()))
    }

    /// Block-circulant approximant with circulant blocks: every diagonal
    /// block becomes circulant `B₀`, and `T₀` also links the first and
    /// last symbols.
    pub fn circulant_approximant(&self) -> CMat {
        let b0 = band(self.m, C64::new(1.0, 0.0), self.tilde.b0, true);
        let t0 = band(self.m, C64::new(self.tilde.gamma, 0.0), self.tilde.delta0, true);
        let n = self.n;
        let shift = CMat::from_fn(n, n, |i, j| {
            if (i + 1) % n == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        kron(&CMat::identity(n, n), &b0) + kron(&(&shift + shift.transpose()), &t0)
    }
}

/// Full normalized covariance of AFB-processed white noise, all lags.
pub fn full_noise_cov(spec: &WaveformSpec, n: usize) -> CMat {
    let g = &spec.rx_prototype;
    let m = spec.m;
    CMat::from_fn(m * n, m * n, |i, j| {
        let (q, p) = ((i / m) as i64, (i % m) as i64);
        let (nn, mm) = ((j / m) as i64, (j % m) as i64);
        interference_weight_with(mm - p, nn - q, q, g, g, spec.p, spec.m_ss)
    })
}

/// Eigenvalues of the block-circulant approximant: `Λ_n` diagonal with
/// `λ_m(B₀) + 2λ_m(T₀)·cos(2πn/N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantFactorization {
    pub m: usize,
    pub n: usize,
    /// `lambda[n][m]`
    pub lambda: Vec<Vec<f64>>,
}

/// `λ_m` of the circulant band with diagonal `d` and first superdiagonal
/// `a`: `d + 2Re{a}cos(2πm/M) + 2Im{a}sin(2πm/M)`.
fn band_eigen(d: f64, a: C64, m: usize, len: usize) -> f64 {
    let th = 2.0 * PI * m as f64 / len as f64;
    d + 2.0 * a.re * th.cos() + 2.0 * a.im * th.sin()
}

pub fn circulant_factorize(cov: &StructuredNoiseCov) -> Result<CirculantFactorization> {
    if cov.case != CovCase::PEqMss {
        return Err(Error::UnsupportedCase(format!(
            "block-circulant factorization needs P = M_ss, case is {:?}",
            cov.case
        )));
    }
    let t = &cov.tilde;
    let lambda = (0..cov.n)
        .map(|k| {
            let c = (2.0 * PI * k as f64 / cov.n as f64).cos();
            (0..cov.m)
                .map(|m| band_eigen(1.0, t.b0, m, cov.m) + 2.0 * band_eigen(t.gamma, t.delta0, m, cov.m) * c)
                .collect()
        })
        .collect();
    Ok(CirculantFactorization { m: cov.m, n: cov.n, lambda })
}

impl CirculantFactorization {
    /// White noise: every `Λ_n = I`.
    pub fn identity(m: usize, n: usize) -> Self {
        Self { m, n, lambda: vec![vec![1.0; m]; n] }
    }

    fn check_positive(&self) -> Result<()> {
        for (k, l) in self.lambda.iter().enumerate() {
            if let Some(m) = l.iter().position(|&x| !(x > 0.0)) {
                return Err(Error::SingularSystem { subcarrier: m, time: k });
            }
        }
        Ok(())
    }

    fn dense(&self, f: impl Fn(f64) -> f64) -> CMat {
        let fm = kron(&dft_matrix(self.n), &dft_matrix(self.m));
        let d = CMat::from_fn(self.m * self.n, self.m * self.n, |i, j| {
            if i == j {
                C64::new(f(self.lambda[i / self.m][i % self.m]), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &fm * d * fm.adjoint()
    }

    /// `(F_N ⊗ F_M)·diag(Λ₀, …, Λ_{N−1})·(F_N ⊗ F_M)ᴴ`.
    pub fn reconstruct(&self) -> CMat {
        self.dense(|x| x)
    }

    /// Inverse of [`Self::reconstruct`].
    pub fn inverse(&self) -> Result<CMat> {
        self.check_positive()?;
        Ok(self.dense(|x| 1.0 / x))
    }

    /// `F_M·Λ_k⁻¹·F_Mᴴ`.
    fn freq_weight(&self, k: usize) -> CMat {
        let f = dft_matrix(self.m);
        let d = CMat::from_fn(self.m, self.m, |i, j| {
            if i == j {
                C64::new(1.0 / self.lambda[k][i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &f * d * f.adjoint()
    }
}

fn check_frame(y: &CMat, c: &CMat, fact: &CirculantFactorization) -> Result<()> {
    if y.shape() != (fact.m, fact.n) || c.shape() != (fact.m, fact.n) {
        return Err(Error::Dimension(format!(
            "Y {:?} and C {:?} must both be {}×{}",
            y.shape(),
            c.shape(),
            fact.m,
            fact.n
        )));
    }
    Ok(())
}

fn solve_hermitian(a: CMat, b: CVec, m: usize) -> Result<CVec> {
    if let Some(i) = (0..a.nrows()).find(|&i| a[(i, i)].norm() == 0.0) {
        return Err(Error::SingularSystem { subcarrier: i % m, time: i / m });
    }
    a.lu().solve(&b).ok_or(Error::SingularSystem { subcarrier: 0, time: 0 })
}

/// Weighted LS channel estimate for one receive antenna under the
/// factorized covariance, in the doubly transformed domain:
/// `y̆_k = F_Mᴴ·diag(c̆_k)·h + w̆_k` with `cov(w̆_k) = Λ_k`, where `c̆_k`
/// and `y̆_k` are the columns of `C·F_N*` and `F_Mᴴ·Y·F_N*`.
pub fn wls_channel_estimate(y: &CMat, c: &CMat, fact: &CirculantFactorization) -> Result<CVec> {
    check_frame(y, c, fact)?;
    fact.check_positive()?;
    let fm = dft_matrix(fact.m);
    let fn_conj = dft_matrix(fact.n).map(|z| z.conj());
    let cb = c * &fn_conj;
    let yb = fm.adjoint() * y * &fn_conj;
    let mut a = CMat::zeros(fact.m, fact.m);
    let mut b = CVec::zeros(fact.m);
    for k in 0..fact.n {
        let dk = CMat::from_diagonal(&cb.column(k).into_owned());
        let mut lam = CMat::zeros(fact.m, fact.m);
        for i in 0..fact.m {
            lam[(i, i)] = C64::new(1.0 / fact.lambda[k][i], 0.0);
        }
        let w = dk.adjoint() * &fm * lam;
        a += &w * fm.adjoint() * &dk;
        b += w * yb.column(k);
    }
    solve_hermitian(a, b, fact.m)
}

/// The same weighting applied column by column to the untransformed frame,
/// `ĥ = [Σ_n diag(c_n*)·F_M·Λ_n⁻¹·F_Mᴴ·diag(c_n)]⁻¹·Σ_n diag(c_n*)·F_M·Λ_n⁻¹·F_Mᴴ·y_n`.
pub fn wls_channel_estimate_columnwise(
    y: &CMat,
    c: &CMat,
    fact: &CirculantFactorization,
) -> Result<CVec> {
    check_frame(y, c, fact)?;
    fact.check_positive()?;
    let mut a = CMat::zeros(fact.m, fact.m);
    let mut b = CVec::zeros(fact.m);
    for k in 0..fact.n {
        let dk = CMat::from_diagonal(&c.column(k).into_owned());
        let w = dk.adjoint() * fact.freq_weight(k);
        a += &w * &dk;
        b += w * y.column(k);
    }
    solve_hermitian(a, b, fact.m)
}

/// Generalized LS channel estimate with an explicit (dense) normalized
/// covariance of `vec(Y^{(r)})`.
pub fn gls_channel_estimate(y: &CMat, c: &CMat, cov: &CMat) -> Result<CVec> {
    let (m, n) = y.shape();
    if c.shape() != (m, n) || cov.shape() != (m * n, m * n) {
        return Err(Error::Dimension("GLS operands disagree in size".into()));
    }
    // A = [diag(c_0); …; diag(c_{N−1})]
    let a = CMat::from_fn(m * n, m, |i, j| if i % m == j { c[(j, i / m)] } else { C64::new(0.0, 0.0) });
    let chol = cov.clone().cholesky().ok_or(Error::SingularSystem { subcarrier: 0, time: 0 })?;
    let wa = chol.solve(&a);
    let yv = CVec::from_column_slice(y.as_slice());
    solve_hermitian(a.adjoint() * &wa, wa.adjoint() * yv, m)
}

/// Weighted LS estimate of the single-antenna virtual symbols from all
/// receive antennas:
/// `ĉ = [Σ_r D_rᴴ·B̄⁻¹·D_r]⁻¹·Σ_r D_rᴴ·B̄⁻¹·vec(Y^{(r)})`,
/// `D_r = I_N ⊗ diag(h^{(r)})`, with `B̄` the factorized approximant.
pub fn wls_symbol_estimate(
    y: &ReceivedTensor,
    h: &CMat,
    fact: &CirculantFactorization,
) -> Result<CMat> {
    let (m, n, nr) = y.dims();
    if (m, n) != (fact.m, fact.n) || h.shape() != (nr, m) {
        return Err(Error::Dimension(format!(
            "tensor {m}×{n}×{nr}, H {:?}, factorization {}×{}",
            h.shape(),
            fact.m,
            fact.n
        )));
    }
    let binv = fact.inverse()?;
    let mut a = CMat::zeros(m * n, m * n);
    let mut b = CVec::zeros(m * n);
    for r in 0..nr {
        let d: CVec = CVec::from_fn(m * n, |i, _| h[(r, i % m)]);
        // D_rᴴ·B̄⁻¹ scales row i by conj(d_i); ·D_r scales column j by d_j
        let w = CMat::from_fn(m * n, m * n, |i, j| d[i].conj() * binv[(i, j)]);
        a += CMat::from_fn(m * n, m * n, |i, j| w[(i, j)] * d[j]);
        b += w * CVec::from_column_slice(y.slice(r).as_slice());
    }
    let c = solve_hermitian(a, b, m)?;
    Ok(CMat::from_column_slice(m, n, c.as_slice()))
}

/// `P₂,₃ = I_{N_R,N} ⊗ I_M`, mapping `vec(W(3)ᵀ)` to `vec(W(2)ᵀ)`.
pub fn p23(n_r: usize, n: usize, m: usize) -> CMat {
    kron(&vec_permutation(n_r, n), &CMat::identity(m, m))
}

/// `P₁,₃ = I_{N_R·N, M}`, mapping `vec(W(3)ᵀ)` to `vec(W(1)ᵀ)`.
pub fn p13(n_r: usize, n: usize, m: usize) -> CMat {
    vec_permutation(n_r * n, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_eigenvalues_match_dense_circulant() {
        let a = C64::new(0.2, -0.1);
        let m = 6;
        let c = band(m, C64::new(1.0, 0.0), a, true);
        let f = dft_matrix(m);
        let d = f.adjoint() * c * &f;
        for k in 0..m {
            assert!((d[(k, k)].re - band_eigen(1.0, a, k, m)).abs() < 1e-12);
            assert!(d[(k, k)].im.abs() < 1e-12);
        }
    }

    #[test]
    fn rectangular_cp_ofdm_is_white() {
        let spec = WaveformSpec::cp_ofdm(8, 0, 4).unwrap();
        let cov = analytic_noise_cov(&spec, 4).unwrap();
        assert_eq!(cov.case, CovCase::PEqMss);
        assert!((cov.bbar() - CMat::identity(32, 32)).norm() < 1e-12);
    }
}
