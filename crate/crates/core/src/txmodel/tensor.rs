use crate::{CMat, Error, Result, C64};

/// `M × N × N_R` array stored as its frontal slices `Y^{(r)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedTensor {
    slices: Vec<CMat>,
}

impl ReceivedTensor {
    pub fn new(slices: Vec<CMat>) -> Result<Self> {
        let Some(first) = slices.first() else {
            return Err(Error::Dimension("tensor needs at least one slice".into()));
        };
        let shape = first.shape();
        if slices.iter().any(|s| s.shape() != shape) {
            return Err(Error::Dimension("frontal slices differ in shape".into()));
        }
        Ok(Self { slices })
    }

    pub fn zeros(m: usize, n: usize, n_r: usize) -> Self {
        Self { slices: vec![CMat::zeros(m, n); n_r] }
    }

    /// `(M, N, N_R)`
    pub fn dims(&self) -> (usize, usize, usize) {
        let (m, n) = self.slices[0].shape();
        (m, n, self.slices.len())
    }

    pub fn slices(&self) -> &[CMat] {
        &self.slices
    }

    pub fn slice(&self, r: usize) -> &CMat {
        &self.slices[r]
    }

    pub fn get(&self, m: usize, n: usize, r: usize) -> C64 {
        self.slices[r][(m, n)]
    }

    /// `Y(1)ᵀ`: `(N_R·N) × M`, row `r·N + n`, column `m`.
    pub fn unfold1(&self) -> CMat {
        let (m, n, nr) = self.dims();
        CMat::from_fn(nr * n, m, |i, k| self.slices[i / n][(k, i % n)])
    }

    /// `Y(2)ᵀ`: `(N_R·M) × N`, the slices stacked vertically.
    pub fn unfold2(&self) -> CMat {
        let (m, n, nr) = self.dims();
        CMat::from_fn(nr * m, n, |i, q| self.slices[i / m][(i % m, q)])
    }

    /// `Y(3)ᵀ`: `(M·N) × N_R`, column `r` is `vec(Y^{(r)})`.
    pub fn unfold3(&self) -> CMat {
        let (m, n, nr) = self.dims();
        let mut out = CMat::zeros(m * n, nr);
        for (r, s) in self.slices.iter().enumerate() {
            out.column_mut(r).copy_from_slice(s.as_slice());
        }
        out
    }

    pub fn from_unfold1(u: &CMat, n: usize) -> Result<Self> {
        let (rows, m) = u.shape();
        if n == 0 || rows % n != 0 {
            return Err(Error::Dimension("unfold1 rows not a multiple of N".into()));
        }
        let nr = rows / n;
        Self::new(
            (0..nr)
                .map(|r| CMat::from_fn(m, n, |k, q| u[(r * n + q, k)]))
                .collect(),
        )
    }

    pub fn from_unfold2(u: &CMat, m: usize) -> Result<Self> {
        let rows = u.nrows();
        if m == 0 || rows % m != 0 {
            return Err(Error::Dimension("unfold2 rows not a multiple of M".into()));
        }
        Self::new((0..rows / m).map(|r| u.rows(r * m, m).into_owned()).collect())
    }

    pub fn from_unfold3(u: &CMat, m: usize, n: usize) -> Result<Self> {
        if u.nrows() != m * n {
            return Err(Error::Dimension("unfold3 rows differ from M·N".into()));
        }
        Self::new(
            (0..u.ncols())
                .map(|r| CMat::from_column_slice(m, n, u.column(r).as_slice()))
                .collect(),
        )
    }

    /// `self + s·other`
    pub fn add_scaled(&self, other: &ReceivedTensor, s: f64) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(Error::Dimension("tensor shapes differ".into()));
        }
        Ok(Self {
            slices: self
                .slices
                .iter()
                .zip(&other.slices)
                .map(|(a, b)| a + b * C64::new(s, 0.0))
                .collect(),
        })
    }

    pub fn frob_sq(&self) -> f64 {
        self.slices.iter().map(crate::linalg::frob_sq).sum()
    }
}

/// Known factor `Γ = 1ᵀ_{N_T} ⊗ I_M` (`M × N_T·M`).
pub fn gamma(n_t: usize, m: usize) -> CMat {
    CMat::from_fn(m, n_t * m, |i, k| {
        if k % m == i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Stacks per-antenna `M × N` virtual-symbol matrices into `(N_T·M) × N`.
pub fn stack_c(cs: &[CMat]) -> CMat {
    let m = cs[0].nrows();
    let n = cs[0].ncols();
    let mut out = CMat::zeros(cs.len() * m, n);
    for (t, c) in cs.iter().enumerate() {
        out.rows_mut(t * m, m).copy_from(c);
    }
    out
}

/// Inverse of [`stack_c`].
pub fn unstack_c(c: &CMat, n_t: usize) -> Vec<CMat> {
    let m = c.nrows() / n_t;
    (0..n_t).map(|t| c.rows(t * m, m).into_owned()).collect()
}
