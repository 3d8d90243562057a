use super::FrameFormat;
use crate::{CMat, C64};

/// Result of [`resolve_scaling`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    pub h: CMat,
    pub c: CMat,
    /// `α` per row of `C`; 1 where unresolved.
    pub alpha: Vec<C64>,
    pub unresolved: Vec<usize>,
}

/// Per row `k = t·M + m` of `Ĉ`, the LS scalar
/// `α = Σ c*·ĉ / Σ |c|²` over the known preamble columns, applied as
/// `Ĉ_k ← Ĉ_k/α`, `Ĥ_{:,k} ← α·Ĥ_{:,k}`.
pub fn resolve_scaling(h: &CMat, c: &CMat, frame: &FrameFormat) -> Scaling {
    let mut h = h.clone();
    let mut c = c.clone();
    let m_len = frame.m();
    let mut alpha = vec![C64::new(1.0, 0.0); c.nrows()];
    let mut unresolved = Vec::new();
    for (t, known) in frame.preamble.c.iter().enumerate() {
        for m in 0..m_len {
            let k = t * m_len + m;
            let mut num = C64::new(0.0, 0.0);
            let mut den = 0.0;
            for &n in &frame.preamble.pilot_cols {
                num += known[(m, n)].conj() * c[(k, n)];
                den += known[(m, n)].norm_sqr();
            }
            if den == 0.0 || num.norm() == 0.0 || !num.is_finite() {
                unresolved.push(k);
                continue;
            }
            let a = num / den;
            alpha[k] = a;
            c.row_mut(k).iter_mut().for_each(|z| *z /= a);
            h.column_mut(k).iter_mut().for_each(|z| *z *= a);
        }
    }
    Scaling { h, c, alpha, unresolved }
}
