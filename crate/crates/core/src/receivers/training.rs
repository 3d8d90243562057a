use rand::Rng;

use super::{h_block, set_h_block, y_blocks, FrameFormat};
use crate::channel::complex_gaussian;
use crate::txmodel::ReceivedTensor;
use crate::{CMat, Error, Result, C64};

/// Preamble-based channel estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingEstimate {
    pub h: CMat,
    /// Subcarriers whose pilots were unusable; their columns were
    /// interpolated from the nearest usable neighbours.
    pub flagged: Vec<usize>,
}

/// Per-subcarrier LS fit `Ĥ_m = Y_{m,P}·C_{m,P}ᴴ·(C_{m,P}·C_{m,P}ᴴ)⁻¹` over
/// the data-free preamble columns `P`.
pub fn training_init(y: &ReceivedTensor, frame: &FrameFormat) -> Result<TrainingEstimate> {
    let (m_len, _, n_r) = y.dims();
    let n_t = frame.n_t;
    let cols = &frame.preamble.pilot_cols;
    let blocks = y_blocks(y);
    let mut h = CMat::zeros(n_r, n_t * m_len);
    let mut ok = vec![false; m_len];
    for m in 0..m_len {
        let p = CMat::from_fn(n_t, cols.len(), |t, k| frame.preamble.c[t][(m, cols[k])]);
        let yp = CMat::from_fn(n_r, cols.len(), |r, k| blocks[m][(r, cols[k])]);
        let gram = &p * p.adjoint();
        let energy: f64 = (0..n_t).map(|t| gram[(t, t)].re).fold(f64::INFINITY, f64::min);
        if !(energy > 0.0) {
            continue;
        }
        let Some(hm) = gram.lu().solve(&(p * yp.adjoint())) else {
            continue;
        };
        let hm = hm.adjoint();
        if hm.iter().all(|z| z.is_finite()) {
            set_h_block(&mut h, m, &hm);
            ok[m] = true;
        }
    }
    let flagged: Vec<usize> = (0..m_len).filter(|&m| !ok[m]).collect();
    if flagged.len() == m_len {
        return Err(Error::Degenerate("no subcarrier carries usable pilot energy".into()));
    }
    for &m in &flagged {
        let hm = interpolate(&h, &ok, m, n_t);
        set_h_block(&mut h, m, &hm);
    }
    Ok(TrainingEstimate { h, flagged })
}

/// Linear interpolation between the nearest usable subcarriers on either
/// side, circularly.
fn interpolate(h: &CMat, ok: &[bool], m: usize, n_t: usize) -> CMat {
    let len = ok.len();
    let below = (1..len).find(|&d| ok[(m + len - d) % len]).unwrap_or(len);
    let above = (1..len).find(|&d| ok[(m + d) % len]).unwrap_or(len);
    let lo = h_block(h, (m + len - below) % len, n_t);
    let hi = h_block(h, (m + above) % len, n_t);
    let w = below as f64 / (below + above) as f64;
    lo * C64::new(1.0 - w, 0.0) + hi * C64::new(w, 0.0)
}

/// Random `N_R × (N_T·M)` channel with unit-norm Gaussian columns.
pub fn random_init<R: Rng + ?Sized>(n_r: usize, n_t: usize, m: usize, rng: &mut R) -> CMat {
    let mut h = CMat::from_fn(n_r, n_t * m, |_, _| complex_gaussian(1.0, rng));
    for mut col in h.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= C64::new(n, 0.0);
        }
    }
    h
}
