use super::{detect, objective, resolve_scaling, y_blocks, FrameFormat, JcdEstimate};
use crate::linalg::dominant_singular_triplet;
use crate::txmodel::ReceivedTensor;
use crate::{CMat, Error, Result, C64};

/// Khatri-Rao factorization: per subcarrier, the dominant singular triplet
/// of `Z_m = Y_mᵀ` (`N × N_R`) gives `ĉ_m = σu` and `ĥ_m = v*`. The
/// per-subcarrier scale is then fixed from the preamble.
pub fn krf_receiver(y: &ReceivedTensor, frame: &FrameFormat) -> Result<JcdEstimate> {
    if frame.n_t != 1 {
        return Err(Error::UnsupportedVariant(format!(
            "KRF needs a single transmit antenna, got N_T = {}",
            frame.n_t
        )));
    }
    let (m_len, n, nr) = y.dims();
    let mut h = CMat::zeros(nr, m_len);
    let mut c = CMat::zeros(m_len, n);
    for (m, ym) in y_blocks(y).into_iter().enumerate() {
        let z = ym.transpose();
        if z.iter().all(|v| *v == C64::new(0.0, 0.0)) {
            return Err(Error::Degenerate(format!("subcarrier {m} received nothing")));
        }
        let (sigma, u, v) = dominant_singular_triplet(&z)
            .ok_or_else(|| Error::Degenerate(format!("SVD failed on subcarrier {m}")))?;
        for q in 0..n {
            c[(m, q)] = u[q] * sigma;
        }
        for r in 0..nr {
            h[(r, m)] = v[r].conj();
        }
    }
    let s = resolve_scaling(&h, &c, frame);
    let f = objective(y, &s.h, &s.c, 1);
    Ok(JcdEstimate {
        d: detect(&s.c, frame),
        h: s.h,
        c: s.c,
        objective_trace: vec![f],
        iters: 1,
        converged: true,
        scale: s.alpha,
        unresolved: s.unresolved,
    })
}
