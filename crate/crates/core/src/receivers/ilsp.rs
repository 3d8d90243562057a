use super::als::projected_als;
use super::{als_step_h, h_block, objective, y_blocks, FrameFormat, JcdEstimate, ReceiverOptions};
use crate::txmodel::{stack_c, ReceivedTensor};
use crate::{CMat, Error, Result, C64};

/// Largest `Q^{N_T}` candidate set ILSE will enumerate per symbol.
const MAX_ENUMERATION: usize = 1 << 16;

fn check_sizes(y: &ReceivedTensor, frame: &FrameFormat) -> Result<()> {
    let (_, n, nr) = y.dims();
    if nr < frame.n_t || n < frame.n_t {
        return Err(Error::Precondition(format!(
            "bilinear separation needs N_R ≥ N_T and N ≥ N_T (N_R = {nr}, N = {n}, N_T = {})",
            frame.n_t
        )));
    }
    Ok(())
}

/// Iterative least squares with projection: LS for `C`, hard-decision
/// projection onto the input alphabet through demap/remap, LS for `H`.
pub fn ilsp_receiver(
    y: &ReceivedTensor,
    init: &CMat,
    opts: &ReceiverOptions,
    frame: &FrameFormat,
) -> Result<JcdEstimate> {
    check_sizes(y, frame)?;
    projected_als(y, init, opts, frame, false)
}

/// Iterative least squares with enumeration: every `(m, n)` picks the
/// alphabet vector minimizing `‖y_{m,n} − H_m·x‖`, then LS for `H`.
/// Only for orthogonal schemes where each `(m, n)` separates (CP-OFDM).
pub fn ilse_receiver(
    y: &ReceivedTensor,
    init: &CMat,
    opts: &ReceiverOptions,
    frame: &FrameFormat,
) -> Result<JcdEstimate> {
    check_sizes(y, frame)?;
    if frame.spec.is_oqam() || !frame.table().is_orthogonal() {
        return Err(Error::UnsupportedVariant(
            "enumeration needs interference-free virtual symbols (CP-OFDM)".into(),
        ));
    }
    let n_t = frame.n_t;
    let points = frame.constellation.points();
    let q = points.len();
    let total = q
        .checked_pow(n_t as u32)
        .filter(|&t| t <= MAX_ENUMERATION)
        .ok_or_else(|| Error::UnsupportedVariant(format!("{q}^{n_t} candidates exceed the budget")))?;
    let (m_len, n, _) = y.dims();
    let blocks = y_blocks(y);
    let start = frame.data_start();
    let y_norm = y.frob_sq().sqrt();

    let mut h = init.clone();
    let mut d: Vec<CMat> = frame.preamble.d.iter().map(|p| {
        let mut full = CMat::zeros(m_len, n);
        full.columns_mut(0, start).copy_from(p);
        full
    }).collect();
    let mut c = stack_c(&d.iter().map(|dt| frame.remap(dt)).collect::<Vec<_>>());
    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    for _ in 0..opts.max_iters {
        let before = d.clone();
        for (m, ym) in blocks.iter().enumerate() {
            let hm = h_block(&h, m, n_t);
            for col in start..n {
                let ph = frame.spec.phase(m, col);
                let mut best = (f64::INFINITY, 0usize);
                for idx in 0..total {
                    let mut err = 0.0;
                    for r in 0..ym.nrows() {
                        let mut z = ym[(r, col)];
                        let mut k = idx;
                        for t in 0..n_t {
                            z -= hm[(r, t)] * points[k % q] * ph;
                            k /= q;
                        }
                        err += z.norm_sqr();
                    }
                    if err < best.0 {
                        best = (err, idx);
                    }
                }
                let mut k = best.1;
                for (t, dt) in d.iter_mut().enumerate() {
                    dt[(m, col)] = points[k % q];
                    c[(t * m_len + m, col)] = points[k % q] * ph;
                    k /= q;
                }
            }
        }
        h = als_step_h(y, &c, n_t)?;
        let f = objective(y, &h, &c, n_t);
        let prev = trace.last().copied();
        trace.push(f);
        let stable = prev.is_some_and(|p| (p - f).abs() <= opts.tol * p || f <= 1e-13 * y_norm);
        if before == d && stable {
            converged = true;
            break;
        }
    }
    Ok(JcdEstimate {
        h,
        c,
        d,
        iters: trace.len(),
        objective_trace: trace,
        converged,
        scale: vec![C64::new(1.0, 0.0); n_t * m_len],
        unresolved: Vec::new(),
    })
}
