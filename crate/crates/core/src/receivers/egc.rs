use super::{detect, objective, training_init, FrameFormat, JcdEstimate};
use crate::txmodel::ReceivedTensor;
use crate::{CMat, Error, Result, C64};

/// `ĉ_{m,n} = (1/N_R)·Σ_r y_{m,n}^(r) / H_m^(r)` (single transmit antenna).
pub fn egc_equalize(y: &ReceivedTensor, h: &CMat) -> Result<CMat> {
    let (m_len, n, nr) = y.dims();
    if h.shape() != (nr, m_len) {
        return Err(Error::Dimension(format!("H is {:?}, expected ({nr}, {m_len})", h.shape())));
    }
    let mut c = CMat::zeros(m_len, n);
    for m in 0..m_len {
        for r in 0..nr {
            if h[(r, m)] == C64::new(0.0, 0.0) {
                return Err(Error::Division(format!("H_{m}^({r})")));
            }
        }
        for q in 0..n {
            let s: C64 = (0..nr).map(|r| y.get(m, q, r) / h[(r, m)]).sum();
            c[(m, q)] = s / nr as f64;
        }
    }
    Ok(c)
}

/// `Ĥ_m^(r) = (1/N)·Σ_n y_{m,n}^(r) / c_{m,n}` (single transmit antenna).
pub fn egc_estimate(y: &ReceivedTensor, c: &CMat) -> Result<CMat> {
    let (m_len, n, nr) = y.dims();
    if c.shape() != (m_len, n) {
        return Err(Error::Dimension(format!("C is {:?}, expected ({m_len}, {n})", c.shape())));
    }
    if let Some(i) = c.iter().position(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::Division(format!("c_{{{},{}}}", i % m_len, i / m_len)));
    }
    Ok(CMat::from_fn(nr, m_len, |r, m| {
        (0..n).map(|q| y.get(m, q, r) / c[(m, q)]).sum::<C64>() / n as f64
    }))
}

/// Preamble channel estimate followed by equal-gain combining.
pub fn egc_receiver(y: &ReceivedTensor, frame: &FrameFormat) -> Result<JcdEstimate> {
    if frame.n_t != 1 {
        return Err(Error::UnsupportedVariant("equal-gain combining needs N_T = 1".into()));
    }
    let h = training_init(y, frame)?.h;
    let c = egc_equalize(y, &h)?;
    let f = objective(y, &h, &c, 1);
    Ok(JcdEstimate {
        d: detect(&c, frame),
        scale: vec![C64::new(1.0, 0.0); c.nrows()],
        h,
        c,
        objective_trace: vec![f],
        iters: 0,
        converged: true,
        unresolved: Vec::new(),
    })
}
