use rustfft::FftPlanner;

use super::WaveformSpec;
use crate::{CMat, Error, Result, C64};

/// Synthesis filter bank: `s(l) = Σ_{m,n} x_{m,n}·g(l - n·M_ss)·exp(j2πml/P)`.
///
/// Each column is an inverse `P`-point DFT of the (zero-padded) symbols,
/// read out periodically under the shifted prototype.
pub fn synthesize(x: &CMat, spec: &WaveformSpec) -> Result<Vec<C64>> {
    if x.shape() != (spec.m, spec.n_symbols) {
        return Err(Error::Dimension(format!(
            "synthesize: X is {:?}, expected ({}, {})",
            x.shape(),
            spec.m,
            spec.n_symbols
        )));
    }
    let p = spec.p;
    let g = &spec.tx_prototype;
    let ifft = FftPlanner::new().plan_fft_inverse(p);
    let mut s = vec![C64::new(0.0, 0.0); spec.frame_len()];
    let mut buf = vec![C64::new(0.0, 0.0); p];
    for n in 0..spec.n_symbols {
        buf.iter_mut().for_each(|b| *b = C64::new(0.0, 0.0));
        buf[..spec.m].copy_from_slice(x.column(n).as_slice());
        ifft.process(&mut buf);
        let start = n * spec.m_ss;
        for (k, gk) in g.iter().enumerate() {
            let l = start + k;
            s[l] += buf[l % p] * *gk;
        }
    }
    Ok(s)
}

/// Analysis filter bank: `y_{p,q} = Σ_l r(l)·g̃(l - q·M_ss)·exp(-j2πpl/P)`
/// for the `M` active subcarriers. Samples of `r` beyond the frame length
/// are ignored.
pub fn analyze(r: &[C64], spec: &WaveformSpec) -> Result<CMat> {
    let len = spec.frame_len();
    if r.len() < len {
        return Err(Error::Dimension(format!(
            "analyze: received {} samples, frame needs {len}",
            r.len()
        )));
    }
    let p = spec.p;
    let gt = &spec.rx_prototype;
    let fft = FftPlanner::new().plan_fft_forward(p);
    let mut y = CMat::zeros(spec.m, spec.n_symbols);
    let mut buf = vec![C64::new(0.0, 0.0); p];
    for q in 0..spec.n_symbols {
        buf.iter_mut().for_each(|b| *b = C64::new(0.0, 0.0));
        let start = q * spec.m_ss;
        for (k, gk) in gt.iter().enumerate() {
            let l = start + k;
            buf[l % p] += r[l] * *gk;
        }
        fft.process(&mut buf);
        y.column_mut(q).copy_from_slice(&buf[..spec.m]);
    }
    Ok(y)
}
