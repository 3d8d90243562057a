use std::f64::consts::PI;

use rand::Rng;

use super::{virtualize, ReceivedTensor};
use crate::channel::{awgn, propagate, ChannelSet};
use crate::linalg::cis;
use crate::waveform::{analyze, synthesize, WaveformSpec};
use crate::{CMat, Error, Result, C64};

/// How the received tensor is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Per-subcarrier model `Y^{(r)} = Σ_t diag(h^{(r,t)})·C^{(t)}·diag(e_ν) + W^{(r)}`.
    Model,
    /// Synthesis filter bank, multipath convolution with CFO, analysis filter bank.
    Full,
}

/// Frequency-domain noise statistics for the model backend. The full
/// backend always filters white time-domain noise through the AFB.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    White,
    Filtered,
}

/// `e_ν[n] = exp(j2πν·n·M_ss/P)`.
pub fn cfo_vector(spec: &WaveformSpec, nu: f64) -> Vec<C64> {
    (0..spec.n_symbols)
        .map(|n| cis(2.0 * PI * nu * (n * spec.m_ss) as f64 / spec.p as f64))
        .collect()
}

fn check_frames(frames: &[CMat], ch: &ChannelSet, spec: &WaveformSpec) -> Result<()> {
    if frames.len() != ch.n_t() || frames.is_empty() {
        return Err(Error::Dimension(format!(
            "{} transmit frames for {} transmit antennas",
            frames.len(),
            ch.n_t()
        )));
    }
    if frames.iter().any(|c| c.shape() != (spec.m, spec.n_symbols)) {
        return Err(Error::Dimension("frame shape differs from (M, N)".into()));
    }
    Ok(())
}

/// Noise-free model-backend tensor from per-antenna virtual symbols.
pub fn noise_free_model(
    cs: &[CMat],
    ch: &ChannelSet,
    spec: &WaveformSpec,
) -> Result<ReceivedTensor> {
    check_frames(cs, ch, spec)?;
    let e = cfo_vector(spec, ch.nu);
    let slices = ch
        .cfr
        .iter()
        .map(|row| {
            CMat::from_fn(spec.m, spec.n_symbols, |m, n| {
                row.iter().zip(cs).map(|(h, c)| h[m] * c[(m, n)]).sum::<C64>() * e[n]
            })
        })
        .collect();
    ReceivedTensor::new(slices)
}

/// Noise-free full-backend tensor from per-antenna phase-rotated symbols.
pub fn noise_free_full(
    xs: &[CMat],
    ch: &ChannelSet,
    spec: &WaveformSpec,
) -> Result<ReceivedTensor> {
    check_frames(xs, ch, spec)?;
    let signals = xs.iter().map(|x| synthesize(x, spec)).collect::<Result<Vec<_>>>()?;
    let len = spec.frame_len();
    let slices = ch
        .taps
        .iter()
        .map(|row| {
            let mut r = vec![C64::new(0.0, 0.0); len];
            for (h, s) in row.iter().zip(&signals) {
                for (acc, z) in r.iter_mut().zip(propagate(s, h, ch.nu, spec.p)) {
                    *acc += z;
                }
            }
            analyze(&r, spec)
        })
        .collect::<Result<Vec<_>>>()?;
    ReceivedTensor::new(slices)
}

/// Unit-variance frequency-domain noise for `n_r` antennas: i.i.d. `CN(0,1)`
/// entries, or unit-variance white time-domain noise through the AFB.
pub fn unit_noise<R: Rng + ?Sized>(
    spec: &WaveformSpec,
    n_r: usize,
    kind: NoiseKind,
    rng: &mut R,
) -> Result<ReceivedTensor> {
    let slices = (0..n_r)
        .map(|_| match kind {
            NoiseKind::White => Ok(CMat::from_vec(
                spec.m,
                spec.n_symbols,
                awgn(spec.m * spec.n_symbols, 1.0, rng),
            )),
            NoiseKind::Filtered => analyze(&awgn(spec.frame_len(), 1.0, rng), spec),
        })
        .collect::<Result<Vec<_>>>()?;
    ReceivedTensor::new(slices)
}

/// Received tensor for per-antenna phase-rotated symbols `xs`, with noise
/// of variance `ch.sigma2`.
pub fn simulate_received_tensor<R: Rng + ?Sized>(
    xs: &[CMat],
    ch: &ChannelSet,
    spec: &WaveformSpec,
    backend: Backend,
    noise: NoiseKind,
    rng: &mut R,
) -> Result<ReceivedTensor> {
    let clean = match backend {
        Backend::Model => {
            let cs = xs.iter().map(|x| virtualize(x, spec)).collect::<Result<Vec<_>>>()?;
            noise_free_model(&cs, ch, spec)?
        }
        Backend::Full => noise_free_full(xs, ch, spec)?,
    };
    if ch.sigma2 == 0.0 {
        return Ok(clean);
    }
    let kind = match backend {
        Backend::Model => noise,
        Backend::Full => NoiseKind::Filtered,
    };
    let w = unit_noise(spec, ch.n_r(), kind, rng)?;
    clean.add_scaled(&w, ch.sigma2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSet;

    fn one_tap(n_r: usize, spec: &WaveformSpec, nu: f64) -> ChannelSet {
        let taps = (0..n_r)
            .map(|r| vec![vec![C64::new(1.0 + r as f64, -0.5)]])
            .collect();
        ChannelSet::from_taps(taps, spec.p, spec.m, nu, 0.0)
    }

    #[test]
    fn model_without_noise_is_diag_h_times_c() {
        let spec = WaveformSpec::cp_ofdm(8, 2, 4).unwrap();
        let ch = one_tap(2, &spec, 0.0);
        let c = CMat::from_fn(8, 4, |m, n| C64::new(m as f64, n as f64 - 1.0));
        let y = noise_free_model(std::slice::from_ref(&c), &ch, &spec).unwrap();
        for r in 0..2 {
            let h = ch.cfr[r][0][0];
            assert!((y.slice(r) - &c * h).norm() < 1e-13);
        }
    }

    #[test]
    fn model_cfo_scales_columns() {
        let spec = WaveformSpec::oqam(8, 4, 4).unwrap();
        let ch = one_tap(1, &spec, 0.2);
        let c = CMat::from_element(8, 4, C64::new(1.0, 0.0));
        let y = noise_free_model(std::slice::from_ref(&c), &ch, &spec).unwrap();
        let h = ch.cfr[0][0][0];
        for n in 0..4 {
            let want = h * cis(2.0 * PI * 0.2 * (n * 4) as f64 / 8.0);
            assert!((y.get(3, n, 0) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn wrong_antenna_count_rejected() {
        let spec = WaveformSpec::cp_ofdm(8, 2, 4).unwrap();
        let ch = one_tap(1, &spec, 0.0);
        let c = CMat::zeros(8, 4);
        assert!(noise_free_model(&[c.clone(), c], &ch, &spec).is_err());
    }
}
