#![allow(dead_code)]

use flexmc_core::channel::{ChannelSet, PowerDelayProfile};
use flexmc_core::constellation::Constellation;
use flexmc_core::receivers::FrameFormat;
use flexmc_core::txmodel::{noise_free_model, stack_c, unit_noise, NoiseKind, ReceivedTensor};
use flexmc_core::waveform::WaveformSpec;
use flexmc_core::{CMat, C64};
use rand::Rng;

/// One transmitted frame through a random channel on the model backend.
pub struct Scenario {
    pub frame: FrameFormat,
    pub ch: ChannelSet,
    pub d: Vec<CMat>,
    pub c: CMat,
    pub y: ReceivedTensor,
}

impl Scenario {
    pub fn h(&self) -> CMat {
        self.ch.h_matrix()
    }
}

pub fn scenario(
    spec: WaveformSpec,
    n_t: usize,
    n_r: usize,
    sigma2: f64,
    rng: &mut impl Rng,
) -> Scenario {
    let frame = FrameFormat::new(spec.clone(), n_t, Constellation::Qpsk).unwrap();
    let ch = ChannelSet::draw(&PowerDelayProfile::ped_a(), n_r, n_t, spec.p, spec.m, 0.0, sigma2, rng);
    let d = frame.random_symbols(rng);
    let cs: Vec<CMat> = d.iter().map(|dt| frame.remap(dt)).collect();
    let mut y = noise_free_model(&cs, &ch, &spec).unwrap();
    if sigma2 > 0.0 {
        let w = unit_noise(&spec, n_r, NoiseKind::White, rng).unwrap();
        y = y.add_scaled(&w, sigma2.sqrt()).unwrap();
    }
    Scenario { frame, ch, d, c: stack_c(&cs), y }
}

pub fn nmse(h: &CMat, h_hat: &CMat) -> f64 {
    (h - h_hat).norm_squared() / h.norm_squared()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_cmat(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}
