use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::config::CampaignConfig;
use super::metrics::{nmse, to_db, MetricsRow};
use crate::channel::ChannelSet;
use crate::receivers::{run_receiver, FrameFormat, ReceiverOptions};
use crate::txmodel::{noise_free_full, noise_free_model, unit_noise, Backend, NoiseKind, ReceivedTensor};
use crate::{CMat, Error, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "FLEXMC_THREADS";

/// Per-trial generator: ChaCha20 keyed by the campaign seed, with the
/// trial index as stream id.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Everything random in one trial. Noise is drawn at unit variance and
/// scaled per SNR point, so all points and variants share it.
#[derive(Debug, Clone)]
pub struct TrialDraw {
    pub d: Vec<CMat>,
    pub ch: ChannelSet,
    pub clean: ReceivedTensor,
    pub noise: ReceivedTensor,
}

pub fn draw_trial(cfg: &CampaignConfig, frame: &FrameFormat, trial: usize) -> Result<TrialDraw> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let spec = &frame.spec;
    let d = frame.random_symbols(&mut rng);
    let ch = ChannelSet::draw(&cfg.pdp, cfg.n_r, cfg.n_t, spec.p, spec.m, cfg.cfo, 0.0, &mut rng);
    let (clean, kind) = match cfg.backend {
        Backend::Model => {
            let cs: Vec<CMat> = d.iter().map(|dt| frame.remap(dt)).collect();
            (noise_free_model(&cs, &ch, spec)?, cfg.noise)
        }
        Backend::Full => {
            let xs: Vec<CMat> = d.iter().map(|dt| frame.rotate(dt)).collect();
            (noise_free_full(&xs, &ch, spec)?, NoiseKind::Filtered)
        }
    };
    let noise = unit_noise(spec, cfg.n_r, kind, &mut rng)?;
    Ok(TrialDraw { d, ch, clean, noise })
}

/// Noise variance at a transmit SNR (per-sample signal power over `σ²`).
pub fn noise_variance(frame: &FrameFormat, snr_db: f64) -> f64 {
    frame.spec.signal_power(frame.symbol_power()) / 10f64.powf(snr_db / 10.0)
}

/// Result of one receiver on one trial at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialCell {
    pub nmse: f64,
    pub bit_errors: u64,
    pub bits: u64,
    pub iters: usize,
    /// The receiver hit a numerical failure; counted as `Ĥ = 0` and
    /// half the bits wrong.
    pub failed: bool,
}

fn is_numerical(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularUpdate { .. } | Error::SingularSystem { .. } | Error::Degenerate(_) | Error::Division(_)
    )
}

/// All cells of one trial, indexed `snr_index · variants + variant_index`.
pub fn run_trial(cfg: &CampaignConfig, frame: &FrameFormat, opts: &[ReceiverOptions], trial: usize) -> Result<Vec<TrialCell>> {
    let draw = draw_trial(cfg, frame, trial)?;
    let h = draw.ch.h_matrix();
    let mut cells = Vec::with_capacity(cfg.snr_db.len() * opts.len());
    for &snr in &cfg.snr_db {
        let sigma2 = noise_variance(frame, snr);
        let y = draw.clean.add_scaled(&draw.noise, sigma2.sqrt())?;
        for o in opts {
            let cell = match run_receiver(&y, frame, o, Some(&h)) {
                Ok(est) => {
                    let (bit_errors, bits) = frame.bit_errors(&draw.d, &est.d);
                    TrialCell { nmse: nmse(&h, &est.h)?, bit_errors, bits, iters: est.iters, failed: false }
                }
                Err(e) if is_numerical(&e) => {
                    let (_, bits) = frame.bit_errors(&draw.d, &draw.d);
                    TrialCell { nmse: 1.0, bit_errors: bits / 2, bits, iters: o.max_iters, failed: true }
                }
                Err(e) => return Err(e),
            };
            cells.push(cell);
        }
    }
    Ok(cells)
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        Err(_) => Ok(None),
    }
}

/// Runs every trial (in parallel) and averages per `(variant, SNR)`.
/// Rows are ordered by variant as configured, then by SNR grid position.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<Vec<MetricsRow>> {
    cfg.validate()?;
    let frame = cfg.frame()?;
    let opts = cfg.variants.iter().map(|&v| cfg.options(v)).collect::<Result<Vec<_>>>()?;
    let work = || (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, &frame, &opts, t)).collect::<Result<Vec<_>>>();
    let trials = match thread_count()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let nv = opts.len();
    let mut rows = Vec::with_capacity(nv * cfg.snr_db.len());
    for (v, o) in opts.iter().enumerate() {
        for (s, &snr) in cfg.snr_db.iter().enumerate() {
            // fixed trial order keeps the sums bit-reproducible
            let (mut e, mut err, mut bits, mut it) = (0.0, 0u64, 0u64, 0usize);
            for cells in &trials {
                let c = &cells[s * nv + v];
                e += c.nmse;
                err += c.bit_errors;
                bits += c.bits;
                it += c.iters;
            }
            let n = cfg.trials as f64;
            rows.push(MetricsRow {
                scheme: cfg.scheme.name().to_string(),
                variant: o.variant.name().to_string(),
                snr_db: snr,
                nmse: e / n,
                nmse_db: to_db(e / n),
                ber: if bits == 0 { 0.0 } else { err as f64 / bits as f64 },
                avg_iters: it as f64 / n,
                trials: cfg.trials,
                seed: cfg.seed,
            });
        }
    }
    Ok(rows)
}
