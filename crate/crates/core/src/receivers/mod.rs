//! Joint channel estimation and detection on the received tensor.
//!
//! Factor layout: `H` is `N_R × (N_T·M)` with column `t·M + m`, `C` is
//! `(N_T·M) × N` with row `t·M + m`. Per subcarrier this gives the
//! bilinear slice `Y_m = H_m·C_m` with `Y_m` of size `N_R × N`.

mod als;
mod egc;
mod frame;
mod ilsp;
mod krf;
mod scaling;
mod training;

pub use als::{
    als_receiver, als_step_c, als_step_c_literal, als_step_h, als_step_h_literal,
    informed_als_receiver, mrc_step_c, mrc_step_h, objective,
};
pub use egc::{egc_equalize, egc_estimate, egc_receiver};
pub use frame::{FrameFormat, Preamble};
pub use ilsp::{ilse_receiver, ilsp_receiver};
pub use krf::krf_receiver;
pub use scaling::{resolve_scaling, Scaling};
pub use training::{random_init, training_init, TrainingEstimate};

use crate::txmodel::{unstack_c, ReceivedTensor};
use crate::{CMat, Error, Result};

/// Receiver algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Krf,
    Als,
    AlsInformed,
    Ilsp,
    Ilse,
    TrainingOnly,
    Egc,
    /// Symbol estimation with the true channel (benchmark).
    Pci,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Self::TrainingOnly,
        Self::Egc,
        Self::Krf,
        Self::Als,
        Self::AlsInformed,
        Self::Ilsp,
        Self::Ilse,
        Self::Pci,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Krf => "krf",
            Self::Als => "als",
            Self::AlsInformed => "als_informed",
            Self::Ilsp => "ilsp",
            Self::Ilse => "ilse",
            Self::TrainingOnly => "train",
            Self::Egc => "egc",
            Self::Pci => "pci",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        match s.as_str() {
            "training_only" | "training" => Some(Self::TrainingOnly),
            "informed_als" | "informed" => Some(Self::AlsInformed),
            _ => Self::ALL.into_iter().find(|v| v.name() == s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverOptions {
    pub max_iters: usize,
    /// Relative objective change below which iterations stop.
    pub tol: f64,
    pub variant: Variant,
}

impl Default for ReceiverOptions {
    fn default() -> Self {
        Self { max_iters: 50, tol: 1e-6, variant: Variant::AlsInformed }
    }
}

impl ReceiverOptions {
    pub fn new(variant: Variant, max_iters: usize, tol: f64) -> Result<Self> {
        if max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {tol}")));
        }
        Ok(Self { max_iters, tol, variant })
    }

    /// Size `Q′ = Q⁹` of the virtual-symbol alphabet for a `Q`-point
    /// constellation, saturating.
    pub fn virtual_alphabet_bound(q: usize) -> u64 {
        (q as u64).saturating_pow(9)
    }
}

/// Output of every receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct JcdEstimate {
    pub h: CMat,
    pub c: CMat,
    /// Detected input symbols per transmit antenna, preamble included.
    pub d: Vec<CMat>,
    pub objective_trace: Vec<f64>,
    pub iters: usize,
    pub converged: bool,
    /// Per-row ambiguity scalars divided out of `C` (and multiplied into `H`).
    pub scale: Vec<crate::C64>,
    /// Rows of `C` whose scale could not be resolved from the preamble.
    pub unresolved: Vec<usize>,
}

/// Hard decisions on a stacked virtual-symbol estimate.
pub fn detect(c: &CMat, frame: &FrameFormat) -> Vec<CMat> {
    unstack_c(c, frame.n_t)
        .iter()
        .enumerate()
        .map(|(t, ct)| frame.decide(&frame.demap(ct), t))
        .collect()
}

/// Symbol detection with a known channel.
pub fn pci_receiver(y: &ReceivedTensor, h_true: &CMat, frame: &FrameFormat) -> Result<JcdEstimate> {
    check_dims(y, frame)?;
    let c = als_step_c(y, h_true, frame.n_t)?;
    let d = detect(&c, frame);
    let f = objective(y, h_true, &c, frame.n_t);
    Ok(JcdEstimate {
        h: h_true.clone(),
        c,
        d,
        objective_trace: vec![f],
        iters: 0,
        converged: true,
        scale: vec![crate::C64::new(1.0, 0.0); frame.n_t * frame.m()],
        unresolved: Vec::new(),
    })
}

/// Runs the variant in `opts` with its default initialization. `h_true` is
/// only used by [`Variant::Pci`].
pub fn run_receiver(
    y: &ReceivedTensor,
    frame: &FrameFormat,
    opts: &ReceiverOptions,
    h_true: Option<&CMat>,
) -> Result<JcdEstimate> {
    check_dims(y, frame)?;
    match opts.variant {
        Variant::Pci => {
            let h = h_true.ok_or_else(|| Error::Config("pci receiver needs the true channel".into()))?;
            pci_receiver(y, h, frame)
        }
        Variant::Krf => krf_receiver(y, frame),
        Variant::TrainingOnly => {
            let init = training_init(y, frame)?;
            let c = als_step_c(y, &init.h, frame.n_t)?;
            let f = objective(y, &init.h, &c, frame.n_t);
            Ok(JcdEstimate {
                d: detect(&c, frame),
                h: init.h,
                c,
                objective_trace: vec![f],
                iters: 0,
                converged: true,
                scale: vec![crate::C64::new(1.0, 0.0); frame.n_t * frame.m()],
                unresolved: Vec::new(),
            })
        }
        Variant::Egc => egc_receiver(y, frame),
        Variant::Als => als_receiver(y, &training_init(y, frame)?.h, opts, frame),
        Variant::AlsInformed => informed_als_receiver(y, &training_init(y, frame)?.h, opts, frame),
        Variant::Ilsp => ilsp_receiver(y, &training_init(y, frame)?.h, opts, frame),
        Variant::Ilse => ilse_receiver(y, &training_init(y, frame)?.h, opts, frame),
    }
}

fn check_dims(y: &ReceivedTensor, frame: &FrameFormat) -> Result<()> {
    let (m, n, _) = y.dims();
    if (m, n) != (frame.m(), frame.n()) {
        return Err(Error::Dimension(format!(
            "tensor is {m}×{n}, frame is {}×{}",
            frame.m(),
            frame.n()
        )));
    }
    Ok(())
}

/// `Y_m` (`N_R × N`) for every subcarrier.
pub(crate) fn y_blocks(y: &ReceivedTensor) -> Vec<CMat> {
    let (m_len, n, nr) = y.dims();
    (0..m_len).map(|m| CMat::from_fn(nr, n, |r, q| y.get(m, q, r))).collect()
}

/// `H_m` (`N_R × N_T`).
pub(crate) fn h_block(h: &CMat, m: usize, n_t: usize) -> CMat {
    let ml = h.ncols() / n_t;
    CMat::from_fn(h.nrows(), n_t, |r, t| h[(r, t * ml + m)])
}

/// `C_m` (`N_T × N`).
pub(crate) fn c_block(c: &CMat, m: usize, n_t: usize) -> CMat {
    let ml = c.nrows() / n_t;
    CMat::from_fn(n_t, c.ncols(), |t, q| c[(t * ml + m, q)])
}

pub(crate) fn set_h_block(h: &mut CMat, m: usize, hm: &CMat) {
    let n_t = hm.ncols();
    let ml = h.ncols() / n_t;
    for t in 0..n_t {
        h.column_mut(t * ml + m).copy_from(&hm.column(t));
    }
}

pub(crate) fn set_c_block(c: &mut CMat, m: usize, cm: &CMat) {
    let n_t = cm.nrows();
    let ml = c.nrows() / n_t;
    for t in 0..n_t {
        c.row_mut(t * ml + m).copy_from(&cm.row(t));
    }
}
