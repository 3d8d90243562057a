//! Flexible multicarrier physical-layer simulator with tensor-based
//! semi-blind joint channel estimation and data detection.
//!
//! The crate is organised bottom-up:
//!
//! * [`waveform`]: prototype filters, synthesis/analysis filter banks and the
//!   self-interference weights of the flexible FBMC transmultiplexer.
//! * [`channel`]: multipath Rayleigh channels, frequency responses and the
//!   time-domain propagation with CFO and AWGN.
//! * [`txmodel`]: symbol mapping, virtual symbols, the `M x N x N_R` received
//!   tensor and its unfoldings, and the two simulation backends.
//! * [`receivers`]: training, KRF, ALS (plain and informed), ILSP/ILSE, EGC,
//!   scaling resolution and detection.
//! * [`noisecov`]: filter-bank noise covariance structure, its block
//!   circulant factorization and the colored-noise weighted estimators.
//! * [`harness`]: configuration, metrics and the Monte Carlo campaign runner.

pub mod channel;
pub mod constellation;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod noisecov;
pub mod receivers;
pub mod txmodel;
pub mod waveform;

pub use error::{Error, Result};

/// Complex sample type used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix (column-major).
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;
