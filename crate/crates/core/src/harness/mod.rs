//! Campaign configuration, metrics and the Monte Carlo runner.

mod campaign;
mod config;
mod metrics;

pub use campaign::{draw_trial, noise_variance, run_campaign, run_trial, trial_rng, TrialCell, TrialDraw, THREADS_ENV};
pub use config::{CampaignConfig, Scheme};
pub use metrics::{ber, csv_string, nmse, read_csv, to_db, write_csv, MetricsRow, CSV_HEADER};
