mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flexmc_core::harness::{csv_string, draw_trial, noise_variance, run_campaign, run_trial, CampaignConfig};
use flexmc_core::waveform::InterferenceTable;
use flexmc_core::{Error, Result, C64};

#[derive(Parser)]
#[command(name = "flexmc", version, about = "Flexible multicarrier simulator with tensor-based joint channel estimation and detection")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the 3×3 interference pattern of a waveform.
    Weights {
        /// key = value file with the waveform keys of a campaign config
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run one trial and print per-receiver results.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        trial: usize,
    },
    /// Run a full campaign and write the CSV.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        /// CSV path; defaults to `output` from the config
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write NMSE and BER plots next to the CSV
        #[arg(long)]
        plot: bool,
    },
}

fn fmt_c(z: C64) -> String {
    format!("{:+.6}{:+.6}j", z.re, z.im)
}

fn weights(path: &Path) -> Result<()> {
    let cfg = CampaignConfig::from_file(path)?;
    let spec = cfg.spec()?;
    let t = InterferenceTable::new(&spec)?;
    println!(
        "scheme {}  M = {}  P = {}  M_ss = {}  L_g = {}",
        cfg.scheme.name(),
        spec.m,
        spec.p,
        spec.m_ss,
        spec.prototype_len()
    );
    println!("B0 = {}  Gamma = {:+.6}  Delta0 = {}  eps = {}", fmt_c(t.b0), t.gamma, fmt_c(t.delta0), fmt_c(t.epsilon));
    for q in 0..2 {
        println!("q = {q}  (rows u = -1, 0, +1; columns v = -1, 0, +1)");
        for row in t.pattern_at(q) {
            println!("  {}", row.iter().map(|z| format!("{:>24}", fmt_c(*z))).collect::<String>());
        }
    }
    Ok(())
}

fn simulate(path: &Path, trial: usize) -> Result<()> {
    let cfg = CampaignConfig::from_file(path)?;
    let frame = cfg.frame()?;
    let draw = draw_trial(&cfg, &frame, trial)?;
    let (m, n, nr) = draw.clean.dims();
    println!(
        "scheme {}  backend {:?}  trial {trial}  seed {}  tensor {m}x{n}x{nr}  N_T {}  ||H||^2 {:.4}",
        cfg.scheme.name(),
        cfg.backend,
        cfg.seed,
        cfg.n_t,
        draw.ch.h_matrix().norm_squared()
    );
    let opts = cfg.variants.iter().map(|&v| cfg.options(v)).collect::<Result<Vec<_>>>()?;
    let cells = run_trial(&cfg, &frame, &opts, trial)?;
    println!("{:>8} {:>14} {:>12} {:>10} {:>6} {:>7} {:>10}", "snr_db", "variant", "nmse_db", "ber", "iters", "failed", "sigma2");
    for (s, &snr) in cfg.snr_db.iter().enumerate() {
        for (v, o) in opts.iter().enumerate() {
            let c = &cells[s * opts.len() + v];
            println!(
                "{:>8} {:>14} {:>12.3} {:>10.4e} {:>6} {:>7} {:>10.3e}",
                snr,
                o.variant.name(),
                10.0 * c.nmse.log10(),
                c.bit_errors as f64 / c.bits.max(1) as f64,
                c.iters,
                c.failed,
                noise_variance(&frame, snr)
            );
        }
    }
    Ok(())
}

fn campaign(path: &Path, out: Option<PathBuf>, with_plot: bool) -> Result<()> {
    let cfg = CampaignConfig::from_file(path)?;
    let out = out
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| Error::Config("no output path: pass --out or set output in the config".into()))?;
    let rows = run_campaign(&cfg)?;
    std::fs::write(&out, csv_string(&rows)?)?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    if with_plot {
        for p in plot::write_plots(&rows, &out)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Weights { spec } => weights(&spec),
        Cmd::Simulate { config, trial } => simulate(&config, trial),
        Cmd::Campaign { config, out, plot } => campaign(&config, out, plot),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
