use std::path::{Path, PathBuf};

use crate::channel::PowerDelayProfile;
use crate::constellation::Constellation;
use crate::receivers::{FrameFormat, ReceiverOptions, Variant};
use crate::txmodel::{Backend, NoiseKind};
use crate::waveform::{LengthParity, WaveformSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    CpOfdm,
    OqamFbmc,
    Fmt,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CpOfdm => "CP_OFDM",
            Self::OqamFbmc => "OQAM_FBMC",
            Self::Fmt => "FMT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().replace('-', "_").as_str() {
            "CP_OFDM" | "OFDM" => Some(Self::CpOfdm),
            "OQAM_FBMC" | "OQAM" | "FBMC" | "FBMC_OQAM" => Some(Self::OqamFbmc),
            "FMT" => Some(Self::Fmt),
            _ => None,
        }
    }

    /// Frame length matching 53 CP-OFDM symbol durations.
    fn default_symbols(&self) -> usize {
        match self {
            Self::OqamFbmc => 106,
            _ => 53,
        }
    }
}

/// One Monte Carlo campaign: a waveform, a link, an SNR grid and the
/// receivers to compare.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub scheme: Scheme,
    pub m: usize,
    pub symbols: usize,
    pub cp_len: usize,
    pub k: usize,
    pub parity: LengthParity,
    /// FFT size for FMT (`P = M_ss`); ignored by the other schemes.
    pub p: usize,
    pub constellation: Constellation,
    pub n_t: usize,
    pub n_r: usize,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub variants: Vec<Variant>,
    pub backend: Backend,
    pub noise: NoiseKind,
    pub pdp: PowerDelayProfile,
    /// Normalized CFO in subcarrier spacings.
    pub cfo: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::CpOfdm,
            m: 32,
            symbols: 53,
            cp_len: 8,
            k: 4,
            parity: LengthParity::Odd,
            p: 32,
            constellation: Constellation::Qpsk,
            n_t: 1,
            n_r: 2,
            snr_db: (0..=6).map(|i| 5.0 * i as f64).collect(),
            trials: 200,
            variants: vec![Variant::TrainingOnly, Variant::Als, Variant::AlsInformed],
            backend: Backend::Model,
            noise: NoiseKind::White,
            pdp: PowerDelayProfile::ped_a(),
            cfo: 0.0,
            seed: 1,
            output: None,
            max_iters: 50,
            tol: 1e-6,
        }
    }
}

fn parse_snr_grid(v: &str) -> std::result::Result<Vec<f64>, String> {
    let v = v.trim();
    // start:step:stop
    if v.contains(':') {
        let parts: Vec<&str> = v.split(':').collect();
        let [a, s, b] = parts.as_slice() else {
            return Err(format!("range '{v}' must be start:step:stop"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let (a, s, b) = (num(a)?, num(s)?, num(b)?);
        if !(s > 0.0) || b < a || !a.is_finite() || !b.is_finite() {
            return Err(format!("range '{v}' needs a positive step and start ≤ stop"));
        }
        let count = ((b - a) / s + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| a + s * i as f64).collect());
    }
    v.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("'{}': {e}", x.trim())))
        .collect()
}

fn parse_backend(v: &str) -> Option<Backend> {
    match v.trim().to_ascii_lowercase().as_str() {
        "model" => Some(Backend::Model),
        "full" => Some(Backend::Full),
        _ => None,
    }
}

impl CampaignConfig {
    /// Parses `key = value` lines; `#` starts a comment. Keys not given
    /// keep their defaults, and `symbols`, `cp_len` and `p` default from
    /// the scheme and `m`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_base(text, None)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_with_base(&text, path.parent())
    }

    fn parse_with_base(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::default();
        let (mut symbols, mut cp_len, mut p) = (None, None, None);
        let mut pdp_line = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| Error::ConfigLine { line, msg };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got '{content}'")))?;
            let key = key.trim();
            let value = value.trim();
            let uint = || {
                value
                    .parse::<usize>()
                    .map_err(|e| err(format!("{key}: '{value}' is not a non-negative integer ({e})")))
            };
            let float = || value.parse::<f64>().map_err(|e| err(format!("{key}: '{value}' is not a number ({e})")));
            match key {
                "scheme" => {
                    cfg.scheme = Scheme::parse(value)
                        .ok_or_else(|| err(format!("scheme: unknown '{value}' (CP_OFDM, OQAM_FBMC, FMT)")))?
                }
                "m" => cfg.m = uint()?,
                "symbols" | "n" => symbols = Some(uint()?),
                "cp_len" => cp_len = Some(uint()?),
                "k" => cfg.k = uint()?,
                "parity" => {
                    cfg.parity = match value.to_ascii_lowercase().as_str() {
                        "odd" => LengthParity::Odd,
                        "even" => LengthParity::Even,
                        _ => return Err(err(format!("parity: '{value}' is not odd or even"))),
                    }
                }
                "p" => p = Some(uint()?),
                "constellation" => {
                    cfg.constellation = Constellation::parse(value)
                        .ok_or_else(|| err(format!("constellation: unknown '{value}'")))?
                }
                "n_t" => cfg.n_t = uint()?,
                "n_r" => cfg.n_r = uint()?,
                "snr_db" => cfg.snr_db = parse_snr_grid(value).map_err(|m| err(format!("snr_db: {m}")))?,
                "trials" => cfg.trials = uint()?,
                "variants" => {
                    cfg.variants = value
                        .split(',')
                        .filter(|v| !v.trim().is_empty())
                        .map(|v| Variant::parse(v).ok_or_else(|| err(format!("variants: unknown '{}'", v.trim()))))
                        .collect::<Result<_>>()?
                }
                "backend" => {
                    cfg.backend = parse_backend(value)
                        .ok_or_else(|| err(format!("backend: '{value}' is not model or full")))?
                }
                "noise" => {
                    cfg.noise = match value.to_ascii_lowercase().as_str() {
                        "white" => NoiseKind::White,
                        "filtered" | "afb" | "colored" => NoiseKind::Filtered,
                        _ => return Err(err(format!("noise: '{value}' is not white or filtered"))),
                    }
                }
                "pdp" => {
                    cfg.pdp = PowerDelayProfile::by_name(value).map_err(|e| err(e.to_string()))?;
                    pdp_line = None;
                }
                "pdp_file" => pdp_line = Some((line, value.to_string())),
                "cfo" => cfg.cfo = float()?,
                "seed" => {
                    cfg.seed = value.parse().map_err(|e| err(format!("seed: '{value}' ({e})")))?
                }
                "output" => cfg.output = Some(PathBuf::from(value)),
                "max_iters" => cfg.max_iters = uint()?,
                "tol" => cfg.tol = float()?,
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        if let Some((line, file)) = pdp_line {
            let path = match base {
                Some(b) if Path::new(&file).is_relative() => b.join(&file),
                _ => PathBuf::from(&file),
            };
            cfg.pdp = PowerDelayProfile::from_file(&path)
                .map_err(|e| Error::ConfigLine { line, msg: format!("pdp_file: {e}") })?;
        }
        cfg.symbols = symbols.unwrap_or_else(|| cfg.scheme.default_symbols());
        cfg.cp_len = cp_len.unwrap_or(cfg.m / 4);
        cfg.p = p.unwrap_or(cfg.m);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(Error::Config("SNR grid is empty".into()));
        }
        if self.snr_db.iter().any(|s| s.is_nan()) {
            return Err(Error::Config("SNR grid contains NaN".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("no receiver variants".into()));
        }
        if self.n_r == 0 {
            return Err(Error::Config("N_R must be at least 1".into()));
        }
        ReceiverOptions::new(Variant::Als, self.max_iters, self.tol)?;
        self.frame().map(|_| ())
    }

    pub fn spec(&self) -> Result<WaveformSpec> {
        match self.scheme {
            Scheme::CpOfdm => WaveformSpec::cp_ofdm(self.m, self.cp_len, self.symbols),
            Scheme::OqamFbmc => WaveformSpec::oqam_with_parity(self.m, self.symbols, self.k, self.parity),
            Scheme::Fmt => WaveformSpec::fmt(self.m, self.p, self.symbols, self.k),
        }
    }

    pub fn frame(&self) -> Result<FrameFormat> {
        FrameFormat::new(self.spec()?, self.n_t, self.constellation)
    }

    pub fn options(&self, variant: Variant) -> Result<ReceiverOptions> {
        ReceiverOptions::new(variant, self.max_iters, self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_range_and_list() {
        assert_eq!(parse_snr_grid("0:5:30").unwrap(), vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]);
        assert_eq!(parse_snr_grid("3, 7").unwrap(), vec![3.0, 7.0]);
        assert!(parse_snr_grid("0:0:3").is_err());
        assert!(parse_snr_grid("a").is_err());
    }

    #[test]
    fn scheme_dependent_defaults() {
        let c = CampaignConfig::parse("scheme = OQAM_FBMC\nm = 16\n").unwrap();
        assert_eq!((c.symbols, c.cp_len, c.p), (106, 4, 16));
    }
}
