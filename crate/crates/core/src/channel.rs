//! Multipath Rayleigh channels: power-delay profiles, tap draws, frequency
//! responses and time-domain propagation with CFO and AWGN.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::cis;
use crate::{CVec, Error, Result, C64};

const PEDA: &str = include_str!("../data/peda.pdp");
const VEHB: &str = include_str!("../data/vehb.pdp");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdpName {
    PedA,
    VehB,
    Custom(String),
}

/// Tap delays in samples and normalized linear powers.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    pub name: PdpName,
    pub delays: Vec<usize>,
    pub powers: Vec<f64>,
}

impl PowerDelayProfile {
    pub fn ped_a() -> Self {
        Self::parse(PEDA, PdpName::PedA).expect("bundled PedA profile")
    }

    pub fn veh_b() -> Self {
        Self::parse(VEHB, PdpName::VehB).expect("bundled VehB profile")
    }

    /// Single unit tap at delay 0 (flat Rayleigh fading).
    pub fn flat() -> Self {
        Self { name: PdpName::Custom("flat".into()), delays: vec![0], powers: vec![1.0] }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "peda" | "ped_a" => Ok(Self::ped_a()),
            "vehb" | "veh_b" => Ok(Self::veh_b()),
            "flat" => Ok(Self::flat()),
            other => Err(Error::Config(format!("unknown power-delay profile '{other}'"))),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, PdpName::Custom(path.display().to_string()))
    }

    /// Parses lines of `delay_samples power_linear`; `#` starts a comment.
    /// Powers are normalized to sum to one.
    pub fn parse(text: &str, name: PdpName) -> Result<Self> {
        let mut delays = Vec::new();
        let mut powers = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::ConfigLine { line: i + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            let d: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("expected an integer delay"))?;
            let p: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("expected a linear power"))?;
            if it.next().is_some() {
                return Err(bad("trailing fields"));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(bad("power must be finite and non-negative"));
            }
            delays.push(d);
            powers.push(p);
        }
        let total: f64 = powers.iter().sum();
        if delays.is_empty() || total <= 0.0 {
            return Err(Error::Config("power-delay profile carries no power".into()));
        }
        powers.iter_mut().for_each(|p| *p /= total);
        Ok(Self { name, delays, powers })
    }

    /// Channel length `L_h` (largest delay plus one).
    pub fn len(&self) -> usize {
        self.delays.iter().max().map_or(0, |d| d + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    /// One realization: independent circularly-symmetric Gaussian taps.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        let mut h = vec![C64::new(0.0, 0.0); self.len()];
        for (&d, &p) in self.delays.iter().zip(&self.powers) {
            h[d] += complex_gaussian(p, rng);
        }
        h
    }
}

/// One draw of `CN(0, var)`.
pub fn complex_gaussian<R: Rng + ?Sized>(var: f64, rng: &mut R) -> C64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(s * re, s * im)
}

/// `len` i.i.d. `CN(0, var)` samples.
pub fn awgn<R: Rng + ?Sized>(len: usize, var: f64, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(var, rng)).collect()
}

/// `H_m = Σ_l h(l)·exp(-j2πlm/P)` for `m = 0..M-1`.
pub fn channel_frequency_response(taps: &[C64], p: usize, m: usize) -> CVec {
    CVec::from_fn(m, |k, _| {
        taps.iter()
            .enumerate()
            .map(|(l, h)| h * cis(-2.0 * PI * ((l * k) % p) as f64 / p as f64))
            .sum()
    })
}

/// Noise-free channel output `exp(j2πνl/P)·(h * s)(l)`, full convolution
/// length.
pub fn propagate(s: &[C64], taps: &[C64], nu: f64, p: usize) -> Vec<C64> {
    if s.is_empty() || taps.is_empty() {
        return Vec::new();
    }
    let mut r = vec![C64::new(0.0, 0.0); s.len() + taps.len() - 1];
    for (i, x) in s.iter().enumerate() {
        for (l, h) in taps.iter().enumerate() {
            r[i + l] += x * h;
        }
    }
    if nu != 0.0 {
        for (l, z) in r.iter_mut().enumerate() {
            *z *= cis(2.0 * PI * nu * l as f64 / p as f64);
        }
    }
    r
}

/// [`propagate`] plus white noise of variance `sigma2`.
pub fn propagate_noisy<R: Rng + ?Sized>(
    s: &[C64],
    taps: &[C64],
    nu: f64,
    sigma2: f64,
    p: usize,
    rng: &mut R,
) -> Vec<C64> {
    let mut r = propagate(s, taps, nu, p);
    for z in r.iter_mut() {
        *z += complex_gaussian(sigma2, rng);
    }
    r
}

/// Taps and frequency responses for every (receive, transmit) pair, the
/// shared CFO and the noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// `taps[r][t]`
    pub taps: Vec<Vec<Vec<C64>>>,
    /// `cfr[r][t]`, length `M`
    pub cfr: Vec<Vec<CVec>>,
    pub nu: f64,
    pub sigma2: f64,
}

impl ChannelSet {
    pub fn from_taps(taps: Vec<Vec<Vec<C64>>>, p: usize, m: usize, nu: f64, sigma2: f64) -> Self {
        let cfr = taps
            .iter()
            .map(|row| row.iter().map(|h| channel_frequency_response(h, p, m)).collect())
            .collect();
        Self { taps, cfr, nu, sigma2 }
    }

    /// Independent draws for all `n_r × n_t` links.
    #[allow(clippy::too_many_arguments)]
    pub fn draw<R: Rng + ?Sized>(
        pdp: &PowerDelayProfile,
        n_r: usize,
        n_t: usize,
        p: usize,
        m: usize,
        nu: f64,
        sigma2: f64,
        rng: &mut R,
    ) -> Self {
        let taps = (0..n_r).map(|_| (0..n_t).map(|_| pdp.draw(rng)).collect()).collect();
        Self::from_taps(taps, p, m, nu, sigma2)
    }

    pub fn n_r(&self) -> usize {
        self.taps.len()
    }

    pub fn n_t(&self) -> usize {
        self.taps.first().map_or(0, Vec::len)
    }

    /// The `N_R × N_T·M` matrix whose row `r` stacks `H^{(r,1)}, …, H^{(r,N_T)}`.
    pub fn h_matrix(&self) -> crate::CMat {
        let n_r = self.n_r();
        let n_t = self.n_t();
        let m = self.cfr.first().and_then(|r| r.first()).map_or(0, |h| h.len());
        crate::CMat::from_fn(n_r, n_t * m, |r, k| self.cfr[r][k / m][k % m])
    }
}
