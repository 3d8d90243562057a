//! Flexible FBMC waveform: prototype filters, synthesis/analysis filter
//! banks and the self-interference weights of the transmultiplexer.

mod filterbank;
mod interference;
mod prototype;

pub use filterbank::{analyze, synthesize};
pub use interference::{
    interference_pattern, interference_weight, interference_weight_with, InterferenceTable,
    Pattern,
};
pub use prototype::{make_cp_ofdm_prototypes, phydyas_prototype, LengthParity};

use std::f64::consts::PI;

use crate::linalg::{cis, j_pow};
use crate::{Error, Result, C64};

/// Phase rotation applied to the input symbols, `x = d·exp(jφ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRule {
    /// `φ_{m,n} = (m+n)π/2`, real PAM inputs.
    Oqam,
    /// `φ_{m,n} = -(2π/M)·m·(n+1)·M_cp`; represents CP insertion.
    CpOfdm { cp_len: usize },
    None,
}

/// All parameters of one flexible-FBMC instance.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveformSpec {
    /// Active subcarriers `M` (even).
    pub m: usize,
    /// Symbols per frame `N`.
    pub n_symbols: usize,
    /// Subcarrier period `P` in samples, `P >= M`.
    pub p: usize,
    /// Symbol period `M_ss` in samples.
    pub m_ss: usize,
    pub tx_prototype: Vec<f64>,
    pub rx_prototype: Vec<f64>,
    pub phase_rule: PhaseRule,
}

const ENERGY_TOL: f64 = 1e-12;

impl WaveformSpec {
    /// Validating constructor.
    pub fn new(
        m: usize,
        n_symbols: usize,
        p: usize,
        m_ss: usize,
        tx_prototype: Vec<f64>,
        rx_prototype: Vec<f64>,
        phase_rule: PhaseRule,
    ) -> Result<Self> {
        let spec = Self { m, n_symbols, p, m_ss, tx_prototype, rx_prototype, phase_rule };
        spec.validate()?;
        Ok(spec)
    }

    /// FBMC/OQAM with a PHYDYAS prototype of overlapping factor `k`.
    pub fn oqam(m: usize, n_symbols: usize, k: usize) -> Result<Self> {
        Self::oqam_with_parity(m, n_symbols, k, LengthParity::Odd)
    }

    pub fn oqam_with_parity(
        m: usize,
        n_symbols: usize,
        k: usize,
        parity: LengthParity,
    ) -> Result<Self> {
        let g = phydyas_prototype(m, k, parity)?;
        Self::new(m, n_symbols, m, m / 2, g.clone(), g, PhaseRule::Oqam)
    }

    /// CP-OFDM with a cyclic prefix of `cp_len` samples.
    pub fn cp_ofdm(m: usize, cp_len: usize, n_symbols: usize) -> Result<Self> {
        let (g, gt) = make_cp_ofdm_prototypes(m, cp_len);
        Self::new(m, n_symbols, m, m + cp_len, g, gt, PhaseRule::CpOfdm { cp_len })
    }

    /// FMT-style scheme: `P = M_ss = p >= M`, PHYDYAS prototype designed on
    /// `P`, no phase rotation. `P - M` subcarriers stay virtual.
    pub fn fmt(m: usize, p: usize, n_symbols: usize, k: usize) -> Result<Self> {
        let g = phydyas_prototype(p, k, LengthParity::Odd)?;
        Self::new(m, n_symbols, p, p, g.clone(), g, PhaseRule::None)
    }

    fn validate(&self) -> Result<()> {
        let cfg = |s: String| Err(Error::Config(s));
        if self.m == 0 || self.m % 2 != 0 {
            return cfg(format!("M must be even and positive, got {}", self.m));
        }
        if self.n_symbols == 0 {
            return cfg("N must be positive".into());
        }
        if self.p < self.m {
            return cfg(format!("P = {} must be >= M = {}", self.p, self.m));
        }
        if self.m_ss == 0 {
            return cfg("M_ss must be positive".into());
        }
        if self.tx_prototype.is_empty() || self.tx_prototype.len() != self.rx_prototype.len() {
            return cfg("tx/rx prototypes must be non-empty and of equal length".into());
        }
        match self.phase_rule {
            PhaseRule::Oqam => {
                if self.p != self.m || self.m_ss * 2 != self.m {
                    return cfg("OQAM needs P = M and M_ss = M/2".into());
                }
                if self.m % 4 != 0 {
                    return cfg("OQAM needs M divisible by 4".into());
                }
            }
            PhaseRule::CpOfdm { cp_len } => {
                if self.p != self.m || self.m_ss != self.m + cp_len {
                    return cfg("CP-OFDM needs P = M and M_ss = M + M_cp".into());
                }
            }
            PhaseRule::None => {}
        }
        if !matches!(self.phase_rule, PhaseRule::CpOfdm { .. }) {
            let e: f64 = self.tx_prototype.iter().map(|g| g * g).sum();
            if (e - 1.0).abs() > ENERGY_TOL {
                return cfg(format!("tx prototype energy {e} is not 1"));
            }
        }
        Ok(())
    }

    pub fn prototype_len(&self) -> usize {
        self.tx_prototype.len()
    }

    /// Frame length `L = L_g + (N-1)·M_ss`.
    pub fn frame_len(&self) -> usize {
        self.prototype_len() + (self.n_symbols - 1) * self.m_ss
    }

    /// Oversampling factor `o = P/M`.
    pub fn oversampling(&self) -> f64 {
        self.p as f64 / self.m as f64
    }

    /// `ε = exp(j2π·M_ss/P)`.
    pub fn epsilon(&self) -> C64 {
        self.epsilon_pow(1)
    }

    /// `ε^k`, reduced modulo `P` in integer arithmetic before the
    /// exponential so it stays exactly unit-modulus.
    pub fn epsilon_pow(&self, k: i64) -> C64 {
        let p = self.p as i64;
        let e = (k * self.m_ss as i64).rem_euclid(p);
        match (4 * e) % p {
            0 => j_pow(4 * e / p),
            _ => cis(2.0 * PI * e as f64 / p as f64),
        }
    }

    /// `exp(jφ_{m,n})`.
    pub fn phase(&self, m: usize, n: usize) -> C64 {
        match self.phase_rule {
            PhaseRule::Oqam => j_pow((m + n) as i64),
            PhaseRule::CpOfdm { cp_len } => {
                let mm = self.m as i64;
                let e = (m as i64 * (n as i64 + 1) * cp_len as i64).rem_euclid(mm);
                cis(-2.0 * PI * e as f64 / mm as f64)
            }
            PhaseRule::None => C64::new(1.0, 0.0),
        }
    }

    /// Whether the real-valued OQAM symbol algebra applies.
    pub fn is_oqam(&self) -> bool {
        matches!(self.phase_rule, PhaseRule::Oqam)
    }

    /// Whether adjacent subcarriers wrap around (`P = M`).
    pub fn wraps_in_frequency(&self) -> bool {
        self.p == self.m
    }

    /// Orthogonal rectangular CP-OFDM pair: `P = M`, `L_g = M_ss`, flat `g`
    /// of amplitude `1/√M` and `g̃` equal to `g` after the guard interval.
    pub fn is_rectangular_cp_ofdm(&self) -> bool {
        let PhaseRule::CpOfdm { cp_len } = self.phase_rule else {
            return false;
        };
        let (g, gt) = make_cp_ofdm_prototypes(self.m, cp_len);
        self.tx_prototype == g && self.rx_prototype == gt
    }

    /// Average transmit power per sample for i.i.d. symbols of power
    /// `symbol_power` on every active subcarrier.
    pub fn signal_power(&self, symbol_power: f64) -> f64 {
        let eg: f64 = self.tx_prototype.iter().map(|g| g * g).sum();
        self.m as f64 * symbol_power * eg / self.m_ss as f64
    }
}
