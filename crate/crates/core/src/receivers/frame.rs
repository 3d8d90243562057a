use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constellation::{Constellation, Pam};
use crate::linalg::cis;
use crate::txmodel::{derotate, oqam_map, rotate, virtualize, virtualize_with};
use crate::waveform::{InterferenceTable, PhaseRule, WaveformSpec};
use crate::{CMat, Error, Result, C64};

/// Candidate ±1 subcarrier patterns for the OQAM pilot column (period 4).
const IAM_PATTERNS: [[f64; 4]; 3] = [[1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0], [1.0; 4]];

/// Fixed seed for the CP-OFDM pilot sequence.
const PILOT_SEED: u64 = 0x5eed_0f_d1a7;

/// Known leading columns of every transmit frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Preamble {
    /// Input symbols of the preamble columns, per transmit antenna (`M × n_pre`).
    pub d: Vec<CMat>,
    /// Columns whose virtual symbols do not depend on the data.
    pub pilot_cols: Vec<usize>,
    /// Known virtual symbols (`M × n_pre`) per antenna; meaningful at `pilot_cols`.
    pub c: Vec<CMat>,
}

impl Preamble {
    pub fn len(&self) -> usize {
        self.d[0].ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `n_t` columns of pseudo-random unit-modulus QPSK pilots with DFT
    /// covers across antennas.
    pub fn cp_ofdm(spec: &WaveformSpec, n_t: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(PILOT_SEED);
        let base: Vec<C64> = (0..spec.m)
            .map(|_| C64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * (2 * rng.random_range(0..4) + 1) as f64))
            .collect();
        let d: Vec<CMat> = (0..n_t)
            .map(|t| {
                CMat::from_fn(spec.m, n_t, |m, k| {
                    let cover = cis(-2.0 * std::f64::consts::PI * ((t * k) % n_t) as f64 / n_t as f64);
                    base[m] * cover
                })
            })
            .collect();
        let c = d.iter().map(|dt| Self::rotate_prefix(dt, spec)).collect();
        Self { d, pilot_cols: (0..n_t).collect(), c }
    }

    /// `[0, P_1, 0, P_2, 0, …, P_{N_T}, 0]` with real ±1 pilots; antenna
    /// `t` is active only in column `2t+1`. The subcarrier pattern giving
    /// the strongest virtual pilots is used. Every column but the last is
    /// data-free after virtualization.
    pub fn oqam(spec: &WaveformSpec, n_t: usize) -> Result<Self> {
        let table = InterferenceTable::new(spec)?;
        let n_pre = 2 * n_t + 1;
        let mut best: Option<(f64, [f64; 4])> = None;
        for pat in IAM_PATTERNS {
            let d = Self::oqam_columns(spec.m, n_pre, 0, &pat);
            let c = virtualize_with(&oqam_map(&d.map(|z| z.re)), &table, spec.wraps_in_frequency());
            let min = (0..spec.m).map(|m| c[(m, 1)].norm()).fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(b, _)| min > b) {
                best = Some((min, pat));
            }
        }
        let pat = best.map(|(_, p)| p).unwrap_or(IAM_PATTERNS[0]);
        let d: Vec<CMat> = (0..n_t).map(|t| Self::oqam_columns(spec.m, n_pre, t, &pat)).collect();
        let c = d
            .iter()
            .map(|dt| virtualize_with(&oqam_map(&dt.map(|z| z.re)), &table, spec.wraps_in_frequency()))
            .collect();
        Ok(Self { d, pilot_cols: (0..2 * n_t).collect(), c })
    }

    fn oqam_columns(m: usize, n_pre: usize, t: usize, pat: &[f64; 4]) -> CMat {
        CMat::from_fn(m, n_pre, |k, col| {
            if col == 2 * t + 1 {
                C64::new(pat[k % 4], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    fn rotate_prefix(d: &CMat, spec: &WaveformSpec) -> CMat {
        CMat::from_fn(d.nrows(), d.ncols(), |m, n| d[(m, n)] * spec.phase(m, n))
    }
}

/// Everything a receiver needs to know about the transmitted frame
/// structure: waveform, antennas, constellation and preamble.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFormat {
    pub spec: WaveformSpec,
    pub n_t: usize,
    pub constellation: Constellation,
    pub preamble: Preamble,
    table: InterferenceTable,
    pam: Pam,
}

impl FrameFormat {
    pub fn new(spec: WaveformSpec, n_t: usize, constellation: Constellation) -> Result<Self> {
        if n_t == 0 {
            return Err(Error::Config("N_T must be at least 1".into()));
        }
        let preamble = match spec.phase_rule {
            PhaseRule::Oqam => Preamble::oqam(&spec, n_t)?,
            _ => Preamble::cp_ofdm(&spec, n_t),
        };
        if preamble.len() >= spec.n_symbols {
            return Err(Error::Config(format!(
                "frame of {} symbols leaves no room after a {}-column preamble",
                spec.n_symbols,
                preamble.len()
            )));
        }
        let table = InterferenceTable::new(&spec)?;
        let pam = constellation.pam();
        Ok(Self { spec, n_t, constellation, preamble, table, pam })
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn n(&self) -> usize {
        self.spec.n_symbols
    }

    pub fn table(&self) -> &InterferenceTable {
        &self.table
    }

    /// First data column.
    pub fn data_start(&self) -> usize {
        self.preamble.len()
    }

    /// Whether hard decisions can be mapped back to virtual symbols exactly.
    pub fn invertible(&self) -> bool {
        !matches!(self.spec.phase_rule, PhaseRule::None) || self.table.is_orthogonal()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        if self.spec.is_oqam() {
            self.pam.bits()
        } else {
            self.constellation.bits_per_symbol()
        }
    }

    /// Mean data-symbol power `E{|d|²}`.
    pub fn symbol_power(&self) -> f64 {
        if self.spec.is_oqam() {
            self.pam.levels().iter().map(|v| v * v).sum::<f64>() / self.pam.len() as f64
        } else {
            let pts = self.constellation.points();
            pts.iter().map(|z| z.norm_sqr()).sum::<f64>() / pts.len() as f64
        }
    }

    /// Random input frames (preamble followed by data), one per antenna.
    pub fn random_symbols<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<CMat> {
        let start = self.data_start();
        (0..self.n_t)
            .map(|t| {
                CMat::from_fn(self.m(), self.n(), |m, n| {
                    if n < start {
                        self.preamble.d[t][(m, n)]
                    } else if self.spec.is_oqam() {
                        C64::new(self.pam.value(rng.random_range(0..self.pam.len())), 0.0)
                    } else {
                        self.constellation.point(rng.random_range(0..self.constellation.order()))
                    }
                })
            })
            .collect()
    }

    /// Phase-rotated symbols `X` from input symbols `D`.
    pub fn rotate(&self, d: &CMat) -> CMat {
        rotate(d, &self.spec)
    }

    /// Virtual symbols `C` from input symbols `D`.
    pub fn remap(&self, d: &CMat) -> CMat {
        let x = self.rotate(d);
        if self.table.is_orthogonal() {
            x
        } else {
            virtualize_with(&x, &self.table, self.spec.wraps_in_frequency())
        }
    }

    /// Soft input-symbol estimates from virtual symbols: derotation, and
    /// the real part for OQAM.
    pub fn demap(&self, c: &CMat) -> CMat {
        let z = derotate(c, &self.spec);
        if self.spec.is_oqam() {
            z.map(|v| C64::new(v.re, 0.0))
        } else {
            z
        }
    }

    /// Nearest alphabet point of one soft value.
    pub fn decide_one(&self, z: C64) -> C64 {
        if self.spec.is_oqam() {
            C64::new(self.pam.value(self.pam.decide(z.re)), 0.0)
        } else {
            let l = self.pam.len();
            let i = self.pam.decide(z.re) * l + self.pam.decide(z.im);
            C64::new(self.pam.value(i / l), self.pam.value(i % l))
        }
    }

    /// Hard decisions on a soft frame with the preamble columns forced to
    /// their known values.
    pub fn decide(&self, soft: &CMat, t: usize) -> CMat {
        let start = self.data_start();
        CMat::from_fn(soft.nrows(), soft.ncols(), |m, n| {
            if n < start {
                self.preamble.d[t][(m, n)]
            } else {
                self.decide_one(soft[(m, n)])
            }
        })
    }

    /// Bit label of an alphabet point.
    pub fn label(&self, z: C64) -> u32 {
        if self.spec.is_oqam() {
            self.pam.label(self.pam.decide(z.re))
        } else {
            self.constellation.label(self.constellation.decide(z))
        }
    }

    /// Bit errors and bits compared over the data columns.
    pub fn bit_errors(&self, d: &[CMat], d_hat: &[CMat]) -> (u64, u64) {
        let start = self.data_start();
        let mut errors = 0u64;
        let mut bits = 0u64;
        for (a, b) in d.iter().zip(d_hat) {
            for n in start..self.n() {
                for m in 0..self.m() {
                    errors += u64::from((self.label(a[(m, n)]) ^ self.label(b[(m, n)])).count_ones());
                    bits += u64::from(self.bits_per_symbol());
                }
            }
        }
        (errors, bits)
    }

    /// Virtual symbols of a whole frame, via the waveform's own virtualize.
    pub fn virtual_symbols(&self, d: &CMat) -> Result<CMat> {
        virtualize(&self.rotate(d), &self.spec)
    }
}
