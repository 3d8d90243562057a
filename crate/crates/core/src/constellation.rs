//! Gray-labelled unit-power QAM constellations and their per-dimension PAM
//! alphabets (the latter carry the real OQAM symbols).

use crate::C64;

/// One real dimension of a square QAM constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pam {
    levels: Vec<f64>,
    labels: Vec<u32>,
    bits: u32,
}

impl Pam {
    fn new(levels: Vec<f64>, labels: Vec<u32>, bits: u32) -> Self {
        Self { levels, labels, bits }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.levels[idx]
    }

    pub fn label(&self, idx: usize) -> u32 {
        self.labels[idx]
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Nearest level; an exact midpoint resolves to the smaller index.
    pub fn decide(&self, x: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &l) in self.levels.iter().enumerate() {
            let d = (x - l).abs();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

/// Input constellation. Points are indexed as `i_re * L + i_im` where `L`
/// is the PAM size per dimension, so ties broken per dimension also break
/// toward the smaller overall index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constellation {
    Qpsk,
    Qam16,
}

impl Constellation {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qpsk" | "qam4" => Some(Self::Qpsk),
            "qam16" | "16qam" => Some(Self::Qam16),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Qpsk => "qpsk",
            Self::Qam16 => "qam16",
        }
    }

    /// Constellation order `Q`.
    pub fn order(&self) -> usize {
        let l = self.pam().len();
        l * l
    }

    pub fn bits_per_symbol(&self) -> u32 {
        2 * self.pam().bits()
    }

    /// Per-dimension alphabet, ascending levels, scaled so the full QAM has
    /// unit average power.
    pub fn pam(&self) -> Pam {
        match self {
            Self::Qpsk => {
                let a = std::f64::consts::FRAC_1_SQRT_2;
                Pam::new(vec![-a, a], vec![1, 0], 1)
            }
            Self::Qam16 => {
                let s = 1.0 / 10f64.sqrt();
                Pam::new(
                    vec![-3.0 * s, -s, s, 3.0 * s],
                    vec![0b10, 0b11, 0b01, 0b00],
                    2,
                )
            }
        }
    }

    pub fn point(&self, idx: usize) -> C64 {
        let pam = self.pam();
        let l = pam.len();
        C64::new(pam.value(idx / l), pam.value(idx % l))
    }

    pub fn label(&self, idx: usize) -> u32 {
        let pam = self.pam();
        let l = pam.len();
        (pam.label(idx / l) << pam.bits()) | pam.label(idx % l)
    }

    pub fn points(&self) -> Vec<C64> {
        (0..self.order()).map(|i| self.point(i)).collect()
    }

    pub fn decide(&self, z: C64) -> usize {
        let pam = self.pam();
        pam.decide(z.re) * pam.len() + pam.decide(z.im)
    }
}

/// Hamming distance between two bit labels.
#[inline]
pub fn bit_errors(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}
