use std::f64::consts::PI;

use super::WaveformSpec;
use crate::linalg::cis;
use crate::{Error, Result, C64};

/// 3×3 weights around an FT point, indexed `[u + 1][v + 1]` with `u` the
/// subcarrier offset and `v` the symbol offset.
pub type Pattern = [[C64; 3]; 3];

fn unit_root(k: i64, p: usize) -> C64 {
    let p = p as i64;
    let e = k.rem_euclid(p);
    cis(2.0 * PI * e as f64 / p as f64)
}

/// Direct summation of the interference weight for arbitrary prototypes:
/// `ε^{uq} Σ_{l=l0}^{l1} g(l - v·M_ss)·g̃(l)·exp(j2πul/P)`.
pub fn interference_weight_with(
    u: i64,
    v: i64,
    q: i64,
    g: &[f64],
    gt: &[f64],
    p: usize,
    m_ss: usize,
) -> C64 {
    let lg = g.len() as i64;
    let shift = v * m_ss as i64;
    let l0 = shift.max(0);
    let l1 = (lg - 1).min(lg - 1 + shift);
    let mut acc = C64::new(0.0, 0.0);
    for l in l0..=l1 {
        let w = g[(l - shift) as usize] * gt[l as usize];
        if w != 0.0 {
            acc += unit_root(u * l, p) * w;
        }
    }
    unit_root(u * q * m_ss as i64, p) * acc
}

/// Interference weight `I_{u,v}` at symbol time `q` for `spec`, by direct
/// summation.
pub fn interference_weight(u: i64, v: i64, q: i64, spec: &WaveformSpec) -> C64 {
    interference_weight_with(u, v, q, &spec.tx_prototype, &spec.rx_prototype, spec.p, spec.m_ss)
}

/// `Σ_l r(l)·exp(j2πl/P)` for a real sequence that is symmetric about the
/// centre of its nonzero support, folded into a cosine sum. An even-length
/// support has no centre sample.
fn symmetric_sum(r: &[f64], p: usize) -> Result<C64> {
    let Some(a) = r.iter().position(|&x| x != 0.0) else {
        return Ok(C64::new(0.0, 0.0));
    };
    let b = r.iter().rposition(|&x| x != 0.0).unwrap_or(a);
    let scale = r[a..=b].iter().fold(0.0f64, |s, x| s.max(x.abs()));
    for i in 0..=(b - a) / 2 {
        if (r[a + i] - r[b - i]).abs() > 1e-12 * scale {
            return Err(Error::Precondition(
                "closed-form weights need a symmetric prototype product".into(),
            ));
        }
    }
    let w = 2.0 * PI / p as f64;
    let twice_c = (a + b) as i64;
    let mut braces = 0.0;
    if twice_c % 2 == 0 {
        let c = (a + b) / 2;
        braces += r[c];
        for (l, x) in r.iter().enumerate().take(c).skip(a) {
            braces += 2.0 * x * (w * (c - l) as f64).cos();
        }
    } else {
        let half = (a + b + 1) / 2;
        for (l, x) in r.iter().enumerate().take(half).skip(a) {
            let d = (twice_c - 2 * l as i64) as f64 / 2.0;
            braces += 2.0 * x * (w * d).cos();
        }
    }
    // exp(jω·c) with c = (a + b)/2
    let lead = cis(PI * twice_c.rem_euclid(2 * p as i64) as f64 / p as f64);
    Ok(lead * braces)
}

/// The quantities defining the 3×3 pattern: `ε`, `B_0`, `Γ`, `Δ_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceTable {
    pub epsilon: C64,
    pub b0: C64,
    pub gamma: f64,
    pub delta0: C64,
    p: usize,
    m_ss: usize,
}

impl InterferenceTable {
    /// Closed-form table for `spec`.
    pub fn new(spec: &WaveformSpec) -> Result<Self> {
        let mut t =
            Self::from_prototypes(&spec.tx_prototype, &spec.rx_prototype, spec.p, spec.m_ss)?;
        if spec.is_rectangular_cp_ofdm() {
            t.b0 = C64::new(0.0, 0.0);
            t.delta0 = C64::new(0.0, 0.0);
            t.gamma = 0.0;
        }
        Ok(t)
    }

    /// Closed-form table for a prototype pair. The `v = +1` column is
    /// obtained from the `v = -1` one, which needs
    /// `g(l)·g̃(l + M_ss) = g(l + M_ss)·g̃(l)` for all `l`.
    pub fn from_prototypes(g: &[f64], gt: &[f64], p: usize, m_ss: usize) -> Result<Self> {
        if g.len() != gt.len() || g.is_empty() {
            return Err(Error::Dimension("prototype lengths differ".into()));
        }
        let lg = g.len();
        let r0: Vec<f64> = g.iter().zip(gt).map(|(a, b)| a * b).collect();
        let rs: Vec<f64> = (0..lg.saturating_sub(m_ss)).map(|l| g[l + m_ss] * gt[l]).collect();
        let scale = r0.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        for l in 0..lg.saturating_sub(m_ss) {
            if (g[l] * gt[l + m_ss] - rs[l]).abs() > 1e-12 * scale {
                return Err(Error::Precondition(
                    "closed-form weights need g(l)g̃(l+M_ss) = g(l+M_ss)g̃(l)".into(),
                ));
            }
        }
        let eps_e = (m_ss % p) as i64;
        let epsilon = match (4 * eps_e) % p as i64 {
            0 => crate::linalg::j_pow(4 * eps_e / p as i64),
            _ => unit_root(eps_e, p),
        };
        Ok(Self {
            epsilon,
            b0: symmetric_sum(&r0, p)?,
            gamma: rs.iter().sum(),
            delta0: symmetric_sum(&rs, p)?,
            p,
            m_ss,
        })
    }

    /// `ε^q`, with the exponent reduced modulo `P` first.
    pub fn epsilon_pow(&self, q: i64) -> C64 {
        let e = (q * self.m_ss as i64).rem_euclid(self.p as i64);
        let p = self.p as i64;
        match (4 * e) % p {
            0 => crate::linalg::j_pow(4 * e / p),
            _ => unit_root(e, self.p),
        }
    }

    pub fn b(&self, q: i64) -> C64 {
        self.epsilon_pow(q) * self.b0
    }

    pub fn delta(&self, q: i64) -> C64 {
        self.epsilon_pow(q) * self.delta0
    }

    /// The 3×3 weights at symbol time `q`.
    pub fn pattern_at(&self, q: i64) -> Pattern {
        let b = self.b(q);
        let d = self.delta(q);
        let d1 = self.delta(q + 1);
        let g = C64::new(self.gamma, 0.0);
        let one = C64::new(1.0, 0.0);
        [
            [d.conj(), b.conj(), d1.conj()],
            [g, one, g],
            [d, b, d1],
        ]
    }

    /// `I_{u,v}` at time `q` within the 3×3 neighbourhood, zero outside.
    pub fn weight(&self, u: i64, v: i64, q: i64) -> C64 {
        if u.abs() > 1 || v.abs() > 1 {
            return C64::new(0.0, 0.0);
        }
        self.pattern_at(q)[(u + 1) as usize][(v + 1) as usize]
    }

    /// Whether every off-centre weight is exactly zero.
    pub fn is_orthogonal(&self) -> bool {
        self.b0 == C64::new(0.0, 0.0) && self.delta0 == C64::new(0.0, 0.0) && self.gamma == 0.0
    }
}

/// Closed-form 3×3 pattern at time `q`.
pub fn interference_pattern(q: i64, spec: &WaveformSpec) -> Result<Pattern> {
    Ok(InterferenceTable::new(spec)?.pattern_at(q))
}
