//! Symbol and virtual-symbol algebra, the received tensor with its
//! unfoldings, and the two ways of producing it (per-subcarrier model or
//! full filter-bank transmission).

mod simulate;
mod tensor;

pub use simulate::{
    cfo_vector, noise_free_full, noise_free_model, simulate_received_tensor, unit_noise, Backend,
    NoiseKind,
};
pub use tensor::{gamma, stack_c, unstack_c, ReceivedTensor};

use nalgebra::DMatrix;

use crate::linalg::j_pow;
use crate::waveform::{InterferenceTable, WaveformSpec};
use crate::{CMat, Error, Result, C64};

/// Phase-rotated symbols `x_{m,n} = d_{m,n}·exp(jφ_{m,n})`.
pub fn rotate(d: &CMat, spec: &WaveformSpec) -> CMat {
    CMat::from_fn(d.nrows(), d.ncols(), |m, n| d[(m, n)] * spec.phase(m, n))
}

/// Inverse of [`rotate`].
pub fn derotate(x: &CMat, spec: &WaveformSpec) -> CMat {
    CMat::from_fn(x.nrows(), x.ncols(), |m, n| x[(m, n)] * spec.phase(m, n).conj())
}

/// CP-OFDM symbols to virtual symbols (`C = X`).
pub fn cp_ofdm_map(d: &CMat, spec: &WaveformSpec) -> CMat {
    rotate(d, spec)
}

/// CP-OFDM virtual symbols back to input-symbol estimates (no decision).
pub fn cp_ofdm_demap(c: &CMat, spec: &WaveformSpec) -> CMat {
    derotate(c, spec)
}

/// `D = Re{diag(j_M*)·C·diag(j_N*)}`.
pub fn oqam_demap(c: &CMat) -> DMatrix<f64> {
    DMatrix::from_fn(c.nrows(), c.ncols(), |m, n| (c[(m, n)] * j_pow(-((m + n) as i64))).re)
}

/// `X = diag(j_M)·D·diag(j_N)` for real PAM `D`.
pub fn oqam_map(d: &DMatrix<f64>) -> CMat {
    CMat::from_fn(d.nrows(), d.ncols(), |m, n| j_pow((m + n) as i64) * d[(m, n)])
}

/// Virtual symbols `c_{p,q} = Σ_{u,v} I_{u,v}(q)·x_{p+u,q+v}` over the 3×3
/// neighbourhood. Frequency wraps modulo `M` when `wrap` is set (`P = M`);
/// symbols outside the frame are zero.
pub fn virtualize_with(x: &CMat, table: &InterferenceTable, wrap: bool) -> CMat {
    let (m_len, n_len) = x.shape();
    if table.is_orthogonal() {
        return x.clone();
    }
    let mut c = CMat::zeros(m_len, n_len);
    for q in 0..n_len {
        let pat = table.pattern_at(q as i64);
        for p in 0..m_len {
            let mut acc = C64::new(0.0, 0.0);
            for (ui, row) in pat.iter().enumerate() {
                let m = p as i64 + ui as i64 - 1;
                let m = if wrap {
                    m.rem_euclid(m_len as i64)
                } else if m < 0 || m >= m_len as i64 {
                    continue;
                } else {
                    m
                };
                for (vi, w) in row.iter().enumerate() {
                    let n = q as i64 + vi as i64 - 1;
                    if n < 0 || n >= n_len as i64 {
                        continue;
                    }
                    acc += w * x[(m as usize, n as usize)];
                }
            }
            c[(p, q)] = acc;
        }
    }
    c
}

/// [`virtualize_with`] using the weights and wrap rule of `spec`.
pub fn virtualize(x: &CMat, spec: &WaveformSpec) -> Result<CMat> {
    if x.shape() != (spec.m, spec.n_symbols) {
        return Err(Error::Dimension(format!(
            "virtualize: X is {:?}, expected ({}, {})",
            x.shape(),
            spec.m,
            spec.n_symbols
        )));
    }
    let table = InterferenceTable::new(spec)?;
    Ok(virtualize_with(x, &table, spec.wraps_in_frequency()))
}
