use std::f64::consts::PI;

use crate::{Error, Result};

/// Prototype length convention: `K·P + 1` (odd, symmetric about a sample)
/// or `K·P` (even, symmetric about a half sample).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthParity {
    #[default]
    Odd,
    Even,
}

fn phydyas_coefficients(k: usize) -> Option<Vec<f64>> {
    match k {
        2 => Some(vec![1.0, std::f64::consts::FRAC_1_SQRT_2]),
        3 => Some(vec![1.0, 0.911438, 0.411438]),
        4 => Some(vec![1.0, 0.971960, std::f64::consts::FRAC_1_SQRT_2, 0.235147]),
        _ => None,
    }
}

/// PHYDYAS frequency-sampling prototype for `p` subcarriers and overlapping
/// factor `k`, normalized to unit energy.
pub fn phydyas_prototype(p: usize, k: usize, parity: LengthParity) -> Result<Vec<f64>> {
    if p == 0 || p % 2 != 0 {
        return Err(Error::Config(format!("prototype needs an even subcarrier count, got {p}")));
    }
    let h = phydyas_coefficients(k)
        .ok_or_else(|| Error::Config(format!("overlapping factor K = {k} not in {{2, 3, 4}}")))?;
    let kp = k * p;
    let len = match parity {
        LengthParity::Odd => kp + 1,
        LengthParity::Even => kp,
    };
    let centre = (len as f64 - 1.0) / 2.0;
    let mut g: Vec<f64> = (0..len)
        .map(|l| {
            let t = l as f64 - centre;
            let tail: f64 = h
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, hk)| hk * (2.0 * PI * i as f64 * t / kp as f64).cos())
                .sum();
            h[0] + 2.0 * tail
        })
        .collect();
    let e = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    g.iter_mut().for_each(|x| *x /= e);
    Ok(g)
}

/// Rectangular CP-OFDM pair `(g, g̃)`: `g` of length `M + M_cp` and
/// amplitude `1/√M`, `g̃` equal to `g` with the first `M_cp` samples zeroed.
pub fn make_cp_ofdm_prototypes(m: usize, cp_len: usize) -> (Vec<f64>, Vec<f64>) {
    let a = 1.0 / (m as f64).sqrt();
    let g = vec![a; m + cp_len];
    let mut gt = g.clone();
    gt[..cp_len].iter_mut().for_each(|x| *x = 0.0);
    (g, gt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phydyas_symmetric_unit_energy() {
        for k in 2..=4 {
            for parity in [LengthParity::Odd, LengthParity::Even] {
                let g = phydyas_prototype(32, k, parity).unwrap();
                let n = g.len();
                assert_eq!(n, 32 * k + usize::from(parity == LengthParity::Odd));
                let e: f64 = g.iter().map(|x| x * x).sum();
                assert!((e - 1.0).abs() < 1e-12);
                for l in 0..n {
                    assert!((g[l] - g[n - 1 - l]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn phydyas_odd_endpoints_vanish() {
        // H_0 - 2H_1 + 2H_2 - 2H_3 = 0 for the K=4 design
        let g = phydyas_prototype(32, 4, LengthParity::Odd).unwrap();
        assert!(g[0].abs() < 1e-6 * g[64]);
    }

    #[test]
    fn unsupported_k_is_config_error() {
        assert!(matches!(
            phydyas_prototype(32, 5, LengthParity::Odd),
            Err(Error::Config(_))
        ));
        assert!(phydyas_prototype(31, 4, LengthParity::Odd).is_err());
    }

    #[test]
    fn cp_ofdm_pair() {
        let (g, gt) = make_cp_ofdm_prototypes(32, 8);
        assert_eq!(g.len(), 40);
        assert!(g.iter().all(|&x| x == 1.0 / 32f64.sqrt()));
        assert!(gt[..8].iter().all(|&x| x == 0.0));
        assert_eq!(&gt[8..], &g[8..]);
        let (g, gt) = make_cp_ofdm_prototypes(32, 0);
        assert_eq!(g, gt);
    }
}
