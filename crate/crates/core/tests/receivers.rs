mod common;

use common::{max_abs_diff, nmse, random_cmat, scenario};
use flexmc_core::channel::ChannelSet;
use flexmc_core::constellation::Constellation;
use flexmc_core::receivers::{
    als_receiver, als_step_c, als_step_c_literal, als_step_h, als_step_h_literal, detect,
    egc_equalize, egc_estimate, ilse_receiver, ilsp_receiver, informed_als_receiver, krf_receiver,
    mrc_step_c, mrc_step_h, objective, random_init, resolve_scaling, run_receiver, training_init,
    FrameFormat, ReceiverOptions, Variant,
};
use flexmc_core::txmodel::{noise_free_model, stack_c, ReceivedTensor};
use flexmc_core::waveform::WaveformSpec;
use flexmc_core::{CMat, Error, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts(variant: Variant) -> ReceiverOptions {
    ReceiverOptions::new(variant, 50, 1e-6).unwrap()
}

fn oqam() -> WaveformSpec {
    WaveformSpec::oqam(16, 24, 4).unwrap()
}

fn cp_ofdm() -> WaveformSpec {
    WaveformSpec::cp_ofdm(16, 4, 12).unwrap()
}

fn random_tensor(m: usize, n: usize, nr: usize, rng: &mut impl Rng) -> ReceivedTensor {
    ReceivedTensor::new((0..nr).map(|_| random_cmat(m, n, rng)).collect()).unwrap()
}

#[test]
fn simo_scalar_and_matrix_updates_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let (m, n, nr) = (4, 5, rng.random_range(1..4));
        let y = random_tensor(m, n, nr, &mut rng);
        let h = random_cmat(nr, m, &mut rng);
        let c = random_cmat(m, n, &mut rng);
        let c1 = als_step_c_literal(&y, &h, 1).unwrap();
        assert!(max_abs_diff(&c1, &mrc_step_c(&y, &h).unwrap()) < 1e-12);
        assert!(max_abs_diff(&c1, &als_step_c(&y, &h, 1).unwrap()) < 1e-12);
        let h1 = als_step_h_literal(&y, &c, 1).unwrap();
        assert!(max_abs_diff(&h1, &mrc_step_h(&y, &c).unwrap()) < 1e-12);
        assert!(max_abs_diff(&h1, &als_step_h(&y, &c, 1).unwrap()) < 1e-12);
    }
}

#[test]
fn mimo_block_updates_match_literal_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let y = random_tensor(4, 6, 3, &mut rng);
        let h = random_cmat(3, 8, &mut rng);
        let c = random_cmat(8, 6, &mut rng);
        assert!(max_abs_diff(&als_step_c_literal(&y, &h, 2).unwrap(), &als_step_c(&y, &h, 2).unwrap()) < 1e-11);
        assert!(max_abs_diff(&als_step_h_literal(&y, &c, 2).unwrap(), &als_step_h(&y, &c, 2).unwrap()) < 1e-11);
    }
}

#[test]
fn zero_denominator_names_the_subcarrier() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let y = random_tensor(4, 5, 2, &mut rng);
    let mut h = random_cmat(2, 4, &mut rng);
    h.column_mut(2).fill(C64::new(0.0, 0.0));
    match mrc_step_c(&y, &h) {
        Err(Error::SingularUpdate { subcarrier, .. }) => assert_eq!(subcarrier, 2),
        other => panic!("{other:?}"),
    }
    match als_step_c(&y, &h, 1) {
        Err(Error::SingularUpdate { subcarrier, .. }) => assert_eq!(subcarrier, 2),
        other => panic!("{other:?}"),
    }
    let mut c = random_cmat(4, 5, &mut rng);
    c.row_mut(1).fill(C64::new(0.0, 0.0));
    assert!(matches!(als_step_h(&y, &c, 1), Err(Error::SingularUpdate { subcarrier: 1, .. })));
}

#[test]
fn egc_equals_mrc_for_flat_magnitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let y = random_tensor(6, 7, 3, &mut rng);
    let h = CMat::from_fn(3, 6, |_, m| C64::from_polar(0.5 + m as f64, rng.random::<f64>() * 6.0));
    assert!(max_abs_diff(&egc_equalize(&y, &h).unwrap(), &mrc_step_c(&y, &h).unwrap()) < 1e-12);
    let c = CMat::from_fn(6, 7, |m, _| C64::from_polar(1.0 + m as f64, rng.random::<f64>() * 6.0));
    assert!(max_abs_diff(&egc_estimate(&y, &c).unwrap(), &mrc_step_h(&y, &c).unwrap()) < 1e-12);
}

#[test]
fn egc_single_antenna_is_division() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let y = random_tensor(3, 4, 1, &mut rng);
    let h = random_cmat(1, 3, &mut rng);
    let c = egc_equalize(&y, &h).unwrap();
    for m in 0..3 {
        for n in 0..4 {
            assert!((c[(m, n)] - y.get(m, n, 0) / h[(0, m)]).norm() < 1e-14);
        }
    }
}

#[test]
fn mrc_residual_never_exceeds_egc() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let y = random_tensor(4, 6, 3, &mut rng);
        let h = random_cmat(3, 4, &mut rng);
        let egc = egc_equalize(&y, &h).unwrap();
        let mrc = mrc_step_c(&y, &h).unwrap();
        assert!(max_abs_diff(&egc, &mrc) > 1e-6);
        assert!(objective(&y, &h, &mrc, 1) <= objective(&y, &h, &egc, 1) + 1e-12);
    }
}

#[test]
fn egc_zero_divisor_is_an_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let y = random_tensor(3, 4, 2, &mut rng);
    let mut h = random_cmat(2, 3, &mut rng);
    h[(1, 2)] = C64::new(0.0, 0.0);
    assert!(matches!(egc_equalize(&y, &h), Err(Error::Division(_))));
    let mut c = random_cmat(3, 4, &mut rng);
    c[(0, 3)] = C64::new(0.0, 0.0);
    assert!(matches!(egc_estimate(&y, &c), Err(Error::Division(_))));
}

#[test]
fn training_is_exact_without_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for spec in [oqam(), cp_ofdm()] {
        for n_t in [1, 2] {
            let s = scenario(spec.clone(), n_t, 2, 0.0, &mut rng);
            let est = training_init(&s.y, &s.frame).unwrap();
            assert!(est.flagged.is_empty());
            assert!(nmse(&s.h(), &est.h) < 1e-24, "{:?} n_t={n_t}", spec.phase_rule);
        }
    }
}

#[test]
fn single_pilot_training_is_y_over_c() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let s = scenario(cp_ofdm(), 1, 2, 0.01, &mut rng);
    let est = training_init(&s.y, &s.frame).unwrap();
    for m in 0..16 {
        for r in 0..2 {
            let want = s.y.get(m, 0, r) / s.frame.preamble.c[0][(m, 0)];
            assert!((est.h[(r, m)] - want).norm() < 1e-12);
        }
    }
}

#[test]
fn krf_recovers_noise_free_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for spec in [oqam(), cp_ofdm()] {
        let s = scenario(spec, 1, 2, 0.0, &mut rng);
        let est = krf_receiver(&s.y, &s.frame).unwrap();
        assert!(nmse(&s.h(), &est.h) < 1e-18, "{:?} {}", s.frame.spec.phase_rule, nmse(&s.h(), &est.h));
        assert!(max_abs_diff(&est.c, &s.c) < 1e-10);
        assert_eq!(est.d, s.d);
        assert!(est.unresolved.is_empty());
    }
}

#[test]
fn krf_takes_dominant_singular_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let s = scenario(cp_ofdm(), 1, 3, 0.05, &mut rng);
    let est = krf_receiver(&s.y, &s.frame).unwrap();
    // power-iteration oracle for σ₁ of each per-subcarrier reshape
    let mut resid = 0.0;
    for m in 0..16 {
        let z = CMat::from_fn(12, 3, |n, r| s.y.get(m, n, r));
        let g = z.adjoint() * &z;
        let mut v = CMat::from_element(3, 1, C64::new(1.0, 0.3));
        for _ in 0..500 {
            v = &g * &v;
            let nv = v.norm();
            v /= C64::new(nv, 0.0);
        }
        let sigma1_sq = (v.adjoint() * &g * &v)[(0, 0)].re;
        resid += z.norm_squared() - sigma1_sq;
    }
    let f = est.objective_trace[0];
    assert!((f * f - resid).abs() < 1e-9 * resid.max(1.0), "{} vs {resid}", f * f);
}

#[test]
fn krf_rejects_zero_and_mimo() {
    let f = FrameFormat::new(cp_ofdm(), 1, Constellation::Qpsk).unwrap();
    let y = ReceivedTensor::zeros(16, 12, 2);
    assert!(matches!(krf_receiver(&y, &f), Err(Error::Degenerate(_))));
    let f2 = FrameFormat::new(cp_ofdm(), 2, Constellation::Qpsk).unwrap();
    assert!(matches!(krf_receiver(&y, &f2), Err(Error::UnsupportedVariant(_))));
}

#[test]
fn als_from_truth_stops_after_one_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for spec in [oqam(), cp_ofdm()] {
        let s = scenario(spec, 1, 2, 0.0, &mut rng);
        let est = als_receiver(&s.y, &s.h(), &opts(Variant::Als), &s.frame).unwrap();
        assert_eq!(est.iters, 1);
        assert!(est.converged);
        assert!(est.objective_trace[0] < 1e-12);
        assert!(nmse(&s.h(), &est.h) < 1e-18);
        assert_eq!(est.d, s.d);
    }
}

#[test]
fn als_noise_free_from_training_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n_t in [1, 2] {
        let s = scenario(oqam(), n_t, 2, 0.0, &mut rng);
        let est = run_receiver(&s.y, &s.frame, &opts(Variant::Als), None).unwrap();
        assert!(nmse(&s.h(), &est.h) < 1e-18);
        assert_eq!(est.d, s.d);
    }
}

#[test]
fn als_objective_is_monotone_on_noisy_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let frame = FrameFormat::new(WaveformSpec::oqam(8, 10, 4).unwrap(), 1, Constellation::Qpsk).unwrap();
    for _ in 0..100 {
        let y = random_tensor(8, 10, 2, &mut rng);
        let init = random_init(2, 1, 8, &mut rng);
        let est = als_receiver(&y, &init, &opts(Variant::Als), &frame).unwrap();
        assert!(est.iters <= 50);
        for w in est.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "{w:?}");
        }
    }
}

#[test]
fn als_random_init_identifies_simo_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let spec = WaveformSpec::cp_ofdm(16, 4, 106).unwrap();
    let seeds = 40;
    let mut ok = 0;
    for _ in 0..seeds {
        let s = scenario(spec.clone(), 1, 2, 0.0, &mut rng);
        let init = random_init(2, 1, 16, &mut rng);
        let est = als_receiver(&s.y, &init, &opts(Variant::Als), &s.frame).unwrap();
        let last = *est.objective_trace.last().unwrap();
        if last <= 1e-10 * s.y.frob_sq().sqrt() {
            ok += 1;
        }
    }
    assert!(ok as f64 >= 0.95 * seeds as f64, "{ok}/{seeds}");
}

#[test]
fn informed_als_noise_free_recovers_symbols_in_two_iterations() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for spec in [oqam(), cp_ofdm()] {
        for n_t in [1, 2] {
            let s = scenario(spec.clone(), n_t, 2, 0.0, &mut rng);
            let init = training_init(&s.y, &s.frame).unwrap().h;
            let est = informed_als_receiver(&s.y, &init, &opts(Variant::AlsInformed), &s.frame).unwrap();
            assert!(est.iters <= 2);
            assert!(est.converged);
            assert_eq!(est.d, s.d);
            assert!(nmse(&s.h(), &est.h) < 1e-18);
        }
    }
}

#[test]
fn informed_als_rejects_non_invertible_mapping() {
    let spec = WaveformSpec::fmt(16, 20, 12, 4).unwrap();
    let f = FrameFormat::new(spec, 1, Constellation::Qpsk).unwrap();
    let y = ReceivedTensor::zeros(16, 12, 2);
    let h = CMat::from_element(2, 16, C64::new(1.0, 0.0));
    assert!(matches!(
        informed_als_receiver(&y, &h, &opts(Variant::AlsInformed), &f),
        Err(Error::UnsupportedVariant(_))
    ));
}

#[test]
fn informed_als_beats_training_at_moderate_snr() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let (mut tr, mut inf) = (0.0, 0.0);
    for _ in 0..30 {
        let s = scenario(WaveformSpec::oqam(32, 40, 4).unwrap(), 1, 2, 10f64.powf(-1.5), &mut rng);
        let t = training_init(&s.y, &s.frame).unwrap().h;
        let e = informed_als_receiver(&s.y, &t, &opts(Variant::AlsInformed), &s.frame).unwrap();
        tr += nmse(&s.h(), &t);
        inf += nmse(&s.h(), &e.h);
    }
    assert!(inf < tr, "{inf} vs {tr}");
}

#[test]
fn informed_als_with_correct_decisions_is_the_full_frame_ls_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for spec in [oqam(), cp_ofdm()] {
        let s = scenario(spec, 1, 2, 1e-3, &mut rng);
        let t = training_init(&s.y, &s.frame).unwrap().h;
        let e = informed_als_receiver(&s.y, &t, &opts(Variant::AlsInformed), &s.frame).unwrap();
        assert_eq!(e.d, s.d);
        // the preamble alone must not set the final channel scale
        let oracle = als_step_h(&s.y, &s.c, 1).unwrap();
        assert!(max_abs_diff(&e.h, &oracle) < 1e-12);
    }
}

#[test]
fn ilsp_single_antenna_noise_free_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for spec in [oqam(), cp_ofdm()] {
        let s = scenario(spec, 1, 1, 0.0, &mut rng);
        let est = run_receiver(&s.y, &s.frame, &opts(Variant::Ilsp), None).unwrap();
        assert_eq!(est.d, s.d);
        assert!(nmse(&s.h(), &est.h) < 1e-18);
    }
}

#[test]
fn ilse_noise_free_is_exact_and_oqam_unsupported() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let s = scenario(cp_ofdm(), 2, 2, 0.0, &mut rng);
    let est = run_receiver(&s.y, &s.frame, &opts(Variant::Ilse), None).unwrap();
    assert_eq!(est.d, s.d);
    assert!(nmse(&s.h(), &est.h) < 1e-18);
    let o = scenario(oqam(), 1, 2, 0.0, &mut rng);
    let init = training_init(&o.y, &o.frame).unwrap().h;
    assert!(matches!(
        ilse_receiver(&o.y, &init, &opts(Variant::Ilse), &o.frame),
        Err(Error::UnsupportedVariant(_))
    ));
}

#[test]
fn separation_needs_enough_antennas_and_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let s = scenario(cp_ofdm(), 2, 1, 0.0, &mut rng);
    let init = CMat::from_element(1, 32, C64::new(1.0, 0.0));
    assert!(matches!(
        ilsp_receiver(&s.y, &init, &opts(Variant::Ilsp), &s.frame),
        Err(Error::Precondition(_))
    ));
    let short = ReceivedTensor::zeros(16, 1, 2);
    let init = CMat::from_element(2, 32, C64::new(1.0, 0.0));
    assert!(matches!(
        ilsp_receiver(&short, &init, &opts(Variant::Ilsp), &s.frame),
        Err(Error::Precondition(_))
    ));
    // a frame too short to hold its preamble is rejected up front
    assert!(FrameFormat::new(WaveformSpec::cp_ofdm(8, 2, 2).unwrap(), 2, Constellation::Qpsk).is_err());
}

fn symbol_errors(a: &[CMat], b: &[CMat], start: usize) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let (m, n) = x.shape();
            (0..m).flat_map(|i| (start..n).map(move |j| (i, j))).filter(|&ij| x[ij] != y[ij]).count()
        })
        .sum()
}

#[test]
fn ilse_at_least_as_good_as_ilsp_on_2x2_cp_ofdm() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let spec = WaveformSpec::cp_ofdm(16, 4, 30).unwrap();
    let (mut e_ilsp, mut e_ilse) = (0, 0);
    for _ in 0..40 {
        let s = scenario(spec.clone(), 2, 2, 0.1, &mut rng);
        let init = training_init(&s.y, &s.frame).unwrap().h;
        let p = ilsp_receiver(&s.y, &init, &opts(Variant::Ilsp), &s.frame).unwrap();
        let e = ilse_receiver(&s.y, &init, &opts(Variant::Ilse), &s.frame).unwrap();
        e_ilsp += symbol_errors(&s.d, &p.d, s.frame.data_start());
        e_ilse += symbol_errors(&s.d, &e.d, s.frame.data_start());
    }
    assert!(e_ilse <= e_ilsp, "ILSE {e_ilse} vs ILSP {e_ilsp}");
}

#[test]
fn scaling_recovers_beta_and_keeps_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let s = scenario(oqam(), 1, 2, 0.0, &mut rng);
    let beta: Vec<C64> = (0..16).map(|_| C64::from_polar(0.5 + rng.random::<f64>(), rng.random::<f64>() * 6.0)).collect();
    let c_scaled = CMat::from_fn(16, 24, |m, n| s.c[(m, n)] * beta[m]);
    let h_scaled = CMat::from_fn(2, 16, |r, m| s.h()[(r, m)] / beta[m]);
    let r = resolve_scaling(&h_scaled, &c_scaled, &s.frame);
    for m in 0..16 {
        assert!((r.alpha[m] - beta[m]).norm() < 1e-12);
    }
    assert!(max_abs_diff(&r.c, &s.c) < 1e-12);
    let f0 = objective(&s.y, &h_scaled, &c_scaled, 1);
    assert!((objective(&s.y, &r.h, &r.c, 1) - f0).abs() < 1e-12);
}

#[test]
fn scaling_is_the_ls_scalar_and_flags_zero_pilots() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let f = FrameFormat::new(WaveformSpec::cp_ofdm(8, 2, 6).unwrap(), 1, Constellation::Qpsk).unwrap();
    let c = random_cmat(8, 6, &mut rng);
    let h = random_cmat(2, 8, &mut rng);
    let r = resolve_scaling(&h, &c, &f);
    for m in 0..8 {
        // single pilot column: α = c*·ĉ/|c|² = ĉ/c
        let want = c[(m, 0)] / f.preamble.c[0][(m, 0)];
        assert!((r.alpha[m] - want).norm() < 1e-12);
    }
    let mut z = c.clone();
    z[(3, 0)] = C64::new(0.0, 0.0);
    assert_eq!(resolve_scaling(&h, &z, &f).unresolved, vec![3]);
}

#[test]
fn detect_noise_free_and_tie_break() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for spec in [oqam(), cp_ofdm()] {
        let s = scenario(spec, 2, 2, 0.0, &mut rng);
        assert_eq!(detect(&s.c, &s.frame), s.d);
    }
    let f = FrameFormat::new(WaveformSpec::cp_ofdm(8, 0, 4).unwrap(), 1, Constellation::Qpsk).unwrap();
    let a = std::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(f.decide_one(C64::new(0.0, 0.0)), C64::new(-a, -a));
}

/// `Q(x)` by composite Simpson integration of the Gaussian density.
fn q_function(x: f64) -> f64 {
    let (a, b, n) = (x, x + 12.0, 20_000);
    let h = (b - a) / n as f64;
    let pdf = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(a) + pdf(b);
    for i in 1..n {
        s += pdf(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn qpsk_awgn_ber_matches_q_function() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let spec = WaveformSpec::cp_ofdm(64, 16, 400).unwrap();
    let f = FrameFormat::new(spec, 1, Constellation::Qpsk).unwrap();
    let gamma: f64 = 4.0;
    let d = f.random_symbols(&mut rng);
    let c = f.remap(&d[0]);
    let noisy = CMat::from_fn(64, 400, |m, n| {
        c[(m, n)] + flexmc_core::channel::complex_gaussian(1.0 / gamma, &mut rng)
    });
    let dh = detect(&noisy, &f);
    let (errs, bits) = f.bit_errors(&d, &dh);
    let ber = errs as f64 / bits as f64;
    let want = q_function(gamma.sqrt());
    let sd = (want / bits as f64).sqrt();
    assert!((ber - want).abs() < 5.0 * sd, "{ber} vs {want}");
}

#[test]
fn run_receiver_dispatches_every_variant() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let s = scenario(cp_ofdm(), 1, 2, 0.0, &mut rng);
    for v in Variant::ALL {
        let est = run_receiver(&s.y, &s.frame, &opts(v), Some(&s.h())).unwrap();
        assert_eq!(est.d, s.d, "{v:?}");
        assert_eq!(Variant::parse(v.name()), Some(v));
    }
}

#[test]
fn options_validate() {
    assert!(ReceiverOptions::new(Variant::Als, 0, 1e-6).is_err());
    assert!(ReceiverOptions::new(Variant::Als, 5, 0.0).is_err());
    assert_eq!(ReceiverOptions::virtual_alphabet_bound(4), 262_144);
}

fn small_channel(seed: u64) -> (FrameFormat, ChannelSet, CMat) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = WaveformSpec::oqam(8, 10, 4).unwrap();
    let f = FrameFormat::new(spec.clone(), 1, Constellation::Qpsk).unwrap();
    let ch = ChannelSet::draw(
        &flexmc_core::channel::PowerDelayProfile::ped_a(),
        2,
        1,
        spec.p,
        spec.m,
        0.0,
        0.0,
        &mut rng,
    );
    let d = f.random_symbols(&mut rng);
    (f.clone(), ch, stack_c(&[f.remap(&d[0])]))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scaling_never_changes_slice_products(seed in any::<u64>(), mag in 0.1f64..10.0, ph in 0.0f64..6.28) {
        let (f, ch, c) = small_channel(seed);
        let h = ch.h_matrix();
        let s = C64::from_polar(mag, ph);
        let r = resolve_scaling(&(&h / s), &(&c * s), &f);
        for m in 0..8 {
            for n in 0..10 {
                for rr in 0..2 {
                    let a = h[(rr, m)] * c[(m, n)];
                    let b = r.h[(rr, m)] * r.c[(m, n)];
                    prop_assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn als_trace_non_increasing(seed in any::<u64>(), sigma in 0.01f64..1.0) {
        let (f, ch, c) = small_channel(seed);
        let spec = f.spec.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5);
        let clean = noise_free_model(&[c], &ch, &spec).unwrap();
        let w = flexmc_core::txmodel::unit_noise(&spec, 2, flexmc_core::txmodel::NoiseKind::White, &mut rng).unwrap();
        let y = clean.add_scaled(&w, sigma).unwrap();
        let init = random_init(2, 1, 8, &mut rng);
        let est = als_receiver(&y, &init, &opts(Variant::Als), &f).unwrap();
        for w in est.objective_trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }
}
