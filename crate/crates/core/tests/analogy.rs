use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};

use udwsim::analogy::{
    amplitude_equivalence_check, spdc_to_udw, udw_to_spdc, ScalingVelocity, SpdcSide, UdwSide,
};
use udwsim::dispersion::{Chi2Profile, EpsilonProfile, KtpOperatingPoint, TypeIProfiles};
use udwsim::oscquad::QuadConfig;
use udwsim::spdc::{Mismatch, PumpPulse, SpdcScenario, WaveguideSpec};

const OMEGA2: f64 = 2e15;
const OMEGA3: f64 = 3.6e15;

fn op() -> KtpOperatingPoint {
    KtpOperatingPoint::worked_example().unwrap()
}

fn quad() -> QuadConfig<f64> {
    QuadConfig {
        abs_tol: 0.0,
        ..QuadConfig::default()
    }
}

fn scenario(mismatch: Mismatch<f64>, z_i: f64, z_f: f64, chi0: f64) -> SpdcScenario<f64> {
    let wg = WaveguideSpec::new(
        z_i,
        z_f,
        25e-12,
        Chi2Profile::Uniform { chi0 },
        TypeIProfiles::ktp(),
    )
    .unwrap();
    let pump = PumpPulse::new(OMEGA3, 1e-12, 1e-9)
        .unwrap()
        .quasi_monochromatic();
    SpdcScenario::new(pump, OMEGA2, wg, mismatch).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Accelerated detector on `[0, T]` with a mild gap modulation.
fn sample_udw(a: f64, t: f64) -> UdwSide<f64> {
    UdwSide {
        q: Arc::new(move |tau: f64| -(-a * tau).exp_m1() / a),
        dq: Some(Arc::new(move |tau: f64| (-a * tau).exp())),
        eta: Arc::new(move |tau: f64| 1.0 + 0.3 * (tau / t).powi(2)),
        gap: Arc::new(move |tau: f64| 1.5e14 * (1.0 + 0.1 * (tau / t))),
        gap_phase: Some(Arc::new(move |tau: f64| {
            1.5e14 * (tau + 0.05 * tau * tau / t)
        })),
        b: Arc::new(|w: f64| Complex::new(0.0, -1.0) / (4.0 * std::f64::consts::PI * w).sqrt()),
        window: (0.0, t),
    }
}

#[test]
fn constant_dispersion_is_inertial() {
    let p = op();
    let e = EpsilonProfile::uniform(p.mean_mismatch, p.v_inv, p.omega1).unwrap();
    let s = scenario(Mismatch::Epsilon(e), 1e-5, 6e-5, 1.0);
    let v = ScalingVelocity::new(p.v).unwrap();
    let u = spdc_to_udw(&SpdcSide::from_scenario(&s).unwrap(), v).unwrap();
    let tau_i = 1e-5 / p.v;
    assert_eq!(u.q_at(tau_i).unwrap(), 0.0);
    for k in 1..10 {
        let tau = tau_i + k as f64 * 5e-6 / p.v;
        assert!(close(u.q_at(tau).unwrap(), tau - tau_i, 1e-12));
    }
    assert!(u.q_at(1e-3).is_err());
}

#[test]
fn exponential_gradient_is_uniform_acceleration() {
    let p = op();
    let a = 2e14;
    let e = EpsilonProfile::exponential(a, p.v, p.mean_mismatch, p.omega1).unwrap();
    let s = scenario(Mismatch::Epsilon(e), 0.0, 5e-5, 1.0);
    let v = ScalingVelocity::new(p.v).unwrap();
    let u = spdc_to_udw(&SpdcSide::from_scenario(&s).unwrap(), v).unwrap();
    let g0 = u.gap_at(0.0).unwrap();
    for k in 1..=20 {
        let tau = k as f64 * 5e-5 / p.v / 20.0;
        let expected = -(-a * tau).exp_m1() / a;
        assert!(close(u.q_at(tau).unwrap(), expected, 1e-12), "{tau}");
        // ε drops out of the gap
        assert!(close(u.gap_at(tau).unwrap(), g0, 1e-12));
    }
    assert!(close(g0, p.gap, 1e-9));
}

#[test]
fn round_trip_udw_spdc_udw() {
    let (a, t) = (2e14, 5e-14);
    let u = sample_udw(a, t);
    let v = ScalingVelocity::new(1e9).unwrap();
    let s = udw_to_spdc(&u, v, OMEGA2, OMEGA3).unwrap();
    assert!(close(s.length(), v.length(t), 1e-15));
    let back = spdc_to_udw(&s, v).unwrap();
    assert_eq!(back.window, u.window);
    for k in 0..100 {
        let tau = t * k as f64 / 99.0;
        assert!(close(back.q_at(tau).unwrap(), u.q_at(tau).unwrap(), 1e-10));
        assert!(close(
            (back.dq.as_ref().unwrap())(tau),
            (u.dq.as_ref().unwrap())(tau),
            1e-10
        ));
        assert!(close(
            back.eta_at(tau).unwrap(),
            u.eta_at(tau).unwrap(),
            1e-10
        ));
        assert!(
            close(back.gap_at(tau).unwrap(), u.gap_at(tau).unwrap(), 1e-10),
            "{k}"
        );
        let w = 1e14 * (1.0 + k as f64);
        let (b1, b2) = (back.b_at(w), u.b_at(w));
        assert!((b1 - b2).norm() <= 1e-10 * b2.norm());
    }
}

#[test]
fn round_trip_spdc_udw_spdc() {
    let p = op();
    let a = 1e14;
    let e = EpsilonProfile::exponential(a, p.v, p.mean_mismatch, p.omega1).unwrap();
    let s = SpdcSide::from_scenario(&scenario(Mismatch::Epsilon(e), -2e-5, 3e-5, 1e-11)).unwrap();
    let v = ScalingVelocity::new(7e8).unwrap();
    let back = udw_to_spdc(&spdc_to_udw(&s, v).unwrap(), v, OMEGA2, OMEGA3).unwrap();
    assert!(close(back.length(), s.length(), 1e-15));
    for k in 0..100 {
        let z = -2e-5 + 5e-5 * k as f64 / 99.0;
        let pairs = [
            (
                back.rel_inv_group_velocity_at(z),
                s.rel_inv_group_velocity_at(z),
            ),
            (back.normalized_chi2_at(z), s.normalized_chi2_at(z)),
            (back.delta_k0_at(z), s.delta_k0_at(z)),
            (back.effective_gap_at(z), s.effective_gap_at(z)),
        ];
        for (x, y) in pairs {
            let (x, y) = (x.unwrap(), y.unwrap());
            assert!(close(x, y, 1e-10), "z = {z}: {x} vs {y}");
        }
        let q1 = (back.q_tilde.as_ref().unwrap())(z);
        let q2 = (s.q_tilde.as_ref().unwrap())(z);
        assert!(close(q1, q2, 1e-10) || (q1 - q2).abs() < 1e-28);
        let w = 1.6e15;
        assert!((back.b_at(w) - s.b_at(w)).norm() <= 1e-10 * s.b_at(w).norm());
    }
    assert!(back.rel_inv_group_velocity_at(1.0).is_err());
}

#[test]
fn accelerated_detector_maps_to_exponential_profile() {
    let (a, t) = (3e14, 4e-14);
    let u = sample_udw(a, t);
    let v = ScalingVelocity::new(1e9).unwrap();
    let s = udw_to_spdc(&u, v, OMEGA2, OMEGA3).unwrap();
    let d = OMEGA3 - OMEGA2;
    for k in 0..20 {
        let z = 4e-5 * k as f64 / 19.0;
        let vg = s.rel_inv_group_velocity_at(z).unwrap();
        assert!(close(vg, (-a * z / 1e9).exp() / 1e9, 1e-14));
    }
    // constant gap with an exponential q: Δk₀ carries the ε(z) compensation
    let mut flat = u.clone();
    flat.gap = Arc::new(|_| 1.5e14);
    flat.gap_phase = Some(Arc::new(|tau| 1.5e14 * tau));
    let s = udw_to_spdc(&flat, v, OMEGA2, OMEGA3).unwrap();
    let mean = 1.5e14 / 1e9 + d / 1e9;
    for k in 0..20 {
        let z = 4e-5 * k as f64 / 19.0;
        let eps = d * (-a * z / 1e9).exp_m1() / 1e9;
        let dk = s.delta_k0_at(z).unwrap();
        assert!((dk - (mean + eps)).abs() < 1e-12 * mean, "{z}");
    }
    let mut rough = u;
    rough.dq = None;
    assert!(udw_to_spdc(&rough, v, OMEGA2, OMEGA3).is_err());
}

#[test]
fn equivalence_constant_profiles() {
    let p = op();
    let e = EpsilonProfile::uniform(p.mean_mismatch, p.v_inv, p.omega1).unwrap();
    let s = scenario(Mismatch::Epsilon(e), 0.0, 4e-5, 1e-11);
    let r = amplitude_equivalence_check(&s, ScalingVelocity::new(p.v).unwrap(), p.omega1, &quad())
        .unwrap();
    assert!(r.rel_diff < 1e-8, "{:e}", r.rel_diff);
    // off the operating frequency and with an unrelated v
    let r = amplitude_equivalence_check(&s, ScalingVelocity::new(3e8).unwrap(), 1.5e15, &quad())
        .unwrap();
    assert!(r.rel_diff < 1e-8, "{:e}", r.rel_diff);
}

#[test]
fn equivalence_exponential_scenarios() {
    let p = op();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..5 {
        let a = 10f64.powf(rng.gen_range(13.0..14.2));
        let len = rng.gen_range(5e-6..5e-5);
        let e = EpsilonProfile::exponential(a, p.v, p.mean_mismatch, p.omega1).unwrap();
        let s = scenario(Mismatch::Epsilon(e), -len / 2.0, len / 2.0, 1e-11);
        let r =
            amplitude_equivalence_check(&s, ScalingVelocity::new(p.v).unwrap(), p.omega1, &quad())
                .unwrap();
        assert!(
            r.rel_diff < 1e-8,
            "a = {a:e}, L = {len:e}: {:e}",
            r.rel_diff
        );
    }
}

#[test]
fn equivalence_zero_chi2() {
    let p = op();
    let e = EpsilonProfile::exponential(1e14, p.v, p.mean_mismatch, p.omega1).unwrap();
    let s = scenario(Mismatch::Epsilon(e), 0.0, 2e-5, 0.0);
    let r = amplitude_equivalence_check(&s, ScalingVelocity::new(p.v).unwrap(), p.omega1, &quad())
        .unwrap();
    assert_eq!(r.spdc.norm(), 0.0);
    assert_eq!(r.udw.norm(), 0.0);
}

#[test]
fn scaling_covariance() {
    // one detector, two waveguides built with v and 2v
    let u = sample_udw(2e14, 5e-14);
    let q = quad();
    let base = u.integral(1.6e15, &q).unwrap().value;
    let mut moduli = Vec::new();
    for v in [1e9, 2e9] {
        let sv = ScalingVelocity::new(v).unwrap();
        let s = udw_to_spdc(&u, sv, OMEGA2, OMEGA3).unwrap();
        assert!(close(s.length(), v * 5e-14, 1e-15));
        moduli.push(s.integral(1.6e15, &q).unwrap().value.norm());
    }
    assert!(close(moduli[0], moduli[1], 1e-9), "{moduli:?}");
    assert!(close(moduli[0], base.norm(), 1e-9));
}

#[test]
fn scaling_velocity_round_trip() {
    let v = ScalingVelocity::from_length(1e-4, 1e-13).unwrap();
    assert_eq!(v.length(v.duration(1e-4)), 1e-4);
    assert!(ScalingVelocity::new(0.0).is_err());
}
