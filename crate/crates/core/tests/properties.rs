use std::f64::consts::PI;

use catworld::interferometer::{
    fringe_scan, joint_state_probabilities, scheme1_probabilities, scheme2_probabilities, MediumLink, MediumState,
    MziConfig, Sampling, Scheme, Sweep, SweepKind,
};
use catworld::medium::{axial_profile, control_intensity_profile, index_from_intensity, ProfileForm};
use catworld::profile::{uniform_grid, IndexLaw, IndexProfile};
use catworld::propagation::{optical_phase, phase_difference_closed, trace_ray};
use catworld::spacetime::{closed_form_index, isotropic_transform, SpacetimeSpec, StaticMetric};
use proptest::prelude::*;

proptest! {
    #[test]
    fn anti_de_sitter_below_one_below_de_sitter(h in 0.01f64..100.0, x in 1e-3f64..0.999) {
        let r = x * 1.9 / h;
        let ads = closed_form_index(&SpacetimeSpec::anti_de_sitter(h), r).unwrap().n;
        let ds = closed_form_index(&SpacetimeSpec::de_sitter(h), r).unwrap().n;
        prop_assert!(ads < 1.0 && 1.0 < ds);
    }

    #[test]
    fn isotropic_transform_is_monotone(lambda in -4.0f64..4.0, a in 0.01f64..0.45, da in 1e-4f64..0.4) {
        let metric = StaticMetric::new(lambda, 0.0).unwrap();
        let cap = if lambda > 0.0 { 0.99 / lambda.sqrt() } else { 10.0 };
        let (r1, r2) = (a * cap, ((a + da) * cap).min(0.999 * cap));
        prop_assume!(r2 > r1);
        prop_assert!(isotropic_transform(&metric, r1).unwrap() < isotropic_transform(&metric, r2).unwrap());
    }

    #[test]
    fn design_roundtrip(h in 0.0f64..150.0, c in 1e-3f64..1e3, theta in -1.5f64..1.5, l in 1e-3f64..0.013) {
        prop_assume!(h * l < 2.0);
        let profile = axial_profile(&SpacetimeSpec::de_sitter(h), l, 101, ProfileForm::Quadratic).unwrap();
        let intensity = control_intensity_profile(h, c, theta, &profile.positions()).unwrap();
        for (&(z, n), &(_, i)) in profile.samples().iter().zip(&intensity) {
            let back = index_from_intensity(i, c, theta).unwrap();
            prop_assert!((back - n).abs() <= 1e-12, "z={} {} vs {}", z, back, n);
        }
    }

    #[test]
    fn probabilities_normalized_and_bounded(d in -50.0f64..50.0, piezo in -10.0f64..10.0, eta in 0.0f64..=1.0) {
        let medium = [MediumState::Cat, MediumState::DefiniteN1, MediumState::DefiniteN2];
        let mut pairs = vec![scheme1_probabilities(d, piezo), scheme2_probabilities(d, piezo)];
        for m in medium {
            pairs.push(joint_state_probabilities(d, piezo, eta, m).unwrap());
        }
        for (p, m) in pairs {
            prop_assert!((p + m - 1.0).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&m));
        }
        let (p1, m1) = scheme1_probabilities(d, piezo);
        prop_assert!(p1 >= 0.5 && 0.5 >= m1);
    }

    #[test]
    fn schemes_are_two_pi_periodic(d in -20.0f64..20.0, k in -5i32..5) {
        let shift = 2.0 * PI * k as f64;
        let (a, _) = scheme1_probabilities(d, 0.0);
        let (b, _) = scheme1_probabilities(d + shift, 0.0);
        prop_assert!((a - b).abs() < 1e-7);
        let (a, _) = scheme2_probabilities(d, 0.0);
        let (b, _) = scheme2_probabilities(d + shift, 0.0);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn poisson_scans_replay_exactly(seed in any::<u64>(), n0 in 0u64..100_000) {
        let cfg = MziConfig { sampling: Sampling::Poisson { seed }, ..MziConfig::new(Scheme::Two, n0) };
        let sweep = Sweep { kind: SweepKind::Piezo, start: 0.0, stop: 2.0 * PI, steps: 17 };
        let link = MediumLink { length: 0.01, lambda0: 780e-9, delta_phi: 0.3 };
        let a = fringe_scan(&cfg, &sweep, &link).unwrap().table().to_csv();
        let b = fringe_scan(&cfg, &sweep, &link).unwrap().table().to_csv();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn closed_form_phase_matches_quadrature(hl in 0.001f64..=0.5, l in 1e-3f64..0.1) {
        let h = hl / l;
        let profile = axial_profile(&SpacetimeSpec::de_sitter(h), l, 1001, ProfileForm::Quadratic).unwrap();
        let q = optical_phase(&profile, 780e-9).unwrap().delta_phi;
        let c = phase_difference_closed(h, l, 780e-9).unwrap();
        prop_assert!(((q - c) / c).abs() <= 1e-6);
    }

    #[test]
    fn phase_never_below_vacuum(hl in 0.0f64..1.9) {
        let profile = axial_profile(&SpacetimeSpec::de_sitter(hl / 0.01), 0.01, 201, ProfileForm::Exact).unwrap();
        let r = optical_phase(&profile, 780e-9).unwrap();
        prop_assert!(r.phi >= 2.0 * PI * 0.01 / 780e-9);
    }

    #[test]
    fn quadratic_profile_has_constant_curvature(h in 0.1f64..199.0) {
        let profile = axial_profile(&SpacetimeSpec::de_sitter(h), 0.01, 1001, ProfileForm::Quadratic).unwrap();
        prop_assert!(max_curvature_spread(&profile.values()) <= 1e-12);
    }

    #[test]
    fn de_sitter_rays_keep_bouguer(y0 in 0.0f64..0.8, angle in -1.0f64..1.0) {
        let law = IndexLaw::Catalog { spec: SpacetimeSpec::de_sitter(1.0) };
        let profile = IndexProfile::from_law(law, (0.0, 1.9), 2).unwrap();
        let ray = trace_ray(&profile, [-1.0, y0], [angle.cos(), angle.sin()], 4.0).unwrap();
        prop_assert!(ray.max_bouguer_drift() <= 1e-7);
    }
}

/// Largest deviation of the second difference from its first value,
/// relative to n.
fn max_curvature_spread(n: &[f64]) -> f64 {
    let d0 = n[2] - 2.0 * n[1] + n[0];
    n.windows(3)
        .map(|w| ((w[2] - 2.0 * w[1] + w[0]) - d0).abs() / w[1])
        .fold(0.0, f64::max)
}

#[test]
fn curvature_check_rejects_the_exact_form() {
    let exact = axial_profile(&SpacetimeSpec::de_sitter(10.0), 0.01, 1001, ProfileForm::Exact).unwrap();
    assert!(max_curvature_spread(&exact.values()) > 1e-12);
}

#[test]
fn attenuator_is_monotone_for_the_quadratic_cell() {
    let grid = uniform_grid(0.0, 0.01, 1001);
    let i = control_intensity_profile(10.0, 1.0, 0.2, &grid).unwrap();
    let t = catworld::medium::attenuator_profile(&i).unwrap();
    assert!(t.windows(2).all(|w| w[1].1 >= w[0].1));
    assert!(t.iter().all(|p| (0.0..=1.0).contains(&p.1)));
}
