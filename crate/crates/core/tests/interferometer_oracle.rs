//! Joint photon–medium model against an explicit sum over the four
//! path × branch histories.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use catworld::interferometer::{joint_state_probabilities, scheme1_probabilities, scheme2_probabilities, MediumState};
use num_complex::Complex64;

/// Returns (p₊, p₋) by enumerating every history leading to each port.
fn path_sum(delta_phi: f64, piezo: f64, eta: f64, branch_weights: [f64; 2]) -> (f64, f64) {
    let tr = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let rf = Complex64::new(0.0, FRAC_1_SQRT_2);
    let branch_phase = [0.0, delta_phi];
    // amplitude[port][branch]
    let mut amp = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (k, &phi) in branch_phase.iter().enumerate() {
        // reference arm: transmitted at the first splitter
        let via_reference = tr * Complex64::from_polar(1.0, piezo);
        // cell arm: reflected at the first splitter
        let via_cell = rf * Complex64::from_polar(1.0, phi);
        // port + takes reference-reflected and cell-transmitted light
        amp[0][k] += branch_weights[k] * via_reference * rf;
        amp[0][k] += branch_weights[k] * via_cell * tr;
        amp[1][k] += branch_weights[k] * via_reference * tr;
        amp[1][k] += branch_weights[k] * via_cell * rf;
    }
    let gram = [[1.0, eta], [eta, 1.0]];
    let mut p = [0.0; 2];
    for port in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                p[port] += gram[i][j] * (amp[port][i].conj() * amp[port][j]).re;
            }
        }
    }
    (p[0] / (p[0] + p[1]), p[1] / (p[0] + p[1]))
}

#[test]
fn joint_model_equals_path_sum() {
    for eta in [0.0f64, 0.25, 0.6, 1.0] {
        let c = 1.0 / (2.0 + 2.0 * eta).sqrt();
        for k in 0..200 {
            let d = -7.0 + 0.07 * k as f64;
            let piezo = 0.3 * (k % 7) as f64;
            let (p, m) = joint_state_probabilities(d, piezo, eta, MediumState::Cat).unwrap();
            let (q, n) = path_sum(d, piezo, eta, [c, c]);
            assert!((p - q).abs() < 1e-13 && (m - n).abs() < 1e-13);
        }
    }
}

#[test]
fn path_sum_fixes_the_cat_points() {
    let (p, m) = path_sum(PI, 0.0, 0.0, [FRAC_1_SQRT_2; 2]);
    assert!((p - 0.5).abs() < 1e-15 && (m - 0.5).abs() < 1e-15);
    let (p, _) = path_sum(PI / 2.0, 0.0, 0.0, [FRAC_1_SQRT_2; 2]);
    assert!((p - 0.75).abs() < 1e-15);
    let (p, _) = path_sum(0.0, 0.0, 0.0, [FRAC_1_SQRT_2; 2]);
    assert!((p - 1.0).abs() < 1e-15);
}

#[test]
fn definite_medium_reduces_to_scheme_two() {
    for k in 0..1000 {
        let d = 2.0 * PI * k as f64 / 999.0;
        let (p, m) = joint_state_probabilities(d, 0.0, 0.4, MediumState::DefiniteN2).unwrap();
        let (q, n) = scheme2_probabilities(d, 0.0);
        assert!((p - q).abs() <= 1e-12 && (m - n).abs() <= 1e-12);
    }
}

#[test]
fn cat_model_departs_from_scheme_one_between_agreement_points() {
    // agreement at 0 and π, disagreement at π/2 for every overlap tested
    for eta in [0.0, 0.1, 0.5, 0.9, 1.0] {
        let (p, _) = joint_state_probabilities(PI / 2.0, 0.0, eta, MediumState::Cat).unwrap();
        let (s, _) = scheme1_probabilities(PI / 2.0, 0.0);
        assert!((p - s).abs() > 1e-3, "eta={eta}");
    }
    let (p, _) = joint_state_probabilities(PI, 0.0, 0.0, MediumState::Cat).unwrap();
    assert!((p - scheme1_probabilities(PI, 0.0).0).abs() <= 1e-12);
}
