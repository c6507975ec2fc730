use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{simpson_uniform, uniform_spacing};
use crate::profile::IndexProfile;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    ClosedForm,
    Quadrature,
}

impl PhaseMethod {
    pub fn name(self) -> &'static str {
        match self {
            PhaseMethod::ClosedForm => "closed_form",
            PhaseMethod::Quadrature => "quadrature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    /// Accumulated phase through the medium arm.
    pub phi: f64,
    /// Excess over the vacuum arm of the same length.
    pub delta_phi: f64,
    pub method: PhaseMethod,
    pub lambda0: f64,
}

fn check_wavelength(lambda0: f64) -> Result<()> {
    if !(lambda0 > 0.0) || !lambda0.is_finite() {
        return Err(Error::param("lambda0>0", format!("λ₀ = {lambda0}")));
    }
    Ok(())
}

/// φ = (2π/λ₀)∫n dz and Δφ = (2π/λ₀)∫(n − 1) dz by composite Simpson on the
/// profile's uniform grid.
pub fn optical_phase(profile: &IndexProfile, lambda0: f64) -> Result<PhaseResult> {
    check_wavelength(lambda0)?;
    let positions = profile.positions();
    let h = uniform_spacing(&positions, 1e-9)?;
    let values = profile.values();
    let excess: Vec<f64> = values.iter().map(|n| n - 1.0).collect();
    let k = 2.0 * PI / lambda0;
    let length = positions[positions.len() - 1] - positions[0];
    let delta = k * simpson_uniform(&excess, h)?;
    Ok(PhaseResult {
        phi: k * length + delta,
        delta_phi: delta,
        method: PhaseMethod::Quadrature,
        lambda0,
    })
}

/// Δφ = πH²L³ / (6λ₀) for the quadratic dS cell against an empty arm.
pub fn phase_difference_closed(hubble: f64, length: f64, lambda0: f64) -> Result<f64> {
    check_wavelength(lambda0)?;
    if !(hubble >= 0.0) || !hubble.is_finite() {
        return Err(Error::param("H>=0", format!("H = {hubble}")));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::param("L>0", format!("L = {length}")));
    }
    Ok(PI * hubble * hubble * length.powi(3) / (6.0 * lambda0))
}

pub fn closed_form_phase(hubble: f64, length: f64, lambda0: f64) -> Result<PhaseResult> {
    let delta = phase_difference_closed(hubble, length, lambda0)?;
    Ok(PhaseResult {
        phi: 2.0 * PI * length / lambda0 + delta,
        delta_phi: delta,
        method: PhaseMethod::ClosedForm,
        lambda0,
    })
}

/// Phase CSV `H,L,lambda0,delta_phi_rad,delta_phi_over_pi,method`; one row
/// per (H, L, result).
pub fn phase_table(rows: &[(f64, f64, PhaseResult)]) -> Table {
    let mut t = Table::new(&["H", "L", "lambda0", "delta_phi_rad", "delta_phi_over_pi", "method"]);
    for (h, l, r) in rows {
        t.push(vec![
            (*h).into(),
            (*l).into(),
            r.lambda0.into(),
            r.delta_phi.into(),
            (r.delta_phi / PI).into(),
            r.method.name().into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::{axial_profile, ProfileForm};
    use crate::spacetime::SpacetimeSpec;

    #[test]
    fn vacuum_arm_has_no_excess() {
        let p = IndexProfile::uniform(1.0, (0.0, 0.01), 101).unwrap();
        let r = optical_phase(&p, 780e-9).unwrap();
        assert_eq!(r.delta_phi, 0.0);
        assert!((r.phi - 2.0 * PI * 0.01 / 780e-9).abs() < 1e-9 * r.phi);
    }

    #[test]
    fn constant_index_one_and_a_half() {
        let (l, lam) = (0.02, 633e-9);
        let p = IndexProfile::uniform(1.5, (0.0, l), 200).unwrap();
        let r = optical_phase(&p, lam).unwrap();
        assert!((r.delta_phi - PI * l / lam).abs() < 1e-10 * r.delta_phi);
    }

    #[test]
    fn quadratic_cell_paper_point() {
        // H²L³/(6λ₀) = 1e-4 / (6 · 7.8e-7)
        let p = axial_profile(&SpacetimeSpec::de_sitter(10.0), 0.01, 1001, ProfileForm::Quadratic).unwrap();
        let r = optical_phase(&p, 780e-9).unwrap();
        let expected = 1e-4 / (6.0 * 7.8e-7);
        assert!((r.delta_phi / PI - expected).abs() < 1e-9 * expected);
        assert!((expected - 21.368).abs() < 1e-3);
        assert!(r.phi >= 2.0 * PI * 0.01 / 780e-9);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(phase_difference_closed(0.0, 0.01, 780e-9).unwrap(), 0.0);
        let d = phase_difference_closed(5.0, 0.01, 780e-9).unwrap() / PI;
        assert!((d - 25e-6 / (6.0 * 7.8e-7)).abs() < 1e-12);
        assert!((d - 5.342).abs() < 1e-3);
        assert!(phase_difference_closed(1.0, 0.01, 0.0).is_err());
        assert!(phase_difference_closed(1.0, -0.01, 1e-6).is_err());
    }
}
