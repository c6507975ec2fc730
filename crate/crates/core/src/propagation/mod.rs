//! Optical phase through a cell, ray tracing in radial index fields, and
//! cosmological redshift.

mod phase;
mod ray;

pub use phase::{closed_form_phase, optical_phase, phase_difference_closed, phase_table, PhaseMethod, PhaseResult};
pub use ray::{
    capture_threshold, circular_orbit_radius, deflection_angle, deflection_for_law, far_field_radius, scattering_ray, trace_ray, Deflection, Ray,
    Termination, CAPTURE_MARGIN, FAR_FIELD, RAY_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::spacetime::{rw_index, SpacetimeSpec};

/// 1 + z = a(t_obs) / a(t_emit) for an RW spacetime.
pub fn redshift_factor(spec: &SpacetimeSpec, t_emit: f64, t_obs: f64) -> Result<f64> {
    if !(t_obs >= t_emit) {
        return Err(Error::param(
            "t_obs>=t_emit",
            format!("observation at {t_obs} precedes emission at {t_emit}"),
        ));
    }
    Ok(rw_index(spec, t_obs)? / rw_index(spec, t_emit)?)
}
