//! Vapor-cell design: axial index profile, control-beam intensity and the
//! attenuator transmission that sculpts it.
//!
//! The medium responds linearly to the (equal) control-beam intensities,
//! n − 1 = I·cosθ / C, so the dS profile 1 + ¼H²z² needs
//! I(z) = C·H²z² / (4 cosθ).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{uniform_grid, IndexLaw, IndexProfile};
use crate::spacetime::{rw_index, SpacetimeKind, SpacetimeSpec};
use crate::table::{Cell, Table};

pub const DEFAULT_GRID_SIZE: usize = 1001;
pub const DEFAULT_C_CONST: f64 = 1.0;

/// Which dS cell profile to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileForm {
    /// n₂(z) = 1 + ¼H²z²
    #[default]
    Quadratic,
    /// n(z) = 1 / (1 − ¼H²z²)
    Exact,
}

/// Axial profile n(z) on a uniform grid over [0, L], replacing n(r) by n(z)
/// along a narrow cylinder. RW media are homogeneous and sampled at t = 0.
pub fn axial_profile(
    spec: &SpacetimeSpec,
    length: f64,
    grid_size: usize,
    form: ProfileForm,
) -> Result<IndexProfile> {
    spec.validate()?;
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::param("L>0", format!("L = {length}")));
    }
    let law = match spec.kind {
        SpacetimeKind::Minkowski => IndexLaw::Uniform { n: 1.0 },
        SpacetimeKind::DeSitter => {
            let hl = spec.hubble * length;
            if hl >= 2.0 {
                return Err(Error::Domain {
                    kind: "dS",
                    position: length,
                    constraint: "HL<2",
                    singular_radius: 2.0 / spec.hubble,
                });
            }
            match form {
                ProfileForm::Quadratic => IndexLaw::QuadraticDeSitter {
                    hubble: spec.hubble,
                },
                ProfileForm::Exact => IndexLaw::Catalog { spec: *spec },
            }
        }
        SpacetimeKind::RobertsonWalker => IndexLaw::Uniform {
            n: rw_index(spec, 0.0)?,
        },
        _ => IndexLaw::Catalog { spec: *spec },
    };
    IndexProfile::from_law(law, (0.0, length), grid_size)
}

fn check_beam_geometry(c_const: f64, theta: f64) -> Result<f64> {
    if !(c_const > 0.0) || !c_const.is_finite() {
        return Err(Error::param("C>0", format!("C = {c_const}")));
    }
    let cos = theta.cos();
    if !(cos > 0.0) || theta.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Geometry(format!(
            "control-beam angle θ = {theta} rad needs cos θ > 0"
        )));
    }
    Ok(cos)
}

/// Common intensity I_c1(z) = I_c2(z) = C·H²z² / (4 cosθ) of both control beams.
pub fn control_intensity_profile(
    hubble: f64,
    c_const: f64,
    theta: f64,
    grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let cos = check_beam_geometry(c_const, theta)?;
    if !(hubble >= 0.0) {
        return Err(Error::param("H>=0", format!("H = {hubble}")));
    }
    Ok(grid
        .iter()
        .map(|&z| (z, c_const * hubble * hubble * z * z / (4.0 * cos)))
        .collect())
}

/// n = 1 + I·cosθ / C.
pub fn index_from_intensity(intensity: f64, c_const: f64, theta: f64) -> Result<f64> {
    let cos = check_beam_geometry(c_const, theta)?;
    if !(intensity >= 0.0) {
        return Err(Error::param("I>=0", format!("I = {intensity}")));
    }
    Ok(1.0 + intensity * cos / c_const)
}

/// Inverse of [`index_from_intensity`]; fails for n < 1, which index
/// enhancement cannot produce.
pub fn intensity_for_index(n: f64, c_const: f64, theta: f64) -> Result<f64> {
    let cos = check_beam_geometry(c_const, theta)?;
    if !(n >= 1.0) {
        return Err(Error::param(
            "I>=0",
            format!("n = {n} < 1 would need negative control intensity"),
        ));
    }
    Ok((n - 1.0) * c_const / cos)
}

/// Transmission T(z) = I(z) / I(L) of the graded attenuator.
///
/// Normalized to the intensity at the far end of the cell. An all-zero
/// profile (no beams needed) yields T ≡ 1.
pub fn attenuator_profile(intensity: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let &(_, i_end) = intensity
        .last()
        .ok_or_else(|| Error::param("intensity", "empty intensity profile"))?;
    if let Some(&(z, i)) = intensity.iter().find(|(_, i)| !(*i >= 0.0)) {
        return Err(Error::param("I>=0", format!("I({z}) = {i}")));
    }
    let max = intensity.iter().map(|p| p.1).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(intensity.iter().map(|&(z, _)| (z, 1.0)).collect());
    }
    if i_end < max {
        return Err(Error::param(
            "T<=1",
            "attenuator normalized to I(L) needs I(z) <= I(L) along the cell",
        ));
    }
    Ok(intensity.iter().map(|&(z, i)| (z, i / i_end)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellParams {
    pub length: f64,
    pub grid_size: usize,
    pub theta: f64,
    pub c_const: f64,
    pub form: ProfileForm,
}

impl CellParams {
    pub fn new(length: f64) -> Self {
        Self {
            length,
            grid_size: DEFAULT_GRID_SIZE,
            theta: 0.0,
            c_const: DEFAULT_C_CONST,
            form: ProfileForm::Quadratic,
        }
    }
}

/// Complete cell design. `intensity` is `None` when the profile dips below
/// n = 1 anywhere; `transmission` is `None` when no beam is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct CellDesign {
    pub spec: SpacetimeSpec,
    pub params: CellParams,
    pub profile: IndexProfile,
    pub intensity: Option<Vec<(f64, f64)>>,
    pub transmission: Option<Vec<(f64, f64)>>,
}

impl CellDesign {
    pub fn new(spec: &SpacetimeSpec, params: CellParams) -> Result<Self> {
        let profile = axial_profile(spec, params.length, params.grid_size, params.form)?;
        check_beam_geometry(params.c_const, params.theta)?;
        let quadratic = matches!(profile.law(), Some(IndexLaw::QuadraticDeSitter { .. }));
        let intensity = if quadratic {
            Some(control_intensity_profile(
                spec.hubble,
                params.c_const,
                params.theta,
                &profile.positions(),
            )?)
        } else if profile.values().iter().all(|&n| n >= 1.0) {
            Some(
                profile
                    .samples()
                    .iter()
                    .map(|&(z, n)| intensity_for_index(n, params.c_const, params.theta).map(|i| (z, i)))
                    .collect::<Result<Vec<_>>>()?,
            )
        } else {
            None
        };
        let transmission = match &intensity {
            Some(i) if i.iter().any(|p| p.1 > 0.0) => Some(attenuator_profile(i)?),
            _ => None,
        };
        Ok(Self {
            spec: *spec,
            params,
            profile,
            intensity,
            transmission,
        })
    }

    /// H·L, the dimensionless strength the s-wave validity depends on.
    pub fn hubble_length(&self) -> f64 {
        self.spec.hubble * self.params.length
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(0.0, self.params.length, self.params.grid_size)
    }

    /// Profile CSV `z_m,n[,I][,T]`; I and T appear only when realizable.
    pub fn table(&self) -> Table {
        let mut header = vec!["z_m", "n"];
        if self.intensity.is_some() {
            header.push("I");
        }
        if self.transmission.is_some() {
            header.push("T");
        }
        let mut table = Table::new(&header);
        for (k, &(z, n)) in self.profile.samples().iter().enumerate() {
            let mut row: Vec<Cell> = vec![z.into(), n.into()];
            if let Some(i) = &self.intensity {
                row.push(i[k].1.into());
            }
            if let Some(t) = &self.transmission {
                row.push(t[k].1.into());
            }
            table.push(row);
        }
        table
    }
}
