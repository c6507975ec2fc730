//! Metric families and their dielectric analogues.
//!
//! Two independent routes to the refractive index live here: the closed-form
//! catalog ([`closed_form_index`]) and a first-principles evaluation that
//! builds the isotropic chart by integrating the coordinate transformation
//! ([`numeric_index`]). Each serves as the oracle for the other.

mod isotropic;
mod tensor;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use isotropic::{isotropic_transform, numeric_index, IsotropicChart, StaticMetric};
pub use tensor::{tensor_index, Chart, MetricForm, TensorIndex};

/// Evaluations closer than this (relative) to a singular radius are refused.
pub const SINGULAR_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpacetimeKind {
    #[serde(rename = "Min")]
    Minkowski,
    #[serde(rename = "BH")]
    BlackHole,
    #[serde(rename = "dS")]
    DeSitter,
    #[serde(rename = "dS-BH")]
    DeSitterBlackHole,
    #[serde(rename = "AdS")]
    AntiDeSitter,
    #[serde(rename = "AdS-BH")]
    AntiDeSitterBlackHole,
    #[serde(rename = "RW")]
    RobertsonWalker,
}

impl SpacetimeKind {
    pub const ALL: [SpacetimeKind; 7] = [
        SpacetimeKind::Minkowski,
        SpacetimeKind::BlackHole,
        SpacetimeKind::DeSitter,
        SpacetimeKind::DeSitterBlackHole,
        SpacetimeKind::AntiDeSitter,
        SpacetimeKind::AntiDeSitterBlackHole,
        SpacetimeKind::RobertsonWalker,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpacetimeKind::Minkowski => "Min",
            SpacetimeKind::BlackHole => "BH",
            SpacetimeKind::DeSitter => "dS",
            SpacetimeKind::DeSitterBlackHole => "dS-BH",
            SpacetimeKind::AntiDeSitter => "AdS",
            SpacetimeKind::AntiDeSitterBlackHole => "AdS-BH",
            SpacetimeKind::RobertsonWalker => "RW",
        }
    }

    fn uses_hubble(self) -> bool {
        matches!(
            self,
            SpacetimeKind::DeSitter
                | SpacetimeKind::DeSitterBlackHole
                | SpacetimeKind::AntiDeSitter
                | SpacetimeKind::AntiDeSitterBlackHole
        )
    }

    fn uses_mass(self) -> bool {
        matches!(
            self,
            SpacetimeKind::BlackHole
                | SpacetimeKind::DeSitterBlackHole
                | SpacetimeKind::AntiDeSitterBlackHole
        )
    }

    /// Sign of the H² term in the lapse: +1 for dS-like, -1 for AdS-like.
    fn curvature_sign(self) -> f64 {
        match self {
            SpacetimeKind::DeSitter | SpacetimeKind::DeSitterBlackHole => 1.0,
            SpacetimeKind::AntiDeSitter | SpacetimeKind::AntiDeSitterBlackHole => -1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for SpacetimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpacetimeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpacetimeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param("kind", format!("unknown spacetime kind `{s}`")))
    }
}

/// Scale factor a(t) of an expanding universe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScaleFactor {
    /// a(t) = exp(rate·t); the de Sitter expansion when rate = H.
    Exp { rate: f64 },
    /// a(t) = (t/t0)^exponent for t > 0.
    PowerLaw { t0: f64, exponent: f64 },
    Constant { value: f64 },
}

impl ScaleFactor {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScaleFactor::Exp { rate } if !rate.is_finite() => {
                Err(Error::param("scale_factor.rate", "must be finite"))
            }
            ScaleFactor::PowerLaw { t0, exponent } if !(t0 > 0.0) || !exponent.is_finite() => Err(
                Error::param("scale_factor.t0", "power law needs t0 > 0 and a finite exponent"),
            ),
            ScaleFactor::Constant { value } if !(value > 0.0) || !value.is_finite() => {
                Err(Error::param("a(t)>0", "constant scale factor must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::param("t", "time must be finite"));
        }
        match *self {
            ScaleFactor::Exp { rate } => Ok((rate * t).exp()),
            ScaleFactor::PowerLaw { t0, exponent } => {
                if t <= 0.0 {
                    Err(Error::Domain {
                        kind: "RW",
                        position: t,
                        constraint: "t>0",
                        singular_radius: 0.0,
                    })
                } else {
                    Ok((t / t0).powf(exponent))
                }
            }
            ScaleFactor::Constant { value } => Ok(value),
        }
    }
}

/// A named metric family with its parameters. `hubble` carries 1/m and
/// `mass` carries m (geometric units in the lab analog).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeSpec {
    pub kind: SpacetimeKind,
    pub hubble: f64,
    pub mass: f64,
    pub scale_factor: Option<ScaleFactor>,
}

impl SpacetimeSpec {
    pub fn minkowski() -> Self {
        Self::raw(SpacetimeKind::Minkowski, 0.0, 0.0)
    }

    pub fn black_hole(mass: f64) -> Self {
        Self::raw(SpacetimeKind::BlackHole, 0.0, mass)
    }

    pub fn de_sitter(hubble: f64) -> Self {
        Self::raw(SpacetimeKind::DeSitter, hubble, 0.0)
    }

    pub fn anti_de_sitter(hubble: f64) -> Self {
        Self::raw(SpacetimeKind::AntiDeSitter, hubble, 0.0)
    }

    pub fn de_sitter_black_hole(hubble: f64, mass: f64) -> Self {
        Self::raw(SpacetimeKind::DeSitterBlackHole, hubble, mass)
    }

    pub fn anti_de_sitter_black_hole(hubble: f64, mass: f64) -> Self {
        Self::raw(SpacetimeKind::AntiDeSitterBlackHole, hubble, mass)
    }

    pub fn robertson_walker(scale_factor: ScaleFactor) -> Self {
        Self {
            kind: SpacetimeKind::RobertsonWalker,
            hubble: 0.0,
            mass: 0.0,
            scale_factor: Some(scale_factor),
        }
    }

    fn raw(kind: SpacetimeKind, hubble: f64, mass: f64) -> Self {
        Self {
            kind,
            hubble,
            mass,
            scale_factor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hubble >= 0.0) || !self.hubble.is_finite() {
            return Err(Error::param("H>=0", format!("H = {}", self.hubble)));
        }
        if !(self.mass >= 0.0) || !self.mass.is_finite() {
            return Err(Error::param("M>=0", format!("M = {}", self.mass)));
        }
        if !self.kind.uses_hubble() && self.hubble != 0.0 {
            return Err(Error::param(
                "unused-parameter",
                format!("{} takes no Hubble parameter", self.kind),
            ));
        }
        if !self.kind.uses_mass() && self.mass != 0.0 {
            return Err(Error::param(
                "unused-parameter",
                format!("{} takes no mass parameter", self.kind),
            ));
        }
        match (self.kind, &self.scale_factor) {
            (SpacetimeKind::RobertsonWalker, Some(a)) => a.validate(),
            (SpacetimeKind::RobertsonWalker, None) => Err(Error::param(
                "scale_factor",
                "RW spacetime needs a scale factor",
            )),
            (_, Some(_)) => Err(Error::param(
                "unused-parameter",
                format!("{} takes no scale factor", self.kind),
            )),
            (_, None) => Ok(()),
        }
    }

    /// The static lapse f(r̄) = 1 − s·H²r̄² − 2M/r̄ for this family.
    pub fn static_metric(&self) -> Result<StaticMetric> {
        self.validate()?;
        if self.kind == SpacetimeKind::RobertsonWalker {
            return Err(Error::param(
                "kind",
                "RW is time dependent and has no static lapse",
            ));
        }
        StaticMetric::new(
            self.kind.curvature_sign() * self.hubble * self.hubble,
            self.mass,
        )
    }
}

/// Whether a catalog value is exact or a truncated expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accuracy {
    Exact,
    LeadingOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexValue {
    pub n: f64,
    pub accuracy: Accuracy,
}

fn check_radius(spec: &SpacetimeSpec, r: f64) -> Result<()> {
    let kind = spec.kind.name();
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            kind,
            position: r,
            constraint: "r>=0",
            singular_radius: 0.0,
        });
    }
    if spec.kind.uses_mass() {
        let rs = 0.5 * spec.mass;
        if r <= rs * (1.0 + SINGULAR_MARGIN) {
            return Err(Error::Domain {
                kind,
                position: r,
                constraint: "r>M/2",
                singular_radius: rs,
            });
        }
    }
    if spec.kind.curvature_sign() > 0.0 && spec.hubble > 0.0 {
        let rs = 2.0 / spec.hubble;
        if r >= rs * (1.0 - SINGULAR_MARGIN) {
            return Err(Error::Domain {
                kind,
                position: r,
                constraint: "Hr<2",
                singular_radius: rs,
            });
        }
    }
    Ok(())
}

/// Catalog refractive index n(r) in isotropic coordinates.
///
/// The dS-BH and AdS-BH rows are leading-order expansions and are flagged as
/// such. RW is homogeneous and time dependent; use [`rw_index`].
pub fn closed_form_index(spec: &SpacetimeSpec, r: f64) -> Result<IndexValue> {
    spec.validate()?;
    check_radius(spec, r)?;
    let h2 = spec.hubble * spec.hubble;
    let m = spec.mass;
    let (n, accuracy) = match spec.kind {
        SpacetimeKind::Minkowski => (1.0, Accuracy::Exact),
        SpacetimeKind::BlackHole => {
            let num = (m + 2.0 * r).powi(3);
            (num / (4.0 * r * r * (2.0 * r - m)), Accuracy::Exact)
        }
        SpacetimeKind::DeSitter => (1.0 / (1.0 - 0.25 * h2 * r * r), Accuracy::Exact),
        SpacetimeKind::AntiDeSitter => (1.0 / (1.0 + 0.25 * h2 * r * r), Accuracy::Exact),
        SpacetimeKind::DeSitterBlackHole => (
            1.0 + 0.25 * h2 * r * r + mass_term(m, r),
            Accuracy::LeadingOrder,
        ),
        SpacetimeKind::AntiDeSitterBlackHole => (
            1.0 - 0.25 * h2 * r * r + mass_term(m, r),
            Accuracy::LeadingOrder,
        ),
        SpacetimeKind::RobertsonWalker => {
            return Err(Error::param(
                "kind",
                "RW index depends on time, not radius; use rw_index",
            ))
        }
    };
    Ok(IndexValue { n, accuracy })
}

fn mass_term(m: f64, r: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        2.0 * m / r
    }
}

/// Radial derivative dn/dr of the catalog index (for ray tracing).
pub fn closed_form_gradient(spec: &SpacetimeSpec, r: f64) -> Result<f64> {
    let n = closed_form_index(spec, r)?.n;
    let h2 = spec.hubble * spec.hubble;
    let m = spec.mass;
    Ok(match spec.kind {
        SpacetimeKind::Minkowski | SpacetimeKind::RobertsonWalker => 0.0,
        SpacetimeKind::BlackHole => {
            let g = (m + 2.0 * r).powi(3);
            let dg = 6.0 * (m + 2.0 * r).powi(2);
            let h = 4.0 * r * r * (2.0 * r - m);
            let dh = 24.0 * r * r - 8.0 * m * r;
            (dg * h - g * dh) / (h * h)
        }
        SpacetimeKind::DeSitter => 0.5 * h2 * r * n * n,
        SpacetimeKind::AntiDeSitter => -0.5 * h2 * r * n * n,
        SpacetimeKind::DeSitterBlackHole => 0.5 * h2 * r - mass_gradient(m, r),
        SpacetimeKind::AntiDeSitterBlackHole => -0.5 * h2 * r - mass_gradient(m, r),
    })
}

fn mass_gradient(m: f64, r: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        2.0 * m / (r * r)
    }
}

/// Index of the homogeneous medium mimicking an expanding universe: n = a(t).
pub fn rw_index(spec: &SpacetimeSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    match (spec.kind, spec.scale_factor) {
        (SpacetimeKind::RobertsonWalker, Some(a)) => a.eval(t),
        _ => Err(Error::param("kind", "rw_index needs an RW spacetime")),
    }
}
