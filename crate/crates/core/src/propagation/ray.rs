//! Geometric-optics rays in a radial index field n(r), traced in the plane.
//!
//! State (x, y, p) with p = n·dx/ds:  dx/ds = p/n,  dp/ds = ∇n.
//! L = x·p_y − y·p_x is conserved for any radial n.

use crate::error::{Error, Result};
use crate::numerics::{brent, Dopri5, Tolerance};
use crate::profile::{IndexLaw, IndexProfile};
use crate::spacetime::SpacetimeKind;
use crate::table::Table;

pub const RAY_TOLERANCE: Tolerance = Tolerance::new(1e-10, 1e-10);

/// Rays stop this far (relative) from a singular radius.
pub const CAPTURE_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ArcBudget,
    ExitedDomain,
    /// Came within [`CAPTURE_MARGIN`] of a singular radius.
    SingularApproach,
}

#[derive(Debug, Clone)]
pub struct Ray {
    /// Arc length at each saved point.
    pub arc: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    /// Unit tangents.
    pub directions: Vec<[f64; 2]>,
    /// |L(s) − L₀| / scale, where scale is |L₀| or n₀|x₀| for radial rays.
    pub bouguer_drift: Vec<f64>,
    pub bouguer: f64,
    pub termination: Termination,
}

impl Ray {
    pub fn max_bouguer_drift(&self) -> f64 {
        self.bouguer_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn arc_length(&self) -> f64 {
        *self.arc.last().expect("rays keep their start point")
    }

    pub fn end(&self) -> ([f64; 2], [f64; 2]) {
        let k = self.points.len() - 1;
        (self.points[k], self.directions[k])
    }

    /// Cubic Hermite interpolation between saved points (|dx/ds| = 1).
    pub fn position_at(&self, s: f64) -> [f64; 2] {
        let k = match self.arc.binary_search_by(|a| a.total_cmp(&s)) {
            Ok(i) => return self.points[i],
            Err(0) => return self.points[0],
            Err(i) if i >= self.arc.len() => return self.points[self.arc.len() - 1],
            Err(i) => i - 1,
        };
        let h = self.arc[k + 1] - self.arc[k];
        let t = (s - self.arc[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let (p0, p1) = (self.points[k], self.points[k + 1]);
        let (d0, d1) = (self.directions[k], self.directions[k + 1]);
        [0, 1].map(|i| h00 * p0[i] + h10 * h * d0[i] + h01 * p1[i] + h11 * h * d1[i])
    }

    /// Ray CSV `s_m,x_m,y_m,bouguer_rel_drift`.
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["s_m", "x_m", "y_m", "bouguer_rel_drift"]);
        for k in 0..self.points.len() {
            let p = self.points[k];
            t.push(vec![
                self.arc[k].into(),
                p[0].into(),
                p[1].into(),
                self.bouguer_drift[k].into(),
            ]);
        }
        t
    }

    /// Total signed turning of the tangent, positive counter-clockwise.
    pub fn turning(&self) -> f64 {
        self.directions
            .windows(2)
            .map(|w| {
                let cross = w[0][0] * w[1][1] - w[0][1] * w[1][0];
                let dot = w[0][0] * w[1][0] + w[0][1] * w[1][1];
                cross.atan2(dot)
            })
            .sum()
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn near_singular(law: &IndexLaw, r: f64) -> bool {
    law.singular_radii().into_iter().any(|rs| (r - rs).abs() <= CAPTURE_MARGIN * rs)
}

/// Traces a ray through the law behind `profile`, whose domain is read as a
/// radial interval [r_min, r_max]. Stops on leaving that annulus, on
/// approaching a singular radius, or after `arc_budget`.
pub fn trace_ray(profile: &IndexProfile, start: [f64; 2], direction: [f64; 2], arc_budget: f64) -> Result<Ray> {
    let law = *profile
        .law()
        .ok_or_else(|| Error::param("law", "ray tracing needs an analytic index law"))?;
    trace_law(&law, profile.domain(), start, direction, arc_budget, None)
}

pub(crate) fn trace_law(
    law: &IndexLaw,
    domain: (f64, f64),
    start: [f64; 2],
    direction: [f64; 2],
    arc_budget: f64,
    max_step: Option<f64>,
) -> Result<Ray> {
    if !(arc_budget > 0.0) || !arc_budget.is_finite() {
        return Err(Error::param("arc_budget>0", format!("arc budget {arc_budget}")));
    }
    let d = norm(direction);
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::param("direction", "direction must be a non-zero vector"));
    }
    let r0 = norm(start);
    let slack = 1e-12 * domain.1.abs();
    if r0 < domain.0 - slack || r0 > domain.1 + slack {
        return Err(Error::param(
            "start-in-domain",
            format!("start radius {r0} outside [{}, {}]", domain.0, domain.1),
        ));
    }
    if near_singular(law, r0) {
        return Err(Error::Geometry(format!("ray starts at r = {r0}, too close to a singular radius")));
    }
    let n0 = law.eval(r0)?;
    let u0 = [direction[0] / d, direction[1] / d];
    let p0 = [n0 * u0[0], n0 * u0[1]];
    let bouguer = start[0] * p0[1] - start[1] * p0[0];
    let drift_scale = if bouguer != 0.0 { bouguer.abs() } else { (n0 * r0).max(f64::MIN_POSITIVE) };

    let law = *law;
    let rhs = move |_s: f64, y: &[f64; 4]| -> Option<[f64; 4]> {
        let r = y[0].hypot(y[1]);
        let n = law.eval(r).ok()?;
        let g = if r == 0.0 { 0.0 } else { law.gradient(r).ok()? };
        Some(grad_rhs(y, r, n, g))
    };
    let h0 = (1e-3 * r0.max(1e-3 * arc_budget)).min(arc_budget);
    let h_max = max_step.unwrap_or(arc_budget / 256.0);
    let mut stepper = Dopri5::new(rhs, 0.0, [start[0], start[1], p0[0], p0[1]], h0, RAY_TOLERANCE)?
        .with_max_step(h_max);

    let mut ray = Ray {
        arc: vec![0.0],
        points: vec![start],
        directions: vec![u0],
        bouguer_drift: vec![0.0],
        bouguer,
        termination: Termination::ArcBudget,
    };
    loop {
        let done = match stepper.step_toward(arc_budget) {
            Ok(done) => done,
            Err(Error::Integration(_)) if !law.singular_radii().is_empty() => {
                ray.termination = Termination::SingularApproach;
                break;
            }
            Err(e) => return Err(e),
        };
        let y = *stepper.y();
        let p = [y[2], y[3]];
        let pn = norm(p);
        let l = y[0] * y[3] - y[1] * y[2];
        ray.arc.push(stepper.t());
        ray.points.push([y[0], y[1]]);
        ray.directions.push([p[0] / pn, p[1] / pn]);
        ray.bouguer_drift.push((l - bouguer).abs() / drift_scale);
        let r = y[0].hypot(y[1]);
        if near_singular(&law, r) {
            ray.termination = Termination::SingularApproach;
            break;
        }
        if r > domain.1 || r < domain.0 {
            ray.termination = Termination::ExitedDomain;
            break;
        }
        if done {
            break;
        }
    }
    Ok(ray)
}

fn grad_rhs(y: &[f64; 4], r: f64, n: f64, g: f64) -> [f64; 4] {
    let (gx, gy) = if r == 0.0 { (0.0, 0.0) } else { (g * y[0] / r, g * y[1] / r) };
    [y[2] / n, y[3] / n, gx, gy]
}

/// Outcome of a scattering experiment at impact parameter b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deflection {
    /// Extrapolated total bending, positive toward the centre.
    Angle {
        angle: f64,
        /// Raw bending measured from launch radii R and 2R.
        raw: [f64; 2],
        far_field: f64,
        /// Worst Bouguer drift over both scattering rays.
        max_bouguer_drift: f64,
    },
    Captured {
        closest_radius: f64,
    },
}

impl Deflection {
    pub fn is_captured(&self) -> bool {
        matches!(self, Deflection::Captured { .. })
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Deflection::Angle { angle, .. } => Some(*angle),
            Deflection::Captured { .. } => None,
        }
    }
}

/// Length scale of an asymptotically flat law; errors for laws that do not
/// reach a constant index at infinity.
fn far_scale(law: &IndexLaw, b: f64) -> Result<f64> {
    match law {
        IndexLaw::Uniform { .. } => Ok(b),
        IndexLaw::Catalog { spec } => match spec.kind {
            SpacetimeKind::Minkowski => Ok(b),
            SpacetimeKind::BlackHole => Ok(spec.mass.max(f64::MIN_POSITIVE)),
            SpacetimeKind::DeSitterBlackHole | SpacetimeKind::AntiDeSitterBlackHole if spec.hubble == 0.0 => {
                Ok(spec.mass.max(f64::MIN_POSITIVE))
            }
            _ => Err(Error::param(
                "asymptotically-flat",
                format!("{} has no far-field asymptote for a scattering ray", spec.kind),
            )),
        },
        IndexLaw::QuadraticDeSitter { .. } => Err(Error::param(
            "asymptotically-flat",
            "the quadratic cell law grows without bound",
        )),
    }
}

/// Far-field launch radius in units of the law's length scale.
pub const FAR_FIELD: f64 = 1e4;

/// Ray launched at `radius` moving along +x with Bouguer invariant `b`, traced
/// until it leaves the launch circle, is captured, or runs out of arc.
pub fn scattering_ray(law: &IndexLaw, b: f64, radius: f64) -> Result<Ray> {
    let scale = far_scale(law, b)?;
    if !(radius > b) || !radius.is_finite() {
        return Err(Error::param("launch_radius>b", format!("launch radius {radius} for b = {b}")));
    }
    Ok(scatter(law, b, radius, scale)?.0)
}

/// Default launch radius for a deflection measurement at `b`.
pub fn far_field_radius(law: &IndexLaw, b: f64) -> Result<f64> {
    Ok(FAR_FIELD * far_scale(law, b)?.max(b))
}

fn scatter(law: &IndexLaw, b: f64, radius: f64, scale: f64) -> Result<(Ray, f64)> {
    let n_far = law.eval(radius)?;
    let y0 = b / n_far;
    let x0 = -(radius * radius - y0 * y0).sqrt();
    // enough arc to cross twice plus a few hundred orbits near the photon sphere
    let budget = 4.0 * radius + 2000.0 * scale;
    let ray = trace_law(law, (0.0, radius), [x0, y0], [1.0, 0.0], budget, Some(radius / 64.0))?;
    Ok((ray, n_far))
}

/// Scatters a ray of impact parameter `b` off the law behind `profile`.
///
/// Launches from R = 10⁴ and 2·10⁴ length scales with L = b and removes the
/// O(1/R²) truncation of the asymptotes by Richardson extrapolation.
pub fn deflection_angle(profile: &IndexProfile, b: f64) -> Result<Deflection> {
    let law = profile
        .law()
        .ok_or_else(|| Error::param("law", "deflection needs an analytic index law"))?;
    deflection_for_law(law, b)
}

pub fn deflection_for_law(law: &IndexLaw, b: f64) -> Result<Deflection> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::param("b>0", format!("impact parameter {b}")));
    }
    let scale = far_scale(law, b)?;
    let r1 = far_field_radius(law, b)?;
    let mut raw = [0.0; 2];
    let mut drift: f64 = 0.0;
    for (k, radius) in [r1, 2.0 * r1].into_iter().enumerate() {
        let (ray, _) = scatter(law, b, radius, scale)?;
        if ray.termination != Termination::ExitedDomain || ray.points.last().map(|p| norm(*p) < radius).unwrap_or(true)
        {
            let closest = ray.points.iter().map(|p| norm(*p)).fold(f64::INFINITY, f64::min);
            return Ok(Deflection::Captured { closest_radius: closest });
        }
        // launched above the centre moving +x: attraction turns clockwise
        raw[k] = -ray.turning();
        drift = drift.max(ray.max_bouguer_drift());
    }
    Ok(Deflection::Angle {
        angle: (4.0 * raw[1] - raw[0]) / 3.0,
        raw,
        far_field: r1,
        max_bouguer_drift: drift,
    })
}

/// Radius of the circular light orbit, where d(n r)/dr = 0, searched in
/// `bracket`.
pub fn circular_orbit_radius(law: &IndexLaw, bracket: (f64, f64)) -> Result<f64> {
    let g = |r: f64| -> f64 {
        match (law.eval(r), law.gradient(r)) {
            (Ok(n), Ok(dn)) => n + r * dn,
            _ => f64::NAN,
        }
    };
    let xtol = 1e-15 * bracket.1.abs().max(bracket.0.abs());
    brent(g, bracket.0, bracket.1, xtol)
}

/// Bisects on b between a captured and a scattered impact parameter.
pub fn capture_threshold(law: &IndexLaw, captured_b: f64, escaping_b: f64, rel_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (captured_b, escaping_b);
    if !deflection_for_law(law, lo)?.is_captured() || deflection_for_law(law, hi)?.is_captured() {
        return Err(Error::param(
            "bracket",
            "capture threshold bracket must straddle the capture transition",
        ));
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if deflection_for_law(law, mid)?.is_captured() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
