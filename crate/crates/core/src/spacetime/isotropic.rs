//! Static metrics and the isotropic chart r̄ ↔ r obtained by integrating
//! d ln r = dr̄ / (r̄ √f(r̄)).
//!
//! The chart is normalized so that r → r̄ in the flat limit: at the origin
//! when there is no mass, at infinity for a pure black hole. For metrics
//! carrying both a mass and a cosmological term neither limit is inside the
//! static region; there the first-order series ln(r/r̄) ≈ −M/r̄ + λr̄²/4 is
//! imposed at r̄ = (M/|λ|)^{1/3}, which reproduces the leading-order catalog
//! rows and differs from any other choice only at second order.

use crate::error::{Error, Result};
use crate::numerics::{brent, integrate, Tolerance};

use super::SINGULAR_MARGIN;

/// Static lapse f(r̄) = 1 − λr̄² − 2M/r̄ with λ = ±H².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticMetric {
    curvature: f64,
    mass: f64,
    inner: Option<f64>,
    outer: Option<f64>,
}

impl StaticMetric {
    /// `curvature` is λ (H² for dS, −H² for AdS), `mass` is M.
    pub fn new(curvature: f64, mass: f64) -> Result<Self> {
        if !curvature.is_finite() {
            return Err(Error::param("curvature", "must be finite"));
        }
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::param("M>=0", format!("M = {mass}")));
        }
        let (inner, outer) = horizons(curvature, mass)?;
        Ok(Self {
            curvature,
            mass,
            inner,
            outer,
        })
    }

    pub fn minkowski() -> Self {
        Self {
            curvature: 0.0,
            mass: 0.0,
            inner: None,
            outer: None,
        }
    }

    pub fn curvature(&self) -> f64 {
        self.curvature
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Horizon radii bounding the static region, if any.
    pub fn horizons(&self) -> (Option<f64>, Option<f64>) {
        (self.inner, self.outer)
    }

    /// Interval of r̄ where f > 0.
    pub fn static_domain(&self) -> (f64, f64) {
        (
            self.inner.unwrap_or(0.0),
            self.outer.unwrap_or(f64::INFINITY),
        )
    }

    /// 1 − f, evaluated without cancellation.
    fn deficit(&self, x: f64) -> f64 {
        let mass = if self.mass == 0.0 {
            0.0
        } else {
            2.0 * self.mass / x
        };
        self.curvature * x * x + mass
    }

    /// f(r̄). Near a horizon the factored form keeps relative accuracy.
    pub fn lapse(&self, x: f64) -> f64 {
        match (self.inner, self.outer) {
            (Some(h), _) => (x - h) * self.q_inner(x),
            (None, Some(c)) => (c - x) * self.q_outer(x),
            (None, None) => 1.0 - self.deficit(x),
        }
    }

    /// f / (r̄ − h) for the inner horizon h.
    fn q_inner(&self, x: f64) -> f64 {
        let h = self.inner.expect("inner horizon");
        let l = self.curvature;
        if l == 0.0 {
            1.0 / x
        } else if l > 0.0 {
            let c = self.outer.expect("outer horizon");
            l * (c - x) * (x + h + c) / x
        } else {
            let a = -l;
            a * (x * x + h * x + h * h + 1.0 / a) / x
        }
    }

    /// f / (c − r̄) for the outer horizon c.
    fn q_outer(&self, x: f64) -> f64 {
        let c = self.outer.expect("outer horizon");
        let l = self.curvature;
        match self.inner {
            None => l * (c + x),
            Some(h) => l * (x - h) * (x + h + c) / x,
        }
    }

    fn check_static(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.static_domain();
        if !(x > lo && x < hi) || !(self.lapse(x) > 0.0) {
            if self.mass == 0.0 && x == 0.0 {
                return Ok(());
            }
            return Err(Error::Horizon {
                radius: x,
                lapse: self.lapse(x),
                lower: lo,
                upper: hi,
            });
        }
        Ok(())
    }
}

fn horizons(l: f64, m: f64) -> Result<(Option<f64>, Option<f64>)> {
    let cubic = |x: f64| x - l * x * x * x - 2.0 * m;
    if m == 0.0 {
        let outer = (l > 0.0).then(|| 1.0 / l.sqrt());
        return Ok((None, outer));
    }
    if l == 0.0 {
        return Ok((Some(2.0 * m), None));
    }
    if l < 0.0 {
        let h = brent(cubic, 0.0, 2.0 * m, 1e-16 * m)?;
        return Ok((Some(h), None));
    }
    let peak = 1.0 / (3.0 * l).sqrt();
    if cubic(peak) <= 0.0 {
        return Err(Error::param(
            "static-region",
            format!("27·H²·M² = {} >= 1 leaves no region with f > 0", 27.0 * l * m * m),
        ));
    }
    let h = brent(cubic, 2.0 * m, peak, 1e-16 * peak)?;
    let c = brent(cubic, peak, 1.0 / l.sqrt(), 1e-16 * peak)?;
    Ok((Some(h), Some(c)))
}

const CHART_TOL: Tolerance = Tolerance::new(1e-12, 1e-15);

#[derive(Debug, Clone, Copy, PartialEq)]
enum Anchor {
    Origin,
    Infinity,
    Interior { x: f64, log_ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Zone {
    /// r̄ = h + w²
    Inner,
    /// r̄ = c − w²
    Outer,
    /// r̄ itself
    Plain,
    /// t = 1/r̄
    Reciprocal,
}

/// Numerical isotropic chart of a static metric.
#[derive(Debug, Clone, Copy)]
pub struct IsotropicChart {
    metric: StaticMetric,
    anchor: Anchor,
    inner_edge: Option<f64>,
    outer_edge: Option<f64>,
    r_lower: f64,
    r_upper: f64,
}

impl IsotropicChart {
    pub fn new(metric: StaticMetric) -> Result<Self> {
        let (inner, outer) = metric.horizons();
        let (inner_edge, outer_edge) = match (inner, outer) {
            (Some(h), Some(c)) => (Some(h + 0.25 * (c - h)), Some(c - 0.25 * (c - h))),
            (Some(h), None) => (Some(2.0 * h), None),
            (None, Some(c)) => (None, Some(0.5 * c)),
            (None, None) => (None, None),
        };
        let anchor = if metric.mass == 0.0 {
            Anchor::Origin
        } else if metric.curvature == 0.0 {
            Anchor::Infinity
        } else {
            // f is stationary at (M/λ)^{1/3} for dS-like metrics; for AdS-like
            // ones that point can sit inside the horizon when |λ|M² >= 1
            let star = (metric.mass / metric.curvature.abs()).cbrt();
            let x = match inner {
                Some(h) if star <= h => 2.0 * h,
                _ => star,
            };
            Anchor::Interior {
                x,
                log_ratio: -metric.mass / x + 0.25 * metric.curvature * x * x,
            }
        };
        let mut chart = Self {
            metric,
            anchor,
            inner_edge,
            outer_edge,
            r_lower: 0.0,
            r_upper: f64::INFINITY,
        };
        if let Some(h) = inner {
            chart.r_lower = h * chart.log_ratio(h)?.exp();
        }
        if let Some(c) = outer {
            chart.r_upper = c * chart.log_ratio(c)?.exp();
        } else if metric.curvature < 0.0 {
            chart.r_upper = chart.boundary_at_infinity()?;
        }
        Ok(chart)
    }

    pub fn metric(&self) -> &StaticMetric {
        &self.metric
    }

    /// Open interval of isotropic radius r covered by the static region.
    pub fn domain(&self) -> (f64, f64) {
        (self.r_lower, self.r_upper)
    }

    /// ln(r/r̄) at areal radius r̄ (horizons themselves allowed).
    fn log_ratio(&self, x: f64) -> Result<f64> {
        let (start, y0) = match self.anchor {
            Anchor::Origin => (0.0, 0.0),
            Anchor::Infinity => (f64::INFINITY, 0.0),
            Anchor::Interior { x, log_ratio } => (x, log_ratio),
        };
        let mut cuts: Vec<f64> = [self.inner_edge, self.outer_edge]
            .into_iter()
            .flatten()
            .filter(|&b| (b > start.min(x)) && (b < start.max(x)))
            .collect();
        if x < start {
            cuts.sort_by(|a, b| b.total_cmp(a));
        } else {
            cuts.sort_by(|a, b| a.total_cmp(b));
        }
        let mut y = y0;
        let mut from = start;
        for to in cuts.into_iter().chain(std::iter::once(x)) {
            y += self.segment(from, to)?;
            from = to;
        }
        Ok(y)
    }

    fn zone_of(&self, a: f64, b: f64) -> Zone {
        let (lo, hi) = (a.min(b), a.max(b));
        if let (Some(_), Some(edge)) = (self.metric.inner, self.inner_edge) {
            if hi <= edge {
                return Zone::Inner;
            }
        }
        if let (Some(_), Some(edge)) = (self.metric.outer, self.outer_edge) {
            if lo >= edge {
                return Zone::Outer;
            }
        }
        if self.anchor == Anchor::Infinity {
            Zone::Reciprocal
        } else {
            Zone::Plain
        }
    }

    /// ∫ d ln(r/r̄) from r̄ = a to r̄ = b within a single zone.
    fn segment(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let m = self.metric;
        let zone = self.zone_of(a, b);
        let (va, vb) = match zone {
            Zone::Inner => {
                let h = m.inner.unwrap();
                ((a - h).max(0.0).sqrt(), (b - h).max(0.0).sqrt())
            }
            Zone::Outer => {
                let c = m.outer.unwrap();
                ((c - a).max(0.0).sqrt(), (c - b).max(0.0).sqrt())
            }
            Zone::Plain => (a, b),
            Zone::Reciprocal => (1.0 / a, 1.0 / b),
        };
        let rhs = move |v: f64, _: &[f64; 1]| -> Option<[f64; 1]> {
            let d = match zone {
                Zone::Inner => {
                    let h = m.inner.unwrap();
                    let x = h + v * v;
                    let sq = m.q_inner(x).sqrt();
                    let sf = v * sq;
                    2.0 * m.deficit(x) / (x * sq * (1.0 + sf))
                }
                Zone::Outer => {
                    let c = m.outer.unwrap();
                    let x = c - v * v;
                    let sq = m.q_outer(x).sqrt();
                    let sf = v * sq;
                    -2.0 * m.deficit(x) / (x * sq * (1.0 + sf))
                }
                Zone::Plain => {
                    if v == 0.0 {
                        0.0
                    } else {
                        let f = m.lapse(v);
                        if !(f > 0.0) {
                            return None;
                        }
                        let sf = f.sqrt();
                        m.deficit(v) / (v * sf * (1.0 + sf))
                    }
                }
                Zone::Reciprocal => {
                    // only used with λ = 0: d/dt = −2M / (√f (1 + √f))
                    let f = if v == 0.0 { 1.0 } else { m.lapse(1.0 / v) };
                    if !(f > 0.0) {
                        return None;
                    }
                    let sf = f.sqrt();
                    -2.0 * m.mass / (sf * (1.0 + sf))
                }
            };
            d.is_finite().then_some([d])
        };
        Ok(integrate(rhs, va, [0.0], vb, CHART_TOL)?[0])
    }

    /// ln r at r̄ → ∞ for AdS-like metrics (finite conformal boundary).
    fn boundary_at_infinity(&self) -> Result<f64> {
        let m = self.metric;
        let x_b = match self.anchor {
            Anchor::Interior { x, .. } => x,
            _ => 1.0 / m.curvature.abs().sqrt(),
        };
        let base = x_b.ln() + self.log_ratio(x_b)?;
        // ∫ dr̄/(r̄√f) from x_b to ∞ with t = 1/r̄
        let rhs = |t: f64, _: &[f64; 1]| {
            let s = t * t - m.curvature - 2.0 * m.mass * t * t * t;
            (s > 0.0).then(|| [1.0 / s.sqrt()])
        };
        let tail = integrate(rhs, 0.0, [0.0], 1.0 / x_b, CHART_TOL)?[0];
        Ok((base + tail).exp())
    }

    /// Isotropic radius r for areal radius r̄ (numeric route).
    pub fn iso_radius(&self, x: f64) -> Result<f64> {
        self.metric.check_static(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        Ok(x * self.log_ratio(x)?.exp())
    }

    fn check_iso(&self, r: f64) -> Result<()> {
        let lower_ok = if self.r_lower > 0.0 {
            r > self.r_lower * (1.0 + SINGULAR_MARGIN)
        } else {
            r >= 0.0
        };
        if !lower_ok {
            return Err(Error::Domain {
                kind: "isotropic chart",
                position: r,
                constraint: "r>r_horizon",
                singular_radius: self.r_lower,
            });
        }
        if !(r < self.r_upper * (1.0 - SINGULAR_MARGIN)) {
            return Err(Error::Domain {
                kind: "isotropic chart",
                position: r,
                constraint: "r<r_boundary",
                singular_radius: self.r_upper,
            });
        }
        Ok(())
    }

    /// Areal radius r̄ at isotropic radius r, integrating d ln r̄ / d ln r = √f(r̄).
    pub fn areal_radius(&self, r: f64) -> Result<f64> {
        self.check_iso(r)?;
        let m = self.metric;
        let l = m.curvature;
        if r == 0.0 || (l == 0.0 && m.mass == 0.0) {
            return Ok(r);
        }
        let (r0, y0) = match self.anchor {
            Anchor::Origin => {
                let r0 = r.min(1e-3 / l.abs().sqrt());
                let s = r0 * r0;
                (r0, r0.ln() - 0.25 * l * s + l * l * s * s / 32.0)
            }
            Anchor::Infinity => {
                let r0 = r.max(1e6 * m.mass);
                let q = m.mass / r0;
                (r0, r0.ln() + q - 0.25 * q * q)
            }
            Anchor::Interior { x, log_ratio } => (x * log_ratio.exp(), x.ln()),
        };
        if r0 == r {
            return Ok(y0.exp());
        }
        let rhs = move |_: f64, y: &[f64; 1]| {
            let f = m.lapse(y[0].exp());
            (f > 0.0 && f.is_finite()).then(|| [f.sqrt()])
        };
        Ok(integrate(rhs, r0.ln(), [y0], r.ln(), CHART_TOL)?[0].exp())
    }

    /// n = r̄ / (r √f(r̄)): conformal factor of the isotropic metric over the lapse.
    pub fn index(&self, r: f64) -> Result<f64> {
        if r == 0.0 && self.metric.mass == 0.0 {
            self.check_iso(r)?;
            return Ok(1.0);
        }
        let x = self.areal_radius(r)?;
        Ok(x / (r * self.metric.lapse(x).sqrt()))
    }
}

/// Isotropic radius r for areal radius r̄.
///
/// Closed-form inversion r = 2r̄ / (1 + √(1 − λr̄²)) for metrics without
/// mass; numerical chart integration otherwise.
pub fn isotropic_transform(metric: &StaticMetric, r_bar: f64) -> Result<f64> {
    metric.check_static(r_bar)?;
    if metric.mass == 0.0 {
        let s = 1.0 - metric.curvature * r_bar * r_bar;
        return Ok(2.0 * r_bar / (1.0 + s.sqrt()));
    }
    IsotropicChart::new(*metric)?.iso_radius(r_bar)
}

/// First-principles refractive index at isotropic radius r.
pub fn numeric_index(metric: &StaticMetric, r: f64) -> Result<f64> {
    IsotropicChart::new(*metric)?.index(r)
}
