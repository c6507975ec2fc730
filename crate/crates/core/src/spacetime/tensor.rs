//! Index tensor n^{ij} = (√−g / √γ) g^{ij} / g₀₀ of a static metric.
//!
//! g₀₀ is taken as the positive lapse f (metric written −f c²dt² + g_ij dx^i dx^j).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::isotropic::{IsotropicChart, StaticMetric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricForm {
    /// Static coordinates: −f c²dt² + dr̄²/f + r̄² dΩ².
    Static,
    /// Isotropic coordinates: −f c²dt² + (r̄/r)² (dr² + r² dΩ²).
    Isotropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    /// point = (radius, θ, φ); γ = r⁴ sin²θ
    Spherical,
    /// point = (x, y, z); γ = 1
    Cartesian,
}

pub type Mat3 = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorIndex {
    /// Contravariant coordinate components.
    pub components: Mat3,
    pub chart: Chart,
    pub form: MetricForm,
    /// Determinant γ of the laboratory metric in `chart`.
    pub gamma: f64,
    /// g₀₀ used in the formula (positive lapse).
    pub g00: f64,
    lab_scale: [f64; 3],
}

impl TensorIndex {
    /// Components in the orthonormal frame of the laboratory chart.
    pub fn physical(&self) -> Mat3 {
        let s = self.lab_scale;
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.components[i][j] * s[i] * s[j];
            }
        }
        out
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let c = &self.components;
        (0..3).all(|i| (0..3).all(|j| (c[i][j] - c[j][i]).abs() <= tol * c[i][j].abs().max(1.0)))
    }

    /// Sylvester's criterion on the leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let c = &self.components;
        let m1 = c[0][0];
        let m2 = c[0][0] * c[1][1] - c[0][1] * c[1][0];
        m1 > 0.0 && m2 > 0.0 && det3(c) > 0.0
    }
}

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inverse3(m: &Mat3) -> Option<Mat3> {
    let d = det3(m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, e) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
        }
    }
    Some(inv)
}

/// Areal radius for the isotropic form; closed forms where they exist.
fn areal_from_iso(metric: &StaticMetric, r: f64) -> Result<f64> {
    let l = metric.curvature();
    let m = metric.mass();
    if m == 0.0 {
        Ok(r / (1.0 + 0.25 * l * r * r))
    } else if l == 0.0 {
        let q = 1.0 + 0.5 * m / r;
        Ok(r * q * q)
    } else {
        IsotropicChart::new(*metric)?.areal_radius(r)
    }
}

/// Evaluates the index tensor of `metric` written in `form`, at `point`
/// expressed in `chart`.
pub fn tensor_index(
    metric: &StaticMetric,
    form: MetricForm,
    point: [f64; 3],
    chart: Chart,
) -> Result<TensorIndex> {
    let (radius, sin_t) = match chart {
        Chart::Spherical => (point[0], point[1].sin()),
        Chart::Cartesian => ((point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt(), 1.0),
    };
    if chart == Chart::Spherical && (radius <= 0.0 || sin_t.abs() < 1e-12) {
        return Err(Error::Geometry(
            "spherical chart is singular at the origin and on the polar axis".into(),
        ));
    }
    let (r_bar, conformal) = match form {
        MetricForm::Static => (radius, 1.0),
        MetricForm::Isotropic => {
            if radius == 0.0 {
                (0.0, 1.0)
            } else {
                let rb = areal_from_iso(metric, radius)?;
                (rb, rb / radius)
            }
        }
    };
    let (lo, hi) = metric.static_domain();
    let f = if r_bar == 0.0 && metric.mass() == 0.0 {
        1.0
    } else {
        metric.lapse(r_bar)
    };
    if !(f > 0.0) || r_bar < lo || r_bar >= hi {
        return Err(Error::Horizon {
            radius: r_bar,
            lapse: f,
            lower: lo,
            upper: hi,
        });
    }

    let mut g = [[0.0; 3]; 3];
    let lab_diag: [f64; 3];
    match chart {
        Chart::Spherical => {
            let r2 = radius * radius;
            lab_diag = [1.0, r2, r2 * sin_t * sin_t];
            match form {
                MetricForm::Static => {
                    g[0][0] = 1.0 / f;
                    g[1][1] = lab_diag[1];
                    g[2][2] = lab_diag[2];
                }
                MetricForm::Isotropic => {
                    let w = conformal * conformal;
                    for i in 0..3 {
                        g[i][i] = w * lab_diag[i];
                    }
                }
            }
        }
        Chart::Cartesian => {
            lab_diag = [1.0; 3];
            match form {
                MetricForm::Static => {
                    let a = if radius == 0.0 { 0.0 } else { (1.0 / f - 1.0) / (radius * radius) };
                    for i in 0..3 {
                        for j in 0..3 {
                            g[i][j] = a * point[i] * point[j] + if i == j { 1.0 } else { 0.0 };
                        }
                    }
                }
                MetricForm::Isotropic => {
                    let w = conformal * conformal;
                    for (i, row) in g.iter_mut().enumerate() {
                        row[i] = w;
                    }
                }
            }
        }
    }
    let gamma: f64 = lab_diag.iter().product();
    let det_spatial = det3(&g);
    let inv = inverse3(&g).ok_or_else(|| Error::Geometry("degenerate spatial metric".into()))?;
    let prefactor = (f * det_spatial).sqrt() / gamma.sqrt() / f;
    let mut components = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            components[i][j] = prefactor * inv[i][j];
        }
    }
    Ok(TensorIndex {
        components,
        chart,
        form,
        gamma,
        g00: f,
        lab_scale: [lab_diag[0].sqrt(), lab_diag[1].sqrt(), lab_diag[2].sqrt()],
    })
}
