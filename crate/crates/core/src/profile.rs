//! Sampled scalar index profiles n(position) with an optional analytic law.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::{closed_form_gradient, closed_form_index, SpacetimeKind, SpacetimeSpec};

/// Analytic law behind a profile. Ray tracing needs one; quadrature only
/// needs the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum IndexLaw {
    /// Catalog closed form of a static spacetime.
    Catalog { spec: SpacetimeSpec },
    /// n = 1 + ¼H²z², the cell profile used for the dS arm.
    QuadraticDeSitter { hubble: f64 },
    Uniform { n: f64 },
}

impl IndexLaw {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            IndexLaw::Catalog { spec } => Ok(closed_form_index(spec, x)?.n),
            IndexLaw::QuadraticDeSitter { hubble } => Ok(1.0 + 0.25 * hubble * hubble * x * x),
            IndexLaw::Uniform { n } => Ok(*n),
        }
    }

    pub fn gradient(&self, x: f64) -> Result<f64> {
        match self {
            IndexLaw::Catalog { spec } => closed_form_gradient(spec, x),
            IndexLaw::QuadraticDeSitter { hubble } => Ok(0.5 * hubble * hubble * x),
            IndexLaw::Uniform { .. } => Ok(0.0),
        }
    }

    /// Radii where the law diverges.
    pub fn singular_radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if let IndexLaw::Catalog { spec } = self {
            match spec.kind {
                SpacetimeKind::BlackHole
                | SpacetimeKind::DeSitterBlackHole
                | SpacetimeKind::AntiDeSitterBlackHole
                    if spec.mass > 0.0 =>
                {
                    out.push(0.5 * spec.mass)
                }
                _ => {}
            }
            if matches!(
                spec.kind,
                SpacetimeKind::DeSitter | SpacetimeKind::DeSitterBlackHole
            ) && spec.hubble > 0.0
            {
                out.push(2.0 / spec.hubble);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexProfile {
    samples: Vec<(f64, f64)>,
    domain: (f64, f64),
    law: Option<IndexLaw>,
}

impl IndexProfile {
    /// Validates: n > 0, positions strictly increasing and inside `domain`.
    pub fn new(samples: Vec<(f64, f64)>, domain: (f64, f64), law: Option<IndexLaw>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::param("samples", "profile has no samples"));
        }
        if !(domain.0 <= domain.1) {
            return Err(Error::param("domain", "empty domain"));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::param("positions-increasing", "positions must be strictly increasing"));
            }
        }
        for &(x, n) in &samples {
            if !(n > 0.0) || !n.is_finite() {
                return Err(Error::param("n>0", format!("n({x}) = {n}")));
            }
            if x < domain.0 || x > domain.1 {
                return Err(Error::param("samples-in-domain", format!("position {x} outside domain")));
            }
        }
        Ok(Self {
            samples,
            domain,
            law,
        })
    }

    /// Samples `law` on a uniform grid spanning `domain`.
    pub fn from_law(law: IndexLaw, domain: (f64, f64), grid_size: usize) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::param("grid_size", "need at least two grid points"));
        }
        let samples = uniform_grid(domain.0, domain.1, grid_size)
            .into_iter()
            .map(|x| law.eval(x).map(|n| (x, n)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples, domain, Some(law))
    }

    pub fn uniform(n: f64, domain: (f64, f64), grid_size: usize) -> Result<Self> {
        Self::from_law(IndexLaw::Uniform { n }, domain, grid_size)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn positions(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn law(&self) -> Option<&IndexLaw> {
        self.law.as_ref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("non-empty by construction")
    }
}

/// `count` equally spaced points from `a` to `b`, both ends exact.
pub fn uniform_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                b
            } else {
                a + (b - a) * (i as f64 / last)
            }
        })
        .collect()
}
