//! Mach–Zehnder read-out of the cell.
//!
//! Conventions: ideal 50/50 splitters with transmitted amplitude 1/√2 and
//! reflected amplitude i/√2; the piezo adds phase to the reference arm, so
//! signals depend on Δφ − φ_piezo; port + is the one that receives every
//! photon at Δφ = φ_piezo.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::phase_difference_closed;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Cat-state medium, read out with the printed Scheme I law.
    #[serde(rename = "I")]
    One,
    /// Definite dS medium in one arm.
    #[serde(rename = "II")]
    Two,
    /// Explicit photon-path × medium-branch amplitude model.
    JointModel,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::One => "I",
            Scheme::Two => "II",
            Scheme::JointModel => "joint_model",
        }
    }
}

/// Medium state for the joint model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediumState {
    /// (|n₁⟩ + |n₂⟩)/√(2 + 2η)
    #[default]
    Cat,
    DefiniteN1,
    DefiniteN2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sampling {
    DeterministicMean,
    Poisson { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziConfig {
    pub scheme: Scheme,
    pub piezo_phase: f64,
    pub n0: u64,
    pub eta: f64,
    pub medium: MediumState,
    pub sampling: Sampling,
}

impl MziConfig {
    pub fn new(scheme: Scheme, n0: u64) -> Self {
        Self {
            scheme,
            piezo_phase: 0.0,
            n0,
            eta: 0.0,
            medium: MediumState::Cat,
            sampling: Sampling::DeterministicMean,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_eta(self.eta)?;
        if !self.piezo_phase.is_finite() {
            return Err(Error::param("piezo", "piezo phase must be finite"));
        }
        Ok(())
    }

    /// Port probabilities for this configuration at Δφ.
    pub fn probabilities(&self, delta_phi: f64) -> Result<(f64, f64)> {
        match self.scheme {
            Scheme::One => Ok(scheme1_probabilities(delta_phi, self.piezo_phase)),
            Scheme::Two => Ok(scheme2_probabilities(delta_phi, self.piezo_phase)),
            Scheme::JointModel => joint_state_probabilities(delta_phi, self.piezo_phase, self.eta, self.medium),
        }
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::param("0<=eta<=1", format!("eta = {eta}")));
    }
    Ok(())
}

/// P± = ½(1 ± cos(Δφ − φ_piezo))
pub fn scheme2_probabilities(delta_phi: f64, piezo: f64) -> (f64, f64) {
    let c = (delta_phi - piezo).cos();
    (0.5 * (1.0 + c), 0.5 * (1.0 - c))
}

/// P± = ¼(2 ± √(2 + 2cos(Δφ − φ_piezo)))
pub fn scheme1_probabilities(delta_phi: f64, piezo: f64) -> (f64, f64) {
    let s = (2.0 + 2.0 * (delta_phi - piezo).cos()).max(0.0).sqrt();
    (0.25 * (2.0 + s), 0.25 * (2.0 - s))
}

const SPLIT_T: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Port amplitudes (+, −) for one medium branch that imprints `phi` on the
/// cell arm.
fn branch_amplitudes(phi: f64, piezo: f64) -> [Complex64; 2] {
    let t = Complex64::new(SPLIT_T, 0.0);
    let r = Complex64::new(0.0, SPLIT_T);
    // first splitter: reference arm transmitted, cell arm reflected
    let reference = t * Complex64::cis(piezo);
    let cell = r * Complex64::cis(phi);
    [r * reference + t * cell, t * reference + r * cell]
}

/// Joint photon–medium model: path amplitudes carried per medium branch,
/// contracted with the branch Gram matrix [[1, η], [η, 1]], then normalized
/// over the two ports.
pub fn joint_state_probabilities(delta_phi: f64, piezo: f64, eta: f64, medium: MediumState) -> Result<(f64, f64)> {
    check_eta(eta)?;
    let norm = 1.0 / (2.0 + 2.0 * eta).sqrt();
    let weights: [f64; 2] = match medium {
        MediumState::Cat => [norm, norm],
        MediumState::DefiniteN1 => [1.0, 0.0],
        MediumState::DefiniteN2 => [0.0, 1.0],
    };
    let b1 = branch_amplitudes(0.0, piezo);
    let b2 = branch_amplitudes(delta_phi, piezo);
    let mut p = [0.0; 2];
    for port in 0..2 {
        let a1 = b1[port] * weights[0];
        let a2 = b2[port] * weights[1];
        p[port] = a1.norm_sqr() + a2.norm_sqr() + 2.0 * eta * (a1.conj() * a2).re;
    }
    let total = p[0] + p[1];
    Ok((p[0] / total, p[1] / total))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionStats {
    pub delta_phi: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    pub counts_plus: u64,
    pub counts_minus: u64,
    /// Unrounded n₀·P±.
    pub mean_plus: f64,
    pub mean_minus: f64,
}

/// Photon counter; owns the scan's random stream in Poisson mode.
pub struct Detector {
    n0: u64,
    rng: Option<ChaCha8Rng>,
}

impl Detector {
    pub fn new(n0: u64, sampling: Sampling) -> Self {
        let rng = match sampling {
            Sampling::DeterministicMean => None,
            Sampling::Poisson { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        Self { n0, rng }
    }

    fn draw(&mut self, mean: f64) -> Result<u64> {
        match &mut self.rng {
            None => Ok(mean.round() as u64),
            Some(_) if mean == 0.0 => Ok(0),
            Some(rng) => {
                let dist = Poisson::new(mean).map_err(|e| Error::param("poisson-mean", e.to_string()))?;
                Ok(dist.sample(rng) as u64)
            }
        }
    }

    pub fn detect(&mut self, delta_phi: f64, probabilities: (f64, f64)) -> Result<DetectionStats> {
        let n0 = self.n0 as f64;
        let (p_plus, p_minus) = probabilities;
        let (mean_plus, mean_minus) = (n0 * p_plus, n0 * p_minus);
        Ok(DetectionStats {
            delta_phi,
            p_plus,
            p_minus,
            counts_plus: self.draw(mean_plus)?,
            counts_minus: self.draw(mean_minus)?,
            mean_plus,
            mean_minus,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Piezo phase swept at fixed Δφ.
    Piezo,
    /// HL swept; Δφ from the closed-form cell phase.
    Hubble,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub kind: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.steps < 2 {
            return Err(Error::param("steps>=2", format!("steps = {}", self.steps)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop <= self.start {
            return Err(Error::param(
                "sweep-range",
                format!("need start < stop, got [{}, {}]", self.start, self.stop),
            ));
        }
        if self.kind == SweepKind::Hubble && (self.start < 0.0 || self.stop >= 2.0) {
            return Err(Error::Domain {
                kind: "dS",
                position: self.stop,
                constraint: "HL<2",
                singular_radius: 2.0,
            });
        }
        Ok(crate::profile::uniform_grid(self.start, self.stop, self.steps))
    }
}

/// Cell and probe parameters linking an HL sweep to Δφ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumLink {
    pub length: f64,
    pub lambda0: f64,
    /// Δφ used for piezo sweeps.
    pub delta_phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub sweep_value: f64,
    pub stats: DetectionStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeScan {
    pub config: MziConfig,
    pub sweep: Sweep,
    pub rows: Vec<ScanRow>,
}

impl FringeScan {
    /// (max − min)/(max + min) of p₊ over the scan.
    pub fn visibility(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .map(|r| r.stats.p_plus)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
        (hi - lo) / (hi + lo)
    }

    /// Scan CSV `sweep_value,delta_phi_rad,p_plus,p_minus,counts_plus,counts_minus`.
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "sweep_value",
            "delta_phi_rad",
            "p_plus",
            "p_minus",
            "counts_plus",
            "counts_minus",
        ]);
        for r in &self.rows {
            let s = &r.stats;
            t.push(vec![
                r.sweep_value.into(),
                s.delta_phi.into(),
                s.p_plus.into(),
                s.p_minus.into(),
                s.counts_plus.into(),
                s.counts_minus.into(),
            ]);
        }
        t
    }
}

pub fn fringe_scan(config: &MziConfig, sweep: &Sweep, link: &MediumLink) -> Result<FringeScan> {
    config.validate()?;
    let values = sweep.values()?;
    let mut detector = Detector::new(config.n0, config.sampling);
    let mut rows = Vec::with_capacity(values.len());
    for v in values {
        let (delta_phi, piezo) = match sweep.kind {
            SweepKind::Piezo => (link.delta_phi, v),
            SweepKind::Hubble => (
                phase_difference_closed(v / link.length, link.length, link.lambda0)?,
                config.piezo_phase,
            ),
        };
        let cfg = MziConfig {
            piezo_phase: piezo,
            ..*config
        };
        let stats = detector.detect(delta_phi, cfg.probabilities(delta_phi)?)?;
        rows.push(ScanRow { sweep_value: v, stats });
    }
    Ok(FringeScan {
        config: *config,
        sweep: *sweep,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn scheme_two_points() {
        assert_eq!(scheme2_probabilities(0.0, 0.0), (1.0, 0.0));
        let (p, m) = scheme2_probabilities(PI, 0.0);
        assert!(p.abs() < 1e-15 && (m - 1.0).abs() < 1e-15);
        let (p, m) = scheme2_probabilities(PI / 3.0, 0.0);
        assert!((p - 0.75).abs() < 1e-15 && (m - 0.25).abs() < 1e-15);
    }

    #[test]
    fn scheme_one_points() {
        assert_eq!(scheme1_probabilities(0.0, 0.0), (1.0, 0.0));
        let (p, m) = scheme1_probabilities(PI, 0.0);
        assert!((p - 0.5).abs() < 1e-8 && (m - 0.5).abs() < 1e-8);
        let (p, m) = scheme1_probabilities(PI / 2.0, 0.0);
        assert!((p - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!((m - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn piezo_is_a_reference_arm_offset() {
        let (a, _) = scheme2_probabilities(1.3, 0.4);
        let (b, _) = scheme2_probabilities(0.9, 0.0);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn joint_model_reductions() {
        for k in 0..50 {
            let d = k as f64 * 0.13;
            let (p, m) = joint_state_probabilities(d, 0.2, 0.3, MediumState::DefiniteN2).unwrap();
            let (q, n) = scheme2_probabilities(d, 0.2);
            assert!((p - q).abs() < 1e-12 && (m - n).abs() < 1e-12);
            let (p, _) = joint_state_probabilities(d, 0.2, 0.7, MediumState::DefiniteN1).unwrap();
            assert!((p - scheme2_probabilities(0.0, 0.2).0).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_cat_at_quarter_fringe() {
        let (p, m) = joint_state_probabilities(PI / 2.0, 0.0, 0.0, MediumState::Cat).unwrap();
        assert!((p - 0.75).abs() < 1e-12 && (m - 0.25).abs() < 1e-12);
        assert!(joint_state_probabilities(0.0, 0.0, 1.5, MediumState::Cat).is_err());
    }

    #[test]
    fn deterministic_counts_round() {
        let mut cfg = MziConfig::new(Scheme::Two, 1_000_000);
        cfg.piezo_phase = 0.0;
        let mut det = Detector::new(cfg.n0, cfg.sampling);
        let s = det.detect(PI / 3.0, cfg.probabilities(PI / 3.0).unwrap()).unwrap();
        assert_eq!((s.counts_plus, s.counts_minus), (750_000, 250_000));
    }

    #[test]
    fn poisson_zero_mean_gives_zero() {
        let mut det = Detector::new(100, Sampling::Poisson { seed: 7 });
        let s = det.detect(0.0, (1.0, 0.0)).unwrap();
        assert_eq!(s.counts_minus, 0);
    }

    #[test]
    fn hubble_sweep_crosses_about_twenty_one_pi() {
        let cfg = MziConfig::new(Scheme::Two, 1000);
        let sweep = Sweep {
            kind: SweepKind::Hubble,
            start: 0.01,
            stop: 0.1,
            steps: 901,
        };
        let link = MediumLink {
            length: 0.01,
            lambda0: 780e-9,
            delta_phi: 0.0,
        };
        let scan = fringe_scan(&cfg, &sweep, &link).unwrap();
        let span = scan.rows.last().unwrap().stats.delta_phi - scan.rows[0].stats.delta_phi;
        assert!((span / PI - 21.15).abs() < 0.05);
        assert!(Sweep { stop: 2.0, ..sweep }.values().is_err());
        assert!(Sweep { steps: 1, ..sweep }.values().is_err());
    }

    #[test]
    fn piezo_scan_has_unit_visibility() {
        let cfg = MziConfig::new(Scheme::Two, 1000);
        let sweep = Sweep {
            kind: SweepKind::Piezo,
            start: 0.0,
            stop: 2.0 * PI,
            steps: 101,
        };
        let link = MediumLink {
            length: 0.01,
            lambda0: 780e-9,
            delta_phi: 0.0,
        };
        let scan = fringe_scan(&cfg, &sweep, &link).unwrap();
        assert_eq!(scan.visibility(), 1.0);
    }
}
