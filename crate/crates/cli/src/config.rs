//! Experiment configuration: strict TOML schema, defaults, validation and the
//! effective-config dump.

use std::path::{Path, PathBuf};

use catworld::interferometer::{MediumState, MziConfig, Sampling, Scheme, Sweep, SweepKind};
use catworld::medium::{CellParams, ProfileForm, DEFAULT_C_CONST, DEFAULT_GRID_SIZE};
use catworld::spacetime::{ScaleFactor, SpacetimeKind, SpacetimeSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_LENGTH: f64 = 0.01;
pub const DEFAULT_LAMBDA0: f64 = 780e-9;
pub const DEFAULT_N0: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spacetime: SpacetimeSection,
    #[serde(default)]
    pub cell: CellSection,
    #[serde(default)]
    pub probe: ProbeSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redshift: Option<RedshiftSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSection {
    pub kind: SpacetimeKind,
    /// H in 1/m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hubble: Option<f64>,
    /// H·L; converted to `hubble` with the cell length at load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hl: Option<f64>,
    #[serde(default)]
    pub mass: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale_factor: Option<ScaleFactor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CellSection {
    pub length: f64,
    pub grid_size: usize,
    pub theta: f64,
    pub c_const: f64,
    pub profile_form: ProfileForm,
}

impl Default for CellSection {
    fn default() -> Self {
        Self {
            length: DEFAULT_LENGTH,
            grid_size: DEFAULT_GRID_SIZE,
            theta: 0.0,
            c_const: DEFAULT_C_CONST,
            profile_form: ProfileForm::Quadratic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSection {
    pub lambda0: f64,
    pub n0: u64,
}

impl Default for ProbeSection {
    fn default() -> Self {
        Self {
            lambda0: DEFAULT_LAMBDA0,
            n0: DEFAULT_N0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    #[default]
    Deterministic,
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub scheme: Scheme,
    pub piezo: f64,
    pub eta: f64,
    pub medium: MediumState,
    pub sampling: SamplingMode,
    pub seed: u64,
    /// Fixed Δφ for piezo sweeps; computed from the cell when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            scheme: Scheme::Two,
            piezo: 0.0,
            eta: 0.0,
            medium: MediumState::Cat,
            sampling: SamplingMode::Deterministic,
            seed: 0,
            delta_phi: None,
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub kind: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSection {
    /// Impact parameters in metres; the first one also gets a ray CSV.
    pub impact_parameters: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub launch_radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedshiftSection {
    pub t_emit: f64,
    pub t_obs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub run_name: String,
    pub emit_plots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            run_name: "run".into(),
            emit_plots: false,
        }
    }
}

fn invalid(invariant: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        invariant: invariant.to_string(),
        message: message.into(),
    }
}

fn from_core(e: catworld::Error) -> CliError {
    invalid(e.invariant(), e.to_string())
}

impl ExperimentConfig {
    /// Parses, fills defaults, resolves `hl` into `hubble` and validates.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| invalid("schema", e.to_string()))?;
        cfg.resolve()?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve(&mut self) -> Result<(), CliError> {
        let s = &mut self.spacetime;
        match (s.hubble, s.hl) {
            (Some(_), Some(_)) => {
                return Err(invalid("hubble|hl", "give either spacetime.hubble or spacetime.hl, not both"));
            }
            (None, Some(hl)) => {
                if !(self.cell.length > 0.0) {
                    return Err(invalid("L>0", format!("cell.length = {}", self.cell.length)));
                }
                s.hubble = Some(hl / self.cell.length);
                s.hl = None;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn spec(&self) -> SpacetimeSpec {
        SpacetimeSpec {
            kind: self.spacetime.kind,
            hubble: self.spacetime.hubble.unwrap_or(0.0),
            mass: self.spacetime.mass,
            scale_factor: self.spacetime.scale_factor,
        }
    }

    pub fn cell_params(&self) -> CellParams {
        CellParams {
            length: self.cell.length,
            grid_size: self.cell.grid_size,
            theta: self.cell.theta,
            c_const: self.cell.c_const,
            form: self.cell.profile_form,
        }
    }

    pub fn mzi(&self) -> MziConfig {
        MziConfig {
            scheme: self.run.scheme,
            piezo_phase: self.run.piezo,
            n0: self.probe.n0,
            eta: self.run.eta,
            medium: self.run.medium,
            sampling: match self.run.sampling {
                SamplingMode::Deterministic => Sampling::DeterministicMean,
                SamplingMode::Poisson => Sampling::Poisson { seed: self.run.seed },
            },
        }
    }

    pub fn sweep(&self) -> Option<Sweep> {
        self.run.sweep.map(|s| Sweep {
            kind: s.kind,
            start: s.start,
            stop: s.stop,
            steps: s.steps,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let spec = self.spec();
        spec.validate().map_err(from_core)?;
        let c = &self.cell;
        if !(c.length > 0.0) || !c.length.is_finite() {
            return Err(invalid("L>0", format!("cell.length = {}", c.length)));
        }
        if c.grid_size < 2 {
            return Err(invalid("grid_size>=2", format!("cell.grid_size = {}", c.grid_size)));
        }
        if !(c.c_const > 0.0) || !c.c_const.is_finite() {
            return Err(invalid("C>0", format!("cell.c_const = {}", c.c_const)));
        }
        if !(c.theta.cos() > 0.0) || c.theta.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(invalid("cos(theta)>0", format!("cell.theta = {}", c.theta)));
        }
        if spec.kind == SpacetimeKind::DeSitter && spec.hubble * c.length >= 2.0 {
            return Err(invalid(
                "HL<2",
                format!("H·L = {} for dS; the cell must satisfy HL<2", spec.hubble * c.length),
            ));
        }
        if !(self.probe.lambda0 > 0.0) || !self.probe.lambda0.is_finite() {
            return Err(invalid("lambda0>0", format!("probe.lambda0 = {}", self.probe.lambda0)));
        }
        self.mzi().validate().map_err(from_core)?;
        if let Some(sweep) = self.sweep() {
            sweep.values().map_err(from_core)?;
        }
        if let Some(t) = &self.trace {
            if t.impact_parameters.is_empty() {
                return Err(invalid("impact_parameters", "trace.impact_parameters is empty"));
            }
            if let Some(&b) = t.impact_parameters.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
                return Err(invalid("b>0", format!("impact parameter {b}")));
            }
        }
        if let Some(r) = &self.redshift {
            if !(r.t_obs >= r.t_emit) {
                return Err(invalid("t_obs>=t_emit", format!("t_emit = {}, t_obs = {}", r.t_emit, r.t_obs)));
            }
        }
        if self.output.run_name.is_empty() || self.output.run_name.contains(['/', '\\']) {
            return Err(invalid("run_name", "output.run_name must be a plain, non-empty file stem"));
        }
        Ok(())
    }

    /// Fully resolved configuration; loading it again yields the same run.
    pub fn effective_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid("config-readable", format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text)
}
