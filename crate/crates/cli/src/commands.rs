use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use catworld::interferometer::{fringe_scan, FringeScan, MediumLink, Sampling, SweepKind};
use catworld::medium::{axial_profile, CellDesign, ProfileForm};
use catworld::profile::IndexLaw;
use catworld::propagation::{
    closed_form_phase, deflection_for_law, far_field_radius, optical_phase, phase_difference_closed, phase_table,
    redshift_factor, scattering_ray, Deflection,
};
use catworld::spacetime::{rw_index, SpacetimeKind, SpacetimeSpec};
use catworld::table::{Cell, Table};
use clap::ValueEnum;

use crate::config::{load_config, ExperimentConfig};
use crate::error::CliError;
use crate::output::RunOutput;
use crate::plot::{line_plot, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Axial index profile with intensity and attenuator columns.
    Index,
    /// Full cell design: profile table, design metadata and beam curves.
    Design,
    /// Cell phase by closed form and quadrature.
    Phase,
    /// Interferometer fringe scan.
    Fringe,
    /// Ray tracing and deflection.
    Trace,
    /// Expanding-medium redshift.
    Redshift,
}

/// Command-line flags that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub plots: bool,
}

fn missing(section: &str) -> CliError {
    CliError::Config {
        invariant: section.to_string(),
        message: format!("this command needs a [{section}] section"),
    }
}

/// Loads `config_path`, applies overrides, runs `command` and returns the
/// files written.
pub fn run(command: Command, config_path: &Path, overrides: &Overrides) -> Result<Vec<PathBuf>, CliError> {
    let mut cfg = load_config(config_path)?;
    if let Some(out) = &overrides.out {
        cfg.output.directory = out.clone();
    }
    if let Some(seed) = overrides.seed {
        cfg.run.seed = seed;
    }
    cfg.output.emit_plots |= overrides.plots;
    let mut out = RunOutput::create(&cfg.output.directory, &cfg.output.run_name)?;
    match command {
        Command::Index => cmd_index(&cfg, &mut out)?,
        Command::Design => cmd_design(&cfg, &mut out)?,
        Command::Phase => cmd_phase(&cfg, &mut out)?,
        Command::Fringe => cmd_fringe(&cfg, &mut out)?,
        Command::Trace => cmd_trace(&cfg, &mut out)?,
        Command::Redshift => cmd_redshift(&cfg, &mut out)?,
    }
    out.write("effective.cfg", &cfg.effective_toml())?;
    Ok(out.written().to_vec())
}

fn render_toml(table: toml::Table) -> String {
    toml::to_string(&table).expect("metadata serializes")
}

pub fn cmd_index(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let design = CellDesign::new(&cfg.spec(), cfg.cell_params())?;
    out.write("index.csv", &design.table().to_csv())?;
    if cfg.output.emit_plots {
        let svg = line_plot(
            &format!("{} cell index", cfg.spec().kind),
            "z [m]",
            "n",
            &[Series {
                label: "n(z)",
                points: design.profile.samples().to_vec(),
            }],
            false,
        )?;
        out.write("index.svg", &svg)?;
    }
    Ok(())
}

pub fn cmd_design(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let design = CellDesign::new(&cfg.spec(), cfg.cell_params())?;
    out.write("design.csv", &design.table().to_csv())?;

    let mut meta = toml::Table::new();
    meta.insert("kind".into(), cfg.spec().kind.name().into());
    meta.insert("hubble_length".into(), design.hubble_length().into());
    meta.insert("length_m".into(), design.params.length.into());
    meta.insert("grid_size".into(), (design.params.grid_size as i64).into());
    meta.insert("theta_rad".into(), design.params.theta.into());
    meta.insert("c_const".into(), design.params.c_const.into());
    let form = match design.params.form {
        ProfileForm::Quadratic => "quadratic",
        ProfileForm::Exact => "exact",
    };
    meta.insert("profile_form".into(), form.into());
    meta.insert("n_at_length".into(), design.profile.last().1.into());
    meta.insert("beams_realizable".into(), design.intensity.is_some().into());
    if let Some(i) = &design.intensity {
        meta.insert("intensity_max".into(), i.iter().map(|p| p.1).fold(0.0, f64::max).into());
    }
    meta.insert("attenuator_normalization".into(), "T(z) = I(z) / I(L)".into());
    meta.insert("medium_response".into(), "n - 1 = I cos(theta) / C".into());
    out.write("design.meta", &render_toml(meta))?;

    if cfg.output.emit_plots {
        if let Some(i) = &design.intensity {
            let svg = line_plot(
                "control-beam intensity",
                "z [m]",
                "I [C units]",
                &[Series {
                    label: "I(z)",
                    points: i.clone(),
                }],
                false,
            )?;
            out.write("intensity.svg", &svg)?;
        }
        if let Some(t) = &design.transmission {
            let svg = line_plot(
                "attenuator transmission",
                "z [m]",
                "T",
                &[Series {
                    label: "T(z)",
                    points: t.clone(),
                }],
                false,
            )?;
            out.write("attenuator.svg", &svg)?;
        }
    }
    Ok(())
}

fn with_hubble(spec: &SpacetimeSpec, hubble: f64) -> SpacetimeSpec {
    SpacetimeSpec { hubble, ..*spec }
}

fn is_quadratic_cell(cfg: &ExperimentConfig) -> bool {
    cfg.spec().kind == SpacetimeKind::DeSitter && cfg.cell.profile_form == ProfileForm::Quadratic
}

pub fn cmd_phase(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let spec = cfg.spec();
    let length = cfg.cell.length;
    let hubbles: Vec<f64> = match cfg.sweep() {
        Some(sweep) if sweep.kind == SweepKind::Hubble => {
            sweep.values()?.into_iter().map(|hl| hl / length).collect()
        }
        _ => vec![spec.hubble],
    };
    let mut rows = Vec::new();
    for h in hubbles {
        let s = with_hubble(&spec, h);
        if is_quadratic_cell(cfg) {
            rows.push((h, length, closed_form_phase(h, length, cfg.probe.lambda0)?));
        }
        let profile = axial_profile(&s, length, cfg.cell.grid_size, cfg.cell.profile_form)?;
        rows.push((h, length, optical_phase(&profile, cfg.probe.lambda0)?));
    }
    out.write("phase.csv", &phase_table(&rows).to_csv())?;
    Ok(())
}

/// Δφ of the configured cell: closed form for the quadratic dS cell,
/// quadrature otherwise.
fn cell_delta_phi(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    let spec = cfg.spec();
    if is_quadratic_cell(cfg) {
        return Ok(phase_difference_closed(spec.hubble, cfg.cell.length, cfg.probe.lambda0)?);
    }
    let profile = axial_profile(&spec, cfg.cell.length, cfg.cell.grid_size, cfg.cell.profile_form)?;
    Ok(optical_phase(&profile, cfg.probe.lambda0)?.delta_phi)
}

fn scan_metadata(cfg: &ExperimentConfig, scan: &FringeScan) -> String {
    let mut meta = toml::Table::new();
    meta.insert("scheme".into(), scan.config.scheme.name().into());
    let kind = match scan.sweep.kind {
        SweepKind::Piezo => "piezo",
        SweepKind::Hubble => "hubble",
    };
    meta.insert("sweep_kind".into(), kind.into());
    meta.insert(
        "sweep_value".into(),
        match scan.sweep.kind {
            SweepKind::Piezo => "piezo phase [rad]",
            SweepKind::Hubble => "H*L",
        }
        .into(),
    );
    meta.insert("n0".into(), (scan.config.n0 as i64).into());
    match scan.config.sampling {
        Sampling::DeterministicMean => {
            meta.insert("sampling".into(), "deterministic".into());
            meta.insert("counts".into(), "n0*P rounded to nearest; unrounded means below".into());
        }
        Sampling::Poisson { seed } => {
            meta.insert("sampling".into(), "poisson".into());
            meta.insert("seed".into(), format!("{seed}").into());
            meta.insert("rng".into(), "ChaCha8, one stream per scan".into());
        }
    }
    meta.insert("eta".into(), scan.config.eta.into());
    meta.insert(
        "medium".into(),
        match scan.config.medium {
            catworld::interferometer::MediumState::Cat => "cat",
            catworld::interferometer::MediumState::DefiniteN1 => "definite_n1",
            catworld::interferometer::MediumState::DefiniteN2 => "definite_n2",
        }
        .into(),
    );
    meta.insert("piezo_convention".into(), "additive on the reference arm; signal depends on delta_phi - piezo".into());
    meta.insert("beam_splitter".into(), "lossless 50/50, t = 1/sqrt(2), r = i/sqrt(2)".into());
    meta.insert("port_labels".into(), "port + receives every photon at delta_phi = piezo".into());
    meta.insert("length_m".into(), cfg.cell.length.into());
    meta.insert("lambda0_m".into(), cfg.probe.lambda0.into());
    meta.insert("visibility".into(), scan.visibility().into());
    let means = |f: fn(&catworld::interferometer::ScanRow) -> f64| -> toml::Value {
        toml::Value::Array(scan.rows.iter().map(|r| f(r).into()).collect())
    };
    meta.insert("mean_plus".into(), means(|r| r.stats.mean_plus));
    meta.insert("mean_minus".into(), means(|r| r.stats.mean_minus));
    render_toml(meta)
}

pub fn cmd_fringe(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let sweep = cfg.sweep().ok_or_else(|| missing("run.sweep"))?;
    if sweep.kind == SweepKind::Hubble && cfg.spec().kind != SpacetimeKind::DeSitter {
        return Err(CliError::Config {
            invariant: "sweep.kind".into(),
            message: "hubble sweeps drive the dS cell; set spacetime.kind = \"dS\"".into(),
        });
    }
    let delta_phi = match (sweep.kind, cfg.run.delta_phi) {
        (SweepKind::Piezo, Some(d)) => d,
        (SweepKind::Piezo, None) => cell_delta_phi(cfg)?,
        (SweepKind::Hubble, _) => 0.0,
    };
    let link = MediumLink {
        length: cfg.cell.length,
        lambda0: cfg.probe.lambda0,
        delta_phi,
    };
    let scan = fringe_scan(&cfg.mzi(), &sweep, &link)?;
    out.write("scan.csv", &scan.table().to_csv())?;
    out.write("scan.meta", &scan_metadata(cfg, &scan))?;
    if cfg.output.emit_plots {
        let pick = |f: fn(&catworld::interferometer::ScanRow) -> f64| -> Vec<(f64, f64)> {
            scan.rows.iter().map(|r| (r.sweep_value, f(r))).collect()
        };
        let x_label = match sweep.kind {
            SweepKind::Piezo => "piezo phase [rad]",
            SweepKind::Hubble => "HL",
        };
        let svg = line_plot(
            &format!("scheme {} fringe", scan.config.scheme.name()),
            x_label,
            "probability",
            &[
                Series {
                    label: "p+",
                    points: pick(|r| r.stats.p_plus),
                },
                Series {
                    label: "p-",
                    points: pick(|r| r.stats.p_minus),
                },
            ],
            false,
        )?;
        out.write("fringe.svg", &svg)?;
    }
    Ok(())
}

fn ray_law(spec: &SpacetimeSpec) -> Result<IndexLaw, CliError> {
    if spec.kind == SpacetimeKind::RobertsonWalker {
        return Err(CliError::Config {
            invariant: "kind".into(),
            message: "RW media are homogeneous; rays are straight (use the redshift command)".into(),
        });
    }
    Ok(IndexLaw::Catalog { spec: *spec })
}

pub fn cmd_trace(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let trace = cfg.trace.as_ref().ok_or_else(|| missing("trace"))?;
    let law = ray_law(&cfg.spec())?;
    let mut summary = Table::new(&["b_m", "deflection_rad", "deflection_over_pi", "captured", "closest_radius_m"]);
    for &b in &trace.impact_parameters {
        let row: Vec<Cell> = match deflection_for_law(&law, b)? {
            Deflection::Angle { angle, .. } => vec![
                b.into(),
                angle.into(),
                (angle / PI).into(),
                false.into(),
                "".into(),
            ],
            Deflection::Captured { closest_radius } => {
                vec![b.into(), "".into(), "".into(), true.into(), closest_radius.into()]
            }
        };
        summary.push(row);
    }
    out.write("deflection.csv", &summary.to_csv())?;

    let b0 = trace.impact_parameters[0];
    let radius = match trace.launch_radius {
        Some(r) => r,
        None => far_field_radius(&law, b0)?,
    };
    let ray = scattering_ray(&law, b0, radius)?;
    out.write("ray.csv", &ray.table().to_csv())?;
    if cfg.output.emit_plots {
        let svg = line_plot(
            &format!("ray, b = {b0} m"),
            "x [m]",
            "y [m]",
            &[Series {
                label: "ray",
                points: ray.points.iter().map(|p| (p[0], p[1])).collect(),
            }],
            true,
        )?;
        out.write("ray.svg", &svg)?;
    }
    Ok(())
}

pub fn cmd_redshift(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), CliError> {
    let r = cfg.redshift.ok_or_else(|| missing("redshift"))?;
    let spec = cfg.spec();
    let factor = redshift_factor(&spec, r.t_emit, r.t_obs)?;
    let mut t = Table::new(&["t_emit_s", "t_obs_s", "a_emit", "a_obs", "one_plus_z"]);
    t.push(vec![
        r.t_emit.into(),
        r.t_obs.into(),
        rw_index(&spec, r.t_emit)?.into(),
        rw_index(&spec, r.t_obs)?.into(),
        factor.into(),
    ]);
    out.write("redshift.csv", &t.to_csv())?;
    Ok(())
}
