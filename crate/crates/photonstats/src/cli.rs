//! Command-line front end: flat JSON configs and flags in, CSV/JSON tables
//! out.
//!
//! All rates and detunings are taken in units of the cavity linewidth κ,
//! which is fixed to 1 internally; `--kappa-hz` is recorded in the manifest
//! for axis labeling and never enters a computation. A run is described by
//! a flat key-value configuration: values may come from a JSON file
//! (`--config`), from command-line flags (which override the file), or from
//! the documented per-command defaults. The fully resolved configuration is
//! embedded in every JSON output as its manifest, and feeding that manifest
//! back through `--config` reproduces the identical run.
//!
//! Exit codes: 0 when every requested point succeeded; 2 for configuration
//! and validation errors (bad keys, out-of-range parameters, inconsistent
//! model/variable combinations); 3 for numerical failures, including runs
//! that completed with some rows carrying error tags (the table is still
//! written).

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::SpaceSpec;
use crate::models::{jc_dressed_levels, two_photon_resonances, ModelParams};
use crate::sweep::{
    figure_preset, run_heatmap, run_sweep, AxisSpec, Model, Output, SweepResult, SweepSpec,
    SweepVariable,
};

/// Photon statistics of a driven cavity with a pinned or moving atom.
#[derive(Debug, Parser)]
#[command(name = "photonstats", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the motionless atom-cavity model along one parameter.
    ///
    /// Default scan: cavity detuning from -100 to 100 (801 figure points
    /// use the fig1 presets; the generic default is 201), carrying the atom
    /// at a fixed offset δ_a − Δ_c taken from the base parameters.
    JcSweep(RunArgs),
    /// Scan the moving-atom model along one parameter.
    ///
    /// The cavity detuning is always derived as Δ_c = δ_a + ν, the
    /// operating point of the phonon-exchange model.
    ComSweep(RunArgs),
    /// Map two parameters on a grid (first axis slow in the output).
    Heatmap(RunArgs),
    /// Delayed correlation curve g²(τ) at one parameter point.
    G2tau(RunArgs),
    /// Print dressed-level energies and drive-resonance positions.
    Eigen(EigenArgs),
    /// Run a ready-made reference scan (fig1c/fig1d/fig2c/fig2d/fig3a/
    /// fig3b/fig3c/fig4).
    Preset(PresetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by the sweep-like commands. Every physical flag overrides
/// the corresponding key of `--config`; defaults are per command and appear
/// in the resolved manifest.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat JSON config file (keys match the manifest fields).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model selector for heatmap/g2tau: "jc" or "com".
    #[arg(long)]
    pub model: Option<String>,
    /// Cavity drive detuning Δ_c/κ (derived as δ_a + ν under "com").
    #[arg(long, allow_negative_numbers = true)]
    pub delta_c: Option<f64>,
    /// Atom drive detuning δ_a/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub delta_a: Option<f64>,
    /// Phonon (trap) frequency ν/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Atom-cavity coupling g/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Drive strength Ω/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Atomic decay rate γ/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Phonon decay rate Γ/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_b: Option<f64>,
    /// Photon Fock-space cutoff.
    #[arg(long)]
    pub photon_cutoff: Option<usize>,
    /// Phonon Fock-space cutoff (0 under "jc").
    #[arg(long)]
    pub phonon_cutoff: Option<usize>,
    /// Scan variable: delta_c, delta_a, nu, or gamma.
    #[arg(long)]
    pub variable: Option<String>,
    /// Scan start value.
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
    /// Scan stop value.
    #[arg(long, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    /// Scan sample count.
    #[arg(long)]
    pub points: Option<usize>,
    /// Second (fast) map variable.
    #[arg(long)]
    pub variable2: Option<String>,
    /// Second-axis start value.
    #[arg(long, allow_negative_numbers = true)]
    pub start2: Option<f64>,
    /// Second-axis stop value.
    #[arg(long, allow_negative_numbers = true)]
    pub stop2: Option<f64>,
    /// Second-axis sample count.
    #[arg(long)]
    pub points2: Option<usize>,
    /// Last delay of the g²(τ) grid, in 1/κ.
    #[arg(long, allow_negative_numbers = true)]
    pub tau_max: Option<f64>,
    /// Number of delay samples (grid starts at exactly 0).
    #[arg(long)]
    pub tau_points: Option<usize>,
    /// Comma-separated columns: nbar_num, g2_num, nbar_ana, g2_ana
    /// (scalar runs) or g2_tau (delay runs).
    #[arg(long)]
    pub outputs: Option<String>,
    /// Physical κ in Hz, recorded in the manifest for labeling only.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa_hz: Option<f64>,
    #[command(flatten)]
    pub io: IoArgs,
}

/// Output plumbing shared by all table-producing commands.
#[derive(Debug, Args)]
pub struct IoArgs {
    /// Output path ("-" = stdout).
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Table format; json embeds the reproducibility manifest.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write the resolved manifest JSON to this path.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Print a ready-made gnuplot command for the produced table.
    #[arg(long)]
    pub gnuplot_hint: bool,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    /// Preset name: fig1c, fig1d, fig2c, fig2d, fig3a, fig3b, fig3c, fig4.
    pub name: String,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    /// Atom-cavity coupling g/κ.
    #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
    pub g: f64,
    /// Cavity drive detuning Δ_c/κ.
    #[arg(long, default_value_t = -100.0, allow_negative_numbers = true)]
    pub delta_c: f64,
    /// Atom drive detuning δ_a/κ.
    #[arg(long, default_value_t = -50.0, allow_negative_numbers = true)]
    pub delta_a: f64,
    /// Highest dressed manifold to print.
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
}

/// One resolved run: every parameter and default that affects the result.
/// This is the manifest embedded in JSON outputs; parsed back through
/// `--config` it reproduces the identical run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    /// Provenance label when the run came from a named preset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub model: String,
    pub delta_c: f64,
    pub delta_a: f64,
    pub nu: f64,
    pub g: f64,
    pub omega: f64,
    pub gamma: f64,
    pub gamma_b: f64,
    pub photon_cutoff: usize,
    pub phonon_cutoff: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_points: Option<usize>,
    pub outputs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
}

/// The same shape with every field optional: the merge layer for config
/// files and flag overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<String>,
    pub preset: Option<String>,
    pub model: Option<String>,
    pub delta_c: Option<f64>,
    pub delta_a: Option<f64>,
    pub nu: Option<f64>,
    pub g: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_b: Option<f64>,
    pub photon_cutoff: Option<usize>,
    pub phonon_cutoff: Option<usize>,
    pub variable: Option<String>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub points: Option<usize>,
    pub variable2: Option<String>,
    pub start2: Option<f64>,
    pub stop2: Option<f64>,
    pub points2: Option<usize>,
    pub tau_max: Option<f64>,
    pub tau_points: Option<usize>,
    pub outputs: Option<String>,
    pub kappa_hz: Option<f64>,
    pub version: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> PartialConfig {
        PartialConfig {
            command: None,
            preset: None,
            model: self.model.clone(),
            delta_c: self.delta_c,
            delta_a: self.delta_a,
            nu: self.nu,
            g: self.g,
            omega: self.omega,
            gamma: self.gamma,
            gamma_b: self.gamma_b,
            photon_cutoff: self.photon_cutoff,
            phonon_cutoff: self.phonon_cutoff,
            variable: self.variable.clone(),
            start: self.start,
            stop: self.stop,
            points: self.points,
            variable2: self.variable2.clone(),
            start2: self.start2,
            stop2: self.stop2,
            points2: self.points2,
            tau_max: self.tau_max,
            tau_points: self.tau_points,
            outputs: self.outputs.clone(),
            kappa_hz: self.kappa_hz,
            version: None,
        }
    }
}

/// Documented defaults for each command, used for any key not supplied by
/// the config file or a flag.
fn command_defaults(command: &str) -> Result<PartialConfig> {
    let mut d = PartialConfig {
        command: Some(command.to_string()),
        g: Some(50.0),
        omega: Some(0.1),
        gamma: Some(1.0),
        nu: Some(0.0),
        photon_cutoff: Some(3),
        ..PartialConfig::default()
    };
    match command {
        "jc-sweep" => {
            d.model = Some("jc".into());
            d.delta_c = Some(-100.0);
            d.delta_a = Some(-50.0);
            d.gamma_b = Some(0.0);
            d.phonon_cutoff = Some(0);
            d.variable = Some("delta_c".into());
            d.start = Some(-100.0);
            d.stop = Some(100.0);
            d.points = Some(201);
            d.outputs = Some("nbar_num,g2_num,nbar_ana,g2_ana".into());
        }
        "com-sweep" => {
            d.model = Some("com".into());
            d.delta_a = Some(-100.0);
            d.delta_c = Some(-100.0);
            d.gamma_b = Some(0.1);
            d.phonon_cutoff = Some(3);
            d.variable = Some("nu".into());
            d.start = Some(0.0);
            d.stop = Some(200.0);
            d.points = Some(201);
            d.outputs = Some("nbar_num,g2_num,nbar_ana,g2_ana".into());
        }
        "heatmap" => {
            d.model = Some("com".into());
            d.delta_a = Some(-50.0);
            d.delta_c = Some(-50.0);
            d.gamma_b = Some(0.1);
            d.phonon_cutoff = Some(3);
            d.variable = Some("nu".into());
            d.start = Some(0.0);
            d.stop = Some(100.0);
            d.points = Some(101);
            d.variable2 = Some("gamma".into());
            d.start2 = Some(0.0);
            d.stop2 = Some(15.0);
            d.points2 = Some(101);
            d.outputs = Some("nbar_ana,g2_ana".into());
        }
        "g2tau" => {
            d.model = Some("com".into());
            d.g = Some(20.0);
            d.omega = Some(4.0);
            d.gamma = Some(4.0);
            d.gamma_b = Some(0.1);
            d.delta_a = Some(-70.0);
            d.nu = Some(50.0);
            d.delta_c = Some(-20.0);
            d.photon_cutoff = Some(4);
            d.phonon_cutoff = Some(4);
            d.tau_max = Some(2.0);
            d.tau_points = Some(400);
            d.outputs = Some("g2_tau".into());
        }
        other => {
            return Err(Error::Config(format!(
                "no defaults for command \"{other}\""
            )))
        }
    }
    Ok(d)
}

fn read_config_file(path: &Path) -> Result<PartialConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{} is not valid JSON: {e}", path.display())))?;
    // A full JSON result document carries the run description under
    // "manifest"; a bare flat object is the run description itself.
    let source = match value.get("manifest") {
        Some(m) => m.clone(),
        None => value,
    };
    serde_json::from_value(source)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

macro_rules! merge_field {
    ($out:ident, $flags:expr, $file:expr, $defaults:expr, $($f:ident),+) => {
        $( $out.$f = $flags.$f.clone().or($file.$f.clone()).or($defaults.$f.clone()); )+
    };
}

fn require<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Config(format!("missing required key \"{key}\"")))
}

/// Merge file < flags onto the per-command defaults and resolve into a
/// complete, validated run description.
pub fn parse_config(
    command: &str,
    file: Option<&Path>,
    flags: &PartialConfig,
) -> Result<RunConfig> {
    let defaults = command_defaults(command)?;
    let from_file = match file {
        Some(p) => read_config_file(p)?,
        None => PartialConfig::default(),
    };
    if let Some(c) = &from_file.command {
        if c != command {
            return Err(Error::Config(format!(
                "config file describes command \"{c}\" but \"{command}\" was invoked"
            )));
        }
    }
    let mut m = PartialConfig::default();
    merge_field!(
        m, flags, from_file, defaults, command, preset, model, delta_c, delta_a, nu, g, omega,
        gamma, gamma_b, photon_cutoff, phonon_cutoff, variable, start, stop, points, variable2,
        start2, stop2, points2, tau_max, tau_points, outputs, kappa_hz, version
    );

    let model = require(&m.model, "model")?;
    if model != "jc" && model != "com" {
        return Err(Error::Config(format!(
            "model must be \"jc\" or \"com\", got \"{model}\""
        )));
    }
    match command {
        "jc-sweep" if model != "jc" => {
            return Err(Error::Config("jc-sweep runs the \"jc\" model".into()))
        }
        "com-sweep" if model != "com" => {
            return Err(Error::Config("com-sweep runs the \"com\" model".into()))
        }
        _ => {}
    }

    let delta_a = require(&m.delta_a, "delta_a")?;
    let nu = require(&m.nu, "nu")?;
    let delta_c = match (model.as_str(), m.delta_c) {
        ("com", Some(dc)) => {
            if dc != delta_a + nu {
                return Err(Error::Config(format!(
                    "under the \"com\" model the cavity detuning is the operating point \
                     δ_a + ν = {}; got delta_c = {dc}",
                    delta_a + nu
                )));
            }
            dc
        }
        ("com", None) => delta_a + nu,
        (_, dc) => require(&dc.or(Some(0.0)), "delta_c")?,
    };

    let cfg = RunConfig {
        command: command.to_string(),
        preset: m.preset,
        model,
        delta_c,
        delta_a,
        nu,
        g: require(&m.g, "g")?,
        omega: require(&m.omega, "omega")?,
        gamma: require(&m.gamma, "gamma")?,
        gamma_b: require(&m.gamma_b.or(Some(0.0)), "gamma_b")?,
        photon_cutoff: require(&m.photon_cutoff, "photon_cutoff")?,
        phonon_cutoff: require(&m.phonon_cutoff.or(Some(0)), "phonon_cutoff")?,
        variable: m.variable,
        start: m.start,
        stop: m.stop,
        points: m.points,
        variable2: m.variable2,
        start2: m.start2,
        stop2: m.stop2,
        points2: m.points2,
        tau_max: m.tau_max,
        tau_points: m.tau_points,
        outputs: require(&m.outputs, "outputs")?,
        kappa_hz: m.kappa_hz,
        version: Some(env!("CARGO_PKG_VERSION").to_string()),
    };
    // Fail on bad physics before any computation starts.
    cfg.params().validate()?;
    to_spec(&cfg)?;
    Ok(cfg)
}

fn parse_variable(name: &str) -> Result<SweepVariable> {
    match name {
        "delta_c" => Ok(SweepVariable::DeltaC),
        "delta_a" => Ok(SweepVariable::DeltaA),
        "nu" => Ok(SweepVariable::Nu),
        "gamma" => Ok(SweepVariable::Gamma),
        other => Err(Error::Config(format!(
            "unknown scan variable \"{other}\" (known: delta_c, delta_a, nu, gamma)"
        ))),
    }
}

fn parse_outputs(list: &str) -> Result<Vec<Output>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        out.push(match name {
            "nbar_num" => Output::NbarNum,
            "g2_num" => Output::G2Num,
            "nbar_ana" => Output::NbarAna,
            "g2_ana" => Output::G2Ana,
            "g2_tau" => Output::G2Tau,
            other => {
                return Err(Error::Config(format!(
                    "unknown output \"{other}\" (known: nbar_num, g2_num, nbar_ana, \
                     g2_ana, g2_tau)"
                )))
            }
        });
    }
    if out.is_empty() {
        return Err(Error::Config("outputs list is empty".into()));
    }
    Ok(out)
}

impl RunConfig {
    pub fn params(&self) -> ModelParams {
        ModelParams {
            delta_c: self.delta_c,
            delta_a: self.delta_a,
            nu: self.nu,
            g: self.g,
            omega: self.omega,
            kappa: 1.0,
            gamma: self.gamma,
            gamma_b: self.gamma_b,
        }
    }

    pub fn model(&self) -> Model {
        if self.model == "jc" {
            Model::Jc
        } else {
            Model::ComEffective
        }
    }
}

fn axis_from(
    variable: &Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    which: &str,
) -> Result<AxisSpec> {
    let name = variable
        .as_deref()
        .ok_or_else(|| Error::Config(format!("missing {which} scan variable")))?;
    Ok(AxisSpec {
        variable: parse_variable(name)?,
        start: start.ok_or_else(|| Error::Config(format!("missing {which} start")))?,
        stop: stop.ok_or_else(|| Error::Config(format!("missing {which} stop")))?,
        points: points.ok_or_else(|| Error::Config(format!("missing {which} points")))?,
    })
}

/// Translate a resolved config into an executable sweep description.
pub fn to_spec(cfg: &RunConfig) -> Result<SweepSpec> {
    let outputs = parse_outputs(&cfg.outputs)?;
    let axes = match cfg.command.as_str() {
        "jc-sweep" | "com-sweep" => vec![axis_from(
            &cfg.variable,
            cfg.start,
            cfg.stop,
            cfg.points,
            "first",
        )?],
        "heatmap" => vec![
            axis_from(&cfg.variable, cfg.start, cfg.stop, cfg.points, "first")?,
            axis_from(&cfg.variable2, cfg.start2, cfg.stop2, cfg.points2, "second")?,
        ],
        "g2tau" => {
            if outputs != [Output::G2Tau] {
                return Err(Error::Config(
                    "g2tau produces exactly the g2_tau output".into(),
                ));
            }
            vec![]
        }
        other => return Err(Error::Config(format!("unknown command \"{other}\""))),
    };
    if cfg.command != "g2tau" && outputs.contains(&Output::G2Tau) {
        return Err(Error::Config(
            "the g2_tau output belongs to the g2tau command".into(),
        ));
    }
    let tau_grid = if cfg.command == "g2tau" {
        let n = cfg
            .tau_points
            .ok_or_else(|| Error::Config("missing tau_points".into()))?;
        let t_max = cfg
            .tau_max
            .ok_or_else(|| Error::Config("missing tau_max".into()))?;
        if n < 2 || !(t_max > 0.0) {
            return Err(Error::Config(
                "the delay grid needs tau_points >= 2 and tau_max > 0".into(),
            ));
        }
        Some(
            (0..n)
                .map(|i| i as f64 * t_max / (n - 1) as f64)
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    Ok(SweepSpec {
        model: cfg.model(),
        axes,
        base: cfg.params(),
        outputs,
        space: SpaceSpec::new(cfg.photon_cutoff, cfg.phonon_cutoff)?,
        tau_grid,
    })
}

/// Execute a resolved config.
pub fn run_config(cfg: &RunConfig) -> Result<SweepResult> {
    let spec = to_spec(cfg)?;
    match cfg.command.as_str() {
        "heatmap" => run_heatmap(&spec),
        _ => run_sweep(&spec),
    }
}

/// Reconstruct the generic, reproducible config behind a named preset.
pub fn preset_config(name: &str) -> Result<RunConfig> {
    let spec = figure_preset(name)?;
    let command = match (spec.axes.len(), spec.model) {
        (0, _) => "g2tau",
        (1, Model::Jc) => "jc-sweep",
        (1, Model::ComEffective) => "com-sweep",
        (2, _) => "heatmap",
        _ => unreachable!("presets have at most two axes"),
    };
    let output_names: Vec<&str> = spec
        .outputs
        .iter()
        .map(|o| match o {
            Output::NbarNum => "nbar_num",
            Output::G2Num => "g2_num",
            Output::NbarAna => "nbar_ana",
            Output::G2Ana => "g2_ana",
            Output::G2Tau => "g2_tau",
        })
        .collect();
    let axis = spec.axes.first();
    let axis2 = spec.axes.get(1);
    let variable_name = |v: SweepVariable| v.name().to_string();
    let (tau_max, tau_points) = match &spec.tau_grid {
        Some(grid) => (grid.last().copied(), Some(grid.len())),
        None => (None, None),
    };
    Ok(RunConfig {
        command: command.to_string(),
        preset: Some(name.to_string()),
        model: match spec.model {
            Model::Jc => "jc".into(),
            Model::ComEffective => "com".into(),
        },
        delta_c: spec.base.delta_c,
        delta_a: spec.base.delta_a,
        nu: spec.base.nu,
        g: spec.base.g,
        omega: spec.base.omega,
        gamma: spec.base.gamma,
        gamma_b: spec.base.gamma_b,
        photon_cutoff: spec.space.photon_cutoff,
        phonon_cutoff: spec.space.phonon_cutoff,
        variable: axis.map(|a| variable_name(a.variable)),
        start: axis.map(|a| a.start),
        stop: axis.map(|a| a.stop),
        points: axis.map(|a| a.points),
        variable2: axis2.map(|a| variable_name(a.variable)),
        start2: axis2.map(|a| a.start),
        stop2: axis2.map(|a| a.stop),
        points2: axis2.map(|a| a.points),
        tau_max,
        tau_points,
        outputs: output_names.join(","),
        kappa_hz: None,
        version: Some(env!("CARGO_PKG_VERSION").to_string()),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.17e}"),
        None => String::new(),
    }
}

/// Serialize a result as CSV: header row, coordinates first, scalar
/// columns, diagnostics, error last. Missing values are empty cells, never
/// NaN-as-data.
pub fn emit_csv<W: std::io::Write>(result: &SweepResult, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = result.coordinate_names.clone();
    header.extend(
        ["nbar_num", "g2_num", "nbar_ana", "g2_ana"]
            .iter()
            .map(|s| s.to_string()),
    );
    if result.includes_log10 {
        header.push("log10_g2".into());
    }
    header.extend(
        ["steady_residual", "truncation_delta", "error"]
            .iter()
            .map(|s| s.to_string()),
    );
    wtr.write_record(&header).map_err(csv_err)?;
    for row in &result.rows {
        let mut rec: Vec<String> = row.coordinates.iter().map(|c| format!("{c:.17e}")).collect();
        rec.push(fmt_opt(row.nbar_num));
        rec.push(fmt_opt(row.g2_num));
        rec.push(fmt_opt(row.nbar_ana));
        rec.push(fmt_opt(row.g2_ana));
        if result.includes_log10 {
            rec.push(fmt_opt(row.log10_g2));
        }
        rec.push(fmt_opt(row.diagnostics.steady_residual));
        rec.push(fmt_opt(row.diagnostics.truncation_delta));
        rec.push(row.error.clone().unwrap_or_default());
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Serialize)]
struct Document<'a> {
    manifest: &'a RunConfig,
    coordinate_names: &'a [String],
    includes_log10: bool,
    rows: &'a [crate::sweep::SweepRow],
}

/// Serialize a result as JSON: rows plus the resolved-config manifest.
pub fn emit_json<W: std::io::Write>(result: &SweepResult, cfg: &RunConfig, w: W) -> Result<()> {
    let doc = Document {
        manifest: cfg,
        coordinate_names: &result.coordinate_names,
        includes_log10: result.includes_log10,
        rows: &result.rows,
    };
    serde_json::to_writer_pretty(w, &doc)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok(())
}

fn gnuplot_hint(cfg: &RunConfig, out: &str) -> String {
    let file = if out == "-" { "table.csv" } else { out };
    match cfg.command.as_str() {
        "heatmap" => format!(
            "gnuplot -p -e \"set datafile separator ','; set view map; \
             splot '{file}' using 2:1:7 with points pt 5 ps 1 palette notitle\""
        ),
        "g2tau" => format!(
            "gnuplot -p -e \"set datafile separator ','; set key top right; \
             plot '{file}' using 1:3 with lines title 'g2 regression', \
             '{file}' using 1:5 with lines title 'g2 closed route'\""
        ),
        _ => format!(
            "gnuplot -p -e \"set datafile separator ','; set logscale y; \
             plot '{file}' using 1:3 with lines title 'g2 numeric', \
             '{file}' using 1:5 with lines title 'g2 closed form'\""
        ),
    }
}

fn write_output(result: &SweepResult, cfg: &RunConfig, io: &IoArgs) -> Result<()> {
    let render = |w: &mut dyn std::io::Write| -> Result<()> {
        match io.format {
            Format::Csv => emit_csv(result, w),
            Format::Json => emit_json(result, cfg, w),
        }
    };
    if io.out == "-" {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        render(&mut lock)?;
        lock.flush()?;
    } else {
        let mut f = std::fs::File::create(&io.out)?;
        render(&mut f)?;
        f.flush()?;
    }
    if let Some(path) = &io.manifest {
        let mut f = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, cfg)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        f.flush()?;
    }
    if io.gnuplot_hint {
        eprintln!("{}", gnuplot_hint(cfg, &io.out));
    }
    Ok(())
}

fn run_eigen(args: &EigenArgs) -> Result<()> {
    let p = ModelParams {
        delta_c: args.delta_c,
        delta_a: args.delta_a,
        nu: 0.0,
        g: args.g,
        omega: 0.1,
        kappa: 1.0,
        gamma: 1.0,
        gamma_b: 0.0,
    };
    if args.n_max < 1 {
        return Err(Error::Validation("n_max must be at least 1".into()));
    }
    println!(
        "# dressed levels at g = {}, delta_c = {}, delta_a = {} (offset {})",
        p.g,
        p.delta_c,
        p.delta_a,
        p.delta_tilde()
    );
    for n in 1..=args.n_max {
        let (minus, plus) = jc_dressed_levels(n, &p)?;
        println!(
            "manifold {n}: E- = {:.12e}, E+ = {:.12e}, splitting = {:.12e}",
            minus.energy,
            plus.energy,
            plus.energy - minus.energy
        );
    }
    let res = two_photon_resonances(&p)?;
    println!(
        "two-photon drive resonances: delta_c = {:.12e}, {:.12e}",
        res[0], res[1]
    );
    println!(
        "one-photon drive resonances: delta_c = {:.12e}, {:.12e}",
        res[2], res[3]
    );
    let sqrt2 = std::f64::consts::SQRT_2;
    println!(
        "moving-atom operating-point splittings: 2g = {:.12e}, 2*sqrt(2)*g = {:.12e}",
        2.0 * p.g,
        2.0 * sqrt2 * p.g
    );
    Ok(())
}

fn classify_exit(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::Config(_) | Error::Dimension(_) => 2,
        _ => 3,
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::JcSweep(args) => run_table("jc-sweep", &args),
        Command::ComSweep(args) => run_table("com-sweep", &args),
        Command::Heatmap(args) => run_table("heatmap", &args),
        Command::G2tau(args) => run_table("g2tau", &args),
        Command::Eigen(args) => run_eigen(&args).map(|_| false),
        Command::Preset(args) => {
            let cfg = preset_config(&args.name)?;
            let result = run_config(&cfg)?;
            write_output(&result, &cfg, &args.io)?;
            Ok(result.rows.iter().any(|r| r.error.is_some()))
        }
    }
}

fn run_table(command: &str, args: &RunArgs) -> Result<bool> {
    let cfg = parse_config(command, args.config.as_deref(), &args.overrides())?;
    let result = run_config(&cfg)?;
    write_output(&result, &cfg, &args.io)?;
    Ok(result.rows.iter().any(|r| r.error.is_some()))
}

/// Entry point for the binary: returns the process exit code (0 success,
/// 2 configuration/validation error, 3 numerical failure — including runs
/// whose table contains error-tagged rows).
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(false) => 0,
        Ok(true) => {
            eprintln!("warning: some grid points failed; see the error column");
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            classify_exit(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{Diagnostics, SweepRow};

    fn flags() -> PartialConfig {
        PartialConfig::default()
    }

    #[test]
    fn defaults_resolve_for_every_table_command() {
        for cmd in ["jc-sweep", "com-sweep", "heatmap", "g2tau"] {
            let cfg = parse_config(cmd, None, &flags()).unwrap();
            assert_eq!(cfg.command, cmd);
            assert!(to_spec(&cfg).is_ok(), "{cmd} default spec");
            assert_eq!(cfg.version.as_deref(), Some(env!("CARGO_PKG_VERSION")));
        }
    }

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join("photonstats-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("override.json");
        std::fs::write(&path, r#"{"omega": 0.1, "points": 11}"#).unwrap();
        let mut f = flags();
        f.omega = Some(0.05);
        let cfg = parse_config("jc-sweep", Some(&path), &f).unwrap();
        assert_eq!(cfg.omega, 0.05); // flag wins
        assert_eq!(cfg.points, Some(11)); // file wins over default
        assert_eq!(cfg.gamma, 1.0); // default
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = std::env::temp_dir().join("photonstats-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("unknown.json");
        std::fs::write(&path, r#"{"omega": 0.1, "omegga": 0.2}"#).unwrap();
        let err = parse_config("jc-sweep", Some(&path), &flags()).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
        assert!(err.to_string().contains("omegga"));
    }

    #[test]
    fn bad_physics_fails_before_running() {
        let mut f = flags();
        f.gamma = Some(-1.0);
        let err = parse_config("jc-sweep", None, &f).unwrap_err();
        assert_eq!(classify_exit(&err), 2, "{err}");
    }

    #[test]
    fn com_cavity_detuning_must_be_the_operating_point() {
        let mut f = flags();
        f.delta_c = Some(-17.0);
        let err = parse_config("com-sweep", None, &f).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");

        // Supplying the consistent value is fine.
        let mut ok = flags();
        ok.delta_a = Some(-60.0);
        ok.nu = Some(10.0);
        ok.delta_c = Some(-50.0);
        let cfg = parse_config("com-sweep", None, &ok).unwrap();
        assert_eq!(cfg.delta_c, -50.0);
    }

    #[test]
    fn outputs_are_validated_per_command() {
        let mut f = flags();
        f.outputs = Some("g2_tau".into());
        assert!(parse_config("jc-sweep", None, &f).is_err());

        let mut g = flags();
        g.outputs = Some("g2_num,g2_wat".into());
        let err = parse_config("com-sweep", None, &g).unwrap_err();
        assert!(err.to_string().contains("g2_wat"));

        let mut h = flags();
        h.outputs = Some("g2_num".into());
        assert!(parse_config("g2tau", None, &h).is_err());
    }

    #[test]
    fn preset_configs_map_to_generic_commands() {
        let f1 = preset_config("fig1d").unwrap();
        assert_eq!(f1.command, "jc-sweep");
        assert_eq!(f1.preset.as_deref(), Some("fig1d"));
        assert_eq!(f1.points, Some(801));

        let f3 = preset_config("fig3b").unwrap();
        assert_eq!(f3.command, "heatmap");
        assert_eq!(f3.variable2.as_deref(), Some("gamma"));
        assert_eq!(f3.gamma_b, 1.0);

        let f4 = preset_config("fig4").unwrap();
        assert_eq!(f4.command, "g2tau");
        assert_eq!(f4.tau_points, Some(400));
        assert_eq!(f4.tau_max, Some(2.0));
        assert_eq!(f4.outputs, "g2_tau");

        // Every preset's reconstruction is itself a valid run description.
        for name in [
            "fig1c", "fig1d", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig4",
        ] {
            let cfg = preset_config(name).unwrap();
            assert!(to_spec(&cfg).is_ok(), "{name}");
        }
    }

    #[test]
    fn delay_grid_is_uniform_and_starts_at_zero() {
        let cfg = parse_config("g2tau", None, &flags()).unwrap();
        let spec = to_spec(&cfg).unwrap();
        let grid = spec.tau_grid.unwrap();
        assert_eq!(grid.len(), 400);
        assert_eq!(grid[0], 0.0);
        assert!((grid[399] - 2.0).abs() < 1e-15);
        let step = grid[1] - grid[0];
        for w in grid.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_has_header_plus_one_line_per_row() {
        let result = SweepResult {
            coordinate_names: vec!["nu".into()],
            includes_log10: false,
            rows: vec![
                SweepRow {
                    coordinates: vec![1.0],
                    nbar_num: Some(1.25e-7),
                    g2_num: Some(0.5),
                    nbar_ana: None,
                    g2_ana: None,
                    log10_g2: None,
                    diagnostics: Diagnostics {
                        steady_residual: Some(1e-14),
                        truncation_delta: Some(2e-9),
                    },
                    error: None,
                },
                SweepRow {
                    coordinates: vec![2.0],
                    nbar_num: None,
                    g2_num: None,
                    nbar_ana: None,
                    g2_ana: None,
                    log10_g2: None,
                    diagnostics: Diagnostics::default(),
                    error: Some("master-equation point: invalid input: gamma".into()),
                },
            ],
        };
        let mut buf = Vec::new();
        emit_csv(&result, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "nu,nbar_num,g2_num,nbar_ana,g2_ana,steady_residual,truncation_delta,error"
        );
        // Failed point: empty numeric cells and a textual error tag, no NaN.
        assert!(lines[2].starts_with("2.00000000000000000e0,,,,,"));
        assert!(lines[2].contains("invalid input"));
        assert!(!text.contains("NaN"));
        // Full-precision scientific notation: the printed cell parses back
        // to the identical double.
        let cell = lines[1].split(',').nth(1).unwrap();
        assert!(cell.ends_with("e-7"), "{cell}");
        assert_eq!(cell.parse::<f64>().unwrap().to_bits(), 1.25e-7f64.to_bits());
    }

    #[test]
    fn json_document_round_trips_through_parse_config() {
        let mut f = flags();
        f.points = Some(5);
        f.outputs = Some("nbar_ana,g2_ana".into());
        let cfg = parse_config("com-sweep", None, &f).unwrap();
        let result = run_config(&cfg).unwrap();

        let mut buf = Vec::new();
        emit_json(&result, &cfg, &mut buf).unwrap();
        let dir = std::env::temp_dir().join("photonstats-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.json");
        std::fs::write(&path, &buf).unwrap();

        let reparsed = parse_config("com-sweep", Some(&path), &flags()).unwrap();
        assert_eq!(reparsed, cfg);

        let rerun = run_config(&reparsed).unwrap();
        for (a, b) in result.rows.iter().zip(rerun.rows.iter()) {
            assert_eq!(
                a.g2_ana.map(f64::to_bits),
                b.g2_ana.map(f64::to_bits)
            );
            assert_eq!(
                a.nbar_ana.map(f64::to_bits),
                b.nbar_ana.map(f64::to_bits)
            );
        }
    }

    #[test]
    fn command_mismatch_with_config_file_is_an_error() {
        let dir = std::env::temp_dir().join("photonstats-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mismatch.json");
        std::fs::write(&path, r#"{"command": "com-sweep"}"#).unwrap();
        let err = parse_config("jc-sweep", Some(&path), &flags()).unwrap_err();
        assert_eq!(classify_exit(&err), 2, "{err}");
    }

    #[test]
    fn exit_codes_distinguish_validation_from_numerics() {
        assert_eq!(classify_exit(&Error::Validation("x".into())), 2);
        assert_eq!(classify_exit(&Error::Config("x".into())), 2);
        assert_eq!(classify_exit(&Error::Dimension("x".into())), 2);
        assert_eq!(classify_exit(&Error::NonConvergence("x".into())), 3);
        assert_eq!(classify_exit(&Error::Linalg("x".into())), 3);
    }
}
