//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 a requirement check
//! failed, 3 numerical non-convergence.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use cubesat_preflight_core::model::{allowable_stress, validate_model, BoundaryCondition, Material, SatelliteModel};
use cubesat_preflight_core::power::{budget_report, PowerState};
use cubesat_preflight_core::scenario::ModeKind;
use cubesat_preflight_core::structural::{envelope_check, modal_frequencies, rail_load_check, static_load, BeamChain};
use cubesat_preflight_core::vib::{
    estimate_psd, first_resonance, grms, min_frequency_check, response_mag, PeakRule, Psd, WelchConfig, Window,
    DEFAULT_REFERENCE_FLOOR,
};
use cubesat_preflight_core::Error as CoreError;

use crate::config::{load_model, ConfigError};
use crate::io::{self, IoError};
use crate::report::{
    sha256_hex, to_json, BudgetJson, CheckItem, CheckReport, ModalJson, ResonanceJson, ResonanceReport, RunManifest,
    StaticJson,
};
use crate::runs::{run_thermal, EclipseChoice, ThermalRequest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_REQUIREMENT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cubesat-preflight",
    version,
    about = "Pre-flight thermal, power, vibration and structural checks"
)]
pub struct Cli {
    /// Model file (TOML).
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a model file and list findings.
    Validate,
    /// Periodic orbit temperatures for one scenario.
    Thermal(ThermalArgs),
    /// Generation versus requirement.
    Power(PowerArgs),
    /// Random-vibration processing.
    #[command(subcommand)]
    Vib(VibCommand),
    /// Beam-chain structural analysis and requirement checks.
    #[command(subcommand, name = "struct")]
    Struct(StructCommand),
    /// Thermal runs over cases x surfaces x modes, one summary row each.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Spin,
    Sun,
    Nadir,
}

impl From<ModeArg> for ModeKind {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Spin => ModeKind::Spin,
            ModeArg::Sun => ModeKind::Sun,
            ModeArg::Nadir => ModeKind::Nadir,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PowerArg {
    Min,
    Max,
}

impl From<PowerArg> for PowerState {
    fn from(p: PowerArg) -> Self {
        match p {
            PowerArg::Min => PowerState::Minimum,
            PowerArg::Max => PowerState::Maximum,
        }
    }
}

#[derive(Debug, Args)]
pub struct ThermalArgs {
    #[arg(long, default_value = "hot")]
    pub case: String,
    /// Surface configuration; the model's own finishes when omitted.
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long, value_enum, default_value = "spin")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "min")]
    pub power: PowerArg,
    /// Integration step [s].
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value = "geom")]
    pub eclipse: EclipseChoice,
    /// Output directory for history.csv, summary.json, ranges.csv and
    /// manifest.json; only the console table is produced when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Case whose orbit is used for the numerically averaged modes.
    #[arg(long, default_value = "nominal")]
    pub case: String,
    #[arg(long, value_enum, default_value = "geom")]
    pub eclipse: EclipseChoice,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WindowArg {
    Hann,
    Rect,
}

#[derive(Debug, Args)]
pub struct WelchArgs {
    /// Time-series CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Segment length in samples (power of two); chosen for >= 8 averages
    /// when omitted.
    #[arg(long)]
    pub segment: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    #[arg(long, value_enum, default_value = "hann")]
    pub window: WindowArg,
}

#[derive(Debug, Subcommand)]
pub enum VibCommand {
    /// Overall level of a breakpoint profile over a band.
    Grms {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long = "from")]
        from_hz: f64,
        #[arg(long = "to")]
        to_hz: f64,
    },
    /// PSD of every channel in a time-series file.
    Psd {
        #[command(flatten)]
        welch: WelchArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Response magnification of every channel against a reference channel.
    Mag {
        #[command(flatten)]
        welch: WelchArgs,
        #[arg(long)]
        reference: String,
        #[arg(long, default_value_t = DEFAULT_REFERENCE_FLOOR)]
        floor: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First resonance of every channel and the minimum-frequency gate.
    Resonance {
        #[command(flatten)]
        welch: WelchArgs,
        #[arg(long)]
        reference: String,
        #[arg(long, default_value_t = DEFAULT_REFERENCE_FLOOR)]
        floor: f64,
        /// Ignore peaks at or below this frequency [Hz].
        #[arg(long, default_value_t = 5.0)]
        f_min: f64,
        /// Gate [Hz]; the model requirement or 60 Hz when omitted.
        #[arg(long)]
        limit: Option<f64>,
        /// A peak must exceed this multiple of the surrounding median.
        #[arg(long, default_value_t = 1.5)]
        prominence: f64,
        /// Half-width of the median window around a candidate peak [octaves].
        #[arg(long, default_value_t = 1.0 / 3.0)]
        window_octaves: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum StructCommand {
    /// Natural frequencies and mode shapes of the panel chain. Reports only;
    /// the vehicle frequency gate is `struct check`.
    Modal {
        #[arg(long, default_value_t = 4)]
        modes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deflection and stress under a quasi-static load normal to the panels.
    Static {
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        /// Stack offset added to the deflection for the envelope check [mm].
        #[arg(long, default_value_t = 0.0)]
        offset_mm: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Requirement gates on supplied or model-derived values.
    Check {
        /// Measured or predicted first natural frequency [Hz]; repeatable.
        #[arg(long = "first-freq")]
        first_freq: Vec<f64>,
        /// Peak stress to compare with the allowable [MPa].
        #[arg(long)]
        stress_mpa: Option<f64>,
        /// Deflection to compare with the envelope [mm].
        #[arg(long)]
        deflection_mm: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        offset_mm: f64,
        /// Material for stress and rail checks; the first panel's when omitted.
        #[arg(long)]
        material: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "hot,cold")]
    pub cases: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "a,b,c")]
    pub surfaces: Vec<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "spin")]
    pub modes: Vec<ModeArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "min")]
    pub power: Vec<PowerArg>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value = "geom")]
    pub eclipse: EclipseChoice,
    /// Concurrent scenario runs; all cores when omitted.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Failure of a command, already classified by exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Self::input(e.to_string())
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::NoConvergence { .. } | CoreError::StepTooLarge { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<bool, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_REQUIREMENT,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn main_exit() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

struct LoadedModel {
    model: SatelliteModel,
    path: String,
    bytes: Vec<u8>,
}

impl LoadedModel {
    fn manifest(&self, command: &str, scenario: Option<String>, parameters: serde_json::Value) -> RunManifest {
        RunManifest::new(command, Some((&self.path, &self.bytes)), scenario, parameters)
    }
}

fn load(path: Option<&Path>) -> Result<LoadedModel, Failure> {
    let path = path.ok_or_else(|| Failure::input("this command needs --model <path>"))?;
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let model = load_model(path)?;
    Ok(LoadedModel {
        model,
        path: path.display().to_string(),
        bytes,
    })
}

fn optional_model(path: Option<&Path>) -> Result<Option<LoadedModel>, Failure> {
    path.map(|p| load(Some(p))).transpose()
}

fn manifest_with(loaded: Option<&LoadedModel>, command: &str, parameters: serde_json::Value) -> RunManifest {
    match loaded {
        Some(l) => l.manifest(command, None, parameters),
        None => RunManifest::new(command, None, None, parameters),
    }
}

/// Welch settings plus a digest of the measurement file, so a manifest pins
/// the data it was computed from.
fn welch_parameters(w: &WelchArgs) -> Result<serde_json::Value, Failure> {
    let bytes = fs::read(&w.input).map_err(|e| Failure::input(format!("cannot read {}: {e}", w.input.display())))?;
    Ok(json!({
        "input": w.input.display().to_string(),
        "input_sha256": sha256_hex(&bytes),
        "segment": w.segment,
        "overlap": w.overlap,
        "window": match w.window {
            WindowArg::Hann => "hann",
            WindowArg::Rect => "rect",
        },
    }))
}

fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<(), Failure> {
    io::ensure_dir(dir)?;
    for (name, contents) in files {
        io::write_atomic(&dir.join(name), contents.as_bytes())?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Outcome {
    let model_path = cli.model.as_deref();
    match &cli.command {
        Command::Validate => validate(model_path),
        Command::Thermal(a) => thermal(model_path, a),
        Command::Power(a) => power(model_path, a),
        Command::Vib(v) => vib(model_path, v),
        Command::Struct(s) => structure(model_path, s),
        Command::Sweep(a) => sweep(model_path, a),
    }
}

fn validate(path: Option<&Path>) -> Outcome {
    let path = path.ok_or_else(|| Failure::input("validate needs --model <path>"))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let model = crate::config::parse_model_file(&text)?.to_model()?;
    let report = validate_model(&model);
    for w in &report.warnings {
        println!("warning: {w}");
    }
    for e in &report.errors {
        println!("error: {e}");
    }
    println!(
        "{}: {} error(s), {} warning(s)",
        path.display(),
        report.errors.len(),
        report.warnings.len()
    );
    if report.is_ok() {
        Ok(true)
    } else {
        Err(Failure::input("model is invalid"))
    }
}

fn thermal(path: Option<&Path>, a: &ThermalArgs) -> Outcome {
    let loaded = load(path)?;
    let req = ThermalRequest {
        case: a.case.clone(),
        surface: a.surface.clone(),
        mode: a.mode.into(),
        power: a.power.into(),
        dt: a.dt,
        eclipse: a.eclipse,
    };
    let outcome = run_thermal(&loaded.model, &req)?;
    for n in &outcome.summary.nodes {
        let bands: Vec<String> = n
            .bands
            .iter()
            .map(|b| format!("{} {}", b.band, if b.pass { "pass" } else { "FAIL" }))
            .collect();
        println!(
            "{:<8} min {:>7.2} °C  max {:>7.2} °C  ({} orbits){}{}",
            n.node,
            n.min_c,
            n.max_c,
            n.orbits,
            if bands.is_empty() { "" } else { "  " },
            bands.join(", ")
        );
    }
    if let Some(out) = &a.out {
        let manifest = loaded.manifest("thermal", Some(req.label()), thermal_parameters(&req, &loaded.model));
        write_outputs(
            out,
            &[
                ("history.csv", io::history_csv(&outcome.histories)),
                ("summary.json", to_json(&outcome.summary)),
                ("ranges.csv", io::ranges_csv(&outcome.summary)),
                ("manifest.json", to_json(&manifest)),
            ],
        )?;
    }
    Ok(outcome.summary.pass)
}

fn thermal_parameters(req: &ThermalRequest, model: &SatelliteModel) -> serde_json::Value {
    let sim = &model.scenarios.sim;
    json!({
        "case": req.case,
        "surface": req.surface,
        "mode": req.mode.as_str(),
        "power": req.power.as_str(),
        "eclipse": req.eclipse.as_str(),
        "dt_s": req.dt.unwrap_or(sim.dt),
        "tolerance_k": sim.tolerance,
        "max_orbits": sim.max_orbits,
        "initial_temperature_k": sim.initial_temperature,
    })
}

fn power(path: Option<&Path>, a: &PowerArgs) -> Outcome {
    let loaded = load(path)?;
    let model = &loaded.model;
    let orbit = model.scenarios.orbit_for(model.scenarios.case(&a.case)?)?;
    let report = budget_report(model, &orbit, a.eclipse.model())?;
    let j = BudgetJson::from(&report);
    println!("cell peak           {:>7.3} W", j.cell_peak_w);
    println!("string peak         {:>7.3} W", j.string_peak_w);
    println!("spin average/string {:>7.3} W", j.spin_average_w);
    println!(
        "max (rated)         {:>7.3} W over {} strings",
        j.max_rated_w,
        j.orientable_strings.len()
    );
    println!("required (sunlit)   {:>7.3} W", j.required_w);
    println!("per string          {:>7.3} W", j.per_string_w);
    println!(
        "string gap          {:>7.3} W (quoted {:.2} W)",
        j.gap_w, j.quoted.gap_w
    );
    println!("spin margin         {:>7.3} W", j.margin_w);
    if let Some(out) = &a.out {
        let manifest = loaded.manifest(
            "power",
            Some(a.case.clone()),
            json!({"case": a.case, "eclipse": a.eclipse.as_str()}),
        );
        write_outputs(
            out,
            &[("budget.json", to_json(&j)), ("manifest.json", to_json(&manifest))],
        )?;
    }
    Ok(j.margin_w >= 0.0)
}

fn welch_config(w: &WelchArgs, samples: usize) -> WelchConfig {
    let mut c = WelchConfig::for_length(samples);
    if let Some(seg) = w.segment {
        c.segment_length = seg;
    }
    c.overlap = w.overlap;
    c.window = match w.window {
        WindowArg::Hann => Window::Hann,
        WindowArg::Rect => Window::Rectangular,
    };
    c
}

fn channel_psds(w: &WelchArgs) -> Result<Vec<Psd>, Failure> {
    let series = io::read_time_series(&w.input)?;
    series
        .iter()
        .map(|s| Ok(estimate_psd(s, &welch_config(w, s.samples.len()))?))
        .collect()
}

fn split_reference(psds: Vec<Psd>, reference: &str) -> Result<(Psd, Vec<Psd>), Failure> {
    let (refs, others): (Vec<Psd>, Vec<Psd>) = psds.into_iter().partition(|p| p.channel == reference);
    let r = refs
        .into_iter()
        .next()
        .ok_or_else(|| Failure::input(format!("reference channel `{reference}` not found")))?;
    Ok((r, others))
}

fn vib(path: Option<&Path>, cmd: &VibCommand) -> Outcome {
    match cmd {
        VibCommand::Grms {
            profile,
            from_hz,
            to_hz,
        } => {
            let p = io::read_profile(profile)?;
            let g = grms(&p, *from_hz, *to_hz)?;
            println!("{g:.4} Grms over {from_hz}-{to_hz} Hz");
            Ok(true)
        }
        VibCommand::Psd { welch, out } => {
            let psds = channel_psds(welch)?;
            for p in &psds {
                println!(
                    "{:<12} {:>4} averages  variance {:.6e} G²",
                    p.channel,
                    p.averages,
                    p.total_power()
                );
            }
            if let Some(out) = out {
                let manifest = manifest_with(None, "vib psd", welch_parameters(welch)?);
                write_outputs(
                    out,
                    &[("psd.csv", io::psd_csv(&psds)), ("manifest.json", to_json(&manifest))],
                )?;
            }
            Ok(true)
        }
        VibCommand::Mag {
            welch,
            reference,
            floor,
            out,
        } => {
            let (r, others) = split_reference(channel_psds(welch)?, reference)?;
            let mags = others
                .iter()
                .map(|p| response_mag(p, &r, *floor))
                .collect::<Result<Vec<_>, _>>()?;
            for m in &mags {
                let peak = m.magnification.iter().flatten().fold(0.0f64, |a, b| a.max(*b));
                println!("{:<12} peak magnification {peak:.3}", m.channel);
            }
            if let Some(out) = out {
                let mut params = welch_parameters(welch)?;
                params["reference"] = json!(reference);
                params["floor"] = json!(floor);
                let manifest = manifest_with(None, "vib mag", params);
                write_outputs(
                    out,
                    &[("mag.csv", io::mag_csv(&mags)), ("manifest.json", to_json(&manifest))],
                )?;
            }
            Ok(true)
        }
        VibCommand::Resonance {
            welch,
            reference,
            floor,
            f_min,
            limit,
            prominence,
            window_octaves,
            out,
        } => {
            let loaded = optional_model(path)?;
            let limit = match limit {
                Some(l) => *l,
                None => loaded.as_ref().map_or(60.0, |m| m.model.requirements.min_frequency_hz),
            };
            let rule = PeakRule {
                ratio: *prominence,
                half_window_octaves: *window_octaves,
            };
            let (r, others) = split_reference(channel_psds(welch)?, reference)?;
            let mut channels = Vec::new();
            for p in &others {
                let mag = response_mag(p, &r, *floor)?;
                match first_resonance(&mag, *f_min, &rule) {
                    Ok(res) => {
                        let check = &min_frequency_check(&[(p.channel.clone(), res.frequency)], limit)?[0];
                        channels.push(ResonanceJson::from_check(check, res.magnification));
                    }
                    Err(CoreError::NoPeak) => channels.push(ResonanceJson {
                        channel: p.channel.clone(),
                        frequency_hz: None,
                        magnification: None,
                        pass: true,
                        note: Some("no resonance detected in the analysed band".into()),
                    }),
                    Err(e) => return Err(e.into()),
                }
            }
            for c in &channels {
                match c.frequency_hz {
                    Some(f) => println!(
                        "{:<12} {:>8.2} Hz  {}",
                        c.channel,
                        f,
                        if c.pass { "pass" } else { "FAIL" }
                    ),
                    None => println!("{:<12}     none", c.channel),
                }
            }
            let report = ResonanceReport {
                reference: reference.clone(),
                limit_hz: limit,
                pass: channels.iter().all(|c| c.pass),
                channels,
            };
            if let Some(out) = out {
                let mut params = welch_parameters(welch)?;
                for (k, v) in [
                    ("reference", json!(reference)),
                    ("floor", json!(floor)),
                    ("f_min", json!(f_min)),
                    ("limit", json!(limit)),
                    ("prominence", json!(prominence)),
                    ("window_octaves", json!(window_octaves)),
                ] {
                    params[k] = v;
                }
                let manifest = manifest_with(loaded.as_ref(), "vib resonance", params);
                write_outputs(
                    out,
                    &[
                        ("resonance.json", to_json(&report)),
                        ("manifest.json", to_json(&manifest)),
                    ],
                )?;
            }
            Ok(report.pass)
        }
    }
}

fn boundary_name(b: BoundaryCondition) -> &'static str {
    match b {
        BoundaryCondition::ClampedFree => "clamped_free",
        BoundaryCondition::PinnedPinned => "pinned_pinned",
        BoundaryCondition::ClampedEnds => "clamped_ends",
        BoundaryCondition::Free => "free",
    }
}

fn chain_material(model: &SatelliteModel, name: Option<&str>) -> Result<Material, Failure> {
    let name = match name {
        Some(n) => n.to_owned(),
        None => model
            .panels
            .first()
            .map(|p| p.material.clone())
            .or_else(|| model.materials.first().map(|m| m.name.clone()))
            .ok_or_else(|| Failure::input("model defines no materials"))?,
    };
    Ok(model.material(&name)?.clone())
}

fn structure(path: Option<&Path>, cmd: &StructCommand) -> Outcome {
    match cmd {
        StructCommand::Modal { modes, out } => {
            let loaded = load(path)?;
            let model = &loaded.model;
            let chain = BeamChain::from_model(model)?;
            let modal = modal_frequencies(&chain, *modes)?;
            let j = ModalJson::new(
                boundary_name(chain.boundary),
                chain.span(),
                chain.total_mass(),
                &modal,
                model.requirements.min_frequency_hz,
            );
            for (i, f) in modal.frequencies.iter().enumerate() {
                println!("mode {}: {f:.3} Hz", i + 1);
            }
            if let Some(out) = out {
                let manifest = loaded.manifest("struct modal", None, json!({"modes": modes}));
                write_outputs(
                    out,
                    &[
                        ("modal.json", to_json(&j)),
                        ("mode_shapes.csv", io::mode_shapes_csv(&modal)),
                        ("manifest.json", to_json(&manifest)),
                    ],
                )?;
            }
            Ok(true)
        }
        StructCommand::Static { g, offset_mm, out } => {
            let loaded = load(path)?;
            let model = &loaded.model;
            let chain = BeamChain::from_model(model)?;
            let result = static_load(&chain, *g)?;
            let per_g = static_load(&chain, 1.0)?.max_stress;
            let material = chain_material(model, None)?;
            let factor = material
                .allowable_stress_factor
                .unwrap_or(model.requirements.allowable_stress_factor);
            let allowable = allowable_stress(&material, factor)?;
            let env = envelope_check(
                result.max_deflection,
                offset_mm * 1e-3,
                model.requirements.envelope_limit,
            )?;
            let j = StaticJson::new(&result, per_g, allowable, env.limit, env.pass);
            println!(
                "max deflection {:.3} mm at {:.4} m",
                j.max_deflection_mm, j.deflection_at_m
            );
            println!("max stress     {:.3} MPa at {:.4} m", j.max_stress_mpa, j.stress_at_m);
            if let Some(a) = j.allowable_acceleration_g {
                println!(
                    "allowable acceleration {a:.2} G ({:.1} MPa allowable)",
                    j.allowable_stress_mpa
                );
            }
            if let Some(out) = out {
                let manifest = loaded.manifest("struct static", None, json!({"g": g, "offset_mm": offset_mm}));
                write_outputs(
                    out,
                    &[("static.json", to_json(&j)), ("manifest.json", to_json(&manifest))],
                )?;
            }
            Ok(true)
        }
        StructCommand::Check {
            first_freq,
            stress_mpa,
            deflection_mm,
            offset_mm,
            material,
            out,
        } => {
            let loaded = optional_model(path)?;
            let req = loaded
                .as_ref()
                .map_or_else(Default::default, |l| l.model.requirements.clone());
            let mut checks = Vec::new();
            for c in min_frequency_check(
                &first_freq
                    .iter()
                    .map(|f| ("first_frequency".to_owned(), *f))
                    .collect::<Vec<_>>(),
                req.min_frequency_hz,
            )? {
                checks.push(CheckItem {
                    check: "first natural frequency".into(),
                    value: c.frequency,
                    limit: req.min_frequency_hz,
                    unit: "Hz".into(),
                    pass: c.pass,
                });
            }
            if let Some(d) = deflection_mm {
                let e = envelope_check(d * 1e-3, offset_mm * 1e-3, req.envelope_limit)?;
                checks.push(CheckItem {
                    check: "envelope".into(),
                    value: e.excursion * 1e3,
                    limit: e.limit * 1e3,
                    unit: "mm".into(),
                    pass: e.pass,
                });
            }
            if let Some(l) = &loaded {
                let m = chain_material(&l.model, material.as_deref())?;
                let factor = m.allowable_stress_factor.unwrap_or(req.allowable_stress_factor);
                let rail = rail_load_check(req.rail_load, req.rail_section_area, &m, factor)?;
                checks.push(CheckItem {
                    check: "rail compressive stress".into(),
                    value: rail.stress / 1e6,
                    limit: rail.allowable / 1e6,
                    unit: "MPa".into(),
                    pass: rail.pass,
                });
                if let Some(s) = stress_mpa {
                    let allowable = allowable_stress(&m, factor)?;
                    checks.push(CheckItem {
                        check: "bending stress".into(),
                        value: *s,
                        limit: allowable / 1e6,
                        unit: "MPa".into(),
                        pass: s * 1e6 <= allowable,
                    });
                }
            } else if stress_mpa.is_some() {
                return Err(Failure::input(
                    "a stress check needs --model for the material allowable",
                ));
            }
            if checks.is_empty() {
                return Err(Failure::input(
                    "nothing to check; give --first-freq, --deflection-mm or --model",
                ));
            }
            for c in &checks {
                println!(
                    "{:<26} {:>10.3} {:<3} limit {:>9.3}  {}",
                    c.check,
                    c.value,
                    c.unit,
                    c.limit,
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
            let report = CheckReport {
                pass: checks.iter().all(|c| c.pass),
                checks,
            };
            if let Some(out) = out {
                let manifest = manifest_with(
                    loaded.as_ref(),
                    "struct check",
                    json!({
                        "first_freq": first_freq,
                        "stress_mpa": stress_mpa,
                        "deflection_mm": deflection_mm,
                        "offset_mm": offset_mm,
                        "material": material,
                    }),
                );
                write_outputs(
                    out,
                    &[("check.json", to_json(&report)), ("manifest.json", to_json(&manifest))],
                )?;
            }
            Ok(report.pass)
        }
    }
}

enum RowStatus {
    Done(Box<crate::runs::ThermalOutcome>),
    Failed(Failure),
}

fn sweep(path: Option<&Path>, a: &SweepArgs) -> Outcome {
    let loaded = load(path)?;
    let model = &loaded.model;
    let mut requests = Vec::new();
    for case in &a.cases {
        model.scenarios.case(case)?;
        for surface in &a.surfaces {
            for mode in &a.modes {
                for power in &a.power {
                    requests.push(ThermalRequest {
                        case: case.clone(),
                        surface: Some(surface.clone()),
                        mode: (*mode).into(),
                        power: (*power).into(),
                        dt: a.dt,
                        eclipse: a.eclipse,
                    });
                }
            }
        }
    }
    io::ensure_dir(&a.out)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    let write_errors = Mutex::new(Vec::new());
    let results: Vec<RowStatus> = pool.install(|| {
        requests
            .par_iter()
            .map(|req| match run_thermal(model, req) {
                Ok(o) => {
                    let dir = a.out.join(req.label());
                    if let Err(e) = write_outputs(
                        &dir,
                        &[
                            ("history.csv", io::history_csv(&o.histories)),
                            ("summary.json", to_json(&o.summary)),
                        ],
                    ) {
                        write_errors.lock().unwrap_or_else(|p| p.into_inner()).push(e);
                    }
                    RowStatus::Done(Box::new(o))
                }
                Err(e) => RowStatus::Failed(e.into()),
            })
            .collect()
    });
    if let Some(e) = write_errors
        .into_inner()
        .unwrap_or_else(|p| p.into_inner())
        .into_iter()
        .next()
    {
        return Err(e);
    }

    let node_names: Vec<&str> = model.nodes.iter().map(|n| n.name.as_str()).collect();
    let mut csv = String::from("case,surface,mode,power,status");
    for n in &node_names {
        let _ = write!(csv, ",{n}_min_C,{n}_max_C");
    }
    csv.push_str(",pass\n");
    let (mut any_fail, mut numerical, mut input) = (false, false, None);
    for (req, status) in requests.iter().zip(&results) {
        let _ = write!(
            csv,
            "{},{},{},{}",
            req.case,
            req.surface.as_deref().unwrap_or("base"),
            req.mode.as_str(),
            req.power.as_str()
        );
        match status {
            RowStatus::Done(o) => {
                csv.push_str(",ok");
                for n in &o.summary.nodes {
                    let _ = write!(csv, ",{:.3},{:.3}", n.min_c, n.max_c);
                }
                let _ = writeln!(csv, ",{}", o.summary.pass);
                any_fail |= !o.summary.pass;
                println!(
                    "{:<28} ok{}",
                    req.label(),
                    if o.summary.pass { "" } else { "  (band violation)" }
                );
            }
            RowStatus::Failed(f) => {
                let tag = if f.code == EXIT_NUMERICAL {
                    "no_convergence"
                } else {
                    "error"
                };
                let _ = write!(csv, ",{tag}");
                for _ in &node_names {
                    csv.push_str(",,");
                }
                csv.push_str(",false\n");
                println!("{:<28} {tag}: {}", req.label(), f.message);
                if f.code == EXIT_NUMERICAL {
                    numerical = true;
                } else if input.is_none() {
                    input = Some(f.message.clone());
                }
            }
        }
    }
    let manifest = loaded.manifest(
        "sweep",
        None,
        json!({
            "cases": a.cases,
            "surfaces": a.surfaces,
            "modes": requests.iter().map(|r| r.mode.as_str()).collect::<std::collections::BTreeSet<_>>(),
            "power": requests.iter().map(|r| r.power.as_str()).collect::<std::collections::BTreeSet<_>>(),
            "eclipse": a.eclipse.as_str(),
            "dt_s": a.dt.unwrap_or(model.scenarios.sim.dt),
        }),
    );
    write_outputs(&a.out, &[("sweep.csv", csv), ("manifest.json", to_json(&manifest))])?;
    if let Some(m) = input {
        return Err(Failure::input(m));
    }
    if numerical {
        return Err(Failure {
            code: EXIT_NUMERICAL,
            message: "one or more scenarios did not converge".into(),
        });
    }
    Ok(!any_fail)
}
