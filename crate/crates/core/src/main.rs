use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use unruh_qfi::channel::{validate_physical, ChannelPreset, CorrelationDyadic};
use unruh_qfi::fisher::{bloch_teleported, fisher, DerivativeMethod, EstimandParam, NormalizationMode};
use unruh_qfi::linalg::Mat2;
use unruh_qfi::parse::{parse_angle, parse_complex, parse_grid};
use unruh_qfi::sweep::{
    emit, run_sweep, Axis, FigurePreset, FixedValues, OutputFormat, SweepSpec, SweepVar, UnruhWeights,
    DEFAULT_GRID,
};
use unruh_qfi::teleport::{teleport_analytic, InputState};
use unruh_qfi::unruh::{accelerate, r_from_acceleration, B7Form, ModePreset, UnruhParams};
use unruh_qfi::verify::{verify_with, VerifyOptions};
use unruh_qfi::{Error, Result};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Parser)]
#[command(name = "unruh-qfi", version, about = "Fisher information of a qubit teleported through an accelerated channel")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shared two-qubit state and, with --r, its accelerated form
    Channel {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        unruh: UnruhArgs,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Bob's state after Alice measures 00
    Teleport {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        unruh: UnruhArgs,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Fisher information at a single point
    Fisher {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        unruh: UnruhArgs,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        estimation: EstimationArgs,
    },
    /// Fisher information over a one- or two-dimensional grid
    Sweep {
        /// Load the sweep from a JSON spec (as emitted in the "spec" block)
        #[arg(long, conflicts_with = "axis")]
        spec: Option<PathBuf>,
        /// Swept axis as name=start:stop[:count], e.g. theta=0:pi:64 (outer axis first)
        #[arg(long)]
        axis: Vec<String>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        unruh: UnruhArgs,
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        estimation: EstimationArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Figure-panel datasets
    Figures {
        /// Panel id (1a, 1b, 2a, 2c, 3a, 3c, 4a-4d, 5a, 5c, 6a-6d) or "all"
        #[arg(long, default_value = "all")]
        id: String,
        /// Override the normalization (figure default: as-published)
        #[arg(long)]
        norm: Option<String>,
        #[arg(long)]
        method: Option<String>,
        /// Output file, or directory when --id all
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_GRID.to_string())]
        grid: String,
    },
    /// Run every oracle cross-check on seeded random draws
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Use the misprinted (01,10) coefficient everywhere (mutation test)
        #[arg(long, hide = true)]
        inject_b7_misprint: bool,
    },
}

#[derive(Args)]
struct ChannelArgs {
    /// bell-phi-plus, bell-psi-minus, werner or x-state
    #[arg(long, default_value = "bell-phi-plus")]
    preset: String,
    /// Werner parameter F in [0, 1]
    #[arg(long)]
    fidelity: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c11: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c22: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c33: Option<f64>,
}

#[derive(Args)]
struct UnruhArgs {
    /// wsma or bsma
    #[arg(long, default_value = "wsma")]
    mode: String,
    /// Explicit right-mode weight, e.g. 0.6+0.8i
    #[arg(long, requires = "ql", allow_hyphen_values = true)]
    qr: Option<String>,
    #[arg(long, requires = "qr", allow_hyphen_values = true)]
    ql: Option<String>,
    /// Rindler parameter in radians (decimal or e.g. pi/8)
    #[arg(long, conflicts_with_all = ["omega", "accel"])]
    r: Option<String>,
    /// Qubit angular frequency (rad/s)
    #[arg(long, requires = "accel")]
    omega: Option<f64>,
    /// Proper acceleration (m/s^2)
    #[arg(long, requires = "omega")]
    accel: Option<f64>,
    /// Speed of light (m/s)
    #[arg(long, requires = "omega")]
    c: Option<f64>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
}

#[derive(Args)]
struct EstimationArgs {
    /// theta, phi or r
    #[arg(long, default_value = "theta")]
    param: String,
    /// normalized or as-published
    #[arg(long, default_value = "normalized")]
    norm: String,
    /// analytic or fd
    #[arg(long, default_value = "analytic")]
    method: String,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Points per axis: N or NxM
    #[arg(long)]
    grid: Option<String>,
}

impl ChannelArgs {
    fn preset(&self) -> Result<ChannelPreset> {
        let preset = match self.preset.parse::<ChannelPreset>()? {
            ChannelPreset::Werner { f } => ChannelPreset::Werner {
                f: self.fidelity.unwrap_or(f),
            },
            ChannelPreset::XState { c11, c22, c33 } => ChannelPreset::XState {
                c11: self.c11.unwrap_or(c11),
                c22: self.c22.unwrap_or(c22),
                c33: self.c33.unwrap_or(c33),
            },
            named => {
                if self.c11.is_some() || self.c22.is_some() || self.c33.is_some() {
                    return Err(Error::Spec("--c11/--c22/--c33 apply to the x-state preset".into()));
                }
                named
            }
        };
        preset.dyadic()?;
        Ok(preset)
    }

    fn dyadic(&self) -> Result<CorrelationDyadic> {
        self.preset()?.dyadic()
    }

    /// The dyadic, rejected unless its density matrix is positive semidefinite.
    fn physical_dyadic(&self) -> Result<CorrelationDyadic> {
        let d = self.dyadic()?;
        let physicality = validate_physical(&d);
        if !physicality.physical {
            return Err(Error::UnphysicalChannel(physicality.min_eigenvalue));
        }
        Ok(d)
    }
}

impl UnruhArgs {
    fn weights(&self) -> Result<UnruhWeights> {
        match (&self.qr, &self.ql) {
            (Some(qr), Some(ql)) => Ok(UnruhWeights::Explicit {
                q_r: parse_complex(qr)?,
                q_l: parse_complex(ql)?,
            }),
            _ => Ok(UnruhWeights::Preset(self.mode.parse::<ModePreset>()?)),
        }
    }

    fn r(&self) -> Result<Option<f64>> {
        if let Some(text) = &self.r {
            return parse_angle(text).map(Some);
        }
        match (self.omega, self.accel) {
            (Some(omega), Some(accel)) => {
                r_from_acceleration(omega, accel, self.c.unwrap_or(SPEED_OF_LIGHT)).map(Some)
            }
            _ => Ok(None),
        }
    }

    fn params(&self) -> Result<UnruhParams> {
        let (q_r, q_l) = self.weights()?.weights();
        UnruhParams::new(self.r()?.unwrap_or(0.0), q_r, q_l)
    }
}

impl PointArgs {
    fn theta(&self) -> Result<Option<f64>> {
        self.theta.as_deref().map(parse_angle).transpose()
    }

    fn phi(&self) -> Result<Option<f64>> {
        self.phi.as_deref().map(parse_angle).transpose()
    }

    fn input(&self) -> Result<InputState> {
        InputState::new(self.theta()?.unwrap_or(0.0), self.phi()?.unwrap_or(0.0))
    }
}

#[derive(Clone, Copy, PartialEq)]
enum TextOrJson {
    Text,
    Json,
}

fn text_or_json(format: &str) -> Result<TextOrJson> {
    match format {
        "text" => Ok(TextOrJson::Text),
        "json" => Ok(TextOrJson::Json),
        _ => Err(Error::Spec(format!("format {format:?} must be text or json"))),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> Value {
    Value::Array(
        (0..N)
            .map(|i| Value::Array((0..N).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

fn matrix_text<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> String {
    let mut out = String::new();
    for i in 0..N {
        out.push_str("   ");
        for j in 0..N {
            let z = m[(i, j)];
            out.push_str(&format!(" {:>+.6}{:+.6}i", z.re, z.im));
        }
        out.push('\n');
    }
    out
}

fn print_json(out: &mut String, value: &Value) -> Result<()> {
    out.push_str(&serde_json::to_string_pretty(value)?);
    out.push('\n');
    Ok(())
}

fn cmd_channel(out: &mut String, channel: &ChannelArgs, unruh: &UnruhArgs, format: &str) -> Result<()> {
    let format = text_or_json(format)?;
    let preset = channel.preset()?;
    let d = preset.dyadic()?;
    let physicality = validate_physical(&d);
    let accelerated = match unruh.r()? {
        Some(_) => Some(accelerate(&d, &unruh.params()?)),
        None => None,
    };
    match format {
        TextOrJson::Json => {
            let mut value = json!({
                "preset": preset,
                "dyadic": d,
                "physical": physicality.physical,
                "min_eigenvalue": physicality.min_eigenvalue,
                "density": matrix_json(&d.density()),
            });
            if let Some(ch) = accelerated {
                let params = unruh.params()?;
                value["unruh"] = json!({
                    "r": params.r(),
                    "q_r": complex_json(params.q_r()),
                    "q_l": complex_json(params.q_l()),
                });
                value["coefficients"] = serde_json::to_value(ch)?;
                value["accelerated_density"] = matrix_json(&ch.density());
            }
            print_json(out, &value)
        }
        TextOrJson::Text => {
            let _ = writeln!(out, "preset          {preset}");
            let _ = writeln!(out, "dyadic          c11={} c22={} c33={}", d.c11, d.c22, d.c33);
            let _ = writeln!(out, 
                "physical        {} (min eigenvalue {:.6e})",
                physicality.physical, physicality.min_eigenvalue
            );
            let _ = write!(out, "density\n{}", matrix_text(&d.density()));
            if let Some(ch) = accelerated {
                let params = unruh.params()?;
                let _ = writeln!(out, "r               {}", params.r());
                for (k, b) in ch.coefficients().iter().enumerate() {
                    let _ = writeln!(out, "B{}              {:+.12}{:+.12}i", k + 1, b.re, b.im);
                }
                let _ = write!(out, "accelerated density\n{}", matrix_text(&ch.density()));
            }
            Ok(())
        }
    }
}

fn cmd_teleport(
    out: &mut String,
    channel: &ChannelArgs,
    unruh: &UnruhArgs,
    point: &PointArgs,
    format: &str,
) -> Result<()> {
    let format = text_or_json(format)?;
    let input = point.input()?;
    let params = unruh.params()?;
    let bob = teleport_analytic(&input, &accelerate(&channel.physical_dyadic()?, &params))?;
    let s = bob.bloch();
    match format {
        TextOrJson::Json => print_json(out, &json!({
            "theta": input.theta(),
            "phi": input.phi(),
            "r": params.r(),
            "rho": matrix_json(&bob.rho),
            "rho_normalized": matrix_json(&bob.rho_normalized),
            "outcome_prob": bob.outcome_prob,
            "bloch": s,
            "fidelity": bob.fidelity_with(&input),
        })),
        TextOrJson::Text => {
            let mut show = |name: &str, m: &Mat2| write!(out, "{name}\n{}", matrix_text(m));
            let _ = show("rho", &bob.rho);
            let _ = show("rho_normalized", &bob.rho_normalized);
            let _ = writeln!(out, "outcome_prob    {:.15}", bob.outcome_prob);
            let _ = writeln!(out, "bloch           ({:+.12}, {:+.12}, {:+.12})", s.x, s.y, s.z);
            let _ = writeln!(out, "fidelity        {:.12}", bob.fidelity_with(&input));
            Ok(())
        }
    }
}

fn cmd_fisher(
    out: &mut String,
    channel: &ChannelArgs,
    unruh: &UnruhArgs,
    point: &PointArgs,
    est: &EstimationArgs,
) -> Result<()> {
    let input = point.input()?;
    let params = unruh.params()?;
    let d = channel.physical_dyadic()?;
    let mode: NormalizationMode = est.norm.parse()?;
    let result = fisher(&input, &d, &params, mode, est.param.parse()?, est.method.parse()?)?;
    let mut value = serde_json::to_value(result)?;
    value["point"] = json!({ "theta": input.theta(), "phi": input.phi(), "r": params.r() });
    value["bloch"] = serde_json::to_value(bloch_teleported(&input, &d, &params, mode)?)?;
    print_json(out, &value)
}

fn parse_axis(text: &str, default_count: usize) -> Result<Axis> {
    let bad = || Error::Spec(format!("axis {text:?} must look like name=start:stop[:count]"));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let count = match parts.get(2) {
        Some(n) => n.trim().parse().map_err(|_| bad())?,
        None => default_count,
    };
    Ok(Axis {
        name: name.trim().parse()?,
        start: parse_angle(parts[0])?,
        stop: parse_angle(parts[1])?,
        count,
    })
}

fn load_spec(path: &Path) -> Result<SweepSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text)?;
    let spec = match value.get("spec") {
        Some(inner) => inner.clone(),
        None => value,
    };
    Ok(serde_json::from_value(spec)?)
}

fn build_sweep_spec(
    axes: &[String],
    channel: &ChannelArgs,
    unruh: &UnruhArgs,
    point: &PointArgs,
    est: &EstimationArgs,
    grid: &[usize],
) -> Result<SweepSpec> {
    let axes = axes
        .iter()
        .enumerate()
        .map(|(k, text)| parse_axis(text, grid.get(k).or(grid.first()).copied().unwrap_or(DEFAULT_GRID)))
        .collect::<Result<Vec<_>>>()?;
    let mut fixed = FixedValues::default();
    for (var, value) in [
        (SweepVar::Theta, point.theta()?),
        (SweepVar::Phi, point.phi()?),
        (SweepVar::R, unruh.r()?),
    ] {
        if let Some(v) = value {
            fixed.set(var, v);
        }
    }
    Ok(SweepSpec {
        estimand: est.param.parse::<EstimandParam>()?,
        mode: est.norm.parse()?,
        method: est.method.parse()?,
        channel: channel.preset()?,
        unruh_mode: unruh.weights()?,
        axes,
        fixed,
    })
}

fn cmd_verify(out: &mut String, trials: usize, seed: u64, inject: bool) -> Result<bool> {
    let options = VerifyOptions {
        b7: if inject { B7Form::Misprinted } else { B7Form::Hermitian },
    };
    let report = verify_with(trials, seed, options)?;
    out.push_str(&report.render());
    Ok(report.passed())
}

fn cmd_figures(
    id: &str,
    norm: Option<&str>,
    method: Option<&str>,
    out: Option<&Path>,
    format: &str,
    grid: &str,
) -> Result<()> {
    let format: OutputFormat = format.parse()?;
    let grid = parse_grid(grid)?;
    let presets: Vec<FigurePreset> = if id == "all" {
        FigurePreset::ALL.to_vec()
    } else {
        vec![id.parse()?]
    };
    let extension = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    if presets.len() > 1 {
        if let Some(dir) = out {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
    }
    for preset in presets {
        let mut spec = preset.spec(&grid);
        if let Some(norm) = norm {
            spec.mode = norm.parse()?;
        }
        if let Some(method) = method {
            spec.method = method.parse::<DerivativeMethod>()?;
        }
        let rows = run_sweep(&spec)?;
        let destination = match out {
            Some(dir) if id == "all" => Some(dir.join(format!("fig{}.{extension}", preset.id()))),
            other => other.map(Path::to_path_buf),
        };
        emit(&spec, &rows, format, destination.as_deref())?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut String) -> Result<ExitCode> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Spec(format!("cannot configure {threads} threads: {e}")))?;
    }
    match &cli.command {
        Command::Channel { channel, unruh, format } => cmd_channel(out, channel, unruh, format)?,
        Command::Teleport { channel, unruh, point, format } => {
            cmd_teleport(out, channel, unruh, point, format)?
        }
        Command::Fisher { channel, unruh, point, estimation } => {
            cmd_fisher(out, channel, unruh, point, estimation)?
        }
        Command::Sweep { spec, axis, channel, unruh, point, estimation, output } => {
            let grid = output.grid.as_deref().map(parse_grid).transpose()?.unwrap_or_default();
            let spec = match spec {
                Some(path) => load_spec(path)?,
                None => build_sweep_spec(axis, channel, unruh, point, estimation, &grid)?,
            };
            let rows = run_sweep(&spec)?;
            emit(&spec, &rows, output.format.parse()?, output.out.as_deref())?;
        }
        Command::Figures { id, norm, method, out, format, grid } => {
            cmd_figures(id, norm.as_deref(), method.as_deref(), out.as_deref(), format, grid)?
        }
        Command::Verify { trials, seed, inject_b7_misprint } => {
            if !cmd_verify(out, *trials, *seed, *inject_b7_misprint)? {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    if let Err(err) = std::io::stdout().lock().write_all(out.as_bytes()) {
        if err.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: <stdout>: {err}");
            return ExitCode::from(3);
        }
    }
    match result {
        Ok(code) => code,
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
