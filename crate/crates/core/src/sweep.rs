//! Parameter-grid sweeps of the Fisher information and their CSV/JSON datasets.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::channel::{validate_physical, ChannelPreset, CorrelationDyadic};
use crate::error::{Error, Result};
use crate::fisher::{fisher, DerivativeMethod, EstimandParam, NormalizationMode};
use crate::teleport::InputState;
use crate::unruh::{accelerate, AcceleratedChannel, ModePreset, UnruhParams};

pub const DEFAULT_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    Theta,
    Phi,
    R,
}

impl SweepVar {
    pub const ALL: [SweepVar; 3] = [SweepVar::Theta, SweepVar::Phi, SweepVar::R];

    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Theta => "theta",
            SweepVar::Phi => "phi",
            SweepVar::R => "r",
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            SweepVar::Theta => (0.0, PI),
            SweepVar::Phi => (0.0, TAU),
            SweepVar::R => (0.0, FRAC_PI_4),
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(SweepVar::Theta),
            "phi" => Ok(SweepVar::Phi),
            "r" => Ok(SweepVar::R),
            _ => Err(Error::parse("sweep variable", s)),
        }
    }
}

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn full(name: SweepVar, count: usize) -> Self {
        let (start, stop) = name.domain();
        Axis { name, start, stop, count }
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + i as f64 * (self.stop - self.start) / (self.count - 1) as f64
    }
}

/// Mode weights of Bob's excitation: a named preset or explicit (qR, qL).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnruhWeights {
    Preset(ModePreset),
    Explicit { q_r: Complex64, q_l: Complex64 },
}

impl UnruhWeights {
    pub fn weights(self) -> (Complex64, Complex64) {
        match self {
            UnruhWeights::Preset(mode) => mode.weights(),
            UnruhWeights::Explicit { q_r, q_l } => (q_r, q_l),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FixedValues {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

impl FixedValues {
    pub fn get(&self, var: SweepVar) -> Option<f64> {
        match var {
            SweepVar::Theta => self.theta,
            SweepVar::Phi => self.phi,
            SweepVar::R => self.r,
        }
    }

    pub fn set(&mut self, var: SweepVar, value: f64) {
        let slot = match var {
            SweepVar::Theta => &mut self.theta,
            SweepVar::Phi => &mut self.phi,
            SweepVar::R => &mut self.r,
        };
        *slot = Some(value);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub estimand: EstimandParam,
    #[serde(default)]
    pub mode: NormalizationMode,
    #[serde(default)]
    pub method: DerivativeMethod,
    pub channel: ChannelPreset,
    pub unruh_mode: UnruhWeights,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: FixedValues,
}

/// Channel data a spec resolves to, recorded alongside emitted datasets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedChannel {
    pub dyadic: CorrelationDyadic,
    pub min_eigenvalue: f64,
    /// (A1, A2, A3, A4): populations and coherences of the unaccelerated state.
    pub x_weights: [f64; 4],
    pub q_r: Complex64,
    pub q_l: Complex64,
    /// Accelerated coefficients B1..B8, present when r is held fixed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<AcceleratedChannel>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Spec(format!("{} axes given, expected 1 or 2", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::Spec(format!("axis {} given twice", self.axes[0].name)));
        }
        for axis in &self.axes {
            if axis.count < 2 {
                return Err(Error::Spec(format!("axis {} needs at least 2 points", axis.name)));
            }
            let (lo, hi) = axis.name.domain();
            for v in [axis.start, axis.stop] {
                if !(lo..=hi).contains(&v) {
                    return Err(Error::Spec(format!(
                        "axis {} endpoint {v} is outside [{lo}, {hi}]",
                        axis.name
                    )));
                }
            }
        }
        for var in SweepVar::ALL {
            let swept = self.axes.iter().any(|a| a.name == var);
            match (swept, self.fixed.get(var)) {
                (true, Some(_)) => {
                    return Err(Error::Spec(format!("{var} is both swept and fixed")));
                }
                (false, None) => return Err(Error::Spec(format!("{var} is neither swept nor fixed"))),
                (false, Some(v)) => {
                    let (lo, hi) = var.domain();
                    if !(lo..=hi).contains(&v) {
                        return Err(Error::Spec(format!("fixed {var} = {v} is outside [{lo}, {hi}]")));
                    }
                }
                (true, None) => {}
            }
        }
        Ok(())
    }

    pub fn resolve(&self) -> Result<ResolvedChannel> {
        let dyadic = self.channel.dyadic()?;
        let physicality = validate_physical(&dyadic);
        if !physicality.physical {
            return Err(Error::UnphysicalChannel(physicality.min_eigenvalue));
        }
        let (q_r, q_l) = self.unruh_mode.weights();
        let coefficients = match self.fixed.r {
            Some(r) => Some(accelerate(&dyadic, &UnruhParams::new(r, q_r, q_l)?)),
            None => {
                UnruhParams::new(0.0, q_r, q_l)?;
                None
            }
        };
        Ok(ResolvedChannel {
            dyadic,
            min_eigenvalue: physicality.min_eigenvalue,
            x_weights: dyadic.x_weights(),
            q_r,
            q_l,
            coefficients,
        })
    }

    pub fn row_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// Coordinates of grid point `index`, outer axis first.
    pub fn coordinates(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        let mut coords = vec![0.0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            coords[k] = axis.point(rest % axis.count);
            rest /= axis.count;
        }
        coords
    }

    pub fn column_names(&self) -> Vec<&'static str> {
        self.axes.iter().map(|a| a.name.name()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub fisher: f64,
    pub pure_branch: bool,
}

/// Evaluates the Fisher information over the whole grid. Rows are in
/// lexicographic axis order whatever the size of the rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let resolved = spec.resolve()?;
    (0..spec.row_count())
        .into_par_iter()
        .map(|index| {
            let coords = spec.coordinates(index);
            let mut values = spec.fixed;
            for (axis, &v) in spec.axes.iter().zip(&coords) {
                values.set(axis.name, v);
            }
            let (theta, phi, r) = (
                values.theta.unwrap_or_default(),
                values.phi.unwrap_or_default(),
                values.r.unwrap_or_default(),
            );
            let input = InputState::new(theta, phi)?;
            let unruh = UnruhParams::new(r, resolved.q_r, resolved.q_l)?;
            let f = fisher(&input, &resolved.dyadic, &unruh, spec.mode, spec.estimand, spec.method)?;
            Ok(SweepRow {
                coords,
                fisher: f.value,
                pure_branch: f.pure_branch_taken,
            })
        })
        .collect()
}

/// Runs the sweep on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Spec(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_sweep(spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::parse("output format", s)),
        }
    }
}

/// Round-trippable float text: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(spec: &SweepSpec, rows: &[SweepRow], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header: Vec<&str> = spec.column_names();
    header.extend(["fisher", "pure_branch"]);
    writer.write_record(&header)?;
    for row in rows {
        let mut record: Vec<String> = row.coords.iter().map(|&v| format_float(v)).collect();
        record.push(format_float(row.fisher));
        record.push(row.pure_branch.to_string());
        writer.write_record(&record)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

struct RowsJson<'a> {
    names: Vec<&'static str>,
    rows: &'a [SweepRow],
}

struct RowJson<'a> {
    names: &'a [&'static str],
    row: &'a SweepRow,
}

impl Serialize for RowJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.names.len() + 2))?;
        for (name, v) in self.names.iter().zip(&self.row.coords) {
            map.serialize_entry(name, v)?;
        }
        map.serialize_entry("fisher", &self.row.fisher)?;
        map.serialize_entry("pure_branch", &self.row.pure_branch)?;
        map.end()
    }
}

impl Serialize for RowsJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows.iter().map(|row| RowJson {
            names: &self.names,
            row,
        }))
    }
}

#[derive(Serialize)]
struct EmittedSpec<'a> {
    #[serde(flatten)]
    spec: &'a SweepSpec,
    resolved: ResolvedChannel,
}

#[derive(Serialize)]
struct DatasetJson<'a> {
    spec: EmittedSpec<'a>,
    rows: RowsJson<'a>,
}

pub fn write_json<W: Write>(spec: &SweepSpec, rows: &[SweepRow], mut out: W) -> Result<()> {
    let dataset = DatasetJson {
        spec: EmittedSpec {
            spec,
            resolved: spec.resolve()?,
        },
        rows: RowsJson {
            names: spec.column_names(),
            rows,
        },
    };
    serde_json::to_writer_pretty(&mut out, &dataset)?;
    writeln!(out).map_err(serde_json::Error::io)?;
    Ok(())
}

/// Writes the dataset to `destination`, or to stdout when it is `None`.
pub fn emit(
    spec: &SweepSpec,
    rows: &[SweepRow],
    format: OutputFormat,
    destination: Option<&Path>,
) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Spec("nothing to emit: no rows".into()));
    }
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    match destination {
        Some(path) => {
            let file = File::create(path).map_err(io_err(path))?;
            let mut out = BufWriter::new(file);
            write_dataset(spec, rows, format, &mut out).map_err(|e| relabel_io(e, path))?;
            out.flush().map_err(io_err(path))
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            write_dataset(spec, rows, format, &mut out).map_err(|e| relabel_io(e, Path::new("<stdout>")))?;
            out.flush().map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn write_dataset<W: Write>(spec: &SweepSpec, rows: &[SweepRow], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(spec, rows, out),
        OutputFormat::Json => write_json(spec, rows, out),
    }
}

fn relabel_io(err: Error, path: &Path) -> Error {
    let source = match &err {
        Error::Csv(e) => match e.kind() {
            csv::ErrorKind::Io(io) => std::io::Error::new(io.kind(), io.to_string()),
            _ => return err,
        },
        Error::Json(e) if e.is_io() => match e.io_error_kind() {
            Some(kind) => std::io::Error::new(kind, e.to_string()),
            None => std::io::Error::other(e.to_string()),
        },
        _ => return err,
    };
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses CSV produced by [`write_csv`] back into column names and rows.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<SweepRow>)> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.len() < 3 || header[header.len() - 2..] != ["fisher", "pure_branch"] {
        return Err(Error::parse("sweep csv header", &header.join(",")));
    }
    let n_axes = header.len() - 2;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let float = |i: usize| {
            record[i]
                .parse::<f64>()
                .map_err(|_| Error::parse("float", &record[i]))
        };
        rows.push(SweepRow {
            coords: (0..n_axes).map(float).collect::<Result<_>>()?,
            fisher: float(n_axes)?,
            pure_branch: record[n_axes + 1]
                .parse()
                .map_err(|_| Error::parse("bool", &record[n_axes + 1]))?,
        });
    }
    Ok((header[..n_axes].to_vec(), rows))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// Parses JSON produced by [`write_json`]. The `resolved` block is ignored.
pub fn read_json<R: Read>(input: R) -> Result<Dataset> {
    #[derive(Deserialize)]
    struct Raw {
        spec: SweepSpec,
        rows: Vec<serde_json::Map<String, serde_json::Value>>,
    }
    let raw: Raw = serde_json::from_reader(input)?;
    let names = raw.spec.column_names();
    let bad_row = || Error::parse("sweep json row", "rows");
    let rows = raw
        .rows
        .iter()
        .map(|obj| {
            let coords = names
                .iter()
                .map(|n| obj.get(*n).and_then(|v| v.as_f64()).ok_or_else(bad_row))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepRow {
                coords,
                fisher: obj.get("fisher").and_then(|v| v.as_f64()).ok_or_else(bad_row)?,
                pure_branch: obj
                    .get("pure_branch")
                    .and_then(|v| v.as_bool())
                    .ok_or_else(bad_row)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Dataset { spec: raw.spec, rows })
}

/// Figure-panel datasets. Contour panels that
/// re-render a sibling's data have no preset of their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigurePreset {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2c,
    Fig3a,
    Fig3c,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig5a,
    Fig5c,
    Fig6a,
    Fig6b,
    Fig6c,
    Fig6d,
}

impl FigurePreset {
    pub const ALL: [FigurePreset; 16] = [
        FigurePreset::Fig1a,
        FigurePreset::Fig1b,
        FigurePreset::Fig2a,
        FigurePreset::Fig2c,
        FigurePreset::Fig3a,
        FigurePreset::Fig3c,
        FigurePreset::Fig4a,
        FigurePreset::Fig4b,
        FigurePreset::Fig4c,
        FigurePreset::Fig4d,
        FigurePreset::Fig5a,
        FigurePreset::Fig5c,
        FigurePreset::Fig6a,
        FigurePreset::Fig6b,
        FigurePreset::Fig6c,
        FigurePreset::Fig6d,
    ];

    pub fn id(self) -> &'static str {
        use FigurePreset::*;
        match self {
            Fig1a => "1a",
            Fig1b => "1b",
            Fig2a => "2a",
            Fig2c => "2c",
            Fig3a => "3a",
            Fig3c => "3c",
            Fig4a => "4a",
            Fig4b => "4b",
            Fig4c => "4c",
            Fig4d => "4d",
            Fig5a => "5a",
            Fig5c => "5c",
            Fig6a => "6a",
            Fig6b => "6b",
            Fig6c => "6c",
            Fig6d => "6d",
        }
    }

    /// Expands the preset. `grid` holds one count for both axes or one per axis.
    pub fn spec(self, grid: &[usize]) -> SweepSpec {
        use FigurePreset::*;
        use ModePreset::{Bsma, Wsma};
        use SweepVar::{Phi, Theta, R};

        let (estimand, channel, mode, (outer, inner), (fixed_var, fixed_value)) = match self {
            Fig1a => (EstimandParam::Theta, ChannelPreset::BellPhiPlus, Wsma, (Theta, R), (Phi, FRAC_PI_4)),
            Fig1b => (EstimandParam::Theta, ChannelPreset::BellPhiPlus, Bsma, (Theta, R), (Phi, FRAC_PI_4)),
            Fig2a => (EstimandParam::Theta, ChannelPreset::BellPhiPlus, Wsma, (Theta, Phi), (R, FRAC_PI_8)),
            Fig2c => (EstimandParam::Theta, ChannelPreset::BellPhiPlus, Bsma, (Theta, Phi), (R, FRAC_PI_8)),
            Fig3a => (EstimandParam::Theta, ChannelPreset::BellPsiMinus, Bsma, (Theta, Phi), (R, FRAC_PI_8)),
            Fig3c => (EstimandParam::Theta, ChannelPreset::FIGURE_X_STATE, Wsma, (Theta, Phi), (R, FRAC_PI_8)),
            Fig4a => (EstimandParam::Phi, ChannelPreset::BellPhiPlus, Wsma, (Phi, R), (Theta, FRAC_PI_4)),
            Fig4b => (EstimandParam::Phi, ChannelPreset::BellPhiPlus, Bsma, (Phi, R), (Theta, FRAC_PI_4)),
            Fig4c => (EstimandParam::Phi, ChannelPreset::BellPhiPlus, Wsma, (Phi, Theta), (R, FRAC_PI_8)),
            Fig4d => (EstimandParam::Phi, ChannelPreset::BellPhiPlus, Bsma, (Phi, Theta), (R, FRAC_PI_8)),
            Fig5a => (EstimandParam::Phi, ChannelPreset::BellPsiMinus, Bsma, (Theta, Phi), (R, FRAC_PI_8)),
            Fig5c => (EstimandParam::Phi, ChannelPreset::FIGURE_X_STATE, Wsma, (Theta, Phi), (R, FRAC_PI_8)),
            Fig6a => (EstimandParam::UnruhR, ChannelPreset::BellPhiPlus, Wsma, (Theta, R), (Phi, FRAC_PI_4)),
            Fig6b => (EstimandParam::UnruhR, ChannelPreset::BellPhiPlus, Bsma, (Theta, R), (Phi, FRAC_PI_4)),
            Fig6c => (EstimandParam::UnruhR, ChannelPreset::BellPhiPlus, Wsma, (Phi, R), (Theta, FRAC_PI_4)),
            Fig6d => (EstimandParam::UnruhR, ChannelPreset::BellPhiPlus, Bsma, (Phi, R), (Theta, FRAC_PI_4)),
        };
        let outer_count = grid.first().copied().unwrap_or(DEFAULT_GRID);
        let inner_count = grid.get(1).copied().unwrap_or(outer_count);
        let mut fixed = FixedValues::default();
        fixed.set(fixed_var, fixed_value);
        SweepSpec {
            estimand,
            mode: NormalizationMode::AsPublished,
            method: DerivativeMethod::Analytic,
            channel,
            unruh_mode: UnruhWeights::Preset(mode),
            axes: vec![Axis::full(outer, outer_count), Axis::full(inner, inner_count)],
            fixed,
        }
    }
}

impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigurePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim_start_matches("fig");
        FigurePreset::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::parse("figure preset", s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anchor_spec() -> SweepSpec {
        let mut fixed = FixedValues::default();
        fixed.set(SweepVar::Phi, FRAC_PI_4);
        SweepSpec {
            estimand: EstimandParam::Theta,
            mode: NormalizationMode::Normalized,
            method: DerivativeMethod::Analytic,
            channel: ChannelPreset::BellPhiPlus,
            unruh_mode: UnruhWeights::Preset(ModePreset::Wsma),
            axes: vec![Axis::full(SweepVar::Theta, 5), Axis::full(SweepVar::R, 5)],
            fixed,
        }
    }

    #[test]
    fn closed_form_sweep() {
        let spec = anchor_spec();
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 25);
        for row in &rows {
            let r = row.coords[1];
            assert!((row.fisher - r.cos().powi(2)).abs() < 1e-9, "{row:?}");
        }
        // outer axis first
        assert_eq!(rows[0].coords, vec![0.0, 0.0]);
        assert_eq!(rows[1].coords, vec![0.0, FRAC_PI_8 / 2.0]);
        assert_eq!(rows[5].coords[0], PI / 4.0);
    }

    #[test]
    fn grid_endpoints_are_verbatim() {
        let axis = Axis { name: SweepVar::Theta, start: 0.1, stop: 0.3, count: 7 };
        assert_eq!(axis.point(0), 0.1);
        assert_eq!(axis.point(6), 0.3);
        let axis = Axis { name: SweepVar::R, start: 0.0, stop: FRAC_PI_4, count: 2 };
        assert_eq!((axis.point(0), axis.point(1)), (0.0, FRAC_PI_4));
    }

    #[test]
    fn two_point_single_axis() {
        let mut spec = anchor_spec();
        spec.axes = vec![Axis::full(SweepVar::Theta, 2)];
        spec.fixed.set(SweepVar::R, 0.2);
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].coords, vec![0.0]);
        assert_eq!(rows[1].coords, vec![PI]);
    }

    #[test]
    fn spec_validation() {
        let mut spec = anchor_spec();
        spec.fixed.set(SweepVar::R, 0.1);
        assert!(matches!(spec.validate(), Err(Error::Spec(_))));

        let mut spec = anchor_spec();
        spec.fixed = FixedValues::default();
        assert!(spec.validate().is_err());

        let mut spec = anchor_spec();
        spec.axes[1].stop = 1.0;
        assert!(spec.validate().is_err());

        let mut spec = anchor_spec();
        spec.axes[0].count = 1;
        assert!(spec.validate().is_err());

        let mut spec = anchor_spec();
        spec.axes[1].name = SweepVar::Theta;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn unphysical_channel_rejected_before_evaluation() {
        let mut spec = anchor_spec();
        spec.channel = ChannelPreset::XState { c11: 1.0, c22: 1.0, c33: 1.0 };
        assert!(matches!(run_sweep(&spec), Err(Error::UnphysicalChannel(_))));
    }

    #[test]
    fn figure_table_expansion() {
        let spec = FigurePreset::Fig1a.spec(&[64]);
        assert_eq!(spec.fixed.phi, Some(FRAC_PI_4));
        assert_eq!(spec.estimand, EstimandParam::Theta);
        assert_eq!(spec.mode, NormalizationMode::AsPublished);
        assert_eq!(spec.column_names(), vec!["theta", "r"]);

        let spec = FigurePreset::Fig2c.spec(&[64]);
        assert_eq!(spec.fixed.r, Some(FRAC_PI_8));
        assert_eq!(spec.unruh_mode, UnruhWeights::Preset(ModePreset::Bsma));

        let spec = FigurePreset::Fig3c.spec(&[64]);
        assert_eq!(spec.channel, ChannelPreset::XState { c11: -0.9, c22: -0.8, c33: -0.7 });
        assert_eq!(spec.unruh_mode, UnruhWeights::Preset(ModePreset::Wsma));

        let spec = FigurePreset::Fig4c.spec(&[64]);
        assert_eq!(spec.column_names(), vec!["phi", "theta"]);
        assert_eq!(spec.estimand, EstimandParam::Phi);

        let spec = FigurePreset::Fig5a.spec(&[64]);
        assert_eq!(spec.channel, ChannelPreset::BellPsiMinus);

        let spec = FigurePreset::Fig6d.spec(&[8, 4]);
        assert_eq!(spec.fixed.theta, Some(FRAC_PI_4));
        assert_eq!(spec.estimand, EstimandParam::UnruhR);
        assert_eq!(spec.row_count(), 32);

        for preset in FigurePreset::ALL {
            preset.spec(&[4]).validate().unwrap();
            assert_eq!(preset.id().parse::<FigurePreset>().unwrap(), preset);
        }
    }

    #[test]
    fn csv_shape() {
        let mut spec = anchor_spec();
        spec.axes = vec![Axis::full(SweepVar::Theta, 2)];
        spec.fixed.set(SweepVar::R, 0.2);
        let rows = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&spec, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
        assert!(text.starts_with("theta,fisher,pure_branch\n"));
    }

    #[test]
    fn json_carries_resolved_channel() {
        let spec = FigurePreset::Fig3c.spec(&[3]);
        let rows = run_sweep(&spec).unwrap();
        let mut buf = Vec::new();
        write_json(&spec, &rows, &mut buf).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let resolved = &value["spec"]["resolved"];
        assert_eq!(resolved["dyadic"]["c11"], -0.9);
        assert!(resolved["coefficients"]["b1"].is_array());
        assert_eq!(value["spec"]["mode"], "as-published");
        assert_eq!(value["rows"].as_array().unwrap().len(), 9);
        assert!(buf.ends_with(b"}\n"));
    }

    #[test]
    fn empty_rows_are_not_emitted() {
        assert!(emit(&anchor_spec(), &[], OutputFormat::Csv, None).is_err());
    }

    #[test]
    fn unwritable_destination_reports_path() {
        let spec = anchor_spec();
        let rows = run_sweep(&spec).unwrap();
        let path = Path::new("/nonexistent-dir/out.csv");
        match emit(&spec, &rows, OutputFormat::Csv, Some(path)) {
            Err(Error::Io { path: p, .. }) => assert_eq!(p, path),
            other => panic!("expected I/O error, got {other:?}"),
        }
    }
}
