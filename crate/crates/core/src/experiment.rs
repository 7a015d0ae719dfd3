//! Seeded Monte Carlo experiments over `G(n, p)`.
//!
//! Every cell `(n, p)` draws `samples` connected graphs. Sample `s` of the
//! cell at `n` and probability index `k` uses the graph seed
//! [`sample_seed`]`(master_seed, n, k, s, attempt)`, where `attempt` counts
//! disconnected draws rejected so far for that sample. Samples run in
//! parallel but are aggregated in index order, so reports do not depend on
//! the thread count.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, MatrixError};
use crate::graph::{gen_erdos_renyi, Graph};
use crate::matrix::{center_scale_a1, split_weight_matrix, weight_matrix, GraphSummary};
use crate::spectral::{
    energy, esd, ks_distance, spectral_moment, sym_eigenvalues, sym_eigenvalues_scaled, Histogram,
};
use crate::theory::{catalan_moment, predict_energy, semicircle_cdf, semicircle_pdf, Prediction};
use crate::weights::WeightFn;

/// Histogram resolution for the esd mode.
pub const HISTOGRAM_BINS: usize = 80;
/// Histogram range in units of `sigma`.
pub const HISTOGRAM_HALF_WIDTH: f64 = 2.5;
/// Points on the semicircle overlay in SVG output.
pub const SVG_CURVE_POINTS: usize = 200;
/// Consecutive disconnected draws allowed per accepted sample, as a
/// multiple of the sample count.
pub const REJECTION_FACTOR: usize = 10;
/// Slack constant in the `A2` energy envelope
/// `2 (n - 1) |f2| + A2_SLACK |f2| n^{3/2}`.
pub const A2_SLACK: f64 = 0.2;
/// Largest moment order in the moments mode.
pub const MAX_K: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Energy,
    Esd,
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(format!(
                "unknown format `{other}` (expected csv, json or svg)"
            )),
        }
    }
}

fn default_samples() -> usize {
    10
}

fn default_k_max() -> u32 {
    8
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Builtin name or `expr:<source>`.
    pub weight: String,
    pub n_list: Vec<usize>,
    pub p_list: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub master_seed: u64,
    pub mode: Mode,
    /// Highest moment order (moments mode).
    #[serde(default = "default_k_max")]
    pub k_max: u32,
    /// Also solve `A2` in energy mode to check its envelope.
    #[serde(default = "default_true")]
    pub measure_a2: bool,
    /// Record wall-clock time per cell. Off by default because it makes
    /// otherwise identical reports differ.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<ReportFormat>,
}

impl ExperimentConfig {
    pub fn new(weight: impl Into<String>, mode: Mode) -> Self {
        Self {
            weight: weight.into(),
            n_list: vec![200],
            p_list: vec![0.5],
            samples: default_samples(),
            master_seed: 0,
            mode,
            k_max: default_k_max(),
            measure_a2: true,
            timing: false,
            output: None,
            format: None,
        }
    }

    pub fn validate(&self) -> Result<WeightFn, ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.n_list.is_empty() {
            return bad("n list is empty".into());
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n list must be strictly ascending".into());
        }
        if self.n_list[0] < 2 {
            return bad("every n must be at least 2".into());
        }
        if self.p_list.is_empty() {
            return bad("p list is empty".into());
        }
        if let Some(p) = self.p_list.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return bad(format!("p = {p} is outside (0, 1)"));
        }
        if self.mode == Mode::Moments
            && (self.k_max < 2 || self.k_max > MAX_K || !self.k_max.is_multiple_of(2))
        {
            return bad(format!(
                "k_max = {} must be even and in [2, {MAX_K}]",
                self.k_max
            ));
        }
        Ok(WeightFn::from_spec(&self.weight)?)
    }
}

/// Mean, variance and reference value of one spectral moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentStat {
    pub k: u32,
    pub mean: f64,
    /// Unbiased sample variance; absent for a single sample.
    pub variance: Option<f64>,
    /// `C_{k/2} sigma^k` for even `k`, zero for odd `k`.
    pub theory: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub weight: String,
    pub mode: Mode,
    pub n: usize,
    pub p: f64,
    pub samples: usize,
    pub prediction: Prediction,
    /// `prediction.value`.
    pub predicted: f64,
    pub mean_energy: Option<f64>,
    pub std_energy: Option<f64>,
    /// `mean_energy / predicted`; absent in the degenerate branch.
    pub ratio: Option<f64>,
    pub mean_a1_energy: Option<f64>,
    /// `mean energy(A1) / (|f1 - f2| (8 / 3 pi) sigma n^{3/2})`.
    pub a1_ratio: Option<f64>,
    pub mean_a2_energy: Option<f64>,
    /// `2 (n - 1) |f2| + 0.2 |f2| n^{3/2}`.
    pub a2_bound: Option<f64>,
    /// Whether every sample's `energy(A2)` stayed within `a2_bound`.
    pub a2_within_bound: Option<bool>,
    pub ks: Option<f64>,
    pub ks_std: Option<f64>,
    pub histogram: Option<Histogram>,
    pub moments: Vec<MomentStat>,
    /// Fraction of accepted samples whose diameter is exactly 2.
    pub diam2_fraction: f64,
    /// Disconnected draws rejected across the cell.
    pub resampled: usize,
    pub wall_ms: u64,
    pub per_sample: PerSample,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PerSample {
    pub seeds: Vec<u64>,
    pub diameters: Vec<u32>,
    pub energy: Vec<f64>,
    pub a1_energy: Vec<f64>,
    pub a2_energy: Vec<f64>,
    pub ks: Vec<f64>,
}

/// Configuration echo plus one entry per `(n, p)` cell, `n` major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub cells: Vec<CellReport>,
}

/// SplitMix64 finaliser.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Graph seed for one draw: SplitMix64 folded over
/// `(master_seed, n, p_index, sample_index, attempt)` in that order.
pub fn sample_seed(
    master_seed: u64,
    n: usize,
    p_index: usize,
    sample: usize,
    attempt: usize,
) -> u64 {
    [n as u64, p_index as u64, sample as u64, attempt as u64]
        .into_iter()
        .fold(splitmix64(master_seed), |h, v| {
            splitmix64(h ^ splitmix64(v))
        })
}

struct Accepted {
    graph: Graph,
    summary: GraphSummary,
    seed: u64,
    rejections: usize,
}

fn draw_connected(
    config: &ExperimentConfig,
    n: usize,
    p_index: usize,
    sample: usize,
) -> Result<Accepted, ExperimentError> {
    let p = config.p_list[p_index];
    let limit = REJECTION_FACTOR * config.samples;
    for attempt in 0..=limit {
        let seed = sample_seed(config.master_seed, n, p_index, sample, attempt);
        let graph = gen_erdos_renyi(n, p, seed)?;
        match GraphSummary::of(&graph) {
            Ok(summary) => {
                return Ok(Accepted {
                    graph,
                    summary,
                    seed,
                    rejections: attempt,
                })
            }
            Err(MatrixError::Disconnected { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(ExperimentError::TooManyRejections {
        n,
        p,
        rejections: limit + 1,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; `None` for fewer than two values.
fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs);
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

fn cells(config: &ExperimentConfig) -> impl Iterator<Item = (usize, usize)> + '_ {
    config
        .n_list
        .iter()
        .flat_map(move |&n| (0..config.p_list.len()).map(move |k| (n, k)))
}

fn check_mode(config: &ExperimentConfig, mode: Mode) -> Result<WeightFn, ExperimentError> {
    if config.mode != mode {
        return Err(ExperimentError::Config(format!(
            "configuration is for {:?} mode, not {:?}",
            config.mode, mode
        )));
    }
    config.validate()
}

/// Runs whichever mode the configuration names.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report, ExperimentError> {
    let cells = match config.mode {
        Mode::Energy => run_energy_experiment(config)?,
        Mode::Esd => run_esd_experiment(config)?,
        Mode::Moments => run_moment_experiment(config)?,
    };
    Ok(Report {
        config: config.clone(),
        cells,
    })
}

struct CellBase {
    weight: String,
    prediction: Prediction,
    diameters: Vec<u32>,
    seeds: Vec<u64>,
    resampled: usize,
    started: Instant,
}

impl CellBase {
    fn report(self, config: &ExperimentConfig) -> CellReport {
        let samples = self.diameters.len();
        let diam2 = self.diameters.iter().filter(|&&d| d == 2).count();
        let wall_ms = if config.timing {
            self.started.elapsed().as_millis() as u64
        } else {
            0
        };
        CellReport {
            weight: self.weight,
            mode: config.mode,
            n: self.prediction.n,
            p: self.prediction.p,
            samples,
            predicted: self.prediction.value,
            prediction: self.prediction,
            mean_energy: None,
            std_energy: None,
            ratio: None,
            mean_a1_energy: None,
            a1_ratio: None,
            mean_a2_energy: None,
            a2_bound: None,
            a2_within_bound: None,
            ks: None,
            ks_std: None,
            histogram: None,
            moments: Vec::new(),
            diam2_fraction: diam2 as f64 / samples as f64,
            resampled: self.resampled,
            wall_ms,
            per_sample: PerSample {
                seeds: self.seeds,
                diameters: self.diameters,
                ..PerSample::default()
            },
        }
    }
}

/// Runs `per_sample` on every accepted graph of a cell, in parallel, and
/// returns the results in sample order with the shared bookkeeping.
fn run_cell<T, F>(
    config: &ExperimentConfig,
    weight: &WeightFn,
    n: usize,
    p_index: usize,
    per_sample: F,
) -> Result<(CellBase, Vec<T>), ExperimentError>
where
    T: Send,
    F: Fn(&Accepted) -> Result<T, ExperimentError> + Sync,
{
    let started = Instant::now();
    let p = config.p_list[p_index];
    let prediction = predict_energy(weight, n, p)?;
    let results: Vec<(u32, u64, usize, T)> = (0..config.samples)
        .into_par_iter()
        .map(|s| {
            let accepted = draw_connected(config, n, p_index, s)?;
            let value = per_sample(&accepted)?;
            Ok((
                accepted.summary.diameter,
                accepted.seed,
                accepted.rejections,
                value,
            ))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let mut base = CellBase {
        weight: weight.to_string(),
        prediction,
        diameters: Vec::with_capacity(results.len()),
        seeds: Vec::with_capacity(results.len()),
        resampled: 0,
        started,
    };
    let mut values = Vec::with_capacity(results.len());
    for (diam, seed, rejections, value) in results {
        base.diameters.push(diam);
        base.seeds.push(seed);
        base.resampled += rejections;
        values.push(value);
    }
    Ok((base, values))
}

struct EnergySample {
    energy: f64,
    a1: Option<f64>,
    a2: Option<f64>,
}

/// Energy of `W_f`, `A1` and (optionally) `A2` against the predicted law.
pub fn run_energy_experiment(
    config: &ExperimentConfig,
) -> Result<Vec<CellReport>, ExperimentError> {
    let weight = check_mode(config, Mode::Energy)?;
    let mut reports = Vec::new();
    for (n, k) in cells(config) {
        let p = config.p_list[k];
        let degenerate = predict_energy(&weight, n, p)?.degenerate;
        let (base, samples) = run_cell(config, &weight, n, k, |acc| {
            let w = weight_matrix(&acc.summary, &weight, p)?;
            let energy = energy(&sym_eigenvalues(&w)?);
            let (a1, a2) = if !degenerate || config.measure_a2 {
                let (a1, a2) = split_weight_matrix(&acc.graph, &acc.summary, &weight, p)?;
                let e1 = if degenerate {
                    None
                } else {
                    Some(sym_eigenvalues(&a1)?.energy())
                };
                let e2 = if config.measure_a2 {
                    Some(sym_eigenvalues(&a2)?.energy())
                } else {
                    None
                };
                (e1, e2)
            } else {
                (None, None)
            };
            Ok(EnergySample { energy, a1, a2 })
        })?;
        let prediction = base.prediction.clone();
        let mut cell = base.report(config);
        let energies: Vec<f64> = samples.iter().map(|s| s.energy).collect();
        let mean_energy = mean(&energies);
        cell.mean_energy = Some(mean_energy);
        cell.std_energy = sample_variance(&energies).map(f64::sqrt);
        if !prediction.degenerate {
            cell.ratio = Some(mean_energy / prediction.value);
            let a1: Vec<f64> = samples.iter().filter_map(|s| s.a1).collect();
            let mean_a1 = mean(&a1);
            cell.mean_a1_energy = Some(mean_a1);
            cell.a1_ratio = Some(mean_a1 / prediction.value);
            cell.per_sample.a1_energy = a1;
        }
        if config.measure_a2 {
            let a2: Vec<f64> = samples.iter().filter_map(|s| s.a2).collect();
            let f2 = prediction.f2.abs();
            let bound = 2.0 * (n as f64 - 1.0) * f2 + A2_SLACK * f2 * (n as f64).powf(1.5);
            cell.mean_a2_energy = Some(mean(&a2));
            cell.a2_bound = Some(bound);
            cell.a2_within_bound = Some(a2.iter().all(|&e| e <= bound));
            cell.per_sample.a2_energy = a2;
        }
        cell.per_sample.energy = energies;
        reports.push(cell);
    }
    Ok(reports)
}

/// Eigenvalues of `n^{-1/2} Abar1` for one accepted graph.
fn centered_spectrum(
    acc: &Accepted,
    weight: &WeightFn,
    prediction: &Prediction,
) -> Result<crate::spectral::Spectrum, ExperimentError> {
    let p = prediction.p;
    let (a1, _) = split_weight_matrix(&acc.graph, &acc.summary, weight, p)?;
    let bar = center_scale_a1(&a1, prediction.f1, prediction.f2, p)?;
    let n = acc.graph.n() as f64;
    Ok(sym_eigenvalues_scaled(&bar, 1.0 / n.sqrt())?)
}

fn require_nondegenerate(
    weight: &WeightFn,
    config: &ExperimentConfig,
) -> Result<(), ExperimentError> {
    for (n, k) in cells(config) {
        if predict_energy(weight, n, config.p_list[k])?.degenerate {
            return Err(MatrixError::Degenerate.into());
        }
    }
    Ok(())
}

/// KS distance between the ESD of `n^{-1/2} Abar1` and the semicircle law
/// with `sigma = sqrt(p (1 - p))`, plus a pooled histogram.
pub fn run_esd_experiment(config: &ExperimentConfig) -> Result<Vec<CellReport>, ExperimentError> {
    let weight = check_mode(config, Mode::Esd)?;
    require_nondegenerate(&weight, config)?;
    let mut reports = Vec::new();
    for (n, k) in cells(config) {
        let prediction = predict_energy(&weight, n, config.p_list[k])?;
        let sigma = prediction.sigma;
        let (base, spectra) = run_cell(config, &weight, n, k, |acc| {
            let spectrum = centered_spectrum(acc, &weight, &prediction)?;
            let ks = ks_distance(&esd(&spectrum), |x| semicircle_cdf(x, sigma));
            Ok((ks, spectrum))
        })?;
        let mut cell = base.report(config);
        let half = HISTOGRAM_HALF_WIDTH * sigma;
        let mut histogram = Histogram::builder(-half, half, HISTOGRAM_BINS);
        for (_, spectrum) in &spectra {
            histogram.extend(spectrum.eigenvalues());
        }
        let ks: Vec<f64> = spectra.iter().map(|(ks, _)| *ks).collect();
        cell.ks = Some(mean(&ks));
        cell.ks_std = sample_variance(&ks).map(f64::sqrt);
        cell.histogram = Some(histogram.finish());
        cell.per_sample.ks = ks;
        reports.push(cell);
    }
    Ok(reports)
}

/// Moments `M_1 .. M_kmax` of `n^{-1/2} Abar1` against the semicircle
/// moments (Catalan numbers for even orders, zero for odd).
pub fn run_moment_experiment(
    config: &ExperimentConfig,
) -> Result<Vec<CellReport>, ExperimentError> {
    let weight = check_mode(config, Mode::Moments)?;
    require_nondegenerate(&weight, config)?;
    let mut reports = Vec::new();
    for (n, k) in cells(config) {
        let prediction = predict_energy(&weight, n, config.p_list[k])?;
        let sigma = prediction.sigma;
        let k_max = config.k_max;
        let (base, rows) = run_cell(config, &weight, n, k, |acc| {
            let spectrum = centered_spectrum(acc, &weight, &prediction)?;
            (1..=k_max)
                .map(|order| spectral_moment(&spectrum, order).map_err(ExperimentError::from))
                .collect::<Result<Vec<f64>, _>>()
        })?;
        let mut cell = base.report(config);
        for order in 1..=k_max {
            let values: Vec<f64> = rows.iter().map(|r| r[(order - 1) as usize]).collect();
            let theory = if order % 2 == 0 {
                catalan_moment(order / 2, sigma)?
            } else {
                0.0
            };
            cell.moments.push(MomentStat {
                k: order,
                mean: mean(&values),
                variance: sample_variance(&values),
                theory,
                values,
            });
        }
        reports.push(cell);
    }
    Ok(reports)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `report` to `path`.
///
/// * `csv`: one row per cell (per cell and moment order in moments mode).
/// * `json`: the whole [`Report`], including the configuration and
///   per-sample arrays.
/// * `svg`: `path` is a directory receiving one histogram file per cell
///   (esd mode only).
pub fn write_report(
    report: &Report,
    path: &Path,
    format: ReportFormat,
) -> Result<(), ExperimentError> {
    if report.cells.is_empty() {
        return Err(ExperimentError::Config("report has no cells".into()));
    }
    match format {
        ReportFormat::Csv => fs::write(path, report_csv(report)?)?,
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            fs::write(path, text)?;
        }
        ReportFormat::Svg => {
            if report.cells.iter().any(|c| c.histogram.is_none()) {
                return Err(ExperimentError::NoHistogram("svg"));
            }
            fs::create_dir_all(path)?;
            for cell in &report.cells {
                let file = path.join(svg_file_name(cell));
                let mut out = fs::File::create(file)?;
                out.write_all(histogram_svg(cell).as_bytes())?;
            }
        }
    }
    Ok(())
}

/// CSV text for a report.
pub fn report_csv(report: &Report) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match report.config.mode {
        Mode::Energy => {
            w.write_record([
                "weight",
                "n",
                "p",
                "samples",
                "mean_energy",
                "std_energy",
                "predicted",
                "ratio",
                "a1_ratio",
                "diam2_fraction",
                "resampled",
                "wall_ms",
            ])?;
            for c in &report.cells {
                w.write_record([
                    c.weight.clone(),
                    c.n.to_string(),
                    c.p.to_string(),
                    c.samples.to_string(),
                    opt(c.mean_energy),
                    opt(c.std_energy),
                    c.predicted.to_string(),
                    opt(c.ratio),
                    opt(c.a1_ratio),
                    c.diam2_fraction.to_string(),
                    c.resampled.to_string(),
                    c.wall_ms.to_string(),
                ])?;
            }
        }
        Mode::Esd => {
            w.write_record([
                "weight",
                "n",
                "p",
                "samples",
                "ks_mean",
                "ks_std",
                "diam2_fraction",
                "resampled",
                "wall_ms",
            ])?;
            for c in &report.cells {
                w.write_record([
                    c.weight.clone(),
                    c.n.to_string(),
                    c.p.to_string(),
                    c.samples.to_string(),
                    opt(c.ks),
                    opt(c.ks_std),
                    c.diam2_fraction.to_string(),
                    c.resampled.to_string(),
                    c.wall_ms.to_string(),
                ])?;
            }
        }
        Mode::Moments => {
            w.write_record([
                "weight",
                "n",
                "p",
                "samples",
                "k",
                "mean",
                "variance",
                "theory",
                "diam2_fraction",
                "resampled",
                "wall_ms",
            ])?;
            for c in &report.cells {
                for m in &c.moments {
                    w.write_record([
                        c.weight.clone(),
                        c.n.to_string(),
                        c.p.to_string(),
                        c.samples.to_string(),
                        m.k.to_string(),
                        m.mean.to_string(),
                        opt(m.variance),
                        m.theory.to_string(),
                        c.diam2_fraction.to_string(),
                        c.resampled.to_string(),
                        c.wall_ms.to_string(),
                    ])?;
                }
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

fn svg_file_name(cell: &CellReport) -> String {
    let weight: String = cell
        .weight
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect();
    format!("{weight}_n{}_p{}.svg", cell.n, cell.p)
}

/// Histogram bars (as densities) with the semicircle density overlaid.
pub fn histogram_svg(cell: &CellReport) -> String {
    const WIDTH: f64 = 640.0;
    const HEIGHT: f64 = 400.0;
    const MARGIN: f64 = 30.0;
    let hist = cell
        .histogram
        .as_ref()
        .expect("esd cell carries a histogram");
    let sigma = cell.prediction.sigma;
    let bin_width = hist.bin_width();
    let densities: Vec<f64> = hist.mass.iter().map(|m| m / bin_width).collect();
    let curve: Vec<(f64, f64)> = (0..SVG_CURVE_POINTS)
        .map(|k| {
            let x = hist.lo + (hist.hi - hist.lo) * k as f64 / (SVG_CURVE_POINTS - 1) as f64;
            (x, semicircle_pdf(x, sigma))
        })
        .collect();
    let peak = densities
        .iter()
        .chain(curve.iter().map(|(_, y)| y))
        .fold(0.0f64, |m, &v| m.max(v))
        .max(f64::MIN_POSITIVE);
    let sx = |x: f64| MARGIN + (x - hist.lo) / (hist.hi - hist.lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / peak * (HEIGHT - 2.0 * MARGIN);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    svg.push_str(&format!(
        "<title>{} n={} p={} ks={}</title>\n",
        xml_escape(&cell.weight),
        cell.n,
        cell.p,
        opt(cell.ks)
    ));
    svg.push_str("<g fill=\"#8fb3d9\" stroke=\"#4a6f96\" stroke-width=\"0.5\">\n");
    for (k, &d) in densities.iter().enumerate() {
        let x0 = sx(hist.lo + k as f64 * bin_width);
        let x1 = sx(hist.lo + (k + 1) as f64 * bin_width);
        let y = sy(d);
        svg.push_str(&format!(
            "<rect x=\"{x0:.3}\" y=\"{y:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>\n",
            x1 - x0,
            (HEIGHT - MARGIN) - y
        ));
    }
    svg.push_str("</g>\n");
    let points: Vec<String> = curve
        .iter()
        .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
        .collect();
    svg.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"{}\"/>\n",
        points.join(" ")
    ));
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
