//! `wdm`: energy predictions and experiments for weighted distance matrices
//! of random graphs.

mod exit;
mod format;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};
use wdm_core::matrix::weight_matrix;
use wdm_core::{
    gen_erdos_renyi, parse_edge_list, predict_energy, run_experiment, sym_eigenvalues,
    write_report, Builtin, ExperimentConfig, GraphSummary, Mode, Report, ReportFormat, WeightFn,
};

use exit::{CliError, Exit};
use format::sig6;

/// Environment variable capping the worker count (0 = one per core).
const THREADS_ENV: &str = "WDM_THREADS";
const TOP_EIGENVALUES: usize = 5;

#[derive(Parser)]
#[command(
    name = "wdm",
    version,
    about = "Energy of weighted distance matrices of random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the predicted energy law for a weight on G(n, p).
    Predict {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Energy of one graph, read from an edge list or sampled from G(n, p).
    Energy {
        #[arg(long)]
        weight: String,
        #[arg(long, conflicts_with_all = ["n", "p", "seed"])]
        graph: Option<PathBuf>,
        #[arg(long, requires = "p")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Energy of W, A1 and A2 against the predicted law.
    Experiment(ExperimentArgs),
    /// KS distance of the centred A1 spectrum to the semicircle law.
    Esd(ExperimentArgs),
    /// Spectral moments of the centred A1 against Catalan numbers.
    Moments(ExperimentArgs),
    /// List the builtin weights.
    WeightsList,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    weight: Option<String>,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Comma-separated edge probabilities.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json or svg; inferred from the `--out` extension when omitted.
    #[arg(long)]
    format: Option<ReportFormat>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Exit::Usage.into()
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let result = configure_threads().and_then(|()| dispatch(cli.command, &mut stdout.lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wdm: {}", e.message);
            e.exit.into()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        CliError::usage(format!(
            "{THREADS_ENV}={raw:?} is not a non-negative integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Predict { weight, n, p } => predict(out, &weight, n, p),
        Command::Energy {
            weight,
            graph,
            n,
            p,
            seed,
        } => energy(out, &weight, graph.as_deref(), n.zip(p), seed),
        Command::Experiment(args) => experiment(out, args, Mode::Energy),
        Command::Esd(args) => experiment(out, args, Mode::Esd),
        Command::Moments(args) => experiment(out, args, Mode::Moments),
        Command::WeightsList => weights_list(out),
    }
}

fn parse_weight(spec: &str) -> Result<WeightFn, CliError> {
    WeightFn::from_spec(spec).map_err(|e| CliError::usage(format!("--weight: {e}")))
}

fn predict(out: &mut impl Write, spec: &str, n: usize, p: f64) -> Result<(), CliError> {
    let weight = parse_weight(spec)?;
    let pred = predict_energy(&weight, n, p)?;
    writeln!(out, "weight       {weight}")?;
    writeln!(out, "n            {n}")?;
    writeln!(out, "p            {}", sig6(p))?;
    writeln!(out, "f1           {}", sig6(pred.f1))?;
    writeln!(out, "f2           {}", sig6(pred.f2))?;
    writeln!(out, "sigma        {}", sig6(pred.sigma))?;
    writeln!(out, "coefficient  {}", sig6(pred.coefficient))?;
    writeln!(out, "exponent     {}", sig6(pred.exponent))?;
    writeln!(out, "value        {}", sig6(pred.value))?;
    writeln!(out, "envelope     {}", sig6(pred.envelope))?;
    if pred.degenerate {
        writeln!(
            out,
            "degenerate branch: f(1, np, np) = f(2, np, np), the leading term vanishes; \
             energy is o(|f2| n^1.5), envelope scale {}",
            sig6(pred.envelope)
        )?;
    }
    if let Ok(diag) = weight.stability_diagnostic(n, p, 2) {
        if diag.warn {
            eprintln!(
                "wdm: warning: {weight} moves by {:.1}% over degrees np(1 +- n^-1/4); \
                 the prediction evaluates it at degree np",
                100.0 * diag.max_relative_deviation
            );
        }
    }
    Ok(())
}

fn energy(
    out: &mut impl Write,
    spec: &str,
    path: Option<&Path>,
    sample: Option<(usize, f64)>,
    seed: u64,
) -> Result<(), CliError> {
    let weight = parse_weight(spec)?;
    let (graph, p) = match (path, sample) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            let graph = parse_edge_list(&text)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            let p = wdm_core::matrix::edge_density(&graph);
            (graph, p)
        }
        (None, Some((n, p))) => (
            gen_erdos_renyi(n, p, seed).map_err(|e| CliError::usage(e.to_string()))?,
            p,
        ),
        (None, None) => return Err(CliError::usage("energy needs --graph PATH or --n N --p P")),
    };
    let summary = GraphSummary::of(&graph)?;
    let matrix = weight_matrix(&summary, &weight, p)?;
    let spectrum = sym_eigenvalues(&matrix)?;
    let top: Vec<String> = spectrum
        .top_abs(TOP_EIGENVALUES)
        .into_iter()
        .map(sig6)
        .collect();
    writeln!(out, "n         {}", graph.n())?;
    writeln!(out, "edges     {}", graph.edge_count())?;
    writeln!(out, "diameter  {}", summary.diameter)?;
    writeln!(out, "energy    {}", sig6(spectrum.energy()))?;
    writeln!(out, "top |l|   {}", top.join(" "))?;
    Ok(())
}

/// Builds the configuration: JSON file fields first, then flags on top.
fn build_config(args: &ExperimentArgs, mode: Mode) -> Result<ExperimentConfig, CliError> {
    let mut fields = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => map,
                Ok(_) => {
                    return Err(CliError::data(format!(
                        "{}: expected a JSON object",
                        path.display()
                    )))
                }
                Err(e) => return Err(CliError::data(format!("{}: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };
    let mut set = |key: &str, value: Value| {
        fields.insert(key.to_string(), value);
    };
    if let Some(w) = &args.weight {
        set("weight", w.clone().into());
    }
    if let Some(n) = &args.n {
        set("n_list", n.clone().into());
    }
    if let Some(p) = &args.p {
        set("p_list", p.clone().into());
    }
    if let Some(s) = args.samples {
        set("samples", s.into());
    }
    if let Some(s) = args.seed {
        set("master_seed", s.into());
    }
    if let Some(k) = args.kmax {
        set("k_max", k.into());
    }
    if let Some(o) = &args.out {
        set("output", o.to_string_lossy().into_owned().into());
    }
    if let Some(f) = args.format {
        set(
            "format",
            serde_json::to_value(f).expect("format serializes"),
        );
    }
    set("mode", serde_json::to_value(mode).expect("mode serializes"));
    fields.entry("n_list").or_insert_with(|| vec![200].into());
    fields.entry("p_list").or_insert_with(|| vec![0.5].into());
    if !fields.contains_key("weight") {
        return Err(CliError::usage(
            "no weight given (use --weight or a config file)",
        ));
    }
    serde_json::from_value(Value::Object(fields))
        .map_err(|e| CliError::usage(format!("configuration: {e}")))
}

fn output_format(config: &ExperimentConfig, path: &Path) -> ReportFormat {
    config
        .format
        .unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
            Some("json") => ReportFormat::Json,
            Some("csv") => ReportFormat::Csv,
            _ if config.mode == Mode::Esd && path.extension().is_none() => ReportFormat::Svg,
            _ => ReportFormat::Csv,
        })
}

fn experiment(out: &mut impl Write, args: ExperimentArgs, mode: Mode) -> Result<(), CliError> {
    let config = build_config(&args, mode)?;
    let report = run_experiment(&config)?;
    print_summary(out, &report)?;
    if let Some(path) = &config.output {
        write_report(&report, path, output_format(&config, path))?;
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_else(|| "-".into())
}

fn print_summary(out: &mut impl Write, report: &Report) -> Result<(), CliError> {
    let weight = report
        .cells
        .first()
        .map(|c| c.weight.as_str())
        .unwrap_or_default();
    writeln!(
        out,
        "weight {weight}, {} sample(s) per cell, seed {}",
        report.config.samples, report.config.master_seed
    )?;
    match report.config.mode {
        Mode::Energy => {
            writeln!(
                out,
                "n\tp\tmean_energy\tstd_energy\tpredicted\tratio\ta1_ratio\tdiam2\tresampled"
            )?;
            for c in &report.cells {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    c.n,
                    sig6(c.p),
                    opt(c.mean_energy),
                    opt(c.std_energy),
                    sig6(c.predicted),
                    opt(c.ratio),
                    opt(c.a1_ratio),
                    sig6(c.diam2_fraction),
                    c.resampled
                )?;
                if c.a2_within_bound == Some(false) {
                    writeln!(
                        out,
                        "  energy(A2) exceeded its envelope {}",
                        opt(c.a2_bound)
                    )?;
                }
                if c.prediction.degenerate {
                    writeln!(out, "  degenerate branch: no leading-order prediction")?;
                }
            }
        }
        Mode::Esd => {
            writeln!(out, "n\tp\tks_mean\tks_std\tdiam2\tresampled")?;
            for c in &report.cells {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    c.n,
                    sig6(c.p),
                    opt(c.ks),
                    opt(c.ks_std),
                    sig6(c.diam2_fraction),
                    c.resampled
                )?;
            }
        }
        Mode::Moments => {
            writeln!(out, "n\tp\tk\tmean\tvariance\ttheory")?;
            for c in &report.cells {
                for m in &c.moments {
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        c.n,
                        sig6(c.p),
                        m.k,
                        sig6(m.mean),
                        opt(m.variance),
                        sig6(m.theory)
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn weights_list(out: &mut impl Write) -> Result<(), CliError> {
    for b in Builtin::ALL {
        writeln!(out, "{:<16}{:<16}{}", b.name(), b.source(), b.description())?;
    }
    writeln!(
        out,
        "{:<32}custom expression over D, di, dj, n, p, diam",
        "expr:<source>"
    )?;
    Ok(())
}
