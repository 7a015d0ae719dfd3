//! Acceptance checks. Each criterion prints one `[PASS]` or `[FAIL]` line.
//! The process exits non-zero unless the failing set is exactly
//! [`KNOWN_UNATTAINABLE`].

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use wdm_core::experiment::report_csv;
use wdm_core::theory::{catalan_moment, mean_abs_semicircle, semicircle_cdf, semicircle_pdf};
use wdm_core::{
    degree_bound_holds, energy, gen_erdos_renyi, predict_energy, run_experiment, sym_eigenvalues,
    write_report, ExperimentConfig, Mode, Report, ReportFormat, SymMatrix, WeightFn,
};

const SEED: u64 = 20_240_601;

/// Sample variances of `M2` (which is about 0.25) at or below this are
/// rounding noise, not sampling variation.
const VARIANCE_NOISE_FLOOR: f64 = 1e-24;

/// Criteria that cannot hold as stated. They still run and print `[FAIL]`;
/// the exit status flags any other failure, or one of these passing.
const KNOWN_UNATTAINABLE: &[u32] = &[9];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run(config: ExperimentConfig) -> Result<Report, String> {
    run_experiment(&config).map_err(|e| e.to_string())
}

fn energy_config(weight: &str, n: Vec<usize>, samples: usize) -> ExperimentConfig {
    ExperimentConfig {
        n_list: n,
        samples,
        master_seed: SEED,
        measure_a2: false,
        ..ExperimentConfig::new(weight, Mode::Energy)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn catalog_coefficients() -> Outcome {
    let mut worst = 0.0f64;
    for entry in CATALOG {
        let weight = WeightFn::from_spec(entry.0).map_err(|e| e.to_string())?;
        for (n, p) in [(100, 0.5), (800, 0.5), (1000, 0.3), (57, 0.81)] {
            let got = predict_energy(&weight, n, p)
                .map_err(|e| e.to_string())?
                .value;
            worst = worst.max(rel_diff(got, catalog_value(entry, n, p)));
        }
    }
    check(
        worst <= 1e-12,
        format!("9 weights, max relative error {worst:.2e}"),
    )
}

fn semicircle_machinery() -> Outcome {
    let mut worst = 0.0f64;
    for sigma in [0.5, 0.3, 1.0, 2.0] {
        let pdf = |x| semicircle_pdf(x, sigma);
        worst = worst.max((semicircle_expectation(|_| 1.0, pdf, sigma) - 1.0).abs());
        let mean_abs = semicircle_expectation(f64::abs, pdf, sigma);
        worst = worst.max(rel_diff(mean_abs_semicircle(sigma), mean_abs));
        for s in 0..=6 {
            let quad = semicircle_expectation(|x| x.powi(2 * s as i32), pdf, sigma);
            let closed = catalan_moment(s, sigma).map_err(|e| e.to_string())?;
            worst = worst.max(rel_diff(closed, quad));
            let by_fact = catalan_by_factorials(s) * sigma.powi(2 * s as i32);
            worst = worst.max(rel_diff(closed, by_fact));
        }
        let ends = [
            semicircle_cdf(-2.0 * sigma, sigma),
            1.0 - semicircle_cdf(2.0 * sigma, sigma),
            semicircle_cdf(-5.0 * sigma, sigma),
            1.0 - semicircle_cdf(5.0 * sigma, sigma),
            (semicircle_cdf(0.0, sigma) - 0.5),
        ];
        worst = worst.max(ends.iter().fold(0.0f64, |m, e| m.max(e.abs())));
    }
    check(worst <= 1e-8, format!("max deviation {worst:.2e}"))
}

fn eigensolver_oracle() -> Outcome {
    let mut rng = rng(SEED);
    let mut worst_root = 0.0f64;
    for k in 0..1000 {
        let n = 3 + k % 2;
        let a = random_integer_symmetric(&mut rng, n, 9);
        let poly: Vec<f64> = char_poly(&a).into_iter().map(|c| c as f64).collect();
        let mut expected = real_roots(&poly);
        expected.reverse();
        let got = sym_eigenvalues(&to_sym(&a)).map_err(|e| e.to_string())?;
        for (x, y) in got.eigenvalues().iter().zip(&expected) {
            worst_root = worst_root.max((x - y).abs());
        }
    }
    let mut worst_identity = 0.0f64;
    for k in 0..1000 {
        let n = 1 + k % 30;
        let a = random_symmetric(&mut rng, n);
        let s = sym_eigenvalues(&a).map_err(|e| e.to_string())?;
        let sum: f64 = s.eigenvalues().iter().sum();
        let sq: f64 = s.eigenvalues().iter().map(|x| x * x).sum();
        let scale = a.frobenius_sq().max(1.0);
        worst_identity = worst_identity
            .max((sum - a.trace()).abs() / scale.sqrt())
            .max((sq - a.frobenius_sq()).abs() / scale);
    }
    check(
        worst_root <= 1e-8 && worst_identity <= 1e-8,
        format!(
            "char-poly max error {worst_root:.2e}, trace/Frobenius max error {worst_identity:.2e}"
        ),
    )
}

fn semicircle_convergence() -> Outcome {
    let report = run(ExperimentConfig {
        n_list: vec![100, 1000],
        samples: 5,
        master_seed: SEED,
        ..ExperimentConfig::new("distance", Mode::Esd)
    })?;
    let small = report.cells[0].ks.unwrap();
    let large = report.cells[1].ks.unwrap();
    let single = report.cells[1].per_sample.ks[0];
    check(
        single <= 0.05 && large < small,
        format!("single KS at n=1000 {single:.4}; mean KS n=100 {small:.4}, n=1000 {large:.4}"),
    )
}

fn energy_laws(a1_report: &mut String) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut a1_ok = true;
    let mut a1_lines = Vec::new();
    for weight in ["distance", "harary", "dd", "gutman"] {
        let report = run(energy_config(weight, vec![200, 800], 10))?;
        let (small, large) = (&report.cells[0], &report.cells[1]);
        let (r200, r800) = (small.ratio.unwrap(), large.ratio.unwrap());
        let pass = (0.80..=1.25).contains(&r800) && (r800 - 1.0).abs() <= (r200 - 1.0).abs();
        ok &= pass;
        lines.push(format!("{weight} {r200:.4}->{r800:.4}"));
        if weight == "distance" || weight == "dd" {
            // The first five samples of a cell are exactly a five-sample run.
            let a1 = mean(&large.per_sample.a1_energy[..5]) / large.predicted;
            a1_ok &= (0.95..=1.05).contains(&a1);
            a1_lines.push(format!("{weight} {a1:.4}"));
        }
    }
    *a1_report = format!("{}|{}", a1_ok, a1_lines.join(", "));
    check(ok, format!("ratio n=200->800: {}", lines.join(", ")))
}

fn adjacency_special_case() -> Outcome {
    let report = run(energy_config("edge_indicator", vec![800], 5))?;
    let mean_energy = report.cells[0].mean_energy.unwrap();
    let target = 8.0 / (3.0 * std::f64::consts::PI) * 0.5 * 800f64.powf(1.5);
    let rel = rel_diff(mean_energy, target);
    check(
        rel <= 0.05,
        format!("mean {mean_energy:.1} vs {target:.1} ({:.2}%)", 100.0 * rel),
    )
}

fn degenerate_branch() -> Outcome {
    let report = run(energy_config("expr:1", vec![400, 1600], 2))?;
    let mut worst = 0.0f64;
    let mut scaled = Vec::new();
    for cell in &report.cells {
        let exact = 2.0 * (cell.n as f64 - 1.0);
        for &e in &cell.per_sample.energy {
            worst = worst.max(rel_diff(e, exact));
        }
        scaled.push(cell.mean_energy.unwrap() / (cell.n as f64).powf(1.5));
    }
    check(
        worst <= 1e-9 && scaled[1] < scaled[0] && report.cells.iter().all(|c| c.ratio.is_none()),
        format!(
            "max relative deviation from 2(n-1) {worst:.1e}; energy/n^1.5 {:.5} -> {:.5}",
            scaled[0], scaled[1]
        ),
    )
}

fn moment_checks() -> Outcome {
    let report = run(ExperimentConfig {
        n_list: vec![250, 1000],
        samples: 10,
        master_seed: SEED,
        k_max: 4,
        ..ExperimentConfig::new("distance", Mode::Moments)
    })?;
    let m = |cell: usize, k: usize| &report.cells[cell].moments[k - 1];
    let (m2, m3, m4) = (m(1, 2).mean, m(1, 3).mean, m(1, 4).mean);
    // At p = 1/2 every entry of the centred matrix is +-1/2, so M2 equals
    // (n - 1) / (4 n) on every sample and its variance is pure rounding
    // noise. Values below the noise floor are read as zero.
    let floor = |v: f64| if v <= VARIANCE_NOISE_FLOOR { 0.0 } else { v };
    let (v250, v1000) = (m(0, 2).variance.unwrap(), m(1, 2).variance.unwrap());
    check(
        rel_diff(m2, 0.25) <= 0.05
            && rel_diff(m4, 0.125) <= 0.10
            && m3.abs() <= 0.02
            && floor(v1000) < floor(v250),
        format!(
            "M2 {m2:.5}, M3 {m3:.5}, M4 {m4:.5}; var M2 n=250 {v250:.2e}, n=1000 {v1000:.2e} \
             (M2 is constant at p=0.5, variances are rounding noise)"
        ),
    )
}

fn degree_concentration() -> Outcome {
    let mut held = 0;
    for s in 0..100 {
        let g = gen_erdos_renyi(1000, 0.5, SEED + s).map_err(|e| e.to_string())?;
        held += degree_bound_holds(&g, 0.5) as usize;
    }
    check(held >= 99, format!("{held}/100 samples inside the bound"))
}

fn diameter_two() -> Outcome {
    let mut two = 0;
    for s in 0..100 {
        let g = gen_erdos_renyi(200, 0.5, SEED + s).map_err(|e| e.to_string())?;
        two += (g.all_pairs_distances().diameter() == Some(2)) as usize;
    }
    check(two >= 99, format!("{two}/100 samples with diameter 2"))
}

fn ky_fan() -> Outcome {
    let mut rng = rng(SEED ^ 0xF00D);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..200 {
        let n = 2 + k % 25;
        let x = random_symmetric(&mut rng, n);
        let y = random_symmetric(&mut rng, n);
        let sum = x.try_add(&y).map_err(|e| e.to_string())?;
        let e = |m: &SymMatrix| {
            sym_eigenvalues(m)
                .map(|s| energy(&s))
                .map_err(|e| e.to_string())
        };
        worst = worst.max(e(&sum)? - e(&x)? - e(&y)?);
    }
    check(
        worst <= 1e-8,
        format!("max E(X+Y) - E(X) - E(Y) = {worst:.3e}"),
    )
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let configs = [
        ExperimentConfig {
            n_list: vec![40, 90],
            p_list: vec![0.3, 0.5],
            samples: 4,
            master_seed: SEED,
            ..ExperimentConfig::new("harary", Mode::Energy)
        },
        ExperimentConfig {
            n_list: vec![60],
            samples: 3,
            master_seed: SEED,
            ..ExperimentConfig::new("expr:di*dj/D^2", Mode::Esd)
        },
        ExperimentConfig {
            n_list: vec![60],
            samples: 3,
            master_seed: SEED,
            k_max: 6,
            ..ExperimentConfig::new("dd", Mode::Moments)
        },
    ];
    let mut files = 0;
    for (c, config) in configs.iter().enumerate() {
        let mut outputs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
        for (r, threads) in [1, 4, 4, 1].into_iter().enumerate() {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?;
            let report = pool.install(|| run(config.clone()))?;
            let csv = dir.path().join(format!("{c}_{r}.csv"));
            let json = dir.path().join(format!("{c}_{r}.json"));
            write_report(&report, &csv, ReportFormat::Csv).map_err(|e| e.to_string())?;
            write_report(&report, &json, ReportFormat::Json).map_err(|e| e.to_string())?;
            let read = |p| std::fs::read(p).map_err(|e: std::io::Error| e.to_string());
            outputs.push((read(&csv)?, read(&json)?));
            assert_eq!(
                report_csv(&report).unwrap().as_bytes(),
                outputs.last().unwrap().0
            );
            files += 2;
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("configuration {c} produced differing reports"));
        }
    }
    Ok(format!(
        "{files} reports from serial and 4-thread runs are byte-identical"
    ))
}

fn main() -> ExitCode {
    let mut a1_summary = String::new();
    let mut failed = Vec::new();
    let mut report = |id: u32, name: &str, started: Instant, outcome: Outcome| {
        let secs = started.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(id);
                ("FAIL", d)
            }
        };
        let known = if KNOWN_UNATTAINABLE.contains(&id) {
            " [known unattainable]"
        } else {
            ""
        };
        println!("[{tag}] {id:>2} {name}: {detail} ({secs:.1}s){known}");
    };

    let t = Instant::now();
    report(1, "catalog coefficients", t, catalog_coefficients());
    let t = Instant::now();
    report(2, "semicircle machinery", t, semicircle_machinery());
    let t = Instant::now();
    report(3, "eigensolver oracle", t, eigensolver_oracle());
    let t = Instant::now();
    report(
        4,
        "centred A1 semicircle convergence",
        t,
        semicircle_convergence(),
    );
    let t = Instant::now();
    let full = energy_laws(&mut a1_summary);
    let elapsed = Instant::now();
    let a1 = match a1_summary.split_once('|') {
        Some(("true", d)) => Ok(format!("A1 ratio at n=800 over 5 samples: {d}")),
        Some((_, d)) => Err(format!("A1 ratio at n=800 over 5 samples: {d}")),
        None => Err(full.clone().err().unwrap_or_default()),
    };
    report(5, "A1 energy law", elapsed, a1);
    report(6, "full-matrix energy law", t, full);
    let t = Instant::now();
    report(7, "adjacency special case", t, adjacency_special_case());
    let t = Instant::now();
    report(8, "degenerate branch", t, degenerate_branch());
    let t = Instant::now();
    report(9, "moment checks", t, moment_checks());
    let t = Instant::now();
    report(10, "degree concentration", t, degree_concentration());
    let t = Instant::now();
    report(11, "diameter-2 prevalence", t, diameter_two());
    let t = Instant::now();
    report(12, "Ky Fan subadditivity", t, ky_fan());
    let t = Instant::now();
    report(13, "reproducibility", t, reproducibility());

    println!(
        "acceptance: {} of 13 criteria passed, failed: {failed:?}",
        13 - failed.len()
    );
    if failed == KNOWN_UNATTAINABLE {
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: failures differ from the known-unattainable list {KNOWN_UNATTAINABLE:?}"
        );
        ExitCode::FAILURE
    }
}
