//! Command handlers: every handler reads a JSON document, runs library
//! operations, and emits CSV/JSON artifacts. Config problems exit 1;
//! numerical failures exit 2 with a JSON error report.

use crate::gridspec::parse_grid;
use crate::{Cli, Command, IoArgs, SCHEMA};
use pseudoabel::foliation::{integral_scan, trace_oval, ScanStatus, TraceOptions};
use pseudoabel::io;
use pseudoabel::jseries::SectorPoint;
use pseudoabel::mellin::{inverse_mellin, petrov_series, ContourSpec, MellinRep};
use pseudoabel::sweep::{self, SweepAxis, SweepSpec};
use pseudoabel::zerocount::petrov::{reduction_chain, verify_petrov, Verdict};
use pseudoabel::zerocount::count_zeros_interval;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

enum AppError {
    /// Bad configuration or malformed input: exit 1.
    Config(String),
    /// A numerical operation failed: exit 2 with a JSON error report.
    Numerical(String),
}

type AppResult = Result<(), AppError>;

fn config<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Config(e.to_string())
}

fn numerical<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Numerical(e.to_string())
}

fn read_input(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path)
        .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))
}

fn write_artifact(path: &Option<PathBuf>, content: &str) -> AppResult {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| AppError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_named(path: &Path, content: &str) -> AppResult {
    std::fs::write(path, content)
        .map_err(|e| AppError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Sweep input: a base object (series or system) plus axes.
#[derive(Debug, Deserialize)]
struct SweepDoc {
    #[serde(default)]
    series: Option<io::SeriesDoc>,
    #[serde(default)]
    system: Option<io::SystemDoc>,
    axes: Vec<SweepAxis>,
    #[serde(rename = "tMin", default)]
    t_min: Option<f64>,
    #[serde(rename = "tMax", default)]
    t_max: Option<f64>,
    /// Level grid for system sweeps.
    #[serde(rename = "tGrid", default)]
    t_grid: Option<String>,
}

pub fn dispatch(cli: Cli) -> i32 {
    let seed = cli.seed;
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("PSEUDOABEL_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1);
    let result = if cli.schema_check {
        schema_check(&cli.command)
    } else {
        run(cli.command, seed, threads)
    };
    match result {
        Ok(()) => 0,
        Err(AppError::Config(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(AppError::Numerical(msg)) => {
            let report = json!({
                "schema": SCHEMA,
                "error": msg,
                "seed": seed,
            });
            eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
            2
        }
    }
}

fn input_of(cmd: &Command) -> &IoArgs {
    match cmd {
        Command::EvalSeries { io, .. }
        | Command::MellinTable { io }
        | Command::InvertMellin { io, .. }
        | Command::Petrov { io, .. }
        | Command::Reduce { io, .. }
        | Command::CountZeros { io, .. }
        | Command::VerifyPetrov { io, .. }
        | Command::TraceOval { io, .. }
        | Command::Integrate { io, .. }
        | Command::Sweep { io, .. } => io,
    }
}

/// Parses the input document for its schema only.
fn schema_check(cmd: &Command) -> AppResult {
    let text = read_input(&input_of(cmd).input)?;
    match cmd {
        Command::InvertMellin { .. } => {
            io::mellin_from_json(&text).map_err(config)?;
        }
        Command::TraceOval { .. } | Command::Integrate { .. } => {
            io::system_from_json(&text).map_err(config)?;
        }
        Command::Sweep { .. } => {
            let doc: SweepDoc = serde_json::from_str(&text).map_err(config)?;
            validate_sweep(&doc)?;
        }
        _ => {
            io::series_from_json(&text).map_err(config)?;
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({"schema": SCHEMA, "valid": true})).unwrap()
    );
    Ok(())
}

fn validate_sweep(doc: &SweepDoc) -> Result<(), AppError> {
    if doc.series.is_none() == doc.system.is_none() {
        return Err(AppError::Config(
            "sweep input needs exactly one of 'series' or 'system'".into(),
        ));
    }
    if doc.axes.is_empty() {
        return Err(AppError::Config("sweep needs at least one axis".into()));
    }
    if let Some(s) = &doc.series {
        s.clone().into_series().map_err(config)?;
    }
    if let Some(s) = &doc.system {
        s.into_system().map_err(config)?;
        if doc.t_grid.is_none() {
            return Err(AppError::Config(
                "system sweep needs a tGrid specification".into(),
            ));
        }
    }
    Ok(())
}

fn run(cmd: Command, seed: u64, threads: usize) -> AppResult {
    match cmd {
        Command::EvalSeries { io: ioargs, t_grid } => {
            let series = io::series_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let grid = parse_grid(&t_grid).map_err(AppError::Config)?;
            let mut csv = String::from("t,re,im,tail_bound\n");
            for &t in &grid {
                let point = SectorPoint::real(t).map_err(numerical)?;
                let ev = series.evaluate(point).map_err(numerical)?;
                writeln!(csv, "{t},{},{},{}", ev.value.re, ev.value.im, ev.tail_bound)
                    .unwrap();
            }
            write_artifact(&ioargs.output, &csv)
        }
        Command::MellinTable { io: ioargs } => {
            let series = io::series_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let rep = MellinRep::forward(&series);
            write_artifact(&ioargs.output, &io::mellin_to_json(&rep))
        }
        Command::InvertMellin { io: ioargs, t_grid, tol } => {
            let rep = io::mellin_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let grid = parse_grid(&t_grid).map_err(AppError::Config)?;
            let mut csv = String::from("t,re,im,est_error\n");
            for &t in &grid {
                let contour = ContourSpec::auto(&rep, t).with_tol(tol);
                let (v, err) = inverse_mellin(&rep, t, &contour).map_err(numerical)?;
                writeln!(csv, "{t},{},{},{err}", v.re, v.im).unwrap();
            }
            write_artifact(&ioargs.output, &csv)
        }
        Command::Petrov { io: ioargs, kappa } => {
            let series = io::series_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let out = petrov_series(&series, kappa).map_err(numerical)?;
            write_artifact(&ioargs.output, &io::series_to_json(&out))
        }
        Command::Reduce { io: ioargs, csv } => {
            let series = io::series_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let chain = reduction_chain(&series).map_err(numerical)?;
            let steps: Vec<_> = chain
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "slot": s.slot,
                        "kappa": s.kappa,
                        "nBefore": s.n_before,
                        "nAfter": s.n_after,
                        "delta0": s.delta0,
                        "delta1": s.delta1,
                        "terms": s.series.num_terms(),
                    })
                })
                .collect();
            let report = json!({
                "schema": SCHEMA,
                "command": "reduce",
                "seed": seed,
                "steps": steps,
                "finalSup": chain.final_sup,
                "allowance": chain.allowance,
                "finalBelowTolerance": chain.final_sup <= chain.allowance,
            });
            if let Some(csv_path) = csv {
                let mut table = String::from("t,final_re,final_im,allowance\n");
                for k in 0..17 {
                    let t = 0.1 + 0.05 * k as f64;
                    let v = chain.final_series.eval_real(t).map_err(numerical)?;
                    writeln!(table, "{t},{},{},{}", v.re, v.im, chain.allowance).unwrap();
                }
                write_named(&csv_path, &table)?;
            }
            write_artifact(&ioargs.output, &serde_json::to_string_pretty(&report).unwrap())
        }
        Command::CountZeros { io: ioargs, t_min, t_max, samples } => {
            let series = io::series_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let report = count_zeros_interval(&series, t_min, t_max).map_err(numerical)?;
            let zeros: Vec<_> = report
                .zeros
                .iter()
                .map(|z| {
                    json!({
                        "location": z.location,
                        "multiplicity": z.multiplicity,
                        "residualMargin": z.residual_margin,
                    })
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "command": "count-zeros",
                "seed": seed,
                "count": report.count,
                "certified": report.certified,
                "zeros": zeros,
                "margins": {"grid": report.margin},
                "flagged": report.flagged,
                "method": "sign-scan",
            });
            if let Some(sample_path) = samples {
                let mut table = String::from("t,f\n");
                let n = 200;
                for k in 0..n {
                    let t = t_min * (t_max / t_min).powf(k as f64 / (n - 1) as f64);
                    let v = series.eval_real(t).map_err(numerical)?;
                    writeln!(table, "{t},{}", v.re).unwrap();
                }
                write_named(&sample_path, &table)?;
            }
            write_artifact(&ioargs.output, &serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::VerifyPetrov { io: ioargs, kappa } => {
            let series = io::series_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let v = verify_petrov(&series, kappa);
            let (verdict, reason) = match &v.verdict {
                Verdict::Holds => ("holds", String::new()),
                Verdict::Violated => ("violated", String::new()),
                Verdict::Inconclusive(r) => ("inconclusive", r.clone()),
            };
            let doc = json!({
                "schema": SCHEMA,
                "command": "verify-petrov",
                "seed": seed,
                "kappa": kappa,
                "lhs": v.lhs,
                "rhs": v.rhs,
                "rhsPlusForm": v.rhs_plus_form,
                "delta0": v.delta0,
                "delta1": v.delta1,
                "nF": v.n_f.as_ref().map(|r| r.count),
                "nPf": v.n_pf.as_ref().map(|r| r.count),
                "verdict": verdict,
                "reason": reason,
            });
            write_artifact(&ioargs.output, &serde_json::to_string_pretty(&doc).unwrap())
        }
        Command::TraceOval { io: ioargs, t } => {
            let (sys, _) = io::system_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let oval = trace_oval(&sys, t, &TraceOptions::default()).map_err(numerical)?;
            let mut csv = String::from("x,y,residual\n");
            for (p, r) in oval.points.iter().zip(oval.residuals.iter()) {
                writeln!(csv, "{},{},{r}", p[0], p[1]).unwrap();
            }
            write_artifact(&ioargs.output, &csv)?;
            let summary = json!({
                "schema": SCHEMA,
                "command": "trace-oval",
                "seed": seed,
                "t": t,
                "points": oval.points.len(),
                "arcLength": oval.arc_length,
                "closureGap": oval.closure_gap,
                "winding": oval.winding_number(),
                "maxResidual": oval.max_residual(),
            });
            if ioargs.output.is_some() {
                println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            }
            Ok(())
        }
        Command::Integrate { io: ioargs, t_grid } => {
            let (sys, omega) =
                io::system_from_json(&read_input(&ioargs.input)?).map_err(config)?;
            let omega = omega.ok_or_else(|| {
                AppError::Config("integrate needs an omega section in the input".into())
            })?;
            let grid = parse_grid(&t_grid).map_err(AppError::Config)?;
            let rows = integral_scan(&sys, &omega, &grid, &TraceOptions::default());
            let mut csv = String::from("t,integral,est_error,trace_status\n");
            for row in rows {
                let status = match &row.status {
                    ScanStatus::Ok => "ok".to_string(),
                    ScanStatus::TraceFailed(m) => format!("trace-failed: {m}"),
                    ScanStatus::IntegrateFailed(m) => format!("integrate-failed: {m}"),
                };
                writeln!(
                    csv,
                    "{},{},{},{}",
                    row.t,
                    row.value.map(|v| v.to_string()).unwrap_or_default(),
                    row.error.map(|v| v.to_string()).unwrap_or_default(),
                    status.replace(',', ";"),
                )
                .unwrap();
            }
            write_artifact(&ioargs.output, &csv)
        }
        Command::Sweep { io: ioargs, report } => {
            let doc: SweepDoc =
                serde_json::from_str(&read_input(&ioargs.input)?).map_err(config)?;
            validate_sweep(&doc)?;
            let table = if let Some(series_doc) = doc.series {
                let base = series_doc.into_series().map_err(config)?;
                let spec = SweepSpec {
                    axes: doc.axes.clone(),
                    t_min: doc.t_min.unwrap_or(1e-6),
                    t_max: doc.t_max.unwrap_or(1.0 - 1e-9),
                };
                let grid = sweep::grid_points(&spec.axes);
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(numerical)?;
                let rows = pool.install(|| {
                    grid.par_iter()
                        .map(|coords| {
                            sweep::series_sweep_row(
                                &base, &spec.axes, coords, spec.t_min, spec.t_max,
                            )
                        })
                        .collect::<Vec<_>>()
                });
                sweep::summarize(rows)
            } else {
                let sys_doc = doc.system.expect("validated");
                let (sys, omega) = sys_doc.into_system().map_err(config)?;
                let omega = omega.ok_or_else(|| {
                    AppError::Config("system sweep needs an omega section".into())
                })?;
                let grid_spec = doc.t_grid.expect("validated");
                let t_grid = parse_grid(&grid_spec).map_err(AppError::Config)?;
                sweep::sweep_system_counts(&sys, &omega, &t_grid, &doc.axes)
            };
            let mut csv = String::new();
            let n_axes = table.rows.first().map(|r| r.coords.len()).unwrap_or(0);
            for k in 0..n_axes {
                write!(csv, "coord_{k},").unwrap();
            }
            csv.push_str("count,certified,note\n");
            for row in &table.rows {
                for c in &row.coords {
                    write!(csv, "{c},").unwrap();
                }
                writeln!(
                    csv,
                    "{},{},{}",
                    row.count.map(|c| c.to_string()).unwrap_or_default(),
                    row.certified,
                    row.note.clone().unwrap_or_default().replace(',', ";"),
                )
                .unwrap();
            }
            write_artifact(&ioargs.output, &csv)?;
            let summary = json!({
                "schema": SCHEMA,
                "command": "sweep",
                "seed": seed,
                "gridPoints": table.rows.len(),
                "conclusive": table.conclusive,
                "maxCount": table.max_count,
            });
            match report {
                Some(p) => write_named(&p, &serde_json::to_string_pretty(&summary).unwrap()),
                None => {
                    if ioargs.output.is_some() {
                        println!("{}", serde_json::to_string_pretty(&summary).unwrap());
                    }
                    Ok(())
                }
            }
        }
    }
}
