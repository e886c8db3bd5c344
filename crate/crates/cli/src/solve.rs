use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use qipsim::optimizer::{Readout, RotationMode, SolveParams, SolveReport, SolveStatus};
use qipsim::problem::CubMode;
use qipsim::Error;

use crate::{exit, StageTwoArgs};

#[derive(Args)]
pub struct SolveArgs {
    /// Problem JSON file.
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    stage_two: StageTwoArgs,
    /// Samples drawn from the final distribution.
    #[arg(long, default_value_t = 4096)]
    shots: u64,
    /// Seed for sampling and resampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Read the exact distribution instead of sampling.
    #[arg(long)]
    exact: bool,
    /// Also run the literal repeat-until-zero measurement loop.
    #[arg(long)]
    resample: bool,
    /// Overall success probability for the repetition count.
    #[arg(long, default_value_t = 0.99)]
    target: f64,
    /// Directory for report.json and distributions.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(serde::Serialize)]
struct CsvRow<'a> {
    series: &'a str,
    basis_index: usize,
    probability: f64,
}

/// The four bar series: constraint patterns before and after amplification,
/// feasible states before and after Stage II.
fn write_distributions(path: &Path, r: &SolveReport) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (series, table) in
        [("qubit_before", &r.stage_one.patterns_before), ("qubit_after", &r.stage_one.patterns_after)]
    {
        for (basis_index, row) in table.iter().enumerate() {
            w.serialize(CsvRow { series, basis_index, probability: row.probability })?;
        }
    }
    if let Some(s2) = &r.stage_two {
        let after = s2.y_sampled.as_ref().unwrap_or(&s2.y_after);
        for (series, values) in [("feasible_before", &s2.y_before), ("feasible_after", after)] {
            for (f, &probability) in r.feasible.iter().zip(values) {
                w.serialize(CsvRow { series, basis_index: f.y, probability })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_outputs(out: &Path, r: &SolveReport) -> anyhow::Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let json = serde_json::to_string_pretty(r)?;
    std::fs::write(out.join("report.json"), json + "\n")?;
    write_distributions(&out.join("distributions.csv"), r)
}

fn print_summary(r: &SolveReport) {
    let status = serde_json::to_value(r.status).expect("status serializes");
    println!("status: {}", status.as_str().unwrap_or_default());
    println!("feasible: {} of {}", r.n_ys, r.problem.search_space);
    let d = &r.stage_one.diagnosis;
    if !d.decidable {
        println!("gamma_max: {} relaxations: {}", d.gamma_max, d.relaxations);
    }
    if let (Some(o), Some(s), Some(s2)) = (&r.optimum, &r.success, &r.stage_two) {
        let x: Vec<String> = o.assignment.iter().map(|v| v.to_string()).collect();
        println!("optimum: y={} x=({}) cost={}", o.y, x.join(","), o.cost);
        let reps = s.repetitions.finite().map_or("inf".to_string(), |r| r.to_string());
        println!("p={:.4} p0={:.4} r={reps}", s.p, s2.p0);
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
}

pub fn run(a: SolveArgs) -> u8 {
    let dim_cap = match crate::dim_cap() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::USAGE;
        }
    };
    let problem = match crate::read_problem(&a.problem) {
        Ok(p) => p,
        Err(e @ Error::Contradiction { .. }) => {
            eprintln!("undecidable: {e}");
            return exit::UNDECIDABLE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return exit::USAGE;
        }
    };
    let params = SolveParams {
        l: a.stage_two.l.or(Some(qipsim::optimizer::DEFAULT_L)),
        cub: a.stage_two.cub.unwrap_or(CubMode::Guaranteed),
        readout: if a.exact { Readout::Exact } else { Readout::Shots { shots: a.shots, seed: a.seed } },
        rotation: if a.stage_two.ideal { RotationMode::Ideal } else { RotationMode::Measured },
        target: a.target,
        dim_cap,
        resample: a.resample.then_some(a.seed),
        ..SolveParams::default()
    };
    let report = match qipsim::solve(&problem, &params) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::MISMATCH;
        }
    };
    if let Err(e) = write_outputs(&a.out, &report) {
        eprintln!("error: {e:#}");
        return exit::MISMATCH;
    }
    print_summary(&report);
    match report.status {
        SolveStatus::Solved => 0,
        SolveStatus::Undecidable => exit::UNDECIDABLE,
        SolveStatus::DegenerateObjective => exit::DEGENERATE,
    }
}
