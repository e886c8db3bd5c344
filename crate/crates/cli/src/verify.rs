use std::path::PathBuf;

use clap::Args;
use qipsim::instances::{random_instance, RandomSpec};
use qipsim::optimizer::{Readout, RotationMode, SolveParams, SolveStatus};
use qipsim::oracle::brute_force_solve;
use qipsim::problem::CubMode;
use qipsim::IpProblem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{exit, StageTwoArgs};

#[derive(Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["problem", "fuzz"])))]
pub struct VerifyArgs {
    /// Problem JSON file.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Number of random instances to check.
    #[arg(long)]
    fuzz: Option<usize>,
    /// Seed of the random instance stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    stage_two: StageTwoArgs,
}

/// `Ok` when solve and brute force agree, else a description of the diff.
pub fn check(p: &IpProblem, params: &SolveParams) -> Result<(), String> {
    let bf = brute_force_solve(p).map_err(|e| format!("brute force: {e}"))?;
    let r = qipsim::solve(p, params).map_err(|e| e.to_string())?;
    match r.status {
        SolveStatus::Undecidable if bf.feasible.is_empty() => Ok(()),
        SolveStatus::Undecidable => {
            Err(format!("solve found no feasible state, brute force found {}", bf.feasible.len()))
        }
        SolveStatus::DegenerateObjective if bf.optimum_cost == Some(0.0) => Ok(()),
        SolveStatus::DegenerateObjective => {
            Err(format!("degenerate objective, brute force optimum {:?}", bf.optimum_cost))
        }
        SolveStatus::Solved => {
            let ys: Vec<usize> = r.feasible.iter().map(|f| f.y).collect();
            if ys != bf.feasible {
                return Err(format!("feasible sets differ\n  solve:       {ys:?}\n  brute force: {:?}", bf.feasible));
            }
            let cost = r.optimum.as_ref().map(|o| o.cost);
            if cost != bf.optimum_cost {
                return Err(format!("optimum cost {cost:?}, brute force {:?}", bf.optimum_cost));
            }
            Ok(())
        }
    }
}

pub fn run(a: VerifyArgs) -> u8 {
    let dim_cap = match crate::dim_cap() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::USAGE;
        }
    };
    let params = SolveParams {
        // exact phases whenever the bound allows it
        l: a.stage_two.l,
        cub: a.stage_two.cub.unwrap_or(CubMode::Dyadic),
        readout: Readout::Exact,
        rotation: if a.stage_two.ideal { RotationMode::Ideal } else { RotationMode::Measured },
        dim_cap,
        ..SolveParams::default()
    };
    let instances: Vec<IpProblem> = match (&a.problem, a.fuzz) {
        (Some(path), _) => match crate::read_problem(path) {
            Ok(p) => vec![p],
            Err(e) => {
                eprintln!("error: {e}");
                return exit::USAGE;
            }
        },
        (None, Some(count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..count).map(|_| random_instance(&mut rng, &RandomSpec::default())).collect()
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let results: Vec<Result<(), String>> = instances.par_iter().map(|p| check(p, &params)).collect();
    let mut mismatches = 0;
    for (i, r) in results.iter().enumerate() {
        if let Err(diff) = r {
            mismatches += 1;
            println!("instance {i}: {diff}");
        }
    }
    println!("{} instance(s), {mismatches} mismatch(es)", instances.len());
    if mismatches == 0 {
        0
    } else {
        exit::MISMATCH
    }
}
