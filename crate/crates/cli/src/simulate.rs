use ordinal_seasonality::{run_ensemble, run_ensemble_with_jobs, EnsembleConfig, SimulationReport};
use serde::{Deserialize, Serialize};

use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub seed: u64,
    pub length: usize,
    pub replications: usize,
    /// One entry per requested Hurst exponent, in the order given.
    pub runs: Vec<SimulationReport>,
}

pub fn simulate(args: &SimulateArgs) -> CliResult<SimulateOutput> {
    if !(3..=10).contains(&args.d) {
        return Err(CliError::Usage(format!("--d {} outside 3..=10", args.d)));
    }
    if let Some(n) = args.average_weeks {
        if n.is_nan() || n < 1.0 {
            return Err(CliError::Usage(format!("--average-weeks {n} must be at least 1")));
        }
    }
    let mut runs = Vec::with_capacity(args.hurst.len());
    for &h in &args.hurst {
        let mut cfg = EnsembleConfig::new(h, args.length, args.reps, args.seed);
        cfg.base.method = args.generator.into();
        cfg.order = args.d;
        cfg.alpha = args.alpha;
        cfg.average_weeks = args.average_weeks;
        log::info!("simulating H={h}: {} x {}", args.reps, args.length);
        let report = match args.jobs {
            Some(jobs) => run_ensemble_with_jobs(&cfg, jobs),
            None => run_ensemble(&cfg),
        }?;
        runs.push(report);
    }
    Ok(SimulateOutput {
        seed: args.seed,
        length: args.length,
        replications: args.reps,
        runs,
    })
}
