// Copyright 2026 The cstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Success rates for the two reference states under SU(7) sampling.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::{run_trial_with_state, Strategy, StrategySetup};
use crate::error::{Error, Result};
use crate::recovery::{SolverOptions, SuccessCriterion};
use crate::rng;
use crate::states::{benchmark_state, BenchmarkState};

const Z_95: f64 = 1.959_963_984_540_054;

/// Settings per case: the two headline configurations and the coherent
/// state at the smaller budget for contrast.
pub const SU7_CASES: [(BenchmarkState, usize); 3] =
    [(BenchmarkState::Rho1, 46), (BenchmarkState::Rho2, 28), (BenchmarkState::Rho1, 28)];

#[derive(Debug, Clone, PartialEq)]
pub struct Su7Case {
    pub state: BenchmarkState,
    pub m: usize,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    /// Wilson 95% interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su7Report {
    pub master_seed: u64,
    pub criterion: SuccessCriterion,
    pub cases: Vec<Su7Case>,
}

impl Su7Report {
    pub fn case(&self, state: BenchmarkState, m: usize) -> Option<&Su7Case> {
        self.cases.iter().find(|c| c.state == state && c.m == m)
    }

    pub fn to_key_values(&self) -> String {
        let mut out = format!(
            "seed={}\ncriterion={}\n",
            self.master_seed,
            self.criterion.describe()
        );
        for c in &self.cases {
            let name = match c.state {
                BenchmarkState::Rho1 => "rho1",
                BenchmarkState::Rho2 => "rho2",
            };
            let key = format!("{name}_m{}", c.m);
            let _ = write!(
                out,
                "{key}.trials={}\n{key}.successes={}\n{key}.success_rate={}\n{key}.ci95_low={}\n{key}.ci95_high={}\n{key}.mean_fidelity={}\n",
                c.trials, c.successes, c.rate, c.ci_low, c.ci_high, c.mean_fidelity
            );
        }
        out
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Runs the default cases; needs at least 100 trials.
pub fn run_su7_benchmark(trials: usize, master_seed: u64) -> Result<Su7Report> {
    if trials < 100 {
        return Err(Error::invalid(format!("benchmark needs at least 100 trials, got {trials}")));
    }
    run_su7_cases(&SU7_CASES, trials, master_seed, SuccessCriterion::default(), &SolverOptions::default())
}

pub fn run_su7_cases(
    cases: &[(BenchmarkState, usize)],
    trials: usize,
    master_seed: u64,
    criterion: SuccessCriterion,
    opts: &SolverOptions,
) -> Result<Su7Report> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let setup = StrategySetup::new(Strategy::SuDirect, 7)?;
    let mut out = Vec::with_capacity(cases.len());
    for &(state, m) in cases {
        let truth = benchmark_state(state, 7)?;
        let tag = match state {
            BenchmarkState::Rho1 => 1,
            BenchmarkState::Rho2 => 2,
        };
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| {
                let seed = rng::derive_seed(master_seed, &[tag, m as u64, t as u64]);
                run_trial_with_state(&setup, &truth, m, seed, criterion, opts)
            })
            .collect::<Result<Vec<_>>>()?;
        let successes = outcomes.iter().filter(|o| o.success).count();
        let fidelities: Vec<f64> = outcomes.iter().map(|o| o.fidelity).collect();
        let (ci_low, ci_high) = wilson_interval(successes, trials, Z_95);
        out.push(Su7Case {
            state,
            m,
            trials,
            successes,
            rate: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            mean_fidelity: super::mean_std(&fidelities).0,
        });
    }
    Ok(Su7Report {
        master_seed,
        criterion,
        cases: out,
    })
}
