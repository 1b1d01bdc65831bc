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

//! Monte Carlo comparison of direct SU(d) measurement against the ancilla
//! swap strategy with Pauli measurements.
//!
//! A sweep is a grid of `(strategy, m)` cells, each run for a number of
//! independent trials. Each trial draws a random state, samples `m`
//! settings, recovers and scores the estimate. Trials are independent work
//! items spread over a rayon pool. The truth state of a trial depends only
//! on `(master_seed, trial)`, so every cell sees the same states. The
//! settings depend on `(master_seed, strategy, m, trial)`. Results are
//! gathered in grid order, which keeps them identical across thread counts.

mod config;
mod output;
mod su7;

pub use config::{
    config_to_text as config_text, fig1_config, fig2_config, parse_config, DEFAULT_SEED,
    FIG2_ACCEPTANCE_GRID,
};
pub use output::{emit_results, parse_rows_csv, rows_csv, trials_csv, OutputFiles};
pub use su7::{run_su7_benchmark, wilson_interval, Su7Case, Su7Report};

use rayon::prelude::*;

use crate::bases::{pauli_basis, sud_basis, OperatorBasis};
use crate::error::{Error, Result};
use crate::matcore::DensityMatrix;
use crate::recovery::{estimate_fidelity, recover, SolverOptions, SuccessCriterion};
use crate::rng;
use crate::sensing::{measure, sample_omega};
use crate::states::{embed, extract_with, plan_embedding, random_rank_r_density_with, EmbeddingPlan};
use crate::tolerances::Tolerances;

const STATE_STREAM: u64 = 0x5354_4154;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Sample generalized Gell-Mann observables of the system itself.
    SuDirect,
    /// Swap the state into a power-of-two ancilla and sample Pauli words there.
    AncillaPauli,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::SuDirect => "su_direct",
            Strategy::AncillaPauli => "ancilla_pauli",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "su_direct" => Ok(Strategy::SuDirect),
            "ancilla_pauli" => Ok(Strategy::AncillaPauli),
            other => Err(Error::invalid(format!("unknown strategy '{other}'"))),
        }
    }

    fn tag(self) -> u64 {
        match self {
            Strategy::SuDirect => 1,
            Strategy::AncillaPauli => 2,
        }
    }
}

/// Basis for one strategy at system dimension `d1`.
#[derive(Debug, Clone)]
pub struct StrategySetup {
    pub strategy: Strategy,
    pub d1: usize,
    pub plan: Option<EmbeddingPlan>,
    pub basis: OperatorBasis,
}

impl StrategySetup {
    pub fn new(strategy: Strategy, d1: usize) -> Result<Self> {
        match strategy {
            Strategy::SuDirect => Ok(StrategySetup {
                strategy,
                d1,
                plan: None,
                basis: sud_basis(d1)?,
            }),
            Strategy::AncillaPauli => {
                let plan = plan_embedding(d1)?;
                Ok(StrategySetup {
                    strategy,
                    d1,
                    plan: Some(plan),
                    basis: pauli_basis(plan.qubits())?,
                })
            }
        }
    }

    /// Number of available settings, `d²` of the measured space.
    pub fn pool(&self) -> usize {
        self.basis.len()
    }
}

/// Per-trial outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub strategy: Strategy,
    pub m: usize,
    pub trial: usize,
    /// Fidelity in the measured space (`d2` for the ancilla strategy).
    pub fidelity: f64,
    /// Fidelity after cutting the system block out of the ancilla estimate;
    /// equal to `fidelity` for direct measurement.
    pub fidelity_system: f64,
    /// Frobenius mass of the ancilla estimate outside the system block.
    pub leaked: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Converged and meeting the success criterion.
    pub success: bool,
}

/// Runs one trial with an explicit state.
pub fn run_trial_with_state(
    setup: &StrategySetup,
    truth: &DensityMatrix,
    m: usize,
    sampling_seed: u64,
    criterion: SuccessCriterion,
    opts: &SolverOptions,
) -> Result<TrialOutcome> {
    let mut rng = rng::from_seed(sampling_seed);
    let measured_truth = match &setup.plan {
        Some(plan) => embed(truth, plan)?,
        None => truth.clone(),
    };
    let omega = sample_omega(setup.pool(), m, &mut rng)?;
    let record = measure(&measured_truth, &setup.basis, &omega)?;
    let result = recover(&setup.basis, &record, opts)?;
    let fidelity = estimate_fidelity(&measured_truth, &result.sigma_star)?;

    let (fidelity_system, leaked) = match &setup.plan {
        None => (fidelity, 0.0),
        Some(plan) => match DensityMatrix::from_estimate(&result.sigma_star, false) {
            Ok(estimate) => {
                let no_limit = Tolerances {
                    leakage: f64::INFINITY,
                    ..Tolerances::DEFAULT
                };
                match extract_with(&estimate, plan.d1, &no_limit) {
                    Ok(cut) => (crate::matcore::fidelity(truth, &cut.state)?, cut.leaked),
                    // all weight outside the system block
                    Err(_) => (0.0, estimate.as_dmatrix().norm()),
                }
            }
            Err(_) => (0.0, 0.0),
        },
    };
    let passes = match criterion {
        SuccessCriterion::Fidelity(t) => fidelity >= t,
        SuccessCriterion::Frobenius(t) => {
            (measured_truth.as_dmatrix() - result.sigma_star.as_dmatrix()).norm() <= t
        }
    };
    Ok(TrialOutcome {
        strategy: setup.strategy,
        m,
        trial: 0,
        fidelity,
        fidelity_system,
        leaked,
        converged: result.converged,
        iterations: result.iterations,
        success: result.converged && passes,
    })
}

/// Runs trial `trial` of cell `(strategy, m)` under `master_seed`.
pub fn run_trial(
    setup: &StrategySetup,
    rank: usize,
    m: usize,
    master_seed: u64,
    trial: usize,
    criterion: SuccessCriterion,
    opts: &SolverOptions,
) -> Result<TrialOutcome> {
    let mut state_rng = rng::stream(master_seed, &[STATE_STREAM, trial as u64]);
    let truth = random_rank_r_density_with(setup.d1, rank, &mut state_rng)?;
    let sampling_seed = rng::derive_seed(master_seed, &[setup.strategy.tag(), m as u64, trial as u64]);
    let mut outcome = run_trial_with_state(setup, &truth, m, sampling_seed, criterion, opts)?;
    outcome.trial = trial;
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub d1: usize,
    pub rank: usize,
    pub strategies: Vec<Strategy>,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub criterion: SuccessCriterion,
    pub solver: SolverOptions,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.rank == 0 || self.rank > self.d1 {
            return Err(Error::invalid(format!("rank {} must lie in 1..={}", self.rank, self.d1)));
        }
        if self.strategies.is_empty() || self.m_values.is_empty() {
            return Err(Error::invalid("sweep needs at least one strategy and one m"));
        }
        if self.d1 < 2 {
            return Err(Error::invalid("d1 must be at least 2"));
        }
        for &s in &self.strategies {
            let pool = match s {
                Strategy::SuDirect => self.d1 * self.d1,
                Strategy::AncillaPauli => self.d1.next_power_of_two().pow(2),
            };
            if let Some(&m) = self.m_values.iter().find(|&&m| m == 0 || m > pool) {
                return Err(Error::invalid(format!(
                    "m = {m} outside 1..={pool} for {}",
                    s.name()
                )));
            }
        }
        Ok(())
    }
}

/// Aggregate over the trials of one `(strategy, m)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub strategy: Strategy,
    pub m: usize,
    pub trials: usize,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by `(strategy, m)`.
    pub rows: Vec<SweepRow>,
    /// Same cells, aggregating `fidelity_system`.
    pub system_rows: Vec<SweepRow>,
    /// Every trial, in `(strategy, m, trial)` order.
    pub trials: Vec<TrialOutcome>,
}

impl SweepResult {
    pub fn row(&self, strategy: Strategy, m: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.strategy == strategy && r.m == m)
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::ResourceLimit(e.to_string()))?;
            pool.install(|| sweep_inner(config))
        }
        None => sweep_inner(config),
    }
}

fn sweep_inner(config: &SweepConfig) -> Result<SweepResult> {
    let mut strategies = config.strategies.clone();
    strategies.sort();
    strategies.dedup();
    let mut m_values = config.m_values.clone();
    m_values.sort_unstable();
    m_values.dedup();

    let setups = strategies
        .iter()
        .map(|&s| StrategySetup::new(s, config.d1))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize, usize)> = (0..setups.len())
        .flat_map(|s| {
            m_values
                .iter()
                .flat_map(move |&m| (0..config.trials).map(move |t| (s, m, t)))
        })
        .collect();
    let trials = cells
        .par_iter()
        .map(|&(s, m, t)| {
            run_trial(
                &setups[s],
                config.rank,
                m,
                config.master_seed,
                t,
                config.criterion,
                &config.solver,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = aggregate(&trials, config.trials, |o| o.fidelity);
    let system_rows = aggregate(&trials, config.trials, |o| o.fidelity_system);
    Ok(SweepResult {
        rows,
        system_rows,
        trials,
    })
}

fn aggregate(trials: &[TrialOutcome], per_cell: usize, value: impl Fn(&TrialOutcome) -> f64) -> Vec<SweepRow> {
    trials
        .chunks(per_cell)
        .map(|cell| {
            let values: Vec<f64> = cell.iter().map(&value).collect();
            let (mean, std) = mean_std(&values);
            let successes = cell.iter().filter(|o| o.success).count();
            SweepRow {
                strategy: cell[0].strategy,
                m: cell[0].m,
                trials: cell.len(),
                mean_fidelity: mean,
                std_fidelity: std,
                success_rate: successes as f64 / cell.len() as f64,
            }
        })
        .collect()
}

/// Mean and sample standard deviation, with Neumaier-compensated sums.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1) as f64;
    (mean, var.sqrt())
}

fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
