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

//! Sweep configuration files and the reproduction presets.
//!
//! The file format is flat `key=value` text, one pair per line, `#` starts a
//! comment. Recognized keys:
//!
//! | key | value | default |
//! |-----|-------|---------|
//! | `d1` | system dimension | required |
//! | `rank` | state rank | 1 |
//! | `strategies` | comma list of `su_direct`, `ancilla_pauli` | both |
//! | `m_values` | comma list of integers | required |
//! | `trials` | trials per cell | 100 |
//! | `seed` | master seed | 42 |
//! | `criterion` | `fidelity:<t>` or `frobenius:<t>` | `fidelity:0.999` |
//! | `penalty`, `max_iters`, `eps_abs`, `eps_rel`, `constraint_tol` | solver settings | solver defaults |
//! | `adaptive_penalty`, `psd` | `true`/`false` | solver defaults |
//! | `threads` | worker count | rayon default |

use super::{Strategy, SweepConfig};
use crate::error::{Error, Result};
use crate::recovery::{SolverOptions, SuccessCriterion};

pub const DEFAULT_SEED: u64 = 42;

/// Multiples of `d1 = 31` used by the desk-scale second-figure replica.
pub const FIG2_ACCEPTANCE_GRID: [usize; 11] = [1, 2, 3, 4, 5, 6, 8, 12, 16, 24, 31];

/// `d1 = 15`, rank 1, `m ∈ {15, 30, …, 225}`.
pub fn fig1_config(trials: usize, seed: u64) -> SweepConfig {
    preset(15, (1..=15).collect(), trials, seed)
}

/// `d1 = 31`, rank 1, `m ∈ {31, 62, …, 961}`.
pub fn fig2_config(trials: usize, seed: u64) -> SweepConfig {
    preset(31, (1..=31).collect(), trials, seed)
}

fn preset(d1: usize, multiples: Vec<usize>, trials: usize, seed: u64) -> SweepConfig {
    SweepConfig {
        d1,
        rank: 1,
        strategies: vec![Strategy::SuDirect, Strategy::AncillaPauli],
        m_values: multiples.into_iter().map(|k| k * d1).collect(),
        trials,
        master_seed: seed,
        criterion: SuccessCriterion::default(),
        solver: SolverOptions::default(),
        threads: None,
    }
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut d1 = None;
    let mut m_values = None;
    let mut config = SweepConfig {
        d1: 0,
        rank: 1,
        strategies: vec![Strategy::SuDirect, Strategy::AncillaPauli],
        m_values: Vec::new(),
        trials: 100,
        master_seed: DEFAULT_SEED,
        criterion: SuccessCriterion::default(),
        solver: SolverOptions::default(),
        threads: None,
    };
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, found '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || err(format!("bad value for {key}: '{value}'"));
        match key {
            "d1" => d1 = Some(value.parse().map_err(|_| bad())?),
            "rank" => config.rank = value.parse().map_err(|_| bad())?,
            "trials" => config.trials = value.parse().map_err(|_| bad())?,
            "seed" => config.master_seed = value.parse().map_err(|_| bad())?,
            "threads" => config.threads = Some(value.parse().map_err(|_| bad())?),
            "strategies" => {
                config.strategies = value
                    .split(',')
                    .map(|s| Strategy::parse(s.trim()).map_err(|_| bad()))
                    .collect::<Result<_>>()?
            }
            "m_values" => {
                m_values = Some(
                    value
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| bad()))
                        .collect::<Result<Vec<usize>>>()?,
                )
            }
            "criterion" => config.criterion = parse_criterion(value).ok_or_else(bad)?,
            "penalty" => config.solver.penalty = value.parse().map_err(|_| bad())?,
            "max_iters" => config.solver.max_iters = value.parse().map_err(|_| bad())?,
            "eps_abs" => config.solver.eps_abs = value.parse().map_err(|_| bad())?,
            "eps_rel" => config.solver.eps_rel = value.parse().map_err(|_| bad())?,
            "constraint_tol" => config.solver.constraint_tol = value.parse().map_err(|_| bad())?,
            "adaptive_penalty" => config.solver.adaptive_penalty = value.parse().map_err(|_| bad())?,
            "psd" => config.solver.psd = value.parse().map_err(|_| bad())?,
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    config.d1 = d1.ok_or_else(|| Error::invalid("config is missing d1"))?;
    config.m_values = m_values.ok_or_else(|| Error::invalid("config is missing m_values"))?;
    config.validate()?;
    Ok(config)
}

pub(crate) fn parse_criterion(value: &str) -> Option<SuccessCriterion> {
    let (kind, threshold) = value.split_once(':')?;
    let t: f64 = threshold.parse().ok()?;
    match kind {
        "fidelity" => Some(SuccessCriterion::Fidelity(t)),
        "frobenius" => Some(SuccessCriterion::Frobenius(t)),
        _ => None,
    }
}

/// Inverse of [`parse_config`], used for manifests.
pub fn config_to_text(config: &SweepConfig) -> String {
    let join = |v: &[usize]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
    let criterion = match config.criterion {
        SuccessCriterion::Fidelity(t) => format!("fidelity:{t}"),
        SuccessCriterion::Frobenius(t) => format!("frobenius:{t}"),
    };
    let mut out = format!(
        "d1={}\nrank={}\nstrategies={}\nm_values={}\ntrials={}\nseed={}\ncriterion={}\n",
        config.d1,
        config.rank,
        config.strategies.iter().map(|s| s.name()).collect::<Vec<_>>().join(","),
        join(&config.m_values),
        config.trials,
        config.master_seed,
        criterion
    );
    let s = &config.solver;
    out.push_str(&format!(
        "penalty={}\nmax_iters={}\neps_abs={}\neps_rel={}\nconstraint_tol={}\nadaptive_penalty={}\npsd={}\n",
        s.penalty, s.max_iters, s.eps_abs, s.eps_rel, s.constraint_tol, s.adaptive_penalty, s.psd
    ));
    out
}
