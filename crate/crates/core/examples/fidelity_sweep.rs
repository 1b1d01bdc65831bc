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

//! Mean fidelity against the number of settings for direct SU(d) sampling
//! and for Pauli sampling on the ancilla, written as CSV plus a plot script.
//!
//! Run with `cargo run --release --example fidelity_sweep -- [d1] [trials] [out_dir]`.

use std::path::PathBuf;

use cstomo::experiments::{emit_results, run_sweep, Strategy, SweepConfig, DEFAULT_SEED};
use cstomo::recovery::{SolverOptions, SuccessCriterion};

fn main() -> cstomo::Result<()> {
    let mut args = std::env::args().skip(1);
    let d1: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);
    let trials: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let out = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let config = SweepConfig {
        d1,
        rank: 1,
        strategies: vec![Strategy::SuDirect, Strategy::AncillaPauli],
        m_values: (1..=d1).map(|k| k * d1).collect(),
        trials,
        master_seed: DEFAULT_SEED,
        criterion: SuccessCriterion::default(),
        solver: SolverOptions::default(),
        threads: None,
    };
    let result = run_sweep(&config)?;
    println!("m,su_direct,ancilla_pauli");
    for &m in &config.m_values {
        let su = result.row(Strategy::SuDirect, m).map_or(f64::NAN, |r| r.mean_fidelity);
        let anc = result.row(Strategy::AncillaPauli, m).map_or(f64::NAN, |r| r.mean_fidelity);
        println!("{m},{su:.6},{anc:.6}");
    }
    let files = emit_results(&result.rows, &out, "fidelity_sweep")?;
    println!("wrote {} and {}", files.csv.display(), files.plot_script.display());
    Ok(())
}
