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
//!
//! Run with `cargo run --release --example su7_benchmark -- [trials] [seed]`.

use cstomo::experiments::run_su7_benchmark;

fn main() -> cstomo::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(42);
    let report = run_su7_benchmark(trials, seed)?;
    println!("state,m,trials,successes,rate,ci95_low,ci95_high,mean_fidelity");
    for c in &report.cases {
        println!(
            "{:?},{},{},{},{:.3},{:.3},{:.3},{:.6}",
            c.state, c.m, c.trials, c.successes, c.rate, c.ci_low, c.ci_high, c.mean_fidelity
        );
    }
    Ok(())
}
