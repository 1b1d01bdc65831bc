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

//! One compressed-sensing reconstruction, solved twice: by ADMM and by the
//! proximal-gradient reference solver.
//!
//! Run with `cargo run --release --example single_recovery -- [d] [m] [seed]`.

use cstomo::bases::sud_basis;
use cstomo::matcore::DensityMatrix;
use cstomo::recovery::{estimate_fidelity, recover, recover_reference, SolverOptions};
use cstomo::rng;
use cstomo::sensing::{measure, sample_omega};
use cstomo::states::random_rank_r_density;

fn main() -> cstomo::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let d = args.first().copied().unwrap_or(7) as usize;
    let m = args.get(1).copied().unwrap_or(30) as usize;
    let seed = args.get(2).copied().unwrap_or(42);

    let basis = sud_basis(d)?;
    let truth: DensityMatrix = random_rank_r_density(d, 1, seed)?;
    let omega = sample_omega(basis.len(), m, &mut rng::stream(seed, &[1]))?;
    let record = measure(&truth, &basis, &omega)?;
    println!("d={d} m={m} of {} settings", basis.len());

    let opts = SolverOptions::default();
    let admm = recover(&basis, &record, &opts)?;
    println!("-- admm\n{}fidelity={:.9}", admm.diagnostics(), estimate_fidelity(&truth, &admm.sigma_star)?);

    let reference = recover_reference(&basis, &record, &opts)?;
    println!(
        "-- reference\n{}fidelity={:.9}",
        reference.diagnostics(),
        estimate_fidelity(&truth, &reference.sigma_star)?
    );

    let gap = admm.sigma_star.as_dmatrix() - reference.sigma_star.as_dmatrix();
    println!("‖σ_admm − σ_ref‖₂ = {:.2e}", gap.norm());
    println!("‖σ_admm − ρ‖₂ = {:.2e}", (admm.sigma_star.as_dmatrix() - truth.as_dmatrix()).norm());
    Ok(())
}
