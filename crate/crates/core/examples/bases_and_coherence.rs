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

//! Builds both operator bases and prints coherence numbers for a few states.
//!
//! Run with `cargo run --example bases_and_coherence`.

use cstomo::bases::{coherence, coherence_nu1, pauli_basis, sud_basis, sud_pure_bound};
use cstomo::states::{benchmark_state, random_rank_r_density, BenchmarkState};

fn main() -> cstomo::Result<()> {
    println!("basis,dim,elements,orthonormality_residual,nu1");
    for n in 1..=4 {
        let b = pauli_basis(n)?;
        let (nu1, _) = coherence_nu1(&b);
        println!("pauli,{},{},{:.2e},{nu1}", b.dim(), b.len(), b.orthonormality_residual());
    }
    for d in [3, 5, 7, 15] {
        let b = sud_basis(d)?;
        let (nu1, _) = coherence_nu1(&b);
        println!("sud,{d},{},{:.2e},{nu1}", b.len(), b.orthonormality_residual());
    }

    let su7 = sud_basis(7)?;
    for (name, which) in [("rho1", BenchmarkState::Rho1), ("rho2", BenchmarkState::Rho2)] {
        let rho = benchmark_state(which, 7)?;
        let report = coherence(&su7, &rho)?;
        println!(
            "\n{name} in SU(7): nu1={} nu2={:.6} nu={:.6} (pure bound {:.6})",
            report.nu1,
            report.nu2,
            report.nu,
            sud_pure_bound(&rho)?
        );
    }

    // Pauli nu2 stays at or below one for random states.
    let pauli = pauli_basis(3)?;
    let worst = (0..20)
        .map(|seed| {
            let rho = random_rank_r_density(8, 2, seed)?;
            Ok(coherence(&pauli, &rho)?.nu2)
        })
        .collect::<cstomo::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("largest Pauli nu2 over 20 rank-2 states at d=8: {worst:.6}");
    Ok(())
}
