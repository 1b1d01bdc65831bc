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

//! Swaps a qutrit into a two-qubit ancilla and checks the dilation
//! Hamiltonian that implements the swap.
//!
//! Run with `cargo run --example ancilla_embedding`.

use cstomo::matcore::{ComplexMatrix, DensityMatrix, C64};
use cstomo::states::{build_swap_w, dilation_check, embed, extract, plan_embedding, random_rank_r_density};

fn main() -> cstomo::Result<()> {
    let plan = plan_embedding(3)?;
    println!("system d1={} -> ancilla d2={} ({} qubits)", plan.d1, plan.d2, plan.qubits());

    let rho = random_rank_r_density(3, 1, 7)?;
    let w = build_swap_w(&plan);

    // rho ⊗ |0⟩⟨0| on system ⊗ ancilla.
    let mut zero = ComplexMatrix::zeros(plan.d2, plan.d2).into_dmatrix();
    zero[(0, 0)] = C64::new(1.0, 0.0);
    let joint = ComplexMatrix::new(rho.as_dmatrix().kronecker(&zero))?;
    let after = w.matmul(&joint)?.matmul(&w.adjoint())?;

    let embedded = embed(&rho, &plan)?;
    let mut sys_zero = ComplexMatrix::zeros(plan.d1, plan.d1).into_dmatrix();
    sys_zero[(0, 0)] = C64::new(1.0, 0.0);
    let expected = sys_zero.kronecker(embedded.as_dmatrix());
    println!(
        "‖W(ρ⊗|0⟩⟨0|)W† − |0⟩⟨0|⊗ρ'‖₂ = {:.2e}",
        (after.as_dmatrix() - expected).norm()
    );

    let back: DensityMatrix = extract(&embedded, plan.d1)?.state;
    println!("round trip error = {:.2e}", (back.as_dmatrix() - rho.as_dmatrix()).norm());

    let report = dilation_check(&w, &[0.3, 1.0, std::f64::consts::FRAC_PI_2])?;
    println!("‖WW† − I‖₂ = {:.2e}", report.unitarity);
    println!("‖H² − I‖₂ = {:.2e}", report.h_squared);
    println!("‖exp(−iHπ/2) + iH‖₂ = {:.2e}", report.quarter_period);
    for (t, r) in &report.series {
        println!("t={t:.4}: ‖exp(−iHt) − (cos t − i sin t H)‖₂ = {r:.2e}");
    }
    Ok(())
}
