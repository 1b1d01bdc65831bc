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

//! Nuclear-norm recovery: `min ‖σ‖₁` subject to `Tr(w_a σ) = b_a` for `a ∈ Ω`.
//!
//! The variable ranges over Hermitian matrices. Because every `w_a` is
//! Hermitian and every `b_a` real, nothing is lost by this restriction,
//! and singular value thresholding becomes eigenvalue thresholding.
//!
//! [`recover`] is the production ADMM solver. [`recover_reference`] is an
//! independent accelerated proximal-gradient solver on the penalized form,
//! used to cross-check it.

mod admm;
mod reference;

pub use admm::recover;
pub use reference::recover_reference;

use crate::error::Result;
use crate::matcore::{fidelity, DensityMatrix, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// ADMM penalty; the thresholding step uses `1/penalty`.
    pub penalty: f64,
    pub max_iters: usize,
    pub eps_abs: f64,
    pub eps_rel: f64,
    /// Bound on `‖A(σ*) − b‖₂` required to report convergence.
    pub constraint_tol: f64,
    /// Residual balancing: rescale the penalty when the primal and dual
    /// residuals drift apart by more than a factor of ten.
    pub adaptive_penalty: bool,
    /// Restrict to positive semidefinite σ. This is an extension: the
    /// recovery program itself has no positivity constraint.
    pub psd: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            penalty: 1.0,
            max_iters: 5000,
            eps_abs: 1e-7,
            eps_rel: 1e-6,
            constraint_tol: 1e-6,
            adaptive_penalty: true,
            psd: false,
        }
    }
}

/// Solver output and diagnostics.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub sigma_star: HermitianMatrix,
    pub iterations: usize,
    /// Consensus residual `‖X − Z‖₂` at exit (ADMM) or last step size (reference).
    pub primal_residual: f64,
    /// `‖A(σ*) − b‖₂`.
    pub constraint_residual: f64,
    /// `‖σ*‖₁`.
    pub nuclear_value: f64,
    pub converged: bool,
}

impl RecoveryResult {
    /// `key=value` diagnostics block.
    pub fn diagnostics(&self) -> String {
        format!(
            "converged={}\niterations={}\nprimal_residual={:e}\nconstraint_residual={:e}\nnuclear_value={}\n",
            self.converged,
            self.iterations,
            self.primal_residual,
            self.constraint_residual,
            self.nuclear_value
        )
    }
}

/// Rule for counting a recovery as exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuccessCriterion {
    /// Fidelity between truth and the clamped, renormalized estimate is at least the threshold.
    Fidelity(f64),
    /// `‖truth − σ*‖₂` is at most the threshold.
    Frobenius(f64),
}

impl Default for SuccessCriterion {
    fn default() -> Self {
        SuccessCriterion::Fidelity(0.999)
    }
}

impl SuccessCriterion {
    pub fn describe(&self) -> String {
        match self {
            SuccessCriterion::Fidelity(t) => format!("fidelity>={t}"),
            SuccessCriterion::Frobenius(t) => format!("frobenius<={t}"),
        }
    }
}

/// Fidelity of the truth with the estimate projected onto the state space.
/// An estimate with no positive spectrum scores 0.
pub fn estimate_fidelity(truth: &DensityMatrix, estimate: &HermitianMatrix) -> Result<f64> {
    match DensityMatrix::from_estimate(estimate, false) {
        Ok(sigma) => fidelity(truth, &sigma),
        Err(_) => Ok(0.0),
    }
}

pub fn success(truth: &DensityMatrix, result: &RecoveryResult, criterion: SuccessCriterion) -> Result<bool> {
    Ok(match criterion {
        SuccessCriterion::Fidelity(t) => estimate_fidelity(truth, &result.sigma_star)? >= t,
        SuccessCriterion::Frobenius(t) => {
            (truth.as_dmatrix() - result.sigma_star.as_dmatrix()).norm() <= t
        }
    })
}
