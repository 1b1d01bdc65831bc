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

use nalgebra::DMatrix;

use super::{RecoveryResult, SolverOptions};
use crate::bases::OperatorBasis;
use crate::error::{Error, Result};
use crate::matcore::{eig_of, hermitian_part, HermitianMatrix, C64};
use crate::sensing::{adjoint_into, apply, MeasurementRecord};

const ADAPT_EVERY: usize = 10;
const ADAPT_UNTIL: usize = 1000;

/// ADMM on the split `X = Z`:
///
/// * `X ← Z − U − A†(A(Z − U) − b)`: exact projection onto the affine
///   constraint set, since the selected basis elements are orthonormal;
/// * `Z ← prox_{‖·‖₁/ρ}(X + U)`: eigenvalue soft-thresholding at `1/ρ`;
/// * `U ← U + X − Z`.
///
/// With `adaptive_penalty`, the penalty is rebalanced every
/// `ADAPT_EVERY` iterations and frozen after `ADAPT_UNTIL`.
///
/// Stops when the primal and dual residuals fall under the usual
/// `√n·eps_abs + eps_rel·scale` bounds and `Z` satisfies the constraints
/// to `constraint_tol`. Hitting `max_iters` returns the last `Z` with
/// `converged = false`.
pub fn recover(
    basis: &OperatorBasis,
    record: &MeasurementRecord,
    opts: &SolverOptions,
) -> Result<RecoveryResult> {
    record.check_basis(basis)?;
    validate(opts)?;
    let d = basis.dim();
    let omega = record.omega();
    let b = record.values();
    let sqrt_n = d as f64;

    let mut rho = opts.penalty;
    let mut z = DMatrix::<C64>::zeros(d, d);
    let mut u = DMatrix::<C64>::zeros(d, d);
    let mut nuclear_value = 0.0;
    let mut primal = f64::INFINITY;
    let mut constraint = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    let mut coeffs = vec![0.0; omega.len()];

    while iterations < opts.max_iters {
        iterations += 1;

        // X-update
        let mut x = &z - &u;
        for ((c, ax), &bk) in coeffs.iter_mut().zip(apply(basis, omega, &x)).zip(b) {
            *c = bk - ax;
        }
        adjoint_into(basis, omega, &coeffs, &mut x);

        // Z-update
        let z_old = std::mem::replace(&mut z, hermitian_part(&(&x + &u)));
        let (next, value) = threshold(z, 1.0 / rho, opts.psd);
        z = next;
        nuclear_value = value;

        // dual update
        let diff = &x - &z;
        u += &diff;

        primal = diff.norm();
        let dual = rho * (&z - &z_old).norm();
        let eps_pri = sqrt_n * opts.eps_abs + opts.eps_rel * x.norm().max(z.norm());
        let eps_dual = sqrt_n * opts.eps_abs + opts.eps_rel * rho * u.norm();
        if primal <= eps_pri && dual <= eps_dual {
            constraint = constraint_residual(basis, omega, b, &z);
            if constraint <= opts.constraint_tol {
                converged = true;
                break;
            }
        }

        if opts.adaptive_penalty && iterations % ADAPT_EVERY == 0 && iterations <= ADAPT_UNTIL {
            if primal > 10.0 * dual {
                rho *= 2.0;
                u.unscale_mut(2.0);
            } else if dual > 10.0 * primal {
                rho /= 2.0;
                u.scale_mut(2.0);
            }
        }
    }
    if !converged {
        constraint = constraint_residual(basis, omega, b, &z);
    }
    Ok(RecoveryResult {
        sigma_star: HermitianMatrix::from_trusted(z),
        iterations,
        primal_residual: primal,
        constraint_residual: constraint,
        nuclear_value,
        converged,
    })
}

pub(super) fn validate(opts: &SolverOptions) -> Result<()> {
    let positive = [opts.penalty, opts.eps_abs, opts.eps_rel, opts.constraint_tol];
    if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || opts.max_iters == 0 {
        return Err(Error::invalid("solver options must be positive"));
    }
    Ok(())
}

pub(super) fn constraint_residual(
    basis: &OperatorBasis,
    omega: &[usize],
    b: &[f64],
    x: &DMatrix<C64>,
) -> f64 {
    apply(basis, omega, x)
        .iter()
        .zip(b)
        .map(|(ax, bk)| (ax - bk) * (ax - bk))
        .sum::<f64>()
        .sqrt()
}

/// Soft-thresholds the spectrum of a Hermitian matrix at `tau`. Returns the
/// result and its nuclear norm.
pub(super) fn threshold(m: DMatrix<C64>, tau: f64, psd: bool) -> (DMatrix<C64>, f64) {
    let d = m.nrows();
    let eig = eig_of(m);
    let shrink = |l: f64| {
        if psd {
            (l - tau).max(0.0)
        } else {
            l.signum() * (l.abs() - tau).max(0.0)
        }
    };
    let kept: Vec<(usize, f64)> = eig
        .values
        .iter()
        .enumerate()
        .map(|(k, &l)| (k, shrink(l)))
        .filter(|&(_, s)| s != 0.0)
        .collect();
    if kept.is_empty() {
        return (DMatrix::zeros(d, d), 0.0);
    }
    let mut vecs = DMatrix::<C64>::zeros(d, kept.len());
    let mut scaled = DMatrix::<C64>::zeros(d, kept.len());
    for (col, &(k, s)) in kept.iter().enumerate() {
        vecs.set_column(col, &eig.vectors.column(k));
        scaled.set_column(col, &eig.vectors.column(k).scale(s));
    }
    let out = scaled * vecs.adjoint();
    let nuclear = kept.iter().map(|k| k.1.abs()).sum();
    (hermitian_part(&out), nuclear)
}
