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

mod common;

use common::{full_omega_error, solver_agreement};

use cstomo::bases::{pauli_basis, sud_basis, OperatorBasis};
use cstomo::matcore::{DensityMatrix, HermitianMatrix, C64};
use cstomo::recovery::{
    estimate_fidelity, recover, recover_reference, success, RecoveryResult, SolverOptions,
    SuccessCriterion,
};
use cstomo::rng;
use cstomo::sensing::{measure, sample_omega, MeasurementRecord};
use cstomo::states::random_rank_r_density_with;
use nalgebra::DMatrix;

#[test]
fn admm_agrees_with_reference_solver() {
    let (worst, n, _skipped) = solver_agreement(50);
    assert_eq!(n, 150);
    assert!(worst <= 1e-3, "{worst:e}");
}

#[test]
fn full_basis_recovers_exactly() {
    let worst = full_omega_error();
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn reference_full_basis_matches_direct_expansion() {
    let basis = sud_basis(5).unwrap();
    let mut r = rng::stream(53, &[]);
    let rho = random_rank_r_density_with(5, 2, &mut r).unwrap();
    let omega: Vec<usize> = (0..25).collect();
    let rec = measure(&rho, &basis, &omega).unwrap();
    let mut direct = DMatrix::<C64>::zeros(5, 5);
    for (&a, &b) in omega.iter().zip(rec.values()) {
        direct += basis.element(a).as_dmatrix() * C64::new(b, 0.0);
    }
    let res = recover_reference(&basis, &rec, &SolverOptions::default()).unwrap();
    assert!((res.sigma_star.as_dmatrix() - direct).norm() <= 1e-4);
}

#[test]
fn zero_data_gives_zero_estimate() {
    let basis = sud_basis(4).unwrap();
    let rec = MeasurementRecord::new(basis.kind(), 4, vec![1, 5, 9], vec![0.0; 3]).unwrap();
    for res in [
        recover(&basis, &rec, &SolverOptions::default()).unwrap(),
        recover_reference(&basis, &rec, &SolverOptions::default()).unwrap(),
    ] {
        assert!(res.sigma_star.as_dmatrix().norm() < 1e-10);
    }
}

fn check_certificate(res: &RecoveryResult, opts: &SolverOptions) {
    if res.converged {
        assert!(res.constraint_residual <= opts.constraint_tol);
        assert!(res.nuclear_value <= 1.0 + 1e-4, "nuclear {}", res.nuclear_value);
    }
    let m = res.sigma_star.as_dmatrix();
    assert!((m - m.adjoint()).norm() <= 1e-12 * m.norm().max(1.0));
}

fn pauli_success_rate(basis: &OperatorBasis, m: usize, trials: usize) -> f64 {
    let opts = SolverOptions::default();
    let mut hits = 0;
    for t in 0..trials {
        let mut r = rng::stream(54, &[t as u64]);
        let rho = random_rank_r_density_with(8, 1, &mut r).unwrap();
        let omega = sample_omega(basis.len(), m, &mut r).unwrap();
        let res = recover(basis, &measure(&rho, basis, &omega).unwrap(), &opts).unwrap();
        check_certificate(&res, &opts);
        if res.converged && success(&rho, &res, SuccessCriterion::default()).unwrap() {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

#[test]
fn pauli_d8_rank1_m40() {
    let basis = pauli_basis(3).unwrap();
    let rate = pauli_success_rate(&basis, 40, 200);
    assert!(rate >= 0.9, "success rate {rate}");
    assert_eq!(pauli_success_rate(&basis, 64, 5), 1.0);
}

#[test]
fn psd_variant_stays_feasible() {
    let basis = sud_basis(5).unwrap();
    let mut r = rng::stream(55, &[]);
    let rho = random_rank_r_density_with(5, 1, &mut r).unwrap();
    let omega = sample_omega(25, 14, &mut r).unwrap();
    let rec = measure(&rho, &basis, &omega).unwrap();
    let opts = SolverOptions { psd: true, ..SolverOptions::default() };
    let res = recover(&basis, &rec, &opts).unwrap();
    check_certificate(&res, &opts);
    let min = cstomo::matcore::hermitian_eig(&res.sigma_star).values[0];
    assert!(min >= -1e-9, "{min}");
}

#[test]
fn non_convergence_is_reported_not_raised() {
    let basis = sud_basis(6).unwrap();
    let mut r = rng::stream(56, &[]);
    let rho = random_rank_r_density_with(6, 1, &mut r).unwrap();
    let omega = sample_omega(36, 12, &mut r).unwrap();
    let rec = measure(&rho, &basis, &omega).unwrap();
    let res = recover(&basis, &rec, &SolverOptions { max_iters: 3, ..SolverOptions::default() }).unwrap();
    assert!(!res.converged);
    assert_eq!(res.iterations, 3);
}

#[test]
fn success_rule_examples() {
    let mut r = rng::stream(57, &[]);
    let truth = random_rank_r_density_with(7, 1, &mut r).unwrap();
    let exact = RecoveryResult {
        sigma_star: truth.as_hermitian().clone(),
        iterations: 1,
        primal_residual: 0.0,
        constraint_residual: 0.0,
        nuclear_value: 1.0,
        converged: true,
    };
    assert!(success(&truth, &exact, SuccessCriterion::default()).unwrap());
    assert!(success(&truth, &exact, SuccessCriterion::Frobenius(1e-3)).unwrap());

    let mixed = RecoveryResult {
        sigma_star: HermitianMatrix::identity(7).as_dmatrix().unscale(7.0).pipe(HermitianMatrix::new),
        ..exact.clone()
    };
    let f = estimate_fidelity(&truth, &mixed.sigma_star).unwrap();
    assert!((f - 1.0 / 7.0).abs() < 1e-12);
    assert!(!success(&truth, &mixed, SuccessCriterion::default()).unwrap());

    // Boundary: a pure estimate at fidelity 0.999 (up to rounding) counts.
    let e0 = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
    let theta = 0.999_f64.sqrt().acos();
    let tilted = DensityMatrix::pure(&[C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0)]).unwrap();
    let at = estimate_fidelity(&e0, tilted.as_hermitian()).unwrap();
    assert!((at - 0.999).abs() < 1e-14);
    let boundary = RecoveryResult {
        sigma_star: tilted.as_hermitian().clone(),
        ..exact
    };
    assert_eq!(success(&e0, &boundary, SuccessCriterion::Fidelity(at)).unwrap(), true);
}

trait Pipe: Sized {
    fn pipe<T>(self, f: impl FnOnce(Self) -> cstomo::Result<T>) -> T {
        f(self).unwrap()
    }
}
impl<T> Pipe for T {}
