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

//! Independent oracles and property checks shared by the integration
//! targets. Nothing here calls the routine it is checking.

#![allow(dead_code)]

use cstomo::bases::{coherence_nu2, pauli_basis, sud_basis, sud_pure_bound, OperatorBasis};
use cstomo::experiments::{rows_csv, run_sweep, Strategy, SweepConfig};
use cstomo::matcore::{
    fidelity, frobenius_norm, hermitian_eig, nuclear_norm, operator_norm, DensityMatrix,
    HermitianMatrix, C64,
};
use cstomo::recovery::{SolverOptions, SuccessCriterion};
use cstomo::rng::{self, StreamRng};
use cstomo::recovery::{recover, recover_reference};
use cstomo::sensing::{measure, sample_omega};
use cstomo::states::{build_swap_w, embed, random_rank_r_density_with, EmbeddingPlan};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub type Check = Result<String, String>;

pub fn gaussian(rng: &mut StreamRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut StreamRng) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(d: usize, rng: &mut StreamRng) -> DMatrix<C64> {
    let g = ginibre(d, d, rng);
    (&g + g.adjoint()).unscale(2.0)
}

/// Haar unitary from the QR factorization of a Ginibre matrix with the
/// phases of R's diagonal absorbed into Q.
pub fn haar_unitary(d: usize, rng: &mut StreamRng) -> DMatrix<C64> {
    let qr = ginibre(d, d, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let phase = r[(k, k)] / r[(k, k)].norm();
        q.column_mut(k).apply(|z| *z *= phase);
    }
    q
}

/// Nuclear norm through nalgebra's SVD.
pub fn svd_nuclear(x: &DMatrix<C64>) -> f64 {
    x.clone().svd(false, false).singular_values.sum()
}

/// Number of eigenvalues of Hermitian `a` strictly below `x`, from the
/// inertia of an LDLᴴ factorization of `a − xI` (Sylvester's law).
pub fn count_below(a: &DMatrix<C64>, x: f64) -> usize {
    let n = a.nrows();
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] -= C64::new(x, 0.0);
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = m[(k, k)].re;
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let factor = m[(i, k)] / pivot;
            for j in k + 1..n {
                let update = factor * m[(k, j)];
                m[(i, j)] -= update;
            }
        }
    }
    negatives
}

/// Eigenvalues by bisection on the inertia count, ascending.
pub fn bisection_eigenvalues(a: &DMatrix<C64>) -> Vec<f64> {
    let n = a.nrows();
    let bound = a.iter().map(|z| z.norm()).sum::<f64>() + 1.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(a, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-14 * bound {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Generalized Gell-Mann matrices with unit Frobenius norm, built from the
/// textbook formulas, identity first.
pub fn gell_mann(d: usize) -> Vec<DMatrix<C64>> {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = vec![DMatrix::<C64>::identity(d, d).unscale((d as f64).sqrt())];
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = DMatrix::zeros(d, d);
            sym[(j, k)] = one * s;
            sym[(k, j)] = one * s;
            out.push(sym);
            let mut anti = DMatrix::zeros(d, d);
            anti[(j, k)] = -i * s;
            anti[(k, j)] = i * s;
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = DMatrix::zeros(d, d);
        for t in 0..l {
            diag[(t, t)] = one * norm;
        }
        diag[(l, l)] = -one * (l as f64 * norm);
        out.push(diag);
    }
    out
}

/// Projector onto the range of \`rho\` by pivoted Gram-Schmidt on its
/// columns, dropping directions below \`1e-10\` of the largest column norm.
pub fn range_projector(rho: &DMatrix<C64>) -> (DMatrix<C64>, usize) {
    let d = rho.nrows();
    let mut cols: Vec<nalgebra::DVector<C64>> = (0..rho.ncols()).map(|k| rho.column(k).into_owned()).collect();
    let scale = cols.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::new();
    loop {
        let Some((k, norm)) = cols
            .iter()
            .enumerate()
            .map(|(k, v)| (k, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm <= 1e-10 * scale {
            break;
        }
        let q = cols.swap_remove(k).unscale(norm);
        for v in cols.iter_mut() {
            // Two passes keep the remainder orthogonal to working precision.
            for _ in 0..2 {
                let overlap = q.dotc(v);
                *v -= &q * overlap;
            }
        }
        basis.push(q);
    }
    let mut p = DMatrix::zeros(d, d);
    for q in &basis {
        p += q * q.adjoint();
    }
    (p, basis.len())
}

/// ν₂ over an explicit list of dense elements.
pub fn brute_nu2(elements: &[DMatrix<C64>], rho: &DMatrix<C64>) -> f64 {
    let d = rho.nrows();
    let (p, r) = range_projector(rho);
    let best = elements
        .iter()
        .map(|w| (&p * w + w * &p - &p * w * &p).norm_squared())
        .fold(0.0, f64::max);
    d as f64 / (2.0 * r as f64) * best
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> (f64, f64) {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j, mut dmax) = (0, 0, 0.0_f64);
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        dmax = dmax.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * dmax;
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = 2.0 * (-1.0_f64).powi(k - 1) * (-2.0 * kf * kf * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (dmax, p.clamp(0.0, 1.0))
}

pub fn bases_up_to_32() -> Vec<OperatorBasis> {
    let mut out: Vec<OperatorBasis> = (1..=5).map(|n| pauli_basis(n).unwrap()).collect();
    out.extend((2..=32).map(|d| sud_basis(d).unwrap()));
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- property checks, each at the size stated for the suite ----

pub fn check_orthonormality() -> Check {
    let mut worst = 0.0_f64;
    for b in bases_up_to_32() {
        let r = b.orthonormality_residual();
        ensure(r <= 1e-12, || format!("{:?} d={} residual {r:e}", b.kind(), b.dim()))?;
        ensure(b.len() == b.dim() * b.dim(), || "wrong element count".into())?;
        for a in 0..b.len() {
            let w = b.element(a);
            let m = w.as_dmatrix();
            ensure((m - m.adjoint()).norm() == 0.0, || format!("element {a} not Hermitian"))?;
        }
        worst = worst.max(r);
    }
    Ok(format!("worst residual {worst:.1e}"))
}

pub fn check_completeness() -> Check {
    let mut rng = rng::stream(11, &[]);
    let bases = [pauli_basis(1).unwrap(), pauli_basis(3).unwrap(), sud_basis(3).unwrap(), sud_basis(7).unwrap(), sud_basis(15).unwrap()];
    let mut worst = 0.0_f64;
    for t in 0..100 {
        let b = &bases[t % bases.len()];
        let a = random_hermitian(b.dim(), &mut rng);
        let mut rebuilt = DMatrix::<C64>::zeros(b.dim(), b.dim());
        for k in 0..b.len() {
            let w = b.element(k);
            let c: C64 = (w.as_dmatrix().adjoint() * &a).trace();
            rebuilt += w.as_dmatrix() * c;
        }
        worst = worst.max((rebuilt - &a).norm());
    }
    ensure(worst <= 1e-10, || format!("completeness error {worst:e}"))?;
    Ok(format!("worst reconstruction {worst:.1e}"))
}

pub fn check_sud_squares_diagonal() -> Check {
    for d in 2..=16 {
        let b = sud_basis(d).unwrap();
        for a in 1..b.len() {
            let w = b.element(a);
            let sq = w.as_dmatrix() * w.as_dmatrix();
            for r in 0..d {
                for c in 0..d {
                    if r != c && sq[(r, c)].norm() > 1e-14 {
                        return Err(format!("d={d} element {a} square has off-diagonal entry"));
                    }
                }
            }
        }
    }
    Ok("w² diagonal for d=2..16".into())
}

pub fn check_pure_bound() -> Check {
    let mut rng = rng::stream(12, &[]);
    let mut worst = 0.0_f64;
    for d in [3, 5, 7, 9] {
        let b = sud_basis(d).unwrap();
        for _ in 0..10 {
            let rho = random_rank_r_density_with(d, 1, &mut rng).unwrap();
            let p = rho.as_dmatrix();
            // Off-diagonal generators: the w whose diagonal is zero.
            let best = (1..b.len())
                .map(|a| b.element(a))
                .filter(|w| (0..d).all(|i| w.get(i, i).norm() == 0.0))
                .map(|w| 2.0 * (p * w.as_dmatrix() * w.as_dmatrix()).trace().re)
                .fold(0.0, f64::max);
            worst = worst.max((best - sud_pure_bound(&rho).unwrap()).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("pure bound mismatch {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e}"))
}

pub fn check_pauli_nu2() -> Check {
    let mut rng = rng::stream(13, &[]);
    let bases = [pauli_basis(2).unwrap(), pauli_basis(3).unwrap(), pauli_basis(4).unwrap()];
    let mut worst = 0.0_f64;
    for t in 0..500 {
        let b = &bases[t % 3];
        let rank = 1 + (t / 3) % 4;
        let rho = random_rank_r_density_with(b.dim(), rank, &mut rng).unwrap();
        let (nu2, _, r) = coherence_nu2(b, &rho).map_err(|e| e.to_string())?;
        ensure(r == rank, || format!("rank {r} != {rank}"))?;
        worst = worst.max(nu2);
    }
    ensure(worst <= 1.0 + 1e-9, || format!("Pauli nu2 reached {worst}"))?;
    Ok(format!("max nu2 {worst:.6}"))
}

pub fn check_norm_ordering() -> Check {
    let mut rng = rng::stream(14, &[]);
    for t in 0..300 {
        let d = 2 + t % 12;
        let rank = 1 + t % d;
        let g = ginibre(d, rank, &mut rng) * ginibre(rank, d, &mut rng);
        let x = cstomo::matcore::ComplexMatrix::new(g).unwrap();
        let (op, fro, nuc) = (operator_norm(&x), frobenius_norm(&x), nuclear_norm(&x));
        ensure(op <= fro * (1.0 + 1e-12) && fro <= nuc * (1.0 + 1e-12), || {
            format!("ordering fails: {op} {fro} {nuc}")
        })?;
        ensure(nuc <= rank as f64 * op * (1.0 + 1e-10), || format!("nuclear {nuc} > {rank}·{op}"))?;
        let oracle = svd_nuclear(x.as_dmatrix());
        ensure((nuc - oracle).abs() <= 1e-9 * oracle.max(1.0), || format!("nuclear {nuc} vs svd {oracle}"))?;
    }
    Ok("300 low-rank instances".into())
}

pub fn check_eig_residuals() -> Check {
    let mut rng = rng::stream(15, &[]);
    let mut worst = 0.0_f64;
    for t in 0..1000 {
        let d = 2 + t % 31;
        let a = random_hermitian(d, &mut rng);
        let h = HermitianMatrix::new(a.clone()).unwrap();
        let e = hermitian_eig(&h);
        let recon = (e.recompose().as_dmatrix() - &a).norm();
        let unit = (e.vectors.adjoint() * &e.vectors - DMatrix::<C64>::identity(d, d)).norm();
        worst = worst.max(recon).max(unit);
    }
    ensure(worst <= 1e-10, || format!("eig residual {worst:e}"))?;
    Ok(format!("worst residual {worst:.1e}"))
}

pub fn check_fidelity_properties() -> Check {
    let mut rng = rng::stream(16, &[]);
    let mut worst_pure = 0.0_f64;
    let mut worst_sym = 0.0_f64;
    for t in 0..200 {
        let d = 2 + t % 9;
        let psi: Vec<C64> = (0..d).map(|_| gaussian(&mut rng)).collect();
        let pure = DensityMatrix::pure(&psi).unwrap();
        let sigma = random_rank_r_density_with(d, 1 + t % d, &mut rng).unwrap();
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let v = nalgebra::DVector::from_vec(psi.clone());
        let shortcut = (v.adjoint() * sigma.as_dmatrix() * &v)[(0, 0)].re / norm_sq;
        worst_pure = worst_pure.max((fidelity(&pure, &sigma).unwrap() - shortcut).abs());
        let other = random_rank_r_density_with(d, 1 + (t + 1) % d, &mut rng).unwrap();
        let f1 = fidelity(&sigma, &other).unwrap();
        let f2 = fidelity(&other, &sigma).unwrap();
        worst_sym = worst_sym.max((f1 - f2).abs());
        ensure((0.0..=1.0 + 1e-8).contains(&f1), || format!("fidelity {f1} out of range"))?;
    }
    ensure(worst_pure <= 1e-8, || format!("pure shortcut off by {worst_pure:e}"))?;
    ensure(worst_sym <= 1e-8, || format!("symmetry off by {worst_sym:e}"))?;
    Ok(format!("shortcut {worst_pure:.1e}, symmetry {worst_sym:.1e}"))
}

pub fn check_sweep_determinism() -> Check {
    let base = SweepConfig {
        d1: 5,
        rank: 1,
        strategies: vec![Strategy::SuDirect, Strategy::AncillaPauli],
        m_values: vec![10, 15, 25],
        trials: 12,
        master_seed: 2024,
        criterion: SuccessCriterion::default(),
        solver: SolverOptions::default(),
        threads: Some(1),
    };
    let one = run_sweep(&base).map_err(|e| e.to_string())?;
    let four = run_sweep(&SweepConfig {
        threads: Some(4),
        ..base.clone()
    })
    .map_err(|e| e.to_string())?;
    ensure(rows_csv(&one.rows) == rows_csv(&four.rows), || "CSV differs between 1 and 4 workers".into())?;
    ensure(one.trials == four.trials, || "trial logs differ".into())?;
    Ok("1 vs 4 workers bit-identical".into())
}

// ---- shared scenario helpers ----

fn ket0(d: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(d, d);
    m[(0, 0)] = C64::new(1.0, 0.0);
    m
}

/// Largest ‖W(ρ⊗|0⟩⟨0|)W† − |0⟩⟨0|⊗embed(ρ)‖₂ over `count` seeded states.
pub fn embedding_residual(d1: usize, d2: usize, count: usize) -> (f64, f64) {
    let plan = EmbeddingPlan::new(d1, d2).unwrap();
    let w = build_swap_w(&plan);
    let wm = w.as_dmatrix();
    let unitarity = (wm * wm.adjoint() - DMatrix::<C64>::identity(d1 * d2, d1 * d2)).norm();
    let mut r = rng::stream(31, &[d1 as u64]);
    let mut worst = 0.0_f64;
    for t in 0..count {
        let rho = random_rank_r_density_with(d1, 1 + t % d1, &mut r).unwrap();
        let joint = rho.as_dmatrix().kronecker(&ket0(d2));
        let lhs = wm * joint * wm.adjoint();
        let rhs = ket0(d1).kronecker(embed(&rho, &plan).unwrap().as_dmatrix());
        worst = worst.max((lhs - rhs).norm());
    }
    (worst, unitarity)
}

/// Dual certificate that `ρ = uu†` is the unique nuclear-norm minimizer
/// consistent with the samples in `omega`: the sampled operators must span
/// the tangent space at `ρ`, and the least-norm `Y` in their span with
/// `P_T(Y) = uu†` must satisfy `‖(I−P) Y (I−P)‖op < 1`.
pub fn certified_unique(basis: &OperatorBasis, rho: &DensityMatrix, omega: &[usize]) -> bool {
    let d = basis.dim();
    let x = rho.as_dmatrix();
    let (p, rank) = range_projector(x);
    let q = DMatrix::<C64>::identity(d, d) - &p;
    let dim_t = 2 * d * rank - rank * rank;
    let tangent = |z: &DMatrix<C64>| &p * z + z * &p - &p * z * &p;
    let flatten = |z: &DMatrix<C64>, col: &mut [f64]| {
        for (i, v) in z.iter().enumerate() {
            col[i] = v.re;
            col[d * d + i] = v.im;
        }
    };
    let mut a = DMatrix::<f64>::zeros(2 * d * d, omega.len());
    let mut col = vec![0.0; 2 * d * d];
    for (j, &k) in omega.iter().enumerate() {
        flatten(&tangent(&basis.sparse(k).to_dense(d)), &mut col);
        a.column_mut(j).copy_from_slice(&col);
    }
    // Sign matrix of ρ restricted to its support is the projector itself.
    let mut target = vec![0.0; 2 * d * d];
    flatten(&p, &mut target);
    let target = nalgebra::DVector::from_vec(target);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let tol = 1e-9 * smax.max(1.0);
    if svd.singular_values.iter().filter(|&&s| s > tol).count() < dim_t {
        return false;
    }
    let Ok(y) = svd.solve(&target, tol) else { return false };
    if (&a * &y - &target).norm() > 1e-8 {
        return false;
    }
    let mut big_y = DMatrix::<C64>::zeros(d, d);
    for (j, &k) in omega.iter().enumerate() {
        basis.sparse(k).add_scaled_to(y[j], &mut big_y);
    }
    let off = &q * big_y * &q;
    let off = (&off + off.adjoint()).scale(0.5);
    let h = HermitianMatrix::new(off).unwrap();
    operator_norm(&h) < 1.0 - 1e-6
}

/// ADMM against the reference solver on the first `count` seeded rank-1
/// instances per dimension whose minimizer is certified unique. Returns the
/// worst Frobenius gap, the number compared and the number of draws skipped.
pub fn solver_agreement(count: usize) -> (f64, usize, usize) {
    let mut worst = 0.0_f64;
    let mut solved = 0;
    let mut skipped = 0;
    let opts = SolverOptions { max_iters: 20_000, ..SolverOptions::default() };
    for d in [3, 4, 5] {
        let basis = sud_basis(d).unwrap();
        let m = (d * d).div_ceil(2);
        let mut found = 0;
        let mut t = 0u64;
        while found < count && t < 100 * count as u64 {
            let mut r = rng::stream(51, &[d as u64, t]);
            t += 1;
            let rho = random_rank_r_density_with(d, 1, &mut r).unwrap();
            let omega = sample_omega(basis.len(), m, &mut r).unwrap();
            if !certified_unique(&basis, &rho, &omega) {
                skipped += 1;
                continue;
            }
            found += 1;
            let rec = measure(&rho, &basis, &omega).unwrap();
            let a = recover(&basis, &rec, &opts).unwrap();
            let b = recover_reference(&basis, &rec, &opts).unwrap();
            let gap = if a.converged && b.converged {
                (a.sigma_star.as_dmatrix() - b.sigma_star.as_dmatrix()).norm()
            } else {
                f64::INFINITY
            };
            worst = worst.max(gap);
            solved += 1;
        }
    }
    (worst, solved, skipped)
}

/// Largest full-Ω error `‖σ* − ρ‖₂` over seeded states of every rank.
pub fn full_omega_error() -> f64 {
    let mut worst = 0.0_f64;
    for (d, basis) in [(4, sud_basis(4).unwrap()), (7, sud_basis(7).unwrap()), (8, pauli_basis(3).unwrap())] {
        for rank in 1..=d {
            let mut r = rng::stream(52, &[d as u64, rank as u64]);
            let rho = random_rank_r_density_with(d, rank, &mut r).unwrap();
            let omega: Vec<usize> = (0..basis.len()).collect();
            let res = recover(&basis, &measure(&rho, &basis, &omega).unwrap(), &SolverOptions::default()).unwrap();
            let err = if res.converged {
                (res.sigma_star.as_dmatrix() - rho.as_dmatrix()).norm()
            } else {
                f64::INFINITY
            };
            worst = worst.max(err);
        }
    }
    worst
}

