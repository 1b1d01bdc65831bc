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

//! Test states, the ancilla swap embedding, and the dilation check.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{eig_of, from_binary, from_text, ComplexMatrix, DensityMatrix, C64};
use crate::rng;
use crate::tolerances::Tolerances;

/// Haar-induced random state of rank `r`: `ρ = GG†/Tr(GG†)` with `G` a
/// `d × r` matrix of independent standard complex Gaussians.
pub fn random_rank_r_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_rank_r_density_with(dim, rank, &mut rng::from_seed(seed))
}

pub fn random_rank_r_density_with<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::invalid(format!(
            "rank {rank} must lie in 1..={dim}"
        )));
    }
    let g = DMatrix::<C64>::from_fn(dim, rank, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    let gram = &g * g.adjoint();
    let trace = gram.trace().re;
    Ok(DensityMatrix::from_trusted(gram.unscale(trace), Some(rank)))
}

/// The two reference states of the SU(7) comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkState {
    /// `|0⟩⟨0|`, maximally coherent with respect to SU(d).
    Rho1,
    /// `(1/d) Σ_{ij} |i⟩⟨j|`, the uniform superposition.
    Rho2,
}

pub fn benchmark_state(which: BenchmarkState, dim: usize) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::invalid("reference states need d ≥ 2"));
    }
    let m = match which {
        BenchmarkState::Rho1 => {
            let mut m = DMatrix::zeros(dim, dim);
            m[(0, 0)] = C64::new(1.0, 0.0);
            m
        }
        BenchmarkState::Rho2 => DMatrix::from_element(dim, dim, C64::new(1.0 / dim as f64, 0.0)),
    };
    Ok(DensityMatrix::from_trusted(m, Some(1)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateKind {
    HaarPure,
    HaarRankR,
    Rho1,
    Rho2,
    /// Matrix file in the text or binary encoding, chosen by content.
    FromFile(PathBuf),
}

/// Recipe for a system state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub dim: usize,
    pub rank: usize,
    pub kind: StateKind,
    pub seed: u64,
    /// Allows `Rho1`/`Rho2` at dimensions other than 7.
    pub generalized: bool,
}

impl StateSpec {
    pub fn generate(&self) -> Result<DensityMatrix> {
        if self.rank == 0 || self.rank > self.dim {
            return Err(Error::invalid(format!(
                "rank {} must lie in 1..={}",
                self.rank, self.dim
            )));
        }
        match &self.kind {
            StateKind::HaarPure => random_rank_r_density(self.dim, 1, self.seed),
            StateKind::HaarRankR => random_rank_r_density(self.dim, self.rank, self.seed),
            StateKind::Rho1 | StateKind::Rho2 => {
                if self.dim != 7 && !self.generalized {
                    return Err(Error::invalid(
                        "rho1/rho2 are defined for d = 7; set the generalized flag for other d",
                    ));
                }
                let which = if self.kind == StateKind::Rho1 {
                    BenchmarkState::Rho1
                } else {
                    BenchmarkState::Rho2
                };
                benchmark_state(which, self.dim)
            }
            StateKind::FromFile(path) => {
                let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
                let m = match std::str::from_utf8(&bytes) {
                    Ok(text) if text.trim_start().starts_with('d') => from_text(text)?,
                    _ => from_binary(&bytes)?,
                };
                if m.rows() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: m.rows(),
                    });
                }
                DensityMatrix::new(m.into_dmatrix())
            }
        }
    }
}

/// System and ancilla dimensions for the swap embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingPlan {
    pub d1: usize,
    pub d2: usize,
}

impl EmbeddingPlan {
    /// Custom ancilla size; `d2` must be a power of two no smaller than `d1`.
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 < 2 {
            return Err(Error::invalid("system dimension must be at least 2"));
        }
        if !d2.is_power_of_two() || d2 < d1 {
            return Err(Error::invalid(format!(
                "ancilla dimension {d2} must be a power of two ≥ {d1}"
            )));
        }
        Ok(EmbeddingPlan { d1, d2 })
    }

    /// Number of qubits in the ancilla.
    pub fn qubits(&self) -> usize {
        self.d2.trailing_zeros() as usize
    }
}

/// Smallest power-of-two ancilla that holds the system.
pub fn plan_embedding(d1: usize) -> Result<EmbeddingPlan> {
    if d1 < 2 {
        return Err(Error::invalid("system dimension must be at least 2"));
    }
    EmbeddingPlan::new(d1, d1.next_power_of_two())
}

/// The swap unitary on `C^{d1} ⊗ C^{d2}`:
/// `Σ_{i,j<d1} |i⟩⟨j| ⊗ |j⟩⟨i| + Σ_{k≥d1} 𝟙 ⊗ |k⟩⟨k|`.
///
/// Basis state `|s⟩ ⊗ |a⟩` has index `s · d2 + a`.
pub fn build_swap_w(plan: &EmbeddingPlan) -> ComplexMatrix {
    let EmbeddingPlan { d1, d2 } = *plan;
    let n = d1 * d2;
    let mut w = DMatrix::zeros(n, n);
    let one = C64::new(1.0, 0.0);
    for i in 0..d1 {
        for j in 0..d1 {
            w[(i * d2 + j, j * d2 + i)] = one;
        }
    }
    for s in 0..d1 {
        for k in d1..d2 {
            w[(s * d2 + k, s * d2 + k)] = one;
        }
    }
    ComplexMatrix::new(w).expect("entries are finite")
}

/// Ancilla state `ρ'_A`: `rho_S` in the top-left block, zeros elsewhere.
pub fn embed(rho_s: &DensityMatrix, plan: &EmbeddingPlan) -> Result<DensityMatrix> {
    if rho_s.dim() != plan.d1 {
        return Err(Error::DimensionMismatch {
            expected: plan.d1,
            found: rho_s.dim(),
        });
    }
    let mut m = DMatrix::zeros(plan.d2, plan.d2);
    m.view_mut((0, 0), (plan.d1, plan.d1)).copy_from(rho_s.as_dmatrix());
    Ok(DensityMatrix::from_trusted(m, rho_s.rank_hint()))
}

/// Result of cutting the system block out of an ancilla state.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub state: DensityMatrix,
    /// Frobenius norm of everything outside the top-left block.
    pub leaked: f64,
}

/// Top-left `d1 × d1` block of `rho_a`, renormalized to unit trace.
pub fn extract(rho_a: &DensityMatrix, d1: usize) -> Result<Extraction> {
    extract_with(rho_a, d1, &Tolerances::DEFAULT)
}

pub fn extract_with(rho_a: &DensityMatrix, d1: usize, tol: &Tolerances) -> Result<Extraction> {
    let d2 = rho_a.dim();
    if d1 == 0 || d1 > d2 {
        return Err(Error::DimensionMismatch {
            expected: d2,
            found: d1,
        });
    }
    let full = rho_a.as_dmatrix();
    let block = full.view((0, 0), (d1, d1)).clone_owned();
    let mut leaked_sq = 0.0;
    for c in 0..d2 {
        for r in 0..d2 {
            if r >= d1 || c >= d1 {
                leaked_sq += full[(r, c)].norm_sqr();
            }
        }
    }
    let leaked = leaked_sq.sqrt();
    if leaked > tol.leakage {
        return Err(Error::BlockLeakage {
            leaked,
            tolerance: tol.leakage,
        });
    }
    let trace = block.trace().re;
    if trace <= 0.0 {
        return Err(Error::invalid("system block has no weight"));
    }
    let state = DensityMatrix::new(block.unscale(trace))?;
    Ok(Extraction { state, leaked })
}

/// Residuals of the dilation identities for `H = [[0, W], [W†, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    /// `‖WW† − I‖₂`.
    pub unitarity: f64,
    /// `‖H² − I‖₂`.
    pub h_squared: f64,
    /// `‖exp(−iHπ/2) + iH‖₂`.
    pub quarter_period: f64,
    /// `‖exp(−iHπ/2) + i σx ⊗ W‖₂`; zero only when `W` is Hermitian.
    pub sigma_x_form: f64,
    /// `(t, ‖exp(−iHt) − (cos t·I − i sin t·H)‖₂)`.
    pub series: Vec<(f64, f64)>,
}

impl DilationReport {
    pub fn max_residual(&self) -> f64 {
        self.series
            .iter()
            .map(|s| s.1)
            .fold(self.h_squared.max(self.quarter_period), f64::max)
    }
}

/// Builds the dilation Hamiltonian of a unitary and measures how well
/// `exp(−iHt) = cos(t)𝟙 − i sin(t)H` holds. The exponential is evaluated
/// through an eigendecomposition of `H`.
pub fn dilation_check(w: &ComplexMatrix, times: &[f64]) -> Result<DilationReport> {
    if !w.is_square() {
        return Err(Error::invalid("W must be square"));
    }
    let n = w.rows();
    let wm = w.as_dmatrix();
    let unitarity = (wm * wm.adjoint() - DMatrix::<C64>::identity(n, n)).norm();
    if unitarity > 1e-10 {
        return Err(Error::invalid(format!(
            "W is not unitary: ‖WW† − I‖₂ = {unitarity:.3e}"
        )));
    }
    let mut h = DMatrix::<C64>::zeros(2 * n, 2 * n);
    h.view_mut((0, n), (n, n)).copy_from(wm);
    h.view_mut((n, 0), (n, n)).copy_from(&wm.adjoint());
    let id = DMatrix::<C64>::identity(2 * n, 2 * n);
    let h_squared = (&h * &h - &id).norm();

    let eig = eig_of(h.clone());
    let expm = |t: f64| -> DMatrix<C64> {
        let mut scaled = eig.vectors.clone();
        for (k, &lambda) in eig.values.iter().enumerate() {
            let phase = C64::new(0.0, -lambda * t).exp();
            scaled.column_mut(k).apply(|z| *z *= phase);
        }
        scaled * eig.vectors.adjoint()
    };
    let minus_i = C64::new(0.0, -1.0);
    let quarter = expm(FRAC_PI_2);
    let quarter_period = (&quarter - h.map(|z| z * minus_i)).norm();

    let mut sigma_x_w = DMatrix::<C64>::zeros(2 * n, 2 * n);
    sigma_x_w.view_mut((0, n), (n, n)).copy_from(wm);
    sigma_x_w.view_mut((n, 0), (n, n)).copy_from(wm);
    let sigma_x_form = (&quarter - sigma_x_w.map(|z| z * minus_i)).norm();

    let series = times
        .iter()
        .map(|&t| {
            let closed = id.map(|z| z * t.cos()) + h.map(|z| z * minus_i * t.sin());
            (t, (expm(t) - closed).norm())
        })
        .collect();
    Ok(DilationReport {
        unitarity,
        h_squared,
        quarter_period,
        sigma_x_form,
        series,
    })
}
