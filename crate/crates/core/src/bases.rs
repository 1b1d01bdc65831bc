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

//! Orthonormal Hermitian operator bases and coherence parameters.
//!
//! Two families are provided:
//!
//! * [`pauli_basis`]: normalized `n`-fold tensor products of `{I, X, Y, Z}`
//!   for `d = 2ⁿ`. Element `a` has base-4 digits `(i₁ … iₙ)` with `i₁` most
//!   significant, and `i₁` acts on the leftmost tensor factor.
//! * [`sud_basis`]: `I/√d` followed by the generalized Gell-Mann matrices,
//!   in the order symmetric, antisymmetric, diagonal.
//!
//! Elements are stored sparsely as a real scale times a list of unnormalized
//! entries. Every element of both families has at most one nonzero per row
//! and column, so the sensing map and its adjoint cost `O(d)` per element.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, numerical_rank, DensityMatrix, HermitianMatrix, C64};
use crate::tolerances::Tolerances;

/// Largest dimension a basis may be built for unless the caller raises it.
pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    PauliTensor,
    SuD,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::PauliTensor => "pauli",
            BasisKind::SuD => "sud",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pauli" => Ok(BasisKind::PauliTensor),
            "sud" => Ok(BasisKind::SuD),
            other => Err(Error::invalid(format!("unknown basis kind '{other}'"))),
        }
    }
}

/// One basis element: `scale · Σ value |row⟩⟨col|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    scale: f64,
    /// `scale²`, kept separately so exact values such as `1/d` survive.
    scale_sq: f64,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    fn new(scale_sq: f64, entries: Vec<(usize, usize, C64)>) -> Self {
        SparseOperator {
            scale: scale_sq.sqrt(),
            scale_sq,
            entries,
        }
    }

    /// Nonzero entries, unscaled.
    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `⟨w, X⟩ = Tr(w X)` for Hermitian `w`; the real part of the trace.
    pub fn inner(&self, x: &DMatrix<C64>) -> f64 {
        let mut acc = 0.0;
        for &(r, c, v) in &self.entries {
            // Tr(w X) = Σ w[r,c] X[c,r]
            let z = x[(c, r)];
            acc += v.re * z.re - v.im * z.im;
        }
        self.scale * acc
    }

    /// Full complex `Tr(w X)`.
    pub fn trace_product(&self, x: &DMatrix<C64>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &(r, c, v) in &self.entries {
            acc += v * x[(c, r)];
        }
        acc * self.scale
    }

    /// `X += coeff · w`.
    pub fn add_scaled_to(&self, coeff: f64, x: &mut DMatrix<C64>) {
        let s = coeff * self.scale;
        for &(r, c, v) in &self.entries {
            x[(r, c)] += v * s;
        }
    }

    pub fn to_dense(&self, dim: usize) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(dim, dim);
        self.add_scaled_to(1.0, &mut m);
        m
    }

    fn is_monomial(&self, dim: usize) -> bool {
        let mut rows = vec![false; dim];
        let mut cols = vec![false; dim];
        for &(r, c, _) in &self.entries {
            if rows[r] || cols[c] {
                return false;
            }
            rows[r] = true;
            cols[c] = true;
        }
        true
    }

    /// Squared operator norm.
    ///
    /// A matrix with at most one nonzero per row and column has the moduli
    /// of its entries as singular values; other shapes fall back to a
    /// dense eigendecomposition.
    pub fn operator_norm_sq(&self, dim: usize) -> f64 {
        if self.is_monomial(dim) {
            let max = self.entries.iter().map(|e| e.2.norm_sqr()).fold(0.0, f64::max);
            max * self.scale_sq
        } else {
            let dense = HermitianMatrix::from_hermitian_part(&self.to_dense(dim))
                .expect("basis elements are finite");
            let eig = hermitian_eig(&dense);
            let max = eig.values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            max * max
        }
    }
}

/// Ordered orthonormal basis of `d × d` Hermitian matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    kind: BasisKind,
    elements: Vec<SparseOperator>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Number of elements, always `d²`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sparse(&self, index: usize) -> &SparseOperator {
        &self.elements[index]
    }

    /// Dense copy of element `index`.
    pub fn element(&self, index: usize) -> HermitianMatrix {
        HermitianMatrix::from_hermitian_part(&self.elements[index].to_dense(self.dim))
            .expect("basis elements are finite")
    }

    pub fn elements(&self) -> impl Iterator<Item = HermitianMatrix> + '_ {
        (0..self.len()).map(|a| self.element(a))
    }

    /// Coefficient `⟨w_a, X⟩`.
    pub fn coefficient(&self, index: usize, x: &DMatrix<C64>) -> f64 {
        self.elements[index].inner(x)
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let dense: Vec<DMatrix<C64>> = (0..self.len()).map(|a| self.elements[a].to_dense(self.dim)).collect();
        (0..self.len())
            .into_par_iter()
            .map(|a| {
                let mut worst = 0.0_f64;
                for (b, wb) in dense.iter().enumerate().skip(a) {
                    let g = self.elements[a].inner(wb);
                    let target = if a == b { 1.0 } else { 0.0 };
                    let imag = dense[a].dotc(wb).im;
                    worst = worst.max((g - target).abs()).max(imag.abs());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

fn check_dim(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::ResourceLimit(format!(
            "basis dimension {dim} exceeds cap {cap}"
        )));
    }
    Ok(())
}

/// Normalized Pauli tensor-product basis on `n` qubits.
pub fn pauli_basis(n: usize) -> Result<OperatorBasis> {
    pauli_basis_with_cap(n, DEFAULT_MAX_DIM)
}

pub fn pauli_basis_with_cap(n: usize, cap: usize) -> Result<OperatorBasis> {
    if n == 0 {
        return Err(Error::invalid("Pauli basis needs at least one qubit"));
    }
    if n >= usize::BITS as usize / 2 {
        return Err(Error::ResourceLimit(format!("{n} qubits")));
    }
    let dim = 1usize << n;
    check_dim(dim, cap)?;
    let scale_sq = 1.0 / dim as f64;
    let elements = (0..dim * dim)
        .map(|a| {
            let digits: Vec<usize> = (0..n).map(|k| (a >> (2 * (n - 1 - k))) & 3).collect();
            let entries = (0..dim)
                .map(|row| {
                    let mut col = 0usize;
                    let mut value = C64::new(1.0, 0.0);
                    for (k, &p) in digits.iter().enumerate() {
                        let bit = (row >> (n - 1 - k)) & 1;
                        let (cbit, factor) = pauli_entry(p, bit);
                        col |= cbit << (n - 1 - k);
                        value *= factor;
                    }
                    (row, col, value)
                })
                .collect();
            SparseOperator::new(scale_sq, entries)
        })
        .collect();
    Ok(OperatorBasis {
        dim,
        kind: BasisKind::PauliTensor,
        elements,
    })
}

/// Column bit and entry of a single-qubit Pauli in the given row.
fn pauli_entry(p: usize, row_bit: usize) -> (usize, C64) {
    match (p, row_bit) {
        (0, b) => (b, C64::new(1.0, 0.0)),
        (1, b) => (1 - b, C64::new(1.0, 0.0)),
        (2, 0) => (1, C64::new(0.0, -1.0)),
        (2, _) => (0, C64::new(0.0, 1.0)),
        (3, 0) => (0, C64::new(1.0, 0.0)),
        (3, _) => (1, C64::new(-1.0, 0.0)),
        _ => unreachable!("Pauli digit out of range"),
    }
}

/// Generalized Gell-Mann basis with the normalized identity as element 0.
///
/// Order: `I/√d`; symmetric `(|j⟩⟨k| + |k⟩⟨j|)/√2` for `j < k`;
/// antisymmetric `(−i|j⟩⟨k| + i|k⟩⟨j|)/√2` for `j < k`; diagonal
/// `diag(1,…,1,−l,0,…,0)/√(l(l+1))` for `l = 1 … d−1`. Pairs `(j, k)` run
/// in lexicographic order.
pub fn sud_basis(dim: usize) -> Result<OperatorBasis> {
    sud_basis_with_cap(dim, DEFAULT_MAX_DIM)
}

pub fn sud_basis_with_cap(dim: usize, cap: usize) -> Result<OperatorBasis> {
    if dim < 2 {
        return Err(Error::invalid("SU(d) basis needs d ≥ 2"));
    }
    check_dim(dim, cap)?;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut elements = Vec::with_capacity(dim * dim);
    elements.push(SparseOperator::new(
        1.0 / dim as f64,
        (0..dim).map(|k| (k, k, one)).collect(),
    ));
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|j| (j + 1..dim).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        elements.push(SparseOperator::new(0.5, vec![(j, k, one), (k, j, one)]));
    }
    for &(j, k) in &pairs {
        elements.push(SparseOperator::new(0.5, vec![(j, k, -i), (k, j, i)]));
    }
    for l in 1..dim {
        let mut entries: Vec<(usize, usize, C64)> = (0..l).map(|k| (k, k, one)).collect();
        entries.push((l, l, C64::new(-(l as f64), 0.0)));
        elements.push(SparseOperator::new(1.0 / (l * (l + 1)) as f64, entries));
    }
    Ok(OperatorBasis {
        dim,
        kind: BasisKind::SuD,
        elements,
    })
}

/// Coherence of a state with respect to a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    pub nu1: f64,
    pub nu2: f64,
    /// `min(nu1, nu2)`.
    pub nu: f64,
    pub argmax_nu1: usize,
    pub argmax_nu2: usize,
    pub rank: usize,
}

impl CoherenceReport {
    /// `key=value` lines.
    pub fn to_key_values(&self) -> String {
        format!(
            "nu1={}\nnu2={}\nnu={}\nargmax_nu1={}\nargmax_nu2={}\nrank={}\n",
            self.nu1, self.nu2, self.nu, self.argmax_nu1, self.argmax_nu2, self.rank
        )
    }
}

/// `ν₁ = d · max_a ‖w_a‖²` and the index attaining it (lowest on ties).
pub fn coherence_nu1(basis: &OperatorBasis) -> (f64, usize) {
    let d = basis.dim();
    let (value, index) = argmax(
        (0..basis.len())
            .into_par_iter()
            .map(|a| (basis.sparse(a).operator_norm_sq(d), a)),
    );
    (d as f64 * value, index)
}

/// `ν₂ = (d / 2r) · max_a ‖P_U w_a + w_a P_U − P_U w_a P_U‖₂²`.
///
/// `P_U` projects onto eigenvectors of `rho` with eigenvalue above
/// `rank · λ_max`; `r` is their count.
pub fn coherence_nu2(basis: &OperatorBasis, rho: &DensityMatrix) -> Result<(f64, usize, usize)> {
    let d = basis.dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    let projector = support_projector(rho.as_hermitian(), &Tolerances::DEFAULT)?;
    let rank = projector.1;
    let p = projector.0;
    let (value, index) = argmax((0..basis.len()).into_par_iter().map(|a| {
        let w = basis.sparse(a).to_dense(d);
        let pw = &p * &w;
        let wp = &w * &p;
        let pwp = &pw * &p;
        let m = pw + wp - pwp;
        (m.norm_squared(), a)
    }));
    Ok((d as f64 / (2.0 * rank as f64) * value, index, rank))
}

/// Both coherence parameters.
pub fn coherence(basis: &OperatorBasis, rho: &DensityMatrix) -> Result<CoherenceReport> {
    let (nu1, argmax_nu1) = coherence_nu1(basis);
    let (nu2, argmax_nu2, rank) = coherence_nu2(basis, rho)?;
    Ok(CoherenceReport {
        nu1,
        nu2,
        nu: nu1.min(nu2),
        argmax_nu1,
        argmax_nu2,
        rank,
    })
}

/// `max_{i≠j} ρ_ii + ρ_jj` for a pure state.
pub fn sud_pure_bound(rho: &DensityMatrix) -> Result<f64> {
    let rank = rho.numerical_rank();
    if rank != 1 {
        return Err(Error::invalid(format!("expected a rank-1 state, found rank {rank}")));
    }
    let mut diag: Vec<f64> = (0..rho.dim()).map(|i| rho.get(i, i).re).collect();
    if diag.len() < 2 {
        return Err(Error::invalid("need at least two levels"));
    }
    diag.sort_by(|a, b| b.total_cmp(a));
    Ok(diag[0] + diag[1])
}

/// Orthogonal projector onto the numerical support, and its rank.
pub(crate) fn support_projector(
    a: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<(DMatrix<C64>, usize)> {
    let eig = hermitian_eig(a);
    let rank = numerical_rank(&eig.values, tol.rank);
    if rank == 0 {
        return Err(Error::invalid("state has zero rank"));
    }
    let d = a.dim();
    let support = eig.vectors.columns(d - rank, rank);
    Ok((&support * support.adjoint(), rank))
}

/// Maximum value, lowest index on ties; independent of evaluation order.
fn argmax(items: impl ParallelIterator<Item = (f64, usize)>) -> (f64, usize) {
    items.reduce(
        || (f64::NEG_INFINITY, usize::MAX),
        |x, y| match x.0.total_cmp(&y.0) {
            std::cmp::Ordering::Greater => x,
            std::cmp::Ordering::Less => y,
            std::cmp::Ordering::Equal => {
                if x.1 <= y.1 {
                    x
                } else {
                    y
                }
            }
        },
    )
}
