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

//! Dense complex matrices and the small amount of linear algebra the
//! tomography pipeline needs: a Hermitian eigendecomposition, the nuclear,
//! Frobenius and operator norms, a PSD square root and Uhlmann fidelity.
//!
//! Three validated wrappers sit on top of `nalgebra::DMatrix<C64>`:
//!
//! * [`ComplexMatrix`]: any finite matrix.
//! * [`HermitianMatrix`]: square and self-adjoint within tolerance.
//! * [`DensityMatrix`]: Hermitian, positive semidefinite and unit trace.
//!
//! Validation happens once, at construction. Every wrapper is immutable.

mod io;
mod linalg;

pub use io::{from_binary, from_text, from_text_blocks, to_binary, to_text, to_text_blocks};
pub use linalg::{
    fidelity, frobenius_norm, hermitian_eig, nuclear_norm, operator_norm, psd_sqrt,
    singular_values, Eigen,
};

use nalgebra::DMatrix;

pub(crate) use linalg::eig_of;

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

pub use nalgebra::Complex;

/// Double-precision complex scalar.
pub type C64 = Complex<f64>;


/// A finite dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if !is_finite(&inner) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(ComplexMatrix(inner))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: other.rows(),
            });
        }
        Ok(ComplexMatrix(&self.0 * &other.0))
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }
}

impl AsRef<DMatrix<C64>> for ComplexMatrix {
    fn as_ref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

/// A square matrix equal to its adjoint within [`Tolerances::hermitian`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(DMatrix<C64>);

impl HermitianMatrix {
    /// Validates Hermiticity; the stored matrix is the exact Hermitian part.
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        Self::new_with(inner, &Tolerances::DEFAULT)
    }

    pub fn new_with(inner: DMatrix<C64>, tol: &Tolerances) -> Result<Self> {
        if !inner.is_square() {
            return Err(Error::invalid(format!(
                "Hermitian matrix must be square, got {}x{}",
                inner.nrows(),
                inner.ncols()
            )));
        }
        let inner = ComplexMatrix::new(inner)?.0;
        let skew = hermitian_defect(&inner);
        let bound = tol.hermitian * inner.norm().max(1.0);
        if skew > bound {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian: ‖A − A†‖₂ = {skew:.3e} > {bound:.3e}"
            )));
        }
        Ok(HermitianMatrix(hermitian_part(&inner)))
    }

    /// Takes the Hermitian part `(A + A†)/2` without checking how far `A` was from it.
    pub fn from_hermitian_part(inner: &DMatrix<C64>) -> Result<Self> {
        if !inner.is_square() {
            return Err(Error::invalid("Hermitian matrix must be square"));
        }
        let inner = ComplexMatrix::new(inner.clone())?.0;
        Ok(HermitianMatrix(hermitian_part(&inner)))
    }

    /// Wraps a matrix the caller has already made exactly Hermitian.
    pub(crate) fn from_trusted(inner: DMatrix<C64>) -> Self {
        debug_assert!(inner.is_square());
        HermitianMatrix(inner)
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix(DMatrix::identity(dim, dim))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        HermitianMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.clone())
    }

    /// Trace inner product `Tr(self† other)`, real for Hermitian arguments.
    pub fn inner(&self, other: &HermitianMatrix) -> f64 {
        self.0.dotc(&other.0).re
    }
}

impl AsRef<DMatrix<C64>> for HermitianMatrix {
    fn as_ref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    rank_hint: Option<usize>,
}

impl DensityMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        Self::from_hermitian(HermitianMatrix::new(inner)?)
    }

    pub fn from_hermitian(matrix: HermitianMatrix) -> Result<Self> {
        Self::from_hermitian_with(matrix, &Tolerances::DEFAULT)
    }

    pub fn from_hermitian_with(matrix: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > tol.density_trace {
            return Err(Error::invalid(format!(
                "density matrix trace {trace} differs from 1"
            )));
        }
        let eig = hermitian_eig(&matrix);
        let min = eig.values[0];
        if min < -tol.density_min_eig {
            return Err(Error::invalid(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityMatrix {
            matrix,
            rank_hint: None,
        })
    }

    /// Projects a Hermitian estimate onto the state space by zeroing negative
    /// eigenvalues and rescaling to unit trace.
    ///
    /// Fails if the estimate has no positive spectrum or has an eigenvalue
    /// below `-fidelity_clamp · max(1, λ_max)` when `strict` is set.
    pub fn from_estimate(estimate: &HermitianMatrix, strict: bool) -> Result<Self> {
        Self::from_estimate_with(estimate, strict, &Tolerances::DEFAULT)
    }

    pub fn from_estimate_with(
        estimate: &HermitianMatrix,
        strict: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        let eig = hermitian_eig(estimate);
        let max = eig.values[eig.values.len() - 1];
        if strict && eig.values[0] < -tol.fidelity_clamp * max.abs().max(1.0) {
            return Err(Error::invalid(format!(
                "estimate has eigenvalue {:.3e} below the clamping threshold",
                eig.values[0]
            )));
        }
        let clamped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("estimate has no positive spectrum"));
        }
        let scaled: Vec<f64> = clamped.iter().map(|v| v / total).collect();
        let matrix = eig.recompose_with(&scaled);
        Ok(DensityMatrix {
            matrix,
            rank_hint: None,
        })
    }

    /// Pure state `|ψ⟩⟨ψ|` for a nonzero vector, normalized internally.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("pure state needs a finite nonzero vector"));
        }
        let n = amplitudes.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = amplitudes[i] * amplitudes[j].conj() / (norm * norm);
            }
        }
        Ok(DensityMatrix {
            matrix: HermitianMatrix(hermitian_part(&m)),
            rank_hint: Some(1),
        })
    }

    /// Wraps a matrix built by a trusted constructor in this crate.
    pub(crate) fn from_trusted(inner: DMatrix<C64>, rank_hint: Option<usize>) -> Self {
        DensityMatrix {
            matrix: HermitianMatrix(hermitian_part(&inner)),
            rank_hint,
        }
    }

    pub fn with_rank_hint(mut self, rank: usize) -> Self {
        self.rank_hint = Some(rank);
        self
    }

    pub fn rank_hint(&self) -> Option<usize> {
        self.rank_hint
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.matrix.0
    }

    /// Numerical rank: eigenvalues above `rank · λ_max`.
    pub fn numerical_rank(&self) -> usize {
        numerical_rank(&hermitian_eig(&self.matrix).values, Tolerances::DEFAULT.rank)
    }
}

impl AsRef<DMatrix<C64>> for DensityMatrix {
    fn as_ref(&self) -> &DMatrix<C64> {
        &self.matrix.0
    }
}

/// Count of eigenvalues strictly above `rel · λ_max`.
pub(crate) fn numerical_rank(values: &nalgebra::DVector<f64>, rel: f64) -> usize {
    let max = values.iter().cloned().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| v > rel * max).count()
}

pub(crate) fn is_finite(m: &DMatrix<C64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).norm()
}

pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).scale(0.5)
}
