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

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{hermitian_defect, hermitian_part, DensityMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Spectral decomposition `A = V diag(λ) V†` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: DVector<f64>,
    /// Unitary matrix whose columns are the eigenvectors, in the order of `values`.
    pub vectors: DMatrix<C64>,
}

impl Eigen {
    /// `V diag(f) V†` for replacement eigenvalues `f`.
    pub fn recompose_with(&self, spectrum: &[f64]) -> HermitianMatrix {
        assert_eq!(spectrum.len(), self.values.len());
        let mut scaled = self.vectors.clone();
        for (k, &s) in spectrum.iter().enumerate() {
            scaled.column_mut(k).scale_mut(s);
        }
        let out = scaled * self.vectors.adjoint();
        HermitianMatrix::from_trusted(hermitian_part(&out))
    }

    pub fn recompose(&self) -> HermitianMatrix {
        let values: Vec<f64> = self.values.iter().copied().collect();
        self.recompose_with(&values)
    }

    /// Applies `f` to every eigenvalue and recomposes.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        self.recompose_with(&values)
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(a: &HermitianMatrix) -> Eigen {
    eig_of(a.as_dmatrix().clone())
}

pub(crate) fn eig_of(m: DMatrix<C64>) -> Eigen {
    let n = m.nrows();
    let decomposition = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| decomposition.eigenvalues[i].total_cmp(&decomposition.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| decomposition.eigenvalues[k]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &decomposition.eigenvectors.column(src));
    }
    Eigen { values, vectors }
}

/// Singular values in descending order.
///
/// Hermitian inputs use `|λ|`. Other matrices use the top `min(r, c)`
/// eigenvalues of the dilation `[[0, X], [X†, 0]]`, whose spectrum is
/// `±σᵢ` padded with zeros; this avoids squaring small singular values.
pub fn singular_values(x: &impl AsRef<DMatrix<C64>>) -> Vec<f64> {
    let x = x.as_ref();
    let mut values: Vec<f64> =
        if x.is_square() && hermitian_defect(x) <= Tolerances::DEFAULT.hermitian * x.norm().max(1.0) {
            eig_of(hermitian_part(x)).values.iter().map(|v| v.abs()).collect()
        } else {
            let (r, c) = x.shape();
            let mut dilation = DMatrix::zeros(r + c, r + c);
            dilation.view_mut((0, r), (r, c)).copy_from(x);
            dilation.view_mut((r, 0), (c, r)).copy_from(&x.adjoint());
            let eig = eig_of(dilation);
            eig.values.iter().rev().take(r.min(c)).map(|v| v.max(0.0)).collect()
        };
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Sum of singular values.
pub fn nuclear_norm(x: &impl AsRef<DMatrix<C64>>) -> f64 {
    singular_values(x).iter().sum()
}

/// `√Tr(X†X)`.
pub fn frobenius_norm(x: &impl AsRef<DMatrix<C64>>) -> f64 {
    x.as_ref().norm()
}

/// Largest singular value.
pub fn operator_norm(x: &impl AsRef<DMatrix<C64>>) -> f64 {
    singular_values(x)[0]
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues down to `-psd_negative` are clamped to zero.
pub fn psd_sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    psd_sqrt_with(a, &Tolerances::DEFAULT)
}

pub fn psd_sqrt_with(a: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    let eig = hermitian_eig(a);
    let min = eig.values[0];
    if min < -tol.psd_negative {
        return Err(Error::invalid(format!(
            "matrix is not positive semidefinite: eigenvalue {min:.3e}"
        )));
    }
    let floor = spectral_floor(&eig.values, tol);
    Ok(eig.map(|v| if v > floor { v.sqrt() } else { 0.0 }))
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    fidelity_with(rho, sigma, &Tolerances::DEFAULT)
}

pub fn fidelity_with(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let root = psd_sqrt_with(rho.as_hermitian(), tol)?;
    let root = root.as_dmatrix();
    let inner = hermitian_part(&(root * sigma.as_dmatrix() * root));
    let eig = eig_of(inner);
    let floor = spectral_floor(&eig.values, tol);
    let trace: f64 = eig.values.iter().filter(|&&v| v > floor).map(|v| v.sqrt()).sum();
    Ok(trace * trace)
}

fn spectral_floor(values: &DVector<f64>, tol: &Tolerances) -> f64 {
    let max = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    tol.spectral_floor * max
}
