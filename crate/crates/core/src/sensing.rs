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

//! Measurement settings and the linear sensing map `A(X)_k = Tr(w_{Ω[k]} X)`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::seq::index;
use rand::Rng;

use crate::bases::{BasisKind, OperatorBasis};
use crate::error::{Error, Result};
use crate::matcore::{DensityMatrix, HermitianMatrix, C64};
use crate::tolerances::Tolerances;

/// How measurement settings are drawn from the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Uniform over all size-`m` subsets.
    #[default]
    WithoutReplacement,
    /// `m` independent uniform draws; repeated indices collapse, so fewer
    /// than `m` distinct settings may result.
    WithReplacement,
}

/// Sampled settings `Ω` and the exact expectation values on them.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    basis_kind: BasisKind,
    dim: usize,
    omega: Vec<usize>,
    values: Vec<f64>,
}

impl MeasurementRecord {
    /// Validates and sorts by index.
    pub fn new(basis_kind: BasisKind, dim: usize, omega: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if omega.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: omega.len(),
                found: values.len(),
            });
        }
        let mut pairs: Vec<(usize, f64)> = omega.into_iter().zip(values).collect();
        pairs.sort_by_key(|p| p.0);
        let pool = dim * dim;
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid(format!("index {} repeated in Ω", w[0].0)));
            }
        }
        for &(a, b) in &pairs {
            if a >= pool {
                return Err(Error::invalid(format!("index {a} outside basis of size {pool}")));
            }
            if !b.is_finite() || b.abs() > 1.0 + 1e-9 {
                return Err(Error::invalid(format!("expectation {b} for index {a} out of range")));
            }
        }
        let (omega, values) = pairs.into_iter().unzip();
        Ok(MeasurementRecord {
            basis_kind,
            dim,
            omega,
            values,
        })
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of settings `m = |Ω|`.
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub(crate) fn check_basis(&self, basis: &OperatorBasis) -> Result<()> {
        if basis.kind() != self.basis_kind {
            return Err(Error::invalid(format!(
                "record was taken in the {} basis, not {}",
                self.basis_kind.name(),
                basis.kind().name()
            )));
        }
        if basis.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: self.dim,
            });
        }
        Ok(())
    }

    /// Header `basis=<kind> d=<d> m=<m>` followed by `index value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "basis={} d={} m={}\n",
            self.basis_kind.name(),
            self.dim,
            self.len()
        );
        for (a, b) in self.omega.iter().zip(&self.values) {
            let _ = writeln!(out, "{a} {b:?}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty measurement record".into(),
        })?;
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut kind = None;
        let mut dim = None;
        let mut m = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| parse_err(line, format!("malformed header field '{field}'")))?;
            let bad = || parse_err(line, format!("bad value in '{field}'"));
            match key {
                "basis" => kind = Some(BasisKind::parse(value).map_err(|_| bad())?),
                "d" => dim = Some(value.parse::<usize>().map_err(|_| bad())?),
                "m" => m = Some(value.parse::<usize>().map_err(|_| bad())?),
                _ => return Err(parse_err(line, format!("unknown header key '{key}'"))),
            }
        }
        let (kind, dim, m) = match (kind, dim, m) {
            (Some(k), Some(d), Some(m)) => (k, d, m),
            _ => return Err(parse_err(line, "header needs basis=, d= and m=".into())),
        };
        let mut omega = Vec::with_capacity(m);
        let mut values = Vec::with_capacity(m);
        for (line, row) in lines {
            let mut parts = row.split_whitespace();
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return Err(parse_err(line, format!("expected 'index value', found '{row}'"))),
            };
            omega.push(a.parse().map_err(|_| parse_err(line, format!("bad index '{a}'")))?);
            values.push(b.parse().map_err(|_| parse_err(line, format!("bad value '{b}'")))?);
        }
        if omega.len() != m {
            return Err(parse_err(line, format!("header says m={m}, found {} entries", omega.len())));
        }
        MeasurementRecord::new(kind, dim, omega, values)
    }
}

/// Draws `m` distinct indices uniformly from `0..pool`, returned sorted.
pub fn sample_omega<R: Rng + ?Sized>(pool: usize, m: usize, rng: &mut R) -> Result<Vec<usize>> {
    sample_omega_with(pool, m, Sampling::WithoutReplacement, rng)
}

pub fn sample_omega_with<R: Rng + ?Sized>(
    pool: usize,
    m: usize,
    sampling: Sampling,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if m == 0 || m > pool {
        return Err(Error::invalid(format!("m = {m} must lie in 1..={pool}")));
    }
    let mut omega = match sampling {
        Sampling::WithoutReplacement => index::sample(rng, pool, m).into_vec(),
        Sampling::WithReplacement => (0..m).map(|_| rng.random_range(0..pool)).collect(),
    };
    omega.sort_unstable();
    omega.dedup();
    Ok(omega)
}

/// Exact expectation values `Tr(w_a ρ)` for `a ∈ Ω`.
pub fn measure(rho: &DensityMatrix, basis: &OperatorBasis, omega: &[usize]) -> Result<MeasurementRecord> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    let tol = Tolerances::DEFAULT.expectation_imag;
    let mut values = Vec::with_capacity(omega.len());
    for &a in omega {
        if a >= basis.len() {
            return Err(Error::invalid(format!("index {a} outside basis of size {}", basis.len())));
        }
        let z = basis.sparse(a).trace_product(rho.as_dmatrix());
        if z.im.abs() > tol {
            return Err(Error::invalid(format!(
                "expectation of element {a} has imaginary part {:.3e}",
                z.im
            )));
        }
        values.push(z.re);
    }
    MeasurementRecord::new(basis.kind(), basis.dim(), omega.to_vec(), values)
}

/// Forward map `X ↦ (⟨w_a, X⟩)_{a ∈ Ω}`.
pub fn apply(basis: &OperatorBasis, omega: &[usize], x: &DMatrix<C64>) -> Vec<f64> {
    omega.iter().map(|&a| basis.coefficient(a, x)).collect()
}

/// Adjoint map `y ↦ Σ_k y_k w_{Ω[k]}`.
pub fn sensing_adjoint(
    record: &MeasurementRecord,
    basis: &OperatorBasis,
    coeffs: &[f64],
) -> Result<HermitianMatrix> {
    record.check_basis(basis)?;
    if coeffs.len() != record.len() {
        return Err(Error::DimensionMismatch {
            expected: record.len(),
            found: coeffs.len(),
        });
    }
    let mut out = DMatrix::zeros(basis.dim(), basis.dim());
    adjoint_into(basis, record.omega(), coeffs, &mut out);
    HermitianMatrix::from_hermitian_part(&out)
}

pub(crate) fn adjoint_into(basis: &OperatorBasis, omega: &[usize], coeffs: &[f64], out: &mut DMatrix<C64>) {
    for (&a, &y) in omega.iter().zip(coeffs) {
        basis.sparse(a).add_scaled_to(y, out);
    }
}
