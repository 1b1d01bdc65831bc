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

//! Numerical thresholds shared across the crate.
//!
//! Every check that compares a floating-point residual against a bound reads
//! it from [`Tolerances`]. Library entry points use [`Tolerances::DEFAULT`];
//! the `*_with` variants accept a caller-supplied record so tests can tighten
//! or relax individual bounds.

/// Tolerance record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Hermiticity bound: `‖A − A†‖₂ ≤ hermitian · max(1, ‖A‖₂)`.
    pub hermitian: f64,
    /// Lowest eigenvalue a density matrix may have.
    pub density_min_eig: f64,
    /// Allowed deviation of a density matrix trace from 1.
    pub density_trace: f64,
    /// Relative eigenvalue threshold used to count rank and build support projectors.
    pub rank: f64,
    /// Most negative eigenvalue accepted by `psd_sqrt`.
    pub psd_negative: f64,
    /// Negative eigenvalues of solver output above `-fidelity_clamp` are
    /// treated as rounding noise when clamping to the PSD cone.
    pub fidelity_clamp: f64,
    /// Eigenvalues with `|λ| ≤ spectral_floor · λ_max` are zeroed before square roots.
    pub spectral_floor: f64,
    /// Mass allowed outside the system block in `extract`.
    pub leakage: f64,
    /// Allowed imaginary part of an expectation value.
    pub expectation_imag: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        density_min_eig: 1e-10,
        density_trace: 1e-10,
        rank: 1e-10,
        psd_negative: 1e-8,
        fidelity_clamp: 1e-8,
        spectral_floor: 1e-13,
        leakage: 1e-6,
        expectation_imag: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
