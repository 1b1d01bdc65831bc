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

//! Compressed-sensing state tomography for qudits of any dimension.
//!
//! The crate reconstructs low-rank density matrices from a random subset of
//! expectation values by nuclear-norm minimization, and compares two
//! measurement strategies for dimensions that are not a power of two:
//!
//! * measuring generalized Gell-Mann (SU(d)) observables directly, and
//! * swapping the state into a power-of-two ancilla and measuring Pauli words there.
//!
//! Modules, bottom-up:
//!
//! * [`matcore`]: validated matrix types, norms, eigendecomposition, fidelity, file formats.
//! * [`bases`]: Pauli and SU(d) operator bases, coherence parameters.
//! * [`states`]: random and reference states, swap embedding, dilation check.
//! * [`sensing`]: sampling of measurement settings and the sensing map.
//! * [`recovery`]: ADMM solver and an independent reference solver.
//! * [`experiments`]: Monte Carlo sweeps and the reproduction presets.
//! * [`cli`]: the `cstomo` command-line front end.

pub mod bases;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod matcore;
pub mod recovery;
pub mod rng;
pub mod sensing;
pub mod states;
pub mod tolerances;

pub use error::{Error, Result};
