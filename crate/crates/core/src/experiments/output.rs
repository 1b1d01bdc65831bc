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

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{Strategy, SweepRow, TrialOutcome};
use crate::error::{Error, Result};

pub const ROWS_HEADER: &str = "strategy,m,trials,mean_fidelity,std_fidelity,success_rate";

/// Paths written by [`emit_results`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub plot_script: PathBuf,
}

pub fn rows_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(ROWS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:?},{:?},{:?}",
            r.strategy.name(),
            r.m,
            r.trials,
            r.mean_fidelity,
            r.std_fidelity,
            r.success_rate
        );
    }
    out
}

pub fn parse_rows_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == ROWS_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{ROWS_HEADER}'"),
            })
        }
    }
    lines
        .map(|(k, line)| {
            let err = |message: String| Error::Parse { line: k + 1, message };
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 6 {
                return Err(err(format!("expected 6 fields, found {}", f.len())));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| err(format!("bad number '{s}'")));
            let int = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad integer '{s}'")));
            Ok(SweepRow {
                strategy: Strategy::parse(f[0]).map_err(|e| err(e.to_string()))?,
                m: int(f[1])?,
                trials: int(f[2])?,
                mean_fidelity: num(f[3])?,
                std_fidelity: num(f[4])?,
                success_rate: num(f[5])?,
            })
        })
        .collect()
}

/// Raw per-trial log.
pub fn trials_csv(trials: &[TrialOutcome]) -> String {
    let mut out =
        String::from("strategy,m,trial,fidelity,fidelity_system,leaked,converged,iterations,success\n");
    for t in trials {
        let _ = writeln!(
            out,
            "{},{},{},{:?},{:?},{:?},{},{},{}",
            t.strategy.name(),
            t.m,
            t.trial,
            t.fidelity,
            t.fidelity_system,
            t.leaked,
            t.converged,
            t.iterations,
            t.success
        );
    }
    out
}

/// Writes `<stem>.csv` and a matplotlib script `<stem>_plot.py` that draws
/// mean fidelity per strategy with a shaded mean ± std band.
pub fn emit_results(rows: &[SweepRow], dir: &Path, stem: &str) -> Result<OutputFiles> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to emit"));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv = dir.join(format!("{stem}.csv"));
    let plot_script = dir.join(format!("{stem}_plot.py"));
    write_file(&csv, &rows_csv(rows))?;
    write_file(&plot_script, &plot_script_text(&format!("{stem}.csv"), &format!("{stem}.png")))?;
    Ok(OutputFiles { csv, plot_script })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn plot_script_text(csv_name: &str, png_name: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
# Mean fidelity against the number of measurement settings, one curve per
# strategy, shaded between mean - std and mean + std.
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "{csv_name}")
curves = {{}}
with open(path) as f:
    for row in csv.DictReader(f):
        c = curves.setdefault(row["strategy"], ([], [], []))
        c[0].append(int(row["m"]))
        c[1].append(float(row["mean_fidelity"]))
        c[2].append(float(row["std_fidelity"]))

labels = {{"su_direct": "SU(d) measurements", "ancilla_pauli": "Pauli measurements on ancilla"}}
fig, ax = plt.subplots(figsize=(6, 4))
for name, (m, mean, std) in sorted(curves.items()):
    lo = [a - b for a, b in zip(mean, std)]
    hi = [a + b for a, b in zip(mean, std)]
    ax.plot(m, mean, marker="o", label=labels.get(name, name))
    ax.fill_between(m, lo, hi, alpha=0.25)
ax.set_xlabel("number of measurement settings m")
ax.set_ylabel("fidelity")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "{png_name}"), dpi=150)
"#
    )
}
