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

use std::path::Path;
use std::process::{Command, Output};

fn cstomo(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cstomo"))
        .args(args)
        .env("CSTOMO_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("missing {key} in {text}"))
}

#[test]
fn basis_check_prints_residual() {
    let dir = tempfile::tempdir().unwrap();
    let o = cstomo(&["basis", "--kind", "sud", "--dim", "7", "--check"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(value(&text, "elements"), "49");
    assert!(value(&text, "orthonormality_residual").parse::<f64>().unwrap() <= 1e-12);
}

#[test]
fn coherence_of_rho1_in_su7() {
    let dir = tempfile::tempdir().unwrap();
    let o = cstomo(&["coherence", "--kind", "sud", "--dim", "7", "--state", "rho1"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(value(&text, "nu1").parse::<f64>().unwrap(), 6.0);
    // With P = |0⟩⟨0|, ‖Pw + wP − PwP‖₂² = 2‖w e₀‖² − |w₀₀|². The symmetric
    // generator coupling levels 0 and 1 gives 2·½ = 1, diagonal ones at most
    // 2/2 − 1/4, so ν₂ = (7/2)·1.
    assert!((value(&text, "nu2").parse::<f64>().unwrap() - 3.5).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = cstomo(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = cstomo(&["state", "--kind", "haar-rank", "--dim", "3", "--rank", "5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = cstomo(&["recover", "--record", "/no/such/file"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pipeline_state_measure_recover() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let o = cstomo(&["--seed", "7", "state", "--kind", "haar-pure", "--dim", "5", "--output", &p("rho.txt")], dir.path());
    assert!(o.status.success());
    assert!(dir.path().join("rho.txt.manifest").exists());
    let o = cstomo(&["--seed", "7", "measure", "--state", &p("rho.txt"), "--kind", "sud", "--m", "25", "--output", &p("rec.txt")], dir.path());
    assert!(o.status.success());
    let o = cstomo(&["recover", "--record", &p("rec.txt"), "--output", &p("sigma.txt")], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(value(&text, "converged"), "true");
    let rho = cstomo::matcore::from_text(&std::fs::read_to_string(p("rho.txt")).unwrap()).unwrap();
    let sigma = cstomo::matcore::from_text(&std::fs::read_to_string(p("sigma.txt")).unwrap()).unwrap();
    assert!((rho.as_dmatrix() - sigma.as_dmatrix()).norm() < 1e-6);

    // Ancilla route: embed a 3-level state into two qubits and measure Pauli words.
    let o = cstomo(&["state", "--kind", "rho2", "--dim", "3", "--generalized", "--format", "binary", "--output", &p("r3.bin")], dir.path());
    assert!(o.status.success());
    let o = cstomo(&["measure", "--state", &p("r3.bin"), "--kind", "pauli", "--embed", "--m", "16"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("basis=pauli d=4 m=16"));
}

#[test]
fn single_shot_non_convergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("rec.txt");
    let o = cstomo(&["measure", "--state", "missing.txt", "--kind", "sud", "--m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let state = dir.path().join("s.txt");
    assert!(cstomo(&["state", "--kind", "haar-pure", "--dim", "6", "--output", state.to_str().unwrap()], dir.path()).status.success());
    assert!(cstomo(&["measure", "--state", state.to_str().unwrap(), "--kind", "sud", "--m", "12", "--output", rec.to_str().unwrap()], dir.path()).status.success());
    let o = cstomo(&["recover", "--record", rec.to_str().unwrap(), "--max-iters", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(value(&stdout(&o), "converged"), "false");
}

#[test]
fn sweep_outputs_are_byte_identical_and_have_manifest() {
    let config = "d1=4\nrank=1\nstrategies=su_direct,ancilla_pauli\nm_values=4,8,16\ntrials=6\nseed=5\n";
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("sweep.cfg");
        std::fs::write(&cfg, config).unwrap();
        let o = cstomo(&["sweep", "--config", cfg.to_str().unwrap(), "--threads", threads], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let csv = std::fs::read(dir.path().join("sweep.csv")).unwrap();
        let trials = std::fs::read(dir.path().join("sweep_trials.csv")).unwrap();
        let manifest = std::fs::read_to_string(dir.path().join("sweep_manifest.txt")).unwrap();
        assert!(manifest.contains("version=") && manifest.contains("seed=5") && manifest.contains("m_values=4,8,16"));
        assert!(dir.path().join("sweep_plot.py").exists());
        assert!(String::from_utf8(csv.clone()).unwrap().starts_with("strategy,m,trials,mean_fidelity,std_fidelity,success_rate\n"));
        outputs.push((csv, trials));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn state_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = cstomo(&["--seed", "3", "state", "--kind", "haar-rank", "--dim", "4", "--rank", "2"], dir.path());
    let b = cstomo(&["--seed", "3", "state", "--kind", "haar-rank", "--dim", "4", "--rank", "2"], dir.path());
    let c = cstomo(&["--seed", "4", "state", "--kind", "haar-rank", "--dim", "4", "--rank", "2"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
