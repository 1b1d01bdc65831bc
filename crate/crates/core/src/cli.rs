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

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for invalid arguments, 2 for runtime
//! failures (I/O, malformed input files, single-shot solver
//! non-convergence). Summaries go to stdout as `key=value` lines,
//! diagnostics to stderr. All randomness comes from `--seed`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bases::{coherence, pauli_basis, sud_basis, BasisKind, OperatorBasis};
use crate::error::{Error, Result};
use crate::experiments::{
    self, emit_results, fig1_config, fig2_config, run_su7_benchmark, run_sweep, SweepConfig,
    FIG2_ACCEPTANCE_GRID,
};
use crate::matcore::{from_binary, from_text, to_binary, to_text, to_text_blocks, DensityMatrix};
use crate::recovery::{recover, SolverOptions};
use crate::rng;
use crate::sensing::{measure, sample_omega_with, MeasurementRecord, Sampling};
use crate::states::{embed, plan_embedding, StateKind, StateSpec};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CSTOMO_OUT_DIR";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "cstomo", version, about = "Compressed-sensing tomography for qudits")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory (default: $CSTOMO_OUT_DIR or the current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print progress to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump or check an operator basis.
    Basis(BasisArgs),
    /// Coherence parameters of a state with respect to a basis.
    Coherence(CoherenceArgs),
    /// Generate a state.
    State(StateArgs),
    /// Sample settings and record exact expectation values.
    Measure(MeasureArgs),
    /// Recover a state from a measurement record.
    Recover(RecoverArgs),
    /// Run a sweep described by a config file.
    Sweep(SweepArgs),
    /// Run a reproduction preset.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Pauli,
    Sud,
}

impl From<KindArg> for BasisKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Pauli => BasisKind::PauliTensor,
            KindArg::Sud => BasisKind::SuD,
        }
    }
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub dim: usize,
    /// Print the orthonormality residual instead of the elements.
    #[arg(long)]
    pub check: bool,
    /// Write elements to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub dim: usize,
    /// `rho1`, `rho2`, `haar` or a path to a matrix file.
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StateKindArg {
    HaarPure,
    HaarRank,
    Rho1,
    Rho2,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq)]
pub enum FormatArg {
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub kind: StateKindArg,
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    /// Allow rho1/rho2 at dimensions other than 7.
    #[arg(long)]
    pub generalized: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Output file; text goes to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// State file (text or binary).
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub m: usize,
    /// Swap the state into the smallest power-of-two ancilla before measuring.
    #[arg(long)]
    pub embed: bool,
    /// Sample with replacement (repeated settings collapse).
    #[arg(long)]
    pub with_replacement: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[arg(long)]
    pub record: PathBuf,
    /// File for the estimate; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub penalty: Option<f64>,
    /// Keep the penalty fixed.
    #[arg(long)]
    pub fixed_penalty: bool,
    /// Add a positivity constraint (not part of the plain recovery program).
    #[arg(long)]
    pub psd: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Override the worker count from the config.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq)]
pub enum Preset {
    Fig1,
    Fig2,
    Su7,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub preset: Preset,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Full-scale trial counts (2000 / 1000) and the complete m grid.
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Runs the tool on `argv` (including the program name), writing to the
/// process streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let echo = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match run(&cli, &echo, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::ResourceLimit(_) => 1,
        Error::Io { .. } | Error::Parse { .. } | Error::BlockLeakage { .. } => 2,
    }
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn build_basis(kind: KindArg, dim: usize) -> Result<OperatorBasis> {
    match kind {
        KindArg::Sud => sud_basis(dim),
        KindArg::Pauli => {
            if !dim.is_power_of_two() || dim < 2 {
                return Err(Error::invalid(format!("Pauli basis needs a power-of-two dimension, got {dim}")));
            }
            pauli_basis(dim.trailing_zeros() as usize)
        }
    }
}

fn read_matrix_file(path: &Path) -> Result<DensityMatrix> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let m = match std::str::from_utf8(&bytes) {
        Ok(text) if text.trim_start().starts_with('d') => from_text(text)?,
        _ => from_binary(&bytes)?,
    };
    DensityMatrix::new(m.into_dmatrix()).map_err(|e| Error::Parse {
        line: 1,
        message: format!("{}: {e}", path.display()),
    })
}

fn write_out(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes a primary output file and its manifest \`<path>.manifest\`.
fn write_primary(cli: &Cli, echo: &str, path: &Path, contents: &[u8]) -> Result<()> {
    write_out(path, contents)?;
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest");
    write_out(Path::new(&name), manifest(cli.seed, echo, "").as_bytes())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

/// Manifest text: tool version, the argument echo, the seed that drove
/// the run, then any configuration lines.
fn manifest(seed: u64, echo: &str, extra: &str) -> String {
    format!(
        "tool=cstomo\nversion={}\ncommand={}\nseed={}\n{}",
        env!("CARGO_PKG_VERSION"),
        echo,
        seed,
        extra
    )
}

fn run(cli: &Cli, echo: &str, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Basis(a) => {
            let basis = build_basis(a.kind, a.dim)?;
            if a.check {
                emit(
                    out,
                    &format!(
                        "kind={}\ndim={}\nelements={}\northonormality_residual={:e}\n",
                        basis.kind().name(),
                        basis.dim(),
                        basis.len(),
                        basis.orthonormality_residual()
                    ),
                )?;
            } else {
                let blocks: Vec<_> = basis.elements().collect();
                let text = to_text_blocks(&blocks);
                match &a.output {
                    Some(p) => write_primary(cli, echo, p, text.as_bytes())?,
                    None => emit(out, &text)?,
                }
            }
        }
        Command::Coherence(a) => {
            let basis = build_basis(a.kind, a.dim)?;
            let rho = match a.state.as_str() {
                "rho1" | "rho2" => StateSpec {
                    dim: a.dim,
                    rank: 1,
                    kind: if a.state == "rho1" { StateKind::Rho1 } else { StateKind::Rho2 },
                    seed: cli.seed,
                    generalized: true,
                }
                .generate()?,
                "haar" => StateSpec {
                    dim: a.dim,
                    rank: a.rank,
                    kind: StateKind::HaarRankR,
                    seed: cli.seed,
                    generalized: false,
                }
                .generate()?,
                path => read_matrix_file(Path::new(path))?,
            };
            let report = coherence(&basis, &rho)?;
            emit(
                out,
                &format!("kind={}\ndim={}\n{}", basis.kind().name(), basis.dim(), report.to_key_values()),
            )?;
        }
        Command::State(a) => {
            let kind = match a.kind {
                StateKindArg::HaarPure => StateKind::HaarPure,
                StateKindArg::HaarRank => StateKind::HaarRankR,
                StateKindArg::Rho1 => StateKind::Rho1,
                StateKindArg::Rho2 => StateKind::Rho2,
            };
            let rank = if matches!(a.kind, StateKindArg::HaarRank) { a.rank } else { 1 };
            let rho = StateSpec {
                dim: a.dim,
                rank,
                kind,
                seed: cli.seed,
                generalized: a.generalized,
            }
            .generate()?;
            let bytes = match a.format {
                FormatArg::Text => to_text(&rho).into_bytes(),
                FormatArg::Binary => to_binary(&rho),
            };
            match &a.output {
                Some(p) => write_primary(cli, echo, p, &bytes)?,
                None if a.format == FormatArg::Text => emit(out, &to_text(&rho))?,
                None => return Err(Error::invalid("binary output needs --output")),
            }
        }
        Command::Measure(a) => {
            let rho = read_matrix_file(&a.state)?;
            let rho = if a.embed {
                embed(&rho, &plan_embedding(rho.dim())?)?
            } else {
                rho
            };
            let basis = build_basis(a.kind, rho.dim())?;
            let sampling = if a.with_replacement {
                Sampling::WithReplacement
            } else {
                Sampling::WithoutReplacement
            };
            let omega = sample_omega_with(basis.len(), a.m, sampling, &mut rng::from_seed(cli.seed))?;
            let record = measure(&rho, &basis, &omega)?;
            match &a.output {
                Some(p) => write_primary(cli, echo, p, record.to_text().as_bytes())?,
                None => emit(out, &record.to_text())?,
            }
        }
        Command::Recover(a) => {
            let text = std::fs::read_to_string(&a.record).map_err(|e| Error::io(&a.record, e))?;
            let record = MeasurementRecord::from_text(&text)?;
            let basis = match record.basis_kind() {
                BasisKind::SuD => build_basis(KindArg::Sud, record.dim())?,
                BasisKind::PauliTensor => build_basis(KindArg::Pauli, record.dim())?,
            };
            let mut opts = SolverOptions {
                psd: a.psd,
                adaptive_penalty: !a.fixed_penalty,
                ..SolverOptions::default()
            };
            if let Some(n) = a.max_iters {
                opts.max_iters = n;
            }
            if let Some(p) = a.penalty {
                opts.penalty = p;
            }
            let result = recover(&basis, &record, &opts)?;
            let estimate = to_text(&result.sigma_star);
            match &a.output {
                Some(p) => {
                    write_primary(cli, echo, p, estimate.as_bytes())?;
                    emit(out, &result.diagnostics())?;
                }
                None => emit(out, &format!("{estimate}{}", result.diagnostics()))?,
            }
            if !result.converged {
                let _ = writeln!(err, "solver did not converge in {} iterations", result.iterations);
                return Ok(2);
            }
        }
        Command::Sweep(a) => {
            let text = std::fs::read_to_string(&a.config).map_err(|e| Error::io(&a.config, e))?;
            let mut config = experiments::parse_config(&text)?;
            if a.threads.is_some() {
                config.threads = a.threads;
            }
            run_and_write(cli, echo, &config, "sweep", out, err)?;
        }
        Command::Reproduce(a) => match a.preset {
            Preset::Su7 => {
                let trials = a.trials.unwrap_or(500);
                let report = run_su7_benchmark(trials, cli.seed)?;
                let text = report.to_key_values();
                let dir = out_dir(cli);
                write_out(&dir.join("su7.txt"), text.as_bytes())?;
                write_out(
                    &dir.join("su7_manifest.txt"),
                    manifest(cli.seed, echo, &format!("trials={trials}\n")).as_bytes(),
                )?;
                emit(out, &text)?;
            }
            Preset::Fig1 | Preset::Fig2 => {
                let is_fig1 = a.preset == Preset::Fig1;
                let trials = a.trials.unwrap_or(match (is_fig1, a.full) {
                    (true, false) => 200,
                    (true, true) => 2000,
                    (false, false) => 100,
                    (false, true) => 1000,
                });
                let mut config = if is_fig1 {
                    fig1_config(trials, cli.seed)
                } else {
                    fig2_config(trials, cli.seed)
                };
                if !is_fig1 && !a.full {
                    config.m_values = FIG2_ACCEPTANCE_GRID.iter().map(|k| k * 31).collect();
                }
                config.threads = a.threads;
                let stem = if is_fig1 { "fig1" } else { "fig2" };
                run_and_write(cli, echo, &config, stem, out, err)?;
            }
        },
    }
    Ok(0)
}

fn run_and_write(
    cli: &Cli,
    echo: &str,
    config: &SweepConfig,
    stem: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    if cli.verbose > 0 {
        let _ = writeln!(
            err,
            "running {} cells x {} trials",
            config.strategies.len() * config.m_values.len(),
            config.trials
        );
    }
    let result = run_sweep(config)?;
    let dir = out_dir(cli);
    let files = emit_results(&result.rows, &dir, stem)?;
    write_out(
        &dir.join(format!("{stem}_system.csv")),
        experiments::rows_csv(&result.system_rows).as_bytes(),
    )?;
    write_out(
        &dir.join(format!("{stem}_trials.csv")),
        experiments::trials_csv(&result.trials).as_bytes(),
    )?;
    write_out(
        &dir.join(format!("{stem}_manifest.txt")),
        manifest(config.master_seed, echo, &experiments::config_text(config)).as_bytes(),
    )?;
    if cli.verbose > 0 {
        let _ = writeln!(err, "wrote {}", files.csv.display());
    }
    emit(out, &experiments::rows_csv(&result.rows))
}
