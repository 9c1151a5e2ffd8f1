//! `symkron`: command-line front end for the symmetric Kronecker library.

mod bench;
mod check;
mod config;
mod exit;
mod wavepacket;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use symkron_core::caps;
use symkron_core::io::{self, SymVecJson};
use symkron_core::kron_oracle::symmetric_kron_dense;
use symkron_core::matrix::relative_error;
use symkron_core::multiindex::{lex_enumerate, RedundantEnumeration};
use symkron_core::symkron::SymKronOperator;
use symkron_core::symspace::BasisMatrix;
use symkron_core::Error;

use exit::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "symkron", version, about = "Symmetric Kronecker products and Hagedorn wave packets")]
struct Cli {
    /// JSON object of flag values; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List multi-indices of modulus n in canonical order.
    Enumerate(EnumerateArgs),
    /// Write the sparse orthonormal basis P_n as 1-based triplets.
    Basis(BasisArgs),
    /// Apply S_n(M) to a compressed vector.
    Apply(ApplyArgs),
    /// Run the randomized invariant suites.
    Check(check::CheckArgs),
    /// Evaluate, transform, realign or flow wave packets.
    #[command(subcommand)]
    Wavepacket(wavepacket::WavepacketCommand),
    /// Time the compressed apply against the explicit oracle.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    order: usize,
    /// List the redundant enumeration of length d^n instead.
    #[arg(long)]
    redundant: bool,
    /// Largest d^n accepted with --redundant.
    #[arg(long, default_value_t = 4096)]
    limit: u128,
}

#[derive(Debug, Args)]
struct BasisArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    order: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    /// d x d matrix as nested [re, im] rows.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    order: usize,
    /// Compressed vector {dim, order, labels?, data}.
    #[arg(long)]
    vector: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also report the relative residual against the dense oracle.
    #[arg(long)]
    check: bool,
    /// Include labels in the output.
    #[arg(long)]
    labels: bool,
}

pub(crate) fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::new(exit::FAILURE, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn run_enumerate(a: EnumerateArgs) -> CliResult<()> {
    let labels: Vec<Vec<u32>> = if a.redundant {
        let len = caps::full_len(a.dim, a.order).unwrap_or(u128::MAX);
        if len > a.limit {
            return Err(Error::CapExceeded {
                what: "redundant enumeration listing",
                len,
                cap: a.limit,
            }
            .into());
        }
        RedundantEnumeration::new(a.dim, a.order)?
            .to_vec()?
            .into_iter()
            .map(|k| k.entries().to_vec())
            .collect()
    } else {
        lex_enumerate(a.dim, a.order)?.iter().map(|k| k.entries().to_vec()).collect()
    };
    emit(None, &serde_json::to_string(&labels).expect("plain data"))
}

fn run_basis(a: BasisArgs) -> CliResult<()> {
    let p = BasisMatrix::build(a.dim, a.order)?;
    emit(a.out.as_ref(), &io::to_json_string(&p.to_triplets()))
}

#[derive(Serialize)]
struct ApplyOutput {
    #[serde(flatten)]
    result: SymVecJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_residual: Option<f64>,
}

fn run_apply(a: ApplyArgs) -> CliResult<()> {
    let m = io::read_matrix(&read_file(&a.matrix)?)?;
    let y = io::read_symvec(&read_file(&a.vector)?)?;
    if !m.is_square() || m.rows() != y.dim() || a.order != y.order() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, --order is {}, vector has dim {} and order {}",
            m.rows(),
            m.cols(),
            a.order,
            y.dim(),
            y.order()
        ))
        .into());
    }
    let op = SymKronOperator::new(&m, a.order)?;
    let z = op.apply(&y)?;
    let oracle_residual = if a.check {
        match symmetric_kron_dense(&m, a.order) {
            Ok(dense) => Some(relative_error(z.data(), &dense.matvec(y.data())?)),
            Err(Error::CapExceeded { len, cap, .. }) => {
                eprintln!("note: oracle skipped, d^n = {len} exceeds the explicit cap {cap}");
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let out = ApplyOutput {
        result: SymVecJson::from_symvec(&z, a.labels),
        oracle_residual,
    };
    emit(a.out.as_ref(), &io::to_json_string(&out))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Enumerate(a) => run_enumerate(a),
        Command::Basis(a) => run_basis(a),
        Command::Apply(a) => run_apply(a),
        Command::Check(a) => check::run(a),
        Command::Wavepacket(c) => wavepacket::run(c),
        Command::Bench(a) => bench::run(a),
    }
}

fn main() -> ExitCode {
    let argv = match config::merged_args(std::env::args().collect()) {
        Ok(v) => v,
        Err(e) => return e.report(),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
