//! Randomized invariant suites with a deterministic report.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use symkron_core::caps;
use symkron_core::io::{self, MatrixJson, SymVecJson};
use symkron_core::kron_oracle::{iterated_kron_apply, symmetric_kron_dense};
use symkron_core::matrix::{relative_error, vec_norm};
use symkron_core::multiindex::{lex_entry, level_size, multinomial_of, SigmaPartition};
use symkron_core::random::SeededRng;
use symkron_core::symkron::{self, SymKronOperator};
use symkron_core::symspace::{full_from_labels, labels_from_full, BasisMatrix};
use symkron_core::{ComplexMatrix, C64, SymVec};

use crate::exit::{CliError, CliResult, FAILURE};

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    order: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pass threshold; the inverse suite allows 100 times more.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Perturb the matrices of the unitary suite away from unitarity.
    #[arg(long)]
    force_non_unitary: bool,
    /// Write the worst failing case here instead of stderr.
    #[arg(long)]
    replay_out: Option<PathBuf>,
}

/// Largest condition number of matrices drawn for the inverse suite.
const INVERSE_MAX_COND: f64 = 10.0;

#[derive(Debug, Clone, Serialize)]
struct Replay {
    suite: &'static str,
    trial: usize,
    seed: u64,
    dim: usize,
    order: usize,
    residual: f64,
    tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<SymVecJson>,
}

struct Suite {
    name: &'static str,
    /// Multiplier on `--tol`.
    slack: f64,
    max_residual: f64,
    worst: Option<Replay>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            slack: 1.0,
            max_residual: 0.0,
            worst: None,
        }
    }

    fn record(&mut self, a: &CheckArgs, trial: usize, residual: f64, m: Option<&ComplexMatrix>, y: Option<&SymVec>) {
        // NaN counts as the worst possible residual.
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if self.worst.is_none() || r > self.max_residual {
            self.max_residual = r;
            self.worst = Some(Replay {
                suite: self.name,
                trial,
                seed: a.seed,
                dim: a.dim,
                order: a.order,
                residual: r,
                tol: a.tol * self.slack,
                matrix: m.map(MatrixJson::from),
                vector: y.map(|y| SymVecJson::from_symvec(y, false)),
            });
        }
    }

    fn tol(&self, base: f64) -> f64 {
        base * self.slack
    }

    fn passed(&self, base: f64) -> bool {
        self.max_residual <= self.tol(base)
    }
}

fn random_symvec(rng: &mut SeededRng, d: usize, n: usize) -> CliResult<SymVec> {
    Ok(SymVec::new(d, n, rng.complex_vector(level_size(d, n)?))?)
}

pub fn run(a: CheckArgs) -> CliResult<()> {
    let (d, n) = (a.dim, a.order);
    caps::check_explicit("dense oracle for the check suites", d, n)?;
    let mut rng = SeededRng::new(a.seed);
    let mut suites = Vec::new();

    let mut s = Suite::new("oracle_equivalence");
    for t in 0..a.trials {
        let m = rng.complex_matrix(d, d);
        let y = random_symvec(&mut rng, d, n)?;
        let fast = SymKronOperator::new(&m, n)?.apply(&y)?;
        let dense = symmetric_kron_dense(&m, n)?.matvec(y.data())?;
        s.record(&a, t, relative_error(fast.data(), &dense), Some(&m), Some(&y));
    }
    suites.push(s);

    let mut s = Suite::new("invariance");
    for t in 0..a.trials {
        let m = rng.complex_matrix(d, d);
        let x = random_symvec(&mut rng, d, n)?;
        let out = iterated_kron_apply(&m, n, &full_from_labels(d, n, x.data())?)?;
        let rebuilt = full_from_labels(d, n, &labels_from_full(&out))?;
        let scale = vec_norm(out.data()).max(f64::MIN_POSITIVE);
        let dev = out
            .data()
            .iter()
            .zip(rebuilt.data())
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max);
        s.record(&a, t, dev / scale, Some(&m), Some(&x));
    }
    suites.push(s);

    let mut s = Suite::new("adjoint");
    for t in 0..a.trials {
        let m = rng.complex_matrix(d, d);
        let norm = symkron::materialize(&m, n)?.frobenius_norm();
        s.record(&a, t, symkron::check_adjoint(&m, n)? / norm, Some(&m), None);
    }
    suites.push(s);

    // Rounding in S_n(M)·S_n(M⁻¹) grows with cond(M)^n.
    let mut s = Suite::new("inverse");
    s.slack = 100.0;
    for t in 0..a.trials {
        let m = rng.well_conditioned_matrix(d, INVERSE_MAX_COND);
        s.record(&a, t, symkron::check_inverse(&m, n)?.residual, Some(&m), None);
    }
    suites.push(s);

    let mut s = Suite::new("unitary");
    for t in 0..a.trials {
        let mut u = rng.unitary(d);
        if a.force_non_unitary {
            u = u.scale(C64::new(1.1, 0.0));
        }
        s.record(&a, t, symkron::check_unitary(&u, n)?, Some(&u), None);
    }
    suites.push(s);

    let mut s = Suite::new("partition");
    let part = SigmaPartition::new(d, n)?;
    let total: u128 = part.cardinalities().iter().map(|&c| c as u128).sum();
    let full = caps::full_len(d, n).unwrap_or(u128::MAX);
    let mut mismatches = (total != full) as usize;
    for (i, &c) in part.cardinalities().iter().enumerate() {
        mismatches += (multinomial_of(&lex_entry(d, n, i + 1)?) != Some(c)) as usize;
    }
    s.record(&a, 0, mismatches as f64, None, None);
    suites.push(s);

    let mut s = Suite::new("orthonormality");
    let p = BasisMatrix::build(d, n)?.to_dense();
    let gram = &p * &p.adjoint();
    s.record(&a, 0, gram.distance(&ComplexMatrix::identity(gram.rows())), None, None);
    suites.push(s);

    let mut report = String::new();
    let _ = writeln!(
        report,
        "symkron check dim={d} order={n} trials={} seed={} tol={:.16e}",
        a.trials, a.seed, a.tol
    );
    let mut failed: Option<&Suite> = None;
    for s in &suites {
        let ok = s.passed(a.tol);
        let _ = writeln!(
            report,
            "{:<20} max_residual={:.16e} tol={:.16e} {}",
            s.name,
            s.max_residual,
            s.tol(a.tol),
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok && failed.is_none() {
            failed = Some(s);
        }
    }
    let _ = writeln!(report, "result {}", if failed.is_none() { "PASS" } else { "FAIL" });
    print!("{report}");

    let Some(s) = failed else {
        return Ok(());
    };
    let replay = io::to_json_string(s.worst.as_ref().expect("failed suite has a case"));
    match &a.replay_out {
        Some(path) => crate::emit(Some(path), &replay)?,
        None => eprintln!("{replay}"),
    }
    Err(CliError::new(FAILURE, format!("suite {} failed", s.name)))
}
