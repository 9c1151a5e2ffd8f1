//! Wall-clock comparison of the compressed apply with the explicit oracle.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;

use symkron_core::caps;
use symkron_core::kron_oracle::iterated_kron;
use symkron_core::multiindex::level_size;
use symkron_core::random::SeededRng;
use symkron_core::symkron::SymKronOperator;
use symkron_core::symspace::{expand, BasisMatrix};
use symkron_core::SymVec;

use crate::emit;
use crate::exit::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    dim: usize,
    /// Inclusive range `LO..HI` (also `LO-HI`) or a single order.
    #[arg(long, value_parser = parse_range)]
    order_range: (usize, usize),
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => (parse(s)?, parse(s)?),
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// `P_n · M^{n⊗} · P_n* y` with everything built explicitly.
fn oracle_apply(m: &symkron_core::ComplexMatrix, n: usize, y: &SymVec) -> symkron_core::Result<Vec<symkron_core::C64>> {
    let k = iterated_kron(m, n)?;
    let p = BasisMatrix::build(m.rows(), n)?;
    p.apply(&k.matvec(expand(y)?.data())?)
}

pub fn run(a: BenchArgs) -> CliResult<()> {
    if a.dim == 0 {
        return Err(CliError::parse("--dim must be positive"));
    }
    let mut rng = SeededRng::new(a.seed);
    let mut csv = String::from(
        "dim,order,rep,L_n,d_pow_n,compressed_seconds,oracle_seconds,compressed_aux_elements,oracle_elements\n",
    );
    for n in a.order_range.0..=a.order_range.1 {
        let len = level_size(a.dim, n)?;
        let full = caps::full_len(a.dim, n);
        let explicit_ok = caps::check_explicit("bench oracle", a.dim, n).is_ok();
        for rep in 0..a.reps {
            let m = rng.complex_matrix(a.dim, a.dim);
            let y = SymVec::new(a.dim, n, rng.complex_vector(len))?;

            let start = Instant::now();
            let op = SymKronOperator::new(&m, n)?;
            let (_, stats) = op.apply_with_stats(&y)?;
            let fast = start.elapsed().as_secs_f64();

            let (oracle_time, oracle_mem) = if explicit_ok {
                let start = Instant::now();
                oracle_apply(&m, n, &y)?;
                let t = start.elapsed().as_secs_f64();
                let dn = full.expect("within cap");
                (format!("{t:.9e}"), (dn * dn + 2 * dn).to_string())
            } else {
                ("capped".to_string(), "capped".to_string())
            };
            let full_text = full.map_or_else(|| "overflow".to_string(), |f| f.to_string());
            let _ = writeln!(
                csv,
                "{},{n},{rep},{len},{full_text},{fast:.9e},{oracle_time},{},{oracle_mem}",
                a.dim, stats.aux_elements
            );
        }
    }
    emit(a.out.as_ref(), &csv)
}

#[cfg(test)]
mod tests {
    use super::parse_range;

    #[test]
    fn range_forms() {
        assert_eq!(parse_range("4..8"), Ok((4, 8)));
        assert_eq!(parse_range("4..=8"), Ok((4, 8)));
        assert_eq!(parse_range("3-5"), Ok((3, 5)));
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert!(parse_range("5..2").is_err());
    }
}
