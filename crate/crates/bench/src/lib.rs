//! Fixtures shared by the criterion benchmarks.

use symkron_core::caps;
use symkron_core::kron_oracle::iterated_kron;
use symkron_core::multiindex::level_size;
use symkron_core::random::SeededRng;
use symkron_core::symspace::{expand, BasisMatrix};
use symkron_core::{ComplexMatrix, Result, SymVec, C64};

/// Seeded random matrix and compressed vector for `(d, n)`.
pub fn fixture(d: usize, n: usize, seed: u64) -> Result<(ComplexMatrix, SymVec)> {
    let mut rng = SeededRng::new(seed);
    let m = rng.complex_matrix(d, d);
    let y = SymVec::new(d, n, rng.complex_vector(level_size(d, n)?))?;
    Ok((m, y))
}

/// Whether the explicit oracle may run at `(d, n)`.
pub fn oracle_allowed(d: usize, n: usize) -> bool {
    caps::check_explicit("bench oracle", d, n).is_ok()
}

/// `P_n · M^{n⊗} · P_n* y`, every factor built explicitly.
pub fn oracle_apply(m: &ComplexMatrix, n: usize, y: &SymVec) -> Result<Vec<C64>> {
    let k = iterated_kron(m, n)?;
    let p = BasisMatrix::build(m.rows(), n)?;
    p.apply(&k.matvec(expand(y)?.data())?)
}
