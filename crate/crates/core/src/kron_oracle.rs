//! Dense reference implementations of `M^{n⊗}` and `S_n(M) = P_n M^{n⊗} P_n*`.
//!
//! Everything here is exponential in `n` and deliberately unoptimized. It
//! exists to check the compressed path in `symkron`, never to replace it.

use crate::caps;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::symspace::{BasisMatrix, FullVec};

/// Which route [`iterated_kron_apply_with`] takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KronPath {
    /// Explicit matrix for `d^n ≤ 64`, mode products otherwise.
    Auto,
    /// Build `M^{n⊗}` and multiply; `d^n ≤ 2^12`.
    Explicit,
    /// Contract `M` along each of the `n` tensor modes; `d^n` within the full cap.
    ModeProduct,
}

const AUTO_EXPLICIT_LIMIT: usize = 64;

/// Standard Kronecker product; block `(i, j)` is `a_ij · b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows as u128 > caps::EXPLICIT_CAP || cols as u128 > caps::EXPLICIT_CAP {
        return Err(Error::CapExceeded {
            what: "explicit Kronecker product",
            len: rows.max(cols) as u128,
            cap: caps::EXPLICIT_CAP,
        });
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| {
        a[(i / b.rows(), j / b.cols())] * b[(i % b.rows(), j % b.cols())]
    }))
}

fn require_square(m: &ComplexMatrix) -> Result<usize> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows())
}

/// The explicit `d^n × d^n` matrix `M^{n⊗}` (`M^{0⊗} = [1]`).
pub fn iterated_kron(m: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    let dim = require_square(m)?;
    caps::check_explicit("explicit Kronecker power", dim, order)?;
    let mut acc = ComplexMatrix::from_diagonal(&[ONE]);
    for _ in 0..order {
        acc = kron(&acc, m)?;
    }
    Ok(acc)
}

/// `M^{n⊗} x`, choosing the route automatically.
pub fn iterated_kron_apply(m: &ComplexMatrix, order: usize, x: &FullVec) -> Result<FullVec> {
    iterated_kron_apply_with(m, order, x, KronPath::Auto)
}

pub fn iterated_kron_apply_with(
    m: &ComplexMatrix,
    order: usize,
    x: &FullVec,
    path: KronPath,
) -> Result<FullVec> {
    let dim = require_square(m)?;
    if x.dim() != dim || x.order() != order {
        return Err(Error::DimensionMismatch(format!(
            "vector is (d={}, n={}), operator is (d={dim}, n={order})",
            x.dim(),
            x.order()
        )));
    }
    let path = match path {
        KronPath::Auto if x.len() <= AUTO_EXPLICIT_LIMIT => KronPath::Explicit,
        KronPath::Auto => KronPath::ModeProduct,
        p => p,
    };
    let data = match path {
        KronPath::Explicit => iterated_kron(m, order)?.matvec(x.data())?,
        _ => mode_products(m, order, x.data()),
    };
    FullVec::new(dim, order, data)
}

/// Views `x` as an order-`n` tensor whose first mode is the most significant
/// base-`d` digit of the position, and contracts `M` along every mode.
fn mode_products(m: &ComplexMatrix, order: usize, x: &[C64]) -> Vec<C64> {
    let dim = m.rows();
    let mut current = x.to_vec();
    let mut stride = x.len();
    for _ in 0..order {
        stride /= dim;
        let mut next = vec![ZERO; current.len()];
        for (j0, out) in next.iter_mut().enumerate() {
            let i = (j0 / stride) % dim;
            let base = j0 - i * stride;
            *out = (0..dim).map(|j| m[(i, j)] * current[base + j * stride]).sum();
        }
        current = next;
    }
    current
}

/// Dense `S_n(M) = P_n · M^{n⊗} · P_n*`, assembled literally from the
/// explicit Kronecker power. Requires `d^n ≤ 2^12`.
pub fn symmetric_kron_dense(m: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    let dim = require_square(m)?;
    caps::check_explicit("dense symmetric Kronecker oracle", dim, order)?;
    let big = iterated_kron(m, order)?;
    let p = BasisMatrix::build(dim, order)?;
    let levels = p.nrows();
    let mut out = ComplexMatrix::zeros(levels, levels);
    let mut unit = vec![ZERO; levels];
    for col in 0..levels {
        unit.iter_mut().for_each(|v| *v = ZERO);
        unit[col] = ONE;
        let lifted = p.apply_adjoint(&unit)?;
        let mapped = big.matvec(&lifted)?;
        for (row, v) in p.apply(&mapped)?.into_iter().enumerate() {
            out[(row, col)] = v;
        }
    }
    Ok(out)
}
