//! The compressed fast path for `S_n(M) = P_n M^{n⊗} P_n*`.
//!
//! With `m_1, …, m_d` the rows of `M` and `k` an output label of modulus `n`,
//!
//! ```text
//! (S_n(M) y)_k = (k!)^{-1/2} Σ_{|α_1|=k_1} ⋯ Σ_{|α_d|=k_d}
//!                  C(k_1; α_1) ⋯ C(k_d; α_d) · m_1^{α_1} ⋯ m_d^{α_d}
//!                  · (β!)^{1/2} · y_β,          β = α_1 + ⋯ + α_d,
//! ```
//!
//! where `C(k_j; α_j)` is the multinomial coefficient. Dropping the two
//! factorial factors gives the action of `M^{n⊗}` on the distinct values of a
//! vector in `X_n`. Nothing here allocates storage proportional to `d^n`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::multiindex::{self, LexIter, Ranker};
use crate::symspace::SymVec;

/// Largest `n` for which factorial ratios use exact integer factorials.
pub const EXACT_FACTORIAL_MAX_ORDER: usize = 20;

/// Cap on `L_n²` entries for [`materialize`].
pub const MATERIALIZE_BUDGET: usize = 1 << 26;

/// Per-axis compositions `{α : |α| = m}` for every `m ≤ n`, with their
/// multinomial weights. Shared by all operators of the same `(d, n)`.
#[derive(Debug)]
struct CompositionTables {
    dim: usize,
    order: usize,
    ranker: Ranker,
    /// `levels[m]`: flattened entries of `ℓ_m`, `d` per multi-index.
    levels: Vec<Vec<u32>>,
    /// `weights[m][a]` = multinomial of the `a`-th entry of `ℓ_m`.
    weights: Vec<Vec<f64>>,
    /// `parents[m][a]` = (axis p, index of `α − e_p` in `ℓ_{m−1}`), p the
    /// first non-zero axis of `α`.
    parents: Vec<Vec<(usize, usize)>>,
    /// `ln(ℓ_n(i)!)`.
    ln_factorials: Vec<f64>,
    /// `√(ℓ_n(i)!)` from exact integer factorials, when `n` is small enough.
    root_factorials: Option<Vec<f64>>,
}

fn exact_factorial(m: u32) -> u64 {
    (1..=m as u64).product()
}

impl CompositionTables {
    fn build(dim: usize, order: usize) -> Result<Self> {
        let ranker = Ranker::new(dim, order)?;
        let mut levels = Vec::with_capacity(order + 1);
        let mut weights = Vec::with_capacity(order + 1);
        let mut parents = Vec::with_capacity(order + 1);
        for m in 0..=order {
            let mut flat = Vec::new();
            let mut w = Vec::new();
            let mut par = Vec::new();
            for alpha in LexIter::new(dim, m) {
                let e = alpha.entries();
                w.push(
                    multiindex::multinomial_of(&alpha)
                        .map(|v| v as f64)
                        .unwrap_or_else(|| ln_multinomial(e).exp()),
                );
                if m > 0 {
                    let p = e.iter().position(|&v| v > 0).expect("non-zero modulus");
                    let mut parent = e.to_vec();
                    parent[p] -= 1;
                    par.push((p, ranker.rank0(&parent)));
                }
                flat.extend_from_slice(e);
            }
            levels.push(flat);
            weights.push(w);
            parents.push(par);
        }
        let ln_fact_table: Vec<f64> = std::iter::once(0.0)
            .chain((1..=order).scan(0.0, |acc, i| {
                *acc += (i as f64).ln();
                Some(*acc)
            }))
            .collect();
        let top = &levels[order];
        let ln_factorials = top
            .chunks(dim)
            .map(|k| k.iter().map(|&v| ln_fact_table[v as usize]).sum())
            .collect();
        let root_factorials = (order <= EXACT_FACTORIAL_MAX_ORDER).then(|| {
            top.chunks(dim)
                .map(|k| (k.iter().map(|&v| exact_factorial(v)).product::<u64>() as f64).sqrt())
                .collect()
        });
        Ok(CompositionTables {
            dim,
            order,
            ranker,
            levels,
            weights,
            parents,
            ln_factorials,
            root_factorials,
        })
    }

    fn cached(dim: usize, order: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<CompositionTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("cache poisoned").get(&(dim, order)) {
            return Ok(Arc::clone(t));
        }
        let tables = Arc::new(Self::build(dim, order)?);
        cache
            .lock()
            .expect("cache poisoned")
            .entry((dim, order))
            .or_insert_with(|| Arc::clone(&tables));
        Ok(tables)
    }

    fn level_len(&self, m: usize) -> usize {
        self.weights[m].len()
    }

    fn output_len(&self) -> usize {
        self.level_len(self.order)
    }

    fn label(&self, i: usize) -> &[u32] {
        &self.levels[self.order][i * self.dim..(i + 1) * self.dim]
    }
}

fn ln_multinomial(k: &[u32]) -> f64 {
    let ln_fact = |m: u32| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    ln_fact(k.iter().sum()) - k.iter().map(|&v| ln_fact(v)).sum::<f64>()
}

/// How the monomials `m_j^α` are tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialMethod {
    /// `m_j^α = m_j^{α − e_p} · M_{jp}`, one multiplication per entry.
    #[default]
    Incremental,
    /// `Π_t M_{jt}^{α_t}` evaluated from scratch.
    Direct,
}

/// How the ratio `√(β!/k!)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorialMode {
    /// Exact integer factorials for `n ≤ 20`, log-space beyond.
    Auto,
    /// Always `exp(½(ln β! − ln k!))`.
    LogSpace,
}

/// Auxiliary storage and work counted during one compressed apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApplyStats {
    /// Elements allocated by the apply call itself, output included.
    pub aux_elements: usize,
    /// Number of summands visited.
    pub terms: u64,
}

/// `S_n(M)` as a matrix-free operator on compressed vectors.
#[derive(Debug, Clone)]
pub struct SymKronOperator {
    matrix: ComplexMatrix,
    order: usize,
    tables: Arc<CompositionTables>,
    /// `monomials[j][m][a]` = `m_j^α` for the `a`-th entry `α` of `ℓ_m`.
    monomials: Vec<Vec<Vec<C64>>>,
    factorials: FactorialMode,
}

impl SymKronOperator {
    pub fn new(matrix: &ComplexMatrix, order: usize) -> Result<Self> {
        Self::with_options(matrix, order, MonomialMethod::Incremental, FactorialMode::Auto)
    }

    pub fn with_options(
        matrix: &ComplexMatrix,
        order: usize,
        method: MonomialMethod,
        factorials: FactorialMode,
    ) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dim = matrix.rows();
        let tables = CompositionTables::cached(dim, order)?;
        let monomials = (0..dim)
            .map(|j| match method {
                MonomialMethod::Incremental => incremental_monomials(&tables, matrix.row(j)),
                MonomialMethod::Direct => direct_monomials(&tables, matrix.row(j)),
            })
            .collect();
        Ok(SymKronOperator {
            matrix: matrix.clone(),
            order,
            tables,
            monomials,
            factorials,
        })
    }

    pub fn dim(&self) -> usize {
        self.tables.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `L_n`.
    pub fn len(&self) -> usize {
        self.tables.output_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Visits every summand of output component `out` (0-based) as
    /// `(index of β in ℓ_n, Π_j C(k_j; α_j) m_j^{α_j})`.
    ///
    /// Scratch: `d²` partial sums of `β`, `d + 1` partial products, `d` cursors.
    #[inline]
    fn for_each_term(&self, out: usize, scratch: &mut Scratch, mut visit: impl FnMut(usize, C64)) -> u64 {
        let t = &*self.tables;
        let d = t.dim;
        let k = t.label(out);
        let Scratch { beta, coef, cursor } = scratch;
        beta[..d].iter_mut().for_each(|b| *b = 0);
        coef[0] = ONE;
        cursor.iter_mut().for_each(|c| *c = 0);
        let mut terms = 0u64;
        let mut axis = 0usize;
        loop {
            // Descend: extend partial sums with the current α at `axis`.
            let kj = k[axis] as usize;
            let a = cursor[axis];
            let alpha = &t.levels[kj][a * d..(a + 1) * d];
            let (prev, cur) = beta.split_at_mut((axis + 1) * d);
            let prev = &prev[axis * d..];
            for ((dst, &p), &v) in cur[..d].iter_mut().zip(prev).zip(alpha) {
                *dst = p + v;
            }
            coef[axis + 1] = coef[axis] * (t.weights[kj][a] * self.monomials[axis][kj][a]);
            if axis + 1 < d {
                axis += 1;
                cursor[axis] = 0;
                continue;
            }
            let total = &beta[d * d..(d + 1) * d];
            visit(t.ranker.rank0(total), coef[d]);
            terms += 1;
            // Advance the odometer from the innermost axis outwards.
            loop {
                cursor[axis] += 1;
                if cursor[axis] < t.level_len(k[axis] as usize) {
                    break;
                }
                if axis == 0 {
                    return terms;
                }
                cursor[axis] = 0;
                axis -= 1;
            }
        }
    }

    fn new_scratch(&self) -> Scratch {
        let d = self.tables.dim;
        Scratch {
            beta: vec![0; (d + 1) * d],
            coef: vec![ONE; d + 1],
            cursor: vec![0; d],
        }
    }

    /// `√(β!/k!)` for 0-based labels.
    #[inline]
    fn factorial_ratio(&self, beta: usize, k: usize) -> f64 {
        let t = &*self.tables;
        match (&t.root_factorials, self.factorials) {
            (Some(root), FactorialMode::Auto) => root[beta] / root[k],
            _ => (0.5 * (t.ln_factorials[beta] - t.ln_factorials[k])).exp(),
        }
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "operator acts on length {}, input has length {len}",
                self.len()
            )));
        }
        Ok(())
    }

    /// `S_n(M) y`.
    pub fn apply(&self, y: &SymVec) -> Result<SymVec> {
        Ok(self.apply_with_stats(y)?.0)
    }

    pub fn apply_with_stats(&self, y: &SymVec) -> Result<(SymVec, ApplyStats)> {
        if y.dim() != self.dim() || y.order() != self.order {
            return Err(Error::DimensionMismatch(format!(
                "vector is (d={}, n={}), operator is (d={}, n={})",
                y.dim(),
                y.order(),
                self.dim(),
                self.order
            )));
        }
        let (data, stats) = self.apply_slice(y.data())?;
        Ok((SymVec::new(self.dim(), self.order, data)?, stats))
    }

    /// `S_n(M) y` on a raw coefficient slice of length `L_n`.
    pub fn apply_slice(&self, y: &[C64]) -> Result<(Vec<C64>, ApplyStats)> {
        self.check_input(y.len())?;
        let mut scratch = self.new_scratch();
        let mut out = vec![ZERO; self.len()];
        let mut terms = 0;
        for (i, dst) in out.iter_mut().enumerate() {
            let mut acc = ZERO;
            terms += self.for_each_term(i, &mut scratch, |b, c| acc += c * self.factorial_ratio(b, i) * y[b]);
            *dst = acc;
        }
        let stats = ApplyStats {
            aux_elements: out.capacity() + scratch.len(),
            terms,
        };
        Ok((out, stats))
    }

    /// Distinct values of `M^{n⊗} x` for `x ∈ X_n` given by its distinct
    /// values `x_{ℓ_n(i)}`.
    pub fn apply_labels(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_input(x.len())?;
        let mut scratch = self.new_scratch();
        Ok((0..self.len())
            .map(|i| {
                let mut acc = ZERO;
                self.for_each_term(i, &mut scratch, |b, c| acc += c * x[b]);
                acc
            })
            .collect())
    }

    /// Dense `L_n × L_n` matrix of the operator. Row `k` collects the
    /// coefficients of every `y_β` in `(S_n(M) y)_k`, so column `i` equals
    /// the apply of the `i`-th unit vector.
    pub fn materialize(&self) -> Result<ComplexMatrix> {
        let len = self.len();
        let entries = len.checked_mul(len).filter(|&e| e <= MATERIALIZE_BUDGET);
        if entries.is_none() {
            return Err(Error::CapExceeded {
                what: "materialized symmetric Kronecker product",
                len: (len as u128) * (len as u128),
                cap: MATERIALIZE_BUDGET as u128,
            });
        }
        let mut m = ComplexMatrix::zeros(len, len);
        let mut scratch = self.new_scratch();
        for i in 0..len {
            self.for_each_term(i, &mut scratch, |b, c| m[(i, b)] += c * self.factorial_ratio(b, i));
        }
        Ok(m)
    }
}

struct Scratch {
    beta: Vec<u32>,
    coef: Vec<C64>,
    cursor: Vec<usize>,
}

impl Scratch {
    fn len(&self) -> usize {
        self.beta.capacity() + self.coef.capacity() + self.cursor.capacity()
    }
}

fn incremental_monomials(t: &CompositionTables, row: &[C64]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(t.order + 1);
    out.push(vec![ONE]);
    for m in 1..=t.order {
        let prev = &out[m - 1];
        let level = t.parents[m].iter().map(|&(p, parent)| prev[parent] * row[p]).collect();
        out.push(level);
    }
    out
}

fn direct_monomials(t: &CompositionTables, row: &[C64]) -> Vec<Vec<C64>> {
    (0..=t.order)
        .map(|m| {
            t.levels[m]
                .chunks(t.dim)
                .map(|alpha| alpha.iter().zip(row).map(|(&e, &v)| v.powu(e)).product())
                .collect()
        })
        .collect()
}

/// Distinct values of `M^{n⊗} x` for `x ∈ X_n` given by `x_{ℓ_n(i)}`.
pub fn apply_kron_compressed(m: &ComplexMatrix, order: usize, x: &[C64]) -> Result<Vec<C64>> {
    SymKronOperator::new(m, order)?.apply_labels(x)
}

/// `S_n(M) y`.
pub fn apply(op: &SymKronOperator, y: &SymVec) -> Result<SymVec> {
    op.apply(y)
}

/// Dense `S_n(M)` without any `d^n`-sized intermediate.
pub fn materialize(m: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    SymKronOperator::new(m, order)?.materialize()
}

/// `‖S_n(M*) − S_n(M)*‖_F`.
pub fn check_adjoint(m: &ComplexMatrix, order: usize) -> Result<f64> {
    let s = materialize(m, order)?;
    let s_adj = materialize(&m.adjoint(), order)?;
    Ok(s_adj.distance(&s.adjoint()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseCheck {
    /// `‖S_n(M) S_n(M⁻¹) − Id‖_F`.
    pub residual: f64,
    /// 2-norm condition number of `M`.
    pub condition: f64,
}

/// Singular-matrix threshold on the condition number.
const SINGULAR_CONDITION: f64 = 1e14;

pub fn check_inverse(m: &ComplexMatrix, order: usize) -> Result<InverseCheck> {
    let condition = m.condition_number();
    if !condition.is_finite() || condition > SINGULAR_CONDITION {
        return Err(Error::Singular(format!("condition number {condition:e}")));
    }
    let inv = m.inverse()?;
    let prod = &materialize(m, order)? * &materialize(&inv, order)?;
    let id = ComplexMatrix::identity(prod.rows());
    Ok(InverseCheck {
        residual: prod.distance(&id),
        condition,
    })
}

/// `‖S_n(U)* S_n(U) − Id‖_F`; small exactly when `U` is unitary.
pub fn check_unitary(u: &ComplexMatrix, order: usize) -> Result<f64> {
    Ok(materialize(u, order)?.unitarity_residual())
}

/// `Π_j λ_j^{k_j}` for every label `k` of `ℓ_n`: the diagonal of `S_n(diag(λ))`.
pub fn diagonal_eigenvalues(lambda: &[C64], order: usize) -> Result<Vec<C64>> {
    if lambda.is_empty() {
        return Err(Error::DimensionMismatch("empty diagonal".into()));
    }
    Ok(LexIter::new(lambda.len(), order)
        .map(|k| k.entries().iter().zip(lambda).map(|(&e, &l)| l.powu(e)).product())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kron_oracle::symmetric_kron_dense;
    use crate::matrix::relative_error;
    use crate::multiindex::level_size;
    use crate::random::SeededRng;

    #[test]
    fn order_one_is_matrix_vector_product() {
        let mut rng = SeededRng::new(2);
        let m = rng.complex_matrix(3, 3);
        let y = SymVec::new(3, 1, rng.complex_vector(3)).unwrap();
        let got = SymKronOperator::new(&m, 1).unwrap().apply(&y).unwrap();
        let expected = m.matvec(y.data()).unwrap();
        assert!(relative_error(got.data(), &expected) < 1e-15);
        let labels = apply_kron_compressed(&m, 1, y.data()).unwrap();
        assert!(relative_error(&labels, &expected) < 1e-15);
    }

    #[test]
    fn identity_leaves_vectors_unchanged() {
        let mut rng = SeededRng::new(4);
        for order in 0..=6 {
            let len = level_size(3, order).unwrap();
            let y = SymVec::new(3, order, rng.complex_vector(len)).unwrap();
            let op = SymKronOperator::new(&ComplexMatrix::identity(3), order).unwrap();
            assert!(relative_error(op.apply(&y).unwrap().data(), y.data()) < 1e-15);
            assert!(relative_error(&op.apply_labels(y.data()).unwrap(), y.data()) < 1e-15);
        }
    }

    #[test]
    fn order_zero_is_scalar_identity() {
        let mut rng = SeededRng::new(6);
        let m = rng.complex_matrix(2, 2);
        let s = materialize(&m, 0).unwrap();
        assert_eq!(s, ComplexMatrix::identity(1));
    }

    #[test]
    fn d2_n2_first_column() {
        let (a, b, c, d) = (
            C64::new(0.3, -1.1),
            C64::new(2.0, 0.5),
            C64::new(-0.7, 0.2),
            C64::new(1.4, 0.9),
        );
        let m = ComplexMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap();
        let y = SymVec::unit(2, 2, 1).unwrap();
        let got = SymKronOperator::new(&m, 2).unwrap().apply(&y).unwrap();
        let expected = [a * a, a * c * 2f64.sqrt(), c * c];
        assert!(relative_error(got.data(), &expected) < 1e-15);
    }

    #[test]
    fn matches_dense_oracle() {
        let mut rng = SeededRng::new(8);
        for dim in 2..=3 {
            for order in 1..=5 {
                let m = rng.complex_matrix(dim, dim);
                let op = SymKronOperator::new(&m, order).unwrap();
                let dense = symmetric_kron_dense(&m, order).unwrap();
                assert!(op.materialize().unwrap().distance(&dense) <= 1e-12 * dense.frobenius_norm());
                let y = SymVec::new(dim, order, rng.complex_vector(op.len())).unwrap();
                let fast = op.apply(&y).unwrap();
                let slow = dense.matvec(y.data()).unwrap();
                assert!(relative_error(fast.data(), &slow) <= 1e-12);
            }
        }
    }

    #[test]
    fn materialized_columns_are_unit_applies() {
        let mut rng = SeededRng::new(10);
        let m = rng.complex_matrix(3, 3);
        let op = SymKronOperator::new(&m, 3).unwrap();
        let s = op.materialize().unwrap();
        for i in 1..=op.len() {
            let col = op.apply(&SymVec::unit(3, 3, i).unwrap()).unwrap();
            assert!(relative_error(col.data(), &s.column(i - 1)) < 1e-15);
        }
    }

    #[test]
    fn monomial_methods_agree() {
        let mut rng = SeededRng::new(12);
        for (dim, order) in [(2, 8), (3, 6), (4, 5)] {
            let mut m = rng.complex_matrix(dim, dim);
            m[(0, 1)] = ZERO;
            let inc = SymKronOperator::with_options(&m, order, MonomialMethod::Incremental, FactorialMode::Auto).unwrap();
            let dir = SymKronOperator::with_options(&m, order, MonomialMethod::Direct, FactorialMode::Auto).unwrap();
            for (row_a, row_b) in inc.monomials.iter().zip(&dir.monomials) {
                for (lvl_a, lvl_b) in row_a.iter().zip(row_b) {
                    for (a, b) in lvl_a.iter().zip(lvl_b) {
                        assert!((a - b).norm() <= 1e-14 * b.norm().max(1.0), "{a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn factorial_modes_agree_at_crossover() {
        let mut rng = SeededRng::new(14);
        let m = rng.unitary(2);
        let exact = SymKronOperator::with_options(&m, 20, MonomialMethod::Incremental, FactorialMode::Auto).unwrap();
        let logs = SymKronOperator::with_options(&m, 20, MonomialMethod::Incremental, FactorialMode::LogSpace).unwrap();
        assert!(exact.tables.root_factorials.is_some());
        let a = exact.materialize().unwrap();
        let b = logs.materialize().unwrap();
        assert!(a.distance(&b) <= 1e-12 * a.frobenius_norm());
        // Above the crossover only the log-space route exists.
        let high = SymKronOperator::new(&m, 21).unwrap();
        assert!(high.tables.root_factorials.is_none());
        assert!(check_unitary(&m, 21).unwrap() < 1e-11);
    }

    #[test]
    fn diagonal_matrices_scale_components() {
        let lambda = [C64::new(0.5, 0.2), C64::new(-1.3, 0.0), C64::new(0.0, 2.0)];
        let m = ComplexMatrix::from_diagonal(&lambda);
        for order in 0..=5 {
            let s = materialize(&m, order).unwrap();
            let eig = diagonal_eigenvalues(&lambda, order).unwrap();
            let expected = ComplexMatrix::from_diagonal(&eig);
            assert!(s.distance(&expected) <= 1e-15 * expected.frobenius_norm());
        }
        assert!(check_inverse(&m, 4).unwrap().residual < 1e-13);
    }

    #[test]
    fn structural_identities() {
        let mut rng = SeededRng::new(16);
        for order in 1..=4 {
            let m = rng.well_conditioned_matrix(3, 1e3);
            assert!(check_adjoint(&m, order).unwrap() < 1e-12 * materialize(&m, order).unwrap().frobenius_norm());
            assert!(check_inverse(&m, order).unwrap().residual < 1e-10);
            assert!(check_unitary(&rng.unitary(3), order).unwrap() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(check_inverse(&m, 2), Err(Error::Singular(_))));
    }

    #[test]
    fn multiplicativity() {
        let mut rng = SeededRng::new(18);
        for order in 1..=5 {
            let a = rng.complex_matrix(3, 3);
            let b = rng.complex_matrix(3, 3);
            let y = SymVec::new(3, order, rng.complex_vector(level_size(3, order).unwrap())).unwrap();
            let lhs = SymKronOperator::new(&a, order)
                .unwrap()
                .apply(&SymKronOperator::new(&b, order).unwrap().apply(&y).unwrap())
                .unwrap();
            let rhs = SymKronOperator::new(&(&a * &b), order).unwrap().apply(&y).unwrap();
            assert!(relative_error(lhs.data(), rhs.data()) < 1e-11);
        }
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let op = SymKronOperator::new(&ComplexMatrix::identity(2), 3).unwrap();
        assert!(op.apply(&SymVec::zeros(2, 2).unwrap()).is_err());
        assert!(op.apply(&SymVec::zeros(3, 3).unwrap()).is_err());
        assert!(op.apply_labels(&[ZERO; 3]).is_err());
        assert!(SymKronOperator::new(&ComplexMatrix::zeros(2, 3), 2).is_err());
    }

    #[test]
    fn apply_storage_is_compressed() {
        let m = SeededRng::new(20).complex_matrix(3, 3);
        let op = SymKronOperator::new(&m, 10).unwrap();
        let y = SymVec::new(3, 10, vec![ONE; 66]).unwrap();
        let (_, stats) = op.apply_with_stats(&y).unwrap();
        // Output, (d+1)·d partial sums, d+1 partial products, d cursors.
        assert_eq!(stats.aux_elements, 66 + 4 * 3 + 4 + 3);
        assert!(stats.aux_elements < 59049);
    }
}
