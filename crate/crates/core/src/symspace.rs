//! The symmetric subspace `X_n ⊂ C^{d^n}`, its orthonormal basis `p_1 … p_{L_n}`
//! and the maps `P_n` (compression) and `P_n*` (expansion).
//!
//! Full-space objects ([`FullVec`], explicit [`BasisMatrix`]) are subject to
//! the full-space cap; [`SymVec`] and the positional queries are not.

use serde::{Deserialize, Serialize};

use crate::caps;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::multiindex::{self, redundant_counts, LexEnumeration, MultiIndex, Ranker};

/// Default symmetry tolerance, relative to the max-norm of the vector.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;

/// Compressed vector of length `L_n` labelled by `ℓ_n(1..L_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymVec {
    dim: usize,
    order: usize,
    data: Vec<C64>,
}

impl SymVec {
    pub fn new(dim: usize, order: usize, data: Vec<C64>) -> Result<Self> {
        let len = multiindex::level_size(dim, order)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "SymVec for d={dim}, n={order} needs {len} components, got {}",
                data.len()
            )));
        }
        Ok(SymVec { dim, order, data })
    }

    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        let len = multiindex::level_size(dim, order)?;
        Ok(SymVec {
            dim,
            order,
            data: vec![ZERO; len],
        })
    }

    /// Standard basis vector `e_i` of `C^{L_n}` (1-based `i`).
    pub fn unit(dim: usize, order: usize, i: usize) -> Result<Self> {
        let mut v = Self::zeros(dim, order)?;
        if i == 0 || i > v.data.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: v.data.len(),
            });
        }
        v.data[i - 1] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn labels(&self) -> LexEnumeration {
        multiindex::lex_enumerate(self.dim, self.order).expect("validated at construction")
    }
}

/// Dense vector of length `d^n` labelled by `ν_n(1..d^n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullVec {
    dim: usize,
    order: usize,
    data: Vec<C64>,
}

impl FullVec {
    pub fn new(dim: usize, order: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        let len = caps::check_full("full vector", dim, order)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "FullVec for d={dim}, n={order} needs {len} components, got {}",
                data.len()
            )));
        }
        Ok(FullVec { dim, order, data })
    }

    pub fn zeros(dim: usize, order: usize) -> Result<Self> {
        let len = caps::check_full("full vector", dim, order)?;
        Self::new(dim, order, vec![ZERO; len])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }
}

/// For every 0-based full position, the 0-based class `i` with `j ∈ σ_n(i)`.
fn class_map(dim: usize, order: usize, len: usize) -> Vec<usize> {
    let ranker = Ranker::new(dim, order).expect("size checked by caller");
    let mut counts = vec![0u32; dim];
    (0..len)
        .map(|j0| {
            redundant_counts(dim, order, j0, &mut counts);
            ranker.rank0(&counts)
        })
        .collect()
}

/// First pair of positions (class, first, other), all 1-based, whose
/// components disagree beyond `tol · ‖x‖_∞`.
pub fn symmetry_violation(x: &FullVec, tol: f64) -> Option<(usize, usize, usize)> {
    let scale = x.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let threshold = tol * scale;
    let classes = class_map(x.dim, x.order, x.len());
    let levels = multiindex::level_size(x.dim, x.order).expect("valid FullVec");
    let mut first: Vec<Option<usize>> = vec![None; levels];
    for (j0, &c) in classes.iter().enumerate() {
        match first[c] {
            None => first[c] = Some(j0),
            Some(f) => {
                if (x.data[j0] - x.data[f]).norm() > threshold {
                    return Some((c + 1, f + 1, j0 + 1));
                }
            }
        }
    }
    None
}

/// `true` iff all components in each `σ_n(i)` agree within `tol` relative
/// to the max-norm of `x`. The zero vector is symmetric.
pub fn is_symmetric(x: &FullVec, tol: f64) -> bool {
    symmetry_violation(x, tol).is_none()
}

/// `p_i = (#σ_n(i))^{-1/2} Σ_{j ∈ σ_n(i)} e_j`.
pub fn basis_vector(dim: usize, order: usize, i: usize) -> Result<FullVec> {
    let card = multiindex::sigma_cardinality(dim, order, i)?;
    let set = multiindex::sigma_set(dim, order, i)?;
    let mut v = FullVec::zeros(dim, order)?;
    let value = C64::new(1.0 / (card as f64).sqrt(), 0.0);
    for j in set {
        v.data[j - 1] = value;
    }
    Ok(v)
}

/// Entry `(P_n)_{ij}` (both 1-based) computed positionally; no cap applies.
pub fn basis_entry(dim: usize, order: usize, i: usize, j: u128) -> Result<f64> {
    let k = multiindex::redundant_entry(dim, order, j)?;
    let len = multiindex::level_size(dim, order)?;
    if i == 0 || i > len {
        return Err(Error::IndexOutOfRange { index: i, max: len });
    }
    if multiindex::lex_rank(dim, order, &k)? != i {
        return Ok(0.0);
    }
    let card = multiindex::multinomial_of(&k).ok_or_else(|| Error::SizeOverflow(format!("multinomial of {k}")))?;
    Ok(1.0 / (card as f64).sqrt())
}

/// One row of `P_n`: every listed column carries the same value.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRow {
    pub value: f64,
    /// 0-based columns, ascending.
    pub columns: Vec<usize>,
}

/// The sparse `L_n × d^n` matrix `P_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMatrix {
    dim: usize,
    order: usize,
    cols: usize,
    rows: Vec<BasisRow>,
}

/// Exported coordinate form of [`BasisMatrix`]; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisTriplets {
    pub dim: usize,
    pub order: usize,
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, f64)>,
}

#[allow(non_snake_case)]
pub fn build_P(dim: usize, order: usize) -> Result<BasisMatrix> {
    BasisMatrix::build(dim, order)
}

impl BasisMatrix {
    pub fn build(dim: usize, order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        let cols = caps::check_full("basis matrix", dim, order)?;
        let levels = multiindex::level_size(dim, order)?;
        let mut columns: Vec<Vec<usize>> = vec![Vec::new(); levels];
        for (j0, c) in class_map(dim, order, cols).into_iter().enumerate() {
            columns[c].push(j0);
        }
        let rows = columns
            .into_iter()
            .map(|columns| BasisRow {
                value: 1.0 / (columns.len() as f64).sqrt(),
                columns,
            })
            .collect();
        Ok(BasisMatrix {
            dim,
            order,
            cols,
            rows,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BasisRow] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.columns.len()).sum()
    }

    pub fn to_triplets(&self) -> BasisTriplets {
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.columns.iter().map(move |&j| (i + 1, j + 1, r.value)))
            .collect();
        BasisTriplets {
            dim: self.dim,
            order: self.order,
            rows: self.rows.len(),
            cols: self.cols,
            triplets,
        }
    }

    /// Rebuilds from triplets, rejecting anything that is not a valid row
    /// structure (mixed values within a row, out-of-range indices).
    pub fn from_triplets(t: &BasisTriplets) -> Result<Self> {
        let expected_rows = multiindex::level_size(t.dim, t.order)?;
        let expected_cols = caps::full_len(t.dim, t.order)
            .ok_or_else(|| Error::SizeOverflow("d^n".into()))?;
        if t.rows != expected_rows || t.cols as u128 != expected_cols {
            return Err(Error::DimensionMismatch(format!(
                "triplets declare {}x{}, expected {expected_rows}x{expected_cols}",
                t.rows, t.cols
            )));
        }
        let mut rows: Vec<BasisRow> = vec![
            BasisRow {
                value: f64::NAN,
                columns: Vec::new()
            };
            t.rows
        ];
        for &(i, j, v) in &t.triplets {
            if i == 0 || i > t.rows {
                return Err(Error::IndexOutOfRange { index: i, max: t.rows });
            }
            if j == 0 || j > t.cols {
                return Err(Error::IndexOutOfRange { index: j, max: t.cols });
            }
            let row = &mut rows[i - 1];
            if row.columns.is_empty() {
                row.value = v;
            } else if row.value != v {
                return Err(Error::Parse(format!("row {i} mixes values {} and {v}", row.value)));
            }
            row.columns.push(j - 1);
        }
        for r in &mut rows {
            r.columns.sort_unstable();
        }
        Ok(BasisMatrix {
            dim: t.dim,
            order: t.order,
            cols: t.cols,
            rows,
        })
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for &j in &r.columns {
                m[(i, j)] = C64::new(r.value, 0.0);
            }
        }
        m
    }

    /// Literal sparse product `P_n x` (no symmetry assumption).
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "P_n has {} columns, vector has {}",
                self.cols,
                x.len()
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.columns.iter().map(|&j| x[j]).sum::<C64>() * r.value)
            .collect())
    }

    /// Literal sparse product `P_n* y`.
    pub fn apply_adjoint(&self, y: &[C64]) -> Result<Vec<C64>> {
        if y.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "P_n* has {} columns, vector has {}",
                self.rows.len(),
                y.len()
            )));
        }
        let mut out = vec![ZERO; self.cols];
        for (r, &yi) in self.rows.iter().zip(y) {
            for &j in &r.columns {
                out[j] += yi * r.value;
            }
        }
        Ok(out)
    }
}

/// How [`compress_with`] reads the class value of a symmetric vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompressMode {
    /// Representative at the first index of `σ_n(i)`.
    #[default]
    First,
    /// Mean over `σ_n(i)`.
    Average,
}

/// `P_n x` via `(P_n x)_i = √(#σ_n(i)) · x_{ℓ_n(i)}`, after checking symmetry
/// at [`DEFAULT_SYMMETRY_TOL`].
pub fn compress(x: &FullVec) -> Result<SymVec> {
    compress_with(x, CompressMode::First, DEFAULT_SYMMETRY_TOL)
}

pub fn compress_with(x: &FullVec, mode: CompressMode, tol: f64) -> Result<SymVec> {
    if let Some((class, first, other)) = symmetry_violation(x, tol) {
        return Err(Error::NotSymmetric { class, first, other });
    }
    let levels = multiindex::level_size(x.dim, x.order)?;
    let classes = class_map(x.dim, x.order, x.len());
    let mut first: Vec<Option<C64>> = vec![None; levels];
    let mut sums = vec![ZERO; levels];
    let mut counts = vec![0usize; levels];
    for (j0, &c) in classes.iter().enumerate() {
        first[c].get_or_insert(x.data[j0]);
        sums[c] += x.data[j0];
        counts[c] += 1;
    }
    let data = (0..levels)
        .map(|i| {
            let card = counts[i] as f64;
            let rep = match mode {
                CompressMode::First => first[i].expect("every class is non-empty"),
                CompressMode::Average => sums[i] / card,
            };
            rep * card.sqrt()
        })
        .collect();
    SymVec::new(x.dim, x.order, data)
}

/// `P_n* y`: every position of class `i` receives `y_i / √(#σ_n(i))`.
pub fn expand(y: &SymVec) -> Result<FullVec> {
    let len = caps::check_full("full vector", y.dim, y.order)?;
    let ranker = Ranker::new(y.dim, y.order)?;
    let scaled: Vec<C64> = multiindex::LexIter::new(y.dim, y.order)
        .zip(&y.data)
        .map(|(k, &v)| {
            let card = multiindex::multinomial_of(&k).expect("cardinality fits in u64 under the cap");
            v / (card as f64).sqrt()
        })
        .collect();
    let mut counts = vec![0u32; y.dim];
    let data = (0..len)
        .map(|j0| {
            redundant_counts(y.dim, y.order, j0, &mut counts);
            scaled[ranker.rank0(&counts)]
        })
        .collect();
    FullVec::new(y.dim, y.order, data)
}

/// Builds a full vector in `X_n` from its distinct values `x_{ℓ_n(i)}`
/// (no normalization; the inverse of reading one value per class).
pub fn full_from_labels(dim: usize, order: usize, values: &[C64]) -> Result<FullVec> {
    let levels = multiindex::level_size(dim, order)?;
    if values.len() != levels {
        return Err(Error::DimensionMismatch(format!(
            "expected {levels} labelled values, got {}",
            values.len()
        )));
    }
    let len = caps::check_full("full vector", dim, order)?;
    let ranker = Ranker::new(dim, order)?;
    let mut counts = vec![0u32; dim];
    let data = (0..len)
        .map(|j0| {
            redundant_counts(dim, order, j0, &mut counts);
            values[ranker.rank0(&counts)]
        })
        .collect();
    FullVec::new(dim, order, data)
}

/// Reads the distinct values `x_{ℓ_n(i)}` of a symmetric vector at the first
/// position of each class.
pub fn labels_from_full(x: &FullVec) -> Vec<C64> {
    multiindex::LexIter::new(x.dim, x.order)
        .map(|k| {
            let j = multiindex::first_position(&k).expect("within cap");
            x.data[j as usize - 1]
        })
        .collect()
}

/// Labels of a compressed vector, for output.
pub fn labelled(y: &SymVec) -> Vec<(MultiIndex, C64)> {
    multiindex::LexIter::new(y.dim, y.order).zip(y.data.iter().copied()).collect()
}
