//! Multi-indices of fixed modulus: the duplicate-free enumeration `ℓ_n`, the
//! redundant enumeration `ν_n` of length `d^n`, and the partition `σ_n`
//! linking the two.
//!
//! The canonical order of `ℓ_n` is the order in which distinct multi-indices
//! first occur while scanning `ν_n`. That order coincides with descending
//! lexicographic order: the first occurrence of `k` in `ν_n` sits at the
//! position whose base-`d` digits are `0^{k_1} 1^{k_2} … (d-1)^{k_d}`, and those
//! digit strings sort exactly as `k` sorts in descending lexicographic order.
//!
//! Indices are 1-based at every public entry point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps;
use crate::error::{Error, Result};

/// A `d`-tuple of non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The standard unit multi-index `e_axis` (0-based axis).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn modulus(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `k!` = `k_1! ⋯ k_d!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| factorial_f64(e as usize)).product()
    }

    /// `k + e_axis`.
    pub fn raised(&self, axis: usize) -> Self {
        let mut v = self.0.clone();
        v[axis] += 1;
        MultiIndex(v)
    }

    /// `k - e_axis`, or `None` if that entry is zero.
    pub fn lowered(&self, axis: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[axis] = v[axis].checked_sub(1)?;
        Some(MultiIndex(v))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Exact binomial coefficient, `None` on 64-bit overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at each step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    u64::try_from(acc).ok()
}

/// `L_n = binomial(n + d - 1, n)`, the number of multi-indices of modulus `n`
/// in `d` dimensions.
pub fn level_size(dim: usize, order: usize) -> Result<usize> {
    if dim == 0 {
        return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
    }
    let top = (order as u64)
        .checked_add(dim as u64 - 1)
        .ok_or_else(|| Error::SizeOverflow(format!("L_n for d={dim}, n={order}")))?;
    binomial(top, order as u64)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::SizeOverflow(format!("L_n for d={dim}, n={order}")))
}

/// Multinomial coefficient `n! / (k_1! ⋯ k_d!)` as a total function:
/// zero whenever `n` or any entry is negative, or the entries do not sum to `n`.
///
/// Panics if the value exceeds `u64`; see [`checked_multinomial`].
pub fn multinomial(n: i64, k: &[i64]) -> u64 {
    checked_multinomial(n, k).expect("multinomial coefficient exceeds u64")
}

pub fn checked_multinomial(n: i64, k: &[i64]) -> Option<u64> {
    if n < 0 || k.iter().any(|&e| e < 0) || k.iter().sum::<i64>() != n {
        return Some(0);
    }
    let mut acc: u64 = 1;
    let mut partial: u64 = 0;
    for &e in k {
        partial += e as u64;
        acc = acc.checked_mul(binomial(partial, e as u64)?)?;
    }
    Some(acc)
}

/// Multinomial of a non-negative multi-index, `|k|! / k!`.
pub fn multinomial_of(k: &MultiIndex) -> Option<u64> {
    let signed: Vec<i64> = k.entries().iter().map(|&e| e as i64).collect();
    checked_multinomial(k.modulus() as i64, &signed)
}

/// Successor of `k` in descending lexicographic order among multi-indices of
/// the same modulus. Returns `false` when `k` is the last one, `(0,…,0,n)`.
pub(crate) fn advance_desc_lex(k: &mut [u32]) -> bool {
    let d = k.len();
    if d < 2 {
        return false;
    }
    let Some(p) = (0..d - 1).rev().find(|&p| k[p] > 0) else {
        return false;
    };
    let tail: u32 = k[p + 1..].iter().sum();
    k[p] -= 1;
    for e in &mut k[p + 1..] {
        *e = 0;
    }
    k[p + 1] = tail + 1;
    true
}

/// Iterator over all multi-indices of modulus `order` in canonical order.
#[derive(Debug, Clone)]
pub struct LexIter {
    current: Option<Vec<u32>>,
}

impl LexIter {
    pub fn new(dim: usize, order: usize) -> Self {
        let current = (dim > 0).then(|| {
            let mut v = vec![0u32; dim];
            v[0] = order as u32;
            v
        });
        LexIter { current }
    }
}

impl Iterator for LexIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.current.as_mut()?;
        let out = MultiIndex(cur.clone());
        if !advance_desc_lex(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// The duplicate-free enumeration `ℓ_n` of all multi-indices of modulus `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexEnumeration {
    dim: usize,
    order: usize,
    entries: Vec<MultiIndex>,
}

impl LexEnumeration {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    /// `ℓ_n(i)` for 1-based `i`.
    pub fn get(&self, i: usize) -> Result<&MultiIndex> {
        if i == 0 || i > self.entries.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.entries.len(),
            });
        }
        Ok(&self.entries[i - 1])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.entries.iter()
    }
}

impl<'a> IntoIterator for &'a LexEnumeration {
    type Item = &'a MultiIndex;
    type IntoIter = std::slice::Iter<'a, MultiIndex>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

pub fn lex_enumerate(dim: usize, order: usize) -> Result<LexEnumeration> {
    let len = level_size(dim, order)?;
    let entries: Vec<MultiIndex> = LexIter::new(dim, order).collect();
    debug_assert_eq!(entries.len(), len);
    Ok(LexEnumeration {
        dim,
        order,
        entries,
    })
}

/// O(d) ranking of multi-indices within `ℓ_m` for all `m ≤ max_order`,
/// backed by a table of level sizes.
#[derive(Debug, Clone)]
pub struct Ranker {
    dim: usize,
    max_order: usize,
    // sizes[m * (max_order + 1) + s] = number of multi-indices in m dims with modulus s
    sizes: Vec<usize>,
}

impl Ranker {
    pub fn new(dim: usize, max_order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        level_size(dim, max_order)?;
        let stride = max_order + 1;
        let mut sizes = vec![0usize; (dim + 1) * stride];
        for m in 1..=dim {
            for s in 0..=max_order {
                sizes[m * stride + s] = level_size(m, s)?;
            }
        }
        Ok(Ranker {
            dim,
            max_order,
            sizes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn size(&self, m: usize, s: isize) -> usize {
        if s < 0 {
            0
        } else {
            self.sizes[m * (self.max_order + 1) + s as usize]
        }
    }

    /// 0-based rank of `k` within `ℓ_{|k|}`. The caller guarantees
    /// `k.len() == dim` and `|k| ≤ max_order`.
    #[inline]
    pub fn rank0(&self, k: &[u32]) -> usize {
        let mut remaining: isize = k.iter().map(|&e| e as isize).sum();
        let mut rank = 0;
        for (j, &kj) in k.iter().enumerate().take(self.dim.saturating_sub(1)) {
            rank += self.size(self.dim - j, remaining - kj as isize - 1);
            remaining -= kj as isize;
        }
        rank
    }
}

/// 1-based position of `k` in `ℓ_n`.
pub fn lex_rank(dim: usize, order: usize, k: &MultiIndex) -> Result<usize> {
    if k.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "multi-index has {} entries, expected {dim}",
            k.dim()
        )));
    }
    if k.modulus() != order {
        return Err(Error::ModulusMismatch {
            expected: order,
            found: k.modulus(),
        });
    }
    let ranker = Ranker::new(dim, order)?;
    Ok(ranker.rank0(k.entries()) + 1)
}

/// `ν_n(j)` for 1-based `j`, computed from the base-`d` digits of `j - 1`
/// without materializing `ν_n`.
pub fn redundant_entry(dim: usize, order: usize, j: u128) -> Result<MultiIndex> {
    let total = caps::full_len(dim, order)
        .ok_or_else(|| Error::SizeOverflow(format!("d^n for d={dim}, n={order}")))?;
    if dim == 0 || j == 0 || j > total {
        return Err(Error::IndexOutOfRange {
            index: usize::try_from(j).unwrap_or(usize::MAX),
            max: usize::try_from(total).unwrap_or(usize::MAX),
        });
    }
    let mut counts = vec![0u32; dim];
    let mut rest = j - 1;
    for _ in 0..order {
        counts[(rest % dim as u128) as usize] += 1;
        rest /= dim as u128;
    }
    Ok(MultiIndex(counts))
}

/// Fills `counts` with `ν_n(j0 + 1)` for a 0-based position `j0`.
#[inline]
pub(crate) fn redundant_counts(dim: usize, order: usize, j0: usize, counts: &mut [u32]) {
    counts.iter_mut().for_each(|c| *c = 0);
    let mut rest = j0;
    for _ in 0..order {
        counts[rest % dim] += 1;
        rest /= dim;
    }
}

/// Positional view of `ν_n`; entries are computed on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RedundantEnumeration {
    dim: usize,
    order: usize,
}

impl RedundantEnumeration {
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        caps::full_len(dim, order)
            .ok_or_else(|| Error::SizeOverflow(format!("d^n for d={dim}, n={order}")))?;
        Ok(RedundantEnumeration { dim, order })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Virtual length `d^n`.
    pub fn len(&self) -> u128 {
        caps::full_len(self.dim, self.order).expect("checked at construction")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, j: u128) -> Result<MultiIndex> {
        redundant_entry(self.dim, self.order, j)
    }

    /// Materializes all entries; subject to the full-space cap.
    pub fn to_vec(&self) -> Result<Vec<MultiIndex>> {
        let len = caps::check_full("redundant enumeration", self.dim, self.order)?;
        let mut counts = vec![0u32; self.dim];
        Ok((0..len)
            .map(|j0| {
                redundant_counts(self.dim, self.order, j0, &mut counts);
                MultiIndex(counts.clone())
            })
            .collect())
    }
}

fn check_class(dim: usize, order: usize, i: usize) -> Result<usize> {
    let len = level_size(dim, order)?;
    if i == 0 || i > len {
        return Err(Error::IndexOutOfRange { index: i, max: len });
    }
    Ok(len)
}

/// `ℓ_n(i)` for 1-based `i`, without building the whole enumeration.
pub fn lex_entry(dim: usize, order: usize, i: usize) -> Result<MultiIndex> {
    check_class(dim, order, i)?;
    let mut k = vec![0u32; dim];
    k[0] = order as u32;
    for _ in 1..i {
        advance_desc_lex(&mut k);
    }
    Ok(MultiIndex(k))
}

/// `#σ_n(i)`, the multinomial coefficient of `ℓ_n(i)`.
pub fn sigma_cardinality(dim: usize, order: usize, i: usize) -> Result<u64> {
    let k = lex_entry(dim, order, i)?;
    multinomial_of(&k).ok_or_else(|| Error::SizeOverflow(format!("multinomial of {k}")))
}

/// Smallest 1-based position `j` with `ν_n(j) = k`: the digits of `j - 1`
/// read `0^{k_1} 1^{k_2} … (d-1)^{k_d}` from the most significant end.
pub fn first_position(k: &MultiIndex) -> Result<u128> {
    let dim = k.dim() as u128;
    let mut acc: u128 = 0;
    for (digit, &count) in k.entries().iter().enumerate() {
        for _ in 0..count {
            acc = acc
                .checked_mul(dim)
                .and_then(|a| a.checked_add(digit as u128))
                .ok_or_else(|| Error::SizeOverflow(format!("position of {k}")))?;
        }
    }
    Ok(acc + 1)
}

/// `σ_n(i) = { j : ν_n(j) = ℓ_n(i) }`, ascending, 1-based. Subject to the
/// full-space cap.
pub fn sigma_set(dim: usize, order: usize, i: usize) -> Result<Vec<usize>> {
    check_class(dim, order, i)?;
    let len = caps::check_full("sigma set", dim, order)?;
    let ranker = Ranker::new(dim, order)?;
    let mut counts = vec![0u32; dim];
    Ok((0..len)
        .filter(|&j0| {
            redundant_counts(dim, order, j0, &mut counts);
            ranker.rank0(&counts) + 1 == i
        })
        .map(|j0| j0 + 1)
        .collect())
}

/// The partition `{σ_n(i)}` of `{1, …, d^n}`. The explicit sets are only
/// built when `d^n` is within the full-space cap; cardinalities always are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaPartition {
    dim: usize,
    order: usize,
    cardinalities: Vec<u64>,
    sets: Option<Vec<Vec<usize>>>,
}

impl SigmaPartition {
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        let cardinalities = LexIter::new(dim, order)
            .map(|k| multinomial_of(&k).ok_or_else(|| Error::SizeOverflow(format!("multinomial of {k}"))))
            .collect::<Result<Vec<_>>>()?;
        let sets = match caps::check_full("sigma partition", dim, order) {
            Ok(len) => {
                let ranker = Ranker::new(dim, order)?;
                let mut sets = vec![Vec::new(); cardinalities.len()];
                let mut counts = vec![0u32; dim];
                for j0 in 0..len {
                    redundant_counts(dim, order, j0, &mut counts);
                    sets[ranker.rank0(&counts)].push(j0 + 1);
                }
                Some(sets)
            }
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(SigmaPartition {
            dim,
            order,
            cardinalities,
            sets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cardinalities(&self) -> &[u64] {
        &self.cardinalities
    }

    /// Explicit sets, if they were materialized.
    pub fn sets(&self) -> Option<&[Vec<usize>]> {
        self.sets.as_deref()
    }
}
