//! The polynomial prefactors `p_k[A]` via the multivariate three-term recurrence
//!
//! ```text
//! p_{k+e_j} = (2/√ħ) (A⁻¹x)_j p_k − 2 Σ_m (A⁻¹Ā)_{jm} k_m p_{k−e_m},   p_0 = 1.
//! ```
//!
//! Values are tabulated level by level for a whole batch of points.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::multiindex::{level_size, LexIter, MultiIndex, Ranker};

use super::params::ParamPair;

/// Relative tolerance for agreement between different parent paths.
pub const CONSISTENCY_TOL: f64 = 1e-10;

pub(crate) fn check_points(dim: usize, points: &[Vec<f64>]) -> Result<()> {
    if let Some(bad) = points.iter().find(|x| x.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {dim}",
            bad.len()
        )));
    }
    Ok(())
}

/// Per-batch data of the recurrence: `(2/√ħ) A⁻¹x` at each point and `2 A⁻¹Ā`.
#[derive(Debug, Clone)]
pub struct Recurrence {
    dim: usize,
    npoints: usize,
    /// `scaled[pt * d + j]`.
    scaled: Vec<C64>,
    coupling: ComplexMatrix,
}

impl Recurrence {
    pub fn new(params: &ParamPair, points: &[Vec<f64>]) -> Result<Self> {
        let dim = params.dim();
        check_points(dim, points)?;
        let a_inv = params.a_inv();
        let factor = 2.0 / params.hbar().sqrt();
        let mut scaled = Vec::with_capacity(points.len() * dim);
        for x in points {
            for j in 0..dim {
                let v: C64 = a_inv.row(j).iter().zip(x).map(|(&a, &xi)| a * xi).sum();
                scaled.push(v * factor);
            }
        }
        let coupling = (a_inv * &params.a().conj()).scale(C64::new(2.0, 0.0));
        Ok(Recurrence {
            dim,
            npoints: points.len(),
            scaled,
            coupling,
        })
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    /// Order-`(n+1)` values from orders `n` (`current`) and `n−1`
    /// (`previous`, ignored for `n = 0`). Tables are row-major
    /// `L_m × npoints` in `ℓ_m` order.
    ///
    /// With `verify`, every admissible parent `k = k' − e_j` is evaluated and
    /// the results must agree to [`CONSISTENCY_TOL`].
    pub fn step(&self, order: usize, previous: &[C64], current: &[C64], verify: bool) -> Result<Vec<C64>> {
        let d = self.dim;
        let np = self.npoints;
        let expect = |m: usize| level_size(d, m).map(|l| l * np);
        if current.len() != expect(order)? || (order > 0 && previous.len() != expect(order - 1)?) {
            return Err(Error::Inconsistent(format!(
                "value tables do not match orders {order} and {} at {np} points",
                order.saturating_sub(1)
            )));
        }
        let ranker = Ranker::new(d, order + 1)?;
        let next_len = level_size(d, order + 1)?;
        let mut out = vec![ZERO; next_len * np];
        let mut parent = vec![0u32; d];
        let mut grand = vec![0u32; d];
        for (row, label) in LexIter::new(d, order + 1).enumerate() {
            let k_next = label.entries();
            let mut first_axis = None;
            for j in 0..d {
                if k_next[j] == 0 {
                    continue;
                }
                parent.copy_from_slice(k_next);
                parent[j] -= 1;
                let pr = ranker.rank0(&parent);
                for pt in 0..np {
                    let mut v = self.scaled[pt * d + j] * current[pr * np + pt];
                    let mut mag = v.norm();
                    for (m, &km) in parent.iter().enumerate() {
                        if km == 0 {
                            continue;
                        }
                        grand.copy_from_slice(&parent);
                        grand[m] -= 1;
                        let term = self.coupling[(j, m)] * km as f64 * previous[ranker.rank0(&grand) * np + pt];
                        mag += term.norm();
                        v -= term;
                    }
                    let slot = &mut out[row * np + pt];
                    match first_axis {
                        None => *slot = v,
                        Some(j0) => {
                            if (v - *slot).norm() > CONSISTENCY_TOL * mag.max(slot.norm()) {
                                return Err(Error::Inconsistent(format!(
                                    "p_{} differs between parents along axes {j0} and {j}: {} vs {}",
                                    label, *slot, v
                                )));
                            }
                        }
                    }
                }
                if first_axis.is_none() {
                    first_axis = Some(j);
                }
                if !verify {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// Order-`(n+1)` values of `p_k[A]` from the order-`n` and order-`(n−1)` tables,
/// checking that all parent paths agree.
pub fn polynomial_recurrence_step(
    params: &ParamPair,
    points: &[Vec<f64>],
    order: usize,
    previous: &[C64],
    current: &[C64],
) -> Result<Vec<C64>> {
    Recurrence::new(params, points)?.step(order, previous, current, true)
}

/// `p_k[A](x)` for every `|k| ≤ max_order` and every point of a batch.
#[derive(Debug, Clone)]
pub struct PolynomialTable {
    dim: usize,
    max_order: usize,
    npoints: usize,
    levels: Vec<Vec<C64>>,
    ranker: Ranker,
}

impl PolynomialTable {
    pub fn build(params: &ParamPair, points: &[Vec<f64>], max_order: usize) -> Result<Self> {
        Self::build_with(params, points, max_order, false)
    }

    /// As [`build`](Self::build), checking parent-path consistency at every level.
    pub fn build_verified(params: &ParamPair, points: &[Vec<f64>], max_order: usize) -> Result<Self> {
        Self::build_with(params, points, max_order, true)
    }

    fn build_with(params: &ParamPair, points: &[Vec<f64>], max_order: usize, verify: bool) -> Result<Self> {
        let rec = Recurrence::new(params, points)?;
        let np = points.len();
        let mut levels: Vec<Vec<C64>> = vec![vec![ONE; np]];
        for n in 0..max_order {
            let previous: &[C64] = if n == 0 { &[] } else { &levels[n - 1] };
            let next = rec.step(n, previous, &levels[n], verify)?;
            levels.push(next);
        }
        Ok(PolynomialTable {
            dim: params.dim(),
            max_order,
            npoints: np,
            levels,
            ranker: Ranker::new(params.dim(), max_order)?,
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    /// Row-major `L_m × npoints` values for order `m`.
    pub fn level(&self, m: usize) -> &[C64] {
        &self.levels[m]
    }

    /// Values of `p_k` at every point.
    pub fn values(&self, k: &MultiIndex) -> Result<&[C64]> {
        if k.dim() != self.dim || k.modulus() > self.max_order {
            return Err(Error::IndexOutOfRange {
                index: k.modulus(),
                max: self.max_order,
            });
        }
        let r = self.ranker.rank0(k.entries());
        Ok(&self.levels[k.modulus()][r * self.npoints..(r + 1) * self.npoints])
    }
}

/// Physicists' Hermite polynomial `H_n(y)`.
pub fn hermite(n: usize, y: C64) -> C64 {
    let (mut h0, mut h1) = (ONE, y * 2.0);
    if n == 0 {
        return h0;
    }
    for m in 1..n {
        let h2 = y * 2.0 * h1 - h0 * (2.0 * m as f64);
        h0 = h1;
        h1 = h2;
    }
    h1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::SeededRng;

    fn points(rng: &mut SeededRng, d: usize, count: usize) -> Vec<Vec<f64>> {
        (0..count).map(|_| rng.real_vector(d)).collect()
    }

    #[test]
    fn univariate_reduces_to_hermite() {
        let id = ComplexMatrix::identity(1);
        let p = ParamPair::new(&id, &id, 1.0).unwrap();
        let pts: Vec<Vec<f64>> = (-5..=5).map(|i| vec![0.37 * i as f64]).collect();
        let table = PolynomialTable::build_verified(&p, &pts, 8).unwrap();
        for n in 0..=8 {
            let vals = table.values(&MultiIndex::new(vec![n as u32])).unwrap();
            for (x, v) in pts.iter().zip(vals) {
                let h = hermite(n, C64::new(x[0], 0.0));
                assert!((v - h).norm() <= 1e-12 * h.norm().max(1.0));
            }
        }
    }

    #[test]
    fn first_order_is_scaled_inverse() {
        let mut rng = SeededRng::new(41);
        let (a, b) = rng.valid_pair(3);
        let p = ParamPair::new(&a, &b, 0.3).unwrap();
        let pts = points(&mut rng, 3, 5);
        let table = PolynomialTable::build(&p, &pts, 1).unwrap();
        for j in 0..3 {
            let vals = table.values(&MultiIndex::unit(3, j)).unwrap();
            for (x, v) in pts.iter().zip(vals) {
                let xc: Vec<C64> = x.iter().map(|&t| C64::new(t, 0.0)).collect();
                let expected = p.a_inv().matvec(&xc).unwrap()[j] * (2.0 / 0.3f64.sqrt());
                assert!((v - expected).norm() < 1e-13 * expected.norm().max(1.0));
            }
        }
    }

    #[test]
    fn real_a_factorizes() {
        let mut rng = SeededRng::new(43);
        let q = rng.orthogonal(2);
        let d = ComplexMatrix::from_diagonal(&[C64::new(1.3, 0.0), C64::new(0.6, 0.0)]);
        let d_inv = ComplexMatrix::from_diagonal(&[C64::new(1.0 / 1.3, 0.0), C64::new(1.0 / 0.6, 0.0)]);
        let p = ParamPair::new(&(&q * &d), &(&q * &d_inv), 0.7).unwrap();
        let pts = points(&mut rng, 2, 20);
        let table = PolynomialTable::build_verified(&p, &pts, 4).unwrap();
        for k in (0..=4).flat_map(|n| LexIter::new(2, n)) {
            for (x, v) in pts.iter().zip(table.values(&k).unwrap()) {
                let xc: Vec<C64> = x.iter().map(|&t| C64::new(t, 0.0)).collect();
                let y = p.a_inv().matvec(&xc).unwrap();
                let expected: C64 = (0..2)
                    .map(|j| hermite(k[j] as usize, y[j] / 0.7f64.sqrt()))
                    .product();
                assert!((v - expected).norm() <= 1e-10 * expected.norm().max(1.0));
            }
        }
    }

    #[test]
    fn complex_parents_agree() {
        let mut rng = SeededRng::new(47);
        for d in 2..=3 {
            let (a, b) = rng.valid_pair(d);
            let p = ParamPair::new(&a, &b, 1.0).unwrap();
            PolynomialTable::build_verified(&p, &points(&mut rng, d, 10), 5).unwrap();
        }
    }

    #[test]
    fn corrupted_table_detected() {
        let mut rng = SeededRng::new(53);
        let (a, b) = rng.valid_pair(2);
        let p = ParamPair::new(&a, &b, 1.0).unwrap();
        let pts = points(&mut rng, 2, 3);
        let table = PolynomialTable::build(&p, &pts, 2).unwrap();
        let mut bad = table.level(2).to_vec();
        bad[3] += C64::new(0.5, 0.0);
        let res = polynomial_recurrence_step(&p, &pts, 2, table.level(1), &bad);
        assert!(matches!(res, Err(Error::Inconsistent(_))));
        let res = polynomial_recurrence_step(&p, &pts, 2, table.level(0), table.level(2));
        assert!(matches!(res, Err(Error::Inconsistent(_))));
    }
}
