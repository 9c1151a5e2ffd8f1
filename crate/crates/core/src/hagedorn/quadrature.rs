//! Tensor Gauss–Hermite quadrature adapted to a wave packet's width.
//!
//! With `R = (AA*)^{1/2}` (real symmetric) and `x = √ħ R y`, the packet
//! Gaussian becomes `exp(−|y|²)` and `∫ f dx = ħ^{d/2} det R ∫ f(√ħ R y) dy`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::multiindex::LexIter;

use super::packets::packet_normalization;
use super::params::ParamPair;
use super::polynomial::PolynomialTable;

pub const DEFAULT_NODES: usize = 40;

/// Nodes (descending) and weights of the `n`-point rule for `∫ f(y) e^{−y²} dy`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const EPS: f64 = 3e-14;
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // Orthonormal Hermite recurrence.
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= EPS {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Quadrature points in `x` with two weight sets.
#[derive(Debug, Clone)]
pub struct AdaptedQuadrature {
    dim: usize,
    points: Vec<Vec<f64>>,
    /// `∫ f dx ≈ Σ weights_i f(x_i)`.
    weights: Vec<f64>,
    /// `π^{-d/2} Π w`: weights against `|φ_0|²`-normalized polynomial products.
    gaussian_weights: Vec<f64>,
}

impl AdaptedQuadrature {
    pub fn new(p: &ParamPair, nodes_per_axis: usize) -> Result<Self> {
        let d = p.dim();
        if nodes_per_axis == 0 {
            return Err(Error::DimensionMismatch("at least one node per axis".into()));
        }
        let total = (nodes_per_axis as u128).checked_pow(d as u32).filter(|&t| t <= 1 << 24);
        let total = total.ok_or(Error::CapExceeded {
            what: "tensor quadrature grid",
            len: u128::MAX,
            cap: 1 << 24,
        })? as usize;
        let gram = p.a() * &p.a().adjoint();
        let sym = DMatrix::<f64>::from_fn(d, d, |i, j| 0.5 * (gram[(i, j)].re + gram[(j, i)].re));
        let eig = SymmetricEigen::new(sym);
        let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        let r = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose();
        let det_r: f64 = roots.iter().product();
        let (nodes, w) = gauss_hermite(nodes_per_axis);
        let scale = p.hbar().sqrt();
        let jac = p.hbar().powf(d as f64 / 2.0) * det_r;
        let norm = std::f64::consts::PI.powf(-(d as f64) / 2.0);

        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut gaussian_weights = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            let y: Vec<f64> = idx.iter().map(|&i| nodes[i]).collect();
            let wy: f64 = idx.iter().map(|&i| w[i]).product();
            let y2: f64 = y.iter().map(|v| v * v).sum();
            points.push((0..d).map(|i| scale * (0..d).map(|j| r[(i, j)] * y[j]).sum::<f64>()).collect());
            weights.push(jac * wy * y2.exp());
            gaussian_weights.push(norm * wy);
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < nodes_per_axis {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(AdaptedQuadrature {
            dim: d,
            points,
            weights,
            gaussian_weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, values: &[C64]) -> Result<C64> {
        if values.len() != self.points.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                self.points.len()
            )));
        }
        Ok(values.iter().zip(&self.weights).map(|(v, &w)| v * w).sum())
    }

    /// `G_{kl} = ∫ conj(f_k) f_l` for functions tabulated at the nodes (one row each).
    pub fn gram(&self, values: &ComplexMatrix) -> Result<ComplexMatrix> {
        weighted_gram(values, &self.weights)
    }

    /// Gram matrix of all packets with `|k| ≤ max_order` of the pair the rule
    /// was built for, labels ordered by level then `ℓ_m`. The Gaussian factor
    /// is absorbed into the weights, so only the polynomials are evaluated.
    pub fn packet_gram(&self, p: &ParamPair, max_order: usize) -> Result<ComplexMatrix> {
        let table = PolynomialTable::build(p, &self.points, max_order)?;
        let np = self.points.len();
        let mut rows = Vec::new();
        for m in 0..=max_order {
            let level = table.level(m);
            for (i, k) in LexIter::new(p.dim(), m).enumerate() {
                let c = packet_normalization(k.entries());
                rows.extend(level[i * np..(i + 1) * np].iter().map(|v| v * c));
            }
        }
        let values = ComplexMatrix::new(rows.len() / np.max(1), np, rows)?;
        weighted_gram(&values, &self.gaussian_weights)
    }
}

fn weighted_gram(values: &ComplexMatrix, weights: &[f64]) -> Result<ComplexMatrix> {
    if values.cols() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} columns for {} nodes",
            values.cols(),
            weights.len()
        )));
    }
    let n = values.rows();
    let mut g = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let (fk, fl) = (values.row(k), values.row(l));
            let s: C64 = fk.iter().zip(fl).zip(weights).fold(ZERO, |acc, ((a, b), &w)| acc + a.conj() * b * w);
            g[(k, l)] = s;
            g[(l, k)] = s.conj();
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hagedorn::packets::{gaussian_eval, WavePacketBundle};
    use crate::random::SeededRng;

    #[test]
    fn rule_integrates_even_moments() {
        let (x, w) = gauss_hermite(40);
        assert!((w.iter().sum::<f64>() - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        // ∫ y^4 e^{-y²} = 3√π/4
        let m4: f64 = x.iter().zip(&w).map(|(y, w)| y.powi(4) * w).sum();
        assert!((m4 - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(x.windows(2).all(|p| p[0] > p[1]));
        let (x1, w1) = gauss_hermite(1);
        assert!(x1[0].abs() < 1e-15 && (w1[0] - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ground_state_normalized() {
        let mut rng = SeededRng::new(83);
        for d in 1..=2 {
            let (a, b) = rng.valid_pair(d);
            let p = ParamPair::new(&a, &b, 0.6).unwrap();
            let q = AdaptedQuadrature::new(&p, DEFAULT_NODES).unwrap();
            let g = gaussian_eval(&p, q.points()).unwrap();
            let dens: Vec<C64> = g.iter().map(|v| C64::new(v.norm_sqr(), 0.0)).collect();
            assert!((q.integrate(&dens).unwrap() - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn packets_orthonormal_both_ways() {
        let mut rng = SeededRng::new(89);
        let (a, b) = rng.valid_pair(2);
        let p = ParamPair::new(&a, &b, 1.0).unwrap();
        let q = AdaptedQuadrature::new(&p, DEFAULT_NODES).unwrap();
        let fast = q.packet_gram(&p, 3).unwrap();
        assert!(fast.distance(&ComplexMatrix::identity(10)) < 1e-10);
        let bundle = WavePacketBundle::new(p, 3);
        let levels = bundle.eval_levels(q.points()).unwrap();
        let all: Vec<C64> = levels.iter().flat_map(|m| m.data().iter().copied()).collect();
        let values = ComplexMatrix::new(10, q.points().len(), all).unwrap();
        let direct = q.gram(&values).unwrap();
        assert!(direct.distance(&ComplexMatrix::identity(10)) < 1e-9);
    }
}
