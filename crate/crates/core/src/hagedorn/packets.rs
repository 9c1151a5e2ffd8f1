//! Ground state, wave packets `φ_k = p_k φ_0 / √(2^{|k|} k!)`, and the
//! unitary change of parametrization.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::multiindex::{LexEnumeration, LexIter, MultiIndex, lex_enumerate};
use crate::symkron;

use super::params::{ParamPair, DEFAULT_PARAM_TOL};
use super::polynomial::{check_points, PolynomialTable};

/// Unitarity tolerance on `U` for [`transform_bundle`].
pub const UNITARY_TOL: f64 = 1e-12;

/// `det(M)^{-1/2}` on the principal branch of the square root.
pub fn inv_sqrt_det(m: &ComplexMatrix) -> Result<C64> {
    Ok(m.determinant()?.sqrt().inv())
}

/// `φ_0[A,B](x) = (πħ)^{-d/4} det(A)^{-1/2} exp(−xᵀ(BA⁻¹)x / (2ħ))`.
pub fn gaussian_eval(p: &ParamPair, points: &[Vec<f64>]) -> Result<Vec<C64>> {
    let d = p.dim();
    check_points(d, points)?;
    let width = p.width();
    let prefactor = inv_sqrt_det(p.a())? * (PI * p.hbar()).powf(-(d as f64) / 4.0);
    Ok(points
        .iter()
        .map(|x| {
            let mut q = C64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    q += width[(i, j)] * (x[i] * x[j]);
                }
            }
            prefactor * (-q / (2.0 * p.hbar())).exp()
        })
        .collect())
}

/// `1/√(2^{|k|} k!)`.
pub fn packet_normalization(k: &[u32]) -> f64 {
    let ln: f64 = k
        .iter()
        .map(|&e| e as f64 * std::f64::consts::LN_2 + (1..=e).map(|i| (i as f64).ln()).sum::<f64>())
        .sum();
    (-0.5 * ln).exp()
}

/// The order-`n` packets `φ_k[A,B]`, `k ∈ ℓ_n`, of one parameter pair.
#[derive(Debug, Clone)]
pub struct WavePacketBundle {
    params: ParamPair,
    order: usize,
}

impl WavePacketBundle {
    pub fn new(params: ParamPair, order: usize) -> Self {
        WavePacketBundle { params, order }
    }

    pub fn params(&self) -> &ParamPair {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> Result<LexEnumeration> {
        lex_enumerate(self.params.dim(), self.order)
    }

    /// Row `i` holds `φ_{ℓ_m(i)}` at every point, for each `m ≤ n`.
    pub fn eval_levels(&self, points: &[Vec<f64>]) -> Result<Vec<ComplexMatrix>> {
        let table = PolynomialTable::build(&self.params, points, self.order)?;
        let ground = gaussian_eval(&self.params, points)?;
        let np = points.len();
        (0..=self.order)
            .map(|m| {
                let level = table.level(m);
                let norms: Vec<f64> = LexIter::new(self.params.dim(), m)
                    .map(|k| packet_normalization(k.entries()))
                    .collect();
                Ok(ComplexMatrix::from_fn(norms.len(), np, |i, pt| {
                    level[i * np + pt] * ground[pt] * norms[i]
                }))
            })
            .collect()
    }

    /// `φ⃗_n` at every point: `L_n × #points`.
    pub fn eval_all(&self, points: &[Vec<f64>]) -> Result<ComplexMatrix> {
        Ok(self.eval_levels(points)?.pop().expect("order 0 level always present"))
    }
}

/// `φ_k[A,B]` at every point, `|k| ≤ bundle order`.
pub fn wavepacket_eval(bundle: &WavePacketBundle, k: &MultiIndex, points: &[Vec<f64>]) -> Result<Vec<C64>> {
    if k.dim() != bundle.params.dim() || k.modulus() > bundle.order {
        return Err(Error::DimensionMismatch(format!(
            "multi-index {k} does not fit a bundle of dimension {} and order {}",
            bundle.params.dim(),
            bundle.order
        )));
    }
    let table = PolynomialTable::build(&bundle.params, points, k.modulus())?;
    let ground = gaussian_eval(&bundle.params, points)?;
    let c = packet_normalization(k.entries());
    Ok(table.values(k)?.iter().zip(&ground).map(|(p, g)| p * g * c).collect())
}

/// Result of re-expressing a bundle in the parameters `(AU, BU)`.
#[derive(Debug, Clone)]
pub struct BundleTransform {
    /// `det(U)^{-1/2}`, principal branch.
    pub phase: C64,
    /// `T` with `φ⃗_n[AU,BU](x) = ±T φ⃗_n[A,B](x)`.
    pub matrix: ComplexMatrix,
    pub bundle: WavePacketBundle,
}

/// `T = det(U)^{-1/2} S_n(U*)` together with the bundle for `(AU, BU)`.
///
/// The packets in the new parameters are combinations of the old ones with
/// coefficients from `S_n(U*) = S_n(U)*`, not `S_n(U)`: at `n = 1` the new
/// first-order polynomials are `U*` times the old ones since `(AU)⁻¹ = U*A⁻¹`.
pub fn transform_bundle(bundle: &WavePacketBundle, u: &ComplexMatrix) -> Result<BundleTransform> {
    let residual = u.unitarity_residual();
    if !(residual <= UNITARY_TOL) || u.rows() != bundle.params.dim() {
        return Err(Error::NotUnitary { residual });
    }
    let params = bundle.params.right_multiply(u, DEFAULT_PARAM_TOL)?;
    let phase = inv_sqrt_det(u)?;
    let matrix = symkron::materialize(&u.adjoint(), bundle.order)?.scale(phase);
    Ok(BundleTransform {
        phase,
        matrix,
        bundle: WavePacketBundle::new(params, bundle.order),
    })
}

/// The sign `s ∈ {+1, −1}` minimizing `max |reference − s·candidate|`, with that maximum.
pub fn global_sign(reference: &[C64], candidate: &[C64]) -> (f64, f64) {
    let err = |s: f64| {
        reference
            .iter()
            .zip(candidate)
            .map(|(r, c)| (r - c * s).norm())
            .fold(0.0, f64::max)
    };
    let (plus, minus) = (err(1.0), err(-1.0));
    if plus <= minus { (1.0, plus) } else { (-1.0, minus) }
}
