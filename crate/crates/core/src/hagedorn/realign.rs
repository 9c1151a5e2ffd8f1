//! Unitary right factors that make `A` real.
//!
//! For a valid pair, `AA*` is real symmetric positive definite, so its
//! eigenvectors `V` can be taken real. With `AA* = VΣ²Vᵀ` and
//! `W = A*VΣ⁻¹`, `A = VΣW*` is an SVD of `A`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

use super::packets::inv_sqrt_det;
use super::params::{ParamPair, DEFAULT_PARAM_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealignMode {
    /// `U = WVᵀ`, `A' = VΣVᵀ` (symmetric positive definite).
    #[default]
    Polar,
    /// `U = W`, `A' = VΣ`.
    Svd,
}

#[derive(Debug, Clone)]
pub struct RealignmentPlan {
    pub mode: RealignMode,
    pub u: ComplexMatrix,
    /// `A·U`.
    pub a_new: ComplexMatrix,
    /// `B·U`.
    pub b_new: ComplexMatrix,
    /// `det(U)^{-1/2}`, principal branch.
    pub phase: C64,
    /// Singular values of `A`, descending.
    pub sigma: Vec<f64>,
    pub params: ParamPair,
}

/// Real orthogonal `V` and descending `Σ` with `Re(AA*) = VΣ²Vᵀ`; the
/// largest-magnitude entry of each column of `V` is positive.
fn left_factors(a: &ComplexMatrix) -> (DMatrix<f64>, Vec<f64>) {
    let d = a.rows();
    let gram = a * &a.adjoint();
    let sym = DMatrix::<f64>::from_fn(d, d, |i, j| 0.5 * (gram[(i, j)].re + gram[(j, i)].re));
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut v = DMatrix::<f64>::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let pivot = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        v.set_column(dst, &(col * sign));
    }
    let sigma = order.iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt()).collect();
    (v, sigma)
}

pub fn plan_realignment(p: &ParamPair, mode: RealignMode) -> Result<RealignmentPlan> {
    let d = p.dim();
    let (v, sigma) = left_factors(p.a());
    if sigma.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::Singular("A has a vanishing singular value".into()));
    }
    let v_c = ComplexMatrix::from_fn(d, d, |i, j| C64::new(v[(i, j)], 0.0));
    let sigma_inv = ComplexMatrix::from_diagonal(&sigma.iter().map(|&s| C64::new(1.0 / s, 0.0)).collect::<Vec<_>>());
    let w = &(&p.a().adjoint() * &v_c) * &sigma_inv;
    let u = match mode {
        RealignMode::Polar => &w * &v_c.transpose(),
        RealignMode::Svd => w,
    };
    let params = p.right_multiply(&u, DEFAULT_PARAM_TOL)?;
    Ok(RealignmentPlan {
        mode,
        phase: inv_sqrt_det(&u)?,
        a_new: params.a().clone(),
        b_new: params.b().clone(),
        u,
        sigma,
        params,
    })
}
