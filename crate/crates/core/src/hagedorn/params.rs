//! Hagedorn parameter pairs `(A, B)` and their validation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Default tolerance on the two compatibility residuals.
pub const DEFAULT_PARAM_TOL: f64 = 1e-10;

pub const SYMPLECTIC_CONDITION: &str = "A^T B - B^T A = 0";
pub const NORMALIZATION_CONDITION: &str = "A^* B + B^* A = 2 Id";
pub const POSITIVITY_CONDITION: &str = "Re(B A^-1) positive definite";

/// Frobenius residuals of the compatibility conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamResiduals {
    /// `‖AᵀB − BᵀA‖_F`.
    pub symplectic: f64,
    /// `‖A*B + B*A − 2·Id‖_F`.
    pub normalization: f64,
}

pub fn param_residuals(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ParamResiduals> {
    check_shapes(a, b)?;
    let symplectic = (&a.transpose() * b).distance(&(&b.transpose() * a));
    let two = ComplexMatrix::identity(a.rows()).scale(C64::new(2.0, 0.0));
    let normalization = (&a.adjoint() * b).try_add(&(&b.adjoint() * a))?.distance(&two);
    Ok(ParamResiduals {
        symplectic,
        normalization,
    })
}

fn check_shapes(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if !a.is_square() || a.rows() == 0 || a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, B is {}x{}; both must be d x d",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// A validated `(A, B, ħ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPair {
    a: ComplexMatrix,
    b: ComplexMatrix,
    hbar: f64,
    a_inv: ComplexMatrix,
}

pub fn validate_params(a: &ComplexMatrix, b: &ComplexMatrix, hbar: f64, tol: f64) -> Result<ParamPair> {
    check_shapes(a, b)?;
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::ParamViolation {
            condition: "hbar > 0",
            residual: hbar,
            tol: 0.0,
        });
    }
    if a.data().iter().chain(b.data()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Parse("non-finite entry in A or B".into()));
    }
    let a_inv = a.inverse()?;
    b.inverse()?;
    let r = param_residuals(a, b)?;
    if !(r.symplectic <= tol) {
        return Err(Error::ParamViolation {
            condition: SYMPLECTIC_CONDITION,
            residual: r.symplectic,
            tol,
        });
    }
    if !(r.normalization <= tol) {
        return Err(Error::ParamViolation {
            condition: NORMALIZATION_CONDITION,
            residual: r.normalization,
            tol,
        });
    }
    let width = b.try_mul(&a_inv)?;
    let d = a.rows();
    let re = DMatrix::<f64>::from_fn(d, d, |i, j| 0.5 * (width[(i, j)].re + width[(j, i)].re));
    if re.cholesky().is_none() {
        return Err(Error::ParamViolation {
            condition: POSITIVITY_CONDITION,
            residual: f64::NAN,
            tol,
        });
    }
    Ok(ParamPair {
        a: a.clone(),
        b: b.clone(),
        hbar,
        a_inv,
    })
}

impl ParamPair {
    pub fn new(a: &ComplexMatrix, b: &ComplexMatrix, hbar: f64) -> Result<Self> {
        validate_params(a, b, hbar, DEFAULT_PARAM_TOL)
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn a_inv(&self) -> &ComplexMatrix {
        &self.a_inv
    }

    /// `B A⁻¹`, complex symmetric.
    pub fn width(&self) -> ComplexMatrix {
        &self.b * &self.a_inv
    }

    pub fn residuals(&self) -> ParamResiduals {
        param_residuals(&self.a, &self.b).expect("validated shapes")
    }

    /// `(AU, BU)`, revalidated at `tol`.
    pub fn right_multiply(&self, u: &ComplexMatrix, tol: f64) -> Result<ParamPair> {
        validate_params(&self.a.try_mul(u)?, &self.b.try_mul(u)?, self.hbar, tol)
    }

    /// The pair after harmonic-oscillator flow for time `t`.
    pub fn flow(&self, t: f64) -> Result<ParamPair> {
        let (a, b) = harmonic_flow(&self.a, &self.b, t)?;
        validate_params(&a, &b, self.hbar, DEFAULT_PARAM_TOL)
    }
}

/// `A(t) = cos t·A₀ + i sin t·B₀`, `B(t) = i sin t·A₀ + cos t·B₀`.
pub fn harmonic_flow(a0: &ComplexMatrix, b0: &ComplexMatrix, t: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_shapes(a0, b0)?;
    let c = C64::new(t.cos(), 0.0);
    let s = C64::new(0.0, t.sin());
    let a = a0.scale(c).try_add(&b0.scale(s))?;
    let b = a0.scale(s).try_add(&b0.scale(c))?;
    Ok((a, b))
}
