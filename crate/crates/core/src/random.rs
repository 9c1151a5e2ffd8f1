//! Seeded generators for randomized checks.
//!
//! All randomness flows from a PCG32 stream (`Lcg64Xsh32`: 64-bit LCG state,
//! XSH-RR output). Same seed, same matrices, on every platform.

use rand::{RngExt, SeedableRng};
use rand_distr::{StandardNormal, Uniform};
use rand_pcg::Pcg32;

use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone)]
pub struct SeededRng {
    rng: Pcg32,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            rng: Pcg32::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.sample(Uniform::new(lo, hi).expect("lo < hi"))
    }

    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    pub fn complex_vector(&mut self, len: usize) -> Vec<C64> {
        (0..len).map(|_| self.complex_normal()).collect()
    }

    pub fn real_vector(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.normal()).collect()
    }

    /// Matrix with i.i.d. standard complex Gaussian entries.
    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Gaussian matrix redrawn until its 2-norm condition number is below `max_cond`.
    pub fn well_conditioned_matrix(&mut self, dim: usize, max_cond: f64) -> ComplexMatrix {
        loop {
            let m = self.complex_matrix(dim, dim);
            if m.condition_number() < max_cond {
                return m;
            }
        }
    }

    /// Haar-distributed unitary matrix: QR of a Gaussian matrix with the
    /// phases of `diag(R)` moved into `Q`.
    pub fn unitary(&mut self, dim: usize) -> ComplexMatrix {
        let g = self.complex_matrix(dim, dim).to_nalgebra();
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        let q = ComplexMatrix::from_nalgebra(&q);
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
            q[(i, j)] * phase
        })
    }

    /// Haar-distributed real orthogonal matrix.
    pub fn orthogonal(&mut self, dim: usize) -> ComplexMatrix {
        let g = nalgebra::DMatrix::<f64>::from_fn(dim, dim, |_, _| self.normal());
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        ComplexMatrix::from_fn(dim, dim, |i, j| {
            let sign = if r[(j, j)] < 0.0 { -1.0 } else { 1.0 };
            C64::new(q[(i, j)] * sign, 0.0)
        })
    }

    /// A parameter pair `(A, B)` satisfying `AᵀB = BᵀA` and `A*B + B*A = 2·Id`.
    ///
    /// Starts from `(Q·D, Q·D⁻¹)` with `Q` real orthogonal and `D` positive
    /// diagonal, runs the harmonic flow for a random time, and finishes with a
    /// random unitary right factor. Each step maps valid pairs to valid pairs,
    /// so no projection back onto the constraints is needed.
    pub fn valid_pair(&mut self, dim: usize) -> (ComplexMatrix, ComplexMatrix) {
        let q = self.orthogonal(dim);
        let widths: Vec<f64> = (0..dim).map(|_| self.uniform(-0.7, 0.7).exp()).collect();
        let d = ComplexMatrix::from_diagonal(&widths.iter().map(|&w| C64::new(w, 0.0)).collect::<Vec<_>>());
        let d_inv =
            ComplexMatrix::from_diagonal(&widths.iter().map(|&w| C64::new(1.0 / w, 0.0)).collect::<Vec<_>>());
        let a0 = &q * &d;
        let b0 = &q * &d_inv;
        let t = self.uniform(0.0, std::f64::consts::TAU);
        let (c, s) = (C64::new(t.cos(), 0.0), C64::new(0.0, t.sin()));
        let a = a0.scale(c).try_add(&b0.scale(s)).expect("same shape");
        let b = a0.scale(s).try_add(&b0.scale(c)).expect("same shape");
        let u = self.unitary(dim);
        (&a * &u, &b * &u)
    }
}
