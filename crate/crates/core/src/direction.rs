//! Quasi-Newton search directions from a safeguarded BFGS inverse-Hessian.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative curvature threshold: update only when
/// `sᵀy > CURVATURE_EPS·‖s‖·‖y‖`.
pub const CURVATURE_EPS: f64 = 1e-12;

/// Minimum relative descent `−⟨g,d⟩ / (‖g‖‖d‖)` accepted from `−H g`.
pub const DESCENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct InverseHessian {
    h: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    Updated,
    /// The curvature condition failed; H was left unchanged.
    Skipped,
}

impl InverseHessian {
    pub fn identity(n: usize) -> Self {
        Self {
            h: DMatrix::identity(n, n),
        }
    }

    pub fn from_matrix(h: DMatrix<f64>) -> Self {
        assert!(h.is_square(), "inverse Hessian must be square");
        Self { h }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// H' = (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ with ρ = 1/sᵀy, applied only
    /// when `sᵀy > curvature_eps·‖s‖·‖y‖`. Pass `curvature_eps = 0` for the
    /// bare `sᵀy > 0` condition.
    pub fn update(&mut self, s: &DVector<f64>, y: &DVector<f64>, curvature_eps: f64) -> UpdateOutcome {
        let sy = s.dot(y);
        if !(sy > curvature_eps * s.norm() * y.norm()) || !sy.is_finite() {
            return UpdateOutcome::Skipped;
        }
        let rho = 1.0 / sy;
        let n = self.dim();
        let left = DMatrix::identity(n, n) - (s * y.transpose()) * rho;
        let mut next = &left * &self.h * left.transpose() + (s * s.transpose()) * rho;
        if next.iter().any(|v| !v.is_finite()) {
            return UpdateOutcome::Skipped;
        }
        symmetrize(&mut next);
        self.h = next;
        UpdateOutcome::Updated
    }

    /// d = −H g, or −g when −H g is not a sufficiently strict descent
    /// direction. The flag reports whether the fallback was taken.
    pub fn direction(&self, g: &DVector<f64>) -> Result<(DVector<f64>, bool)> {
        let g_norm = g.norm();
        if g_norm == 0.0 {
            return Err(Error::ZeroGradient);
        }
        let d = -(&self.h * g);
        let slope = g.dot(&d);
        if slope.is_finite() && slope <= -DESCENT_EPS * g_norm * d.norm() && slope < 0.0 {
            Ok((d, false))
        } else {
            Ok((-g, true))
        }
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}
