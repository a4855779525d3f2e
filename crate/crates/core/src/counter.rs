use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Objective, Point};

/// A point on the best-so-far curve: after `evals` function evaluations
/// beyond the starting point, the best value seen was `best_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub evals: u64,
    pub best_f: f64,
}

/// Counts value and gradient calls against an optional budget of scalar
/// function evaluations, and tracks the best point among every evaluation.
#[derive(Debug, Clone)]
pub struct EvalCounter {
    f_evals: u64,
    g_evals: u64,
    f_budget: Option<u64>,
    charge_gradients: bool,
    best_f: f64,
    best_x: Option<Point>,
    breakpoints: Vec<Breakpoint>,
}

impl EvalCounter {
    pub fn new(f_budget: Option<u64>) -> Self {
        Self {
            f_evals: 0,
            g_evals: 0,
            f_budget,
            charge_gradients: false,
            best_f: f64::INFINITY,
            best_x: None,
            breakpoints: Vec::new(),
        }
    }

    /// Charge each gradient call as `n` function evaluations.
    pub fn charging_gradients(mut self, charge: bool) -> Self {
        self.charge_gradients = charge;
        self
    }

    pub fn f_evals(&self) -> u64 {
        self.f_evals
    }

    pub fn g_evals(&self) -> u64 {
        self.g_evals
    }

    pub fn f_budget(&self) -> Option<u64> {
        self.f_budget
    }

    pub fn best_f(&self) -> f64 {
        self.best_f
    }

    pub fn best_x(&self) -> Option<&Point> {
        self.best_x.as_ref()
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    fn ensure_budget(&self, cost: u64) -> Result<()> {
        match self.f_budget {
            Some(budget) if self.f_evals + cost > budget => Err(Error::BudgetExhausted),
            _ => Ok(()),
        }
    }

    /// Evaluates `obj` at `x`, charging one function evaluation.
    ///
    /// The evaluation is counted even when the value turns out non-finite.
    pub fn value<O: Objective + ?Sized>(&mut self, obj: &O, x: &Point) -> Result<f64> {
        check_dim(obj, x)?;
        self.ensure_budget(1)?;
        self.f_evals += 1;
        let f = obj.value(x.as_slice());
        if !f.is_finite() {
            return Err(Error::NonFinite);
        }
        if f < self.best_f {
            self.best_f = f;
            self.best_x = Some(x.clone());
            // evaluations spent beyond the first one (the starting point)
            let evals = self.f_evals - 1;
            match self.breakpoints.last_mut() {
                Some(last) if last.evals == evals => last.best_f = f,
                _ => self.breakpoints.push(Breakpoint { evals, best_f: f }),
            }
        }
        Ok(f)
    }

    /// Evaluates the gradient of `obj` at `x`.
    pub fn gradient<O: Objective + ?Sized>(&mut self, obj: &O, x: &Point) -> Result<DVector<f64>> {
        check_dim(obj, x)?;
        if self.charge_gradients {
            let cost = obj.dim() as u64;
            self.ensure_budget(cost)?;
            self.f_evals += cost;
        }
        self.g_evals += 1;
        let mut g = DVector::zeros(x.len());
        obj.gradient(x.as_slice(), g.as_mut_slice());
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(g)
    }
}

fn check_dim<O: Objective + ?Sized>(obj: &O, x: &Point) -> Result<()> {
    if x.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: x.len(),
        });
    }
    Ok(())
}
