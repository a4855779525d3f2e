use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::counter::Breakpoint;
use crate::error::Error;
use crate::relaxation::RelaxationKind;

/// Why a solve stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    GradToleranceReached,
    BudgetExhausted,
    MaxItersReached,
    LineSearchFailure,
    NonFiniteEncountered,
}

impl Status {
    /// Statuses that indicate the solver could not continue on its own terms.
    pub fn is_fatal(self) -> bool {
        matches!(self, Status::LineSearchFailure | Status::NonFiniteEncountered)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::GradToleranceReached => "GradToleranceReached",
            Status::BudgetExhausted => "BudgetExhausted",
            Status::MaxItersReached => "MaxItersReached",
            Status::LineSearchFailure => "LineSearchFailure",
            Status::NonFiniteEncountered => "NonFiniteEncountered",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "GradToleranceReached" => Status::GradToleranceReached,
            "BudgetExhausted" => Status::BudgetExhausted,
            "MaxItersReached" => Status::MaxItersReached,
            "LineSearchFailure" => Status::LineSearchFailure,
            "NonFiniteEncountered" => Status::NonFiniteEncountered,
            other => return Err(Error::InvalidParameter(format!("unknown status `{other}`"))),
        })
    }
}

/// One accepted iteration `x_k → x_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationEntry {
    pub k: u64,
    /// f(x_k)
    pub f: f64,
    /// ‖∇f(x_k)‖
    pub grad_norm: f64,
    /// ⟨∇f(x_k), d_k⟩
    pub slope: f64,
    /// Carried-over initial step α_k.
    pub alpha: f64,
    /// Backtracking index i_k.
    pub backtracks: u32,
    /// Relaxation term ν_k of the accepted trial.
    pub nu: f64,
    /// Window maximum f_{l(k)}.
    pub f_lk: f64,
    /// f(x_{k+1})
    pub f_next: f64,
    /// Cumulative counters after the iteration.
    pub f_evals: u64,
    pub g_evals: u64,
    /// The quasi-Newton direction failed the descent test and −∇f was used.
    pub fallback: bool,
}

impl IterationEntry {
    /// The accepted step length `β^{i_k}·α_k`.
    pub fn step(&self, beta: f64) -> f64 {
        trial_step(self.alpha, beta, self.backtracks)
    }
}

/// `β^i·α`, the i-th trial step from the carried-over step α.
pub fn trial_step(alpha: f64, beta: f64, i: u32) -> f64 {
    alpha * beta.powi(i as i32)
}

/// The relaxed Armijo test `f⁺ ≤ f_k + ρ·step·slope + ν`, evaluated as
/// `f⁺ − f_k ≤ ρ·step·slope + ν` so that a negative right-hand side below the
/// resolution of `f_k` still forces strict decrease.
pub fn relaxed_armijo_holds(f_plus: f64, f_k: f64, rho: f64, step: f64, slope: f64, nu: f64) -> bool {
    f_plus - f_k <= rho * step * slope + nu
}

/// The full trace of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: RelaxationKind,
    pub function: String,
    pub start_index: u32,
    pub status: Status,
    /// f(x0); NaN when the start itself was non-finite.
    pub f0: f64,
    /// The resolved relaxation scale σ.
    pub sigma: f64,
    pub theta: f64,
    pub iterates: Vec<IterationEntry>,
    /// ‖∇f‖ at the last accepted iterate.
    pub final_grad_norm: f64,
    pub best_f: f64,
    pub best_x: Vec<f64>,
    pub f_evals: u64,
    pub g_evals: u64,
    pub breakpoints: Vec<Breakpoint>,
}

impl RunRecord {
    /// Gradient norms at x_0, x_1, …, x_K for the accepted iterates.
    pub fn grad_norms(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.iterates.iter().map(|e| e.grad_norm).collect();
        out.push(self.final_grad_norm);
        out
    }

    pub fn summary(&self) -> RunSummary {
        RunSummary {
            method: self.method,
            function: self.function.clone(),
            start_index: self.start_index,
            status: self.status,
            best_f: self.best_f,
            f_evals: self.f_evals,
            g_evals: self.g_evals,
            breakpoints: self.breakpoints.clone(),
        }
    }
}

/// The persisted part of a [`RunRecord`]: enough to rebuild data profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub method: RelaxationKind,
    pub function: String,
    pub start_index: u32,
    pub status: Status,
    pub best_f: f64,
    pub f_evals: u64,
    pub g_evals: u64,
    pub breakpoints: Vec<Breakpoint>,
}

impl RunSummary {
    /// The value at the starting point, i.e. the first breakpoint.
    pub fn f0(&self) -> Option<f64> {
        self.breakpoints.first().filter(|b| b.evals == 0).map(|b| b.best_f)
    }
}
