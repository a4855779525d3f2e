//! One backtracking skeleton shared by every relaxation rule.
//!
//! Each iteration computes a descent direction, backtracks from the
//! carried-over step `α_k` until the relaxed Armijo test holds, and carries
//! `α_{k+1} = β^{i_k−1}·α_k` into the next iteration.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::counter::EvalCounter;
use crate::direction::{InverseHessian, CURVATURE_EPS};
use crate::error::{Error, Result};
use crate::objective::{Objective, Point};
use crate::params::LineSearchParams;
use crate::record::{relaxed_armijo_holds, trial_step, IterationEntry, RunRecord, Status};
use crate::relaxation::{RelaxationKind, RelaxationState, ZH_ETA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirectionRule {
    /// d_k = −H_k ∇f(x_k) with safeguarded BFGS updates.
    Bfgs,
    /// d_k = −∇f(x_k).
    SteepestDescent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub params: LineSearchParams,
    pub kind: RelaxationKind,
    /// Budget in scalar function evaluations, counting the start.
    pub f_budget: Option<u64>,
    /// Charge every gradient call as `n` function evaluations.
    pub charge_gradients: bool,
    pub direction: DirectionRule,
    pub curvature_eps: f64,
    pub zh_eta: f64,
}

impl SolveConfig {
    pub fn new(kind: RelaxationKind, params: LineSearchParams) -> Self {
        Self {
            params,
            kind,
            f_budget: None,
            charge_gradients: false,
            direction: DirectionRule::Bfgs,
            curvature_eps: CURVATURE_EPS,
            zh_eta: ZH_ETA,
        }
    }

    pub fn paper(kind: RelaxationKind) -> Self {
        Self::new(kind, LineSearchParams::paper())
    }

    pub fn with_budget(mut self, f_budget: u64) -> Self {
        self.f_budget = Some(f_budget);
        self
    }

    pub fn with_direction(mut self, direction: DirectionRule) -> Self {
        self.direction = direction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.f_budget == Some(0) {
            return Err(Error::InvalidParameter("f_budget must be positive".into()));
        }
        if !(self.curvature_eps >= 0.0) {
            return Err(Error::InvalidParameter("curvature_eps must be nonnegative".into()));
        }
        if !(self.zh_eta >= 0.0 && self.zh_eta <= 1.0) {
            return Err(Error::InvalidParameter("zh_eta must lie in [0,1]".into()));
        }
        Ok(())
    }
}

/// Where one backtracking search starts from.
#[derive(Debug, Clone, Copy)]
pub struct LineSearchStart<'a> {
    pub k: u64,
    pub x: &'a Point,
    pub f: f64,
    pub d: &'a DVector<f64>,
    /// ⟨∇f(x_k), d_k⟩, strictly negative.
    pub slope: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktrackResult {
    pub i_k: u32,
    pub x_plus: Point,
    pub f_plus: f64,
    pub nu: f64,
    pub trial_evals: u32,
}

/// Tries `x_k + β^i α_k d_k` for i = 0, 1, … until the relaxed Armijo test
/// holds. Non-finite trial values count as rejections.
pub fn backtrack<O: Objective + ?Sized>(
    obj: &O,
    counter: &mut EvalCounter,
    start: &LineSearchStart<'_>,
    relax: &RelaxationState,
    params: &LineSearchParams,
) -> Result<BacktrackResult> {
    if !(start.slope < 0.0) {
        return Err(Error::DegenerateSlope(start.slope));
    }
    if !(start.alpha > 0.0) {
        return Err(Error::InvalidParameter("alpha_k must be positive".into()));
    }
    let fixed_nu = relax.fixed_nu(start.f);
    for i in 0..=params.max_backtracks {
        let step = trial_step(start.alpha, params.beta, i);
        let x_plus = start.x + start.d * step;
        let f_plus = match counter.value(obj, &x_plus) {
            Ok(f) => f,
            Err(Error::NonFinite) => continue,
            Err(e) => return Err(e),
        };
        let nu = match fixed_nu {
            Some(nu) => nu,
            None => relax.trial_nu(start.k, start.f, f_plus, params.rho * step * start.slope)?,
        };
        if relaxed_armijo_holds(f_plus, start.f, params.rho, step, start.slope, nu) {
            return Ok(BacktrackResult {
                i_k: i,
                x_plus,
                f_plus,
                nu,
                trial_evals: i + 1,
            });
        }
    }
    Err(Error::LineSearchFailure(params.max_backtracks))
}

/// Runs the line-search method from `x0` until a stopping rule fires.
///
/// Objective pathologies never panic; they end the run with the matching
/// [`Status`]. Invalid configurations are rejected up front.
pub fn solve<O: Objective + ?Sized>(obj: &O, x0: &Point, config: &SolveConfig) -> Result<RunRecord> {
    config.validate()?;
    if x0.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: x0.len(),
        });
    }
    let params = &config.params;
    let mut counter = EvalCounter::new(config.f_budget).charging_gradients(config.charge_gradients);
    let mut record = RunRecord {
        method: config.kind,
        function: obj.name().to_string(),
        start_index: 0,
        status: Status::NonFiniteEncountered,
        f0: f64::NAN,
        sigma: f64::NAN,
        theta: params.theta,
        iterates: Vec::new(),
        final_grad_norm: f64::NAN,
        best_f: f64::INFINITY,
        best_x: x0.as_slice().to_vec(),
        f_evals: 0,
        g_evals: 0,
        breakpoints: Vec::new(),
    };

    let f0 = match counter.value(obj, x0) {
        Ok(f) => f,
        Err(e) => {
            record.status = status_for(&e);
            return Ok(finish(record, &counter));
        }
    };
    record.f0 = f0;
    let g0 = match counter.gradient(obj, x0) {
        Ok(g) => g,
        Err(e) => {
            record.status = status_for(&e);
            return Ok(finish(record, &counter));
        }
    };
    let sigma = params.sigma.resolve(f0);
    record.sigma = sigma;

    let mut relax = RelaxationState::new(config.kind, sigma, params.theta, params.window_m, config.zh_eta, f0);
    let mut h = InverseHessian::identity(obj.dim());
    let mut x = x0.clone();
    let mut f = f0;
    let mut g = g0;
    let mut alpha = params.alpha0;
    let mut k: u64 = 0;

    record.status = loop {
        let g_norm = g.norm();
        record.final_grad_norm = g_norm;
        if k >= params.max_iters {
            break Status::MaxItersReached;
        }
        if g_norm <= params.grad_tol {
            break Status::GradToleranceReached;
        }
        let (d, fallback) = match config.direction {
            DirectionRule::Bfgs => h.direction(&g)?,
            DirectionRule::SteepestDescent => (-&g, false),
        };
        let slope = g.dot(&d);
        let f_lk = relax.f_lk();
        let ls = LineSearchStart {
            k,
            x: &x,
            f,
            d: &d,
            slope,
            alpha,
        };
        let bt = match backtrack(obj, &mut counter, &ls, &relax, params) {
            Ok(bt) => bt,
            Err(e) => break status_for(&e),
        };
        let g_next = counter.gradient(obj, &bt.x_plus);
        record.iterates.push(IterationEntry {
            k,
            f,
            grad_norm: g_norm,
            slope,
            alpha,
            backtracks: bt.i_k,
            nu: bt.nu,
            f_lk,
            f_next: bt.f_plus,
            f_evals: counter.f_evals(),
            g_evals: counter.g_evals(),
            fallback,
        });
        relax.accept(bt.f_plus);
        let g_next = match g_next {
            Ok(g) => g,
            Err(e) => {
                record.final_grad_norm = f64::NAN;
                break status_for(&e);
            }
        };
        if config.direction == DirectionRule::Bfgs {
            let s = &bt.x_plus - &x;
            let y = &g_next - &g;
            h.update(&s, &y, config.curvature_eps);
        }
        alpha *= params.beta.powi(bt.i_k as i32 - 1);
        if let Some(cap) = params.alpha_max {
            alpha = alpha.min(cap);
        }
        x = bt.x_plus;
        f = bt.f_plus;
        g = g_next;
        k += 1;
    };
    Ok(finish(record, &counter))
}

fn status_for(e: &Error) -> Status {
    match e {
        Error::BudgetExhausted => Status::BudgetExhausted,
        Error::LineSearchFailure(_) => Status::LineSearchFailure,
        _ => Status::NonFiniteEncountered,
    }
}

fn finish(mut record: RunRecord, counter: &EvalCounter) -> RunRecord {
    record.f_evals = counter.f_evals();
    record.g_evals = counter.g_evals();
    record.best_f = counter.best_f();
    if let Some(bx) = counter.best_x() {
        record.best_x = bx.as_slice().to_vec();
    }
    record.breakpoints = counter.breakpoints().to_vec();
    record
}
