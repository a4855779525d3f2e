//! Worst-case bounds for the modified Metropolis rule, and harnesses that
//! check them (and the analytic gradients of the test suite) numerically.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{instance_seed, sample_box};
use crate::objective::{central_difference, Objective, Quadratic};
use crate::params::{LineSearchParams, Sigma};
use crate::record::RunRecord;
use crate::relaxation::RelaxationKind;
use crate::solver::{solve, DirectionRule, SolveConfig};
use crate::testfns::TestFunction;

/// Constants of the smoothness and direction assumptions:
/// `‖∇f(x)−∇f(y)‖ ≤ L‖x−y‖`, `f ≥ f_low`, and
/// `⟨g,d⟩ ≤ −c₁‖g‖²`, `‖d‖ ≤ c₂‖g‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionConstants {
    pub l: f64,
    pub c1: f64,
    pub c2: f64,
    pub f_low: f64,
}

impl AssumptionConstants {
    pub fn new(l: f64, c1: f64, c2: f64, f_low: f64) -> Result<Self> {
        for (name, v) in [("L", l), ("c1", c1), ("c2", c2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(AssumptionConstants { l, c1, c2, f_low })
    }

    /// Steepest descent: `c₁ = c₂ = 1`.
    pub fn steepest_descent(l: f64, f_low: f64) -> Result<Self> {
        Self::new(l, 1.0, 1.0, f_low)
    }
}

/// `L̃ = max{1/(ρβα₀c₁), L(c₂/c₁)²/(2ρ(1−ρ)β)}`.
pub fn l_tilde(params: &LineSearchParams, consts: &AssumptionConstants) -> f64 {
    let LineSearchParams { alpha0, beta, rho, .. } = *params;
    let AssumptionConstants { l, c1, c2, .. } = *consts;
    let ratio = c2 / c1;
    f64::max(
        1.0 / (rho * beta * alpha0 * c1),
        l * ratio * ratio / (2.0 * rho * (1.0 - rho) * beta),
    )
}

/// Upper bound on `Σ_{k=1}^{T} k^{−θ}`.
pub fn harmonic_sum_bound(t: u64, theta: f64) -> f64 {
    let t = t as f64;
    if theta > 1.0 {
        theta / (theta - 1.0)
    } else if theta == 1.0 {
        1.0 + t.ln()
    } else {
        t.powf(1.0 - theta) / (1.0 - theta)
    }
}

/// Bound on `min_{k<T} ‖∇f(x_k)‖²`.
pub fn lemma1_bound(t: u64, theta: f64, sigma: f64, l_tilde: f64, f0: f64, f_low: f64) -> f64 {
    let tf = t as f64;
    let gap = l_tilde * (f0 - f_low);
    if theta > 1.0 {
        (gap + l_tilde * sigma * theta / (theta - 1.0)) / tf
    } else if theta == 1.0 {
        (gap + l_tilde * sigma * (1.0 + tf.ln())) / tf
    } else {
        gap / tf + l_tilde * sigma / ((1.0 - theta) * tf.powf(theta))
    }
}

/// Iterations sufficient to reach `‖∇f‖ ≤ ε`. Undefined for `θ = 1`.
pub fn theorem1_bound(eps: f64, theta: f64, sigma: f64, l_tilde: f64, f0: f64, f_low: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let gap = l_tilde * (f0 - f_low);
    if theta == 1.0 {
        Err(Error::ThetaOne)
    } else if theta > 1.0 {
        Ok((gap + l_tilde * sigma * theta / (theta - 1.0)) / (eps * eps))
    } else {
        let first = 2.0 * gap / (eps * eps);
        let second = (2.0 * l_tilde * sigma / (1.0 - theta)).powf(1.0 / theta) * eps.powf(-2.0 / theta);
        Ok(first.max(second))
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Smallest `bound − observed` (or `tolerance − error`) seen.
    pub worst_margin: f64,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            worst_margin: f64::INFINITY,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, margin: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        self.worst_margin = self.worst_margin.min(margin);
        // NaN margins fail too
        if !(margin >= 0.0) {
            self.passed = false;
            self.failures.push(describe());
        }
    }
}

/// Objective with analytically known `L` and lower bound, driven with
/// `d = −∇f` under the modified Metropolis rule.
#[derive(Debug, Clone)]
pub struct Harness {
    pub objective: Quadratic,
    pub x0: Vec<f64>,
    pub params: LineSearchParams,
    pub consts: AssumptionConstants,
}

impl Harness {
    /// `f(x) = ½‖x‖²` from `(1, 0)` with σ = 1.
    pub fn quadratic(theta: f64) -> Self {
        Self::new(Quadratic::isotropic(2), vec![1.0, 0.0], theta)
    }

    pub fn new(objective: Quadratic, x0: Vec<f64>, theta: f64) -> Self {
        let params = LineSearchParams {
            theta,
            sigma: Sigma::Fixed(1.0),
            ..LineSearchParams::paper()
        };
        let consts = AssumptionConstants {
            l: objective.lipschitz(),
            c1: 1.0,
            c2: 1.0,
            f_low: objective.lower_bound(),
        };
        Harness {
            objective,
            x0,
            params,
            consts,
        }
    }

    pub fn l_tilde(&self) -> f64 {
        l_tilde(&self.params, &self.consts)
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma.resolve(self.f0())
    }

    pub fn f0(&self) -> f64 {
        self.objective.value(&self.x0)
    }

    /// Runs at most `max_iters` iterations, stopping once `‖∇f‖ ≤ grad_tol`.
    pub fn run(&self, max_iters: u64, grad_tol: f64) -> Result<RunRecord> {
        let params = LineSearchParams {
            max_iters,
            grad_tol,
            ..self.params
        };
        let config =
            SolveConfig::new(RelaxationKind::ModifiedMetropolis, params).with_direction(DirectionRule::SteepestDescent);
        solve(&self.objective, &DVector::from_vec(self.x0.clone()), &config)
    }

    pub fn lemma1_bound(&self, t: u64) -> f64 {
        lemma1_bound(t, self.params.theta, self.sigma(), self.l_tilde(), self.f0(), self.consts.f_low)
    }

    pub fn theorem1_bound(&self, eps: f64) -> Result<f64> {
        theorem1_bound(eps, self.params.theta, self.sigma(), self.l_tilde(), self.f0(), self.consts.f_low)
    }
}

/// `min_{k<T} ‖∇f(x_k)‖² ≤ lemma1_bound(T)` for every `T` in `1..=horizon`.
/// Past the end of the run the minimum ranges over every stored gradient.
pub fn check_lemma1(run: &RunRecord, harness: &Harness, horizon: u64) -> CheckReport {
    let mut report = CheckReport::new(format!("lemma1 theta={}", harness.params.theta));
    let norms = run.grad_norms();
    let mut best = f64::INFINITY;
    for t in 1..=horizon {
        if let Some(g) = norms.get(t as usize - 1) {
            best = best.min(g * g);
        }
        let bound = harness.lemma1_bound(t);
        report.record(bound - best, || format!("T={t}: min |g|^2 = {best:e} > bound {bound:e}"));
    }
    report
}

pub const LEMMA1_THETAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const LEMMA1_HORIZON: u64 = 500;

pub fn lemma1_suite() -> Result<Vec<CheckReport>> {
    LEMMA1_THETAS
        .iter()
        .map(|&theta| {
            let h = Harness::quadratic(theta);
            let run = h.run(LEMMA1_HORIZON, 0.0)?;
            Ok(check_lemma1(&run, &h, LEMMA1_HORIZON))
        })
        .collect()
}

pub const THEOREM1_THETAS: [f64; 2] = [0.5, 2.0];
pub const THEOREM1_EPS: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Iterations needed to reach `‖∇f‖ ≤ ε`, against the closed-form bound.
pub fn check_theorem1(harness: &Harness, eps: &[f64]) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("theorem1 theta={}", harness.params.theta));
    for &e in eps {
        let bound = harness.theorem1_bound(e)?;
        // a run that never gets there is capped just past the bound
        let cap = bound.ceil().min(1e7) as u64 + 1;
        let run = harness.run(cap, e)?;
        let reached = run.final_grad_norm <= e;
        let observed = run.iterates.len() as f64;
        let margin = if reached { bound - observed } else { f64::NEG_INFINITY };
        report.record(margin, || {
            if reached {
                format!("eps={e:e}: T={observed} > bound {bound:e}")
            } else {
                format!("eps={e:e}: not reached ({})", run.status)
            }
        });
    }
    Ok(report)
}

pub fn theorem1_suite() -> Result<Vec<CheckReport>> {
    THEOREM1_THETAS
        .iter()
        .map(|&theta| check_theorem1(&Harness::quadratic(theta), &THEOREM1_EPS))
        .collect()
}

pub const GRADIENT_POINTS: u32 = 50;
pub const GRADIENT_SEED: u64 = 0x6772_6164;
pub const FD_STEP: f64 = 1e-6;
pub const GRADIENT_RTOL: f64 = 1e-5;

/// `‖g_fd − g‖ / max(‖g‖, 1)`.
pub fn gradient_error<O: Objective + ?Sized>(obj: &O, x: &[f64]) -> f64 {
    let mut g = vec![0.0; obj.dim()];
    obj.gradient(x, &mut g);
    let fd = central_difference(obj, x, FD_STEP);
    let diff = g.iter().zip(&fd).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let scale = g.iter().map(|a| a * a).sum::<f64>().sqrt().max(1.0);
    diff / scale
}

/// Analytic against central-difference gradients at seeded box points.
pub fn check_gradients(f: &TestFunction, points: u32, seed: u64) -> CheckReport {
    let mut report = CheckReport::new(format!("gradient {}", f.name()));
    for i in 0..points {
        let x = sample_box(f.lower(), f.upper(), instance_seed(seed, f.name(), i));
        let err = gradient_error(f, &x);
        report.record(GRADIENT_RTOL - err, || format!("point {i}: relative error {err:e}"));
    }
    report
}

pub fn gradient_suite(suite: &[TestFunction]) -> Vec<CheckReport> {
    suite.iter().map(|f| check_gradients(f, GRADIENT_POINTS, GRADIENT_SEED)).collect()
}
