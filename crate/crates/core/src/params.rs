use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor applied to `|f(x0)|` when the relaxation scale is chosen
/// automatically, so that it stays strictly positive.
pub const SIGMA_FLOOR: f64 = 1e-8;

/// How the relaxation scale σ is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SigmaRepr", into = "SigmaRepr")]
pub enum Sigma {
    /// `max(|f(x0)|, SIGMA_FLOOR)`.
    Auto,
    Fixed(f64),
}

impl Sigma {
    pub fn resolve(self, f0: f64) -> f64 {
        match self {
            Sigma::Auto => f0.abs().max(SIGMA_FLOOR),
            Sigma::Fixed(s) => s,
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sigma::Auto => f.write_str("auto"),
            Sigma::Fixed(s) => write!(f, "{s}"),
        }
    }
}

impl std::str::FromStr for Sigma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Sigma::Auto);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("sigma must be `auto` or a number, got `{s}`")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {v}")));
        }
        Ok(Sigma::Fixed(v))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SigmaRepr {
    Number(f64),
    Word(String),
}

impl TryFrom<SigmaRepr> for Sigma {
    type Error = Error;

    fn try_from(r: SigmaRepr) -> Result<Self> {
        match r {
            SigmaRepr::Number(v) if v > 0.0 && v.is_finite() => Ok(Sigma::Fixed(v)),
            SigmaRepr::Number(v) => Err(Error::InvalidParameter(format!("sigma must be positive, got {v}"))),
            SigmaRepr::Word(w) => w.parse(),
        }
    }
}

impl From<Sigma> for SigmaRepr {
    fn from(s: Sigma) -> Self {
        match s {
            Sigma::Auto => SigmaRepr::Word("auto".into()),
            Sigma::Fixed(v) => SigmaRepr::Number(v),
        }
    }
}

/// Scalar knobs of the line search plus stopping controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LineSearchParams {
    /// Initial trial step α₀.
    pub alpha0: f64,
    /// Backtracking factor β ∈ (0,1).
    pub beta: f64,
    /// Armijo fraction ρ ∈ (0,1).
    pub rho: f64,
    /// Decay exponent θ of the Metropolis relaxation terms.
    pub theta: f64,
    pub sigma: Sigma,
    /// History window length M for the max-based rules.
    pub window_m: usize,
    /// Stop once ‖∇f(x_k)‖ ≤ grad_tol. Zero means stop only on an exactly
    /// zero gradient.
    pub grad_tol: f64,
    /// Iteration limit; zero stops before the first iteration.
    pub max_iters: u64,
    pub max_backtracks: u32,
    /// Optional ceiling on the carried-over step α_k. Off by default.
    #[serde(default)]
    pub alpha_max: Option<f64>,
}

impl LineSearchParams {
    /// α₀ = 1, β = ρ = 0.5, θ = 2, σ = |f(x0)|, M = 10.
    pub fn paper() -> Self {
        Self {
            alpha0: 1.0,
            beta: 0.5,
            rho: 0.5,
            theta: 2.0,
            sigma: Sigma::Auto,
            window_m: 10,
            grad_tol: 0.0,
            max_iters: 1_000_000,
            max_backtracks: 60,
            alpha_max: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return bad("alpha0 must be positive");
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad("beta must lie in (0,1)");
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad("rho must lie in (0,1)");
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return bad("theta must be positive");
        }
        if let Sigma::Fixed(s) = self.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return bad("sigma must be positive");
            }
        }
        if self.window_m == 0 {
            return bad("window_m must be positive");
        }
        if !(self.grad_tol >= 0.0) {
            return bad("grad_tol must be nonnegative");
        }
        if self.max_backtracks == 0 {
            return bad("max_backtracks must be positive");
        }
        if let Some(cap) = self.alpha_max {
            if !(cap >= self.alpha0) {
                return bad("alpha_max must be at least alpha0");
            }
        }
        Ok(())
    }
}

impl Default for LineSearchParams {
    fn default() -> Self {
        Self::paper()
    }
}
