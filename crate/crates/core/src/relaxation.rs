//! Relaxation terms ν_k for the relaxed Armijo test
//! `f(x⁺) ≤ f(x_k) + ρ·step·⟨∇f(x_k), d_k⟩ + ν_k`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent beyond which `exp(−t)` is treated as zero.
const EXP_UNDERFLOW: f64 = 700.0;

/// Default numerator of the averaging weight η_k = η/(k+1).
pub const ZH_ETA: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum RelaxationKind {
    /// M: ν ≡ 0.
    Monotone,
    /// NM1: max over a window of recent values.
    Gll,
    /// NM2: weighted average of past values.
    ZhangHager,
    /// NM3: Metropolis-type decay in the raw increase.
    Metropolis,
    /// NM4: Metropolis-type decay in the dimensionless increase over the window max.
    ModifiedMetropolis,
}

impl RelaxationKind {
    pub const ALL: [RelaxationKind; 5] = [
        RelaxationKind::Monotone,
        RelaxationKind::Gll,
        RelaxationKind::ZhangHager,
        RelaxationKind::Metropolis,
        RelaxationKind::ModifiedMetropolis,
    ];

    /// Short label used in result files and profile tables.
    pub fn label(self) -> &'static str {
        match self {
            RelaxationKind::Monotone => "M",
            RelaxationKind::Gll => "NM1",
            RelaxationKind::ZhangHager => "NM2",
            RelaxationKind::Metropolis => "NM3",
            RelaxationKind::ModifiedMetropolis => "NM4",
        }
    }

    /// Whether ν depends on the trial point and must be recomputed per trial.
    pub fn is_trial_dependent(self) -> bool {
        matches!(self, RelaxationKind::Metropolis | RelaxationKind::ModifiedMetropolis)
    }
}

impl fmt::Display for RelaxationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RelaxationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelaxationKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

impl From<RelaxationKind> for String {
    fn from(k: RelaxationKind) -> Self {
        k.label().to_string()
    }
}

impl TryFrom<String> for RelaxationKind {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// The most recent accepted values f(x_k), …, f(x_{k−m(k)}), with
/// m(k+1) = min(m(k)+1, M).
#[derive(Debug, Clone)]
pub struct HistoryWindow {
    values: VecDeque<f64>,
    capacity_m: usize,
}

impl HistoryWindow {
    /// Starts the window at f(x0), so m(0) = 0.
    pub fn new(capacity_m: usize, f0: f64) -> Self {
        assert!(capacity_m > 0, "window capacity must be positive");
        let mut values = VecDeque::with_capacity(capacity_m + 1);
        values.push_back(f0);
        Self { values, capacity_m }
    }

    pub fn push(&mut self, f: f64) {
        if self.values.len() == self.capacity_m + 1 {
            self.values.pop_front();
        }
        self.values.push_back(f);
    }

    /// m(k): the number of retained values minus one.
    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn newest(&self) -> f64 {
        *self.values.back().expect("window is never empty")
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    /// f_{l(k)} = max_{0≤j≤m(k)} f(x_{k−j}).
    pub fn f_lk(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// ν_k = f_{l(k)} − f(x_k).
pub fn nu_gll(window: &HistoryWindow, f_k: f64) -> f64 {
    window.f_lk() - f_k
}

/// The averaged reference value C_k and its weight Q_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZhangHagerState {
    pub c: f64,
    pub q: f64,
    pub k: u64,
    pub eta: f64,
}

impl ZhangHagerState {
    pub fn new(f0: f64) -> Self {
        Self::with_eta(f0, ZH_ETA)
    }

    pub fn with_eta(f0: f64, eta: f64) -> Self {
        Self { c: f0, q: 1.0, k: 0, eta }
    }

    /// ν_k = C_k − f(x_k).
    pub fn nu(&self, f_k: f64) -> f64 {
        self.c - f_k
    }

    /// Advances to k+1 with η_k = η/(k+1):
    /// Q_{k+1} = η_k Q_k + 1, C_{k+1} = (η_k Q_k C_k + f_{k+1}) / Q_{k+1}.
    pub fn advance(&mut self, f_next: f64) {
        let eta_k = self.eta / (self.k + 1) as f64;
        let weighted = eta_k * self.q;
        let q_next = weighted + 1.0;
        self.c = (weighted * self.c + f_next) / q_next;
        self.q = q_next;
        self.k += 1;
    }
}

/// σ/(k+1)^θ, the largest value either Metropolis-type term can take.
pub fn nu_ceiling(sigma: f64, theta: f64, k: u64) -> f64 {
    sigma / ((k + 1) as f64).powf(theta)
}

/// σ·exp(−max{θ, r}·ln(k+1)).
fn metropolis_weight(sigma: f64, theta: f64, r: f64, k: u64) -> f64 {
    if k == 0 {
        return sigma;
    }
    let ceiling = nu_ceiling(sigma, theta, k);
    // NaN r falls through to the θ branch
    if !(r > theta) {
        return ceiling;
    }
    let base = (k + 1) as f64;
    if r * base.ln() > EXP_UNDERFLOW {
        return 0.0;
    }
    (sigma / base.powf(r)).min(ceiling)
}

/// ν_k = σ·exp(−max{θ, f(x⁺) − f(x_k)}·ln(k+1)).
pub fn nu_metropolis(sigma: f64, theta: f64, f_plus: f64, f_k: f64, k: u64) -> f64 {
    metropolis_weight(sigma, theta, f_plus - f_k, k)
}

/// ν_{k,i} = σ·exp(−max{θ, (f_{l(k)} − f(x⁺)) / armijo_slope}·ln(k+1)),
/// where `armijo_slope = ρ·β^i·α_k·⟨∇f(x_k), d_k⟩ < 0`.
pub fn nu_modified_metropolis(
    sigma: f64,
    theta: f64,
    f_lk: f64,
    f_plus: f64,
    armijo_slope: f64,
    k: u64,
) -> Result<f64> {
    if !(armijo_slope < 0.0) {
        return Err(Error::DegenerateSlope(armijo_slope));
    }
    Ok(metropolis_weight(sigma, theta, (f_lk - f_plus) / armijo_slope, k))
}

/// Per-solve state of whichever relaxation rule is in use.
#[derive(Debug, Clone)]
pub struct RelaxationState {
    kind: RelaxationKind,
    sigma: f64,
    theta: f64,
    window: HistoryWindow,
    zh: ZhangHagerState,
}

impl RelaxationState {
    pub fn new(kind: RelaxationKind, sigma: f64, theta: f64, window_m: usize, eta: f64, f0: f64) -> Self {
        Self {
            kind,
            sigma,
            theta,
            window: HistoryWindow::new(window_m, f0),
            zh: ZhangHagerState::with_eta(f0, eta),
        }
    }

    pub fn kind(&self) -> RelaxationKind {
        self.kind
    }

    pub fn window(&self) -> &HistoryWindow {
        &self.window
    }

    pub fn zhang_hager(&self) -> &ZhangHagerState {
        &self.zh
    }

    pub fn f_lk(&self) -> f64 {
        self.window.f_lk()
    }

    /// ν for rules that do not look at the trial point, `None` otherwise.
    pub fn fixed_nu(&self, f_k: f64) -> Option<f64> {
        match self.kind {
            RelaxationKind::Monotone => Some(0.0),
            RelaxationKind::Gll => Some(nu_gll(&self.window, f_k)),
            RelaxationKind::ZhangHager => Some(self.zh.nu(f_k)),
            RelaxationKind::Metropolis | RelaxationKind::ModifiedMetropolis => None,
        }
    }

    /// ν_{k,i} for the trial value `f_plus`, with
    /// `armijo_slope = ρ·β^i·α_k·⟨∇f(x_k), d_k⟩`.
    pub fn trial_nu(&self, k: u64, f_k: f64, f_plus: f64, armijo_slope: f64) -> Result<f64> {
        match self.kind {
            RelaxationKind::Metropolis => Ok(nu_metropolis(self.sigma, self.theta, f_plus, f_k, k)),
            RelaxationKind::ModifiedMetropolis => {
                nu_modified_metropolis(self.sigma, self.theta, self.f_lk(), f_plus, armijo_slope, k)
            }
            _ => Ok(self.fixed_nu(f_k).expect("trial-independent rule")),
        }
    }

    /// Records the accepted value f(x_{k+1}).
    pub fn accept(&mut self, f_next: f64) {
        self.window.push(f_next);
        if self.kind == RelaxationKind::ZhangHager {
            self.zh.advance(f_next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(m: usize, vals: &[f64]) -> HistoryWindow {
        let mut w = HistoryWindow::new(m, vals[0]);
        for v in &vals[1..] {
            w.push(*v);
        }
        w
    }

    #[test]
    fn f_lk_examples() {
        assert_eq!(window(10, &[3.0]).f_lk(), 3.0);
        let w = window(10, &[3.0, 5.0, 2.0]);
        assert_eq!(w.m(), 2);
        assert_eq!(w.f_lk(), 5.0);
        // 12 pushes with M = 10 keep the most recent 11
        let vals: Vec<f64> = vec![100.0, 50.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 0.5];
        let w = window(10, &vals);
        assert_eq!(w.m(), 10);
        assert_eq!(w.f_lk(), 50.0);
        assert_eq!(w.f_lk(), vals[1..].iter().copied().fold(f64::MIN, f64::max));
    }

    #[test]
    fn window_length_follows_min_rule() {
        let mut w = HistoryWindow::new(3, 0.0);
        let mut m = 0usize;
        assert_eq!(w.m(), m);
        for i in 1..10 {
            w.push(i as f64);
            m = (m + 1).min(3);
            assert_eq!(w.m(), m);
            assert_eq!(w.newest(), i as f64);
        }
    }

    #[test]
    fn gll_examples() {
        assert_eq!(nu_gll(&window(10, &[3.0, 5.0, 2.0]), 2.0), 3.0);
        assert_eq!(nu_gll(&window(10, &[7.0]), 7.0), 0.0);
        assert_eq!(nu_gll(&window(10, &[-1.0, -4.0]), -4.0), 3.0);
    }

    #[test]
    fn zhang_hager_examples() {
        let mut zh = ZhangHagerState::new(10.0);
        assert_eq!(zh.nu(10.0), 0.0);
        zh.advance(2.0);
        assert_eq!(zh.q, 1.85);
        // (0.85·10 + 2)/1.85
        assert!((zh.c - 5.675_675_675_675_675).abs() < 1e-12);
        assert!((zh.nu(2.0) - 3.675_675_675_675_675).abs() < 1e-12);
        assert_eq!(zh.k, 1);

        let mut zh = ZhangHagerState { c: 4.25, q: 3.0, k: 7, eta: ZH_ETA };
        zh.advance(4.25);
        assert!((zh.c - 4.25).abs() < 1e-15);

        let mut zh = ZhangHagerState::new(0.0);
        zh.advance(0.0);
        assert_eq!((zh.c, zh.q, zh.k), (0.0, 1.85, 1));
    }

    #[test]
    fn metropolis_examples() {
        assert_eq!(nu_metropolis(2.0, 0.5, 9.0, 1.0, 0), 2.0);
        assert_eq!(nu_metropolis(1.0, 2.0, 0.0, 1.0, 1), 0.25);
        assert!((nu_metropolis(1.0, 2.0, 4.0, 1.0, 1) - 0.125).abs() < 1e-16);
    }

    #[test]
    fn modified_metropolis_examples() {
        assert_eq!(nu_modified_metropolis(3.0, 2.0, 1.0, 50.0, -1e-9, 0).unwrap(), 3.0);
        assert_eq!(nu_modified_metropolis(1.0, 2.0, 5.0, 4.0, -0.3, 3).unwrap(), 0.0625);
        let nu = nu_modified_metropolis(1.0, 0.5, 5.0, 7.0, -1.0, 1).unwrap();
        assert!((nu - 0.25).abs() < 1e-16);
        assert!(matches!(
            nu_modified_metropolis(1.0, 2.0, 5.0, 4.0, 0.0, 3),
            Err(Error::DegenerateSlope(_))
        ));
    }

    #[test]
    fn huge_exponent_underflows_to_zero() {
        assert_eq!(nu_metropolis(1.0, 2.0, 1e6, 0.0, 10), 0.0);
        let nu = nu_modified_metropolis(1.0, 2.0, 0.0, 1.0, -f64::MIN_POSITIVE, 5).unwrap();
        assert_eq!(nu, 0.0);
        assert!(nu_metropolis(1.0, 2.0, f64::NAN, 0.0, 5).is_finite());
    }

    #[test]
    fn parses_labels() {
        for k in RelaxationKind::ALL {
            assert_eq!(k.label().to_lowercase().parse::<RelaxationKind>().unwrap(), k);
        }
        assert!("nm5".parse::<RelaxationKind>().is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn metropolis_terms_are_bounded(
                sigma in 1e-6f64..1e6,
                theta in 0.05f64..5.0,
                f_lk in -1e3f64..1e3,
                f_plus in -1e3f64..1e3,
                slope in -1e3f64..-1e-6,
                k in 0u64..100_000,
            ) {
                let ceiling = nu_ceiling(sigma, theta, k);
                let nu4 = nu_modified_metropolis(sigma, theta, f_lk, f_plus, slope, k).unwrap();
                prop_assert!(nu4 >= 0.0 && nu4 <= ceiling);
                if f_plus < f_lk {
                    prop_assert_eq!(nu4, ceiling);
                    prop_assert!(nu4 > 0.0);
                }
                let nu3 = nu_metropolis(sigma, theta, f_plus, f_lk, k);
                prop_assert!(nu3 >= 0.0 && nu3 <= ceiling);
            }

            #[test]
            fn modified_metropolis_is_scale_free(
                sigma in 0.1f64..10.0,
                theta in 0.05f64..3.0,
                diff in -50.0f64..50.0,
                slope in -10.0f64..-0.01,
                scale in 1e-3f64..1e3,
                k in 1u64..1000,
            ) {
                let a = nu_modified_metropolis(sigma, theta, diff, 0.0, slope, k).unwrap();
                let b = nu_modified_metropolis(sigma, theta, diff * scale, 0.0, slope * scale, k).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * sigma);
            }

            #[test]
            fn gll_is_nonnegative(vals in proptest::collection::vec(-1e6f64..1e6, 1..40), m in 1usize..12) {
                let mut w = HistoryWindow::new(m, vals[0]);
                for v in &vals[1..] {
                    w.push(*v);
                }
                let nu = nu_gll(&w, w.newest());
                prop_assert!(nu >= 0.0);
                let tail = vals.len().saturating_sub(m + 1);
                let expected = vals[tail..].iter().copied().fold(f64::MIN, f64::max);
                prop_assert_eq!(w.f_lk(), expected);
            }
        }
    }
}
