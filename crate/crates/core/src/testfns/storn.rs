//! Storn's Tchebychev problem: find the coefficients of a degree-8
//! polynomial that stays within [−1, 1] on [−1, 1] and reaches at least
//! `d` at ±1.2. Constraint violations are penalised quadratically, so the
//! objective is continuously differentiable.

/// Target value at ±1.2.
pub const D: f64 = 72.661;
/// Number of subintervals of [−1, 1] used for the sampled constraints.
pub const M: usize = 60;

/// Coefficients of T₈ from the highest power down, the global minimizer.
pub const CHEBYSHEV_T8: [f64; 9] = [128.0, 0.0, -256.0, 0.0, 160.0, 0.0, -32.0, 0.0, 1.0];

/// `Σᵢ xᵢ t^{n−i}` (Horner form).
pub fn poly(x: &[f64], t: f64) -> f64 {
    x.iter().fold(0.0, |acc, c| acc * t + c)
}

/// The three penalty groups (p₁, p₂, p₃).
pub fn penalties(x: &[f64]) -> (f64, f64, f64) {
    let u = poly(x, 1.2);
    let v = poly(x, -1.2);
    let p1 = if u < D { (u - D).powi(2) } else { 0.0 };
    let p2 = if v < D { (v - D).powi(2) } else { 0.0 };
    let p3 = (0..=M)
        .map(|k| {
            let w = poly(x, sample(k));
            if w > 1.0 {
                (w - 1.0).powi(2)
            } else if w < -1.0 {
                (w + 1.0).powi(2)
            } else {
                0.0
            }
        })
        .sum();
    (p1, p2, p3)
}

fn sample(k: usize) -> f64 {
    2.0 * k as f64 / M as f64 - 1.0
}

pub fn value(x: &[f64]) -> f64 {
    let (p1, p2, p3) = penalties(x);
    p1 + p2 + p3
}

/// Adds `coef · ∂poly(x, t)/∂x` into `g`.
fn add_poly_grad(g: &mut [f64], t: f64, coef: f64) {
    let mut power = 1.0;
    for gi in g.iter_mut().rev() {
        *gi += coef * power;
        power *= t;
    }
}

pub fn gradient(x: &[f64], g: &mut [f64]) {
    g.iter_mut().for_each(|v| *v = 0.0);
    for t in [1.2, -1.2] {
        let u = poly(x, t);
        if u < D {
            add_poly_grad(g, t, 2.0 * (u - D));
        }
    }
    for k in 0..=M {
        let t = sample(k);
        let w = poly(x, t);
        if w > 1.0 {
            add_poly_grad(g, t, 2.0 * (w - 1.0));
        } else if w < -1.0 {
            add_poly_grad(g, t, 2.0 * (w + 1.0));
        }
    }
}
