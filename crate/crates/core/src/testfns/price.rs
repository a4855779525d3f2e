//! Price's transistor modelling problem: a sum of squares
//! `γ² + Σₖ (αₖ² + βₖ²)` over four measurement sets.

/// Measurement table gⱼₖ, rows j = 1..5, columns k = 1..4.
pub const G: [[f64; 4]; 5] = [
    [0.485, 0.752, 0.869, 0.982],
    [0.369, 1.254, 0.703, 1.455],
    [5.2095, 10.0677, 22.9274, 20.2153],
    [23.3037, 101.779, 111.461, 191.267],
    [28.5132, 111.8467, 134.3884, 211.4823],
];

/// Intermediate quantities for one measurement set k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub alpha: f64,
    pub beta: f64,
    /// exp[x₅(g₁ₖ − g₃ₖx₇·10⁻³ − g₅ₖx₈·10⁻³)]
    pub exp_a: f64,
    /// exp[x₆(g₁ₖ − g₂ₖ − g₃ₖx₇·10⁻³ + g₄ₖx₉·10⁻³)]
    pub exp_b: f64,
}

pub fn gamma(x: &[f64]) -> f64 {
    x[0] * x[2] - x[1] * x[3]
}

fn exponents(x: &[f64], k: usize) -> (f64, f64) {
    let [g1, g2, g3, g4, g5] = [G[0][k], G[1][k], G[2][k], G[3][k], G[4][k]];
    let ea = g1 - g3 * x[6] * 1e-3 - g5 * x[7] * 1e-3;
    let eb = g1 - g2 - g3 * x[6] * 1e-3 + g4 * x[8] * 1e-3;
    (ea, eb)
}

pub fn residuals(x: &[f64], k: usize) -> Residuals {
    let (ea, eb) = exponents(x, k);
    let exp_a = (x[4] * ea).exp();
    let exp_b = (x[5] * eb).exp();
    let p = 1.0 - x[0] * x[1];
    let (g4, g5) = (G[3][k], G[4][k]);
    Residuals {
        alpha: p * x[2] * (exp_a - 1.0) - g5 + g4 * x[1],
        beta: p * x[3] * (exp_b - 1.0) - g5 * x[0] + g4,
        exp_a,
        exp_b,
    }
}

pub fn value(x: &[f64]) -> f64 {
    gamma(x).powi(2)
        + (0..4)
            .map(|k| {
                let r = residuals(x, k);
                r.alpha * r.alpha + r.beta * r.beta
            })
            .sum::<f64>()
}

pub fn gradient(x: &[f64], g: &mut [f64]) {
    let gm = gamma(x);
    g.iter_mut().for_each(|v| *v = 0.0);
    g[0] += 2.0 * gm * x[2];
    g[1] -= 2.0 * gm * x[3];
    g[2] += 2.0 * gm * x[0];
    g[3] -= 2.0 * gm * x[1];
    let p = 1.0 - x[0] * x[1];
    #[allow(clippy::needless_range_loop)]
    for k in 0..4 {
        let r = residuals(x, k);
        let (ea, eb) = exponents(x, k);
        let [g3, g4, g5] = [G[2][k], G[3][k], G[4][k]];
        let (ta, tb) = (2.0 * r.alpha, 2.0 * r.beta);

        g[0] += ta * (-x[1] * x[2] * (r.exp_a - 1.0));
        g[1] += ta * (-x[0] * x[2] * (r.exp_a - 1.0) + g4);
        g[2] += ta * (p * (r.exp_a - 1.0));
        let da = p * x[2] * r.exp_a;
        g[4] += ta * da * ea;
        g[6] += ta * da * x[4] * (-g3 * 1e-3);
        g[7] += ta * da * x[4] * (-g5 * 1e-3);

        g[0] += tb * (-x[1] * x[3] * (r.exp_b - 1.0) - g5);
        g[1] += tb * (-x[0] * x[3] * (r.exp_b - 1.0));
        g[3] += tb * (p * (r.exp_b - 1.0));
        let db = p * x[3] * r.exp_b;
        g[5] += tb * db * eb;
        g[6] += tb * db * x[5] * (-g3 * 1e-3);
        g[8] += tb * db * x[5] * (g4 * 1e-3);
    }
}
