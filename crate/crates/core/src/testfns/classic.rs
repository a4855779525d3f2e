//! Low-dimensional and separable problems.

use std::f64::consts::PI;

pub fn bohachevsky1(x: &[f64]) -> f64 {
    x[0] * x[0] + 2.0 * x[1] * x[1] - 0.3 * (3.0 * PI * x[0]).cos() - 0.4 * (4.0 * PI * x[1]).cos() + 0.7
}

pub fn bohachevsky1_grad(x: &[f64], g: &mut [f64]) {
    g[0] = 2.0 * x[0] + 0.9 * PI * (3.0 * PI * x[0]).sin();
    g[1] = 4.0 * x[1] + 1.6 * PI * (4.0 * PI * x[1]).sin();
}

pub fn bohachevsky2(x: &[f64]) -> f64 {
    x[0] * x[0] + 2.0 * x[1] * x[1] - 0.3 * (3.0 * PI * x[0]).cos() * (4.0 * PI * x[1]).cos() + 0.3
}

pub fn bohachevsky2_grad(x: &[f64], g: &mut [f64]) {
    let (a, b) = (3.0 * PI * x[0], 4.0 * PI * x[1]);
    g[0] = 2.0 * x[0] + 0.9 * PI * a.sin() * b.cos();
    g[1] = 4.0 * x[1] + 1.2 * PI * a.cos() * b.sin();
}

pub fn cosine_mixture(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v - 0.1 * (5.0 * PI * v).cos()).sum()
}

pub fn cosine_mixture_grad(x: &[f64], g: &mut [f64]) {
    for (gi, v) in g.iter_mut().zip(x) {
        *gi = 2.0 * v + 0.5 * PI * (5.0 * PI * v).sin();
    }
}

pub fn easom(x: &[f64]) -> f64 {
    let e = (-(x[0] - PI).powi(2) - (x[1] - PI).powi(2)).exp();
    -x[0].cos() * x[1].cos() * e
}

pub fn easom_grad(x: &[f64], g: &mut [f64]) {
    let e = (-(x[0] - PI).powi(2) - (x[1] - PI).powi(2)).exp();
    let (c0, c1) = (x[0].cos(), x[1].cos());
    g[0] = e * c1 * (x[0].sin() + 2.0 * (x[0] - PI) * c0);
    g[1] = e * c0 * (x[1].sin() + 2.0 * (x[1] - PI) * c1);
}

pub fn exponential(x: &[f64]) -> f64 {
    -(-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp()
}

pub fn exponential_grad(x: &[f64], g: &mut [f64]) {
    let e = (-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp();
    for (gi, v) in g.iter_mut().zip(x) {
        *gi = v * e;
    }
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + sum - prod
}

pub fn griewank_grad(x: &[f64], g: &mut [f64]) {
    let roots: Vec<f64> = (1..=x.len()).map(|i| (i as f64).sqrt()).collect();
    for i in 0..x.len() {
        let others: f64 = (0..x.len())
            .filter(|&j| j != i)
            .map(|j| (x[j] / roots[j]).cos())
            .product();
        g[i] = x[i] / 2000.0 + (x[i] / roots[i]).sin() / roots[i] * others;
    }
}

/// `10n + Σ (xᵢ² − 10 cos 2πxᵢ)`.
pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

pub fn rastrigin_grad(x: &[f64], g: &mut [f64]) {
    for (gi, v) in g.iter_mut().zip(x) {
        *gi = 2.0 * v + 20.0 * PI * (2.0 * PI * v).sin();
    }
}

pub fn schaffer1(x: &[f64]) -> f64 {
    let s = x[0] * x[0] + x[1] * x[1];
    let denom = 1.0 + 0.001 * s;
    0.5 + (s.sqrt().sin().powi(2) - 0.5) / (denom * denom)
}

pub fn schaffer1_grad(x: &[f64], g: &mut [f64]) {
    let s = x[0] * x[0] + x[1] * x[1];
    let r = s.sqrt();
    let u = r.sin().powi(2);
    // d sin²(√s)/ds = sin(2√s)/(2√s), which tends to 1 at the origin
    let du = if r < 1e-8 { 1.0 } else { (2.0 * r).sin() / (2.0 * r) };
    let denom = 1.0 + 0.001 * s;
    let df_ds = du / (denom * denom) - 0.002 * (u - 0.5) / denom.powi(3);
    g[0] = 2.0 * x[0] * df_ds;
    g[1] = 2.0 * x[1] * df_ds;
}

pub fn schaffer2(x: &[f64]) -> f64 {
    let s = x[0] * x[0] + x[1] * x[1];
    s.powf(0.25) * ((50.0 * s.powf(0.1)).sin().powi(2) + 1.0)
}

/// The function is not differentiable at the origin; zero is returned there.
pub fn schaffer2_grad(x: &[f64], g: &mut [f64]) {
    let s = x[0] * x[0] + x[1] * x[1];
    if s == 0.0 {
        g[0] = 0.0;
        g[1] = 0.0;
        return;
    }
    let t = 50.0 * s.powf(0.1);
    let df_ds = 0.25 * s.powf(-0.75) * (t.sin().powi(2) + 1.0) + 5.0 * s.powf(-0.65) * (2.0 * t).sin();
    g[0] = 2.0 * x[0] * df_ds;
    g[1] = 2.0 * x[1] * df_ds;
}

fn shubert_term(t: f64) -> (f64, f64) {
    (1..=5).fold((0.0, 0.0), |(v, d), j| {
        let j = j as f64;
        let arg = (j + 1.0) * t + j;
        (v + j * arg.cos(), d - j * (j + 1.0) * arg.sin())
    })
}

pub fn shubert(x: &[f64]) -> f64 {
    x.iter().map(|&v| shubert_term(v).0).product()
}

pub fn shubert_grad(x: &[f64], g: &mut [f64]) {
    let terms: Vec<(f64, f64)> = x.iter().map(|&v| shubert_term(v)).collect();
    for (i, gi) in g.iter_mut().enumerate() {
        *gi = terms
            .iter()
            .enumerate()
            .map(|(j, &(v, d))| if j == i { d } else { v })
            .product();
    }
}

const SIN_A: f64 = 2.5;
const SIN_B: f64 = 5.0;
/// Phase shift in degrees.
const SIN_Z: f64 = 30.0;
const DEG: f64 = PI / 180.0;

/// `−[A Π sin(xᵢ − z) + Π sin(B(xᵢ − z))]` with angles in degrees.
pub fn sinusoidal(x: &[f64]) -> f64 {
    let p1: f64 = x.iter().map(|v| ((v - SIN_Z) * DEG).sin()).product();
    let p2: f64 = x.iter().map(|v| (SIN_B * (v - SIN_Z) * DEG).sin()).product();
    -(SIN_A * p1 + p2)
}

pub fn sinusoidal_grad(x: &[f64], g: &mut [f64]) {
    let u: Vec<f64> = x.iter().map(|v| (v - SIN_Z) * DEG).collect();
    for i in 0..x.len() {
        let mut p1 = u[i].cos();
        let mut p2 = SIN_B * (SIN_B * u[i]).cos();
        for (j, uj) in u.iter().enumerate() {
            if j != i {
                p1 *= uj.sin();
                p2 *= (SIN_B * uj).sin();
            }
        }
        g[i] = -(SIN_A * p1 + p2) * DEG;
    }
}
