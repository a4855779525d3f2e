use std::f64::consts::PI;

const THETA: f64 = PI / 6.0;
const M: i32 = 10;

/// The rotated coordinates y = R x: odd positions (1-based) mix forward with
/// (cos θ, −sin θ), even positions with (sin θ, cos θ), and the last one is
/// left alone.
fn rotate(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let (s, c) = THETA.sin_cos();
    (0..n)
        .map(|i| {
            if i == n - 1 {
                x[i]
            } else if i % 2 == 0 {
                x[i] * c - x[i + 1] * s
            } else {
                x[i] * s + x[i + 1] * c
            }
        })
        .collect()
}

/// `−Σ sin(yᵢ) sin²ᵐ(i yᵢ²/π)` with θ = π/6 and m = 10.
pub fn epistatic_michalewicz(x: &[f64]) -> f64 {
    -rotate(x)
        .iter()
        .enumerate()
        .map(|(i, &y)| y.sin() * ((i + 1) as f64 * y * y / PI).sin().powi(2 * M))
        .sum::<f64>()
}

pub fn epistatic_michalewicz_grad(x: &[f64], g: &mut [f64]) {
    let n = x.len();
    let y = rotate(x);
    let dy: Vec<f64> = y
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let w = (i + 1) as f64;
            let arg = w * y * y / PI;
            let s = arg.sin();
            -(y.cos() * s.powi(2 * M) + y.sin() * 2.0 * M as f64 * s.powi(2 * M - 1) * arg.cos() * 2.0 * w * y / PI)
        })
        .collect();
    let (s, c) = THETA.sin_cos();
    g.iter_mut().for_each(|v| *v = 0.0);
    for i in 0..n {
        if i == n - 1 {
            g[i] += dy[i];
        } else if i % 2 == 0 {
            g[i] += dy[i] * c;
            g[i + 1] -= dy[i] * s;
        } else {
            g[i] += dy[i] * s;
            g[i + 1] += dy[i] * c;
        }
    }
}
