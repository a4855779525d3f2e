use std::f64::consts::PI;

fn sin2(t: f64) -> f64 {
    t.sin().powi(2)
}

/// With yᵢ = 1 + (xᵢ + 1)/4:
/// `(π/n)[10 sin²(πy₁) + Σ (yᵢ−1)²(1 + 10 sin²(πyᵢ₊₁)) + (yₙ−1)²]`.
pub fn levy_montalvo1(x: &[f64]) -> f64 {
    let n = x.len();
    let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
    let mut s = 10.0 * sin2(PI * y[0]);
    for i in 0..n - 1 {
        s += (y[i] - 1.0).powi(2) * (1.0 + 10.0 * sin2(PI * y[i + 1]));
    }
    s += (y[n - 1] - 1.0).powi(2);
    PI / n as f64 * s
}

pub fn levy_montalvo1_grad(x: &[f64], g: &mut [f64]) {
    let n = x.len();
    let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
    let scale = PI / n as f64 * 0.25;
    for j in 0..n {
        let mut d = 0.0;
        if j == 0 {
            d += 10.0 * PI * (2.0 * PI * y[0]).sin();
        }
        if j + 1 < n {
            d += 2.0 * (y[j] - 1.0) * (1.0 + 10.0 * sin2(PI * y[j + 1]));
        }
        if j > 0 {
            d += (y[j - 1] - 1.0).powi(2) * 10.0 * PI * (2.0 * PI * y[j]).sin();
        }
        if j == n - 1 {
            d += 2.0 * (y[j] - 1.0);
        }
        g[j] = scale * d;
    }
}

/// `0.1[sin²(3πx₁) + Σ (xᵢ−1)²(1 + sin²(3πxᵢ₊₁)) + (xₙ−1)²(1 + sin²(2πxₙ))]`.
pub fn levy_montalvo2(x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = sin2(3.0 * PI * x[0]);
    for i in 0..n - 1 {
        s += (x[i] - 1.0).powi(2) * (1.0 + sin2(3.0 * PI * x[i + 1]));
    }
    s += (x[n - 1] - 1.0).powi(2) * (1.0 + sin2(2.0 * PI * x[n - 1]));
    0.1 * s
}

pub fn levy_montalvo2_grad(x: &[f64], g: &mut [f64]) {
    let n = x.len();
    for j in 0..n {
        let mut d = 0.0;
        if j == 0 {
            d += 3.0 * PI * (6.0 * PI * x[0]).sin();
        }
        if j + 1 < n {
            d += 2.0 * (x[j] - 1.0) * (1.0 + sin2(3.0 * PI * x[j + 1]));
        }
        if j > 0 {
            d += (x[j - 1] - 1.0).powi(2) * 3.0 * PI * (6.0 * PI * x[j]).sin();
        }
        if j == n - 1 {
            let e = x[j] - 1.0;
            d += 2.0 * e * (1.0 + sin2(2.0 * PI * x[j])) + e * e * 2.0 * PI * (4.0 * PI * x[j]).sin();
        }
        g[j] = 0.1 * d;
    }
}
