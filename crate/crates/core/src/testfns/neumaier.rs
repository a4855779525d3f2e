/// `Σₖ (bₖ − Σᵢ xᵢᵏ)²` for k = 1..n with b = (8, 18, 44, 114).
pub fn neumaier2(x: &[f64]) -> f64 {
    const B: [f64; 4] = [8.0, 18.0, 44.0, 114.0];
    B.iter()
        .enumerate()
        .map(|(k, b)| {
            let s: f64 = x.iter().map(|v| v.powi(k as i32 + 1)).sum();
            (b - s).powi(2)
        })
        .sum()
}

pub fn neumaier2_grad(x: &[f64], g: &mut [f64]) {
    const B: [f64; 4] = [8.0, 18.0, 44.0, 114.0];
    g.iter_mut().for_each(|v| *v = 0.0);
    for (k, b) in B.iter().enumerate() {
        let p = k as i32 + 1;
        let r = b - x.iter().map(|v| v.powi(p)).sum::<f64>();
        for (gi, v) in g.iter_mut().zip(x) {
            *gi -= 2.0 * r * p as f64 * v.powi(p - 1);
        }
    }
}

/// `Σ (xᵢ − 1)² − Σ xᵢ xᵢ₋₁`.
pub fn neumaier3(x: &[f64]) -> f64 {
    x.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>() - x.windows(2).map(|w| w[0] * w[1]).sum::<f64>()
}

pub fn neumaier3_grad(x: &[f64], g: &mut [f64]) {
    let n = x.len();
    for j in 0..n {
        let mut d = 2.0 * (x[j] - 1.0);
        if j > 0 {
            d -= x[j - 1];
        }
        if j + 1 < n {
            d -= x[j + 1];
        }
        g[j] = d;
    }
}
