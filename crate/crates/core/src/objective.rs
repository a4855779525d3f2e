use nalgebra::DVector;

/// A point in the search space.
pub type Point = DVector<f64>;

/// A smooth objective with an analytic gradient and a box used for sampling
/// starting points. Iterates are free to leave the box.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn lower(&self) -> &[f64];

    fn upper(&self) -> &[f64];

    fn value(&self, x: &[f64]) -> f64;

    /// Writes the gradient at `x` into `grad` (same length as `x`).
    fn gradient(&self, x: &[f64], grad: &mut [f64]);
}

/// `f(x) = ½ Σ dᵢ xᵢ²`, the harness objective used to check the complexity
/// bounds. Its gradient is Lipschitz with constant `max dᵢ` and `f ≥ 0`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    diag: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Quadratic {
    /// The isotropic quadratic `½‖x‖²` in `n` dimensions.
    pub fn isotropic(n: usize) -> Self {
        Self::diagonal(vec![1.0; n])
    }

    pub fn diagonal(diag: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "quadratic needs at least one dimension");
        assert!(
            diag.iter().all(|d| *d > 0.0 && d.is_finite()),
            "diagonal entries must be positive"
        );
        let n = diag.len();
        Self {
            diag,
            lower: vec![-1.0; n],
            upper: vec![1.0; n],
        }
    }

    pub fn lipschitz(&self) -> f64 {
        self.diag.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn lower_bound(&self) -> f64 {
        0.0
    }
}

impl Objective for Quadratic {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn lower(&self) -> &[f64] {
        &self.lower
    }

    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn value(&self, x: &[f64]) -> f64 {
        0.5 * x
            .iter()
            .zip(&self.diag)
            .map(|(xi, di)| di * xi * xi)
            .sum::<f64>()
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        for ((g, xi), di) in grad.iter_mut().zip(x).zip(&self.diag) {
            *g = di * xi;
        }
    }
}

/// Central finite-difference gradient with step `h_i = rel_step·(1+|x_i|)`.
pub fn central_difference<O: Objective + ?Sized>(obj: &O, x: &[f64], rel_step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = rel_step * (1.0 + x[i].abs());
            probe[i] = x[i] + h;
            let fp = obj.value(&probe);
            probe[i] = x[i] - h;
            let fm = obj.value(&probe);
            probe[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}
