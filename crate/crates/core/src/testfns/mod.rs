//! Differentiable global-optimization test problems with analytic gradients.
//!
//! Definitions, coefficient tables and search boxes follow the collection of
//! Ali, Khompatraporn & Zabinsky, "A numerical evaluation of several
//! stochastic algorithms on selected continuous global optimization test
//! problems", J. Global Optim. 31 (2005).

mod classic;
mod levy;
mod michalewicz;
mod neumaier;
pub mod price;
mod shekel;
pub mod storn;

use std::fmt;

use crate::error::{Error, Result};
use crate::objective::Objective;

pub type ValueFn = fn(&[f64]) -> f64;
pub type GradFn = fn(&[f64], &mut [f64]);

/// A registered test problem.
#[derive(Clone)]
pub struct TestFunction {
    name: &'static str,
    title: &'static str,
    lower: Vec<f64>,
    upper: Vec<f64>,
    value: ValueFn,
    grad: GradFn,
    known_best: Option<f64>,
    minimizer: Option<Vec<f64>>,
}

impl TestFunction {
    fn new(name: &'static str, title: &'static str, bounds: Vec<(f64, f64)>, value: ValueFn, grad: GradFn) -> Self {
        let (lower, upper) = bounds.into_iter().unzip();
        Self {
            name,
            title,
            lower,
            upper,
            value,
            grad,
            known_best: None,
            minimizer: None,
        }
    }

    fn cube(name: &'static str, title: &'static str, n: usize, lo: f64, hi: f64, value: ValueFn, grad: GradFn) -> Self {
        Self::new(name, title, vec![(lo, hi); n], value, grad)
    }

    fn best(mut self, f: f64) -> Self {
        self.known_best = Some(f);
        self
    }

    fn at(mut self, x: Vec<f64>) -> Self {
        self.minimizer = Some(x);
        self
    }

    /// Human-readable name as listed in the literature.
    pub fn title(&self) -> &'static str {
        self.title
    }

    /// Literature value of the global minimum, when known. Metadata only.
    pub fn known_best(&self) -> Option<f64> {
        self.known_best
    }

    /// A closed-form global minimizer, when one is known exactly.
    pub fn minimizer(&self) -> Option<&[f64]> {
        self.minimizer.as_deref()
    }
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("dim", &self.lower.len())
            .finish()
    }
}

impl Objective for TestFunction {
    fn name(&self) -> &str {
        self.name
    }

    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn lower(&self) -> &[f64] {
        &self.lower
    }

    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        (self.grad)(x, grad)
    }
}

/// The twenty benchmark problems in a fixed order.
pub fn make_suite() -> Vec<TestFunction> {
    use std::f64::consts::PI;
    vec![
        TestFunction::cube("bohachevsky1", "Bohachevsky 1", 2, -50.0, 50.0, classic::bohachevsky1, classic::bohachevsky1_grad)
            .best(0.0)
            .at(vec![0.0; 2]),
        TestFunction::cube("bohachevsky2", "Bohachevsky 2", 2, -50.0, 50.0, classic::bohachevsky2, classic::bohachevsky2_grad)
            .best(0.0)
            .at(vec![0.0; 2]),
        TestFunction::cube("cosine_mixture", "Cosine Mixture", 4, -1.0, 1.0, classic::cosine_mixture, classic::cosine_mixture_grad)
            .best(-0.4)
            .at(vec![0.0; 4]),
        TestFunction::cube("easom", "Easom", 2, -100.0, 100.0, classic::easom, classic::easom_grad)
            .best(-1.0)
            .at(vec![PI; 2]),
        TestFunction::cube(
            "epistatic_michalewicz",
            "Epistatic Michalewicz",
            10,
            0.0,
            PI,
            michalewicz::epistatic_michalewicz,
            michalewicz::epistatic_michalewicz_grad,
        )
        .best(-9.660152),
        TestFunction::cube("exponential", "Exponential", 10, -1.0, 1.0, classic::exponential, classic::exponential_grad)
            .best(-1.0)
            .at(vec![0.0; 10]),
        TestFunction::cube("griewank", "Griewank", 2, -600.0, 600.0, classic::griewank, classic::griewank_grad)
            .best(0.0)
            .at(vec![0.0; 2]),
        TestFunction::cube("levy_montalvo1", "Levy and Montalvo 1", 3, -10.0, 10.0, levy::levy_montalvo1, levy::levy_montalvo1_grad)
            .best(0.0)
            .at(vec![-1.0; 3]),
        TestFunction::cube("levy_montalvo2", "Levy and Montalvo 2", 10, -5.0, 5.0, levy::levy_montalvo2, levy::levy_montalvo2_grad)
            .best(0.0)
            .at(vec![1.0; 10]),
        TestFunction::cube(
            "modified_langerman",
            "Modified Langerman",
            10,
            0.0,
            10.0,
            shekel::modified_langerman,
            shekel::modified_langerman_grad,
        )
        .best(-0.965),
        TestFunction::cube("neumaier2", "Neumaier 2", 4, 0.0, 4.0, neumaier::neumaier2, neumaier::neumaier2_grad)
            .best(0.0)
            .at(vec![1.0, 2.0, 2.0, 3.0]),
        TestFunction::cube("neumaier3", "Neumaier 3", 10, -100.0, 100.0, neumaier::neumaier3, neumaier::neumaier3_grad)
            .best(-210.0)
            .at((1..=10).map(|i| (i * (11 - i)) as f64).collect()),
        TestFunction::cube("price_transistor", "Price's Transistor Modelling", 9, -10.0, 10.0, price::value, price::gradient).best(0.0),
        TestFunction::cube("rastrigin", "Rastrigin", 10, -5.12, 5.12, classic::rastrigin, classic::rastrigin_grad)
            .best(0.0)
            .at(vec![0.0; 10]),
        TestFunction::cube("schaffer1", "Schaffer 1", 2, -100.0, 100.0, classic::schaffer1, classic::schaffer1_grad)
            .best(0.0)
            .at(vec![0.0; 2]),
        TestFunction::cube("schaffer2", "Schaffer 2", 2, -100.0, 100.0, classic::schaffer2, classic::schaffer2_grad).best(0.0),
        TestFunction::cube("shekel_foxholes", "Shekel's Foxholes", 10, 0.0, 10.0, shekel::foxholes, shekel::foxholes_grad)
            .best(-10.208677),
        TestFunction::cube("shubert", "Shubert", 2, -10.0, 10.0, classic::shubert, classic::shubert_grad).best(-186.7309),
        TestFunction::cube("sinusoidal", "Sinusoidal", 10, 0.0, 180.0, classic::sinusoidal, classic::sinusoidal_grad)
            .best(-3.5)
            .at(vec![120.0; 10]),
        TestFunction::cube("storn_tchebychev", "Storn's Tchebychev", 9, -128.0, 128.0, storn::value, storn::gradient)
            .best(0.0)
            .at(storn::CHEBYSHEV_T8.to_vec()),
    ]
}

fn normalize(name: &str) -> String {
    name.trim()
        .to_ascii_lowercase()
        .chars()
        .filter_map(|c| match c {
            '-' | ' ' | '_' => Some('_'),
            '\'' => None,
            c => Some(c),
        })
        .collect()
}

/// Looks a function up by registry name (case-insensitive; `-` and `_` are
/// interchangeable).
pub fn by_name(name: &str) -> Result<TestFunction> {
    let key = normalize(name);
    make_suite()
        .into_iter()
        .find(|f| f.name == key)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

/// The search box of a registered function.
pub fn default_box(name: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let f = by_name(name)?;
    Ok((f.lower, f.upper))
}

/// The two-dimensional Rastrigin variant `20 + Σ (xᵢ² − 10 cos 2πxᵢ)`.
pub fn rastrigin_2d() -> TestFunction {
    TestFunction::cube("rastrigin2", "Rastrigin (n = 2)", 2, -5.12, 5.12, classic::rastrigin, classic::rastrigin_grad)
        .best(0.0)
        .at(vec![0.0; 2])
}
