//! Seeded problem grids (function × start) and their parallel execution.

use std::fmt::Write as _;
use std::hash::Hasher;

use fnv::FnvHasher;
use nalgebra::DVector;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256StarStar};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::params::LineSearchParams;
use crate::record::RunRecord;
use crate::relaxation::RelaxationKind;
use crate::results::{ResultsFile, ResultsHeader};
use crate::solver::{solve, SolveConfig};
use crate::testfns::TestFunction;

/// One (function, start) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub function: String,
    pub start_index: u32,
    pub x0: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchPlan {
    pub methods: Vec<RelaxationKind>,
    pub starts_per_function: u32,
    /// Budget per problem in simplex gradients, i.e. units of n+1 evaluations.
    pub budget_simplex_gradients: u64,
    pub master_seed: u64,
    /// Worker threads. Does not affect results.
    pub parallelism: usize,
}

impl BenchPlan {
    /// 360 starts per function, 100 simplex gradients.
    pub fn paper() -> Self {
        Self {
            starts_per_function: 360,
            ..Self::desk()
        }
    }

    /// 30 starts per function, 100 simplex gradients.
    pub fn desk() -> Self {
        Self {
            methods: RelaxationKind::ALL.to_vec(),
            starts_per_function: 30,
            budget_simplex_gradients: 100,
            master_seed: 42,
            parallelism: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.methods.is_empty() {
            return bad("at least one method is required");
        }
        if self.starts_per_function == 0 {
            return bad("starts_per_function must be positive");
        }
        if self.budget_simplex_gradients == 0 {
            return bad("budget_simplex_gradients must be positive");
        }
        if self.parallelism == 0 {
            return bad("parallelism must be positive");
        }
        Ok(())
    }

    /// Per-problem budget in scalar evaluations for an `n`-dimensional problem.
    pub fn f_budget(&self, n: usize) -> u64 {
        self.budget_simplex_gradients * (n as u64 + 1)
    }

    /// A stable 64-bit digest of everything that influences results
    /// (parallelism excluded).
    pub fn fingerprint(&self, params: &LineSearchParams) -> u64 {
        let mut canon = String::new();
        let methods: Vec<&str> = self.methods.iter().map(|m| m.label()).collect();
        write!(
            canon,
            "methods={};starts={};budget={};seed={};",
            methods.join(","),
            self.starts_per_function,
            self.budget_simplex_gradients,
            self.master_seed
        )
        .unwrap();
        canon.push_str(&serde_json::to_string(params).expect("params serialize"));
        stable_hash(&canon)
    }
}

impl Default for BenchPlan {
    fn default() -> Self {
        Self::desk()
    }
}

/// FNV-1a over the UTF-8 bytes of `s`.
pub fn stable_hash(s: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(s.as_bytes());
    h.finish()
}

/// SplitMix64(master ⊕ hash(name) ⊕ index).
pub fn instance_seed(master_seed: u64, name: &str, start_index: u32) -> u64 {
    SplitMix64::seed_from_u64(master_seed ^ stable_hash(name) ^ start_index as u64).next_u64()
}

/// A uniform point in the box `[lower, upper]`, coordinate by coordinate,
/// from xoshiro256** seeded with `seed`.
pub fn sample_box(lower: &[f64], upper: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    lower
        .iter()
        .zip(upper)
        .map(|(lo, hi)| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            lo + u * (hi - lo)
        })
        .collect()
}

/// `count` starting points for `obj`, indexed 0..count.
pub fn generate_starts<O: Objective + ?Sized>(obj: &O, count: u32, master_seed: u64) -> Vec<ProblemInstance> {
    (0..count)
        .map(|start_index| {
            let seed = instance_seed(master_seed, obj.name(), start_index);
            ProblemInstance {
                function: obj.name().to_string(),
                start_index,
                x0: sample_box(obj.lower(), obj.upper(), seed),
                seed,
            }
        })
        .collect()
}

/// Solves every (function, start, method) triple of the plan. Records come
/// back ordered by function (suite order), then start, then method (plan
/// order), independent of the thread schedule.
pub fn run_grid(plan: &BenchPlan, params: &LineSearchParams, suite: &[TestFunction]) -> Result<Vec<RunRecord>> {
    plan.validate()?;
    params.validate()?;
    let jobs: Vec<(&TestFunction, ProblemInstance, RelaxationKind)> = suite
        .iter()
        .flat_map(|f| {
            generate_starts(f, plan.starts_per_function, plan.master_seed)
                .into_iter()
                .flat_map(move |inst| plan.methods.iter().map(move |m| (f, inst.clone(), *m)))
        })
        .collect();
    let run = |(f, inst, method): &(&TestFunction, ProblemInstance, RelaxationKind)| -> Result<RunRecord> {
        let config = SolveConfig::new(*method, *params).with_budget(plan.f_budget(f.dim()));
        let mut record = solve(*f, &DVector::from_column_slice(&inst.x0), &config)?;
        record.start_index = inst.start_index;
        Ok(record)
    };
    if plan.parallelism == 1 {
        return jobs.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.parallelism)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| jobs.par_iter().map(run).collect())
}

/// Runs the plan and keeps the persisted part of each record.
pub fn run_bench(plan: &BenchPlan, params: &LineSearchParams, suite: &[TestFunction]) -> Result<ResultsFile> {
    let records = run_grid(plan, params, suite)?;
    Ok(ResultsFile {
        header: ResultsHeader {
            master_seed: plan.master_seed,
            plan_hash: plan.fingerprint(params),
        },
        records: records.iter().map(RunRecord::summary).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Quadratic;
    use crate::testfns;

    #[test]
    fn starts_are_deterministic_and_inside_the_box() {
        let f = testfns::by_name("rastrigin").unwrap();
        let a = generate_starts(&f, 360, 42);
        let b = generate_starts(&f, 360, 42);
        assert_eq!(a, b);
        assert_eq!(a.len(), 360);
        for (i, inst) in a.iter().enumerate() {
            assert_eq!(inst.start_index, i as u32);
            assert!(inst.x0.iter().all(|v| (-5.12..5.12).contains(v)));
        }
        let mut x0s: Vec<_> = a.iter().map(|i| format!("{:?}", i.x0)).collect();
        x0s.dedup();
        assert_eq!(x0s.len(), 360);
        assert_ne!(generate_starts(&f, 1, 43)[0].x0, a[0].x0);
    }

    #[test]
    fn degenerate_box_collapses_to_lower() {
        assert_eq!(sample_box(&[2.5, -1.0], &[2.5, -1.0], 9), vec![2.5, -1.0]);
    }

    #[test]
    fn seed_depends_on_name_and_index() {
        let s = instance_seed(42, "rastrigin", 0);
        assert_ne!(s, instance_seed(42, "rastrigin", 1));
        assert_ne!(s, instance_seed(42, "griewank", 0));
        assert_eq!(s, instance_seed(42, "rastrigin", 0));
    }

    #[test]
    fn budget_in_evaluations() {
        assert_eq!(BenchPlan::desk().f_budget(10), 1100);
        assert_eq!(BenchPlan::paper().starts_per_function, 360);
    }

    #[test]
    fn fingerprint_ignores_parallelism() {
        let p = LineSearchParams::paper();
        let a = BenchPlan::desk();
        let b = BenchPlan { parallelism: 8, ..a.clone() };
        let c = BenchPlan { master_seed: 7, ..a.clone() };
        assert_eq!(a.fingerprint(&p), b.fingerprint(&p));
        assert_ne!(a.fingerprint(&p), c.fingerprint(&p));
    }

    #[test]
    fn quadratic_starts_use_the_objective_box() {
        let q = Quadratic::isotropic(3);
        for inst in generate_starts(&q, 10, 1) {
            assert!(inst.x0.iter().all(|v| (-1.0..1.0).contains(v)));
        }
    }
}
