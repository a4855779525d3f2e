//! Non-monotone Armijo line searches for functions with many spurious local
//! minima.
//!
//! Five relaxation rules share one backtracking driver ([`solver::solve`]):
//! monotone Armijo (M), the max-window rule (NM1), the averaged rule (NM2),
//! a Metropolis-type rule (NM3) and a modified Metropolis rule whose
//! exponent is the dimensionless increase over the window maximum (NM4).
//! Around the solver sit a suite of twenty global-optimization test
//! problems, a seeded benchmark grid, data profiles and checks of the
//! worst-case iteration bounds.

// negated comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counter;
pub mod direction;
pub mod error;
pub mod grid;
pub mod objective;
pub mod params;
pub mod profiles;
pub mod record;
pub mod relaxation;
pub mod results;
pub mod solver;
pub mod testfns;
pub mod verify;

pub use counter::{Breakpoint, EvalCounter};
pub use error::{Error, Result};
pub use grid::{run_bench, run_grid, BenchPlan, ProblemInstance};
pub use objective::{Objective, Point, Quadratic};
pub use params::{LineSearchParams, Sigma};
pub use record::{IterationEntry, RunRecord, RunSummary, Status};
pub use profiles::{data_profiles, DataProfile, ProfileSet};
pub use relaxation::RelaxationKind;
pub use results::{BenchConfig, ResultsFile, ResultsHeader};
pub use solver::{solve, DirectionRule, SolveConfig};
pub use testfns::TestFunction;
