//! Fixtures shared by the criterion benches.

use nmls_core::grid::generate_starts;
use nmls_core::testfns::by_name;
use nmls_core::{Point, TestFunction};

pub const SEED: u64 = 42;

/// A test function with `count` seeded starting points.
pub fn problem(name: &str, count: u32) -> (TestFunction, Vec<Point>) {
    let f = by_name(name).expect("registered test function");
    let starts = generate_starts(&f, count, SEED)
        .into_iter()
        .map(|p| Point::from_vec(p.x0))
        .collect();
    (f, starts)
}
