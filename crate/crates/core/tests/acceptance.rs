//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use nmls_core::direction::{InverseHessian, UpdateOutcome, CURVATURE_EPS};
use nmls_core::grid::run_grid;
use nmls_core::profiles::{data_profiles, profile_values, solve_time, MAX_ALPHA};
use nmls_core::record::{relaxed_armijo_holds, RunRecord};
use nmls_core::relaxation::RelaxationKind::{self, *};
use nmls_core::results::{ResultsFile, ResultsHeader};
use nmls_core::testfns::{by_name, make_suite};
use nmls_core::verify::{self, Harness};
use nmls_core::{BenchPlan, Breakpoint, LineSearchParams, Objective, RunSummary};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!("{:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs())
}

fn gradient_correctness() -> Outcome {
    let t = Instant::now();
    let reports = verify::gradient_suite(&make_suite());
    let elapsed = t.elapsed();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let worst = reports.iter().map(|r| verify::GRADIENT_RTOL - r.worst_margin).fold(0.0, f64::max);
    let fast = elapsed < Duration::from_secs(10);
    Outcome::new(
        failed.is_empty() && cases == 20 * 50 && fast,
        format!(
            "{} functions, {cases} points, worst relative error {worst:.2e}, failures {failed:?}, {}",
            reports.len(),
            within(elapsed, Duration::from_secs(10))
        ),
    )
}

fn nu_bound(runs: &[RunRecord]) -> Outcome {
    let (mut checked, mut exact, mut violations, mut inexact) = (0, 0, 0, 0);
    for run in runs.iter().filter(|r| r.method == ModifiedMetropolis) {
        for e in &run.iterates {
            let cap = run.sigma / ((e.k + 1) as f64).powf(run.theta);
            checked += 1;
            if !(e.nu > 0.0 && e.nu <= cap) {
                violations += 1;
            }
            if e.f_next < e.f_lk {
                exact += 1;
                if (e.nu - cap).abs() > 1e-15 * cap {
                    inexact += 1;
                }
            }
        }
    }
    Outcome::new(
        checked > 0 && violations == 0 && inexact == 0,
        format!("{checked} NM4 iterations, {violations} bound violations, {exact} below f_l(k) with {inexact} off the cap"),
    )
}

fn certificate_replay(runs: &[RunRecord], params: &LineSearchParams) -> Outcome {
    let (mut checked, mut bad, mut nondecreasing) = (0, 0, 0);
    for run in runs {
        for e in &run.iterates {
            checked += 1;
            if !relaxed_armijo_holds(e.f_next, e.f, params.rho, e.step(params.beta), e.slope, e.nu) {
                bad += 1;
            }
            if run.method == Monotone && e.f_next >= e.f {
                nondecreasing += 1;
            }
        }
    }
    Outcome::new(
        checked > 0 && bad == 0 && nondecreasing == 0,
        format!("{checked} accepted iterates replayed, {bad} failed, {nondecreasing} monotone non-decreases"),
    )
}

fn lemma1() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for theta in verify::LEMMA1_THETAS {
        let h = Harness::quadratic(theta);
        ok &= h.l_tilde() == 4.0;
        let report = match h.run(verify::LEMMA1_HORIZON, 0.0) {
            Ok(run) => verify::check_lemma1(&run, &h, verify::LEMMA1_HORIZON),
            Err(e) => return Outcome::new(false, format!("theta={theta}: {e}")),
        };
        ok &= report.passed && report.cases == 500;
        lines.push(format!("theta={theta} T=1..500 min margin {:.3e}", report.worst_margin));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    Outcome::new(ok, format!("L~=4; {}; {}", lines.join(", "), within(elapsed, Duration::from_secs(5))))
}

fn theorem1() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for theta in verify::THEOREM1_THETAS {
        let h = Harness::quadratic(theta);
        for eps in verify::THEOREM1_EPS {
            let bound = h.theorem1_bound(eps).unwrap();
            let run = h.run(bound.ceil() as u64 + 1, eps).unwrap();
            let reached = run.final_grad_norm <= eps;
            let observed = run.iterates.len();
            ok &= reached && observed as f64 <= bound;
            lines.push(format!("theta={theta} eps={eps:e}: T={observed} <= {bound:.3e}"));
        }
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(5);
    Outcome::new(ok, format!("{}; {}", lines.join(", "), within(elapsed, Duration::from_secs(5))))
}

fn random_spd(rng: &mut Xoshiro256StarStar, n: usize, floor: f64) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    b.transpose() * &b + DMatrix::identity(n, n) * floor
}

fn random_vec(rng: &mut Xoshiro256StarStar, n: usize) -> DVector<f64> {
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    DVector::from_fn(n, |_, _| scale * rng.random_range(-1.0..1.0))
}

fn bfgs_secant() -> Outcome {
    let mut rng = Xoshiro256StarStar::seed_from_u64(6);
    let (mut pairs, mut worst, mut bad) = (0, 0.0f64, 0);
    while pairs < 1000 {
        let n = rng.random_range(2..=10);
        let a = random_spd(&mut rng, n, 0.1);
        let s = random_vec(&mut rng, n);
        let y = &a * &s;
        if s.dot(&y) <= 1e-6 {
            continue;
        }
        pairs += 1;
        let mut h = InverseHessian::from_matrix(random_spd(&mut rng, n, 0.1));
        if h.update(&s, &y, CURVATURE_EPS) != UpdateOutcome::Updated {
            bad += 1;
            continue;
        }
        let residual = (h.matrix() * &y - &s).norm() / (1.0 + s.norm());
        worst = worst.max(residual);
        if residual > 1e-10 {
            bad += 1;
        }
    }
    let mut unchanged = 0;
    for _ in 0..200 {
        let n = rng.random_range(2..=10);
        let s = random_vec(&mut rng, n);
        // y = −A s makes sᵀy ≤ 0
        let y = -(random_spd(&mut rng, n, 0.0) * &s);
        let before = random_spd(&mut rng, n, 0.1);
        let mut h = InverseHessian::from_matrix(before.clone());
        if h.update(&s, &y, CURVATURE_EPS) == UpdateOutcome::Skipped && *h.matrix() == before {
            unchanged += 1;
        }
    }
    Outcome::new(
        bad == 0 && unchanged == 200,
        format!("{pairs} pairs, worst scaled residual {worst:.2e}, {bad} failures; safeguard kept H on {unchanged}/200"),
    )
}

const FIG1: [RelaxationKind; 4] = [Monotone, Gll, ZhangHager, Metropolis];
const FIG2: [RelaxationKind; 2] = [Metropolis, ModifiedMetropolis];

fn profile_at_100(summaries: &[RunSummary], methods: &[RelaxationKind]) -> Vec<(RelaxationKind, f64, usize)> {
    let subset: Vec<RunSummary> = summaries.iter().filter(|r| methods.contains(&r.method)).cloned().collect();
    let set = data_profiles(&subset, 1e-7, |n| Ok(by_name(n)?.dim())).unwrap();
    set.profiles.iter().map(|p| (p.method, p.at(MAX_ALPHA), set.problems)).collect()
}

fn figure_ordering(summaries: &[RunSummary], single_thread: Duration) -> Outcome {
    let fig1 = profile_at_100(summaries, &FIG1);
    let fig2 = profile_at_100(summaries, &FIG2);
    let get = |set: &[(RelaxationKind, f64, usize)], m| set.iter().find(|e| e.0 == m).unwrap().1;
    let (m, nm3_1) = (get(&fig1, Monotone), get(&fig1, Metropolis));
    let (nm3_2, nm4) = (get(&fig2, Metropolis), get(&fig2, ModifiedMetropolis));
    let fmt = |set: &[(RelaxationKind, f64, usize)]| {
        set.iter().map(|(k, v, _)| format!("{k}={v:.3}")).collect::<Vec<_>>().join(" ")
    };
    let ok = nm4 - nm3_2 >= 0.05 && nm3_1 - m >= 0.05 && single_thread < Duration::from_secs(600);
    Outcome::new(
        ok,
        format!(
            "alpha=100 [M,NM1,NM2,NM3]: {} ({} problems); [NM3,NM4]: {} ({} problems); NM4-NM3={:+.3} NM3-M={:+.3}; single-thread grid {}",
            fmt(&fig1),
            fig1[0].2,
            fmt(&fig2),
            fig2[0].2,
            nm4 - nm3_2,
            nm3_1 - m,
            within(single_thread, Duration::from_secs(600))
        ),
    )
}

fn to_file(plan: &BenchPlan, params: &LineSearchParams, runs: &[RunRecord]) -> Vec<u8> {
    ResultsFile {
        header: ResultsHeader {
            master_seed: plan.master_seed,
            plan_hash: plan.fingerprint(params),
        },
        records: runs.iter().map(RunRecord::summary).collect(),
    }
    .to_bytes()
}

fn determinism(plan: &BenchPlan, params: &LineSearchParams, reference: &[u8]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, jobs) in [8usize, 8].into_iter().enumerate() {
        let plan = BenchPlan {
            parallelism: jobs,
            ..plan.clone()
        };
        let runs = run_grid(&plan, params, &make_suite()).unwrap();
        let path = dir.path().join(format!("run{i}.tsv"));
        std::fs::write(&path, to_file(&plan, params, &runs)).unwrap();
        files.push(std::fs::read(&path).unwrap());
    }
    let same = files.iter().all(|f| f == reference);
    Outcome::new(
        same,
        format!("jobs=1 vs two jobs=8 executions: {} bytes each, identical={same}", reference.len()),
    )
}

fn bp(pairs: &[(u64, f64)]) -> Vec<Breakpoint> {
    pairs.iter().map(|&(evals, best_f)| Breakpoint { evals, best_f }).collect()
}

fn profile_oracles() -> Outcome {
    let mut notes = Vec::new();
    let t = solve_time(&bp(&[(5, 2.0), (8, 0.5)]), 10.0, 0.0, 0.1);
    notes.push((t == Some(8), "threshold 1.0 reached at t=8"));
    let at_start = solve_time(&bp(&[(0, 1.0)]), 1.0, 1.0, 1e-7);
    notes.push((at_start == Some(0), "start already at threshold gives t=0"));
    let never = solve_time(&bp(&[(0, 10.0), (40, 3.0)]), 10.0, 0.0, 0.1);
    notes.push((never.is_none(), "threshold never reached gives none"));
    let step = profile_values(&[(Some(30), 2)]);
    let steps_at_10 = step[..10].iter().all(|v| *v == 0.0) && step[10..].iter().all(|v| *v == 1.0);
    notes.push((steps_at_10, "n=2 solved at t=30 steps to 1 at alpha=10"));
    notes.push((profile_values(&[(None, 2), (None, 5)]).iter().all(|v| *v == 0.0), "nothing solved is 0"));
    notes.push((profile_values(&[(Some(0), 2), (Some(0), 5)]).iter().all(|v| *v == 1.0), "all solved at t=0 is 1"));
    let failed: Vec<&str> = notes.iter().filter(|n| !n.0).map(|n| n.1).collect();
    Outcome::new(failed.is_empty(), format!("{} worked cases, failures {failed:?}", notes.len()))
}

fn main() -> ExitCode {
    let params = LineSearchParams::paper();
    let plan = BenchPlan {
        parallelism: 1,
        ..BenchPlan::desk()
    };
    let started = Instant::now();
    let runs = run_grid(&plan, &params, &make_suite()).expect("desk grid runs");
    let grid_time = started.elapsed();
    let reference = to_file(&plan, &params, &runs);
    let summaries: Vec<RunSummary> = runs.iter().map(RunRecord::summary).collect();

    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 gradient correctness", gradient_correctness()),
        ("2 NM4 relaxation bound", nu_bound(&runs)),
        ("3 acceptance certificate replay", certificate_replay(&runs, &params)),
        ("4 Lemma 1 empirical bound", lemma1()),
        ("5 Theorem 1 consistency", theorem1()),
        ("6 BFGS secant property", bfgs_secant()),
        ("7 desk-scale profile ordering", figure_ordering(&summaries, grid_time)),
        ("8 determinism", determinism(&plan, &params, &reference)),
        ("9 data-profile worked examples", profile_oracles()),
    ];
    let mut failures = 0;
    for (name, outcome) in &criteria {
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", outcome.detail);
        failures += usize::from(!outcome.passed);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
