//! Data profiles: the fraction of problems a method solves to tolerance τ
//! within a budget of `α·(n_p+1)` function evaluations.
//!
//! A problem p counts as solved by a method once some evaluated point
//! satisfies `f ≤ f_L + τ(f₀ − f_L)`, where `f_L` is the best value any
//! compared method found on p. Problems with `f₀ = f_L` (nobody improved on
//! the start) make the test vacuous; they are left out of the denominator
//! and reported separately.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::counter::Breakpoint;
use crate::error::{Error, Result};
use crate::record::RunSummary;
use crate::relaxation::RelaxationKind;
use crate::results::fmt_real;

/// Budgets 0..=MAX_ALPHA simplex gradients.
pub const MAX_ALPHA: u32 = 100;

pub const DEFAULT_TAU: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProblemKey {
    pub function: String,
    pub start_index: u32,
}

/// Per-problem quantities entering the convergence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemStats {
    pub f0: f64,
    pub f_l: f64,
    pub degenerate: bool,
}

/// `f_L` per problem: the minimum `best_f` over the requested methods.
pub fn compute_fl(records: &[RunSummary], methods: &[RelaxationKind]) -> Result<BTreeMap<ProblemKey, ProblemStats>> {
    let mut by_problem: BTreeMap<ProblemKey, BTreeMap<RelaxationKind, &RunSummary>> = BTreeMap::new();
    for r in records {
        let key = ProblemKey {
            function: r.function.clone(),
            start_index: r.start_index,
        };
        by_problem.entry(key).or_default().insert(r.method, r);
    }
    let mut out = BTreeMap::new();
    for (key, runs) in by_problem {
        let mut f_l = f64::INFINITY;
        let mut f0 = f64::NAN;
        for m in methods {
            let run = runs.get(m).ok_or_else(|| Error::MissingProblem {
                function: key.function.clone(),
                start: key.start_index,
                method: m.label().to_string(),
            })?;
            f_l = f_l.min(run.best_f);
            if let Some(v) = run.f0() {
                f0 = v;
            }
        }
        // no finite start means nothing can be measured against it
        let degenerate = !(f0.is_finite() && f_l < f0);
        out.insert(key, ProblemStats { f0, f_l, degenerate });
    }
    Ok(out)
}

/// Smallest evaluation count at which the best-so-far value reaches
/// `f_L + τ(f₀ − f_L)`; `None` if it never does.
pub fn solve_time(breakpoints: &[Breakpoint], f0: f64, f_l: f64, tau: f64) -> Option<u64> {
    let threshold = f_l + tau * (f0 - f_l);
    breakpoints.iter().find(|b| b.best_f <= threshold).map(|b| b.evals)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataProfile {
    pub method: RelaxationKind,
    /// `values[α]` for α = 0..=MAX_ALPHA.
    pub values: Vec<f64>,
}

impl DataProfile {
    pub fn at(&self, alpha: u32) -> f64 {
        self.values[alpha as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSet {
    pub tau: f64,
    pub profiles: Vec<DataProfile>,
    /// Problems entering the denominator.
    pub problems: usize,
    /// Problems dropped because `f₀ = f_L`.
    pub degenerate: usize,
}

impl ProfileSet {
    pub fn get(&self, method: RelaxationKind) -> Option<&DataProfile> {
        self.profiles.iter().find(|p| p.method == method)
    }
}

/// Methods present in `records`, in canonical order.
pub fn methods_in(records: &[RunSummary]) -> Vec<RelaxationKind> {
    let mut ms: Vec<RelaxationKind> = records.iter().map(|r| r.method).collect();
    ms.sort();
    ms.dedup();
    ms
}

/// Profile values for α = 0..=MAX_ALPHA from per-problem solve times and
/// dimensions. An empty problem set gives the zero profile.
pub fn profile_values(times: &[(Option<u64>, usize)]) -> Vec<f64> {
    let mut counts = vec![0usize; MAX_ALPHA as usize + 1];
    for &(t, n) in times {
        if let Some(t) = t {
            // first α with t ≤ α·(n+1)
            let first = t.div_ceil(n as u64 + 1);
            if first <= MAX_ALPHA as u64 {
                counts[first as usize] += 1;
            }
        }
    }
    let denom = times.len().max(1) as f64;
    let mut acc = 0usize;
    counts
        .into_iter()
        .map(|c| {
            acc += c;
            acc as f64 / denom
        })
        .collect()
}

/// `d_s(α) = |{p : t_{p,s} ≤ α(n_p+1)}| / |P|` for α = 0..=MAX_ALPHA.
/// `dim` maps a function name to its dimension.
pub fn data_profiles<F>(records: &[RunSummary], tau: f64, dim: F) -> Result<ProfileSet>
where
    F: Fn(&str) -> Result<usize>,
{
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!("tau must lie in (0,1), got {tau}")));
    }
    let methods = methods_in(records);
    let stats = compute_fl(records, &methods)?;
    let mut dims = BTreeMap::new();
    for key in stats.keys() {
        if !dims.contains_key(&key.function) {
            dims.insert(key.function.clone(), dim(&key.function)?);
        }
    }
    let live: Vec<(&ProblemKey, &ProblemStats)> = stats.iter().filter(|(_, s)| !s.degenerate).collect();
    let degenerate = stats.len() - live.len();
    let mut index: BTreeMap<(RelaxationKind, &str, u32), &RunSummary> = BTreeMap::new();
    for r in records {
        index.insert((r.method, r.function.as_str(), r.start_index), r);
    }
    let profiles = methods
        .iter()
        .map(|&method| {
            let times: Vec<(Option<u64>, usize)> = live
                .iter()
                .map(|(key, st)| {
                    let run = index[&(method, key.function.as_str(), key.start_index)];
                    (solve_time(&run.breakpoints, st.f0, st.f_l, tau), dims[&key.function])
                })
                .collect();
            DataProfile {
                method,
                values: profile_values(&times),
            }
        })
        .collect();
    Ok(ProfileSet {
        tau,
        profiles,
        problems: live.len(),
        degenerate,
    })
}

/// `alpha,M,NM1,…` with one row per α.
pub fn to_csv(set: &ProfileSet) -> String {
    let mut out = String::from("alpha");
    for p in &set.profiles {
        out.push(',');
        out.push_str(p.method.label());
    }
    out.push('\n');
    for alpha in 0..=MAX_ALPHA {
        write!(out, "{alpha}").unwrap();
        for p in &set.profiles {
            write!(out, ",{}", fmt_real(p.at(alpha))).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses a table written by [`to_csv`].
pub fn from_csv(text: &str) -> Result<Vec<DataProfile>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::SchemaMismatch("empty profile table".into()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("alpha") {
        return Err(Error::SchemaMismatch("first column must be `alpha`".into()));
    }
    let mut profiles: Vec<DataProfile> = cols
        .map(|c| {
            Ok(DataProfile {
                method: c.parse()?,
                values: Vec::new(),
            })
        })
        .collect::<Result<_>>()?;
    for (i, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let lineno = i + 2;
        let alpha: usize = fields
            .next()
            .and_then(|a| a.parse().ok())
            .ok_or(Error::Parse { line: lineno, message: "bad alpha".into() })?;
        if alpha != i {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected alpha {i}, found {alpha}"),
            });
        }
        for p in profiles.iter_mut() {
            let v: f64 = fields
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or(Error::Parse { line: lineno, message: "bad value".into() })?;
            p.values.push(v);
        }
    }
    Ok(profiles)
}

pub fn emit_csv(set: &ProfileSet, path: &Path) -> Result<()> {
    fs::write(path, to_csv(set))?;
    Ok(())
}

const PALETTE: [&str; 5] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"];

/// A self-contained SVG line plot, one curve per method.
pub fn to_svg(set: &ProfileSet) -> String {
    let (w, h) = (640.0, 440.0);
    let (left, right, top, bottom) = (70.0, 130.0, 30.0, 60.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let sx = |a: f64| left + a / MAX_ALPHA as f64 * pw;
    let sy = |v: f64| top + (1.0 - v) * ph;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let y = sy(v);
        writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        )
        .unwrap();
    }
    for i in 0..=5 {
        let a = (i * MAX_ALPHA / 5) as f64;
        let x = sx(a);
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{top}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{a}</text>"##,
            top + ph,
            top + ph + 18.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">simplex gradients</text>"#,
        left + pw / 2.0,
        h - 15.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">fraction solved</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    )
    .unwrap();
    for (i, p) in set.profiles.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        // data profiles are step functions; draw them as such
        let mut pts = Vec::with_capacity(2 * p.values.len());
        for (a, v) in p.values.iter().enumerate() {
            if a > 0 {
                pts.push(format!("{:.2},{:.2}", sx(a as f64), sy(p.values[a - 1])));
            }
            pts.push(format!("{:.2},{:.2}", sx(a as f64), sy(*v)));
        }
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
        let ly = top + 10.0 + 20.0 * i as f64;
        let lx = left + pw + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            p.method.label()
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_plot(set: &ProfileSet, path: &Path) -> Result<()> {
    fs::write(path, to_svg(set))?;
    Ok(())
}
