//! Verification suites and the solve pipeline behind the command-line tool.

mod boundary;
mod clifford;
mod complex;
mod ellipticity;
mod solve;
mod weyl;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use boundary::{boundary_suite, tilted_chart};
pub use clifford::clifford_suite;
pub use complex::complex_suite;
pub use ellipticity::ellipticity_suite;
pub use solve::{cmd_solve, resolution_sweep, SolveOutcome, SolveParams, SweepPoint};
pub use weyl::weyl_suite;

use crate::error::{Error, Result};
use crate::report::{CheckRecord, Parameters, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Clifford,
    Weyl,
    Complex,
    Ellipticity,
    Boundary,
    All,
}

impl Scope {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "clifford" => Scope::Clifford,
            "weyl" => Scope::Weyl,
            "complex" => Scope::Complex,
            "ellipticity" => Scope::Ellipticity,
            "boundary" => Scope::Boundary,
            "all" => Scope::All,
            _ => return Err(Error::InvalidArgument(format!("unknown scope {s}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::Clifford => "clifford",
            Scope::Weyl => "weyl",
            Scope::Complex => "complex",
            Scope::Ellipticity => "ellipticity",
            Scope::Boundary => "boundary",
            Scope::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub scope: Scope,
    /// Restricts sweeps to one k; `None` runs the default configurations.
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    /// Overrides every residual threshold when set.
    pub tol: Option<f64>,
    /// Fail with a usage error when 𝒟₂ checks cannot run (k < 3).
    pub require_d2: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { scope: Scope::All, k: None, n: None, samples: None, seed: 0, tol: None, require_d2: false }
    }
}

/// Threshold helper: the pinned default unless overridden.
#[derive(Clone, Copy, Debug)]
pub struct Tol(pub Option<f64>);

impl Tol {
    pub fn or(self, default: f64) -> f64 {
        self.0.unwrap_or(default)
    }
}

/// Deterministic per-configuration generator.
pub fn config_rng(seed: u64, tag: u64, k: usize, n: usize) -> ChaCha8Rng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(tag.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add((k as u64) << 32 | n as u64);
    ChaCha8Rng::seed_from_u64(mix)
}

pub(crate) fn timed<T>(report: &mut Report, label: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    *report.timings.entry(label.to_string()).or_insert(0.0) += t.elapsed().as_secs_f64();
    out
}

fn filter(default: &[usize], pick: Option<usize>) -> Vec<usize> {
    match pick {
        Some(v) => vec![v],
        None => default.to_vec(),
    }
}

fn pairs(default: &[(usize, usize)], k: Option<usize>, n: Option<usize>) -> Vec<(usize, usize)> {
    let mut ks: Vec<usize> = default.iter().map(|p| p.0).collect();
    let mut ns: Vec<usize> = default.iter().map(|p| p.1).collect();
    ks.dedup();
    ks.sort();
    ks.dedup();
    ns.sort();
    ns.dedup();
    match (k, n) {
        (Some(k), Some(n)) => vec![(k, n)],
        (Some(k), None) => ns.into_iter().map(|n| (k, n)).collect(),
        (None, Some(n)) => ks.into_iter().map(|k| (k, n)).collect(),
        (None, None) => default.to_vec(),
    }
}

pub const COMPLEX_CONFIGS: [(usize, usize); 6] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];
pub const ELLIPTICITY_CONFIGS: [(usize, usize); 4] = [(3, 2), (3, 3), (2, 2), (2, 3)];
pub const BOUNDARY_CONFIGS: [(usize, usize); 4] = [(2, 2), (2, 3), (3, 2), (3, 3)];

/// Runs the suites selected by `p`. Parameter-range problems are errors;
/// failing checks are recorded in the report.
pub fn cmd_verify(p: &VerifyParams) -> Result<Report> {
    if let Some(k) = p.k {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2 (got {k})")));
        }
        if p.require_d2 && k < 3 {
            return Err(Error::RequiresK3(k));
        }
    }
    if p.n == Some(0) {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if p.samples == Some(0) {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let params = Parameters {
        scope: Some(p.scope.name().to_string()),
        k: p.k,
        n: p.n,
        samples: p.samples,
        seed: Some(p.seed),
        tol: p.tol,
        ..Parameters::default()
    };
    let mut report = Report::new("verify", params);
    let tol = Tol(p.tol);
    let run = |s: Scope| p.scope == s || p.scope == Scope::All;
    if run(Scope::Clifford) {
        let ns = filter(&(1..=10).collect::<Vec<_>>(), p.n);
        let recs = timed(&mut report, "clifford", || clifford_suite(&ns, p.samples.unwrap_or(20), p.seed, tol));
        report.extend(recs?);
    }
    if run(Scope::Weyl) {
        let ks = filter(&[2, 3, 4, 5], p.k);
        let recs = timed(&mut report, "weyl", || weyl_suite(&ks, tol));
        report.extend(recs?);
    }
    if run(Scope::Complex) {
        let cfgs = pairs(&COMPLEX_CONFIGS, p.k, p.n);
        let recs = timed(&mut report, "complex", || complex_suite(&cfgs, p.samples.unwrap_or(25), p.seed, tol));
        report.extend(recs?);
    }
    if run(Scope::Ellipticity) {
        let cfgs = pairs(&ELLIPTICITY_CONFIGS, p.k, p.n);
        let recs =
            timed(&mut report, "ellipticity", || ellipticity_suite(&cfgs, p.samples.unwrap_or(100), p.seed, tol));
        report.extend(recs?);
    }
    if run(Scope::Boundary) {
        let cfgs = pairs(&BOUNDARY_CONFIGS, p.k, p.n);
        let recs = timed(&mut report, "boundary", || boundary_suite(&cfgs, p.samples.unwrap_or(20), 3, p.seed, tol));
        report.extend(recs?);
    }
    Ok(report)
}

pub(crate) fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    // NaN must not be swallowed by f64::max
    it.into_iter().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

pub(crate) fn rel(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

pub(crate) fn record_residual(name: String, anchor: &str, r: f64, thr: f64) -> CheckRecord {
    CheckRecord::residual(name, anchor, r, thr)
}
