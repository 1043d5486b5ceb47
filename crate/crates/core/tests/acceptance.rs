//! Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use dirac_complex::suites::{cmd_verify, resolution_sweep, Scope, SolveParams, VerifyParams};
use dirac_complex::Report;

const SEED: u64 = 0;

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn verify(scope: Scope) -> (Report, Duration) {
    let t = Instant::now();
    let r = cmd_verify(&VerifyParams { scope, seed: SEED, ..VerifyParams::default() }).expect("suite runs");
    (r, t.elapsed())
}

fn summarize(r: &Report) -> String {
    let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        format!("{} checks", r.checks.len())
    } else {
        format!("{} checks, failed: {}", r.checks.len(), failed.join(", "))
    }
}

fn residual_max(r: &Report, prefix: &str) -> f64 {
    r.checks
        .iter()
        .filter(|c| c.name.starts_with(prefix))
        .map(|c| c.value["residual"].as_f64().expect("residual record"))
        .fold(0.0, f64::max)
}

fn suite_criterion(
    id: usize,
    title: &'static str,
    scope: Scope,
    limit: f64,
    extra: impl Fn(&Report) -> (bool, String),
) -> (Outcome, Report) {
    let (r, dt) = verify(scope);
    let secs = dt.as_secs_f64();
    let (ok, note) = extra(&r);
    let pass = r.pass && ok && secs < limit;
    let detail = format!("{}; {note}; {secs:.2} s (limit {limit} s)", summarize(&r));
    (Outcome { id, title, pass, detail }, r)
}

fn check_value<'a>(r: &'a Report, name: &str) -> &'a serde_json::Value {
    &r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("missing check {name}")).value
}

#[test]
fn acceptance_criteria() {
    let mut outcomes = Vec::new();
    let mut reports = Vec::new();

    let (o, r) = suite_criterion(1, "clifford relations, n = 1..10", Scope::Clifford, 5.0, |r| {
        let ns = (1..=10).all(|n| r.checks.iter().any(|c| c.name == format!("clifford.anticommutation[n={n}]")));
        let worst = residual_max(r, "clifford.anticommutation").max(residual_max(r, "clifford.skew_adjoint"));
        (ns && worst <= 1e-12, format!("max residual {worst:.2e}"))
    });
    outcomes.push(o);
    reports.push((Scope::Clifford, r));

    let (o, r) = suite_criterion(2, "Weyl projectors and symmetrizers, k = 2..5", Scope::Weyl, 30.0, |r| {
        let d = check_value(r, "weyl.dims[k=2]");
        let k2 = d["21"] == 2 && d["22"] == 1 && d["311"] == 0;
        let idem = residual_max(r, "weyl.projector_idempotent").max(residual_max(r, "weyl.symmetrizer_idempotent"));
        let angle = residual_max(r, "weyl.image_equality");
        (
            k2 && idem <= 1e-10 && angle <= 1e-8,
            format!("k=2 dims {d}; idempotency {idem:.2e}; principal sine {angle:.2e}"),
        )
    });
    outcomes.push(o);
    reports.push((Scope::Weyl, r));

    let (o, r) = suite_criterion(3, "complex property, (k,n) in {2,3,4}x{2,3}", Scope::Complex, 60.0, |r| {
        let comp = residual_max(r, "complex.d1_d0").max(residual_max(r, "complex.d2_d1"));
        let proj = residual_max(r, "complex.projector_form");
        let d2 = [3, 4].iter().all(|k| r.checks.iter().any(|c| c.name.starts_with(&format!("complex.d2_d1[k={k}"))));
        (comp <= 1e-9 && proj <= 1e-10 && d2, format!("composition {comp:.2e}; projector form {proj:.2e}"))
    });
    outcomes.push(o);
    reports.push((Scope::Complex, r));

    let (o, r) = suite_criterion(4, "symbol exactness and Hodge symbols", Scope::Ellipticity, 120.0, |r| {
        let kid = residual_max(r, "ellipticity.kernel_identity");
        let hom = residual_max(r, "ellipticity.homogeneity");
        let int = residual_max(r, "ellipticity.intertwining");
        (
            kid <= 1e-9 && hom <= 1e-10 && int <= 1e-10,
            format!("kernel identity {kid:.2e}; homogeneity {hom:.2e}; intertwining {int:.2e}"),
        )
    });
    outcomes.push(o);
    reports.push((Scope::Ellipticity, r));

    {
        let t = Instant::now();
        let base = SolveParams::default();
        assert_eq!((base.k, base.n, base.radius), (2, 2, 0.6));
        let (r, pts) = resolution_sweep(&base, &[16, 24, 32]).expect("solve runs");
        let secs = t.elapsed().as_secs_f64();
        let at32 = |name: &str| check_value(&r, &format!("{name}[N=32]")).clone();
        let err = at32("solve.recovery")["residual"].as_f64().unwrap();
        let res = at32("solve.equation")["residual"].as_f64().unwrap();
        let ext = at32("solve.exterior_vanishing")["ratio"].as_f64().unwrap_or(f64::INFINITY);
        let errs: Vec<String> = pts.iter().map(|p| format!("{:.3}", p.sampled_error)).collect();
        let pass = r.pass && err <= 1e-6 && res <= 1e-8 && ext <= 1e-6 && secs < 600.0;
        outcomes.push(Outcome {
            id: 5,
            title: "spectral solve, k=2 n=2 N=32",
            pass,
            detail: format!(
                "recovery {err:.2e}; equation {res:.2e}; exterior ratio {ext:.2e}; sampled-data errors N=16,24,32: {}; {}; {secs:.1} s (limit 600 s)",
                errs.join(", "),
                summarize(&r)
            ),
        });
    }

    let (o, r) = suite_criterion(6, "tangential monogenicity and the kernel of pi1", Scope::Boundary, 30.0, |r| {
        let tang = residual_max(r, "boundary.tangential_monogenic");
        let pi = residual_max(r, "boundary.pi1_kernel");
        let charts = r.checks.iter().any(|c| c.name.contains("chart=tilted"));
        (tang <= 1e-10 && pi <= 1e-10 && charts, format!("tangential {tang:.2e}; pi1 kernel {pi:.2e}"))
    });
    outcomes.push(o);
    reports.push((Scope::Boundary, r));

    {
        let mut diffs = Vec::new();
        for (scope, first) in &reports {
            let (again, _) = verify(*scope);
            if again.to_json_without_timings() != first.to_json_without_timings() {
                diffs.push(scope.name());
            }
        }
        let small = SolveParams { side: 12, ..SolveParams::default() };
        let a = dirac_complex::suites::cmd_solve(&small).expect("solve runs").report.to_json_without_timings();
        let b = dirac_complex::suites::cmd_solve(&small).expect("solve runs").report.to_json_without_timings();
        if a != b {
            diffs.push("solve");
        }
        outcomes.push(Outcome {
            id: 7,
            title: "deterministic reports",
            pass: diffs.is_empty(),
            detail: if diffs.is_empty() {
                "all reruns byte-identical".into()
            } else {
                format!("differs: {}", diffs.join(", "))
            },
        });
    }

    // written to the raw handle so the lines survive output capture
    let mut err = std::io::stderr().lock();
    for o in &outcomes {
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {} [{verdict}] {}: {}", o.id, o.title, o.detail).expect("stderr");
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
