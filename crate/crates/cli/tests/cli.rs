use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac-lab")).args(args).output().expect("binary runs")
}

fn strip_timings(stdout: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(stdout).expect("json report");
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn weyl_k2_dimensions() {
    let out = run(&["verify", "--scope", "weyl", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dims = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "weyl.dims[k=2]").unwrap();
    assert_eq!(dims["value"], serde_json::json!({ "21": 2, "22": 1, "311": 0 }));
    assert_eq!(v["pass"], true);
}

#[test]
fn complex_k3_passes() {
    let out = run(&["verify", "--scope", "complex", "--k", "3", "--n", "2", "--samples", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn d2_on_k2_is_a_usage_error() {
    let out = run(&["verify", "--scope", "complex", "--k", "2", "--n", "2", "--require-d2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires k ≥ 3"));
}

#[test]
fn bad_ranges_are_usage_errors() {
    assert_eq!(run(&["verify", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--scope", "nope"]).status.code(), Some(2));
}

#[test]
fn tight_tolerance_fails_checks() {
    let out = run(&["verify", "--scope", "ellipticity", "--k", "3", "--n", "2", "--samples", "5", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn broken_compatibility_exits_4() {
    let out = run(&["solve", "--N", "8", "--break-compat"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn memory_cap_exits_3() {
    let out = Command::new(env!("CARGO_BIN_EXE_dirac-lab"))
        .args(["solve", "--N", "16"])
        .env("DIRAC_LAB_MEM_CAP", "1M")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solve_writes_dumps() {
    let dir = std::env::temp_dir().join(format!("dirac-lab-cli-{}", std::process::id()));
    let out = run(&["solve", "--N", "12", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["phi.bin", "f.bin", "u.bin", "report.json"] {
        assert!(dir.join(f).exists(), "{f}");
    }
    let head = std::fs::read(dir.join("u.bin")).unwrap();
    let line = head.split(|&b| b == b'\n').next().unwrap();
    let h: serde_json::Value = serde_json::from_slice(line).unwrap();
    assert_eq!(h["N"], 12);
    assert_eq!(h["dtype"], "complex128-le");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--scope", "boundary", "--k", "2", "--n", "2", "--seed", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip_timings(&a.stdout), strip_timings(&b.stdout));
    let c = run(&["verify", "--scope", "boundary", "--k", "2", "--n", "2", "--seed", "4"]);
    assert_eq!(c.status.code(), Some(0));
}
