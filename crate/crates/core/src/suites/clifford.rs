use rand::Rng;

use super::{config_rng, max_of, record_residual, Tol};
use crate::clifford::build_clifford;
use crate::error::Result;
use crate::linalg::C64;
use crate::report::CheckRecord;

fn expected_s_dim(n: usize) -> usize {
    match n {
        1 => 1,
        n if n % 2 == 0 => 1 << (n / 2 - 1),
        n => 1 << ((n - 1) / 2),
    }
}

/// Anticommutation, skew-adjointness, spinor dimension and the symbol
/// identity ξ⁻ξ′⁺ + ξ′⁻ξ⁺ = 2⟨ξ,ξ′⟩ on random pairs.
pub fn clifford_suite(ns: &[usize], samples: usize, seed: u64, tol: Tol) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &n in ns {
        let rep = build_clifford(n)?;
        out.push(record_residual(
            format!("clifford.anticommutation[n={n}]"),
            "γⱼγₖ + γₖγⱼ = −2δⱼₖ",
            rep.anticommutation_residual(),
            tol.or(1e-12),
        ));
        out.push(record_residual(
            format!("clifford.skew_adjoint[n={n}]"),
            "γⱼ* = −γⱼ",
            rep.skew_adjoint_residual(),
            tol.or(1e-12),
        ));
        let want = expected_s_dim(n);
        out.push(CheckRecord::exact(
            format!("clifford.spinor_dim[n={n}]"),
            "dim S± = 2^(n/2−1) (n even), 2^((n−1)/2) (n odd)",
            serde_json::json!({ "s_dim": rep.s_dim, "expected": want }),
            rep.s_dim == want,
        ));
        let mut rng = config_rng(seed, 1, 0, n);
        let s = rep.s_dim;
        let id = nalgebra::DMatrix::<C64>::identity(s, s);
        let polar = max_of((0..samples).map(|_| {
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (ap, am) = rep.dirac_symbol(&a);
            let (bp, bm) = rep.dirac_symbol(&b);
            let dot = rep.delta_symbol(&a, &b);
            let r = &am * &bp + &bm * &ap - &id * C64::new(dot, 0.0);
            r.iter().map(|z| z.norm()).fold(0.0, f64::max)
        }));
        out.push(record_residual(
            format!("clifford.symbol_polarization[n={n}]"),
            "ξ⁻ξ′⁺ + ξ′⁻ξ⁺ = 2⟨ξ,ξ′⟩ I",
            polar,
            tol.or(1e-12),
        ));
    }
    Ok(out)
}
