use rand::Rng;

use super::{config_rng, max_of, record_residual, rel, Tol};
use crate::error::Result;
use crate::linalg::{frob, RANK_TOL};
use crate::report::CheckRecord;
use crate::symbols::{
    eigen_bounds, green, intertwine_check, kernel_identity_check, verify_exactness, BundleMode, SymbolBundle,
    SymbolContext,
};

pub(crate) fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-3 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Exactness of the symbol sequence, the kernel identity for ker σ₂, positivity,
/// homogeneity and intertwining of the Hodge symbols at random unit ξ.
pub fn ellipticity_suite(cfgs: &[(usize, usize)], samples: usize, seed: u64, tol: Tol) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &(k, n) in cfgs {
        let tag = format!("[k={k},n={n}]");
        let ctx = SymbolContext::new(k, n)?;
        let mut rng = config_rng(seed, 3, k, n);
        let mut exact_fail = 0usize;
        let mut ranks = None;
        let mut comp = Vec::new();
        let mut kernel_id = Vec::new();
        let mut homog = Vec::new();
        let mut inter = Vec::new();
        let mut greens = Vec::new();
        let mut bounds: Vec<(f64, f64)> = Vec::new();
        let mut mode = BundleMode::Full;
        for _ in 0..samples {
            let xi = random_unit(&mut rng, k * n);
            let b = SymbolBundle::build(&ctx, &xi)?;
            mode = b.mode;
            let r = verify_exactness(&b, RANK_TOL)?;
            if !r.pass {
                exact_fail += 1;
            }
            ranks.get_or_insert(r);
            let [r1, r2, r3] = b.composition_residuals();
            comp.push(
                rel(r1, frob(&b.sigma1) * frob(&b.sigma0))
                    .max(rel(r2.hypot(r3), frob(&b.sigma1) * b.sigma2_stacked().map_or(1.0, |m| frob(&m)))),
            );
            if mode == BundleMode::Full {
                kernel_id.push(kernel_identity_check(&ctx, &b)?);
            }
            let xi2: Vec<f64> = xi.iter().map(|x| 2.0 * x).collect();
            let b2 = SymbolBundle::build(&ctx, &xi2)?;
            let hodge = b.hodge();
            let hodge2 = b2.hodge();
            if bounds.is_empty() {
                bounds = vec![(f64::INFINITY, 0.0); hodge.len()];
            }
            let mut h = 0.0f64;
            let mut g = 0.0f64;
            for (i, ((_, l), (_, l2))) in hodge.iter().zip(&hodge2).enumerate() {
                h = h.max(rel(frob(&(*l2 - *l * crate::linalg::C64::new(16.0, 0.0))), 16.0 * frob(l)));
                let (lo, hi) = eigen_bounds(l);
                bounds[i].0 = bounds[i].0.min(lo);
                bounds[i].1 = bounds[i].1.max(hi);
                g = g.max(green(l).map_or(f64::INFINITY, |(_, r)| r));
            }
            homog.push(h);
            greens.push(g);
            inter.push(intertwine_check(&b));
        }
        let r = ranks.expect("samples > 0");
        out.push(CheckRecord::exact(
            format!("ellipticity.exactness{tag}"),
            "ker σ₀ = 0, ker σ₁ = im σ₀, ker σ₂′ ∩ ker σ₂″ = im σ₁",
            serde_json::json!({
                "dim_v0": r.dim_v0,
                "rank_sigma0": r.rank_sigma0,
                "ker_sigma1": r.ker_sigma1,
                "rank_sigma1": r.rank_sigma1,
                "ker_sigma2": r.ker_sigma2,
                "failures": exact_fail,
                "samples": samples,
            }),
            exact_fail == 0,
        ));
        out.push(record_residual(
            format!("ellipticity.composition{tag}"),
            "σ₁σ₀ = 0, σ₂σ₁ = 0",
            max_of(comp),
            tol.or(1e-10),
        ));
        if mode == BundleMode::Full {
            out.push(record_residual(
                format!("ellipticity.kernel_identity{tag}"),
                "|ξ₀|²Θ_ABC = ξ_Aξ_BΘ_00C + ξ_Aξ_CΘ_00B − 2⟨ξ_B,ξ_C⟩Θ_00A on ker σ₂",
                max_of(kernel_id),
                tol.or(1e-9),
            ));
        }
        let min_eig = bounds.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let per_slot: Vec<_> = bounds
            .iter()
            .enumerate()
            .map(|(j, (lo, hi))| serde_json::json!({ "slot": j, "min": lo, "max": hi, "cond": hi / lo }))
            .collect();
        out.push(CheckRecord::exact(
            format!("ellipticity.positive_definite{tag}"),
            "C⁻¹|ξ|⁴ I ≤ Lⱼ(ξ) ≤ C|ξ|⁴ I",
            serde_json::json!({ "bounds": per_slot, "low_order": mode == BundleMode::LowOrder }),
            min_eig > RANK_TOL,
        ));
        out.push(record_residual(
            format!("ellipticity.homogeneity{tag}"),
            "Lⱼ(2ξ) = 16 Lⱼ(ξ)",
            max_of(homog),
            tol.or(1e-10),
        ));
        out.push(record_residual(
            format!("ellipticity.intertwining{tag}"),
            "L₂σ₁ = σ₁L₁",
            max_of(inter),
            tol.or(1e-10),
        ));
        out.push(record_residual(format!("ellipticity.green{tag}"), "LⱼGⱼ = I", max_of(greens), tol.or(1e-9)));
    }
    Ok(out)
}
