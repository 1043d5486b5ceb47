use super::{config_rng, max_of, record_residual, rel, Tol};
use crate::dirac_ops::{DiracComplex, ValueSpace};
use crate::error::Result;
use crate::report::CheckRecord;

const NTERMS: usize = 6;
const MAX_DEGREE: usize = 4;

/// Complex property, agreement of direct and projector forms, membership of
/// outputs, 𝒟₀*𝒟₀ = Δ and commutation of Δ_BC with ∇_A on random polynomial
/// fields.
pub fn complex_suite(cfgs: &[(usize, usize)], samples: usize, seed: u64, tol: Tol) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &(k, n) in cfgs {
        let tag = format!("[k={k},n={n}]");
        let cx = DiracComplex::new(k, n)?;
        let mut rng = config_rng(seed, 2, k, n);
        let mut d1d0 = Vec::new();
        let mut d2d1 = Vec::new();
        let mut proj = Vec::new();
        let mut member = Vec::new();
        let mut lap = Vec::new();
        let mut commute = Vec::new();
        for _ in 0..samples {
            let f = cx.random_field(&mut rng, ValueSpace::V0, NTERMS, MAX_DEGREE);
            let g = cx.random_field(&mut rng, ValueSpace::V1, NTERMS, MAX_DEGREE);
            let fd = cx.d0(&f)?;
            d1d0.push(rel(cx.d1(&fd)?.norm(), f.norm()));
            lap.push(rel(cx.d0_star(&fd)?.sub(&cx.laplacian(&f)?).norm(), f.norm()));

            let h = cx.d1(&g)?;
            let hp = cx.d1_projector_form(&g)?;
            proj.push(rel(h.sub(&hp).norm(), h.norm().max(g.norm())));
            member.push(rel(h.membership_residual(), h.norm()));
            if k >= 3 {
                d2d1.push(rel(cx.d2p(&h)?.norm().hypot(cx.d2pp(&h)?.norm()), g.norm()));
                let w = cx.random_field(&mut rng, ValueSpace::V2, NTERMS, MAX_DEGREE);
                let a = cx.d2p(&w)?;
                let b = cx.d2pp(&w)?;
                let pa = cx.d2p_projector_form(&w)?;
                let pb = cx.d2pp_projector_form(&w)?;
                let scale = w.norm().max(a.norm()).max(b.norm());
                proj.push(rel(a.sub(&pa).norm().hypot(b.sub(&pb).norm()), scale));
                member.push(rel(a.membership_residual().max(b.membership_residual()), scale));
            }

            let phi = &f.components()[0];
            let mut worst = 0.0f64;
            for a in 0..k {
                let na = cx.nabla(a, phi)?;
                for b in 0..k {
                    for c in b..k {
                        let lhs = cx.delta(b, c, &na);
                        let rhs = cx.nabla(a, &cx.delta(b, c, phi))?;
                        worst = worst.max(lhs.sub(&rhs).norm());
                    }
                }
            }
            commute.push(rel(worst, phi.norm()));
        }
        out.push(record_residual(format!("complex.d1_d0{tag}"), "𝒟₁𝒟₀ = 0", max_of(d1d0), tol.or(1e-9)));
        if k >= 3 {
            out.push(record_residual(
                format!("complex.d2_d1{tag}"),
                "𝒟₂′𝒟₁ = 0, 𝒟₂″𝒟₁ = 0",
                max_of(d2d1),
                tol.or(1e-9),
            ));
        }
        out.push(record_residual(
            format!("complex.projector_form{tag}"),
            "direct and projector forms of 𝒟₁, 𝒟₂′, 𝒟₂″ agree",
            max_of(proj),
            tol.or(1e-10),
        ));
        out.push(record_residual(
            format!("complex.output_membership{tag}"),
            "outputs lie in 𝒱₂ and 𝒱₃",
            max_of(member),
            tol.or(1e-10),
        ));
        out.push(record_residual(format!("complex.laplacian{tag}"), "𝒟₀*𝒟₀ = Δ", max_of(lap), tol.or(1e-10)));
        out.push(record_residual(
            format!("complex.delta_commutes{tag}"),
            "Δ_BC ∇_A = ∇_A Δ_BC",
            max_of(commute),
            tol.or(1e-10),
        ));
    }
    Ok(out)
}
