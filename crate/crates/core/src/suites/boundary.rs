use super::{config_rng, max_of, record_residual, rel, Tol};
use crate::boundary::{
    monogenic_basis, pi1, pi1_kernel_check, restrict_and_test, script_d0, tangential_fields, HypersurfaceChart,
};
use crate::calculus::SpinorCalculus;
use crate::clifford::Chirality;
use crate::dirac_ops::{DiracComplex, PolyCalculus, PolyField};
use crate::error::Result;
use crate::poly::SpinorPoly;
use crate::report::CheckRecord;

const PAIR_TERMS: usize = 5;

/// The tilted test chart ρ = x₀₂ + ½x₁₁ (ρ = ½x₁₁ when n = 1).
pub fn tilted_chart(k: usize, n: usize) -> HypersurfaceChart {
    let mut rho = vec![0.0; k * n];
    if n >= 2 {
        rho[1] = 1.0;
    }
    if k >= 2 {
        rho[n] = 0.5;
    }
    HypersurfaceChart { k, n, rho }
}

/// Tangential monogenicity of restricted monogenic polynomials, the π₁ kernel
/// property, Z_μφ = Tφ = 0 and consistency of 𝒟₀ on surface data with π₁, on
/// the flat and the tilted chart.
pub fn boundary_suite(
    cfgs: &[(usize, usize)],
    samples: usize,
    max_degree: usize,
    seed: u64,
    tol: Tol,
) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &(k, n) in cfgs {
        let cx = DiracComplex::new(k, n)?;
        let (nv, s) = (cx.nvars(), cx.s());
        let basis: Vec<(usize, SpinorPoly)> =
            (0..=max_degree).flat_map(|d| monogenic_basis(&cx, d).into_iter().map(move |p| (d, p))).collect();
        let counts: Vec<usize> = (0..=max_degree).map(|d| basis.iter().filter(|(e, _)| *e == d).count()).collect();
        let mono = max_of(basis.iter().map(|(_, p)| {
            let f = PolyField::from_spinor(k, n, p).expect("S+ polynomial");
            rel(cx.d0(&f).expect("V0 field").norm(), p.norm())
        }));
        out.push(CheckRecord::exact(
            format!("boundary.monogenic_basis[k={k},n={n}]"),
            "∇_A f = 0 for A = 0..k−1, graded by degree",
            serde_json::json!({ "dims_by_degree": counts, "residual": mono }),
            mono <= tol.or(1e-10),
        ));
        let calc = PolyCalculus { k, rep: &cx.rep };
        for (label, chart) in [("flat", HypersurfaceChart::flat(k, n)), ("tilted", tilted_chart(k, n))] {
            let tag = format!("[k={k},n={n},chart={label}]");
            let tf = tangential_fields(&chart, &cx.rep)?;
            let grad = chart.grad_phi();
            let on_phi = tf.z.iter().map(|z| z.on_phi(&grad)).fold(tf.t_plus.on_phi(&grad), f64::max);
            out.push(record_residual(
                format!("boundary.fields_tangent{tag}"),
                "Z_μφ = 0, Tφ = 0",
                on_phi,
                tol.or(1e-12),
            ));

            let mut restrict = Vec::new();
            let mut comm = Vec::new();
            for (_, p) in &basis {
                let r = restrict_and_test(&cx, p, &tf, tol.or(1e-10))?;
                restrict.push(r.f1_residual.max(r.f2_residual));
                let fhat = chart.restrict(p);
                comm.push(rel(max_of((1..k).map(|mu| tf.commutator(mu, &fhat).norm())), p.norm()));
            }
            out.push(record_residual(
                format!("boundary.tangential_monogenic{tag}"),
                "Z_μ f̂ = 0, Z_μ T f̂ = 0 for restricted monogenic f",
                max_of(restrict),
                tol.or(1e-10),
            ));
            out.push(record_residual(
                format!("boundary.commutator{tag}"),
                "[Z_μ, T] f̂ = 0 for restricted monogenic f",
                max_of(comm),
                tol.or(1e-10),
            ));

            let mut rng = config_rng(seed, if label == "flat" { 5 } else { 6 }, k, n);
            let zeros = vec![0.0; nv];
            let mut kernel = Vec::new();
            let mut consistency = Vec::new();
            for _ in 0..samples {
                let draw = |rng: &mut _| {
                    SpinorPoly::random(rng, nv, s, Chirality::Plus, PAIR_TERMS, max_degree).substitute_linear(0, &zeros)
                };
                let f = draw(&mut rng);
                let fp = draw(&mut rng);
                let scale = f.norm().max(fp.norm()).max(1.0);
                kernel.push(pi1_kernel_check(&tf, &cx.rep, &f, &fp)? / scale);

                let (f1, f2) = script_d0(&tf, &f)?;
                let fhat: Vec<SpinorPoly> = (0..k).map(|a| calc.nabla(a, &f)).collect();
                let zero = SpinorPoly::zero(nv, s, Chirality::Minus);
                let fhat_p = vec![zero; k];
                let (o1, o2) = pi1(&tf, &cx.rep, &fhat, &fhat_p);
                let d = f1.iter().zip(&o1).chain(f2.iter().zip(&o2)).map(|(a, b)| a.sub(b).norm());
                consistency.push(max_of(d) / f.norm().max(1.0));
            }
            out.push(record_residual(
                format!("boundary.pi1_kernel{tag}"),
                "π₁(𝒟₀(φF) + φ²(…)) = 0 for x₀₁-independent F, F′",
                max_of(kernel),
                tol.or(1e-10),
            ));
            out.push(record_residual(
                format!("boundary.script_d0{tag}"),
                "(Z_μ f̂, −Z_μ T f̂) = π₁(𝒟₀ f̂)",
                max_of(consistency),
                tol.or(1e-10),
            ));
        }
    }
    Ok(out)
}
