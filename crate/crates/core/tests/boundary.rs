use dirac_complex::boundary::{
    monogenic_basis, pi1, pi1_kernel_check, restrict_and_test, script_d0, tangential_fields, unit_spinor,
    HypersurfaceChart,
};
use dirac_complex::linalg::{frob, C64};
use dirac_complex::suites::tilted_chart;
use dirac_complex::{build_clifford, Chirality, DiracComplex, Error, SpinorPoly};
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chart(k: usize, n: usize, var: usize) -> HypersurfaceChart {
    let mut rho = vec![0.0; k * n];
    rho[var] = 1.0;
    HypersurfaceChart { k, n, rho }
}

#[test]
fn z1_on_rho_x02_is_nabla1() {
    let rep = build_clifford(2).unwrap();
    let tf = tangential_fields(&chart(2, 2, 1), &rep).unwrap();
    let z = &tf.z[0];
    for j in 0..2 {
        assert!(frob(&z.coeffs[j]) < 1e-15);
        assert!(frob(&(&z.coeffs[2 + j] - &rep.gamma_plus[j])) < 1e-15);
    }
}

#[test]
fn z1_on_rho_x11_is_nabla1_plus_nabla0() {
    let rep = build_clifford(2).unwrap();
    let tf = tangential_fields(&chart(2, 2, 2), &rep).unwrap();
    let z = &tf.z[0];
    for j in 0..2 {
        assert!(frob(&(&z.coeffs[j] - &rep.gamma_plus[j])) < 1e-15);
        assert!(frob(&(&z.coeffs[2 + j] - &rep.gamma_plus[j])) < 1e-15);
    }
}

#[test]
fn t_coefficient_on_rho_x02() {
    // coefficient of ∂₀₁ in T: −½ I + ½ γ₂⁻γ₁⁺
    let rep = build_clifford(2).unwrap();
    let tf = tangential_fields(&chart(2, 2, 1), &rep).unwrap();
    let s = rep.s_dim;
    let want = DMatrix::<C64>::identity(s, s) * C64::new(-0.5, 0.0)
        + &rep.gamma_minus[1] * &rep.gamma_plus[0] * C64::new(0.5, 0.0);
    assert!(frob(&(&tf.t_plus.coeffs[0] - want)) < 1e-15);
}

#[test]
fn restricted_monogenics_are_tangentially_monogenic() {
    for (k, n) in [(2, 2), (3, 2)] {
        let cx = DiracComplex::new(k, n).unwrap();
        let tf = tangential_fields(&tilted_chart(k, n), &cx.rep).unwrap();
        for d in 0..=3 {
            for p in monogenic_basis(&cx, d) {
                assert_eq!(p.degree(), Some(d));
                let r = restrict_and_test(&cx, &p, &tf, 1e-10).unwrap();
                assert!(r.pass, "{r:?}");
                assert!(tf.chart.restrict(&p).is_independent_of(0));
            }
        }
    }
}

#[test]
fn generic_surface_data_is_not_tangentially_monogenic() {
    let cx = DiracComplex::new(2, 2).unwrap();
    let tf = tangential_fields(&tilted_chart(2, 2), &cx.rep).unwrap();
    let mut f = SpinorPoly::zero(4, 1, Chirality::Plus);
    f.add_term(vec![0, 1, 1, 0], &DVector::from_element(1, C64::new(1.0, 0.0)));
    let (f1, _) = script_d0(&tf, &f).unwrap();
    assert!(f1[0].norm() > 0.1);
}

#[test]
fn non_monogenic_input_is_rejected() {
    let cx = DiracComplex::new(2, 2).unwrap();
    let tf = tangential_fields(&HypersurfaceChart::flat(2, 2), &cx.rep).unwrap();
    let mut f = SpinorPoly::zero(4, 1, Chirality::Plus);
    f.add_term(vec![1, 0, 0, 0], &DVector::from_element(1, C64::new(1.0, 0.0)));
    assert!(matches!(restrict_and_test(&cx, &f, &tf, 1e-10), Err(Error::Precondition(_))));
}

#[test]
fn pi1_kernel_and_a_non_kernel_input() {
    let cx = DiracComplex::new(3, 2).unwrap();
    let tf = tangential_fields(&tilted_chart(3, 2), &cx.rep).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let zeros = vec![0.0; 6];
    let f = SpinorPoly::random(&mut rng, 6, 1, Chirality::Plus, 5, 3).substitute_linear(0, &zeros);
    let fp = SpinorPoly::random(&mut rng, 6, 1, Chirality::Plus, 5, 3).substitute_linear(0, &zeros);
    assert!(pi1_kernel_check(&tf, &cx.rep, &f, &fp).unwrap() <= 1e-10 * f.norm().max(fp.norm()));

    // F̂_A = ∇_A F alone is generally not of the form 𝒟₀(φF)
    let fhat: Vec<SpinorPoly> = (0..3).map(|a| cx.nabla(a, &f).unwrap()).collect();
    let fhat_p: Vec<SpinorPoly> = (0..3).map(|_| SpinorPoly::zero(6, 1, Chirality::Minus)).collect();
    let (o1, _) = pi1(&tf, &cx.rep, &fhat, &fhat_p);
    assert!(o1.iter().map(SpinorPoly::norm).fold(0.0, f64::max) > 1e-3);
}

#[test]
fn constant_spinors_are_monogenic() {
    let cx = DiracComplex::new(2, 3).unwrap();
    let basis = monogenic_basis(&cx, 0);
    assert_eq!(basis.len(), cx.s());
    let e = unit_spinor(6, cx.s(), 0);
    let tf = tangential_fields(&tilted_chart(2, 3), &cx.rep).unwrap();
    assert!(restrict_and_test(&cx, &e, &tf, 1e-12).unwrap().pass);
}

#[test]
fn fields_annihilate_phi_on_random_charts() {
    let rep = build_clifford(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    use rand::Rng;
    for _ in 0..10 {
        let coeffs: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = HypersurfaceChart::new(3, 3, &coeffs).unwrap();
        let tf = tangential_fields(&c, &rep).unwrap();
        let g = c.grad_phi();
        assert!(tf.t_plus.on_phi(&g) < 1e-12);
        assert!(tf.z.iter().all(|z| z.on_phi(&g) < 1e-12));
    }
}
