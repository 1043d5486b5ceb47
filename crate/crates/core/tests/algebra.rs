use dirac_complex::linalg::{frob, svd, C64};
use dirac_complex::symbols::{kernel_identity_check, BundleMode, SymbolBundle, SymbolContext};
use dirac_complex::weyl::{
    measured_n_lambda, projector_matrix, weyl_dimension, young_symmetrizer, Partition, WeylSpace,
};
use dirac_complex::{build_clifford, Chirality, DiracComplex, ValueSpace};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// dim of the GL(k) module for a partition via the hook-content formula.
fn hook_content(shape: &[usize], k: usize) -> usize {
    let mut num = 1i64;
    let mut den = 1i64;
    for (i, &len) in shape.iter().enumerate() {
        for j in 0..len {
            let arm = len - j - 1;
            let leg = shape[i + 1..].iter().filter(|&&l| l > j).count();
            num *= k as i64 + j as i64 - i as i64;
            den *= (arm + leg + 1) as i64;
        }
    }
    (num / den).max(0) as usize
}

#[test]
fn weyl_dims_match_hook_content() {
    for k in 2..=5 {
        for p in Partition::ALL {
            let want = hook_content(p.shape(), k);
            assert_eq!(weyl_dimension(p.shape(), k), want, "k={k} {p:?}");
            assert_eq!(WeylSpace::new(p, k).unwrap().d, want, "k={k} {p:?}");
        }
    }
    // degenerate k = 2 values
    assert_eq!(hook_content(&[2, 2], 2), 1);
    assert_eq!(hook_content(&[3, 1, 1], 2), 0);
}

#[test]
fn young_images_match_projectors() {
    for k in 2..=5 {
        for p in Partition::ALL {
            let c = projector_matrix(p, k);
            let y = young_symmetrizer(k, p).unwrap();
            assert!(c.image_distance(&y, 1e-9) <= 1e-8, "k={k} {p:?}");
        }
    }
}

#[test]
fn n_lambda_normalizations() {
    assert_eq!(measured_n_lambda(3, Partition::P21), Some(3.0));
    assert_eq!(measured_n_lambda(3, Partition::P22), Some(12.0));
    assert_eq!(measured_n_lambda(3, Partition::P311), Some(20.0));
    assert_eq!(measured_n_lambda(2, Partition::P311), None);
}

#[test]
fn svd_is_accurate_on_degenerate_blocks() {
    let p = projector_matrix(Partition::P311, 4);
    for b in &p.blocks {
        let d = svd(&b.mat);
        let n = b.mat.nrows();
        let rec = &d.u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.s.clone())) * d.v.transpose();
        assert!((rec - &b.mat).norm() < 1e-12);
        let gram = d.u.transpose() * &d.u;
        let keep = d.s.iter().filter(|&&x| x > 1e-9).count();
        let g = gram.view((0, 0), (keep, keep)).into_owned();
        assert!((g - DMatrix::<f64>::identity(keep, keep)).norm() < 1e-12, "block of size {n}");
    }
}

#[test]
fn symbol_dims_and_ranks_k3_n2() {
    let ctx = SymbolContext::new(3, 2).unwrap();
    assert_eq!(ctx.dims(), [1, 3, 8, 6, 6]);
}

#[test]
fn kernel_identity_at_axis_frequency() {
    let ctx = SymbolContext::new(3, 3).unwrap();
    let mut xi = vec![0.0; 9];
    xi[0] = 1.0;
    xi[4] = -0.5;
    let b = SymbolBundle::build(&ctx, &xi).unwrap();
    assert!(kernel_identity_check(&ctx, &b).unwrap() < 1e-12);
}

#[test]
fn low_order_bundle_l2_is_singular() {
    let ctx = SymbolContext::new(2, 2).unwrap();
    let b = SymbolBundle::build_with(&ctx, &[0.4, 0.1, -0.3, 0.8], BundleMode::LowOrder).unwrap();
    let l2 = b.l2.unwrap();
    let e = dirac_complex::linalg::hermitian_eigenvalues(&l2);
    assert!(e[0].abs() < 1e-12, "σ₁σ₁* has a kernel when dim V₂ > rank σ₁");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_relations(n in 1usize..=10, j in 0usize..10, k in 0usize..10) {
        let rep = build_clifford(n).unwrap();
        let (j, k) = (j % n, k % n);
        for chir in [Chirality::Plus, Chirality::Minus] {
            let a = rep.gamma(chir.flip(), j) * rep.gamma(chir, k) + rep.gamma(chir.flip(), k) * rep.gamma(chir, j);
            let want = if j == k { -2.0 } else { 0.0 };
            let id = DMatrix::<C64>::identity(rep.s_dim, rep.s_dim) * C64::new(want, 0.0);
            prop_assert!(frob(&(a - id)) < 1e-12);
        }
    }

    #[test]
    fn dirac_symbol_squares_to_norm(xi in prop::collection::vec(-2.0f64..2.0, 6)) {
        let rep = build_clifford(6).unwrap();
        let (p, m) = rep.dirac_symbol(&xi);
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let id = DMatrix::<C64>::identity(rep.s_dim, rep.s_dim) * C64::new(r2, 0.0);
        prop_assert!(frob(&(&m * &p - &id)) < 1e-12 * (1.0 + r2));
        prop_assert!(frob(&(&p * &m - &id)) < 1e-12 * (1.0 + r2));
    }

    #[test]
    fn operators_are_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let cx = DiracComplex::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = cx.random_field(&mut rng, ValueSpace::V1, 4, 3);
        let g = cx.random_field(&mut rng, ValueSpace::V1, 4, 3);
        let mut combo = f.clone();
        for (e, v) in &g.terms {
            let entry = combo.terms.entry(e.clone()).or_insert_with(|| v * C64::new(0.0, 0.0));
            *entry = &*entry * C64::new(a, 0.0) + v * C64::new(b, 0.0);
        }
        for (e, v) in combo.terms.iter_mut() {
            if !g.terms.contains_key(e) {
                *v *= C64::new(a, 0.0);
            }
        }
        let lhs = cx.d1(&combo).unwrap();
        let mut rhs = cx.d1(&f).unwrap();
        let dg = cx.d1(&g).unwrap();
        for v in rhs.terms.values_mut() {
            *v *= C64::new(a, 0.0);
        }
        for (e, v) in &dg.terms {
            let entry = rhs.terms.entry(e.clone()).or_insert_with(|| v * C64::new(0.0, 0.0));
            *entry += v * C64::new(b, 0.0);
        }
        prop_assert!(lhs.sub(&rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn symbols_are_homogeneous(xi in prop::collection::vec(-1.0f64..1.0, 6), t in 0.1f64..3.0) {
        prop_assume!(xi.iter().any(|x| x.abs() > 1e-3));
        let ctx = SymbolContext::new(3, 2).unwrap();
        let b = SymbolBundle::build(&ctx, &xi).unwrap();
        let xt: Vec<f64> = xi.iter().map(|x| t * x).collect();
        let bt = SymbolBundle::build(&ctx, &xt).unwrap();
        let tc = C64::new(t, 0.0);
        prop_assert!(frob(&(&bt.sigma0 - &b.sigma0 * tc)) <= 1e-12 * t * (1.0 + frob(&b.sigma0)));
        // 𝒟₁ is second order
        let t2 = C64::new(t * t, 0.0);
        prop_assert!(frob(&(&bt.sigma1 - &b.sigma1 * t2)) <= 1e-12 * t * t * (1.0 + frob(&b.sigma1)));
        let t4 = C64::new(t.powi(4), 0.0);
        for ((_, l), (_, lt)) in b.hodge().into_iter().zip(bt.hodge()) {
            prop_assert!(frob(&(lt - l * t4)) <= 1e-11 * t.powi(4) * (1.0 + frob(l)));
        }
    }

    #[test]
    fn laplacian_factorizes(seed in any::<u64>()) {
        let cx = DiracComplex::new(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = cx.random_field(&mut rng, ValueSpace::V0, 5, 4);
        let lhs = cx.d0_star(&cx.d0(&f).unwrap()).unwrap();
        let rhs = cx.laplacian(&f).unwrap();
        prop_assert!(lhs.sub(&rhs).norm() <= 1e-12 * (1.0 + f.norm()));
    }
}
