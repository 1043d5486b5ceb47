//! Tangential several Dirac operators on affine hypersurfaces
//! φ(x) = x₀₁ − ρ(x₀₂, …), ρ linear.
//!
//! With gradient c = ∇φ and g_A = Σⱼ γⱼ c_{Aj} (= ∇_Aφ as a multiplier), one
//! has g₀⁻g₀⁺ = −|c₀|², so (∇₀φ)⁻¹ = −g₀∓/|c₀|². On S⁺-valued functions
//!
//! ```text
//! Z_A = ∇_A − g_A (g₀)⁻¹ ∇₀        T = (g₀)⁻¹ ∇₀ − ∂₀₁
//! ```

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::calculus::SpinorCalculus;
use crate::clifford::{Chirality, CliffordRep};
use crate::dirac_ops::{DiracComplex, PolyCalculus, PolyField};
use crate::error::{Error, Result};
use crate::linalg::{czero, frob, nullspace, Lin, C64, RANK_TOL};
use crate::poly::{Exponent, SpinorPoly};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypersurfaceChart {
    pub k: usize,
    pub n: usize,
    /// Coefficient of each variable in ρ; entry 0 (x₀₁) is always 0.
    pub rho: Vec<f64>,
}

impl HypersurfaceChart {
    pub fn flat(k: usize, n: usize) -> Self {
        HypersurfaceChart { k, n, rho: vec![0.0; k * n] }
    }

    /// ρ = Σ coeffs[i]·x_{i+1}, over the kn − 1 variables other than x₀₁.
    pub fn new(k: usize, n: usize, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() + 1 != k * n {
            return Err(Error::Dimension(format!("rho needs {} coefficients, got {}", k * n - 1, coeffs.len())));
        }
        let mut rho = vec![0.0];
        rho.extend_from_slice(coeffs);
        Ok(HypersurfaceChart { k, n, rho })
    }

    /// Builds a chart from ρ given as (exponent, coefficient) terms. Rejects
    /// anything that is not linear in the variables other than x₀₁.
    pub fn from_terms(k: usize, n: usize, terms: &[(Exponent, f64)]) -> Result<Self> {
        let mut rho = vec![0.0; k * n];
        for (e, c) in terms {
            if *c == 0.0 {
                continue;
            }
            let deg: usize = e.iter().map(|&x| x as usize).sum();
            if e.len() != k * n || deg != 1 || e[0] != 0 {
                return Err(Error::InvalidArgument("rho must be linear in the surface variables".into()));
            }
            let v = e.iter().position(|&x| x == 1).expect("degree one");
            rho[v] += c;
        }
        Ok(HypersurfaceChart { k, n, rho })
    }

    /// ∇φ: 1 at x₀₁ and −ρ elsewhere.
    pub fn grad_phi(&self) -> Vec<f64> {
        let mut c: Vec<f64> = self.rho.iter().map(|r| -r).collect();
        c[0] = 1.0;
        c
    }

    /// φ times a constant spinor, as a polynomial.
    pub fn phi_times(&self, s: &DVector<C64>, chir: Chirality) -> SpinorPoly {
        let nv = self.k * self.n;
        let mut p = SpinorPoly::zero(nv, s.len(), chir);
        for (v, c) in self.grad_phi().into_iter().enumerate() {
            if c != 0.0 {
                let mut e = vec![0u8; nv];
                e[v] = 1;
                p.add_term(e, &(s * C64::new(c, 0.0)));
            }
        }
        p
    }

    /// Restriction to the hypersurface: substitutes x₀₁ = ρ.
    pub fn restrict(&self, f: &SpinorPoly) -> SpinorPoly {
        f.substitute_linear(0, &self.rho)
    }
}

/// Σ_v M_v ∂_v with constant matrix coefficients.
#[derive(Clone, Debug)]
pub struct FirstOrderOp {
    pub from: Chirality,
    pub to: Chirality,
    pub coeffs: Vec<DMatrix<C64>>,
}

impl FirstOrderOp {
    pub fn apply(&self, f: &SpinorPoly) -> SpinorPoly {
        assert_eq!(f.chirality, self.from, "operator applied to the wrong half-spin module");
        let rows = self.coeffs[0].nrows();
        let mut out = SpinorPoly::zero(f.nvars, rows, self.to);
        for (e, v) in &f.terms {
            for (var, m) in self.coeffs.iter().enumerate() {
                if e[var] > 0 {
                    let mut d = e.clone();
                    d[var] -= 1;
                    out.add_term(d, &(m * v * C64::new(e[var] as f64, 0.0)));
                }
            }
        }
        out
    }

    /// ‖Σ_v M_v c_v‖_F, zero iff the operator annihilates φ.
    pub fn on_phi(&self, grad: &[f64]) -> f64 {
        let m = self
            .coeffs
            .iter()
            .zip(grad)
            .fold(DMatrix::<C64>::zeros(self.coeffs[0].nrows(), self.coeffs[0].ncols()), |acc, (m, c)| {
                acc + m * C64::new(*c, 0.0)
            });
        frob(&m)
    }
}

#[derive(Clone, Debug)]
pub struct TangentialFields {
    pub chart: HypersurfaceChart,
    /// g_A on S⁺ for A = 0..k.
    pub g_plus: Vec<DMatrix<C64>>,
    /// (∇₀φ)⁻¹ from S⁻ to S⁺.
    pub g0_inv: DMatrix<C64>,
    /// Z_μ for μ = 1..k−1 (index μ−1), S⁺ → S⁻.
    pub z: Vec<FirstOrderOp>,
    /// T on S⁺.
    pub t_plus: FirstOrderOp,
    /// T on S⁻.
    pub t_minus: FirstOrderOp,
}

fn g_matrix(rep: &CliffordRep, chir: Chirality, c: &[f64]) -> DMatrix<C64> {
    let s = rep.s_dim;
    (0..rep.n).fold(DMatrix::zeros(s, s), |acc, j| acc + rep.gamma(chir, j) * C64::new(c[j], 0.0))
}

/// Coefficient forms of Z_μ and T for an affine chart.
pub fn tangential_fields(chart: &HypersurfaceChart, rep: &CliffordRep) -> Result<TangentialFields> {
    let (k, n) = (chart.k, chart.n);
    if rep.n != n || chart.rho.len() != k * n {
        return Err(Error::Dimension("chart and representation disagree on n".into()));
    }
    let s = rep.s_dim;
    let c = chart.grad_phi();
    let c0sq: f64 = c[..n].iter().map(|x| x * x).sum();
    let g_plus: Vec<DMatrix<C64>> = (0..k).map(|a| g_matrix(rep, Chirality::Plus, &c[a * n..(a + 1) * n])).collect();
    let g0_minus = g_matrix(rep, Chirality::Minus, &c[..n]);
    let g0_inv = &g0_minus * C64::new(-1.0 / c0sq, 0.0);
    let g0_inv_minus = &g_plus[0] * C64::new(-1.0 / c0sq, 0.0);
    let zero = DMatrix::<C64>::zeros(s, s);
    let z = (1..k)
        .map(|mu| {
            let mut coeffs = vec![zero.clone(); k * n];
            let lead = &g_plus[mu] * &g0_inv;
            for j in 0..n {
                coeffs[mu * n + j] = rep.gamma_plus[j].clone();
                coeffs[j] = -(&lead * &rep.gamma_plus[j]);
            }
            FirstOrderOp { from: Chirality::Plus, to: Chirality::Minus, coeffs }
        })
        .collect();
    let t_op = |inv: &DMatrix<C64>, gam: &[DMatrix<C64>], chir: Chirality| {
        let mut coeffs = vec![zero.clone(); k * n];
        for j in 0..n {
            coeffs[j] = inv * &gam[j];
        }
        coeffs[0] -= DMatrix::<C64>::identity(s, s);
        FirstOrderOp { from: chir, to: chir, coeffs }
    };
    let t_plus = t_op(&g0_inv, &rep.gamma_plus, Chirality::Plus);
    let t_minus = t_op(&g0_inv_minus, &rep.gamma_minus, Chirality::Minus);
    Ok(TangentialFields { chart: chart.clone(), g_plus, g0_inv, z, t_plus, t_minus })
}

impl TangentialFields {
    /// [Z_μ, T] f = Z_μ T f − T Z_μ f.
    pub fn commutator(&self, mu: usize, f: &SpinorPoly) -> SpinorPoly {
        let z = &self.z[mu - 1];
        z.apply(&self.t_plus.apply(f)).sub(&self.t_minus.apply(&z.apply(f)))
    }
}

/// (F₁, F₂) with (F₁)_μ = Z_μ f̂ and (F₂)_μ = −Z_μ T f̂ for μ = 1..k−1.
pub fn script_d0(tf: &TangentialFields, fhat: &SpinorPoly) -> Result<(Vec<SpinorPoly>, Vec<SpinorPoly>)> {
    if !fhat.is_independent_of(0) {
        return Err(Error::Precondition("surface data must not depend on x01".into()));
    }
    let tf_hat = tf.t_plus.apply(fhat);
    let f1 = tf.z.iter().map(|z| z.apply(fhat)).collect();
    let f2 = tf.z.iter().map(|z| z.apply(&tf_hat).scale(C64::new(-1.0, 0.0))).collect();
    Ok((f1, f2))
}

/// π₁ of F̂ + φF̂′ + O(φ²), for S⁻-valued F̂, F̂′ independent of x₀₁:
///
/// ```text
/// (F₁)_μ = F̂_μ − g_μ g₀⁻¹ F̂₀
/// (F₂)_μ = F̂′_μ − ∇_μ(g₀⁻¹F̂₀) − g_μ g₀⁻¹ (F̂′₀ − ∇₀(g₀⁻¹F̂₀))
/// ```
pub fn pi1(
    tf: &TangentialFields,
    rep: &CliffordRep,
    fhat: &[SpinorPoly],
    fhat_p: &[SpinorPoly],
) -> (Vec<SpinorPoly>, Vec<SpinorPoly>) {
    let k = tf.chart.k;
    let calc = PolyCalculus { k, rep };
    let inv0 = fhat[0].apply_matrix(&tf.g0_inv, Chirality::Plus);
    let inner = fhat_p[0].sub(&calc.nabla(0, &inv0)).apply_matrix(&tf.g0_inv, Chirality::Plus);
    let mut f1 = Vec::with_capacity(k - 1);
    let mut f2 = Vec::with_capacity(k - 1);
    for mu in 1..k {
        let g = &tf.g_plus[mu];
        f1.push(fhat[mu].sub(&inv0.apply_matrix(g, Chirality::Minus)));
        let a = calc.nabla(mu, &inv0);
        let b = inner.apply_matrix(g, Chirality::Minus);
        f2.push(SpinorPoly::lincomb(&[(1.0, &fhat_p[mu]), (-1.0, &a), (-1.0, &b)]));
    }
    (f1, f2)
}

/// Builds F̂_A = ∇_Aφ·F and F̂′_A = ∇_AF + ∇_Aφ·F′ and returns the largest
/// coefficient norm of π₁ of the result, which must vanish.
pub fn pi1_kernel_check(tf: &TangentialFields, rep: &CliffordRep, f: &SpinorPoly, fp: &SpinorPoly) -> Result<f64> {
    if !f.is_independent_of(0) || !fp.is_independent_of(0) {
        return Err(Error::Precondition("F and F' must not depend on x01".into()));
    }
    let k = tf.chart.k;
    let calc = PolyCalculus { k, rep };
    let fhat: Vec<SpinorPoly> = (0..k).map(|a| f.apply_matrix(&tf.g_plus[a], Chirality::Minus)).collect();
    let fhat_p: Vec<SpinorPoly> = (0..k)
        .map(|a| {
            SpinorPoly::lincomb(&[(1.0, &calc.nabla(a, f)), (1.0, &fp.apply_matrix(&tf.g_plus[a], Chirality::Minus))])
        })
        .collect();
    let (f1, f2) = pi1(tf, rep, &fhat, &fhat_p);
    Ok(f1.iter().chain(&f2).map(SpinorPoly::norm).fold(0.0, f64::max))
}

/// Homogeneous exponents of total degree `d` in `nvars` variables, in
/// lexicographic order.
pub fn homogeneous_exponents(nvars: usize, d: usize) -> Vec<Exponent> {
    fn rec(pos: usize, left: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u8;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[pos] = v as u8;
            rec(pos + 1, left - v, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        return out;
    }
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// Orthonormal (in coefficient space) basis of homogeneous degree-d monogenic
/// S⁺-valued polynomials: the null space of 𝒟₀ on that graded piece.
pub fn monogenic_basis(cx: &DiracComplex, d: usize) -> Vec<SpinorPoly> {
    let (nv, s) = (cx.nvars(), cx.s());
    let monos = homogeneous_exponents(nv, d);
    let cols = monos.len() * s;
    let calc = PolyCalculus { k: cx.k, rep: &cx.rep };
    let mut rows: BTreeMap<(usize, Exponent), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, C64)> = Vec::new();
    for (mi, e) in monos.iter().enumerate() {
        for sp in 0..s {
            let mut v = DVector::zeros(s);
            v[sp] = C64::new(1.0, 0.0);
            let p = SpinorPoly::monomial(e.clone(), v, Chirality::Plus);
            for a in 0..cx.k {
                for (de, dv) in &calc.nabla(a, &p).terms {
                    let next = rows.len();
                    let base = *rows.entry((a, de.clone())).or_insert(next);
                    for (r, z) in dv.iter().enumerate() {
                        entries.push((base * s + r, mi * s + sp, *z));
                    }
                }
            }
        }
    }
    let mut m = DMatrix::<C64>::zeros(rows.len() * s, cols);
    for (r, c, z) in entries {
        m[(r, c)] += z;
    }
    let ns = nullspace(&m, RANK_TOL);
    (0..ns.ncols())
        .map(|j| {
            let mut p = SpinorPoly::zero(nv, s, Chirality::Plus);
            for (mi, e) in monos.iter().enumerate() {
                let v = DVector::from_fn(s, |sp, _| ns[(mi * s + sp, j)]);
                if v.iter().any(|z| z.norm() > 1e-14) {
                    p.add_term(e.clone(), &v);
                }
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub norm: f64,
    pub monogenic_residual: f64,
    /// max_μ ‖(F₁)_μ‖ / ‖f‖.
    pub f1_residual: f64,
    /// max_μ ‖(F₂)_μ‖ / ‖f‖.
    pub f2_residual: f64,
    pub pass: bool,
}

/// Restricts a monogenic polynomial to the chart and applies the tangential
/// operators; both outputs must vanish.
pub fn restrict_and_test(
    cx: &DiracComplex,
    f: &SpinorPoly,
    tf: &TangentialFields,
    tol: f64,
) -> Result<RestrictionReport> {
    let field = PolyField::from_spinor(cx.k, cx.n, f)?;
    let norm = f.norm();
    let mono = cx.d0(&field)?.norm();
    if mono > tol * norm.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition(format!("f is not monogenic (residual {mono:.3e})")));
    }
    let fhat = tf.chart.restrict(f);
    let (f1, f2) = script_d0(tf, &fhat)?;
    let scale = if norm == 0.0 { 1.0 } else { norm };
    let f1_residual = f1.iter().map(SpinorPoly::norm).fold(0.0, f64::max) / scale;
    let f2_residual = f2.iter().map(SpinorPoly::norm).fold(0.0, f64::max) / scale;
    let pass = f1_residual <= tol && f2_residual <= tol;
    Ok(RestrictionReport { norm, monogenic_residual: mono / scale, f1_residual, f2_residual, pass })
}

/// The constant spinor `e_i` in S⁺ as a polynomial.
pub fn unit_spinor(nvars: usize, s: usize, i: usize) -> SpinorPoly {
    let mut v = DVector::from_element(s, czero());
    v[i] = C64::new(1.0, 0.0);
    SpinorPoly::constant(nvars, v, Chirality::Plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_clifford;

    #[test]
    fn flat_chart_z_is_nabla() {
        let rep = build_clifford(2).unwrap();
        let tf = tangential_fields(&HypersurfaceChart::flat(2, 2), &rep).unwrap();
        for j in 0..2 {
            assert!(frob(&tf.z[0].coeffs[j]) < 1e-15);
            assert!(frob(&(&tf.z[0].coeffs[2 + j] - &rep.gamma_plus[j])) < 1e-15);
        }
    }

    #[test]
    fn nonlinear_rho_rejected() {
        assert!(HypersurfaceChart::from_terms(2, 2, &[(vec![0, 2, 0, 0], 1.0)]).is_err());
        assert!(HypersurfaceChart::from_terms(2, 2, &[(vec![0, 0, 0, 0], 1.0)]).is_err());
        assert!(HypersurfaceChart::from_terms(2, 2, &[(vec![1, 0, 0, 0], 1.0)]).is_err());
        let c = HypersurfaceChart::from_terms(2, 2, &[(vec![0, 1, 0, 0], 1.0)]).unwrap();
        assert_eq!(c.rho, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn x01_dependence_rejected() {
        let rep = build_clifford(2).unwrap();
        let tf = tangential_fields(&HypersurfaceChart::flat(2, 2), &rep).unwrap();
        let f = SpinorPoly::monomial(vec![1, 0, 0, 0], DVector::from_element(1, C64::new(1.0, 0.0)), Chirality::Plus);
        assert!(script_d0(&tf, &f).is_err());
    }

    #[test]
    fn homogeneous_exponent_count() {
        assert_eq!(homogeneous_exponents(4, 3).len(), 20);
        assert_eq!(homogeneous_exponents(9, 0).len(), 1);
    }
}
