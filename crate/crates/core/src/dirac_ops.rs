//! 𝒟₀, 𝒟₁, 𝒟₂′, 𝒟₂″ and the adjoints 𝒟₀*, 𝒟₁* on polynomial fields.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::Rng;
use serde::Serialize;

use crate::calculus::{self, SpinorCalculus};
use crate::clifford::{build_clifford, Chirality, CliffordRep};
use crate::error::{Error, Result};
use crate::linalg::{Lin, C64};
use crate::poly::{Exponent, SpinorPoly};
use crate::weyl::{check_spinor_membership, project_spinor_tensor, Partition};

/// The value bundles 𝒱₀ = S⁺, 𝒱₁ = ℂᵏ⊗S⁻, 𝒱₂ = V₂₁⊗S⁻, 𝒱₃′ = V₂₂⊗S⁺,
/// 𝒱₃″ = V₃₁₁⊗S⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ValueSpace {
    V0,
    V1,
    V2,
    V3p,
    V3pp,
}

impl ValueSpace {
    pub fn tensor_order(self) -> usize {
        match self {
            ValueSpace::V0 => 0,
            ValueSpace::V1 => 1,
            ValueSpace::V2 => 3,
            ValueSpace::V3p => 4,
            ValueSpace::V3pp => 5,
        }
    }

    pub fn chirality(self) -> Chirality {
        match self {
            ValueSpace::V0 | ValueSpace::V3p => Chirality::Plus,
            _ => Chirality::Minus,
        }
    }

    pub fn partition(self) -> Option<Partition> {
        match self {
            ValueSpace::V2 => Some(Partition::P21),
            ValueSpace::V3p => Some(Partition::P22),
            ValueSpace::V3pp => Some(Partition::P311),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ValueSpace::V0 => "V0",
            ValueSpace::V1 => "V1",
            ValueSpace::V2 => "V2",
            ValueSpace::V3p => "V3'",
            ValueSpace::V3pp => "V3''",
        }
    }

    /// Number of tensor components (before the spinor factor).
    pub fn components(self, k: usize) -> usize {
        k.pow(self.tensor_order() as u32)
    }
}

/// A polynomial map ℝ^{kn} → (tensor)⊗S±, coefficients laid out `[tensor][spin]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyField {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub space: ValueSpace,
    pub terms: BTreeMap<Exponent, DVector<C64>>,
}

impl PolyField {
    pub fn zero(k: usize, n: usize, s: usize, space: ValueSpace) -> Self {
        PolyField { k, n, s, space, terms: BTreeMap::new() }
    }

    pub fn width(&self) -> usize {
        self.space.components(self.k) * self.s
    }

    /// Splits into one spinor polynomial per tensor component.
    pub fn components(&self) -> Vec<SpinorPoly> {
        let nv = self.k * self.n;
        let chir = self.space.chirality();
        let mut out: Vec<SpinorPoly> =
            (0..self.space.components(self.k)).map(|_| SpinorPoly::zero(nv, self.s, chir)).collect();
        for (e, v) in &self.terms {
            for (t, comp) in out.iter_mut().enumerate() {
                let part = v.rows(t * self.s, self.s).into_owned();
                comp.add_term(e.clone(), &part);
            }
        }
        out
    }

    pub fn from_components(k: usize, n: usize, s: usize, space: ValueSpace, comps: &[SpinorPoly]) -> Result<Self> {
        if comps.len() != space.components(k) {
            return Err(Error::Dimension(format!(
                "{} expects {} components, got {}",
                space.name(),
                space.components(k),
                comps.len()
            )));
        }
        let mut f = PolyField::zero(k, n, s, space);
        let width = f.width();
        for (t, comp) in comps.iter().enumerate() {
            if comp.chirality != space.chirality() || comp.width != s {
                return Err(Error::SpaceMismatch {
                    expected: format!("{:?} spinors of width {s}", space.chirality()),
                    got: format!("{:?} spinors of width {}", comp.chirality, comp.width),
                });
            }
            for (e, v) in &comp.terms {
                let entry = f.terms.entry(e.clone()).or_insert_with(|| DVector::zeros(width));
                entry.rows_mut(t * s, s).copy_from(v);
            }
        }
        f.terms.retain(|_, v| v.iter().any(|z| z.re != 0.0 || z.im != 0.0));
        Ok(f)
    }

    pub fn from_spinor(k: usize, n: usize, p: &SpinorPoly) -> Result<Self> {
        Self::from_components(k, n, p.width, ValueSpace::V0, std::slice::from_ref(p))
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest membership residual over all coefficient vectors (0 for V₀, V₁).
    pub fn membership_residual(&self) -> f64 {
        let Some(p) = self.space.partition() else { return 0.0 };
        self.terms
            .values()
            .map(|v| check_spinor_membership(p, self.k, self.s, v.as_slice()).expect("layout checked"))
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &PolyField) -> PolyField {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(|| DVector::zeros(v.len()));
            *entry -= v;
        }
        out.terms.retain(|_, v| v.iter().any(|z| z.re != 0.0 || z.im != 0.0));
        out
    }
}

/// Polynomial calculus: ∇_A = Σⱼ γⱼ ∂_{Aj}, Δ_BC = −2 Σⱼ ∂_{Bj}∂_{Cj}.
pub struct PolyCalculus<'a> {
    pub k: usize,
    pub rep: &'a CliffordRep,
}

impl SpinorCalculus for PolyCalculus<'_> {
    type Field = SpinorPoly;

    fn k(&self) -> usize {
        self.k
    }

    fn nabla(&self, a: usize, f: &SpinorPoly) -> SpinorPoly {
        let n = self.rep.n;
        let mut out = SpinorPoly::zero(f.nvars, f.width, f.chirality.flip());
        for (e, v) in &f.terms {
            for j in 0..n {
                let var = a * n + j;
                if e[var] > 0 {
                    let mut d = e.clone();
                    d[var] -= 1;
                    let g = self.rep.gamma(f.chirality, j);
                    out.add_term(d, &(g * v * C64::new(e[var] as f64, 0.0)));
                }
            }
        }
        out
    }

    fn delta(&self, b: usize, c: usize, f: &SpinorPoly) -> SpinorPoly {
        let n = self.rep.n;
        let parts: Vec<SpinorPoly> = (0..n).map(|j| f.derivative(b * n + j).derivative(c * n + j)).collect();
        let terms: Vec<(f64, &SpinorPoly)> = parts.iter().map(|p| (-2.0, p)).collect();
        SpinorPoly::lincomb(&terms)
    }
}

/// The first segment of the complex for fixed (k, n).
#[derive(Clone, Debug)]
pub struct DiracComplex {
    pub k: usize,
    pub n: usize,
    pub rep: CliffordRep,
}

impl DiracComplex {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2 (got {k})")));
        }
        Ok(DiracComplex { k, n, rep: build_clifford(n)? })
    }

    pub fn s(&self) -> usize {
        self.rep.s_dim
    }

    pub fn nvars(&self) -> usize {
        self.k * self.n
    }

    fn calc(&self) -> PolyCalculus<'_> {
        PolyCalculus { k: self.k, rep: &self.rep }
    }

    fn expect(&self, f: &PolyField, space: ValueSpace) -> Result<Vec<SpinorPoly>> {
        if f.space != space || f.k != self.k || f.n != self.n {
            return Err(Error::SpaceMismatch {
                expected: format!("{} over (k={}, n={})", space.name(), self.k, self.n),
                got: format!("{} over (k={}, n={})", f.space.name(), f.k, f.n),
            });
        }
        Ok(f.components())
    }

    fn need_k3(&self) -> Result<()> {
        if self.k < 3 {
            Err(Error::RequiresK3(self.k))
        } else {
            Ok(())
        }
    }

    fn wrap(&self, space: ValueSpace, comps: &[SpinorPoly]) -> Result<PolyField> {
        let f = PolyField::from_components(self.k, self.n, self.s(), space, comps)?;
        debug_assert!(
            f.membership_residual() <= 1e-9 * f.norm().max(1.0),
            "{} output left its value space",
            space.name()
        );
        Ok(f)
    }

    pub fn nabla(&self, a: usize, f: &SpinorPoly) -> Result<SpinorPoly> {
        if a >= self.k {
            return Err(Error::InvalidArgument(format!("variable index {a} out of range for k = {}", self.k)));
        }
        Ok(self.calc().nabla(a, f))
    }

    pub fn d0(&self, f: &PolyField) -> Result<PolyField> {
        let c = self.expect(f, ValueSpace::V0)?;
        self.wrap(ValueSpace::V1, &calculus::d0(&self.calc(), &c[0]))
    }

    pub fn d0_star(&self, g: &PolyField) -> Result<PolyField> {
        let c = self.expect(g, ValueSpace::V1)?;
        self.wrap(ValueSpace::V0, &[calculus::d0_star(&self.calc(), &c)])
    }

    pub fn d1(&self, f: &PolyField) -> Result<PolyField> {
        let c = self.expect(f, ValueSpace::V1)?;
        self.wrap(ValueSpace::V2, &calculus::d1(&self.calc(), &c))
    }

    pub fn d1_projector_form(&self, f: &PolyField) -> Result<PolyField> {
        let c = self.expect(f, ValueSpace::V1)?;
        self.wrap(ValueSpace::V2, &calculus::d1_projector_form(&self.calc(), &c))
    }

    pub fn d1_star(&self, h: &PolyField) -> Result<PolyField> {
        let c = self.expect(h, ValueSpace::V2)?;
        self.wrap(ValueSpace::V1, &calculus::d1_star(&self.calc(), &c))
    }

    pub fn d2p(&self, h: &PolyField) -> Result<PolyField> {
        self.need_k3()?;
        let c = self.expect(h, ValueSpace::V2)?;
        self.wrap(ValueSpace::V3p, &calculus::d2p(&self.calc(), &c))
    }

    pub fn d2p_projector_form(&self, h: &PolyField) -> Result<PolyField> {
        self.need_k3()?;
        let c = self.expect(h, ValueSpace::V2)?;
        self.wrap(ValueSpace::V3p, &calculus::d2p_projector_form(&self.calc(), &c))
    }

    pub fn d2pp(&self, h: &PolyField) -> Result<PolyField> {
        self.need_k3()?;
        let c = self.expect(h, ValueSpace::V2)?;
        self.wrap(ValueSpace::V3pp, &calculus::d2pp(&self.calc(), &c))
    }

    pub fn d2pp_projector_form(&self, h: &PolyField) -> Result<PolyField> {
        self.need_k3()?;
        let c = self.expect(h, ValueSpace::V2)?;
        self.wrap(ValueSpace::V3pp, &calculus::d2pp_projector_form(&self.calc(), &c))
    }

    /// Δf = −Σ_{A,j} ∂²f/∂x_{Aj}² on 𝒱₀.
    pub fn laplacian(&self, f: &PolyField) -> Result<PolyField> {
        let c = self.expect(f, ValueSpace::V0)?;
        let parts: Vec<SpinorPoly> = (0..self.nvars()).map(|v| c[0].derivative(v).derivative(v)).collect();
        let terms: Vec<(f64, &SpinorPoly)> = parts.iter().map(|p| (-1.0, p)).collect();
        self.wrap(ValueSpace::V0, &[SpinorPoly::lincomb(&terms)])
    }

    /// Δ_BC applied to a spinor polynomial.
    pub fn delta(&self, b: usize, c: usize, f: &SpinorPoly) -> SpinorPoly {
        self.calc().delta(b, c, f)
    }

    /// Random field with `nterms` monomials of degree ≤ `max_degree`; tensor
    /// coefficients are projected into the module for V₂ and V₃ spaces.
    pub fn random_field<R: Rng>(&self, rng: &mut R, space: ValueSpace, nterms: usize, max_degree: usize) -> PolyField {
        let s = self.s();
        let width = space.components(self.k) * s;
        let raw = SpinorPoly::random(rng, self.nvars(), width, space.chirality(), nterms, max_degree);
        let mut f = PolyField::zero(self.k, self.n, s, space);
        for (e, v) in raw.terms {
            let v = match space.partition() {
                Some(p) => DVector::from_vec(project_spinor_tensor(p, self.k, s, v.as_slice())),
                None => v,
            };
            f.terms.insert(e, v);
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_field_has_zero_derivatives() {
        let cx = DiracComplex::new(2, 2).unwrap();
        let f = PolyField::from_spinor(
            2,
            2,
            &SpinorPoly::constant(4, DVector::from_element(1, C64::new(1.0, 0.0)), Chirality::Plus),
        )
        .unwrap();
        assert!(cx.d0(&f).unwrap().terms.is_empty());
    }

    #[test]
    fn nabla_of_linear_monomial_is_gamma() {
        let cx = DiracComplex::new(2, 3).unwrap();
        let s = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)]);
        let f = SpinorPoly::monomial(vec![0, 0, 0, 1, 0, 0], s.clone(), Chirality::Plus);
        let g = cx.nabla(1, &f).unwrap();
        let want = &cx.rep.gamma_plus[0] * &s;
        assert_eq!(g.terms.len(), 1);
        assert!((&g.terms[&vec![0; 6]] - want).norm() < 1e-15);
        assert!(cx.nabla(2, &f).is_err());
    }

    #[test]
    fn d2_requires_k3() {
        let cx = DiracComplex::new(2, 2).unwrap();
        let h = PolyField::zero(2, 2, 1, ValueSpace::V2);
        assert!(matches!(cx.d2p(&h), Err(Error::RequiresK3(2))));
        assert!(matches!(cx.d2pp(&h), Err(Error::RequiresK3(2))));
    }

    #[test]
    fn wrong_space_rejected() {
        let cx = DiracComplex::new(3, 2).unwrap();
        let h = PolyField::zero(3, 2, 1, ValueSpace::V2);
        assert!(cx.d0(&h).is_err());
        assert!(cx.d1(&h).is_err());
    }

    #[test]
    fn complex_property_small() {
        let cx = DiracComplex::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = cx.random_field(&mut rng, ValueSpace::V0, 6, 4);
        let r = cx.d1(&cx.d0(&f).unwrap()).unwrap();
        assert!(r.norm() <= 1e-9 * f.norm(), "{}", r.norm());
        let g = cx.random_field(&mut rng, ValueSpace::V1, 6, 4);
        let h = cx.d1(&g).unwrap();
        assert!(cx.d2p(&h).unwrap().norm() <= 1e-9 * g.norm());
        assert!(cx.d2pp(&h).unwrap().norm() <= 1e-9 * g.norm());
    }

    #[test]
    fn projector_forms_agree() {
        let cx = DiracComplex::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = cx.random_field(&mut rng, ValueSpace::V1, 5, 3);
        let a = cx.d1(&g).unwrap();
        let b = cx.d1_projector_form(&g).unwrap();
        assert!(a.sub(&b).norm() <= 1e-10 * a.norm().max(1.0), "d1 {}", a.sub(&b).norm());
        let h = cx.random_field(&mut rng, ValueSpace::V2, 5, 3);
        let a = cx.d2p(&h).unwrap();
        let b = cx.d2p_projector_form(&h).unwrap();
        assert!(a.sub(&b).norm() <= 1e-10 * a.norm().max(1.0), "d2p {} {}", a.sub(&b).norm(), a.norm());
        let a = cx.d2pp(&h).unwrap();
        let b = cx.d2pp_projector_form(&h).unwrap();
        assert!(a.sub(&b).norm() <= 1e-10 * a.norm().max(1.0), "d2pp {} {}", a.sub(&b).norm(), a.norm());
    }
}
