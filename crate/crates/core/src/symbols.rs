//! Principal symbols σ₀, σ₁, σ₂′, σ₂″ and the Hodge symbols Lⱼ at a frequency ξ.
//!
//! Convention: σ(∂_{Aj}) = −iξ_{Aj}, so σ(∇_A) = ξ_A := −iΣⱼγⱼξ_{Aj} and
//! σ(Δ_BC) = 2⟨ξ_B, ξ_C⟩. V₂ and V₃ coordinates are compressed with the
//! orthonormal Weyl bases tensored with the identity on spinors.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::calculus::{self, SpinorCalculus};
use crate::clifford::{build_clifford, Chirality, CliffordRep};
use crate::error::{Error, Result};
use crate::linalg::{frob, hermitian_eigenvalues, kron_identity, nullspace, rank, Lin, C64, RANK_TOL};
use crate::weyl::{flatten, Partition, WeylSpace};

/// A matrix of spinors: `mat` is s × (number of input coordinates).
#[derive(Clone, Debug)]
pub struct SymSpinor {
    pub chirality: Chirality,
    pub mat: DMatrix<C64>,
}

impl Lin for SymSpinor {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let chirality = terms[0].1.chirality;
        let mats: Vec<(f64, &DMatrix<C64>)> = terms.iter().map(|(c, f)| (*c, &f.mat)).collect();
        SymSpinor { chirality, mat: DMatrix::lincomb(&mats) }
    }
}

/// Symbol calculus at a fixed ξ.
pub struct SymbolCalculus {
    pub k: usize,
    /// ξ_A on S⁺ (into S⁻) and on S⁻ (into S⁺).
    pub xi_plus: Vec<DMatrix<C64>>,
    pub xi_minus: Vec<DMatrix<C64>>,
    /// 2⟨ξ_B, ξ_C⟩, row-major k × k.
    pub dots: Vec<f64>,
}

impl SymbolCalculus {
    pub fn new(rep: &CliffordRep, k: usize, xi: &[f64]) -> Self {
        let n = rep.n;
        let (mut xi_plus, mut xi_minus) = (Vec::with_capacity(k), Vec::with_capacity(k));
        for a in 0..k {
            let (p, m) = rep.dirac_symbol(&xi[a * n..(a + 1) * n]);
            xi_plus.push(p);
            xi_minus.push(m);
        }
        let mut dots = vec![0.0; k * k];
        for b in 0..k {
            for c in 0..k {
                dots[b * k + c] = rep.delta_symbol(&xi[b * n..(b + 1) * n], &xi[c * n..(c + 1) * n]);
            }
        }
        SymbolCalculus { k, xi_plus, xi_minus, dots }
    }

    pub fn xi(&self, chir: Chirality, a: usize) -> &DMatrix<C64> {
        match chir {
            Chirality::Plus => &self.xi_plus[a],
            Chirality::Minus => &self.xi_minus[a],
        }
    }
}

impl SpinorCalculus for SymbolCalculus {
    type Field = SymSpinor;

    fn k(&self) -> usize {
        self.k
    }

    fn nabla(&self, a: usize, f: &SymSpinor) -> SymSpinor {
        SymSpinor { chirality: f.chirality.flip(), mat: self.xi(f.chirality, a) * &f.mat }
    }

    fn delta(&self, b: usize, c: usize, f: &SymSpinor) -> SymSpinor {
        SymSpinor { chirality: f.chirality, mat: &f.mat * C64::new(self.dots[b * self.k + c], 0.0) }
    }
}

/// Clifford representation and Weyl bases for one (k, n), shared by bundles.
#[derive(Clone, Debug)]
pub struct SymbolContext {
    pub k: usize,
    pub n: usize,
    pub rep: CliffordRep,
    pub v2: WeylSpace,
    pub v3p: Option<WeylSpace>,
    pub v3pp: Option<WeylSpace>,
    q2: DMatrix<C64>,
    q3p: Option<DMatrix<C64>>,
    q3pp: Option<DMatrix<C64>>,
}

impl SymbolContext {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2 (got {k})")));
        }
        let rep = build_clifford(n)?;
        let s = rep.s_dim;
        let v2 = WeylSpace::new(Partition::P21, k)?;
        let (v3p, v3pp) = if k >= 3 {
            (Some(WeylSpace::new(Partition::P22, k)?), Some(WeylSpace::new(Partition::P311, k)?))
        } else {
            (None, None)
        };
        let q2 = kron_identity(&v2.basis, s);
        let q3p = v3p.as_ref().map(|w| kron_identity(&w.basis, s));
        let q3pp = v3pp.as_ref().map(|w| kron_identity(&w.basis, s));
        Ok(SymbolContext { k, n, rep, v2, v3p, v3pp, q2, q3p, q3pp })
    }

    pub fn s(&self) -> usize {
        self.rep.s_dim
    }

    /// Dimensions of (𝒱₀, 𝒱₁, 𝒱₂, 𝒱₃′, 𝒱₃″); the last two are 0 for k = 2.
    pub fn dims(&self) -> [usize; 5] {
        let s = self.s();
        [
            s,
            self.k * s,
            self.v2.d * s,
            self.v3p.as_ref().map_or(0, |w| w.d * s),
            self.v3pp.as_ref().map_or(0, |w| w.d * s),
        ]
    }

    /// Isometry from compressed 𝒱₂ coordinates into full tensors ⊗ S⁻.
    pub fn q2(&self) -> &DMatrix<C64> {
        &self.q2
    }
}

/// Which slots of the complex a bundle carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BundleMode {
    /// σ₀, σ₁, σ₂′, σ₂″ and all three Hodge symbols (k ≥ 3).
    Full,
    /// σ₀, σ₁ only; L₂ = σ₁σ₁* (k = 2, or when only slots 0–1 are needed).
    LowOrder,
}

#[derive(Clone, Debug)]
pub struct SymbolBundle {
    pub k: usize,
    pub n: usize,
    pub xi: Vec<f64>,
    pub mode: BundleMode,
    pub sigma0: DMatrix<C64>,
    pub sigma1: DMatrix<C64>,
    pub sigma2p: Option<DMatrix<C64>>,
    pub sigma2pp: Option<DMatrix<C64>>,
    pub l0: DMatrix<C64>,
    pub l1: DMatrix<C64>,
    pub l2: Option<DMatrix<C64>>,
}

fn stack(fields: &[SymSpinor]) -> DMatrix<C64> {
    let s = fields[0].mat.nrows();
    let cols = fields[0].mat.ncols();
    let mut out = DMatrix::zeros(s * fields.len(), cols);
    for (t, f) in fields.iter().enumerate() {
        out.view_mut((t * s, 0), (s, cols)).copy_from(&f.mat);
    }
    out
}

fn gram(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.adjoint() * m
}

/// Symbols in full coordinates for slots 0 and 1: (σ₀, σ₁ before compression).
fn low_symbols(ctx: &SymbolContext, calc: &SymbolCalculus) -> (DMatrix<C64>, DMatrix<C64>) {
    let (k, s) = (ctx.k, ctx.s());
    let f = SymSpinor { chirality: Chirality::Plus, mat: DMatrix::identity(s, s) };
    let sigma0 = stack(&calculus::d0(calc, &f));
    let comps: Vec<SymSpinor> = (0..k)
        .map(|a| {
            let mut m = DMatrix::zeros(s, k * s);
            m.view_mut((0, a * s), (s, s)).fill_with_identity();
            SymSpinor { chirality: Chirality::Minus, mat: m }
        })
        .collect();
    let sigma1 = stack(&calculus::d1(calc, &comps));
    (sigma0, sigma1)
}

impl SymbolBundle {
    /// All slots the context supports: full for k ≥ 3, low order for k = 2.
    pub fn build(ctx: &SymbolContext, xi: &[f64]) -> Result<Self> {
        let mode = if ctx.k >= 3 { BundleMode::Full } else { BundleMode::LowOrder };
        Self::build_with(ctx, xi, mode)
    }

    pub fn build_with(ctx: &SymbolContext, xi: &[f64], mode: BundleMode) -> Result<Self> {
        let (k, n, s) = (ctx.k, ctx.n, ctx.s());
        if xi.len() != k * n {
            return Err(Error::Dimension(format!("xi has {} entries, expected {}", xi.len(), k * n)));
        }
        if mode == BundleMode::Full && k < 3 {
            return Err(Error::RequiresK3(k));
        }
        let calc = SymbolCalculus::new(&ctx.rep, k, xi);
        let (sigma0, s1full) = low_symbols(ctx, &calc);
        let sigma1 = ctx.q2.adjoint() * s1full;
        let g0 = gram(&sigma0);
        let l0 = &g0 * &g0;
        let p0 = &sigma0 * sigma0.adjoint();
        let l1 = &p0 * &p0 + gram(&sigma1);
        let mut l2 = &sigma1 * sigma1.adjoint();
        let (mut sigma2p, mut sigma2pp) = (None, None);
        if mode == BundleMode::Full {
            let d2s = ctx.q2.ncols();
            let h: Vec<SymSpinor> = (0..k * k * k)
                .map(|t| SymSpinor { chirality: Chirality::Minus, mat: ctx.q2.view((t * s, 0), (s, d2s)).into_owned() })
                .collect();
            let q3p = ctx.q3p.as_ref().expect("k >= 3");
            let q3pp = ctx.q3pp.as_ref().expect("k >= 3");
            let a = q3p.adjoint() * stack(&calculus::d2p(&calc, &h));
            let b = q3pp.adjoint() * stack(&calculus::d2pp(&calc, &h));
            let ga = gram(&a);
            l2 += &ga * &ga + gram(&b);
            sigma2p = Some(a);
            sigma2pp = Some(b);
        }
        Ok(SymbolBundle { k, n, xi: xi.to_vec(), mode, sigma0, sigma1, sigma2p, sigma2pp, l0, l1, l2: Some(l2) })
    }

    /// Composition residuals ‖σ₁σ₀‖, ‖σ₂′σ₁‖, ‖σ₂″σ₁‖ (Frobenius).
    pub fn composition_residuals(&self) -> [f64; 3] {
        let r1 = frob(&(&self.sigma1 * &self.sigma0));
        let r2 = self.sigma2p.as_ref().map_or(0.0, |a| frob(&(a * &self.sigma1)));
        let r3 = self.sigma2pp.as_ref().map_or(0.0, |b| frob(&(b * &self.sigma1)));
        [r1, r2, r3]
    }

    /// Stacked slot-2 symbol [σ₂′; σ₂″].
    pub fn sigma2_stacked(&self) -> Option<DMatrix<C64>> {
        let a = self.sigma2p.as_ref()?;
        let b = self.sigma2pp.as_ref()?;
        let mut m = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
        m.view_mut((0, 0), a.shape()).copy_from(a);
        m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
        Some(m)
    }

    /// Hodge symbols present in this bundle paired with their slot.
    pub fn hodge(&self) -> Vec<(usize, &DMatrix<C64>)> {
        let mut v = vec![(0, &self.l0), (1, &self.l1)];
        if self.mode == BundleMode::Full {
            v.push((2, self.l2.as_ref().expect("full bundle has L2")));
        }
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub dim_v0: usize,
    pub rank_sigma0: usize,
    pub ker_sigma1: usize,
    pub rank_sigma1: usize,
    /// dim(ker σ₂′ ∩ ker σ₂″); absent for low-order bundles.
    pub ker_sigma2: Option<usize>,
    pub pass: bool,
}

/// Ranks of the symbol sequence at ξ and whether it is exact at slots 0–2.
pub fn verify_exactness(b: &SymbolBundle, tol: f64) -> Result<ExactnessReport> {
    if b.xi.iter().all(|&x| x == 0.0) {
        return Err(Error::Precondition("exactness needs xi != 0".into()));
    }
    let dim_v0 = b.sigma0.ncols();
    let rank_sigma0 = rank(&b.sigma0, tol);
    let rank_sigma1 = rank(&b.sigma1, tol);
    let ker_sigma1 = b.sigma1.ncols() - rank_sigma1;
    let ker_sigma2 = b.sigma2_stacked().map(|m| m.ncols() - rank(&m, tol));
    let pass = rank_sigma0 == dim_v0 && ker_sigma1 == rank_sigma0 && ker_sigma2.is_none_or(|d| d == rank_sigma1);
    Ok(ExactnessReport { dim_v0, rank_sigma0, ker_sigma1, rank_sigma1, ker_sigma2, pass })
}

/// Largest relative residual of
/// |ξ₀|²Θ_ABC = ξ_Aξ_BΘ_00C + ξ_Aξ_CΘ_00B − 2⟨ξ_B,ξ_C⟩Θ_00A
/// over an orthonormal basis of ker σ₂′ ∩ ker σ₂″.
pub fn kernel_identity_check(ctx: &SymbolContext, b: &SymbolBundle) -> Result<f64> {
    let n = ctx.n;
    if b.xi[..n].iter().all(|&x| x == 0.0) {
        return Err(Error::Precondition("the xi_0 block must be nonzero".into()));
    }
    let m = b.sigma2_stacked().ok_or(Error::RequiresK3(b.k))?;
    let kernel = nullspace(&m, RANK_TOL);
    let thetas: Vec<DMatrix<C64>> = (0..kernel.ncols()).map(|j| ctx.q2() * kernel.columns(j, 1)).collect();
    kernel_identity_residual(ctx, b, &thetas)
}

/// The same identity for explicit full-coordinate tensors Θ (k³s × 1).
pub fn kernel_identity_residual(ctx: &SymbolContext, b: &SymbolBundle, thetas: &[DMatrix<C64>]) -> Result<f64> {
    let (k, n, s) = (ctx.k, ctx.n, ctx.s());
    let calc = SymbolCalculus::new(&ctx.rep, k, &b.xi);
    let xi0sq: f64 = b.xi[..n].iter().map(|x| x * x).sum();
    let mut worst = 0.0f64;
    for th in thetas {
        let norm = frob(th);
        if norm == 0.0 {
            continue;
        }
        let comp = |i: [usize; 3]| th.rows(flatten(&i, k) * s, s).into_owned();
        let mut res = 0.0;
        for a in 0..k {
            for bb in 0..k {
                for c in 0..k {
                    let lhs = comp([a, bb, c]) * C64::new(xi0sq, 0.0);
                    let rhs = &calc.xi_plus[a] * (&calc.xi_minus[bb] * comp([0, 0, c]))
                        + &calc.xi_plus[a] * (&calc.xi_minus[c] * comp([0, 0, bb]))
                        - comp([0, 0, a]) * C64::new(calc.dots[bb * k + c], 0.0);
                    res += (lhs - rhs).norm_squared();
                }
            }
        }
        worst = worst.max(res.sqrt() / norm);
    }
    Ok(worst)
}

/// ‖L₂σ₁ − σ₁L₁‖_F / (‖σ₁‖_F ‖L₁‖_F); zero when σ₁ or L₁ vanishes.
pub fn intertwine_check(b: &SymbolBundle) -> f64 {
    let l2 = b.l2.as_ref().expect("bundle carries L2");
    let r = frob(&(l2 * &b.sigma1 - &b.sigma1 * &b.l1));
    let scale = frob(&b.sigma1) * frob(&b.l1);
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// (λ_min, λ_max) of a Hermitian symbol.
pub fn eigen_bounds(l: &DMatrix<C64>) -> (f64, f64) {
    let e = hermitian_eigenvalues(l);
    (e[0], e[e.len() - 1])
}

/// Gⱼ = Lⱼ⁻¹ and the residual ‖LⱼGⱼ − I‖_F.
pub fn green(l: &DMatrix<C64>) -> Option<(DMatrix<C64>, f64)> {
    let g = l.clone().try_inverse()?;
    let r = frob(&(l * &g - DMatrix::identity(l.nrows(), l.ncols())));
    Some((g, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_xi_gives_zero_bundle() {
        let ctx = SymbolContext::new(3, 2).unwrap();
        let b = SymbolBundle::build(&ctx, &[0.0; 6]).unwrap();
        for m in [&b.sigma0, &b.sigma1, b.sigma2p.as_ref().unwrap(), b.sigma2pp.as_ref().unwrap(), &b.l0, &b.l1] {
            assert_eq!(frob(m), 0.0);
        }
        assert!(verify_exactness(&b, RANK_TOL).is_err());
        assert_eq!(intertwine_check(&b), 0.0);
    }

    #[test]
    fn dims_k3_n2() {
        let ctx = SymbolContext::new(3, 2).unwrap();
        assert_eq!(ctx.dims(), [1, 3, 8, 6, 6]);
    }

    #[test]
    fn exact_at_fixed_xi() {
        let ctx = SymbolContext::new(3, 2).unwrap();
        let b = SymbolBundle::build(&ctx, &[0.3, -0.2, 0.5, 0.1, -0.7, 0.4]).unwrap();
        let r = verify_exactness(&b, RANK_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!((r.rank_sigma0, r.ker_sigma1, r.rank_sigma1, r.ker_sigma2), (1, 1, 2, Some(2)));
        assert!(kernel_identity_check(&ctx, &b).unwrap() < 1e-9);
    }

    #[test]
    fn low_order_for_k2() {
        let ctx = SymbolContext::new(2, 3).unwrap();
        assert!(SymbolBundle::build_with(&ctx, &[1.0; 6], BundleMode::Full).is_err());
        let b = SymbolBundle::build(&ctx, &[0.3, -0.2, 0.5, 0.1, -0.7, 0.4]).unwrap();
        assert_eq!(b.mode, BundleMode::LowOrder);
        let r = verify_exactness(&b, RANK_TOL).unwrap();
        assert_eq!((r.rank_sigma0, r.ker_sigma1), (2, 2));
    }
}
