//! Operator formulas of the complex, written once over an abstract spinor
//! calculus. Polynomial fields instantiate them with exact differentiation;
//! symbols instantiate them with ∇_A ↦ ξ_A and Δ_BC ↦ 2⟨ξ_B, ξ_C⟩.
//!
//! Tensor-valued results are returned as flat vectors indexed like
//! [`crate::weyl::flatten`].

use crate::linalg::Lin;
use crate::weyl::{apply_formula, flatten, unflatten, Partition};

pub trait SpinorCalculus {
    type Field: Lin + Clone;
    fn k(&self) -> usize;
    /// ∇_A, flipping chirality.
    fn nabla(&self, a: usize, f: &Self::Field) -> Self::Field;
    /// Δ_BC = ∇_B∇_C + ∇_C∇_B, a scalar second-order operator.
    fn delta(&self, b: usize, c: usize, f: &Self::Field) -> Self::Field;
}

/// Applies ∇_A to each component: out[(A, i)] = ∇_A h_i.
fn nabla_all<C: SpinorCalculus>(c: &C, h: &[C::Field]) -> Vec<C::Field> {
    (0..c.k()).flat_map(|a| h.iter().map(move |f| c.nabla(a, f))).collect()
}

/// (𝒟₀f)_A = ∇_A f.
pub fn d0<C: SpinorCalculus>(c: &C, f: &C::Field) -> Vec<C::Field> {
    (0..c.k()).map(|a| c.nabla(a, f)).collect()
}

/// 𝒟₀*G = Σ_A ∇_A G_A.
pub fn d0_star<C: SpinorCalculus>(c: &C, g: &[C::Field]) -> C::Field {
    let parts: Vec<C::Field> = g.iter().enumerate().map(|(a, f)| c.nabla(a, f)).collect();
    let terms: Vec<(f64, &C::Field)> = parts.iter().map(|p| (1.0, p)).collect();
    C::Field::lincomb(&terms)
}

/// (𝒟₁F)_ABC = ∇_A∇_(B F_C) − ½Δ_BC F_A.
pub fn d1<C: SpinorCalculus>(c: &C, f: &[C::Field]) -> Vec<C::Field> {
    let k = c.k();
    let nn = nabla_all(c, &nabla_all(c, f)); // index (A, B, C) = ∇_A∇_B F_C
    let mut out = Vec::with_capacity(k * k * k);
    for o in 0..k * k * k {
        let i = unflatten(o, k, 3);
        let (a, b, cc) = (i[0], i[1], i[2]);
        let del = c.delta(b, cc, &f[a]);
        out.push(C::Field::lincomb(&[
            (0.5, &nn[flatten(&[a, b, cc], k)]),
            (0.5, &nn[flatten(&[a, cc, b], k)]),
            (-0.5, &del),
        ]));
    }
    out
}

/// (3/2)·C₂₁(∇_A∇_B F_C).
pub fn d1_projector_form<C: SpinorCalculus>(c: &C, f: &[C::Field]) -> Vec<C::Field> {
    let raw = nabla_all(c, &nabla_all(c, f));
    apply_formula(Partition::P21, c.k(), &raw).into_iter().map(|x| C::Field::lincomb(&[(1.5, &x)])).collect()
}

/// (𝒟₁*h)_C = Σ_{A,B} ∇_B∇_A ½(h_ABC + h_ACB) − ½Δ_AB h_CAB.
pub fn d1_star<C: SpinorCalculus>(c: &C, h: &[C::Field]) -> Vec<C::Field> {
    let k = c.k();
    (0..k)
        .map(|cc| {
            let mut parts = Vec::with_capacity(3 * k * k);
            for a in 0..k {
                for b in 0..k {
                    let sym =
                        C::Field::lincomb(&[(0.5, &h[flatten(&[a, b, cc], k)]), (0.5, &h[flatten(&[a, cc, b], k)])]);
                    parts.push((1.0, c.nabla(b, &c.nabla(a, &sym))));
                    parts.push((-0.5, c.delta(a, b, &h[flatten(&[cc, a, b], k)])));
                }
            }
            let terms: Vec<(f64, &C::Field)> = parts.iter().map(|(w, p)| (*w, p)).collect();
            C::Field::lincomb(&terms)
        })
        .collect()
}

/// (𝒟₂′h)_DABC = Σ_{(A,D),(B,C)} (∇_D h_[A B̲ C] + ∇_B h_[C D̲ A]).
pub fn d2p<C: SpinorCalculus>(c: &C, h: &[C::Field]) -> Vec<C::Field> {
    let k = c.k();
    let g = nabla_all(c, h); // index (X, A, B, C) = ∇_X h_ABC
    let at = |x: usize, i: [usize; 3]| &g[flatten(&[x, i[0], i[1], i[2]], k)];
    (0..k.pow(4))
        .map(|o| {
            let i = unflatten(o, k, 4);
            let mut terms = Vec::with_capacity(16);
            for (d, a) in [(i[0], i[1]), (i[1], i[0])] {
                for (b, cc) in [(i[2], i[3]), (i[3], i[2])] {
                    terms.push((0.5, at(d, [a, b, cc])));
                    terms.push((-0.5, at(d, [cc, b, a])));
                    terms.push((0.5, at(b, [cc, d, a])));
                    terms.push((-0.5, at(b, [a, d, cc])));
                }
            }
            C::Field::lincomb(&terms)
        })
        .collect()
}

/// 6·C₂₂(∇_D h_ABC).
pub fn d2p_projector_form<C: SpinorCalculus>(c: &C, h: &[C::Field]) -> Vec<C::Field> {
    let raw = nabla_all(c, h);
    apply_formula(Partition::P22, c.k(), &raw).into_iter().map(|x| C::Field::lincomb(&[(6.0, &x)])).collect()
}

/// (𝒟₂″h)_EDABC = ½ Σ_(D,B,C) (2∇_[E∇_D̲ h_A]BC + ∇_D∇_[E h_A]BC + Δ_BC h_[E D̲ A]).
pub fn d2pp<C: SpinorCalculus>(c: &C, h: &[C::Field]) -> Vec<C::Field> {
    let k = c.k();
    let nn = nabla_all(c, &nabla_all(c, h)); // (Y, X, A, B, C) = ∇_Y∇_X h_ABC
    let mut del = Vec::with_capacity(k.pow(5)); // (B, C, X, Y, Z) = Δ_BC h_XYZ
    for b in 0..k {
        for cc in 0..k {
            for f in h {
                del.push(c.delta(b, cc, f));
            }
        }
    }
    (0..k.pow(5))
        .map(|o| {
            let i = unflatten(o, k, 5);
            let (e, a) = (i[0], i[2]);
            let mut terms: Vec<(f64, &C::Field)> = Vec::with_capacity(36);
            for [d, b, cc] in perms3([i[1], i[3], i[4]]) {
                terms.push((0.5, &nn[flatten(&[e, d, a, b, cc], k)]));
                terms.push((-0.5, &nn[flatten(&[a, d, e, b, cc], k)]));
                terms.push((0.25, &nn[flatten(&[d, e, a, b, cc], k)]));
                terms.push((-0.25, &nn[flatten(&[d, a, e, b, cc], k)]));
                terms.push((0.25, &del[flatten(&[b, cc, e, d, a], k)]));
                terms.push((-0.25, &del[flatten(&[b, cc, a, d, e], k)]));
            }
            C::Field::lincomb(&terms)
        })
        .collect()
}

/// 2·(10/3)·C₃₁₁(∇_E∇_D h_ABC) + (10/3)·C₃₁₁(∇_D∇_E h_ABC).
pub fn d2pp_projector_form<C: SpinorCalculus>(c: &C, h: &[C::Field]) -> Vec<C::Field> {
    let k = c.k();
    let nn = nabla_all(c, &nabla_all(c, h)); // (E, D, A, B, C) = ∇_E∇_D h_ABC
    let swapped: Vec<C::Field> = (0..nn.len())
        .map(|o| {
            let i = unflatten(o, k, 5);
            nn[flatten(&[i[1], i[0], i[2], i[3], i[4]], k)].clone()
        })
        .collect();
    let p1 = apply_formula(Partition::P311, k, &nn);
    let p2 = apply_formula(Partition::P311, k, &swapped);
    p1.iter().zip(&p2).map(|(x, y)| C::Field::lincomb(&[(20.0 / 3.0, x), (10.0 / 3.0, y)])).collect()
}

fn perms3(v: [usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = v;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}
