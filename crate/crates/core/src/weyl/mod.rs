//! GL(k) Weyl-module projectors C₂₁, C₂₂, C₃₁₁ on ⊗ᵐℂᵏ, the matching Young
//! symmetrizers, and orthonormal bases of the modules.
//!
//! Tensors are flattened row-major with the first index most significant.
//! Index positions are named as in the operator formulas: (A,B,C) for order
//! 3, (D,A,B,C) for order 4 and (E,D,A,B,C) for order 5.

mod block;
mod young;

use nalgebra::DMatrix;
use serde::Serialize;

pub use block::{flatten, unflatten, Block, BlockMatrix};
pub use young::{measured_n_lambda, young_symmetrizer, young_unnormalized, Tableau};

use crate::error::{Error, Result};
use crate::linalg::{Lin, C64, RANK_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Partition {
    P21,
    P22,
    P311,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::P21, Partition::P22, Partition::P311];

    pub fn order(self) -> usize {
        match self {
            Partition::P21 => 3,
            Partition::P22 => 4,
            Partition::P311 => 5,
        }
    }

    pub fn shape(self) -> &'static [usize] {
        match self {
            Partition::P21 => &[2, 1],
            Partition::P22 => &[2, 2],
            Partition::P311 => &[3, 1, 1],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Partition::P21 => "21",
            Partition::P22 => "22",
            Partition::P311 => "311",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "21" => Ok(Partition::P21),
            "22" => Ok(Partition::P22),
            "311" => Ok(Partition::P311),
            _ => Err(Error::InvalidArgument(format!("unsupported partition {s}"))),
        }
    }
}

/// Dimension of the irreducible GL(k)-module with highest weight `shape`,
/// ∏_{i<j} (λᵢ − λⱼ + j − i)/(j − i). Zero when `shape` has more than k rows.
pub fn weyl_dimension(shape: &[usize], k: usize) -> usize {
    if shape.len() > k {
        return 0;
    }
    let mut lam = vec![0i64; k];
    for (i, &v) in shape.iter().enumerate() {
        lam[i] = v as i64;
    }
    let (mut num, mut den) = (1i128, 1i128);
    for i in 0..k {
        for j in i + 1..k {
            num *= (lam[i] - lam[j] + (j - i) as i64) as i128;
            den *= (j - i) as i128;
        }
    }
    (num / den) as usize
}

/// Calls `emit(coef, input_index)` for every term of the projector formula
/// producing output component `out`.
pub fn formula_terms(p: Partition, out: &[usize], emit: &mut impl FnMut(f64, [usize; 5])) {
    match p {
        Partition::P21 => {
            let (a, b, c) = (out[0], out[1], out[2]);
            let t = 1.0 / 3.0;
            emit(t, [a, b, c, 0, 0]);
            emit(t, [a, c, b, 0, 0]);
            emit(-t, [c, b, a, 0, 0]);
            emit(-t, [b, c, a, 0, 0]);
        }
        Partition::P22 => {
            let t = 1.0 / 12.0;
            for (d, a) in [(out[0], out[1]), (out[1], out[0])] {
                for (b, c) in [(out[2], out[3]), (out[3], out[2])] {
                    emit(t, [d, a, b, c, 0]);
                    emit(-t, [d, c, b, a, 0]);
                    emit(t, [b, c, d, a, 0]);
                    emit(-t, [b, a, d, c, 0]);
                }
            }
        }
        Partition::P311 => {
            let (e, d, a, b, c) = (out[0], out[1], out[2], out[3], out[4]);
            let t = 1.0 / 20.0;
            for [pd, pb, pc] in permutations3([d, b, c]) {
                for ([x, y, z], sign) in signed_permutations3([e, a, pc]) {
                    emit(sign * t, [x, pd, y, pb, z]);
                }
            }
        }
    }
}

fn permutations3<T: Copy>(v: [T; 3]) -> [[T; 3]; 6] {
    let [a, b, c] = v;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

fn signed_permutations3<T: Copy>(v: [T; 3]) -> [([T; 3], f64); 6] {
    let [a, b, c] = v;
    [([a, b, c], 1.0), ([a, c, b], -1.0), ([b, a, c], -1.0), ([b, c, a], 1.0), ([c, a, b], 1.0), ([c, b, a], -1.0)]
}

/// Applies the projector C_λ, by its index formula, to a tensor with entries
/// in any [`Lin`] type.
pub fn apply_formula<T: Lin>(p: Partition, k: usize, h: &[T]) -> Vec<T> {
    let m = p.order();
    assert_eq!(h.len(), k.pow(m as u32), "tensor has wrong order");
    let mut idx: Vec<(f64, usize)> = Vec::with_capacity(36);
    (0..h.len())
        .map(|o| {
            idx.clear();
            let out = unflatten(o, k, m);
            formula_terms(p, &out, &mut |c, t| idx.push((c, flatten(&t[..m], k))));
            let terms: Vec<(f64, &T)> = idx.iter().map(|&(c, i)| (c, &h[i])).collect();
            T::lincomb(&terms)
        })
        .collect()
}

/// C_λ as a block-diagonal matrix.
pub fn projector_matrix(p: Partition, k: usize) -> BlockMatrix {
    let m = p.order();
    let mut mat = BlockMatrix::zeros(k, m);
    for o in 0..mat.dim {
        let out = unflatten(o, k, m);
        formula_terms(p, &out, &mut |c, t| mat.add(o, flatten(&t[..m], k), c));
    }
    mat
}

/// A Weyl module realized inside ⊗ᵐℂᵏ.
#[derive(Clone, Debug)]
pub struct WeylSpace {
    pub k: usize,
    pub lambda: Partition,
    pub order: usize,
    pub projector: BlockMatrix,
    /// k^m × d, orthonormal columns spanning the image of the projector.
    pub basis: DMatrix<f64>,
    pub d: usize,
}

impl WeylSpace {
    pub fn new(lambda: Partition, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("k must be at least 2 (got {k})")));
        }
        let projector = projector_matrix(lambda, k);
        let basis = projector.image_basis(RANK_TOL);
        let d = basis.ncols();
        Ok(WeylSpace { k, lambda, order: lambda.order(), projector, basis, d })
    }

    pub fn projector_dense(&self) -> DMatrix<f64> {
        self.projector.to_dense()
    }

    pub fn tensor_dim(&self) -> usize {
        self.projector.dim
    }
}

pub fn projector_c21(k: usize) -> Result<WeylSpace> {
    WeylSpace::new(Partition::P21, k)
}

pub fn projector_c22(k: usize) -> Result<WeylSpace> {
    WeylSpace::new(Partition::P22, k)
}

pub fn projector_c311(k: usize) -> Result<WeylSpace> {
    WeylSpace::new(Partition::P311, k)
}

fn diff_norm(a: &[C64], b: &[C64], scale: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y * scale).norm_sqr()).sum::<f64>().sqrt()
}

/// Residual of the characterization of V_λ for a tensor `h`; zero iff h lies
/// in the module.
///
/// * 21: ‖Σ_(B,C) h_[A B̲ C] − (3/2) h_ABC‖, combined with ‖h_ABC − h_ACB‖.
/// * 22: ‖C₂₂(h) − h‖.
/// * 311: ‖Σ_(D,B,C) h_[E D̲ A B̲ C] − (10/3) h_EDABC‖.
pub fn check_membership(lambda: Partition, k: usize, h: &[C64]) -> Result<f64> {
    let m = lambda.order();
    if h.len() != k.pow(m as u32) {
        return Err(Error::Dimension(format!("tensor of length {} is not of order {m} over k = {k}", h.len())));
    }
    let ph = apply_formula(lambda, k, h);
    Ok(match lambda {
        Partition::P21 => {
            // Σ_(B,C) h_[A B̲ C] = (3/2) C₂₁(h)
            let lhs: Vec<C64> = ph.iter().map(|z| z * 1.5).collect();
            let r1 = diff_norm(&lhs, h, 1.5);
            let r2 = (0..h.len())
                .map(|o| {
                    let i = unflatten(o, k, 3);
                    (h[o] - h[flatten(&[i[0], i[2], i[1]], k)]).norm_sqr()
                })
                .sum::<f64>()
                .sqrt();
            r1.hypot(r2)
        }
        Partition::P22 => diff_norm(&ph, h, 1.0),
        Partition::P311 => {
            let lhs: Vec<C64> = ph.iter().map(|z| z * (10.0 / 3.0)).collect();
            diff_norm(&lhs, h, 10.0 / 3.0)
        }
    })
}

/// Projects every spin component of a `[tensor][spin]`-laid-out vector.
pub fn project_spinor_tensor(lambda: Partition, k: usize, s: usize, v: &[C64]) -> Vec<C64> {
    let t = k.pow(lambda.order() as u32);
    let mut out = vec![C64::new(0.0, 0.0); t * s];
    for sp in 0..s {
        let comp: Vec<C64> = (0..t).map(|i| v[i * s + sp]).collect();
        for (i, z) in apply_formula(lambda, k, &comp).into_iter().enumerate() {
            out[i * s + sp] = z;
        }
    }
    out
}

/// Largest membership residual over the spin components of a
/// `[tensor][spin]`-laid-out vector.
pub fn check_spinor_membership(lambda: Partition, k: usize, s: usize, v: &[C64]) -> Result<f64> {
    let t = k.pow(lambda.order() as u32);
    if v.len() != t * s {
        return Err(Error::Dimension(format!("expected {} entries, got {}", t * s, v.len())));
    }
    let mut worst = 0.0f64;
    for sp in 0..s {
        let comp: Vec<C64> = (0..t).map(|i| v[i * s + sp]).collect();
        worst = worst.max(check_membership(lambda, k, &comp)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_small_k() {
        let dims: Vec<usize> = Partition::ALL.iter().map(|&p| WeylSpace::new(p, 2).unwrap().d).collect();
        assert_eq!(dims, vec![2, 1, 0]);
        let dims: Vec<usize> = Partition::ALL.iter().map(|&p| WeylSpace::new(p, 3).unwrap().d).collect();
        assert_eq!(dims, vec![8, 6, 6]);
    }

    #[test]
    fn k_below_two_rejected() {
        assert!(projector_c21(1).is_err());
    }

    #[test]
    fn zero_tensor_is_member() {
        let h = vec![C64::new(0.0, 0.0); 27];
        assert_eq!(check_membership(Partition::P21, 3, &h).unwrap(), 0.0);
    }

    #[test]
    fn order_mismatch_rejected() {
        let h = vec![C64::new(0.0, 0.0); 27];
        assert!(check_membership(Partition::P22, 3, &h).is_err());
    }

    #[test]
    fn weyl_dimension_values() {
        assert_eq!(weyl_dimension(&[2, 1], 4), 20);
        assert_eq!(weyl_dimension(&[2, 2], 4), 20);
        assert_eq!(weyl_dimension(&[3, 1, 1], 4), 36);
        assert_eq!(weyl_dimension(&[3, 1, 1], 2), 0);
    }
}
