//! Young symmetrizers 𝔠_λ = (row symmetrizer)(column antisymmetrizer) acting
//! from the right on ω-tensors.
//!
//! Boxes are numbered 1..m by the tableaux
//!
//! ```text
//! 21:  1 2      22:  1 2      311:  1 2 4
//!      3             3 4            3
//!                                   5
//! ```
//!
//! and letter positions are read right to left: box b carries the letter in
//! tensor position m − b. This relabeling makes the symmetrizer images agree
//! with the index-formula projectors.

use super::block::{flatten, unflatten, BlockMatrix};
use super::Partition;
use crate::error::Result;

pub struct Tableau {
    pub rows: Vec<Vec<usize>>,
    /// Normalization 1/n_λ applied to the group-algebra element.
    pub factor: f64,
}

impl Tableau {
    pub fn of(p: Partition) -> Tableau {
        match p {
            Partition::P21 => Tableau { rows: vec![vec![0, 1], vec![2]], factor: 1.0 / 3.0 },
            Partition::P22 => Tableau { rows: vec![vec![0, 1], vec![2, 3]], factor: 1.0 / 12.0 },
            Partition::P311 => Tableau { rows: vec![vec![0, 1, 3], vec![2], vec![4]], factor: 1.0 / 20.0 },
        }
    }

    fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows[0].len();
        (0..width).map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect()).collect()
    }
}

/// All permutations of `items` with their signs.
fn signed_perms(items: &[usize]) -> Vec<(Vec<usize>, f64)> {
    if items.len() <= 1 {
        return vec![(items.to_vec(), 1.0)];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        for (mut p, s) in signed_perms(&rest) {
            p.insert(0, head);
            out.push((p, sign * s));
        }
    }
    out
}

/// Group generated by permuting each set independently; elements are maps on
/// 0..m with their signs.
fn product_group(sets: &[Vec<usize>], m: usize) -> Vec<(Vec<usize>, f64)> {
    let mut group = vec![((0..m).collect::<Vec<_>>(), 1.0)];
    for set in sets {
        let mut next = Vec::new();
        for (g, gs) in &group {
            for (p, ps) in signed_perms(set) {
                let mut h = g.clone();
                for (src, &dst) in set.iter().zip(&p) {
                    h[*src] = dst;
                }
                next.push((h, gs * ps));
            }
        }
        group = next;
    }
    group
}

fn build(k: usize, p: Partition, factor: f64) -> BlockMatrix {
    let t = Tableau::of(p);
    let m = p.order();
    let rows = product_group(&t.rows, m);
    let cols = product_group(&t.columns(), m);
    // σ = p∘q with coefficient sgn(q); stored as σ⁻¹.
    let mut terms = Vec::with_capacity(rows.len() * cols.len());
    for (pp, _) in &rows {
        for (q, qs) in &cols {
            let sigma: Vec<usize> = (0..m).map(|i| pp[q[i]]).collect();
            let mut inv = vec![0; m];
            for (i, &s) in sigma.iter().enumerate() {
                inv[s] = i;
            }
            terms.push((inv, *qs));
        }
    }
    let mut mat = BlockMatrix::zeros(k, m);
    let mut y = vec![0; m];
    for col in 0..mat.dim {
        let x = unflatten(col, k, m);
        for (inv, c) in &terms {
            for (i, slot) in y.iter_mut().enumerate() {
                // box b holds the letter at position m-1-b
                *slot = x[m - 1 - inv[m - 1 - i]];
            }
            mat.add(flatten(&y, k), col, c * factor);
        }
    }
    mat
}

/// Normalized symmetrizer 𝔠_λ/n_λ on ⊗ᵐℂᵏ.
pub fn young_symmetrizer(k: usize, p: Partition) -> Result<BlockMatrix> {
    if k < 2 {
        return Err(crate::error::Error::InvalidArgument(format!("k must be at least 2 (got {k})")));
    }
    Ok(build(k, p, Tableau::of(p).factor))
}

/// Symmetrizer without the 1/n_λ normalization.
pub fn young_unnormalized(k: usize, p: Partition) -> BlockMatrix {
    build(k, p, 1.0)
}

/// The scalar n with 𝔠² = n·𝔠 for the unnormalized symmetrizer, measured as a
/// Rayleigh quotient. `None` when the symmetrizer vanishes (e.g. 311 on k = 2).
pub fn measured_n_lambda(k: usize, p: Partition) -> Option<f64> {
    let c = young_unnormalized(k, p);
    let cc = c.dot(&c);
    if cc == 0.0 {
        return None;
    }
    Some(c.squared().dot(&c) / cc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_sizes() {
        let t = Tableau::of(Partition::P311);
        assert_eq!(product_group(&t.rows, 5).len(), 6);
        assert_eq!(product_group(&t.columns(), 5).len(), 6);
    }

    #[test]
    fn n_lambda_values() {
        for (p, n) in [(Partition::P21, 3.0), (Partition::P22, 12.0), (Partition::P311, 20.0)] {
            let got = measured_n_lambda(3, p).unwrap();
            assert!((got - n).abs() < 1e-9, "{p:?}: {got}");
        }
        assert!(measured_n_lambda(2, Partition::P311).is_none());
    }
}
