//! Block-diagonal storage for operators on ⊗ᵐℂᵏ that preserve index content.
//!
//! Every projector in this module maps a basis tensor e_{A₁…A_m} into the span
//! of permutations of (A₁,…,A_m), so it is block diagonal once indices are
//! grouped by their multiset of values.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::linalg::{image_basis_real, max_principal_sine, spectral_norm_real};

/// Flattened index of a tuple, A₁ most significant.
pub fn flatten(idx: &[usize], k: usize) -> usize {
    idx.iter().fold(0, |acc, &a| acc * k + a)
}

pub fn unflatten(mut flat: usize, k: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0; m];
    for slot in out.iter_mut().rev() {
        *slot = flat % k;
        flat /= k;
    }
    out
}

#[derive(Clone, Debug)]
pub struct Block {
    /// Global flat indices in ascending order.
    pub indices: Vec<usize>,
    pub mat: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct BlockMatrix {
    pub k: usize,
    pub m: usize,
    pub dim: usize,
    pub blocks: Vec<Block>,
    /// (block, local position) for every global index.
    pos: Vec<(usize, usize)>,
}

impl BlockMatrix {
    /// Zero operator with the content-class block layout.
    pub fn zeros(k: usize, m: usize) -> Self {
        let dim = k.pow(m as u32);
        let mut classes: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for flat in 0..dim {
            let mut counts = vec![0u8; k];
            for a in unflatten(flat, k, m) {
                counts[a] += 1;
            }
            classes.entry(counts).or_default().push(flat);
        }
        let mut pos = vec![(0, 0); dim];
        let blocks = classes
            .into_values()
            .enumerate()
            .map(|(b, indices)| {
                for (l, &g) in indices.iter().enumerate() {
                    pos[g] = (b, l);
                }
                let n = indices.len();
                Block { indices, mat: DMatrix::zeros(n, n) }
            })
            .collect();
        BlockMatrix { k, m, dim, blocks, pos }
    }

    /// Adds `v` at global entry (row, col). Panics if the entry crosses blocks.
    pub fn add(&mut self, row: usize, col: usize, v: f64) {
        let (br, lr) = self.pos[row];
        let (bc, lc) = self.pos[col];
        assert_eq!(br, bc, "operator does not preserve index content");
        self.blocks[br].mat[(lr, lc)] += v;
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (br, lr) = self.pos[row];
        let (bc, lc) = self.pos[col];
        if br != bc {
            0.0
        } else {
            self.blocks[br].mat[(lr, lc)]
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for b in &self.blocks {
            for (i, &gi) in b.indices.iter().enumerate() {
                for (j, &gj) in b.indices.iter().enumerate() {
                    out[(gi, gj)] = b.mat[(i, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for b in &self.blocks {
            for (i, &gi) in b.indices.iter().enumerate() {
                out[gi] = b.indices.iter().enumerate().map(|(j, &gj)| b.mat[(i, j)] * v[gj]).sum();
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.blocks.iter().map(|b| b.mat.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn squared(&self) -> BlockMatrix {
        let mut out = self.clone();
        for b in out.blocks.iter_mut() {
            b.mat = &b.mat * &b.mat;
        }
        out
    }

    /// ‖P² − P‖_F.
    pub fn idempotency_residual(&self) -> f64 {
        self.blocks.iter().map(|b| (&b.mat * &b.mat - &b.mat).norm_squared()).sum::<f64>().sqrt()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &BlockMatrix) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mat.dot(&b.mat)).sum()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.blocks.iter().map(|b| spectral_norm_real(&b.mat)).fold(0.0, f64::max)
    }

    /// Orthonormal image basis of each block (local coordinates), singular
    /// values cut at `tol` times the global largest one.
    pub fn block_image_bases(&self, tol: f64) -> Vec<DMatrix<f64>> {
        let smax = self.spectral_norm();
        self.blocks.iter().map(|b| image_basis_real(&b.mat, tol, smax)).collect()
    }

    /// Orthonormal image basis as a dense `dim × rank` matrix, columns ordered
    /// by block then by singular value.
    pub fn image_basis(&self, tol: f64) -> DMatrix<f64> {
        let locals = self.block_image_bases(tol);
        let rank: usize = locals.iter().map(|q| q.ncols()).sum();
        let mut out = DMatrix::zeros(self.dim, rank);
        let mut col = 0;
        for (b, q) in self.blocks.iter().zip(&locals) {
            for j in 0..q.ncols() {
                for (i, &g) in b.indices.iter().enumerate() {
                    out[(g, col)] = q[(i, j)];
                }
                col += 1;
            }
        }
        out
    }

    /// Sine of the largest principal angle between the images of two operators
    /// with the same layout; 1.0 when the ranks differ in any block.
    pub fn image_distance(&self, other: &BlockMatrix, tol: f64) -> f64 {
        let a = self.block_image_bases(tol);
        let b = other.block_image_bases(tol);
        a.iter().zip(&b).map(|(qa, qb)| max_principal_sine(qa, qb)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_round_trip() {
        for flat in 0..81 {
            let idx = unflatten(flat, 3, 4);
            assert_eq!(flatten(&idx, 3), flat);
        }
        assert_eq!(flatten(&[1, 0, 2], 3), 11);
    }

    #[test]
    fn content_blocks_cover_space() {
        let z = BlockMatrix::zeros(3, 3);
        let total: usize = z.blocks.iter().map(|b| b.indices.len()).sum();
        assert_eq!(total, 27);
        // multisets of size 3 from 3 letters
        assert_eq!(z.blocks.len(), 10);
    }
}
