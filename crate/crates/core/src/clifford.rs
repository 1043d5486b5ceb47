//! Complex spinor modules S± and the Dirac gamma matrices for any n ≥ 1.
//!
//! For even n = 2m the generators act on (ℂ²)^{⊗m}. With Pauli matrices
//! σ1, σ2, σ3 and a = 0..m-1,
//!
//! ```text
//! e_{2a+1} = i σ3^{⊗a} ⊗ σ1 ⊗ I^{⊗(m-a-1)}
//! e_{2a+2} = i σ3^{⊗a} ⊗ σ2 ⊗ I^{⊗(m-a-1)}
//! ```
//!
//! The volume element is a multiple of σ3^{⊗m}, already diagonal, so S+ is the
//! span of the basis vectors where σ3^{⊗m} is +1 (in increasing index order)
//! and S- the rest. For odd n the representation for n+1 is built and the last
//! generator dropped; both half-spin blocks are kept, so S+ and S- share one
//! coordinate space.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{czero, C64};

/// Which half-spin module a spinor lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub n: usize,
    pub s_dim: usize,
    /// γⱼ restricted to S+, mapping into S-.
    pub gamma_plus: Vec<DMatrix<C64>>,
    /// γⱼ restricted to S-, mapping into S+.
    pub gamma_minus: Vec<DMatrix<C64>>,
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

fn pauli() -> [DMatrix<C64>; 4] {
    let o = czero();
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[one, o, o, one]),
        DMatrix::from_row_slice(2, 2, &[o, one, one, o]),
        DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        DMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
    ]
}

/// Full generators e_1..e_{2m} on (ℂ²)^{⊗m}.
fn even_generators(m: usize) -> Vec<DMatrix<C64>> {
    let [id, s1, s2, s3] = pauli();
    let i = C64::new(0.0, 1.0);
    let mut gens = Vec::with_capacity(2 * m);
    for a in 0..m {
        for mid in [&s1, &s2] {
            let mut g = DMatrix::<C64>::identity(1, 1);
            for _ in 0..a {
                g = kron(&g, &s3);
            }
            g = kron(&g, mid);
            for _ in a + 1..m {
                g = kron(&g, &id);
            }
            gens.push(g * i);
        }
    }
    gens
}

fn block(g: &DMatrix<C64>, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| g[(rows[r], cols[c])])
}

/// Builds the representation; rejects `n = 0`.
pub fn build_clifford(n: usize) -> Result<CliffordRep> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let m = n.div_ceil(2);
    let gens = even_generators(m);
    let dim = 1usize << m;
    // σ3^{⊗m} has +1 at basis index b iff b has an even number of set bits.
    let plus: Vec<usize> = (0..dim).filter(|b| b.count_ones() % 2 == 0).collect();
    let minus: Vec<usize> = (0..dim).filter(|b| b.count_ones() % 2 == 1).collect();
    let gamma_plus = gens[..n].iter().map(|g| block(g, &minus, &plus)).collect();
    let gamma_minus = gens[..n].iter().map(|g| block(g, &plus, &minus)).collect();
    Ok(CliffordRep { n, s_dim: plus.len(), gamma_plus, gamma_minus })
}

impl CliffordRep {
    /// γⱼ acting on spinors of chirality `chir` (0-based j).
    pub fn gamma(&self, chir: Chirality, j: usize) -> &DMatrix<C64> {
        match chir {
            Chirality::Plus => &self.gamma_plus[j],
            Chirality::Minus => &self.gamma_minus[j],
        }
    }

    /// ξ± = -i Σⱼ γ±ⱼ ξⱼ.
    pub fn dirac_symbol(&self, xi: &[f64]) -> (DMatrix<C64>, DMatrix<C64>) {
        assert_eq!(xi.len(), self.n, "xi must have n entries");
        let mi = C64::new(0.0, -1.0);
        let s = self.s_dim;
        let mut p = DMatrix::<C64>::zeros(s, s);
        let mut q = DMatrix::<C64>::zeros(s, s);
        for (j, &x) in xi.iter().enumerate() {
            if x != 0.0 {
                p += &self.gamma_plus[j] * (mi * x);
                q += &self.gamma_minus[j] * (mi * x);
            }
        }
        (p, q)
    }

    /// Scalar symbol of Δ_BC: the multiplier c with ξ_B ξ_C + ξ_C ξ_B = c·I.
    pub fn delta_symbol(&self, xi_b: &[f64], xi_c: &[f64]) -> f64 {
        2.0 * xi_b.iter().zip(xi_c).map(|(a, b)| a * b).sum::<f64>()
    }

    /// max over j,k and both chiralities of ‖γ∓ⱼγ±ₖ + γ∓ₖγ±ⱼ + 2δⱼₖI‖_∞.
    pub fn anticommutation_residual(&self) -> f64 {
        let s = self.s_dim;
        let id = DMatrix::<C64>::identity(s, s);
        let mut worst = 0.0f64;
        for j in 0..self.n {
            for k in 0..self.n {
                let d = if j == k { 2.0 } else { 0.0 };
                for (lo, hi) in [(&self.gamma_plus, &self.gamma_minus), (&self.gamma_minus, &self.gamma_plus)] {
                    let r = &hi[j] * &lo[k] + &hi[k] * &lo[j] + &id * C64::new(d, 0.0);
                    worst = worst.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max));
                }
            }
        }
        worst
    }

    /// max_j ‖(γ⁺ⱼ)ᴴ + γ⁻ⱼ‖_∞.
    pub fn skew_adjoint_residual(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                let r = self.gamma_plus[j].adjoint() + &self.gamma_minus[j];
                r.iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_zero_rejected() {
        assert!(build_clifford(0).is_err());
    }

    #[test]
    fn n1_single_generator_squares_to_minus_one() {
        let r = build_clifford(1).unwrap();
        assert_eq!(r.s_dim, 1);
        let p = &r.gamma_plus[0] * &r.gamma_minus[0];
        assert!((p[(0, 0)] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn zero_symbol_is_zero() {
        let r = build_clifford(4).unwrap();
        let (p, q) = r.dirac_symbol(&[0.0; 4]);
        assert!(p.iter().chain(q.iter()).all(|z| *z == czero()));
    }

    #[test]
    fn delta_symbol_examples() {
        let r = build_clifford(3).unwrap();
        assert_eq!(r.delta_symbol(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 2.0);
        assert_eq!(r.delta_symbol(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]), 0.0);
        assert_eq!(r.delta_symbol(&[2.0, 0.0, 0.0], &[3.0, 0.0, 0.0]), 12.0);
    }
}
