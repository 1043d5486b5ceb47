//! Sparse spinor-valued polynomials on ℝ^{kn} with exact differentiation.
//!
//! Variables are indexed by (A, j) ↦ A·n + j, so x_{01} is variable 0.
//! Terms are kept in a `BTreeMap` so iteration order, and therefore every
//! floating-point sum, is deterministic.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::clifford::Chirality;
use crate::linalg::{Lin, C64};

pub type Exponent = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorPoly {
    pub nvars: usize,
    pub width: usize,
    pub chirality: Chirality,
    pub terms: BTreeMap<Exponent, DVector<C64>>,
}

fn is_zero(v: &DVector<C64>) -> bool {
    v.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

impl SpinorPoly {
    pub fn zero(nvars: usize, width: usize, chirality: Chirality) -> Self {
        SpinorPoly { nvars, width, chirality, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, value: DVector<C64>, chirality: Chirality) -> Self {
        let mut p = Self::zero(nvars, value.len(), chirality);
        p.add_term(vec![0; nvars], &value);
        p
    }

    pub fn monomial(exp: Exponent, value: DVector<C64>, chirality: Chirality) -> Self {
        let mut p = Self::zero(exp.len(), value.len(), chirality);
        p.add_term(exp, &value);
        p
    }

    /// Adds `value · x^exp`, dropping the term if it cancels exactly.
    pub fn add_term(&mut self, exp: Exponent, value: &DVector<C64>) {
        debug_assert_eq!(exp.len(), self.nvars);
        debug_assert_eq!(value.len(), self.width);
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !is_zero(value) {
                    e.insert(value.clone());
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// ∂/∂x_var.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.width, self.chirality);
        for (e, v) in &self.terms {
            if e[var] > 0 {
                let mut d = e.clone();
                d[var] -= 1;
                out.add_term(d, &(v * C64::new(e[var] as f64, 0.0)));
            }
        }
        out
    }

    /// Left-multiplies every coefficient by `m` and relabels the chirality.
    pub fn apply_matrix(&self, m: &DMatrix<C64>, chirality: Chirality) -> Self {
        assert_eq!(m.ncols(), self.width);
        let mut out = Self::zero(self.nvars, m.nrows(), chirality);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &(m * v));
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero(self.nvars, self.width, self.chirality);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &(v * c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::lincomb(&[(1.0, self), (-1.0, other)])
    }

    /// Coefficient ℓ² norm.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|v| v.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max()
    }

    pub fn is_independent_of(&self, var: usize) -> bool {
        self.terms.keys().all(|e| e[var] == 0)
    }

    pub fn eval(&self, x: &[f64]) -> DVector<C64> {
        let mut out = DVector::zeros(self.width);
        for (e, v) in &self.terms {
            let m: f64 = e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product();
            out += v * C64::new(m, 0.0);
        }
        out
    }

    /// Substitutes x_var = Σ_w coeffs[w]·x_w (coeffs[var] is ignored).
    pub fn substitute_linear(&self, var: usize, coeffs: &[f64]) -> Self {
        assert_eq!(coeffs.len(), self.nvars);
        let maxp = self.terms.keys().map(|e| e[var]).max().unwrap_or(0) as usize;
        // powers[p] = (Σ c_w x_w)^p as scalar polynomials
        let mut powers: Vec<BTreeMap<Exponent, f64>> = vec![BTreeMap::from([(vec![0; self.nvars], 1.0)])];
        for _ in 0..maxp {
            let prev = powers.last().unwrap();
            let mut next: BTreeMap<Exponent, f64> = BTreeMap::new();
            for (e, c) in prev {
                for (w, &cw) in coeffs.iter().enumerate() {
                    if w == var || cw == 0.0 {
                        continue;
                    }
                    let mut f = e.clone();
                    f[w] += 1;
                    *next.entry(f).or_insert(0.0) += c * cw;
                }
            }
            powers.push(next);
        }
        let mut out = Self::zero(self.nvars, self.width, self.chirality);
        for (e, v) in &self.terms {
            let mut base = e.clone();
            base[var] = 0;
            for (pe, pc) in &powers[e[var] as usize] {
                let f: Exponent = base.iter().zip(pe).map(|(a, b)| a + b).collect();
                out.add_term(f, &(v * C64::new(*pc, 0.0)));
            }
        }
        out
    }

    /// A few random monomials of degree ≤ `max_degree` with complex
    /// coefficients uniform in [-1, 1] per part.
    pub fn random<R: Rng>(
        rng: &mut R,
        nvars: usize,
        width: usize,
        chirality: Chirality,
        nterms: usize,
        max_degree: usize,
    ) -> Self {
        let mut out = Self::zero(nvars, width, chirality);
        for _ in 0..nterms {
            let deg = rng.random_range(0..=max_degree);
            let mut e = vec![0u8; nvars];
            for _ in 0..deg {
                e[rng.random_range(0..nvars)] += 1;
            }
            let v =
                DVector::from_fn(width, |_, _| C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)));
            out.add_term(e, &v);
        }
        out
    }
}

impl Lin for SpinorPoly {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let first = terms[0].1;
        let mut out = SpinorPoly::zero(first.nvars, first.width, first.chirality);
        for (c, p) in terms {
            debug_assert_eq!(p.width, first.width);
            debug_assert_eq!(p.chirality, first.chirality);
            if *c == 0.0 {
                continue;
            }
            for (e, v) in &p.terms {
                match out.terms.get_mut(e) {
                    Some(acc) => acc.axpy(C64::new(*c, 0.0), v, C64::new(1.0, 0.0)),
                    None => {
                        out.terms.insert(e.clone(), v * C64::new(*c, 0.0));
                    }
                }
            }
        }
        out.terms.retain(|_, v| !is_zero(v));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(width: usize) -> DVector<C64> {
        DVector::from_element(width, C64::new(1.0, 0.0))
    }

    #[test]
    fn derivative_of_monomial() {
        let p = SpinorPoly::monomial(vec![2, 1], one(1), Chirality::Plus);
        let d = p.derivative(0);
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[&vec![1, 1]][0], C64::new(2.0, 0.0));
        assert!(p.derivative(0).derivative(0).derivative(0).is_zero());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = SpinorPoly::monomial(vec![1, 0], one(2), Chirality::Minus);
        assert!(p.sub(&p).terms.is_empty());
    }

    #[test]
    fn substitution_expands_powers() {
        // x0^2 with x0 = x1 + 2 x2 -> x1^2 + 4 x1 x2 + 4 x2^2
        let p = SpinorPoly::monomial(vec![2, 0, 0], one(1), Chirality::Plus);
        let q = p.substitute_linear(0, &[0.0, 1.0, 2.0]);
        let x = [0.3, -0.7, 1.1];
        let want = (x[1] + 2.0 * x[2]) * (x[1] + 2.0 * x[2]);
        assert!((q.eval(&x)[0].re - want).abs() < 1e-14);
        assert!(q.is_independent_of(0));
    }
}
