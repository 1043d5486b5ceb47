//! Small dense linear-algebra helpers shared by the modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;

/// Relative singular-value cutoff used for every numeric rank in the crate.
pub const RANK_TOL: f64 = 1e-9;

/// Real linear combinations. Index formulas and operator formulas are written
/// once against this trait and reused for scalars, polynomials and symbols.
pub trait Lin: Sized {
    /// `sum_i c_i * x_i`. The term list must be non-empty.
    fn lincomb(terms: &[(f64, &Self)]) -> Self;
}

impl Lin for f64 {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        terms.iter().map(|(c, x)| c * **x).sum()
    }
}

impl Lin for C64 {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        terms.iter().fold(C64::new(0.0, 0.0), |acc, (c, x)| acc + **x * *c)
    }
}

impl Lin for DMatrix<C64> {
    fn lincomb(terms: &[(f64, &Self)]) -> Self {
        let (c0, x0) = terms[0];
        let mut out = x0 * C64::from(c0);
        for (c, x) in &terms[1..] {
            out.zip_apply(*x, |o, v| *o += v * *c);
        }
        out
    }
}

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn frob<T: nalgebra::ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|v| v.clone().modulus_squared()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Thin singular value decomposition. `u` and `v` hold the first
/// min(rows, cols) left and right singular vectors; columns belonging to
/// negligible singular values are not meaningful.
///
/// Computed from the Hermitian eigenproblem of [[0, M], [Mᴴ, 0]] (eigenvalues
/// ±σᵢ), which stays accurate on the highly degenerate projector blocks where
/// the bidiagonal SVD in nalgebra 0.35 can lose orthogonality.
pub struct Svd<T: nalgebra::Scalar> {
    pub u: DMatrix<T>,
    pub s: Vec<f64>,
    pub v: DMatrix<T>,
}

pub fn svd<T: nalgebra::ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Svd<T> {
    let (r, c) = m.shape();
    let p = r.min(c);
    if p == 0 {
        return Svd { u: DMatrix::zeros(r, 0), s: Vec::new(), v: DMatrix::zeros(c, 0) };
    }
    let mut a = DMatrix::<T>::zeros(r + c, r + c);
    a.view_mut((0, r), (r, c)).copy_from(m);
    a.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let e = a.symmetric_eigen();
    let mut order: Vec<usize> = (0..r + c).collect();
    order.sort_by(|&i, &j| e.eigenvalues[j].total_cmp(&e.eigenvalues[i]));
    let scale = T::from_real(std::f64::consts::SQRT_2);
    let mut u = DMatrix::<T>::zeros(r, p);
    let mut v = DMatrix::<T>::zeros(c, p);
    let mut s = Vec::with_capacity(p);
    for (col, &i) in order[..p].iter().enumerate() {
        s.push(e.eigenvalues[i].max(0.0));
        let x = e.eigenvectors.column(i);
        for row in 0..r {
            u[(row, col)] = x[row].clone() * scale.clone();
        }
        for row in 0..c {
            v[(row, col)] = x[r + row].clone() * scale.clone();
        }
    }
    Svd { u, s, v }
}

/// Singular values in descending order (empty matrices give an empty list).
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    svd(m).s
}

/// Numeric rank with cutoff `tol * sigma_max`.
pub fn rank(m: &DMatrix<C64>, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&smax) => s.iter().filter(|&&x| x > tol * smax).count(),
    }
}

/// Orthonormal basis (columns) of the null space, cutoff `tol * sigma_max`.
/// A zero matrix has the whole space as kernel.
pub fn nullspace(m: &DMatrix<C64>, tol: f64) -> DMatrix<C64> {
    let c = m.ncols();
    if c == 0 {
        return DMatrix::zeros(0, 0);
    }
    let d = svd(m);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let keep = d.s.iter().filter(|&&x| smax > 0.0 && x > tol * smax).count();
    // complement of the row space, read off the projector I − VVᴴ
    let vr = d.v.columns(0, keep);
    let comp = DMatrix::<C64>::identity(c, c) - vr * vr.adjoint();
    let comp = (&comp + comp.adjoint()) * C64::new(0.5, 0.0);
    let e = comp.symmetric_eigen();
    let cols: Vec<usize> = (0..c).filter(|&i| e.eigenvalues[i] > 0.5).collect();
    let mut out = DMatrix::<C64>::zeros(c, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        out.set_column(j, &e.eigenvectors.column(i));
    }
    out
}

/// Orthonormal basis of the column space of a real matrix, cutoff
/// `tol * smax_global`.
pub fn image_basis_real(m: &DMatrix<f64>, tol: f64, smax_global: f64) -> DMatrix<f64> {
    let (r, c) = m.shape();
    if r == 0 || c == 0 || smax_global == 0.0 {
        return DMatrix::zeros(r, 0);
    }
    let d = svd(m);
    let keep = d.s.iter().filter(|&&x| x > tol * smax_global).count();
    d.u.columns(0, keep).into_owned()
}

pub fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    svd(m).s.first().copied().unwrap_or(0.0)
}

/// Sine of the largest principal angle between the column spans of two real
/// matrices with orthonormal columns. Returns 1.0 if the dimensions differ.
pub fn max_principal_sine(q1: &DMatrix<f64>, q2: &DMatrix<f64>) -> f64 {
    if q1.ncols() != q2.ncols() {
        return 1.0;
    }
    if q1.ncols() == 0 {
        return 0.0;
    }
    let r12 = q2 - q1 * (q1.transpose() * q2);
    let r21 = q1 - q2 * (q2.transpose() * q1);
    spectral_norm_real(&r12).max(spectral_norm_real(&r21))
}

/// Kronecker product `b ⊗ I_s` as a complex matrix.
pub fn kron_identity(b: &DMatrix<f64>, s: usize) -> DMatrix<C64> {
    let (r, c) = b.shape();
    let mut out = DMatrix::<C64>::zeros(r * s, c * s);
    for i in 0..r {
        for j in 0..c {
            let v = b[(i, j)];
            if v != 0.0 {
                for t in 0..s {
                    out[(i * s + t, j * s + t)] = C64::new(v, 0.0);
                }
            }
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e
}

pub fn dvec(v: &[C64]) -> DVector<C64> {
    DVector::from_column_slice(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), czero()]);
        let ns = nullspace(&m, RANK_TOL);
        assert_eq!(ns.ncols(), 2);
        assert!(frob(&(&m * &ns)) < 1e-14);
        let g = ns.adjoint() * &ns;
        assert!(frob(&(g - DMatrix::identity(2, 2))) < 1e-13);
    }

    #[test]
    fn rank_of_zero_is_zero() {
        assert_eq!(rank(&DMatrix::<C64>::zeros(3, 2), RANK_TOL), 0);
    }

    #[test]
    fn principal_sine_detects_equal_spans() {
        let q1 = DMatrix::from_row_slice(3, 1, &[1.0, 0.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q2 = DMatrix::from_row_slice(3, 1, &[-1.0, 0.0, 0.0]);
        let q3 = DMatrix::from_row_slice(3, 1, &[s, s, 0.0]);
        assert!(max_principal_sine(&q1, &q2) < 1e-15);
        assert!((max_principal_sine(&q1, &q3) - s).abs() < 1e-12);
    }
}
