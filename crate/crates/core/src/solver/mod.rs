//! Spectral realization of the Green operator 𝐆₁ on the torus [0, L)^{kn} and
//! the solution u = 𝒟₀*𝒟₀𝒟₀*𝐆₁f of 𝒟₀u = f.
//!
//! The forward FFT maps ∂_{Aj} to +iξ_{Aj}, so the discrete multiplier of an
//! operator is its symbol evaluated at −ξ. The mode at index N/2 of an even
//! axis is kept as the frequency −N/2.

mod fft;
mod grid;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

pub use fft::CubeFft;
pub use grid::{make_bump, make_bump_d0, read_dump, write_dump, DumpHeader, GridField, SupportBox, DUMP_DTYPE};

use crate::dirac_ops::ValueSpace;
use crate::error::{Error, Result};
use crate::linalg::{czero, frob, C64};
use crate::symbols::{BundleMode, SymbolBundle, SymbolContext};

/// Default memory cap for a solve, overridable through [`MEM_CAP_ENV`].
pub const DEFAULT_MEM_CAP: u64 = 2 << 30;
pub const MEM_CAP_ENV: &str = "DIRAC_LAB_MEM_CAP";

/// Memory cap in bytes: the environment override (plain bytes or a K/M/G
/// suffix) or the default.
pub fn mem_cap() -> Result<u64> {
    match std::env::var(MEM_CAP_ENV) {
        Err(_) => Ok(DEFAULT_MEM_CAP),
        Ok(s) => parse_bytes(&s).ok_or_else(|| Error::InvalidArgument(format!("bad {MEM_CAP_ENV} value {s:?}"))),
    }
}

pub fn parse_bytes(s: &str) -> Option<u64> {
    let s = s.trim();
    let (num, mult) = match s.chars().last()? {
        'K' | 'k' => (&s[..s.len() - 1], 1u64 << 10),
        'M' | 'm' => (&s[..s.len() - 1], 1 << 20),
        'G' | 'g' => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    num.trim().parse::<u64>().ok()?.checked_mul(mult)
}

/// Rough peak memory of the solve pipeline: the bump, its derivative, the
/// solution and the spectral work arrays, in complex doubles.
pub fn estimate_solve_bytes(k: usize, n: usize, side: usize, s: usize) -> u64 {
    let pts = (side as u64).saturating_pow((k * n) as u32);
    let per_point = (s + 3 * k * s + 2 * s + 2) as u64;
    pts.saturating_mul(per_point).saturating_mul(16)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectralOp {
    D0,
    D1,
    D0Star,
    Box1,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveDiagnostics {
    /// ‖f̂(0)‖ / ‖f̂‖.
    pub zero_mode_ratio: f64,
    /// ‖𝒟₁f‖ / ‖f‖ measured spectrally.
    pub compat_ratio: f64,
    /// max over nonzero frequencies of ‖σ₀*σ₀σ₀*L₁⁻¹σ₀ − I‖_F.
    pub identity_residual: f64,
}

pub struct SpectralSolver {
    pub ctx: SymbolContext,
    pub side: usize,
    pub period: f64,
    fft: CubeFft,
}

fn mat_vec(m: &DMatrix<C64>, x: &[C64], out: &mut [C64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum();
    }
}

impl SpectralSolver {
    pub fn new(k: usize, n: usize, side: usize, period: f64) -> Result<Self> {
        if side < 2 {
            return Err(Error::InvalidArgument(format!("N must be at least 2 (got {side})")));
        }
        if period <= 0.0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let ctx = SymbolContext::new(k, n)?;
        Ok(SpectralSolver { ctx, side, period, fft: CubeFft::new(k * n, side) })
    }

    pub fn points(&self) -> usize {
        self.fft.len()
    }

    pub fn dim(&self, space: ValueSpace) -> Result<usize> {
        let d = self.ctx.dims();
        match space {
            ValueSpace::V0 => Ok(d[0]),
            ValueSpace::V1 => Ok(d[1]),
            ValueSpace::V2 => Ok(d[2]),
            _ => Err(Error::InvalidArgument(format!("no grid realization of {}", space.name()))),
        }
    }

    /// The point at which symbols are evaluated for FFT bin `p`: −2πm/L.
    pub fn multiplier_point(&self, mut p: usize) -> Vec<f64> {
        let axes = self.ctx.k * self.ctx.n;
        let mut xi = vec![0.0; axes];
        let w = 2.0 * std::f64::consts::PI / self.period;
        for slot in xi.iter_mut().rev() {
            let d = p % self.side;
            p /= self.side;
            let m = if 2 * d < self.side { d as f64 } else { d as f64 - self.side as f64 };
            *slot = -w * m;
        }
        xi
    }

    fn check(&self, f: &GridField, space: ValueSpace) -> Result<()> {
        if f.space != space || f.k != self.ctx.k || f.n != self.ctx.n || f.side != self.side || f.period != self.period
        {
            return Err(Error::SpaceMismatch {
                expected: format!("{} on the ({}, {}, N={}) grid", space.name(), self.ctx.k, self.ctx.n, self.side),
                got: format!("{} on the ({}, {}, N={}) grid", f.space.name(), f.k, f.n, f.side),
            });
        }
        if f.dim != self.dim(space)? {
            return Err(Error::Dimension(format!("{} samples have {} components", space.name(), f.dim)));
        }
        Ok(())
    }

    /// Point-major spectrum of a field.
    fn forward(&self, f: &GridField) -> Vec<C64> {
        let pts = self.points();
        let mut out = vec![czero(); pts * f.dim];
        for c in 0..f.dim {
            let mut comp = f.component(c);
            self.fft.forward(&mut comp);
            for (p, z) in comp.into_iter().enumerate() {
                out[p * f.dim + c] = z;
            }
        }
        out
    }

    fn inverse(&self, spec: &[C64], dim: usize, space: ValueSpace) -> GridField {
        let mut g = GridField::zeros(self.ctx.k, self.ctx.n, self.side, self.period, space, dim);
        for c in 0..dim {
            let mut comp: Vec<C64> = spec.iter().skip(c).step_by(dim).copied().collect();
            self.fft.inverse(&mut comp);
            for (p, z) in comp.into_iter().enumerate() {
                g.values[p * dim + c] = z;
            }
        }
        g
    }

    fn bundle(&self, p: usize) -> SymbolBundle {
        SymbolBundle::build_with(&self.ctx, &self.multiplier_point(p), BundleMode::LowOrder)
            .expect("grid point has the right length")
    }

    /// Forward transform, multiply by the operator's symbol at each frequency,
    /// inverse transform.
    pub fn apply_spectral(&self, op: SpectralOp, f: &GridField) -> Result<GridField> {
        let (from, to) = match op {
            SpectralOp::D0 => (ValueSpace::V0, ValueSpace::V1),
            SpectralOp::D1 => (ValueSpace::V1, ValueSpace::V2),
            SpectralOp::D0Star => (ValueSpace::V1, ValueSpace::V0),
            SpectralOp::Box1 => (ValueSpace::V1, ValueSpace::V1),
        };
        self.check(f, from)?;
        let (din, dout) = (f.dim, self.dim(to)?);
        let spec = self.forward(f);
        let mut out = vec![czero(); spec.len() / din * dout];
        out.par_chunks_mut(dout).enumerate().for_each(|(p, slot)| {
            let b = self.bundle(p);
            let m = match op {
                SpectralOp::D0 => b.sigma0,
                SpectralOp::D1 => b.sigma1,
                SpectralOp::D0Star => b.sigma0.adjoint(),
                SpectralOp::Box1 => b.l1,
            };
            mat_vec(&m, &spec[p * din..(p + 1) * din], slot);
        });
        Ok(self.inverse(&out, dout, to))
    }

    /// Solves 𝒟₀u = f with û(ξ) = σ₀*σ₀σ₀*L₁⁻¹f̂(ξ) and û(0) = 0. Refuses data
    /// whose mean or 𝒟₁f exceeds `tol` relative to ‖f‖.
    pub fn solve_d0(&self, f: &GridField, tol: f64) -> Result<(GridField, SolveDiagnostics)> {
        self.check(f, ValueSpace::V1)?;
        let (din, dout) = (f.dim, self.dim(ValueSpace::V0)?);
        let spec = self.forward(f);
        let total = spec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let zero = spec[..din].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let zero_mode_ratio = if total == 0.0 { 0.0 } else { zero / total };
        let mut out = vec![czero(); spec.len() / din * dout];
        // per frequency: (‖σ₁f̂‖², identity residual)
        let mut stats = vec![(0.0f64, 0.0f64); self.points()];
        out.par_chunks_mut(dout).zip(stats.par_iter_mut()).enumerate().skip(1).for_each(|(p, (slot, st))| {
            let b = self.bundle(p);
            let x = &spec[p * din..(p + 1) * din];
            let mut r = vec![czero(); b.sigma1.nrows()];
            mat_vec(&b.sigma1, x, &mut r);
            let g1 = b.l1.clone().lu().try_inverse().expect("L1 is invertible away from xi = 0");
            let s0h = b.sigma0.adjoint();
            let m = &s0h * &b.sigma0 * &s0h * g1;
            let id = frob(&(&m * &b.sigma0 - DMatrix::identity(dout, dout)));
            mat_vec(&m, x, slot);
            *st = (r.iter().map(|z| z.norm_sqr()).sum(), id);
        });
        let compat = stats.iter().map(|s| s.0).sum::<f64>().sqrt();
        let identity_residual = stats.iter().map(|s| s.1).fold(0.0, f64::max);
        let compat_ratio = if total == 0.0 { 0.0 } else { compat / total };
        let diag = SolveDiagnostics { zero_mode_ratio, compat_ratio, identity_residual };
        if zero_mode_ratio > tol {
            return Err(Error::Compatibility(format!("data has nonzero mean (ratio {zero_mode_ratio:.3e})")));
        }
        if compat_ratio > tol {
            return Err(Error::Compatibility(format!("D1 f does not vanish (ratio {compat_ratio:.3e})")));
        }
        Ok((self.inverse(&out, dout, ValueSpace::V0), diag))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HartogsReport {
    /// False when no grid point lies at distance ≥ margin from the support box.
    pub has_exterior: bool,
    pub margin: f64,
    pub exterior_points: usize,
    pub exterior_max: f64,
    pub global_max: f64,
    /// exterior_max / global_max (0 for u = 0).
    pub ratio: Option<f64>,
}

fn exterior_mask(u: &GridField, b: &SupportBox, margin: f64) -> Vec<bool> {
    let mut x = vec![0.0; u.axes()];
    (0..u.points())
        .map(|p| {
            u.coords(p, &mut x);
            b.torus_distance(&x, u.period) >= margin
        })
        .collect()
}

/// Size of u on the grid points at torus distance ≥ `margin` from `support`.
pub fn hartogs_report(u: &GridField, support: &SupportBox, margin: f64) -> HartogsReport {
    let mask = exterior_mask(u, support, margin);
    let exterior_points = mask.iter().filter(|&&m| m).count();
    let norm_at = |p: usize| u.at(p).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let exterior_max = (0..u.points()).filter(|&p| mask[p]).map(norm_at).fold(0.0, f64::max);
    let global_max = u.max_abs();
    let has_exterior = exterior_points > 0;
    let ratio = if !has_exterior {
        None
    } else if global_max == 0.0 {
        Some(0.0)
    } else {
        Some(exterior_max / global_max)
    };
    HartogsReport { has_exterior, margin, exterior_points, exterior_max, global_max, ratio }
}

/// Removes the torus kernel of 𝒟₀ (the constants) by making the mean of u
/// over the exterior region zero. Returns the normalized field and the
/// constant that was subtracted.
pub fn fix_exterior_constant(u: &GridField, support: &SupportBox, margin: f64) -> (GridField, DVector<C64>) {
    let mask = exterior_mask(u, support, margin);
    let count = mask.iter().filter(|&&m| m).count();
    let mut mean = DVector::<C64>::zeros(u.dim);
    if count == 0 {
        return (u.clone(), mean);
    }
    for p in (0..u.points()).filter(|&p| mask[p]) {
        for (c, z) in u.at(p).iter().enumerate() {
            mean[c] += z;
        }
    }
    mean /= C64::new(count as f64, 0.0);
    let mut out = u.clone();
    for chunk in out.values.chunks_mut(u.dim) {
        for (c, z) in chunk.iter_mut().enumerate() {
            *z -= mean[c];
        }
    }
    (out, mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_byte_suffixes() {
        assert_eq!(parse_bytes("2G"), Some(2 << 30));
        assert_eq!(parse_bytes("512 M"), Some(512 << 20));
        assert_eq!(parse_bytes("1000"), Some(1000));
        assert_eq!(parse_bytes("x"), None);
    }

    #[test]
    fn nyquist_bin_is_negative() {
        let s = SpectralSolver::new(2, 1, 8, 2.0 * std::f64::consts::PI).unwrap();
        // bin (4, 3): m = (-4, 3), evaluated at -m
        assert_eq!(s.multiplier_point(4 * 8 + 3), vec![4.0, -3.0]);
    }

    #[test]
    fn zero_field_gives_zero() {
        let s = SpectralSolver::new(2, 2, 4, 2.0 * std::f64::consts::PI).unwrap();
        let f = GridField::zeros(2, 2, 4, s.period, ValueSpace::V1, 2);
        let (u, _) = s.solve_d0(&f, 1e-8).unwrap();
        assert_eq!(u.norm(), 0.0);
        assert_eq!(s.apply_spectral(SpectralOp::D1, &f).unwrap().norm(), 0.0);
    }

    #[test]
    fn whole_cell_support_has_no_exterior() {
        let u = GridField::zeros(2, 1, 4, 1.0, ValueSpace::V0, 1);
        let b = SupportBox { lo: vec![0.0; 2], hi: vec![1.0; 2] };
        let r = hartogs_report(&u, &b, 0.1);
        assert!(!r.has_exterior);
        assert!(r.ratio.is_none());
    }
}
