//! Periodic sample grids on the cell [0, L)^{kn}.

use std::io::{BufRead, Write};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::clifford::CliffordRep;
use crate::dirac_ops::ValueSpace;
use crate::error::{Error, Result};
use crate::linalg::{czero, C64};

/// Axis-aligned box [lo, hi] in the cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SupportBox {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| *v >= *l && *v <= *h)
    }

    /// Euclidean distance from `x` to the box on the torus of period `period`.
    pub fn torus_distance(&self, x: &[f64], period: f64) -> f64 {
        let mut acc = 0.0;
        for (v, (l, h)) in x.iter().zip(self.lo.iter().zip(&self.hi)) {
            if h - l >= period {
                continue;
            }
            let d = [-period, 0.0, period]
                .iter()
                .map(|s| {
                    let y = v + s;
                    if y < *l {
                        l - y
                    } else if y > *h {
                        y - h
                    } else {
                        0.0
                    }
                })
                .fold(f64::INFINITY, f64::min);
            acc += d * d;
        }
        acc.sqrt()
    }
}

/// Samples of a 𝒱ⱼ-valued field, point-major with components fastest.
/// 𝒱₂ samples use compressed Weyl coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub k: usize,
    pub n: usize,
    /// Points per axis.
    pub side: usize,
    pub period: f64,
    pub space: ValueSpace,
    pub dim: usize,
    pub values: Vec<C64>,
    /// Declared support for compactly supported fields.
    pub support: Option<SupportBox>,
}

impl GridField {
    pub fn zeros(k: usize, n: usize, side: usize, period: f64, space: ValueSpace, dim: usize) -> Self {
        let pts = side.pow((k * n) as u32);
        GridField { k, n, side, period, space, dim, values: vec![czero(); pts * dim], support: None }
    }

    pub fn axes(&self) -> usize {
        self.k * self.n
    }

    pub fn points(&self) -> usize {
        self.side.pow(self.axes() as u32)
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.side as f64
    }

    /// Coordinates of grid point `p`.
    pub fn coords(&self, mut p: usize, out: &mut [f64]) {
        let h = self.spacing();
        for slot in out.iter_mut().rev() {
            *slot = (p % self.side) as f64 * h;
            p /= self.side;
        }
    }

    pub fn at(&self, p: usize) -> &[C64] {
        &self.values[p * self.dim..(p + 1) * self.dim]
    }

    /// Marks the field as supported in `b`; fails if any sample outside is nonzero.
    pub fn with_support(mut self, b: SupportBox) -> Result<Self> {
        let mut x = vec![0.0; self.axes()];
        for p in 0..self.points() {
            self.coords(p, &mut x);
            if !b.contains(&x) && self.at(p).iter().any(|z| *z != czero()) {
                return Err(Error::Precondition("field is nonzero outside its declared support".into()));
            }
        }
        self.support = Some(b);
        Ok(self)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max over points of the Euclidean norm of the sample.
    pub fn max_abs(&self) -> f64 {
        self.values.chunks(self.dim).map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &GridField) -> Result<GridField> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.support = None;
        out.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn inner(&self, other: &GridField) -> Result<C64> {
        self.check_same_shape(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_same_shape(&self, other: &GridField) -> Result<()> {
        if self.space != other.space || self.values.len() != other.values.len() || self.dim != other.dim {
            return Err(Error::SpaceMismatch {
                expected: format!("{} with {} samples", self.space.name(), self.values.len()),
                got: format!("{} with {} samples", other.space.name(), other.values.len()),
            });
        }
        Ok(())
    }

    /// Extracts component `c` as a contiguous array over grid points.
    pub fn component(&self, c: usize) -> Vec<C64> {
        self.values.iter().skip(c).step_by(self.dim).copied().collect()
    }
}

/// φ(x) = s·exp(−1/(1−r²)) for r = |x − c|/radius < 1, exactly 0 elsewhere.
/// The ball must sit in the cell with a margin of at least one radius.
pub fn make_bump(
    k: usize,
    n: usize,
    side: usize,
    period: f64,
    center: &[f64],
    radius: f64,
    direction: &DVector<C64>,
) -> Result<GridField> {
    let axes = k * n;
    if center.len() != axes {
        return Err(Error::Dimension(format!("center has {} entries, expected {axes}", center.len())));
    }
    if radius <= 0.0 || center.iter().any(|&c| c - 2.0 * radius < 0.0 || c + 2.0 * radius > period) {
        return Err(Error::InvalidArgument(format!(
            "ball of radius {radius} does not fit in the cell of period {period} with margin {radius}"
        )));
    }
    let dim = direction.len();
    let mut f = GridField::zeros(k, n, side, period, ValueSpace::V0, dim);
    let mut x = vec![0.0; axes];
    for p in 0..f.points() {
        f.coords(p, &mut x);
        let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() / (radius * radius);
        if r2 < 1.0 {
            let v = (-1.0 / (1.0 - r2)).exp();
            for (d, s) in direction.iter().enumerate() {
                f.values[p * dim + d] = s * v;
            }
        }
    }
    let b =
        SupportBox { lo: center.iter().map(|c| c - radius).collect(), hi: center.iter().map(|c| c + radius).collect() };
    f.with_support(b)
}

/// 𝒟₀φ for the bump of [`make_bump`], differentiated in closed form and
/// sampled: (𝒟₀φ)_A = Σⱼ γⱼ s ∂_{Aj}ψ with
/// ∂_{Aj}ψ = −2ψ (x_{Aj} − c_{Aj}) / (radius² (1 − r²)²).
#[allow(clippy::too_many_arguments)]
pub fn make_bump_d0(
    rep: &CliffordRep,
    k: usize,
    n: usize,
    side: usize,
    period: f64,
    center: &[f64],
    radius: f64,
    direction: &DVector<C64>,
) -> Result<GridField> {
    let phi = make_bump(k, n, side, period, center, radius, direction)?;
    let s = direction.len();
    if s != rep.s_dim || rep.n != n {
        return Err(Error::Dimension(format!("direction has {s} entries, spinors have {}", rep.s_dim)));
    }
    let cols: Vec<DVector<C64>> = rep.gamma_plus.iter().map(|g| g * direction).collect();
    let mut f = GridField::zeros(k, n, side, period, ValueSpace::V1, k * s);
    let mut x = vec![0.0; k * n];
    for p in 0..f.points() {
        f.coords(p, &mut x);
        let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>() / (radius * radius);
        if r2 >= 1.0 {
            continue;
        }
        let psi = (-1.0 / (1.0 - r2)).exp();
        let w = -2.0 * psi / (radius * radius * (1.0 - r2) * (1.0 - r2));
        for a in 0..k {
            for j in 0..n {
                let d = w * (x[a * n + j] - center[a * n + j]);
                for (t, z) in cols[j].iter().enumerate() {
                    f.values[p * k * s + a * s + t] += z * d;
                }
            }
        }
    }
    f.support = phi.support;
    Ok(f)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DumpHeader {
    pub k: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub side: usize,
    #[serde(rename = "L")]
    pub period: f64,
    pub space: String,
    pub dtype: String,
    pub dim: usize,
}

pub const DUMP_DTYPE: &str = "complex128-le";

/// Writes one JSON header line followed by little-endian (re, im) f64 pairs,
/// point-major with components fastest.
pub fn write_dump<W: Write>(mut w: W, f: &GridField) -> Result<()> {
    let header = DumpHeader {
        k: f.k,
        n: f.n,
        side: f.side,
        period: f.period,
        space: f.space.name().to_string(),
        dtype: DUMP_DTYPE.to_string(),
        dim: f.dim,
    };
    let line = serde_json::to_string(&header).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(f.values.len() * 16);
    for z in &f.values {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads a dump back as (header, samples).
pub fn read_dump<R: BufRead>(mut r: R) -> Result<(DumpHeader, Vec<C64>)> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: DumpHeader =
        serde_json::from_str(line.trim_end()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() % 16 != 0 {
        return Err(Error::InvalidArgument("truncated payload".into()));
    }
    let vals = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            C64::new(re, im)
        })
        .collect();
    Ok((header, vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spinor() -> DVector<C64> {
        DVector::from_element(1, C64::new(1.0, 0.0))
    }

    #[test]
    fn bump_center_and_outside() {
        let pi = std::f64::consts::PI;
        let f = make_bump(1, 2, 8, 2.0 * pi, &[pi, pi], 1.0, &spinor()).unwrap();
        // grid point (4, 4) is the center
        let p = 4 * 8 + 4;
        assert!((f.at(p)[0].re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(f.at(0)[0], czero());
    }

    #[test]
    fn bump_must_fit() {
        assert!(make_bump(1, 2, 8, 6.0, &[1.0, 3.0], 1.0, &spinor()).is_err());
    }

    #[test]
    fn torus_distance_wraps() {
        let b = SupportBox { lo: vec![0.5], hi: vec![1.0] };
        assert!((b.torus_distance(&[5.9], 6.0) - 0.6).abs() < 1e-12);
        assert_eq!(b.torus_distance(&[0.7], 6.0), 0.0);
    }

    #[test]
    fn dump_round_trip() {
        let pi = std::f64::consts::PI;
        let f = make_bump(1, 2, 8, 2.0 * pi, &[pi, pi], 1.0, &spinor()).unwrap();
        let mut buf = Vec::new();
        write_dump(&mut buf, &f).unwrap();
        let (h, v) = read_dump(std::io::Cursor::new(buf)).unwrap();
        assert_eq!((h.k, h.n, h.side, h.dim), (1, 2, 8, 1));
        assert_eq!(v, f.values);
    }
}
