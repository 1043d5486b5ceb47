use nalgebra::DMatrix;

use super::{max_of, record_residual, rel, Tol};
use crate::error::Result;
use crate::linalg::{C64, RANK_TOL};
use crate::report::CheckRecord;
use crate::weyl::{
    check_membership, flatten, measured_n_lambda, unflatten, weyl_dimension, young_symmetrizer, Partition, Tableau,
    WeylSpace,
};

fn column(b: &DMatrix<f64>, j: usize) -> Vec<f64> {
    b.column(j).iter().copied().collect()
}

/// Largest violation of the index symmetries every module element must have:
/// h_ABC = h_ACB for 21; symmetric in D,B,C and skew in E,A for 311.
fn symmetry_residual(p: Partition, k: usize, h: &[f64]) -> f64 {
    let m = p.order();
    let mut worst = 0.0f64;
    for o in 0..h.len() {
        let i = unflatten(o, k, m);
        let swaps: Vec<(Vec<usize>, f64)> = match p {
            Partition::P21 => vec![(vec![i[0], i[2], i[1]], 1.0)],
            Partition::P22 => Vec::new(),
            Partition::P311 => vec![
                (vec![i[0], i[3], i[2], i[1], i[4]], 1.0),
                (vec![i[0], i[1], i[2], i[4], i[3]], 1.0),
                (vec![i[2], i[1], i[0], i[3], i[4]], -1.0),
            ],
        };
        for (j, sign) in swaps {
            worst = worst.max((h[o] - sign * h[flatten(&j, k)]).abs());
        }
    }
    worst
}

/// Idempotency of C_λ and 𝔠_λ, equality of their images, module dimensions
/// against the Weyl dimension formula, and the module characterizations on
/// the computed bases.
pub fn weyl_suite(ks: &[usize], tol: Tol) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for &k in ks {
        let mut dims = serde_json::Map::new();
        for p in Partition::ALL {
            let tag = format!("[k={k},λ={}]", p.label());
            let w = WeylSpace::new(p, k)?;
            let pn = w.projector.frobenius();
            out.push(record_residual(
                format!("weyl.projector_idempotent{tag}"),
                "C_λ² = C_λ",
                rel(w.projector.idempotency_residual(), pn),
                tol.or(1e-10),
            ));
            let y = young_symmetrizer(k, p)?;
            out.push(record_residual(
                format!("weyl.symmetrizer_idempotent{tag}"),
                "(𝔠_λ/n_λ)² = 𝔠_λ/n_λ",
                rel(y.idempotency_residual(), y.frobenius()),
                tol.or(1e-10),
            ));
            out.push(record_residual(
                format!("weyl.image_equality{tag}"),
                "image C_λ = image 𝔠_λ",
                w.projector.image_distance(&y, RANK_TOL),
                tol.or(1e-8),
            ));
            let oracle = weyl_dimension(p.shape(), k);
            dims.insert(p.label().to_string(), w.d.into());
            out.push(CheckRecord::exact(
                format!("weyl.dimension{tag}"),
                "dim V_λ = ∏(λᵢ−λⱼ+j−i)/(j−i)",
                serde_json::json!({ "dim": w.d, "oracle": oracle }),
                w.d == oracle,
            ));
            let gram = w.basis.transpose() * &w.basis;
            let orth = (gram - DMatrix::identity(w.d, w.d)).norm();
            let fixed = max_of((0..w.d).map(|j| {
                let c = column(&w.basis, j);
                let pc = w.projector.apply(&c);
                pc.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
            }));
            out.push(record_residual(
                format!("weyl.basis_orthonormal{tag}"),
                "BᵀB = I, C_λB = B",
                orth.max(fixed),
                tol.or(1e-10),
            ));
            let member = max_of((0..w.d).map(|j| {
                let c: Vec<C64> = column(&w.basis, j).into_iter().map(|x| C64::new(x, 0.0)).collect();
                check_membership(p, k, &c).expect("basis column has the module's order")
            }));
            out.push(record_residual(
                format!("weyl.membership{tag}"),
                "basis columns satisfy the V_λ characterization",
                member,
                tol.or(1e-10),
            ));
            if p != Partition::P22 {
                let sym = max_of((0..w.d).map(|j| symmetry_residual(p, k, &column(&w.basis, j))));
                let anchor = match p {
                    Partition::P21 => "h_ABC = h_ACB",
                    _ => "h_EDABC symmetric in D,B,C and skew in E,A",
                };
                out.push(record_residual(format!("weyl.index_symmetry{tag}"), anchor, sym, tol.or(1e-10)));
            }
            let want = 1.0 / Tableau::of(p).factor;
            let n_lambda = measured_n_lambda(k, p);
            out.push(CheckRecord::exact(
                format!("weyl.n_lambda{tag}"),
                "𝔠_λ² = n_λ 𝔠_λ",
                serde_json::json!({ "measured": n_lambda, "normalization": want }),
                n_lambda.is_none_or(|v| (v - want).abs() <= 1e-9 * want),
            ));
        }
        out.push(CheckRecord::exact(
            format!("weyl.dims[k={k}]"),
            "dimensions of (V₂₁, V₂₂, V₃₁₁)",
            serde_json::Value::Object(dims),
            true,
        ));
    }
    Ok(out)
}
