//! Residual reports for connection matrices.
//!
//! For each sample `z` the source pair and the target pair are evaluated
//! independently (series on their discs, continuation elsewhere) and the
//! row residuals `|from_i(z) - Σ_j C_ij to_j(z)|` are collected.

use super::continuation::{evaluate_anywhere, CONTINUATION_TOL};
use crate::connection::{matrix, BranchTag, ConnectionMatrix, MatrixKind};
use crate::heun_series::SubclassParams;
use crate::Result;
use num_complex::Complex64;

/// Both pairs evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleValues {
    pub z: Complex64,
    pub from: [Complex64; 2],
    pub to: [Complex64; 2],
}

pub fn sample_values(kind: MatrixKind, s: &SubclassParams, samples: &[Complex64], tol: f64) -> Result<Vec<SampleValues>> {
    let (from, to) = (kind.from_pair(), kind.to_pair());
    samples
        .iter()
        .map(|&z| {
            Ok(SampleValues {
                z,
                from: [
                    evaluate_anywhere(from[0], s, z, tol)?,
                    evaluate_anywhere(from[1], s, z, tol)?,
                ],
                to: [
                    evaluate_anywhere(to[0], s, z, tol)?,
                    evaluate_anywhere(to[1], s, z, tol)?,
                ],
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowResidual {
    pub max: f64,
    pub mean: f64,
    pub worst: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub kind: MatrixKind,
    pub branch_tag: BranchTag,
    pub samples: Vec<Complex64>,
    pub rows: [RowResidual; 2],
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.rows[0].max.max(self.rows[1].max)
    }
    pub fn mean(&self) -> f64 {
        0.5 * (self.rows[0].mean + self.rows[1].mean)
    }
}

pub fn residual_report(m: &ConnectionMatrix, values: &[SampleValues]) -> ResidualReport {
    let rows = [0, 1].map(|row| {
        let mut max = 0.0f64;
        let mut sum = 0.0;
        let mut worst = Complex64::new(f64::NAN, f64::NAN);
        for v in values {
            let r = (v.from[row] - m.apply(v.to)[row]).norm();
            sum += r;
            if r >= max {
                max = r;
                worst = v.z;
            }
        }
        RowResidual {
            max,
            mean: if values.is_empty() { 0.0 } else { sum / values.len() as f64 },
            worst,
        }
    });
    ResidualReport {
        kind: m.kind,
        branch_tag: m.branch_tag,
        samples: values.iter().map(|v| v.z).collect(),
        rows,
    }
}

/// Row residuals of the matrix of `kind` under `branch` at `samples`.
pub fn verify_matrix(
    kind: MatrixKind,
    s: &SubclassParams,
    branch: BranchTag,
    samples: &[Complex64],
) -> Result<ResidualReport> {
    let m = matrix(kind, s, branch)?;
    let values = sample_values(kind, s, samples, CONTINUATION_TOL)?;
    Ok(residual_report(&m, &values))
}

/// Reports for both branch tags, sharing one set of evaluations.
pub fn verify_both_branches(
    kind: MatrixKind,
    s: &SubclassParams,
    samples: &[Complex64],
) -> Result<[ResidualReport; 2]> {
    let values = sample_values(kind, s, samples, CONTINUATION_TOL)?;
    let plus = matrix(kind, s, BranchTag::Plus)?;
    let minus = matrix(kind, s, BranchTag::Minus)?;
    Ok([residual_report(&plus, &values), residual_report(&minus, &values)])
}

/// Default sample points: real points of `(0.2, 0.8)` for `C0+`; the
/// mirrored interval lifted to `Im z = 0.05` (off the cut of `z^{1-γ}`) for
/// `C0-`; points of `|z| = 1.6` in the upper half-plane for `C∞±`.
pub fn default_samples(kind: MatrixKind) -> Vec<Complex64> {
    match kind {
        MatrixKind::ZeroPlus => (0..7).map(|i| Complex64::new(0.2 + 0.1 * i as f64, 0.0)).collect(),
        MatrixKind::ZeroMinus => (0..7).map(|i| Complex64::new(-0.8 + 0.1 * i as f64, 0.05)).collect(),
        MatrixKind::InfPlus | MatrixKind::InfMinus => (0..6)
            .map(|i| Complex64::from_polar(1.6, (20.0 + 28.0 * i as f64).to_radians()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_plus_rows_on_the_default_samples() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        let r = verify_matrix(MatrixKind::ZeroPlus, &s, BranchTag::Plus, &default_samples(MatrixKind::ZeroPlus)).unwrap();
        assert!(r.max() <= 1e-10, "{r:?}");
    }

    #[test]
    fn zero_minus_branch_matters() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        let [plus, minus] = verify_both_branches(MatrixKind::ZeroMinus, &s, &default_samples(MatrixKind::ZeroMinus)).unwrap();
        assert!(plus.max() <= 1e-10, "{plus:?}");
        assert!(minus.rows[1].max > 1e-3);
        assert!(minus.rows[0].max <= 1e-10);
    }
}
