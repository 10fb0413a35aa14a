//! Limit sequences for `c12` built from the coefficients of `y01`.
//!
//! With `A_k` from the general recurrence,
//!
//! ```text
//! s_n = Γ(2n+1) Γ(δ-1) / Γ(2n-1+δ) · A_{2n}   → c⁺₁₂ + c⁻₁₂ = 2 q2
//! o_n = Γ(2n+2) Γ(δ-1) / Γ(2n+δ)   · A_{2n+1} → c⁺₁₂ - c⁻₁₂ = 0
//! ```
//!
//! The gamma prefactors are accumulated as products of their one-step ratios,
//! so no gamma function is evaluated. Both sequences admit expansions in
//! powers of `1/n`, which Richardson extrapolation removes level by level.

use crate::connection::q2;
use crate::heun_series::{general_coefficients, SubclassParams};
use crate::{Error, Result};
use num_complex::Complex64;

/// Richardson levels applied on `n/8, n/4, n/2, n`.
pub const RICHARDSON_LEVELS: usize = 3;

/// `s_0 .. s_{n_max}`.
pub fn even_sequence(s: &SubclassParams, n_max: usize) -> Result<Vec<Complex64>> {
    let a = general_coefficients(&s.heun(), 2 * n_max + 1)?;
    let d = s.delta();
    let mut weight = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(a[0]);
    for n in 1..=n_max {
        let m = 2.0 * n as f64;
        weight *= m * (m - 1.0) / ((m - 3.0 + d) * (m - 2.0 + d));
        out.push(weight * a[2 * n]);
    }
    Ok(out)
}

/// `o_0 .. o_{n_max}`.
pub fn odd_sequence(s: &SubclassParams, n_max: usize) -> Result<Vec<Complex64>> {
    let a = general_coefficients(&s.heun(), 2 * n_max + 1)?;
    let d = s.delta();
    let mut weight = (d - 1.0).inv();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(weight * a[1]);
    for n in 1..=n_max {
        let m = 2.0 * n as f64;
        weight *= (m + 1.0) * m / ((m - 2.0 + d) * (m - 1.0 + d));
        out.push(weight * a[2 * n + 1]);
    }
    Ok(out)
}

/// Richardson table on `seq[n/8], seq[n/4], seq[n/2], seq[n]`; returns the
/// last two diagonal extrapolants `(T_{0,2}, T_{0,3})`.
pub fn richardson(seq: &[Complex64], n: usize) -> Option<(Complex64, Complex64)> {
    if n < 8 || n % 8 != 0 || n >= seq.len() {
        return None;
    }
    let mut column: Vec<Complex64> = (0..=RICHARDSON_LEVELS)
        .map(|j| seq[(n >> RICHARDSON_LEVELS) << j])
        .collect();
    let mut previous_top = column[column.len() - 1];
    for m in 1..=RICHARDSON_LEVELS {
        let factor = (1u64 << m) as f64;
        previous_top = column[column.len() - 1];
        column = column
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    Some((previous_top, column[0]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    /// Extrapolated limit of the even sequence, estimating `2 q2`.
    pub even_limit: Complex64,
    /// Extrapolated limit of the odd sequence, estimating `0`.
    pub odd_limit: Complex64,
    /// `|T_{0,3} - T_{0,2}|` for the even sequence.
    pub even_change: f64,
    pub n_max: usize,
}

fn check_limit_preconditions(s: &SubclassParams, n_max: usize) -> Result<usize> {
    s.admissibility()?;
    if !s.in_theorem_domain() {
        return Err(Error::Divergence((1.0 - s.delta()).re));
    }
    if n_max < 8 {
        return Err(Error::InvalidParameters(format!("n_max = {n_max} must be at least 8")));
    }
    Ok(n_max - n_max % 8)
}

/// Extrapolated even and odd limits; fails with `NonConvergence` when the last
/// two even extrapolants differ by more than `tol · max(1, |limit|)`.
pub fn limit_sequence_c12(s: &SubclassParams, n_max: usize, tol: f64) -> Result<LimitEstimate> {
    let n = check_limit_preconditions(s, n_max)?;
    let even = even_sequence(s, n)?;
    let odd = odd_sequence(s, n)?;
    let (e2, e3) = richardson(&even, n).expect("n is a positive multiple of 8");
    let (_, o3) = richardson(&odd, n).expect("n is a positive multiple of 8");
    let change = (e3 - e2).norm();
    if change > tol * e3.norm().max(1.0) {
        return Err(Error::NonConvergence {
            iterations: n,
            residual: change,
        });
    }
    Ok(LimitEstimate {
        even_limit: e3,
        odd_limit: o3,
        even_change: change,
        n_max: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub n: usize,
    pub raw: Complex64,
    /// Present when `n` is a multiple of 8.
    pub extrapolated: Option<Complex64>,
    /// `|raw - 2 q2| / |2 q2|` (absolute when `q2 = 0`).
    pub raw_error: f64,
    pub extrapolated_error: Option<f64>,
}

/// Rows `n = 1 ..= n_max` of the even sequence against `2 q2`.
pub fn limit_table(s: &SubclassParams, n_max: usize) -> Result<Vec<LimitRow>> {
    check_limit_preconditions(s, n_max.max(8))?;
    let target = 2.0 * q2(s.alpha(), s.beta(), s.gamma())?;
    let scale = if target.norm() > 0.0 { target.norm() } else { 1.0 };
    let even = even_sequence(s, n_max)?;
    Ok((1..=n_max)
        .map(|n| {
            let extrapolated = richardson(&even, n).map(|(_, t)| t);
            LimitRow {
                n,
                raw: even[n],
                extrapolated,
                raw_error: (even[n] - target).norm() / scale,
                extrapolated_error: extrapolated.map(|t| (t - target).norm() / scale),
            }
        })
        .collect())
}

/// Observed ratios `err(2n)/err(n)` of the raw even sequence; `≈ 1/2` for
/// first-order convergence.
pub fn raw_error_ratios(s: &SubclassParams, ns: &[usize]) -> Result<Vec<f64>> {
    let n_max = ns.iter().max().copied().unwrap_or(0) * 2;
    let target = 2.0 * q2(s.alpha(), s.beta(), s.gamma())?;
    let even = even_sequence(s, n_max)?;
    Ok(ns
        .iter()
        .map(|&n| (even[2 * n] - target).norm() / (even[n] - target).norm())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::specfun::gamma;

    #[test]
    fn even_sequence_matches_gamma_form() {
        let s = SubclassParams::new(c64(0.5, 0.1), c64(0.8, 0.0), c64(0.9, -0.2));
        let seq = even_sequence(&s, 12).unwrap();
        let a = general_coefficients(&s.heun(), 24).unwrap();
        let d = s.delta();
        for n in [1usize, 5, 12] {
            let m = 2.0 * n as f64;
            let w = gamma(c64(m + 1.0, 0.0)).unwrap() * gamma(d - 1.0).unwrap() / gamma(d + m - 1.0).unwrap();
            assert!((seq[n] - w * a[2 * n]).norm() < 1e-12 * seq[n].norm());
        }
        assert_eq!(seq[0], c64(1.0, 0.0));
    }

    #[test]
    fn odd_sequence_is_exactly_zero() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        assert!(odd_sequence(&s, 100).unwrap().iter().all(|v| *v == c64(0.0, 0.0)));
    }

    #[test]
    fn even_limit_reproduces_twice_q2() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        let est = limit_sequence_c12(&s, 200, 1e-6).unwrap();
        let target = 2.0 * q2(s.alpha(), s.beta(), s.gamma()).unwrap();
        assert!((est.even_limit - target).norm() <= 1e-6 * target.norm(), "{} vs {target}", est.even_limit);
        assert_eq!(est.odd_limit, c64(0.0, 0.0));
    }

    #[test]
    fn alpha_zero_sequence_is_one_then_zero() {
        let s = SubclassParams::real(0.0, 0.8, 0.9);
        let seq = even_sequence(&s, 20).unwrap();
        assert_eq!(seq[0], c64(1.0, 0.0));
        assert!(seq[1..].iter().all(|v| *v == c64(0.0, 0.0)));
        let est = limit_sequence_c12(&s, 64, 1e-12).unwrap();
        assert_eq!(est.even_limit, c64(0.0, 0.0));
    }

    #[test]
    fn richardson_is_exact_on_cubic_in_inverse_n() {
        let seq: Vec<Complex64> = (0..=64)
            .map(|n| {
                let x = 1.0 / (n.max(1) as f64);
                c64(2.0 + 3.0 * x - x * x + 0.5 * x * x * x, -1.0 + x)
            })
            .collect();
        let (_, t) = richardson(&seq, 64).unwrap();
        assert!((t - c64(2.0, -1.0)).norm() < 1e-12);
        assert!(richardson(&seq, 12).is_none());
    }

    #[test]
    fn raw_sequence_converges_at_first_order() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        for r in raw_error_ratios(&s, &[100, 200]).unwrap() {
            assert!((0.4..=0.6).contains(&r), "{r}");
        }
    }

    #[test]
    fn table_rows() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        let t = limit_table(&s, 40).unwrap();
        assert_eq!(t.len(), 40);
        assert!(t[7].extrapolated.is_some() && t[6].extrapolated.is_none());
        assert!(t[39].extrapolated_error.unwrap() < t[39].raw_error);
    }
}
