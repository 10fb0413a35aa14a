//! Complex special-function kernels: log-gamma, gamma, reciprocal gamma,
//! Pochhammer symbol, Euler Beta and Gauss's ₂F₁ summed at unit argument.
//!
//! The gamma kernel is the 14-term Lanczos approximation with `g = 671/128`
//! published in Numerical Recipes, 3rd edition (routine `gammln`, §6.1).
//! It is accurate to roughly machine precision for `Re z >= 1/2`; the left
//! half-plane is reached by reflection (gamma) or upward recurrence (log-gamma).

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// A value counts as an integer when it is closer than this to one.
pub const INTEGER_TOL: f64 = 1e-9;

const LANCZOS_SHIFT: f64 = 671.0 / 128.0;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Nearest integer to `z` if `z` is within [`INTEGER_TOL`] of it.
pub fn near_integer(z: Complex64) -> Option<i64> {
    let n = z.re.round();
    if (z - Complex64::new(n, 0.0)).norm() < INTEGER_TOL {
        Some(n as i64)
    } else {
        None
    }
}

/// True when `z` is (within tolerance) one of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    matches!(near_integer(z), Some(n) if n <= 0)
}

/// `sin(πz)` with exact reduction of the real part, so that the zeros at the
/// integers are reproduced without the rounding error of `π * z`.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let r = z.re - n;
    let (s, c) = (PI * r).sin_cos();
    let y = PI * z.im;
    let v = Complex64::new(s * y.cosh(), c * y.sinh());
    if (n as i64).rem_euclid(2) == 0 {
        v
    } else {
        -v
    }
}

fn lanczos_log_gamma(z: Complex64) -> Complex64 {
    let shifted = z + LANCZOS_SHIFT;
    let head = (z + 0.5) * shifted.ln() - shifted;
    let mut series = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS_COEFFS.iter().enumerate() {
        series += *c / (z + (j as f64 + 1.0));
    }
    head + (series * SQRT_TWO_PI).ln() - z.ln()
}

/// Log-gamma on the principal sheet: analytic in ℂ minus (-∞, 0], real on
/// the positive axis, and satisfying `log_gamma(z+1) = ln z + log_gamma(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        return Ok(lanczos_log_gamma(z));
    }
    let shift = (0.5 - z.re).ceil() as usize;
    let mut acc = lanczos_log_gamma(z + shift as f64);
    for k in 0..shift {
        acc -= (z + k as f64).ln();
    }
    Ok(acc)
}

/// Γ(z). Uses the reflection formula for `Re z < 1/2`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        Ok(lanczos_log_gamma(z).exp())
    } else {
        let reflected = lanczos_log_gamma(1.0 - z).exp();
        Ok(PI / (sin_pi(z) * reflected))
    }
}

/// 1/Γ(z), entire: exactly zero at the non-positive integers.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-lanczos_log_gamma(z)).exp()
    } else {
        sin_pi(z) * lanczos_log_gamma(1.0 - z).exp() / PI
    }
}

/// Rising factorial `x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (x + k as f64))
}

/// Gauss's summation: `₂F₁(p, q; r; 1) = Γ(r-p-q)Γ(r) / (Γ(r-p)Γ(r-q))`.
///
/// Requires `Re(r - p - q) > 0`. Denominator poles give an exact zero.
pub fn gauss_2f1_at_one(p: Complex64, q: Complex64, r: Complex64) -> Result<Complex64> {
    let excess = r - (p + q);
    if excess.re <= 0.0 {
        return Err(Error::Divergence(excess.re));
    }
    let den_a = r - p;
    let den_b = r - q;
    if is_nonpositive_integer(den_a) || is_nonpositive_integer(den_b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let num = gamma(excess)? * gamma(r)?;
    let den = gamma(den_a)? * gamma(den_b)?;
    Ok(num / den)
}

/// Euler Beta function `Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: Complex64, y: Complex64) -> Result<Complex64> {
    if x.re >= 0.5 && y.re >= 0.5 {
        // log form avoids overflow for large arguments
        return Ok((log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?).exp());
    }
    Ok(gamma(x)? * gamma(y)? * recip_gamma(x + y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn log_gamma_closed_forms() {
        assert!(log_gamma(c64(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c64(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c64(0.5, 0.0)).unwrap();
        assert!((half - c64(PI.sqrt().ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn log_gamma_recurrence_at_reference_point() {
        let z = c64(0.5, 1.0);
        let lhs = log_gamma(z + 1.0).unwrap();
        let rhs = z.ln() + log_gamma(z).unwrap();
        assert!(rel(lhs, rhs) < 1e-13, "{lhs} vs {rhs}");
    }

    #[test]
    fn log_gamma_is_continuous_across_the_recurrence_switch() {
        // left of Re z = 1/2 the value is built by upward recurrence
        for im in [-4.0, -0.7, 0.3, 2.5, 6.0] {
            let z = c64(-2.3, im);
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = z.ln() + log_gamma(z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "im = {im}");
        }
    }

    #[test]
    fn gamma_small_integers_and_half_integers() {
        assert!((gamma(c64(4.0, 0.0)).unwrap() - 6.0).norm() < 1e-13);
        assert!((gamma(c64(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-15);
        // Γ(-1/2) = -2√π, Γ(-3/2) = 4√π/3
        assert!(rel(gamma(c64(-0.5, 0.0)).unwrap(), c64(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c64(-1.5, 0.0)).unwrap(), c64(4.0 * PI.sqrt() / 3.0, 0.0)) < 1e-14);
        // Γ(7/2) = 15√π/8
        assert!(rel(gamma(c64(3.5, 0.0)).unwrap(), c64(15.0 * PI.sqrt() / 8.0, 0.0)) < 1e-14);
    }

    #[test]
    fn gamma_reflection_reference_point() {
        let z = c64(0.3, 0.2);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / sin_pi(z);
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }

    #[test]
    fn poles_are_reported() {
        for n in 0..6 {
            let z = c64(-(n as f64), 0.0);
            assert_eq!(gamma(z), Err(Error::Pole(z)));
            assert!(log_gamma(z).is_err());
            assert_eq!(recip_gamma(z), c64(0.0, 0.0));
        }
        // inside the integer-detection tolerance
        assert!(gamma(c64(-3.0 + 1e-11, 0.0)).is_err());
        // just outside it is a finite, huge value
        assert!(gamma(c64(-3.0 + 1e-7, 0.0)).unwrap().norm() > 1e5);
    }

    #[test]
    fn pochhammer_products() {
        assert_eq!(pochhammer(c64(0.7, -0.2), 0), c64(1.0, 0.0));
        assert_eq!(pochhammer(c64(1.0, 0.0), 5), c64(120.0, 0.0));
        // 0.25 * 1.25 * 2.25
        assert!((pochhammer(c64(0.25, 0.0), 3) - 0.703125).norm() < 1e-15);
    }

    #[test]
    fn gauss_sum_trivial_cases() {
        let q = c64(0.4, 0.1);
        let r = c64(1.7, -0.3);
        assert_eq!(gauss_2f1_at_one(c64(0.0, 0.0), q, r).unwrap(), c64(1.0, 0.0));
        let p = c64(0.25, 0.05);
        assert_eq!(
            gauss_2f1_at_one(p, q, r).unwrap(),
            gauss_2f1_at_one(q, p, r).unwrap()
        );
        assert!(matches!(
            gauss_2f1_at_one(c64(1.0, 0.0), c64(1.0, 0.0), c64(1.5, 0.0)),
            Err(Error::Divergence(_))
        ));
    }

    /// Direct summation of Σ (p)_n (q)_n / (n! (r)_n) until the tail bound
    /// (terms decay like n^{-1-s}, s = Re(r-p-q)) is below `tail`.
    /// Partial sums with the leading tail `term_N · N / s` added, extrapolated
    /// over `N` and `2N` to remove the `O(1/N)` remainder of that correction.
    fn gauss_sum_oracle(p: f64, q: f64, r: f64, n_terms: usize) -> f64 {
        let s = r - p - q;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut corrected = [0.0; 2];
        for k in 0..2 * n_terms {
            let n = k as f64;
            term *= (p + n) * (q + n) / ((n + 1.0) * (r + n));
            sum += term;
            if k + 1 == n_terms || k + 1 == 2 * n_terms {
                corrected[(k + 1) / (2 * n_terms)] = sum + term * (n + 1.0) / s;
            }
        }
        2.0 * corrected[1] - corrected[0]
    }

    #[test]
    fn gauss_sum_matches_direct_summation() {
        let oracle = gauss_sum_oracle(0.25, 0.4, 0.95, 1_000_000);
        let v = gauss_2f1_at_one(c64(0.25, 0.0), c64(0.4, 0.0), c64(0.95, 0.0)).unwrap();
        assert!((v.re - oracle).abs() < 1e-9, "{v} vs {oracle}");
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn beta_closed_forms() {
        assert!((beta(c64(1.0, 0.0), c64(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((beta(c64(0.5, 0.0), c64(0.5, 0.0)).unwrap() - PI).norm() < 1e-13);
    }

    #[test]
    fn beta_matches_quadrature() {
        let quad = crate::oracle::quadrature::beta_integral(c64(1.3, 0.0), c64(2.1, 0.0), 1e-13)
            .unwrap();
        let b = beta(c64(1.3, 0.0), c64(2.1, 0.0)).unwrap();
        assert!((quad - b).norm() < 1e-10, "{quad} vs {b}");
    }

    #[test]
    fn sin_pi_zeros_are_exact() {
        for n in -6..=6 {
            assert_eq!(sin_pi(c64(n as f64, 0.0)).re, 0.0);
        }
    }

    proptest! {
        #[test]
        fn gamma_recurrence_on_box(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let z = c64(re, im);
            prop_assume!(near_integer(z).is_none() && near_integer(z + 1.0).is_none());
            prop_assume!((z - z.re.round()).norm() > 1e-3);
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "z = {}", z);
        }

        #[test]
        fn gamma_reflection_on_box(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let z = c64(re, im);
            prop_assume!((z - z.re.round()).norm() > 1e-3);
            let v = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * sin_pi(z) / PI;
            prop_assert!((v - 1.0).norm() <= 1e-11, "z = {}", z);
        }

        #[test]
        fn pochhammer_is_gamma_ratio(re in -4.5f64..4.5, im in -3.0f64..3.0, n in 0usize..12) {
            let x = c64(re, im);
            prop_assume!((x - x.re.round()).norm() > 1e-3);
            let p = pochhammer(x, n);
            let g = gamma(x + n as f64).unwrap() / gamma(x).unwrap();
            prop_assert!((p - g).norm() <= 1e-12 * g.norm().max(1e-300));
        }

        #[test]
        fn recip_gamma_inverts_gamma(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let z = c64(re, im);
            prop_assume!((z - z.re.round()).norm() > 1e-3);
            let v = recip_gamma(z) * gamma(z).unwrap();
            prop_assert!((v - 1.0).norm() < 1e-12);
        }

        #[test]
        fn schwarz_reflection(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let z = c64(re, im);
            prop_assume!((z - z.re.round()).norm() > 1e-3);
            let a = gamma(z.conj()).unwrap();
            let b = gamma(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-14 * b.norm());
        }
    }
}
