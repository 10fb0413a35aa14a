//! Numerical checks of the three auxiliary lemmas: the Euler Beta integral,
//! gamma-ratio asymptotics, and the large-`k` behaviour of
//! `∫_1^ρ (z-1)^α z^{-k-1} dz`.

use super::quadrature::{beta_integral, lemma3_integral};
use crate::heun_series::SubclassParams;
use crate::specfun::{beta, log_gamma};
use crate::{Error, Result};
use num_complex::Complex64;

/// Tolerance handed to the quadrature in the Beta check.
pub const LEMMA1_QUADRATURE_TOL: f64 = 1e-13;
/// Relative tolerance of the Lemma 3 quadrature; the gaps of interest sit
/// near `1e-13` absolute.
pub const LEMMA3_QUADRATURE_TOL: f64 = 1e-14;
/// Real abscissae of the gamma-ratio check.
pub const LEMMA2_POINTS: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Check {
    pub x: Complex64,
    pub y: Complex64,
    pub beta: Complex64,
    pub quadrature: Complex64,
    pub gap: f64,
}

/// `B(x, y)` from gammas against the integral `∫_0^1 t^{x-1} (1-t)^{y-1} dt`.
pub fn lemma1_beta_check(x: Complex64, y: Complex64) -> Result<Lemma1Check> {
    let b = beta(x, y)?;
    let quad = beta_integral(x, y, LEMMA1_QUADRATURE_TOL)?;
    Ok(Lemma1Check {
        x,
        y,
        beta: b,
        quadrature: quad,
        gap: (b - quad).norm(),
    })
}

/// `|Γ(z+a)/Γ(z+b) · z^{b-a} - 1|` for real `z > 0`.
pub fn lemma2_ratio_error(z: f64, a: Complex64, b: Complex64) -> Result<f64> {
    let zc = Complex64::new(z, 0.0);
    let log_ratio = log_gamma(zc + a)? - log_gamma(zc + b)? + (b - a) * z.ln();
    Ok((log_ratio.exp() - 1.0).norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Check {
    pub a: Complex64,
    pub b: Complex64,
    /// `(z, relative error)` along [`LEMMA2_POINTS`].
    pub errors: Vec<(f64, f64)>,
    pub monotone: bool,
}

impl Lemma2Check {
    pub fn last_error(&self) -> f64 {
        self.errors.last().map_or(f64::NAN, |e| e.1)
    }
}

pub fn lemma2_check(a: Complex64, b: Complex64) -> Result<Lemma2Check> {
    let errors = LEMMA2_POINTS
        .iter()
        .map(|&z| lemma2_ratio_error(z, a, b).map(|e| (z, e)))
        .collect::<Result<Vec<_>>>()?;
    let monotone = errors.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(Lemma2Check {
        a,
        b,
        errors,
        monotone,
    })
}

/// The shift pairs `(a, b)` in which the gamma-ratio asymptotics are used
/// when reducing the coefficient sequences: `(1, δ-1)`, `(α/2, 1)` and
/// `(β/2, (γ+1)/2)`.
pub fn lemma2_shift_pairs(s: &SubclassParams) -> [(Complex64, Complex64); 3] {
    let one = Complex64::new(1.0, 0.0);
    [
        (one, s.delta() - 1.0),
        (s.alpha() * 0.5, one),
        (s.beta() * 0.5, (s.gamma() + 1.0) * 0.5),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Check {
    pub alpha: Complex64,
    pub k: u32,
    pub rho: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub gap: f64,
    pub quadrature_error: f64,
}

/// The integral on `[1, ρ]` by quadrature against `Γ(k-α)Γ(α+1)/Γ(k+1)`.
pub fn lemma3_integral_check(alpha: Complex64, k: u32, rho: f64) -> Result<Lemma3Check> {
    if !(alpha.re > 0.0 && (k as f64) > alpha.re) {
        return Err(Error::InvalidParameters(format!(
            "need k > Re α > 0, got α = {alpha}, k = {k}"
        )));
    }
    if !(rho > 1.0 && rho < 2.0) {
        return Err(Error::InvalidParameters(format!("need 1 < ρ < 2, got {rho}")));
    }
    let kc = Complex64::new(k as f64, 0.0);
    let rhs = (log_gamma(kc - alpha)? + log_gamma(alpha + 1.0)? - log_gamma(kc + 1.0)?).exp();
    let quad = lemma3_integral(alpha, k, rho, LEMMA3_QUADRATURE_TOL)?;
    Ok(Lemma3Check {
        alpha,
        k,
        rho,
        lhs: quad.value,
        rhs,
        gap: (quad.value - rhs).norm(),
        quadrature_error: quad.error,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma3Decay {
    pub checks: Vec<Lemma3Check>,
    /// `gap(k_i) / gap(k_{i-1})` for consecutive entries.
    pub ratios: Vec<f64>,
    /// `ρ^{-Δk}` for the spacing of consecutive entries.
    pub expected_ratio: f64,
}

impl Lemma3Decay {
    /// Every ratio lies in `[lo, hi] · ρ^{-Δk}`.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.ratios
            .iter()
            .all(|r| *r >= lo * self.expected_ratio && *r <= hi * self.expected_ratio)
    }
}

/// Gaps along equally spaced `ks`; the leading behaviour is
/// `(ρ-1)^α ρ^{-k} / k`, so consecutive ratios approach `ρ^{-Δk}` from below.
pub fn lemma3_decay(alpha: Complex64, rho: f64, ks: &[u32]) -> Result<Lemma3Decay> {
    let checks = ks
        .iter()
        .map(|&k| lemma3_integral_check(alpha, k, rho))
        .collect::<Result<Vec<_>>>()?;
    let ratios = checks.windows(2).map(|w| w[1].gap / w[0].gap).collect();
    let step = match ks {
        [a, b, ..] => (b - a) as f64,
        _ => 0.0,
    };
    Ok(Lemma3Decay {
        checks,
        ratios,
        expected_ratio: rho.powf(-step),
    })
}

/// `max_k gap(k) ρ^k` over the fitting set.
pub fn lemma3_fitted_constant(alpha: Complex64, rho: f64, ks: &[u32]) -> Result<f64> {
    ks.iter().try_fold(0.0f64, |acc, &k| {
        let c = lemma3_integral_check(alpha, k, rho)?;
        Ok(acc.max(c.gap * rho.powi(k as i32)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;

    #[test]
    fn lemma3_integer_example() {
        let c = lemma3_integral_check(c64(1.0, 0.0), 5, 1.5).unwrap();
        assert!((c.rhs - 0.05).norm() < 1e-15);
        // the full integral to ∞ equals the rhs
        let tail = 1.5f64.powi(-4) / 4.0 - 1.5f64.powi(-5) / 5.0;
        assert!((c.lhs.re - (0.05 - tail)).abs() < 1e-15);
    }

    #[test]
    fn lemma3_rejects_bad_inputs() {
        assert!(lemma3_integral_check(c64(0.3, 0.0), 60, 2.5).is_err());
        assert!(lemma3_integral_check(c64(-0.3, 0.0), 60, 1.5).is_err());
    }

    #[test]
    fn lemma3_gap_and_decay() {
        let alpha = c64(0.3, 0.0);
        let c = lemma3_integral_check(alpha, 60, 1.5).unwrap();
        let fitted = lemma3_fitted_constant(alpha, 1.5, &[20, 30, 40]).unwrap();
        assert!(c.gap <= 1e-6f64.max(fitted * 1.5f64.powi(-60)));
        let decay = lemma3_decay(alpha, 1.5, &[30, 40, 50, 60]).unwrap();
        assert!(decay.within(0.5, 1.0), "{:?} vs {}", decay.ratios, decay.expected_ratio);
    }

    #[test]
    fn lemma2_proof_pairs_converge() {
        let s = SubclassParams::real(0.5, 0.8, 0.9);
        for (a, b) in lemma2_shift_pairs(&s) {
            let c = lemma2_check(a, b).unwrap();
            assert!(c.monotone && c.last_error() < 1e-2, "{c:?}");
        }
    }

    #[test]
    fn lemma2_fails_for_wide_shifts() {
        // first-order error (a-b)(a+b-1)/(2z) = 4 * 1 / 160 at z = 80
        let e = lemma2_ratio_error(80.0, c64(2.0, 0.0), c64(-2.0, 0.0)).unwrap();
        assert!(e > 1e-2 && e < 3e-2, "{e}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn lemma2_error_decreases(ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0) {
            let (a, b) = (c64(ar, ai), c64(br, bi));
            prop_assume!((a - b).norm() > 1e-3 && (a + b - 1.0).norm() > 1e-3);
            let c = lemma2_check(a, b).unwrap();
            prop_assert!(c.monotone, "{:?}", c.errors);
        }

        #[test]
        fn lemma1_holds(xr in 0.3f64..3.0, xi in -1.0f64..1.0, yr in 0.3f64..3.0, yi in -1.0f64..1.0) {
            let c = lemma1_beta_check(c64(xr, xi), c64(yr, yi)).unwrap();
            prop_assert!(c.gap <= 1e-10, "{c:?}");
        }
    }
}
