//! Adaptive Gauss–Kronrod (7, 15) quadrature for complex integrands on real
//! intervals, and the endpoint-graded integrals used by the lemma checks.

use crate::{Error, Result};
use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let center = f(c);
    let mut k = center * WGK[7];
    let mut g = center * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        k += pair * w;
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).norm(),
    }
}

/// `∫_a^b f(x) dx`, bisecting the worst panel until the summed Kronrod–Gauss
/// difference is below `max(rel_tol * |I|, abs_tol)`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    let mut panels = vec![kronrod(&f, a, b)];
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let target = (rel_tol * value.norm()).max(abs_tol);
        if !error.is_finite() || !value.norm().is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: error,
                requested: target,
            });
        }
        if error <= target {
            return Ok(Quadrature {
                value,
                error,
                intervals: panels.len(),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= MAX_INTERVALS || mid <= p.a || mid >= p.b {
            return Err(Error::QuadratureFailure {
                estimate: error,
                requested: target,
            });
        }
        panels.push(kronrod(&f, p.a, mid));
        panels.push(kronrod(&f, mid, p.b));
    }
}

/// Grading exponent `m` such that `t = u^m` turns `t^{p-1} dt` into
/// `m u^{m p - 1} du` with a comfortably smooth power.
fn grading(p: Complex64) -> f64 {
    (3.0 / p.re).ceil().clamp(1.0, 60.0)
}

/// `∫_0^L t^{p-1} g(t) dt` with the substitution `t = u^m`.
fn graded<G: Fn(f64) -> Complex64>(p: Complex64, len: f64, g: G, rel_tol: f64) -> Result<Quadrature> {
    let m = grading(p);
    let upper = len.powf(1.0 / m);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let t = u.powf(m);
        ((m * p - 1.0) * u.ln()).exp() * g(t) * m
    };
    integrate(integrand, 0.0, upper, rel_tol, 0.0)
}

/// `∫_0^1 t^{x-1} (1-t)^{y-1} dt` for `Re x, Re y > 0`, split at 1/2 with each
/// half graded towards its singular endpoint.
pub fn beta_integral(x: Complex64, y: Complex64, tol: f64) -> Result<Complex64> {
    if x.re <= 0.0 || y.re <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "Beta integral needs Re x > 0 and Re y > 0, got x = {x}, y = {y}"
        )));
    }
    let left = graded_exp(x, y, tol)?;
    let right = graded_exp(y, x, tol)?;
    Ok(left + right)
}

/// `∫_0^{1/2} t^{p-1} (1-t)^{r-1} dt`.
fn graded_exp(p: Complex64, r: Complex64, tol: f64) -> Result<Complex64> {
    graded(p, 0.5, |t: f64| ((r - 1.0) * (-t).ln_1p()).exp(), tol).map(|q| q.value)
}

/// `∫_1^ρ (z-1)^α z^{-k-1} dz = ∫_0^{ρ-1} t^α (1+t)^{-k-1} dt`.
pub fn lemma3_integral(alpha: Complex64, k: u32, rho: f64, tol: f64) -> Result<Quadrature> {
    let kk = -(k as f64) - 1.0;
    graded(alpha + 1.0, rho - 1.0, |t: f64| Complex64::new((kk * t.ln_1p()).exp(), 0.0), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| c64(x * x * x, x), 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert!((q.value - c64(4.0, 2.0)).norm() < 1e-14);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn oscillatory_complex_integrand() {
        let q = integrate(|x| c64(0.0, 5.0 * x).exp(), 0.0, 3.0, 1e-13, 0.0).unwrap();
        let exact = (c64(0.0, 15.0).exp() - 1.0) / c64(0.0, 5.0);
        assert!((q.value - exact).norm() < 1e-13);
    }

    #[test]
    fn beta_integral_closed_forms() {
        assert!((beta_integral(c64(1.0, 0.0), c64(1.0, 0.0), 1e-13).unwrap() - 1.0).norm() < 1e-13);
        let v = beta_integral(c64(0.5, 0.0), c64(0.5, 0.0), 1e-13).unwrap();
        assert!((v - std::f64::consts::PI).norm() < 1e-12);
        // ∫ t (1-t)^2 = 1/12
        let v = beta_integral(c64(2.0, 0.0), c64(3.0, 0.0), 1e-13).unwrap();
        assert!((v - 1.0 / 12.0).norm() < 1e-14);
    }

    #[test]
    fn lemma3_integral_at_integer_alpha() {
        // ∫_0^1 t (1+t)^{-6} dt = [-(1+t)^{-4}/4 + (1+t)^{-5}/5]_0^1
        let exact = (-1.0 / 64.0 + 1.0 / 160.0) - (-0.25 + 0.2);
        let q = lemma3_integral(c64(1.0, 0.0), 5, 2.0, 1e-14).unwrap();
        assert!((q.value - exact).norm() < 1e-15);
    }

    #[test]
    fn failure_is_reported() {
        let r = integrate(|x| c64(1.0 / x, 0.0), 0.0, 1.0, 1e-12, 0.0);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })), "{r:?}");
    }
}
