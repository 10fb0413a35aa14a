//! Frobenius series of the local Heun function and the local solutions of
//! the `a = -1, q = 0` subclass.
//!
//! The local Heun function `Hl(a, q; α, β, γ, δ; t) = Σ A_k t^k` has
//! coefficients fixed by the three-term recurrence
//!
//! ```text
//! a P_k A_{k+1} = (Q_k + q) A_k - R_k A_{k-1},   A_0 = 1, A_{-1} = 0,
//! P_k = (k+1)(k+γ),  Q_k = k(k-1+γ)(1+a) + k(aδ+ε),  R_k = (k-1+α)(k-1+β).
//! ```
//!
//! For the subclass the odd coefficients vanish and the even ones are
//! `A_{2n} = (α/2)_n (β/2)_n / (n! ((γ+1)/2)_n)`, so `Hl(-1, 0; ...; z)` is
//! ₂F₁(α/2, β/2; (γ+1)/2; z²).
//!
//! Every local solution is represented as a [`LocalExpansion`]: an optional
//! principal-branch power `(m z + c)^s` times a [`FrobeniusSeries`] evaluated
//! at an affine or reciprocal image `t(z)` of the point.

use crate::specfun::{is_nonpositive_integer, near_integer, INTEGER_TOL};
use crate::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

/// Points must satisfy `|t| < radius - DISC_MARGIN` to be evaluated.
pub const DISC_MARGIN: f64 = 1e-3;
/// The stopping rule is not consulted before this many terms.
pub const MIN_TERMS: usize = 8;
/// Hard cap on the number of summed terms.
pub const MAX_TERMS: usize = 2_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Parameters of the general Heun equation
/// `y'' + (γ/z + δ/(z-1) + ε/(z-a)) y' + (αβz - q)/(z(z-1)(z-a)) y = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    pub a: Complex64,
    pub q: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    epsilon: Complex64,
}

impl HeunParams {
    pub fn new(
        a: Complex64,
        q: Complex64,
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> Result<Self> {
        if a.norm() < INTEGER_TOL || (a - 1.0).norm() < INTEGER_TOL {
            return Err(Error::InvalidParameters(format!(
                "singularity a = {a} must differ from 0 and 1"
            )));
        }
        let epsilon = alpha + beta + 1.0 - gamma - delta;
        Ok(Self {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        })
    }

    /// `ε = α + β + 1 - γ - δ`, fixed at construction.
    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }

    /// Radius `min(1, |a|)` of the disc where `Hl` converges.
    pub fn radius(&self) -> f64 {
        self.a.norm().min(1.0)
    }

    /// The non-integrality conditions on γ, δ, ε and α - β.
    pub fn is_generic(&self) -> bool {
        [
            self.gamma,
            self.delta,
            self.epsilon,
            self.alpha - self.beta,
        ]
        .iter()
        .all(|v| near_integer(*v).is_none())
    }
}

/// The three free parameters of the subclass; `δ = ε = (α+β+1-γ)/2`,
/// `a = -1`, `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubclassParams {
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
}

impl SubclassParams {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Self {
        let delta = (alpha + beta + 1.0 - gamma) * 0.5;
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(alpha.into(), beta.into(), gamma.into())
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }
    pub fn beta(&self) -> Complex64 {
        self.beta
    }
    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// The induced general parameters. `ε` is set to `δ` bit-for-bit so that
    /// the general recurrence reproduces the exact zeros at odd indices.
    pub fn heun(&self) -> HeunParams {
        HeunParams {
            a: Complex64::new(-1.0, 0.0),
            q: ZERO,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            epsilon: self.delta,
        }
    }

    /// Checks γ, δ, ε, α - β ∉ ℤ, naming the first offending quantity.
    pub fn admissibility(&self) -> Result<()> {
        let checks = [
            ("gamma", self.gamma),
            ("delta = epsilon", self.delta),
            ("alpha - beta", self.alpha - self.beta),
        ];
        for (name, v) in checks {
            if let Some(n) = near_integer(v) {
                return Err(Error::InvalidParameters(format!(
                    "{name} = {v} is the integer {n}; the local pairs degenerate (logarithmic case)"
                )));
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().is_ok()
    }

    /// `Re(1 - δ) > 0`, the hypothesis of the closed-form connection coefficients.
    pub fn in_theorem_domain(&self) -> bool {
        (1.0 - self.delta).re > 0.0
    }

    /// Distance of the "integer-sensitive" quantities from ℤ.
    pub fn integer_distance(&self) -> f64 {
        [self.gamma, self.delta, self.alpha - self.beta]
            .iter()
            .map(|v| (v - v.re.round()).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `(1+α-γ, 1+β-γ, 2-γ)`: the subclass member whose `y01` is `z^{γ-1} y02`.
    pub fn second_solution_triple(&self) -> Self {
        Self::new(
            1.0 + self.alpha - self.gamma,
            1.0 + self.beta - self.gamma,
            2.0 - self.gamma,
        )
    }

    /// `(α, α+1-γ, 1+α-β)` for `which = 1`, `(β, β+1-γ, 1+β-α)` for `which = 2`:
    /// the subclass members underlying `y∞1`, `y∞2`.
    pub fn infinity_triple(&self, which: u8) -> Self {
        let (x, y) = if which == 1 {
            (self.alpha, self.beta)
        } else {
            (self.beta, self.alpha)
        };
        Self::new(x, x + 1.0 - self.gamma, 1.0 + x - y)
    }
}

/// Expansion point of a local solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Center {
    Finite(Complex64),
    Infinity,
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Finite(c) if c.im == 0.0 => write!(f, "{}", c.re),
            Center::Finite(c) => write!(f, "{c}"),
            Center::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum CoefficientRule {
    Recurrence(HeunParams),
    EvenClosedForm {
        half_alpha: Complex64,
        half_beta: Complex64,
        half_gamma_plus_one: Complex64,
    },
}

impl CoefficientRule {
    /// Computes `A_{k}` for `k = cache.len()`; `cache` holds `A_0 .. A_{k-1}`.
    fn next(&self, cache: &[Complex64]) -> Result<Complex64> {
        let k = cache.len();
        if k == 0 {
            return Ok(ONE);
        }
        match *self {
            CoefficientRule::Recurrence(p) => {
                // A_{j+1} from A_j, A_{j-1}
                let j = k - 1;
                let jf = j as f64;
                let shifted = p.gamma + jf;
                if shifted.norm() < INTEGER_TOL {
                    return Err(Error::RecurrenceBreakdown { k: j });
                }
                let p_j = shifted * (jf + 1.0);
                let q_j = jf * (jf - 1.0 + p.gamma) * (1.0 + p.a) + jf * (p.a * p.delta + p.epsilon);
                let r_j = (jf - 1.0 + p.alpha) * (jf - 1.0 + p.beta);
                let a_prev = if j >= 1 { cache[j - 1] } else { ZERO };
                Ok(((q_j + p.q) * cache[j] - r_j * a_prev) / (p.a * p_j))
            }
            CoefficientRule::EvenClosedForm {
                half_alpha,
                half_beta,
                half_gamma_plus_one,
            } => {
                if k % 2 == 1 {
                    return Ok(ZERO);
                }
                let m = (k / 2 - 1) as f64;
                let denom = half_gamma_plus_one + m;
                if denom.norm() < INTEGER_TOL {
                    return Err(Error::RecurrenceBreakdown { k: k - 1 });
                }
                Ok(cache[k - 2] * (half_alpha + m) * (half_beta + m) / ((m + 1.0) * denom))
            }
        }
    }
}

/// Result of summing a power series and (optionally) its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    pub first: Complex64,
    pub second: Complex64,
    pub terms: usize,
    /// Geometric bound on the neglected tail of the value series.
    pub tail_bound: f64,
}

/// A Frobenius solution `(local variable)^exponent Σ A_k t^k` with lazily
/// extended, memoized coefficients.
///
/// The coefficient cache only grows; a completed prefix is never recomputed.
/// Access is serialized by an internal mutex, so a series can be shared
/// between threads.
pub struct FrobeniusSeries {
    center: Center,
    exponent: Complex64,
    radius: f64,
    rule: CoefficientRule,
    coefficients: Mutex<Vec<Complex64>>,
}

impl Clone for FrobeniusSeries {
    fn clone(&self) -> Self {
        Self {
            center: self.center,
            exponent: self.exponent,
            radius: self.radius,
            rule: self.rule,
            coefficients: Mutex::new(self.lock().clone()),
        }
    }
}

impl fmt::Debug for FrobeniusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrobeniusSeries")
            .field("center", &self.center)
            .field("exponent", &self.exponent)
            .field("radius", &self.radius)
            .field("rule", &self.rule)
            .field("cached", &self.cached_len())
            .finish()
    }
}

impl FrobeniusSeries {
    /// `Hl(a, q; α, β, γ, δ; t)` through the general recurrence.
    pub fn local_heun(p: HeunParams) -> Self {
        Self {
            center: Center::Finite(ZERO),
            exponent: ZERO,
            radius: p.radius(),
            rule: CoefficientRule::Recurrence(p),
            coefficients: Mutex::new(vec![ONE]),
        }
    }

    /// `Hl(-1, 0; α, β, γ, δ; t)` through the closed-form even coefficients.
    pub fn subclass(s: &SubclassParams) -> Self {
        Self {
            center: Center::Finite(ZERO),
            exponent: ZERO,
            radius: 1.0,
            rule: CoefficientRule::EvenClosedForm {
                half_alpha: s.alpha * 0.5,
                half_beta: s.beta * 0.5,
                half_gamma_plus_one: (s.gamma + 1.0) * 0.5,
            },
            coefficients: Mutex::new(vec![ONE]),
        }
    }

    /// Records where the series lives in the z-plane and its leading power.
    pub fn at(mut self, center: Center, exponent: Complex64) -> Self {
        self.center = center;
        self.exponent = exponent;
        self
    }

    pub fn center(&self) -> Center {
        self.center
    }
    pub fn exponent(&self) -> Complex64 {
        self.exponent
    }
    /// Convergence radius of the power part in the local variable.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cached_len(&self) -> usize {
        self.lock().len()
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Vec<Complex64>> {
        // a poisoned cache still holds a valid prefix
        self.coefficients
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    fn extend(&self, cache: &mut Vec<Complex64>, len: usize) -> Result<()> {
        while cache.len() < len {
            let next = self.rule.next(cache)?;
            cache.push(next);
        }
        Ok(())
    }

    /// `A_0, ..., A_n`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<Complex64>> {
        let mut cache = self.lock();
        self.extend(&mut cache, n + 1)?;
        Ok(cache[..=n].to_vec())
    }

    pub fn coefficient(&self, k: usize) -> Result<Complex64> {
        let mut cache = self.lock();
        self.extend(&mut cache, k + 1)?;
        Ok(cache[k])
    }

    /// Sums the series at `t`, stopping at the first `K >= MIN_TERMS` with
    /// `|term_K| + |term_{K-1}| <= tol * |partial sum|` (and the same for the
    /// derivative series when `derivatives` is set).
    pub fn sum(&self, t: Complex64, tol: f64, derivatives: bool) -> Result<SeriesSum> {
        let r = t.norm() / self.radius;
        if r >= 1.0 {
            return Err(Error::OutOfDisc {
                what: "power series".into(),
                z: t,
                modulus: t.norm(),
                limit: self.radius,
            });
        }
        let mut cache = self.lock();
        let mut sums = [ZERO; 3];
        // t^k, t^{k-1}, t^{k-2}
        let mut pow = [ONE, ZERO, ZERO];
        let mut prev = [0.0f64; 3];
        let mut pairs = [0.0f64; 3]; // value pair sums at k, k-1, k-2
        for k in 0..MAX_TERMS {
            if cache.len() <= k {
                let want = (2 * cache.len()).max(k + 64);
                self.extend(&mut cache, want)?;
            }
            let a = cache[k];
            let kf = k as f64;
            let terms = [
                a * pow[0],
                if k >= 1 { a * pow[1] * kf } else { ZERO },
                if k >= 2 { a * pow[2] * (kf * (kf - 1.0)) } else { ZERO },
            ];
            let mags = [terms[0].norm(), terms[1].norm(), terms[2].norm()];
            for i in 0..3 {
                sums[i] += terms[i];
            }
            pairs = [mags[0] + prev[0], pairs[0], pairs[1]];
            if k >= MIN_TERMS {
                let mut done = pairs[0] <= tol * sums[0].norm();
                if derivatives {
                    let scale = sums[0].norm();
                    done = done
                        && mags[1] + prev[1] <= tol * sums[1].norm().max(scale)
                        && mags[2] + prev[2] <= tol * sums[2].norm().max(scale);
                }
                if done {
                    let observed = if pairs[2] > 0.0 {
                        (pairs[0] / pairs[2]).sqrt()
                    } else {
                        0.0
                    };
                    let rate = r.max(observed);
                    let tail_bound = if rate < 1.0 {
                        pairs[0] * rate / (1.0 - rate)
                    } else {
                        f64::INFINITY
                    };
                    return Ok(SeriesSum {
                        value: sums[0],
                        first: sums[1],
                        second: sums[2],
                        terms: k + 1,
                        tail_bound,
                    });
                }
            }
            prev = mags;
            pow = [pow[0] * t, pow[0], pow[1]];
        }
        Err(Error::NonConvergence {
            iterations: MAX_TERMS,
            residual: pairs[0],
        })
    }
}

/// `t = scale * z + shift` or `t = scale / z + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgumentMap {
    Affine { scale: Complex64, shift: Complex64 },
    Reciprocal { scale: Complex64, shift: Complex64 },
}

impl ArgumentMap {
    pub fn identity() -> Self {
        ArgumentMap::Affine {
            scale: ONE,
            shift: ZERO,
        }
    }

    /// `t(z)`, `t'(z)`, `t''(z)`; `None` at the pole of a reciprocal map.
    fn jet(&self, z: Complex64) -> Option<[Complex64; 3]> {
        match *self {
            ArgumentMap::Affine { scale, shift } => Some([scale * z + shift, scale, ZERO]),
            ArgumentMap::Reciprocal { scale, shift } => {
                if z == ZERO {
                    return None;
                }
                let w = z.inv();
                Some([scale * w + shift, -scale * w * w, 2.0 * scale * w * w * w])
            }
        }
    }

    pub fn apply(&self, z: Complex64) -> Option<Complex64> {
        self.jet(z).map(|j| j[0])
    }
}

/// `(scale * z + shift)^exponent` on the principal branch; the cut is where the
/// base lies on (-∞, 0].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPrefactor {
    pub scale: Complex64,
    pub shift: Complex64,
    pub exponent: Complex64,
}

impl PowerPrefactor {
    pub fn new(scale: Complex64, shift: Complex64, exponent: Complex64) -> Self {
        Self {
            scale,
            shift,
            exponent,
        }
    }

    pub fn base(&self, z: Complex64) -> Complex64 {
        self.scale * z + self.shift
    }

    pub fn on_cut(&self, z: Complex64) -> bool {
        let b = self.base(z);
        b.im == 0.0 && b.re <= 0.0
    }

    fn jet(&self, z: Complex64) -> Option<[Complex64; 3]> {
        if self.on_cut(z) {
            return None;
        }
        let b = self.base(z);
        let s = self.exponent;
        let v = (s * b.ln()).exp();
        let d1 = v * s * self.scale / b;
        let d2 = v * s * (s - 1.0) * self.scale * self.scale / (b * b);
        Some([v, d1, d2])
    }
}

/// Value and first two z-derivatives of a local solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub first: Complex64,
    pub second: Complex64,
    pub tail_bound: f64,
}

/// `prefactor(z) * series(t(z))`.
#[derive(Debug, Clone)]
pub struct LocalExpansion {
    label: String,
    prefactor: Option<PowerPrefactor>,
    map: ArgumentMap,
    series: FrobeniusSeries,
}

impl LocalExpansion {
    pub fn new(
        label: impl Into<String>,
        prefactor: Option<PowerPrefactor>,
        map: ArgumentMap,
        series: FrobeniusSeries,
    ) -> Self {
        Self {
            label: label.into(),
            prefactor,
            map,
            series,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn series(&self) -> &FrobeniusSeries {
        &self.series
    }
    pub fn prefactor(&self) -> Option<&PowerPrefactor> {
        self.prefactor.as_ref()
    }
    pub fn map(&self) -> ArgumentMap {
        self.map
    }

    /// Largest usable `|t|`.
    pub fn disc_limit(&self) -> f64 {
        self.series.radius - DISC_MARGIN
    }

    fn local_argument(&self, z: Complex64) -> Result<[Complex64; 3]> {
        let jet = self.map.jet(z);
        match jet {
            Some(j) if j[0].norm() < self.disc_limit() => Ok(j),
            _ => Err(Error::OutOfDisc {
                what: self.label.clone(),
                z,
                modulus: jet.map_or(f64::INFINITY, |j| j[0].norm()),
                limit: self.disc_limit(),
            }),
        }
    }

    /// True when `z` can be evaluated: inside the disc and off the cut.
    pub fn contains(&self, z: Complex64) -> bool {
        self.local_argument(z).is_ok() && !self.prefactor.is_some_and(|p| p.on_cut(z))
    }

    fn prefactor_jet(&self, z: Complex64) -> Result<[Complex64; 3]> {
        match &self.prefactor {
            None => Ok([ONE, ZERO, ZERO]),
            Some(p) => p.jet(z).ok_or_else(|| Error::BranchCut {
                what: self.label.clone(),
                z,
            }),
        }
    }

    pub fn evaluate(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        let t = self.local_argument(z)?;
        let pre = self.prefactor_jet(z)?;
        let s = self.series.sum(t[0], tol, false)?;
        Ok(pre[0] * s.value)
    }

    /// Value, derivative and second derivative with respect to z.
    pub fn jet(&self, z: Complex64, tol: f64) -> Result<Jet> {
        let t = self.local_argument(z)?;
        let pre = self.prefactor_jet(z)?;
        let s = self.series.sum(t[0], tol, true)?;
        let h = [s.value, s.first * t[1], s.second * t[1] * t[1] + s.first * t[2]];
        Ok(Jet {
            value: pre[0] * h[0],
            first: pre[1] * h[0] + pre[0] * h[1],
            second: pre[2] * h[0] + 2.0 * pre[1] * h[1] + pre[0] * h[2],
            tail_bound: pre[0].norm() * s.tail_bound,
        })
    }
}

/// The eight local solutions of the subclass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalSolutionId {
    Y01,
    Y02,
    YPlus1,
    YPlus2,
    YMinus1,
    YMinus2,
    YInf1,
    YInf2,
}

impl LocalSolutionId {
    pub const ALL: [LocalSolutionId; 8] = [
        LocalSolutionId::Y01,
        LocalSolutionId::Y02,
        LocalSolutionId::YPlus1,
        LocalSolutionId::YPlus2,
        LocalSolutionId::YMinus1,
        LocalSolutionId::YMinus2,
        LocalSolutionId::YInf1,
        LocalSolutionId::YInf2,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            LocalSolutionId::Y01 => "y01",
            LocalSolutionId::Y02 => "y02",
            LocalSolutionId::YPlus1 => "y+1",
            LocalSolutionId::YPlus2 => "y+2",
            LocalSolutionId::YMinus1 => "y-1",
            LocalSolutionId::YMinus2 => "y-2",
            LocalSolutionId::YInf1 => "yinf1",
            LocalSolutionId::YInf2 => "yinf2",
        }
    }

    pub fn center(&self) -> Center {
        match self {
            LocalSolutionId::Y01 | LocalSolutionId::Y02 => Center::Finite(ZERO),
            LocalSolutionId::YPlus1 | LocalSolutionId::YPlus2 => Center::Finite(ONE),
            LocalSolutionId::YMinus1 | LocalSolutionId::YMinus2 => Center::Finite(-ONE),
            LocalSolutionId::YInf1 | LocalSolutionId::YInf2 => Center::Infinity,
        }
    }

    /// Leading exponent in the local variable (`1/z` at infinity).
    pub fn exponent(&self, s: &SubclassParams) -> Complex64 {
        match self {
            LocalSolutionId::Y01 | LocalSolutionId::YPlus1 | LocalSolutionId::YMinus1 => ZERO,
            LocalSolutionId::Y02 => 1.0 - s.gamma,
            LocalSolutionId::YPlus2 | LocalSolutionId::YMinus2 => 1.0 - s.delta,
            LocalSolutionId::YInf1 => s.alpha,
            LocalSolutionId::YInf2 => s.beta,
        }
    }

    /// The other member of the fundamental pair.
    pub fn companion(&self) -> Self {
        use LocalSolutionId::*;
        match self {
            Y01 => Y02,
            Y02 => Y01,
            YPlus1 => YPlus2,
            YPlus2 => YPlus1,
            YMinus1 => YMinus2,
            YMinus2 => YMinus1,
            YInf1 => YInf2,
            YInf2 => YInf1,
        }
    }

    /// Whether this is the first member of its pair.
    pub fn is_first(&self) -> bool {
        use LocalSolutionId::*;
        matches!(self, Y01 | YPlus1 | YMinus1 | YInf1)
    }

    pub fn build(&self, s: &SubclassParams) -> Result<LocalExpansion> {
        local_solution(*self, s)
    }
}

impl fmt::Display for LocalSolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LocalSolutionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use LocalSolutionId::*;
        let id = match s.trim().to_ascii_lowercase().as_str() {
            "y01" => Y01,
            "y02" => Y02,
            "y+1" | "yp1" | "yplus1" => YPlus1,
            "y+2" | "yp2" | "yplus2" => YPlus2,
            "y-1" | "ym1" | "yminus1" => YMinus1,
            "y-2" | "ym2" | "yminus2" => YMinus2,
            "yinf1" | "y∞1" => YInf1,
            "yinf2" | "y∞2" => YInf2,
            other => {
                return Err(Error::InvalidParameters(format!(
                    "unknown local solution '{other}' (expected y01, y02, y+1, y+2, y-1, y-2, yinf1, yinf2)"
                )))
            }
        };
        Ok(id)
    }
}

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Which closed form to use for the accessory parameter of `y-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessoryForm {
    /// `[(γ+δ-α)(2γ+δ-β) - γβ]/2`, as listed with the eight local solutions.
    Literal,
    /// The general `y_a2` accessory parameter specialized to `a = -1, q = 0`.
    MaierGeneral,
}

/// Accessory parameter of the exponent-`(1-ε)` solution at `z = a` for
/// general parameters.
pub fn ya2_accessory(p: &HeunParams) -> Complex64 {
    let (g, d) = (p.gamma, p.delta);
    (-p.q + p.a * (g + d - p.alpha) * (g + d - p.beta) + g * (p.epsilon - 1.0)) / (p.a - 1.0)
}

pub fn y_minus2_accessory(s: &SubclassParams, form: AccessoryForm) -> Complex64 {
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    match form {
        AccessoryForm::Literal => ((g + d - a) * (2.0 * g + d - b) - g * b) * 0.5,
        AccessoryForm::MaierGeneral => ya2_accessory(&s.heun()),
    }
}

/// `y-2` built with the chosen accessory parameter.
pub fn y_minus2_with(s: &SubclassParams, form: AccessoryForm) -> Result<LocalExpansion> {
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    let p = HeunParams::new(
        cplx(0.5),
        y_minus2_accessory(s, form),
        g + d - b,
        g + d - a,
        2.0 - d,
        d,
    )?;
    Ok(LocalExpansion::new(
        "y-2",
        Some(PowerPrefactor::new(ONE, ONE, 1.0 - d)),
        ArgumentMap::Affine {
            scale: cplx(0.5),
            shift: cplx(0.5),
        },
        FrobeniusSeries::local_heun(p).at(Center::Finite(-ONE), 1.0 - d),
    ))
}

/// Builds one of the eight local solutions.
pub fn local_solution(id: LocalSolutionId, s: &SubclassParams) -> Result<LocalExpansion> {
    use LocalSolutionId::*;
    let (a, b, g, d) = (s.alpha, s.beta, s.gamma, s.delta);
    let exponent = id.exponent(s);
    let center = id.center();
    let one_minus_z = ArgumentMap::Affine {
        scale: -ONE,
        shift: ONE,
    };
    let half_z_plus_one = ArgumentMap::Affine {
        scale: cplx(0.5),
        shift: cplx(0.5),
    };
    let inverse = ArgumentMap::Reciprocal {
        scale: ONE,
        shift: ZERO,
    };
    let expansion = match id {
        Y01 => LocalExpansion::new(
            id.label(),
            None,
            ArgumentMap::identity(),
            FrobeniusSeries::subclass(s),
        ),
        Y02 => LocalExpansion::new(
            id.label(),
            Some(PowerPrefactor::new(ONE, ZERO, 1.0 - g)),
            ArgumentMap::identity(),
            FrobeniusSeries::subclass(&s.second_solution_triple()).at(center, exponent),
        ),
        YPlus1 => {
            let p = HeunParams::new(cplx(2.0), a * b, a, b, d, g)?;
            LocalExpansion::new(
                id.label(),
                None,
                one_minus_z,
                FrobeniusSeries::local_heun(p).at(center, exponent),
            )
        }
        YPlus2 => {
            let q = a * b + (1.0 - d) * (d + 2.0 * g);
            let p = HeunParams::new(cplx(2.0), q, 1.0 + a - d, 1.0 + b - d, 2.0 - d, g)?;
            LocalExpansion::new(
                id.label(),
                Some(PowerPrefactor::new(-ONE, ONE, 1.0 - d)),
                one_minus_z,
                FrobeniusSeries::local_heun(p).at(center, exponent),
            )
        }
        YMinus1 => {
            let p = HeunParams::new(cplx(0.5), a * b * 0.5, a, b, a + b + 1.0 - g - d, d)?;
            LocalExpansion::new(
                id.label(),
                None,
                half_z_plus_one,
                FrobeniusSeries::local_heun(p).at(center, exponent),
            )
        }
        YMinus2 => y_minus2_with(s, AccessoryForm::Literal)?,
        YInf1 | YInf2 => {
            let which = if id == YInf1 { 1 } else { 2 };
            let lead = if id == YInf1 { a } else { b };
            LocalExpansion::new(
                id.label(),
                Some(PowerPrefactor::new(ONE, ZERO, -lead)),
                inverse,
                FrobeniusSeries::subclass(&s.infinity_triple(which)).at(center, exponent),
            )
        }
    };
    Ok(expansion)
}

/// `A_0, ..., A_n` of `Hl(a, q; α, β, γ, δ; z)` from the three-term recurrence.
pub fn general_coefficients(p: &HeunParams, n: usize) -> Result<Vec<Complex64>> {
    FrobeniusSeries::local_heun(*p).coefficients(n)
}

/// Closed-form even coefficient `A_{2n} = (α/2)_n (β/2)_n / (n! ((γ+1)/2)_n)`.
pub fn subclass_coefficient(s: &SubclassParams, n: usize) -> Result<Complex64> {
    let (ha, hb, hg) = (s.alpha * 0.5, s.beta * 0.5, (s.gamma + 1.0) * 0.5);
    let mut acc = ONE;
    for m in 0..n {
        let mf = m as f64;
        if is_nonpositive_integer(hg + mf) && (hg + mf).norm() < INTEGER_TOL {
            return Err(Error::RecurrenceBreakdown { k: 2 * m + 1 });
        }
        acc *= (ha + mf) * (hb + mf) / ((mf + 1.0) * (hg + mf));
    }
    Ok(acc)
}

/// Value of the tagged local solution of the subclass at `z`.
pub fn eval_local(id: LocalSolutionId, s: &SubclassParams, z: Complex64, tol: f64) -> Result<Complex64> {
    local_solution(id, s)?.evaluate(z, tol)
}

/// `Hl(a, q; α, β, γ, δ; z)` for `|z| < min(1, |a|)`.
pub fn eval_general_hl(p: &HeunParams, z: Complex64, tol: f64) -> Result<Complex64> {
    LocalExpansion::new("Hl", None, ArgumentMap::identity(), FrobeniusSeries::local_heun(*p))
        .evaluate(z, tol)
}

/// Residual of the general Heun equation for a jet, and the magnitude of the
/// largest of its three terms (for relative comparisons).
pub fn heun_ode_residual(p: &HeunParams, z: Complex64, jet: &Jet) -> (f64, f64) {
    let drift = p.gamma / z + p.delta / (z - 1.0) + p.epsilon / (z - p.a);
    let potential = (p.alpha * p.beta * z - p.q) / (z * (z - 1.0) * (z - p.a));
    let terms = [jet.second, drift * jet.first, potential * jet.value];
    let residual = (terms[0] + terms[1] + terms[2]).norm();
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    (residual, scale)
}

/// Transformation identities between local Heun functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaierIdentity {
    /// `y11(z) = z^{1-γ} Hl(1-a, -q+αβ+(γ-1)(1-a)δ; 1+α-γ, 1+β-γ, δ, 2-γ; 1-z)`.
    Y11Kummer,
    /// The same with accessory parameter `-q+αβ-(γ-1)(1-a)δ`, the value the
    /// `(1-t)^{1-δ}` transformation of `Hl(1-a, αβ-q; α, β, δ, γ; t)` produces.
    Y11KummerAmended,
    /// `y11(z) = z^{-α} Hl(1-1/a, (-q+α[(a-1)δ+β])/a; α, α+1-γ, δ, 1+α-β; 1-1/z)`.
    Y11Inversion,
    /// `ya1(z) = (z/a)^{1-γ} Hl(a/(a-1), Q; 1+α-γ, 1+β-γ, ε, δ; (z-a)/(1-a))`.
    Ya1Kummer,
    /// For `a = -1`: `ya1(z) = (-z)^{-α} Hl(1/(1-a), ...; α, α+1-γ, ε, δ; (1/z-a)/(1-a))`.
    Ya1Reflection,
}

impl MaierIdentity {
    /// The four identities as stated.
    pub const ALL: [MaierIdentity; 4] = [
        MaierIdentity::Y11Kummer,
        MaierIdentity::Y11Inversion,
        MaierIdentity::Ya1Kummer,
        MaierIdentity::Ya1Reflection,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            MaierIdentity::Y11Kummer => "y11-kummer",
            MaierIdentity::Y11KummerAmended => "y11-kummer-amended",
            MaierIdentity::Y11Inversion => "y11-inversion",
            MaierIdentity::Ya1Kummer => "ya1-kummer",
            MaierIdentity::Ya1Reflection => "ya1-reflection",
        }
    }

    /// Both sides of the identity as local expansions.
    pub fn sides(&self, p: &HeunParams) -> Result<(LocalExpansion, LocalExpansion)> {
        let HeunParams {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        } = *p;
        let one_minus_z = ArgumentMap::Affine {
            scale: -ONE,
            shift: ONE,
        };
        let to_a = ArgumentMap::Affine {
            scale: (1.0 - a).inv(),
            shift: -a / (1.0 - a),
        };
        let y11 = || -> Result<LocalExpansion> {
            let hp = HeunParams::new(1.0 - a, alpha * beta - q, alpha, beta, delta, gamma)?;
            Ok(LocalExpansion::new("y11", None, one_minus_z, FrobeniusSeries::local_heun(hp)))
        };
        let ya1 = || -> Result<LocalExpansion> {
            let hp = HeunParams::new(
                a / (a - 1.0),
                (a * alpha * beta - q) / (a - 1.0),
                alpha,
                beta,
                epsilon,
                delta,
            )?;
            Ok(LocalExpansion::new("ya1", None, to_a, FrobeniusSeries::local_heun(hp)))
        };
        match self {
            MaierIdentity::Y11Kummer | MaierIdentity::Y11KummerAmended => {
                let sign = if *self == MaierIdentity::Y11Kummer { 1.0 } else { -1.0 };
                let hp = HeunParams::new(
                    1.0 - a,
                    -q + alpha * beta + sign * (gamma - 1.0) * (1.0 - a) * delta,
                    1.0 + alpha - gamma,
                    1.0 + beta - gamma,
                    delta,
                    2.0 - gamma,
                )?;
                let rhs = LocalExpansion::new(
                    "z^(1-γ) Hl(1-a, ...; 1-z)",
                    Some(PowerPrefactor::new(ONE, ZERO, 1.0 - gamma)),
                    one_minus_z,
                    FrobeniusSeries::local_heun(hp),
                );
                Ok((y11()?, rhs))
            }
            MaierIdentity::Y11Inversion => {
                let hp = HeunParams::new(
                    1.0 - a.inv(),
                    (-q + alpha * ((a - 1.0) * delta + beta)) / a,
                    alpha,
                    alpha + 1.0 - gamma,
                    delta,
                    1.0 + alpha - beta,
                )?;
                let rhs = LocalExpansion::new(
                    "z^(-α) Hl(1-1/a, ...; 1-1/z)",
                    Some(PowerPrefactor::new(ONE, ZERO, -alpha)),
                    ArgumentMap::Reciprocal {
                        scale: -ONE,
                        shift: ONE,
                    },
                    FrobeniusSeries::local_heun(hp),
                );
                Ok((y11()?, rhs))
            }
            MaierIdentity::Ya1Kummer => {
                let big_q = (a * (1.0 + alpha - gamma) * (1.0 + beta - gamma)
                    - q
                    - (1.0 - gamma) * (alpha + beta + 1.0 - gamma + (a - 1.0) * delta))
                    / (a - 1.0);
                let hp = HeunParams::new(
                    a / (a - 1.0),
                    big_q,
                    1.0 + alpha - gamma,
                    1.0 + beta - gamma,
                    epsilon,
                    delta,
                )?;
                let rhs = LocalExpansion::new(
                    "(z/a)^(1-γ) Hl(a/(a-1), Q; ...)",
                    Some(PowerPrefactor::new(a.inv(), ZERO, 1.0 - gamma)),
                    to_a,
                    FrobeniusSeries::local_heun(hp),
                );
                Ok((ya1()?, rhs))
            }
            MaierIdentity::Ya1Reflection => {
                if (a + 1.0).norm() > INTEGER_TOL {
                    return Err(Error::InvalidParameters(format!(
                        "the reflected y_a1 representation needs a = -1, got {a}"
                    )));
                }
                let hp = HeunParams::new(
                    (1.0 - a).inv(),
                    (-q + alpha * ((alpha + 1.0 - gamma - delta) * (1.0 - a) + beta)) / (1.0 - a),
                    alpha,
                    alpha + 1.0 - gamma,
                    epsilon,
                    delta,
                )?;
                let rhs = LocalExpansion::new(
                    "(-z)^(-α) Hl(1/(1-a), ...; (1/z-a)/(1-a))",
                    Some(PowerPrefactor::new(-ONE, ZERO, -alpha)),
                    ArgumentMap::Reciprocal {
                        scale: (1.0 - a).inv(),
                        shift: -a / (1.0 - a),
                    },
                    FrobeniusSeries::local_heun(hp),
                );
                Ok((ya1()?, rhs))
            }
        }
    }

    /// `|LHS(z) - RHS(z)|` with both sides summed independently.
    pub fn residual(&self, p: &HeunParams, z: Complex64, tol: f64) -> Result<f64> {
        let (lhs, rhs) = self.sides(p)?;
        Ok((lhs.evaluate(z, tol)? - rhs.evaluate(z, tol)?).norm())
    }
}

/// Residual of the `y11` Kummer-type identity at `z`.
pub fn maier_y11_identity_residual(p: &HeunParams, z: Complex64, tol: f64) -> Result<f64> {
    MaierIdentity::Y11Kummer.residual(p, z, tol)
}
