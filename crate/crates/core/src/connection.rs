//! Connection coefficients and connection matrices of the subclass.
//!
//! With `δ = (α+β+1-γ)/2` and `Re(1-δ) > 0`,
//!
//! ```text
//! q1(α,β,γ) = Γ((γ+1-α-β)/2) Γ((γ+1)/2) / (Γ((γ+1-α)/2) Γ((γ+1-β)/2))
//! q2(α,β,γ) = 2^{1-δ} Γ(δ-1) Γ((γ+1)/2) / (Γ(α/2) Γ(β/2))
//! ```
//!
//! and `y01 = q1 y±1 + q2 y±2` near `±1`. Every matrix maps a pair at the
//! source point to the pair at `±1`: `(y01, y02)ᵀ = C0± (y±1, y±2)ᵀ` and
//! `(y∞1, y∞2)ᵀ = C∞± (y±1, y±2)ᵀ`.
//!
//! The symbol `(-)^w` is ambiguous; [`BranchTag`] selects `e^{+iπw}` or
//! `e^{-iπw}`. Which one holds depends on the half-plane of the evaluation
//! point; [`MatrixKind::upper_half_plane_branch`] records the choices found by
//! continuation along upper-half-plane paths.

use crate::heun_series::{LocalSolutionId, SubclassParams};
use crate::specfun::{self, gauss_2f1_at_one, recip_gamma};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

/// `q1(α, β, γ)`, the Gauss value `₂F₁(α/2, β/2; (γ+1)/2; 1)`.
pub fn q1(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Complex64> {
    gauss_2f1_at_one(alpha * 0.5, beta * 0.5, (gamma + 1.0) * 0.5)
}

/// `q2(α, β, γ)`. `1/Γ` is treated as entire, so the result is exactly zero
/// when `α/2` or `β/2` is a non-positive integer.
pub fn q2(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Complex64> {
    let delta = (alpha + beta + 1.0 - gamma) * 0.5;
    let excess = 1.0 - delta;
    if excess.re <= 0.0 {
        return Err(Error::Divergence(excess.re));
    }
    let weight = recip_gamma(alpha * 0.5) * recip_gamma(beta * 0.5);
    if weight == Complex64::new(0.0, 0.0) {
        return Ok(weight);
    }
    let power = (excess * LN_2).exp();
    Ok(power * specfun::gamma(delta - 1.0)? * specfun::gamma((gamma + 1.0) * 0.5)? * weight)
}

/// `(c11, c12)` with `y01 = c11 y±1 + c12 y±2`; the same pair serves both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionPair {
    pub c11: Complex64,
    pub c12: Complex64,
}

pub fn connection_pair(s: &SubclassParams) -> Result<ConnectionPair> {
    s.admissibility()?;
    if !s.in_theorem_domain() {
        return Err(Error::Divergence((1.0 - s.delta()).re));
    }
    Ok(ConnectionPair {
        c11: q1(s.alpha(), s.beta(), s.gamma())?,
        c12: q2(s.alpha(), s.beta(), s.gamma())?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    ZeroPlus,
    ZeroMinus,
    InfPlus,
    InfMinus,
}

/// Realization of `(-)^w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchTag {
    /// `e^{+iπw}`
    Plus,
    /// `e^{-iπw}`
    Minus,
}

impl BranchTag {
    pub fn phase(&self, w: Complex64) -> Complex64 {
        let sign = match self {
            BranchTag::Plus => 1.0,
            BranchTag::Minus => -1.0,
        };
        (Complex64::new(0.0, sign * PI) * w).exp()
    }

    pub fn flipped(&self) -> Self {
        match self {
            BranchTag::Plus => BranchTag::Minus,
            BranchTag::Minus => BranchTag::Plus,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BranchTag::Plus => "plus",
            BranchTag::Minus => "minus",
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BranchTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(BranchTag::Plus),
            "minus" | "-" => Ok(BranchTag::Minus),
            other => Err(Error::InvalidParameters(format!(
                "unknown branch '{other}' (expected plus or minus)"
            ))),
        }
    }
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 4] = [
        MatrixKind::ZeroPlus,
        MatrixKind::ZeroMinus,
        MatrixKind::InfPlus,
        MatrixKind::InfMinus,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            MatrixKind::ZeroPlus => "0+",
            MatrixKind::ZeroMinus => "0-",
            MatrixKind::InfPlus => "inf+",
            MatrixKind::InfMinus => "inf-",
        }
    }

    pub fn from_pair(&self) -> [LocalSolutionId; 2] {
        match self {
            MatrixKind::ZeroPlus | MatrixKind::ZeroMinus => {
                [LocalSolutionId::Y01, LocalSolutionId::Y02]
            }
            MatrixKind::InfPlus | MatrixKind::InfMinus => {
                [LocalSolutionId::YInf1, LocalSolutionId::YInf2]
            }
        }
    }

    pub fn to_pair(&self) -> [LocalSolutionId; 2] {
        match self {
            MatrixKind::ZeroPlus | MatrixKind::InfPlus => {
                [LocalSolutionId::YPlus1, LocalSolutionId::YPlus2]
            }
            MatrixKind::ZeroMinus | MatrixKind::InfMinus => {
                [LocalSolutionId::YMinus1, LocalSolutionId::YMinus2]
            }
        }
    }

    /// Whether any entry carries a `(-)^w` factor.
    pub fn has_phase(&self) -> bool {
        *self != MatrixKind::ZeroPlus
    }

    /// The branch that holds for evaluation points with `Im z > 0`, fixed by
    /// continuing the source pair along upper-half-plane paths. For `Im z < 0`
    /// the opposite tag holds. `C0+` has no phase; its entry is nominal.
    pub fn upper_half_plane_branch(&self) -> BranchTag {
        match self {
            MatrixKind::ZeroPlus => BranchTag::Plus,
            MatrixKind::ZeroMinus => BranchTag::Plus,
            MatrixKind::InfPlus => BranchTag::Minus,
            MatrixKind::InfMinus => BranchTag::Plus,
        }
    }

    /// The branch for an evaluation point in the open upper or lower half-plane.
    pub fn branch_at(&self, z: Complex64) -> BranchTag {
        let upper = self.upper_half_plane_branch();
        if z.im < 0.0 {
            upper.flipped()
        } else {
            upper
        }
    }

    /// The parameter triples feeding q1/q2 in rows 1 and 2.
    pub fn row_triples(&self, s: &SubclassParams) -> [SubclassParams; 2] {
        match self {
            MatrixKind::ZeroPlus | MatrixKind::ZeroMinus => [*s, s.second_solution_triple()],
            MatrixKind::InfPlus | MatrixKind::InfMinus => {
                [s.infinity_triple(1), s.infinity_triple(2)]
            }
        }
    }

    /// Exponents `w` of the `(-)^w` factors, per entry; `None` for no factor.
    fn phase_exponents(&self, s: &SubclassParams) -> [[Option<Complex64>; 2]; 2] {
        let (a, b, g, d) = (s.alpha(), s.beta(), s.gamma(), s.delta());
        match self {
            MatrixKind::ZeroPlus => [[None, None], [None, None]],
            MatrixKind::ZeroMinus => [[None, None], [Some(1.0 - g), Some(1.0 - g)]],
            MatrixKind::InfPlus => [[None, Some(d - 1.0)], [None, Some(d - 1.0)]],
            MatrixKind::InfMinus => [
                [Some(-a), Some(d - a - 1.0)],
                [Some(-b), Some(d - b - 1.0)],
            ],
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0+" | "zero-plus" | "c0+" => Ok(MatrixKind::ZeroPlus),
            "0-" | "zero-minus" | "c0-" => Ok(MatrixKind::ZeroMinus),
            "inf+" | "∞+" | "cinf+" => Ok(MatrixKind::InfPlus),
            "inf-" | "∞-" | "cinf-" => Ok(MatrixKind::InfMinus),
            other => Err(Error::InvalidParameters(format!(
                "unknown matrix kind '{other}' (expected 0+, 0-, inf+, inf-)"
            ))),
        }
    }
}

/// A 2×2 connection matrix: `from_pair = entries · to_pair`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionMatrix {
    pub kind: MatrixKind,
    pub entries: [[Complex64; 2]; 2],
    pub from_pair: [LocalSolutionId; 2],
    pub to_pair: [LocalSolutionId; 2],
    pub branch_tag: BranchTag,
}

impl ConnectionMatrix {
    pub fn determinant(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    /// Applies the matrix to values of the target pair.
    pub fn apply(&self, to_values: [Complex64; 2]) -> [Complex64; 2] {
        let e = &self.entries;
        [
            e[0][0] * to_values[0] + e[0][1] * to_values[1],
            e[1][0] * to_values[0] + e[1][1] * to_values[1],
        ]
    }
}

/// Row `row` (0 or 1) of the matrix, or the reason it is unavailable.
pub fn matrix_row(
    kind: MatrixKind,
    s: &SubclassParams,
    branch: BranchTag,
    row: usize,
) -> Result<[Complex64; 2]> {
    let t = kind.row_triples(s)[row];
    let phases = kind.phase_exponents(s)[row];
    let wrap = |source: Error| Error::RowOutOfDomain {
        row: row + 1,
        source: Box::new(source),
    };
    let base = [
        q1(t.alpha(), t.beta(), t.gamma()).map_err(wrap)?,
        q2(t.alpha(), t.beta(), t.gamma()).map_err(wrap)?,
    ];
    let mut out = base;
    for (entry, w) in out.iter_mut().zip(phases) {
        if let Some(w) = w {
            *entry *= branch.phase(w);
        }
    }
    Ok(out)
}

/// Per-row availability, for reporting partially valid matrices.
pub fn row_domains(kind: MatrixKind, s: &SubclassParams) -> [Result<()>; 2] {
    [0, 1].map(|row| matrix_row(kind, s, BranchTag::Plus, row).map(|_| ()))
}

pub fn matrix(kind: MatrixKind, s: &SubclassParams, branch: BranchTag) -> Result<ConnectionMatrix> {
    s.admissibility()?;
    let entries = [
        matrix_row(kind, s, branch, 0)?,
        matrix_row(kind, s, branch, 1)?,
    ];
    Ok(ConnectionMatrix {
        kind,
        entries,
        from_pair: kind.from_pair(),
        to_pair: kind.to_pair(),
        branch_tag: branch,
    })
}

/// The matrix with the frozen upper-half-plane branch.
pub fn default_matrix(kind: MatrixKind, s: &SubclassParams) -> Result<ConnectionMatrix> {
    matrix(kind, s, kind.upper_half_plane_branch())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::heun_series::eval_local;
    use crate::specfun::gamma;
    use proptest::prelude::*;

    const TOL: f64 = 1e-15;

    fn sample() -> SubclassParams {
        SubclassParams::real(0.5, 0.8, 0.9)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn q1_trivial_cases() {
        assert_eq!(q1(c64(0.0, 0.0), c64(0.8, 0.0), c64(0.9, 0.0)).unwrap(), c64(1.0, 0.0));
        let (a, b, g) = (c64(0.3, 0.2), c64(-0.7, 0.1), c64(0.4, -0.3));
        assert_eq!(q1(a, b, g).unwrap(), q1(b, a, g).unwrap());
        assert_eq!(
            q1(a, b, g).unwrap(),
            gauss_2f1_at_one(a * 0.5, b * 0.5, (g + 1.0) * 0.5).unwrap()
        );
    }

    #[test]
    fn q1_matches_gauss_summation() {
        // Σ (p)_n (q)_n / (n! (r)_n) with p + q - r = -0.3
        let (p, q, r) = (0.25, 0.4, 0.95);
        let (mut term, mut sum, mut n) = (1.0f64, 1.0f64, 0.0);
        // terms decay like n^{-1.3}; accelerate with the exact tail asymptotics
        while n < 2.0e6 {
            term *= (p + n) * (q + n) / ((n + 1.0) * (r + n));
            sum += term;
            n += 1.0;
        }
        let tail = term * n / 0.3;
        let v = q1(c64(0.5, 0.0), c64(0.8, 0.0), c64(0.9, 0.0)).unwrap();
        assert!((v.re - (sum + tail)).abs() < 1e-6, "{v} vs {}", sum + tail);
    }

    #[test]
    fn q2_trivial_cases() {
        assert_eq!(q2(c64(0.0, 0.0), c64(0.8, 0.0), c64(0.9, 0.0)).unwrap(), c64(0.0, 0.0));
        assert_eq!(q2(c64(0.8, 0.0), c64(-2.0, 0.0), c64(0.3, 0.0)).unwrap(), c64(0.0, 0.0));
        let v = q2(c64(0.5, 0.0), c64(0.8, 0.0), c64(0.9, 0.0)).unwrap();
        let expected = 2f64.powf(0.3) * gamma(c64(-0.3, 0.0)).unwrap() * gamma(c64(0.95, 0.0)).unwrap()
            / (gamma(c64(0.25, 0.0)).unwrap() * gamma(c64(0.4, 0.0)).unwrap());
        assert!(close(v, expected, 1e-14));
        assert!(matches!(
            q2(c64(2.5, 0.0), c64(1.8, 0.0), c64(0.9, 0.0)),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn pair_for_alpha_zero_is_trivial() {
        let s = SubclassParams::real(0.0, 0.8, 0.9);
        let p = connection_pair(&s).unwrap();
        assert_eq!(p.c11, c64(1.0, 0.0));
        assert_eq!(p.c12, c64(0.0, 0.0));
    }

    #[test]
    fn pair_reconstructs_y01_on_both_sides() {
        let s = sample();
        let p = connection_pair(&s).unwrap();
        for x in [0.3, -0.9] {
            let z = c64(x, 0.0);
            let (first, second) = if x > 0.0 {
                (LocalSolutionId::YPlus1, LocalSolutionId::YPlus2)
            } else {
                (LocalSolutionId::YMinus1, LocalSolutionId::YMinus2)
            };
            let lhs = eval_local(LocalSolutionId::Y01, &s, z, TOL).unwrap();
            let rhs = p.c11 * eval_local(first, &s, z, TOL).unwrap()
                + p.c12 * eval_local(second, &s, z, TOL).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10, "x = {x}: {:e}", (lhs - rhs).norm());
        }
    }

    #[test]
    fn pair_rejects_inadmissible_and_out_of_domain() {
        assert!(matches!(
            connection_pair(&SubclassParams::real(0.5, 0.8, 2.0)),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(
            connection_pair(&SubclassParams::real(2.5, 1.8, 0.9)),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn zero_matrices_structure() {
        let s = sample();
        let plus = matrix(MatrixKind::ZeroPlus, &s, BranchTag::Plus).unwrap();
        let p = connection_pair(&s).unwrap();
        assert_eq!(plus.entries[0], [p.c11, p.c12]);
        for tag in [BranchTag::Plus, BranchTag::Minus] {
            let minus = matrix(MatrixKind::ZeroMinus, &s, tag).unwrap();
            assert_eq!(minus.entries[0], plus.entries[0]);
            let ratio = minus.entries[1][0] / plus.entries[1][0];
            assert!(close(ratio, tag.phase(1.0 - s.gamma()), 1e-14));
        }
        assert_eq!(plus.from_pair, [LocalSolutionId::Y01, LocalSolutionId::Y02]);
        assert_eq!(plus.to_pair, [LocalSolutionId::YPlus1, LocalSolutionId::YPlus2]);
    }

    #[test]
    fn inf_plus_entry_uses_the_tagged_phase() {
        let s = sample();
        let m = matrix(MatrixKind::InfPlus, &s, BranchTag::Plus).unwrap();
        let t = s.infinity_triple(1);
        let expected = (c64(0.0, PI) * (s.delta() - 1.0)).exp()
            * q2(t.alpha(), t.beta(), t.gamma()).unwrap();
        assert!(close(m.entries[0][1], expected, 1e-13));
    }

    #[test]
    fn rows_report_their_domain() {
        // δ = 1.7: every row shares δ, so row 1 already fails
        let s = SubclassParams::real(2.5, 1.8, 0.9);
        let rows = row_domains(MatrixKind::ZeroPlus, &s);
        assert!(matches!(rows[0], Err(Error::RowOutOfDomain { row: 1, .. })));
        assert!(matches!(
            matrix(MatrixKind::ZeroPlus, &s, BranchTag::Plus),
            Err(Error::RowOutOfDomain { row: 1, .. })
        ));
        let ok = row_domains(MatrixKind::InfMinus, &sample());
        assert!(ok.iter().all(|r| r.is_ok()));
    }

    #[test]
    fn branch_phases() {
        let w = c64(0.3, 0.1);
        let p = BranchTag::Plus.phase(w);
        let m = BranchTag::Minus.phase(w);
        assert!(close(p * m, c64(1.0, 0.0), 1e-15));
        assert!(close(BranchTag::Plus.phase(c64(1.0, 0.0)), c64(-1.0, 0.0), 1e-15));
        for kind in MatrixKind::ALL {
            assert_eq!(kind.branch_at(c64(0.0, -1.0)), kind.branch_at(c64(0.0, 1.0)).flipped());
            assert_eq!(kind.label().parse::<MatrixKind>().unwrap(), kind);
        }
    }

    fn admissible() -> impl Strategy<Value = SubclassParams> {
        (-1.5f64..1.5, -1.5f64..1.5, 0.05f64..1.95, -0.3f64..0.3, -0.3f64..0.3, -0.3f64..0.3)
            .prop_map(|(a, b, g, ai, bi, gi)| {
                SubclassParams::new(c64(a, ai), c64(b, bi), c64(g, gi))
            })
            .prop_filter("admissible, theorem domain", |s| {
                s.is_admissible() && s.integer_distance() > 1e-2 && s.delta().re < 0.95
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn determinants_are_nonzero(s in admissible()) {
            for kind in MatrixKind::ALL {
                if let Ok(m) = matrix(kind, &s, kind.upper_half_plane_branch()) {
                    prop_assert!(m.determinant().norm() > 1e-10, "{kind}: {}", m.determinant());
                }
            }
        }

        #[test]
        fn coefficients_are_continuous(s in admissible()) {
            let h = 1e-8;
            let base = connection_pair(&s).unwrap();
            let moved = SubclassParams::new(s.alpha() + h, s.beta() - h, s.gamma() + h);
            if let Ok(p) = connection_pair(&moved) {
                for (x, y) in [(base.c11, p.c11), (base.c12, p.c12)] {
                    prop_assert!((x - y).norm() <= 1e-5 * x.norm().max(1e-3));
                }
            }
        }

        #[test]
        fn conjugate_parameters_give_conjugate_coefficients(s in admissible()) {
            let c = SubclassParams::new(s.alpha().conj(), s.beta().conj(), s.gamma().conj());
            let (p, pc) = (connection_pair(&s).unwrap(), connection_pair(&c).unwrap());
            prop_assert!((p.c11.conj() - pc.c11).norm() <= 1e-12 * p.c11.norm().max(1.0));
            prop_assert!((p.c12.conj() - pc.c12).norm() <= 1e-12 * p.c12.norm().max(1.0));
        }
    }
}
