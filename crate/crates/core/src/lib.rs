//! Local solutions of the Heun equation and the closed-form two-point
//! connection problem for the three-parameter subclass
//!
//! ```text
//! y'' + (γ/z + δ/(z-1) + δ/(z+1)) y' + αβ/((z-1)(z+1)) y = 0,   δ = (α+β+1-γ)/2,
//! ```
//!
//! i.e. the Heun equation with `a = -1`, `q = 0`.
//!
//! The crate is split into:
//!
//! * [`specfun`]: complex gamma, log-gamma, Pochhammer, Beta and Gauss ₂F₁(1).
//! * [`heun_series`]: Frobenius series of the local Heun function, the eight
//!   local solutions of the subclass, and the classical transformation identities.
//! * [`connection`]: the closed-form coefficients `q1`, `q2` and the four
//!   connection matrices.
//! * [`oracle`]: independent checks (limit sequences with Richardson
//!   extrapolation, quadrature, complex-path ODE continuation).

pub mod connection;
mod error;
pub mod heun_series;
pub mod oracle;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Convenience constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
