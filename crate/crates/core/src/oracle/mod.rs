//! Independent numerical checks: limit sequences for `c12`, the auxiliary
//! lemmas, and ODE continuation along complex paths.

pub mod continuation;
pub mod lemmas;
pub mod limits;
pub mod quadrature;
pub mod verify;

pub use continuation::{continue_solution, evaluate_anywhere, ContinuationPath, ContinuationResult};
pub use lemmas::{lemma1_beta_check, lemma2_check, lemma3_integral_check};
pub use limits::{limit_sequence_c12, limit_table, LimitEstimate, LimitRow};
pub use verify::{verify_both_branches, verify_matrix, ResidualReport};
