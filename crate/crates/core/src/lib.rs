//! Optimal unambiguous identification of an unknown pure state with one of
//! two reference states that are available only as `N` quantum copies each.
//!
//! The crate works on the compressed space `C^d ⊗ Sym^N(C^d) ⊗ Sym^N(C^d)`
//! (input system first, then the two reference blocks) and provides three
//! independent routes to the optimal mean success probability:
//!
//! * [`povm`]: explicit construction of the optimal measurement from the
//!   spectrum of `A = S(01) + S(02) - 1`,
//! * [`closedform`]: the analytic multiplicity sum, the qubit recoupling
//!   formula and the large-`N` limit,
//! * [`montecarlo`]: averages over Haar-random reference states.

pub mod closedform;
mod error;
pub mod montecarlo;
pub mod povm;
pub mod spectral;
pub mod symspace;

pub use error::{Error, Result};

pub use num_complex::Complex64;
