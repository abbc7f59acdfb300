//! Steering, Bell-nonlocality and measurement-coexistence criteria for
//! two-qubit states in the two-setting, two-outcome scenario.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; randomness is always driven by an explicit seed.
//!
//! Layout:
//!
//! - [`linalg`]: fixed-size complex/real matrices, Hermitian eigensolvers,
//!   3×3 SVD and the dual basis of two Bloch vectors.
//! - [`states`]: the Bloch parametrisation `(α, β, T)`, the named state
//!   families, concurrence and negativity.
//! - [`measurements`]: projective, binary and trine qubit measurements and
//!   the operator span of Bob's effects.
//! - [`assemblage`]: Bob's conditional states, their projection onto a span
//!   and the steering-equivalent observables.
//! - [`criteria`]: closed-form decision procedures (coexistence, CHSH,
//!   analog CHSH, concurrence bounds).
//! - [`sdp`]: deterministic strategies and the (restricted) LHS feasibility
//!   problems, solved by a small conic interior-point method.
//! - [`statistics`]: Born-rule correlations and finite-shot sampling.
#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies sqrt & co. on toolchains without core float
// math; newer compilers resolve the inherent methods and flag the import.
#![allow(unused_imports)]

extern crate alloc;

pub mod assemblage;
pub mod criteria;
mod error;
pub mod linalg;
pub mod measurements;
pub mod sdp;
pub mod states;
pub mod statistics;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Mat3, Matrix2, Matrix4, QubitOperator, Vec3};
pub use states::TwoQubitState;
