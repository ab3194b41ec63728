//! Finite-dimensional Hilbert-Schmidt frame toolkit.
//!
//! The crate works over `C^n` and over the Hilbert-Schmidt space `C2(C^m)`
//! of `m x m` matrices with the trace inner product. It provides:
//!
//! * dense complex matrices with the spectral primitives the frame
//!   machinery needs ([`matrix`]),
//! * ordinary vector frames, g-frames, and Hilbert-Schmidt frames with
//!   their frame operators and canonical/alternate duals ([`vector_frame`],
//!   [`hs_frame`]),
//! * tolerance-checked evaluations of the frame identities and
//!   inequalities ([`identities`]),
//! * seeded generators for random and structured test frames
//!   ([`generators`]).
//!
//! Inner products are conjugate-linear in the second slot throughout:
//! `<x, y> = y^H x`, and on `C2(C^m)` `[T, S] = tr(S^H T)`.

pub mod error;
pub mod generators;
pub mod hs_frame;
pub mod identities;
pub mod matrix;
mod rng;
pub mod subset;
pub mod vector_frame;

pub use error::{FrameError, Result};
pub use matrix::{ComplexMatrix, HermitianEig, HermitianFn, SvdResult};
pub use subset::{SubsetMask, SubsetPolicy};

/// Complex scalar type used across the crate.
pub type Complex64 = num_complex::Complex<f64>;
