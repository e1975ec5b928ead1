// SPDX-License-Identifier: Apache-2.0

//! Logarithmic negativity of two-mode squeezed vacuum states sent through
//! laser (gain + loss) channels.
//!
//! The crate has two independent halves that are checked against each other:
//!
//! * [`phase_space`] and [`negativity`] evaluate closed-form Gaussian
//!   expressions: the evolved Wigner function, the normally ordered density
//!   operator and the trace norm of its partial transpose.
//! * [`fock`] works with dense matrices on a truncated photon-number basis and
//!   serves as a brute-force oracle: operator builders, (partial) transposes,
//!   a Lindblad integrator and a Hermitian eigensolver.
//!
//! [`verify`] runs the cross-checks and emits one [`verify::CheckReport`] per
//! check.

// `!(x > 0.0)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod negativity;
pub mod phase_space;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{ChannelParams, FockOp, Mode};
pub use negativity::{NegativityReport, OmegaParams, MParams};
pub use phase_space::{GaussianState, WignerParams};

pub use num_complex::Complex64;
