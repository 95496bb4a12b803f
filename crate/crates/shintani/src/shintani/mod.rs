// SPDX-License-Identifier: Apache-2.0

//! Shintani lifts of modular symbols and their Hecke theory.

mod classical;
mod overconvergent;
pub mod verify;

pub use classical::{
    default_character, discriminant_of, exponent_of, halfint_tl2, halfint_tp, j_classical, j_classical_at, shifted_character,
    theta_classical, HalfIntQExp,
};
pub use overconvergent::{j_oc, j_oc_at, qexp_hecke_tl, qexp_hecke_tll, specialize_qexp, theta_oc, FormalQExp};
pub use verify::{verify_equivariance, verify_interpolation, verify_involution, verify_oc_hecke, VerifyReport};
