// SPDX-License-Identifier: Apache-2.0

//! Classical and overconvergent Shintani liftings computed in exact arithmetic.
//!
//! The crate goes from modular symbols over `Gamma_0(Np)` to half-integral
//! weight q-expansions. On the classical side, coefficients are rationals or
//! residues mod `p^M`. On the overconvergent side, coefficients are truncated
//! moment tables of p-adic distributions. Hecke operators act on both sides,
//! and the `shintani::verify` module checks that the two sides agree.

pub mod arith;
pub mod cli;
pub mod dist;
pub mod error;
pub mod modsym;
pub mod ocsymb;
pub mod qf;
pub mod shintani;

pub use error::{Error, Result};
