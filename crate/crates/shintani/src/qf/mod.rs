// SPDX-License-Identifier: Apache-2.0

//! Integral binary quadratic forms: the sets `F_M`, the `SL2(Z)` action,
//! automorphs, cycle divisors and `Gamma_0(M)`-class enumeration.

mod classes;
mod form;
mod reduce;

pub use classes::{
    cycle_chain, cycle_divisor, enumerate_classes, equivalent_under_gamma0, gamma_q, primitive_classes,
    satisfies_normalization, CycleDivisor, Provenance, UnimodularChain,
};
pub use form::{is_square, isqrt, QuadForm};
pub use reduce::{fundamental_automorph, is_reduced, reduce, reduced_cycles, square_canonical};
