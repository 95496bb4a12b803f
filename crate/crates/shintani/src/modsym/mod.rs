// SPDX-License-Identifier: Apache-2.0

//! Classical modular symbols over `Gamma_0(M)` with values in `L_{k,chi}`:
//! a Manin presentation, evaluation on divisors, Hecke operators, the
//! involution `iota` and rational eigensymbols.

mod eigen;
mod manin;
mod poly;
mod space;

pub use crate::arith::Divisor0;
pub use eigen::{eigensymbols, eigensymbols_in, normalize_content, scalar_ratio, sign_subspace, EigenReport, EigenSystem, SignChoice};
pub use manin::{conj_iota, ManinData, Term};
pub(crate) use poly::pair_coeffs;
pub(crate) use space::factor as factor_u64;
pub use poly::{act_on_poly, action_matrix, check_s0, evaluation_vector, pairing, substitution_matrix, Side, SymPoly};
pub use space::{hecke_matrices, solve_symbol_space, ModularSymbol, SymbolSpace};
