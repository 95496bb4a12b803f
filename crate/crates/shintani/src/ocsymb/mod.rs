// SPDX-License-Identifier: Apache-2.0

//! Overconvergent modular symbols over `Gamma_0(Np)` with values in the
//! finite model of `D_N`: the solved space, Hecke operators, specialization,
//! slope decompositions and lifting of classical eigensymbols.

mod lift;
mod slopes;
mod space;
mod symbol;

pub use lift::{hecke_eigenvalue, lift_eigensymbol};
pub use slopes::{newton_slopes, slope_data, slope_projector, BlockSlopes, SlopeData, SlopeEntry, SlopeProjector};
pub use space::{solve_oc_space, OcBlock, OcSpace};
pub use symbol::{canonical_lift, specialize_symbol, symbol_to_zp, OCSymbol, OcParams};
