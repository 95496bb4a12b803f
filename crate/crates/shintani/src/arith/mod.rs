// SPDX-License-Identifier: Apache-2.0

//! Exact base arithmetic: residues mod `p^M`, Kronecker symbols, Dirichlet
//! characters, cusps and continued fractions, and dense linear algebra.

pub mod character;
pub mod cusp;
pub mod divisor;
pub mod kronecker;
pub mod linalg;
pub mod mat;
pub mod p1;
pub mod padic;
pub mod ring;

pub use character::DirichletChar;
pub use cusp::{cfrac_path, RationalCusp};
pub use divisor::Divisor0;
pub use kronecker::kronecker;
pub use mat::Mat2;
pub use p1::P1List;
pub use padic::PadicApprox;
pub use ring::{Rationals, Ring, ZpRing};
