// SPDX-License-Identifier: Apache-2.0

//! Coefficient rings: exact rationals and `Z/p^M`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::padic::{prime_power, PadicApprox};
use crate::error::Result;

/// A commutative coefficient ring, passed around as a context value.
pub trait Ring: Clone + Debug + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn from_int(&self, n: &BigInt) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `None` for zero; 0 for every non-zero element of a field.
    fn valuation(&self, a: &Self::E) -> Option<u32>;
    /// Some `q` with `q * b = a`, when one exists.
    fn divide(&self, a: &Self::E, b: &Self::E) -> Option<Self::E>;
    /// `Some(M)` for `Z/p^M`, `None` for a field of characteristic zero.
    fn precision(&self) -> Option<u32>;
    fn render(&self, a: &Self::E) -> String;

    /// A positive `n` with `n = 0` in the ring, if any.
    fn characteristic(&self) -> Option<BigInt> {
        None
    }

    fn from_i64(&self, n: i64) -> Self::E {
        self.from_int(&BigInt::from(n))
    }

    fn inv(&self, a: &Self::E) -> Option<Self::E> {
        self.divide(&self.one(), a)
    }

    fn pow(&self, a: &Self::E, e: u64) -> Self::E {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Whether `6` is a unit.
    fn six_invertible(&self) -> bool {
        self.inv(&self.from_i64(6)).is_some()
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn valuation(&self, a: &BigRational) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(0)
        }
    }
    fn divide(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            if a.is_zero() {
                Some(BigRational::zero())
            } else {
                None
            }
        } else {
            Some(a / b)
        }
    }
    fn precision(&self) -> Option<u32> {
        None
    }
    fn render(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// `Z/p^M` with `p >= 5` prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZpRing {
    pub p: u64,
    pub m: u32,
    modulus: u64,
}

impl ZpRing {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        // validates p and m
        PadicApprox::new(0, p, m)?;
        Ok(ZpRing {
            p,
            m,
            modulus: prime_power(p, m)?,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elt(&self, v: i64) -> PadicApprox {
        PadicApprox::with_modulus(v, self.p, self.m, self.modulus)
    }

    pub fn from_residue(&self, r: u64) -> PadicApprox {
        PadicApprox::from_residue(r, self.p, self.m, self.modulus)
    }

    /// The same `p` at lower precision.
    pub fn reduce_to(&self, m: u32) -> Result<ZpRing> {
        ZpRing::new(self.p, m)
    }
}

impl Ring for ZpRing {
    type E = PadicApprox;

    fn zero(&self) -> PadicApprox {
        self.elt(0)
    }
    fn one(&self) -> PadicApprox {
        self.elt(1)
    }
    fn add(&self, a: &PadicApprox, b: &PadicApprox) -> PadicApprox {
        *a + *b
    }
    fn sub(&self, a: &PadicApprox, b: &PadicApprox) -> PadicApprox {
        *a - *b
    }
    fn mul(&self, a: &PadicApprox, b: &PadicApprox) -> PadicApprox {
        *a * *b
    }
    fn neg(&self, a: &PadicApprox) -> PadicApprox {
        -*a
    }
    fn from_int(&self, n: &BigInt) -> PadicApprox {
        PadicApprox::from_bigint(n, &self.zero())
    }
    fn from_i64(&self, n: i64) -> PadicApprox {
        self.elt(n)
    }
    fn is_zero(&self, a: &PadicApprox) -> bool {
        a.is_zero()
    }
    fn valuation(&self, a: &PadicApprox) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(a.valuation())
        }
    }
    fn divide(&self, a: &PadicApprox, b: &PadicApprox) -> Option<PadicApprox> {
        a.divide(b)
    }
    fn precision(&self) -> Option<u32> {
        Some(self.m)
    }
    fn render(&self, a: &PadicApprox) -> String {
        a.residue().to_string()
    }
    fn characteristic(&self) -> Option<BigInt> {
        Some(BigInt::from(self.modulus))
    }
    fn pow(&self, a: &PadicApprox, e: u64) -> PadicApprox {
        a.pow(e)
    }
}

/// Reduce a rational with denominator prime to `p` into `Z/p^M`.
pub fn rational_to_zp(r: &BigRational, ring: &ZpRing) -> Option<PadicApprox> {
    let num = ring.from_int(r.numer());
    let den = ring.from_int(r.denom());
    Some(num * den.inverse()?)
}
