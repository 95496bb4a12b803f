// SPDX-License-Identifier: Apache-2.0

//! Residues modulo `p^M`, the finite stand-in for p-adic numbers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z/p^M`.
///
/// Binary operators panic when the operands carry different `(p, M)`;
/// use [`PadicApprox::checked_add`] and friends where that can happen.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PadicApprox {
    residue: u64,
    p: u64,
    m: u32,
    modulus: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^m` when it fits comfortably in 62 bits.
pub fn prime_power(p: u64, m: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc
            .checked_mul(p)
            .filter(|v| *v < (1u64 << 62))
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{m} is too large")))?;
    }
    Ok(acc)
}

impl PadicApprox {
    pub fn new(value: i64, p: u64, m: u32) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} must be a prime >= 5")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("precision must be >= 1".into()));
        }
        let modulus = prime_power(p, m)?;
        Ok(Self::with_modulus(value, p, m, modulus))
    }

    pub(crate) fn with_modulus(value: i64, p: u64, m: u32, modulus: u64) -> Self {
        let r = (value as i128).rem_euclid(modulus as i128) as u64;
        PadicApprox {
            residue: r,
            p,
            m,
            modulus,
        }
    }

    pub(crate) fn from_residue(residue: u64, p: u64, m: u32, modulus: u64) -> Self {
        PadicApprox {
            residue: residue % modulus,
            p,
            m,
            modulus,
        }
    }

    pub fn from_bigint(v: &BigInt, like: &PadicApprox) -> Self {
        let r = v.mod_floor(&BigInt::from(like.modulus)).to_u64().unwrap_or(0);
        PadicApprox { residue: r, ..*like }
    }

    pub fn zero_like(&self) -> Self {
        PadicApprox { residue: 0, ..*self }
    }

    pub fn one_like(&self) -> Self {
        PadicApprox {
            residue: 1 % self.modulus,
            ..*self
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// The valuation, with `valuation(0) = M`.
    pub fn valuation(&self) -> u32 {
        if self.residue == 0 {
            return self.m;
        }
        let mut v = 0;
        let mut r = self.residue;
        while r % self.p == 0 {
            r /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.p != 0
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let r = BigInt::from(self.residue);
        let n = BigInt::from(self.modulus);
        let e = r.extended_gcd(&n);
        let inv = e.x.mod_floor(&n).to_u64()?;
        Some(PadicApprox { residue: inv, ..*self })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Residue as a signed integer in `(-p^M/2, p^M/2]`.
    pub fn centered(&self) -> i64 {
        if self.residue > self.modulus / 2 {
            self.residue as i64 - self.modulus as i64
        } else {
            self.residue as i64
        }
    }

    /// `self = p^v * u` with `u` a unit; exact division by `other` when
    /// `v(other) <= v(self)`. The quotient is only determined modulo
    /// `p^(M - v(other))`; the representative returned has its top digits zero.
    pub fn divide(&self, other: &Self) -> Option<Self> {
        self.check(other);
        if self.is_zero() {
            return Some(self.zero_like());
        }
        let vo = other.valuation();
        if vo == self.m || vo > self.valuation() {
            return None;
        }
        let pv = self.p.pow(vo);
        let num = self.residue / pv;
        let den_unit = PadicApprox {
            residue: other.residue / pv,
            ..*self
        };
        let q = PadicApprox { residue: num, ..*self } * den_unit.inverse()?;
        let reduced = self.modulus / pv;
        Some(PadicApprox {
            residue: q.residue % reduced,
            ..*self
        })
    }

    /// Teichmuller representative of a unit: the `(p-1)`-th root of unity
    /// congruent to `self` modulo `p`.
    pub fn teichmuller(&self) -> Self {
        if !self.is_unit() {
            return self.zero_like();
        }
        let mut t = *self;
        for _ in 0..self.m {
            t = t.pow(self.p);
        }
        t
    }

    fn check(&self, o: &Self) {
        assert!(
            self.p == o.p && self.m == o.m,
            "p-adic precision mismatch: ({}, {}) vs ({}, {})",
            self.p,
            self.m,
            o.p,
            o.m
        );
    }

    pub fn same_ring(&self, o: &Self) -> bool {
        self.p == o.p && self.m == o.m
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        if !self.same_ring(o) {
            return Err(Error::PrecisionMismatch(format!("{self:?} + {o:?}")));
        }
        Ok(*self + *o)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if !self.same_ring(o) {
            return Err(Error::PrecisionMismatch(format!("{self:?} * {o:?}")));
        }
        Ok(*self * *o)
    }
}

impl Add for PadicApprox {
    type Output = PadicApprox;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        let s = self.residue + o.residue;
        PadicApprox {
            residue: if s >= self.modulus { s - self.modulus } else { s },
            ..self
        }
    }
}

impl Sub for PadicApprox {
    type Output = PadicApprox;
    fn sub(self, o: Self) -> Self {
        self.check(&o);
        let s = if self.residue >= o.residue {
            self.residue - o.residue
        } else {
            self.residue + self.modulus - o.residue
        };
        PadicApprox { residue: s, ..self }
    }
}

impl Mul for PadicApprox {
    type Output = PadicApprox;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        let r = (self.residue as u128 * o.residue as u128) % self.modulus as u128;
        PadicApprox {
            residue: r as u64,
            ..self
        }
    }
}

impl Neg for PadicApprox {
    type Output = PadicApprox;
    fn neg(self) -> Self {
        PadicApprox {
            residue: if self.residue == 0 {
                0
            } else {
                self.modulus - self.residue
            },
            ..self
        }
    }
}

impl fmt::Display for PadicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}
