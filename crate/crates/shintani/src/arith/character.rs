// SPDX-License-Identifier: Apache-2.0

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::kronecker::kronecker;
use crate::error::{Error, Result};

/// A Dirichlet character with values in `{-1, 0, 1}`, stored as a table.
///
/// Only trivial and quadratic characters are representable; the table form
/// leaves room for cyclotomic values later.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DirichletChar {
    modulus: u64,
    values: Vec<i8>,
}

impl DirichletChar {
    pub fn trivial(modulus: u64) -> Self {
        let modulus = modulus.max(1);
        let values = (0..modulus)
            .map(|a| if a.gcd(&modulus) == 1 { 1 } else { 0 })
            .collect();
        DirichletChar { modulus, values }
    }

    /// `a -> kronecker(d, a)` on units modulo `modulus`.
    pub fn from_kronecker(d: i64, modulus: u64) -> Result<Self> {
        let modulus = modulus.max(1);
        let values = (0..modulus)
            .map(|a| {
                if a.gcd(&modulus) == 1 {
                    kronecker(d, a as i64) as i8
                } else {
                    0
                }
            })
            .collect();
        Self::from_values(modulus, values)
    }

    /// The quadratic character of conductor `q` (an odd prime or 4), i.e.
    /// the Kronecker symbol of the associated fundamental discriminant.
    pub fn quadratic(q: u64) -> Result<Self> {
        let d: i64 = match q {
            4 => -4,
            8 => 8,
            q if q % 2 == 1 && super::padic::is_prime(q) => {
                if q % 4 == 1 {
                    q as i64
                } else {
                    -(q as i64)
                }
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "no quadratic character of conductor {q}"
                )))
            }
        };
        Self::from_kronecker(d, q)
    }

    /// Validates periodicity, the zero convention and multiplicativity.
    pub fn from_values(modulus: u64, values: Vec<i8>) -> Result<Self> {
        if values.len() as u64 != modulus || modulus == 0 {
            return Err(Error::InvalidInput("character table has wrong length".into()));
        }
        for a in 0..modulus {
            let unit = a.gcd(&modulus) == 1;
            let v = values[a as usize];
            if unit != (v != 0) || !(-1..=1).contains(&v) {
                return Err(Error::InvalidInput(format!("bad character value at {a}")));
            }
        }
        for a in 0..modulus {
            for b in 0..modulus {
                let ab = (a * b % modulus) as usize;
                if values[ab] != values[a as usize] * values[b as usize] {
                    return Err(Error::InvalidInput("table is not multiplicative".into()));
                }
            }
        }
        Ok(DirichletChar { modulus, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn eval(&self, a: i64) -> i32 {
        self.values[a.rem_euclid(self.modulus as i64) as usize] as i32
    }

    pub fn eval_big(&self, a: &num_bigint::BigInt) -> i32 {
        use num_traits::ToPrimitive;
        let r = a
            .mod_floor(&num_bigint::BigInt::from(self.modulus))
            .to_i64()
            .unwrap_or(0);
        self.eval(r)
    }

    pub fn is_trivial(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(a, v)| *v == if (a as u64).gcd(&self.modulus) == 1 { 1 } else { 0 })
    }

    /// The same character viewed modulo a multiple of its modulus.
    pub fn lift(&self, modulus: u64) -> Result<Self> {
        if modulus % self.modulus != 0 {
            return Err(Error::InvalidInput(format!(
                "{modulus} is not a multiple of {}",
                self.modulus
            )));
        }
        let values = (0..modulus)
            .map(|a| {
                if a.gcd(&modulus) == 1 {
                    self.values[(a % self.modulus) as usize]
                } else {
                    0
                }
            })
            .collect();
        Ok(DirichletChar { modulus, values })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.modulus.lcm(&o.modulus);
        let values = (0..m)
            .map(|a| (self.eval(a as i64) * o.eval(a as i64)) as i8)
            .collect();
        DirichletChar { modulus: m, values }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// The factorization `chi = chi_N * chi_p` for a character whose modulus
    /// divides `n * p` with `gcd(n, p) = 1`.
    pub fn factor(&self, n: u64, p: u64) -> Result<(Self, Self)> {
        let np = n * p;
        if n.gcd(&p) != 1 || np % self.modulus != 0 {
            return Err(Error::InvalidInput(format!(
                "character modulus {} does not divide {n}*{p}",
                self.modulus
            )));
        }
        let full = self.lift(np)?;
        // crt(x mod n, y mod p)
        let crt = |x: u64, y: u64| -> u64 { (0..np).find(|t| t % n == x % n && t % p == y % p).unwrap() };
        let tame = (0..n)
            .map(|a| if a.gcd(&n) == 1 { full.values[crt(a, 1) as usize] } else { 0 })
            .collect();
        let wild = (0..p)
            .map(|a| if a.gcd(&p) == 1 { full.values[crt(1, a) as usize] } else { 0 })
            .collect();
        Ok((Self::from_values(n.max(1), tame)?, Self::from_values(p, wild)?))
    }
}
