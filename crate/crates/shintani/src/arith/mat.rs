// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn from_big(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// `S = [[0,-1],[1,0]]`.
    pub fn s() -> Self {
        Mat2::new(0, -1, 1, 0)
    }

    /// The order-three element `[[0,-1],[1,-1]]`.
    pub fn tau() -> Self {
        Mat2::new(0, -1, 1, -1)
    }

    pub fn iota() -> Self {
        Mat2::new(1, 0, 0, -1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Adjugate `[[d,-b],[-c,a]]`; equals the inverse when `det = 1`.
    pub fn adj(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut base = self.clone();
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_sl2(&self) -> bool {
        self.det().is_one()
    }

    /// Membership in Gamma_0(m): determinant one and `m | c`.
    pub fn in_gamma0(&self, m: u64) -> bool {
        self.is_sl2() && (&self.c).mod_floor(&BigInt::from(m)).is_zero()
    }

    /// Membership in the semigroup S_0(m): `m | c`, `gcd(a, m) = 1`, `det > 0`.
    pub fn in_s0(&self, m: u64) -> bool {
        let mb = BigInt::from(m);
        self.det().is_positive() && self.c.mod_floor(&mb).is_zero() && self.a.gcd(&mb).is_one()
    }

    /// Entries as `i64` when they all fit.
    pub fn to_i64(&self) -> Option<[i64; 4]> {
        use num_traits::ToPrimitive;
        Some([
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ])
    }

    /// Entries reduced into `[0, m)`.
    pub fn residues(&self, m: u64) -> [u64; 4] {
        use num_traits::ToPrimitive;
        let mb = BigInt::from(m);
        let r = |x: &BigInt| x.mod_floor(&mb).to_u64().unwrap_or(0);
        [r(&self.a), r(&self.b), r(&self.c), r(&self.d)]
    }

    pub fn max_abs_entry(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Extended gcd on `BigInt`: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Some `[[a, b], [c, d]]` in SL2(Z) with the given coprime bottom row.
pub fn complete_bottom_row(c: &BigInt, d: &BigInt) -> Option<Mat2> {
    let (g, x, y) = ext_gcd(d, c);
    // d x + c y = 1, so a = x, b = -y gives a d - b c = 1
    if !g.is_one() {
        return None;
    }
    Some(Mat2::from_big(x, -y, c.clone(), d.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_and_tau_orders() {
        assert_eq!(Mat2::s().pow(2), Mat2::identity().neg());
        assert_eq!(Mat2::tau().pow(3), Mat2::identity());
    }

    #[test]
    fn completion_is_unimodular() {
        for (c, d) in [(0i64, 1i64), (3, 7), (-5, 2), (11, -4), (1, 0)] {
            let m = complete_bottom_row(&c.into(), &d.into()).unwrap();
            assert!(m.is_sl2(), "{m}");
            assert_eq!(m.c, c.into());
            assert_eq!(m.d, d.into());
        }
        assert!(complete_bottom_row(&BigInt::from(4), &BigInt::from(6)).is_none());
    }
}
