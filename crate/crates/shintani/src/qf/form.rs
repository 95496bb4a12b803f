// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::Mat2;
use crate::error::{Error, Result};

/// The binary quadratic form `a X^2 + b X Y + c Y^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `gcd(a, b, c)`, zero only for the zero form.
    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn scale(&self, m: i64) -> QuadForm {
        QuadForm::new(self.a * m, self.b * m, self.c * m)
    }

    /// Divides out the content.
    pub fn primitive_part(&self) -> (QuadForm, i64) {
        let g = self.content();
        if g <= 1 {
            return (*self, g.max(1));
        }
        (QuadForm::new(self.a / g, self.b / g, self.c / g), g)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Membership in `F_M`: `(a, M) = 1`, `M | c`, and `M | b` (or `2M | b` for even `M`).
    pub fn in_fm(&self, m: u64) -> bool {
        let m = m as i64;
        let bm = if m % 2 == 0 { 2 * m } else { m };
        self.a.gcd(&m) == 1 && self.b % bm == 0 && self.c % m == 0
    }

    /// The right action `(Q|g)(X, Y) = Q((X, Y) g^{-1})` for `g` in `SL2(Z)`.
    /// Fails when the image or its discriminant does not fit in `i64`.
    pub fn act(&self, g: &Mat2) -> Result<QuadForm> {
        if !g.det().is_one() {
            return Err(Error::NonUnimodular(g.to_string()));
        }
        let (qa, qb, qc) = (BigInt::from(self.a), BigInt::from(self.b), BigInt::from(self.c));
        let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
        let na = &qa * d * d - &qb * b * d + &qc * b * b;
        let nb = -BigInt::from(2) * &qa * c * d + &qb * (a * d + b * c) - BigInt::from(2) * &qc * a * b;
        let nc = &qa * c * c - &qb * a * c + &qc * a * a;
        let fits = (&nb * &nb).to_i64().is_some() && (BigInt::from(4) * &na * &nc).to_i64().is_some();
        match (na.to_i64(), nb.to_i64(), nc.to_i64()) {
            (Some(a), Some(b), Some(c)) if fits => Ok(QuadForm::new(a, b, c)),
            _ => Err(Error::InvalidInput(format!("{self} acted on by {g} overflows i64"))),
        }
    }

    /// The coefficient vector of `Q^k` in the monomials `X^{2k-i} Y^i`, `i = 0..=2k`.
    pub fn power_coeffs(&self, k: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        for _ in 0..k {
            let mut next = vec![BigInt::from(0); out.len() + 2];
            for (i, v) in out.iter().enumerate() {
                next[i] += v * self.a;
                next[i + 1] += v * self.b;
                next[i + 2] += v * self.c;
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Integer square root.
pub fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(QuadForm::new(1, 0, -1).discriminant(), 4);
        assert_eq!(QuadForm::new(1, 1, -1).discriminant(), 5);
        assert_eq!(QuadForm::new(1, 5, 5).discriminant(), 5);
    }

    #[test]
    fn fm_membership() {
        assert!(QuadForm::new(1, 5, 10).in_fm(5));
        assert!(!QuadForm::new(1, 5, 10).in_fm(10));
        assert!(!QuadForm::new(5, 25, 25).in_fm(5));
    }

    // Substitutes (X, Y) g^{-1} symbolically by evaluating at three points.
    fn act_oracle(q: &QuadForm, g: [i64; 4]) -> QuadForm {
        let [a, b, c, d] = g;
        let ev = |x: i64, y: i64| {
            let (u, v) = (x * d - y * c, -x * b + y * a);
            q.a * u * u + q.b * u * v + q.c * v * v
        };
        let na = ev(1, 0);
        let nc = ev(0, 1);
        QuadForm::new(na, ev(1, 1) - na - nc, nc)
    }

    #[test]
    fn action_examples() {
        let q = QuadForm::new(1, 0, -1);
        let g = Mat2::new(1, 1, 0, 1);
        assert_eq!(q.act(&g).unwrap(), QuadForm::new(0, 2, -1));
        assert_eq!(q.act(&g).unwrap(), act_oracle(&q, [1, 1, 0, 1]));
        assert_eq!(q.act(&Mat2::identity()).unwrap(), q);
        let q = QuadForm::new(1, 1, -1);
        assert_eq!(q.act(&Mat2::new(1, 1, 1, 2)).unwrap(), q);
        assert!(matches!(q.act(&Mat2::new(2, 0, 0, 1)), Err(Error::NonUnimodular(_))));
    }

    #[test]
    fn powers() {
        let q = QuadForm::new(2, 3, -1);
        let p: Vec<i64> = q.power_coeffs(2).iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(p, vec![4, 12, 5, -6, 1]);
    }
}
