// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::mat::Mat2;
use crate::error::{Error, Result};

/// A point of `P^1(Q)`: infinity or a reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RationalCusp {
    Infinity,
    Finite { num: BigInt, den: BigInt },
}

impl RationalCusp {
    /// `num/den` in lowest terms; `den = 0` gives infinity.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            if num.is_zero() {
                return Err(Error::InvalidInput("0/0 is not a cusp".into()));
            }
            return Ok(RationalCusp::Infinity);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok(RationalCusp::Finite { num: n, den: d })
    }

    pub fn integer(n: i64) -> Self {
        RationalCusp::Finite {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalCusp::Infinity)
    }

    /// Homogeneous coordinates `(num, den)`, with infinity as `(1, 0)`.
    pub fn coords(&self) -> (BigInt, BigInt) {
        match self {
            RationalCusp::Infinity => (BigInt::one(), BigInt::zero()),
            RationalCusp::Finite { num, den } => (num.clone(), den.clone()),
        }
    }

    /// Mobius action `z -> (a z + b)/(c z + d)` of a matrix with non-zero determinant.
    pub fn act(&self, g: &Mat2) -> RationalCusp {
        let (x, y) = self.coords();
        let num = &g.a * &x + &g.b * &y;
        let den = &g.c * &x + &g.d * &y;
        RationalCusp::new(num, den).expect("non-degenerate matrix")
    }
}

impl fmt::Display for RationalCusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalCusp::Infinity => write!(f, "oo"),
            RationalCusp::Finite { num, den } if den.is_one() => write!(f, "{num}"),
            RationalCusp::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

/// Unimodular steps from infinity to `c` along its continued-fraction convergents.
///
/// Step `j` is a matrix `g_j` of determinant one with `g_j(0)` the previous
/// convergent (infinity for the first step) and `g_j(oo)` the next one, so
/// `{c} - {oo}` is the sum of the `{g_j oo} - {g_j 0}`.
pub fn cfrac_path(c: &RationalCusp) -> Result<Vec<Mat2>> {
    let (mut num, mut den) = match c {
        RationalCusp::Infinity => {
            return Err(Error::InvalidInput("cfrac_path needs a finite cusp".into()))
        }
        RationalCusp::Finite { num, den } => (num.clone(), den.clone()),
    };
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
    let mut steps = Vec::new();
    loop {
        let (a, r) = num.div_mod_floor(&den);
        let p = &a * &p_prev + &p_prev2;
        let q = &a * &q_prev + &q_prev2;
        // [[p, p_prev], [q, q_prev]] has determinant +-1; flip the first
        // column when it is -1.
        let det = &p * &q_prev - &p_prev * &q;
        let g = if det.is_one() {
            Mat2::from_big(p.clone(), p_prev.clone(), q.clone(), q_prev.clone())
        } else {
            Mat2::from_big(-&p, p_prev.clone(), -&q, q_prev.clone())
        };
        steps.push(g);
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
        if r.is_zero() {
            break;
        }
        num = std::mem::replace(&mut den, r);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_chain(c: &RationalCusp) -> Vec<RationalCusp> {
        let path = cfrac_path(c).unwrap();
        let mut prev = RationalCusp::Infinity;
        let mut chain = vec![prev.clone()];
        for g in &path {
            assert!(g.is_sl2());
            assert_eq!(RationalCusp::integer(0).act(g), prev);
            prev = RationalCusp::Infinity.act(g);
            chain.push(prev.clone());
        }
        assert_eq!(&prev, c);
        chain
    }

    #[test]
    fn zero_is_one_step() {
        let c = RationalCusp::integer(0);
        assert_eq!(cfrac_path(&c).unwrap().len(), 1);
        check_chain(&c);
    }

    #[test]
    fn half_goes_through_zero() {
        let c = RationalCusp::new(1, 2).unwrap();
        let chain = check_chain(&c);
        assert_eq!(chain, vec![RationalCusp::Infinity, RationalCusp::integer(0), c]);
    }

    #[test]
    fn five_thirds() {
        // 5/3 = [1; 1, 2], convergents 1, 2, 5/3
        let c = RationalCusp::new(5, 3).unwrap();
        let chain = check_chain(&c);
        assert_eq!(chain[1], RationalCusp::integer(1));
        assert_eq!(chain[2], RationalCusp::integer(2));
        assert_eq!(chain.len(), 4);
    }

    #[test]
    fn negative_fractions() {
        for (n, d) in [(-7, 3), (-1, 5), (13, -8)] {
            check_chain(&RationalCusp::new(n, d).unwrap());
        }
    }

    #[test]
    fn canonical_form() {
        assert_eq!(RationalCusp::new(4, -6).unwrap(), RationalCusp::new(-2, 3).unwrap());
        assert_eq!(RationalCusp::new(3, 0).unwrap(), RationalCusp::Infinity);
        assert!(RationalCusp::new(0, 0).is_err());
    }
}
