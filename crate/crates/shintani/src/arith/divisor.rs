// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cusp::RationalCusp;
use super::mat::Mat2;
use crate::error::{Error, Result};

/// A degree-zero integral combination of cusps.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Divisor0 {
    terms: BTreeMap<RationalCusp, BigInt>,
}

impl Divisor0 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `{to} - {from}`.
    pub fn path(from: RationalCusp, to: RationalCusp) -> Self {
        let mut d = Self::zero();
        d.add_term(to, BigInt::one());
        d.add_term(from, -BigInt::one());
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (RationalCusp, BigInt)>) -> Result<Self> {
        let mut d = Self::zero();
        for (c, n) in terms {
            d.add_term(c, n);
        }
        let deg: BigInt = d.terms.values().sum();
        if !deg.is_zero() {
            return Err(Error::InvalidInput(format!("divisor has degree {deg}")));
        }
        Ok(d)
    }

    fn add_term(&mut self, c: RationalCusp, n: BigInt) {
        let e = self.terms.entry(c.clone()).or_insert_with(BigInt::zero);
        *e += n;
        if e.is_zero() {
            self.terms.remove(&c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RationalCusp, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Divisor0) -> Divisor0 {
        let mut d = self.clone();
        for (c, n) in &o.terms {
            d.add_term(c.clone(), n.clone());
        }
        d
    }

    pub fn scale(&self, k: &BigInt) -> Divisor0 {
        if k.is_zero() {
            return Self::zero();
        }
        Divisor0 {
            terms: self.terms.iter().map(|(c, n)| (c.clone(), n * k)).collect(),
        }
    }

    /// Pointwise Mobius image `g D`.
    pub fn act(&self, g: &Mat2) -> Divisor0 {
        let mut d = Self::zero();
        for (c, n) in &self.terms {
            d.add_term(c.act(g), n.clone());
        }
        d
    }
}

impl fmt::Display for Divisor0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, n)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{n:+}{{{c}}}")?;
        }
        Ok(())
    }
}
