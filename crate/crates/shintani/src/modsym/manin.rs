// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::p1::lift_coprime;
use crate::arith::{cfrac_path, Divisor0, Mat2, P1List, RationalCusp};
use crate::error::Result;

/// A term `coeff * (x_gen | h)` in an expression over the Manin generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub gen: usize,
    pub h: Mat2,
    pub coeff: BigInt,
}

/// Right cosets `Gamma_0(M) \ SL2(Z)` indexed by `P^1(Z/M)`.
///
/// Generator `i` stands for the value `x_i = Phi({g_i oo} - {g_i 0})` on
/// the coset representative `g_i`.
#[derive(Clone, Debug)]
pub struct ManinData {
    m: u64,
    p1: P1List,
    reps: Vec<Mat2>,
}

impl ManinData {
    pub fn new(m: u64) -> Self {
        let p1 = P1List::new(m);
        let reps = p1
            .points()
            .iter()
            .map(|&(c, d)| {
                let (c, d) = lift_coprime(c, d, m);
                crate::arith::mat::complete_bottom_row(&c.into(), &d.into()).expect("coprime lift")
            })
            .collect();
        ManinData { m, p1, reps }
    }

    pub fn level(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> &Mat2 {
        &self.reps[i]
    }

    pub fn index(&self, g: &Mat2) -> usize {
        self.p1.index_of(&g.c, &g.d).expect("bottom row of a unimodular matrix")
    }

    /// `Phi({g oo} - {g 0}) = x_j | (g_j g^{-1})` for `g` in `SL2(Z)`.
    pub fn unimodular(&self, g: &Mat2) -> Term {
        let j = self.index(g);
        Term { gen: j, h: self.reps[j].mul(&g.adj()), coeff: BigInt::one() }
    }

    /// Expresses `Phi({c} - {oo})` through the generators.
    pub fn path_from_infinity(&self, c: &RationalCusp) -> Result<Vec<Term>> {
        if c.is_infinity() {
            return Ok(Vec::new());
        }
        Ok(cfrac_path(c)?.iter().map(|g| self.unimodular(g)).collect())
    }

    /// Expresses `Phi(D)` through the generators.
    pub fn divisor(&self, d: &Divisor0) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        for (c, n) in d.terms() {
            for mut t in self.path_from_infinity(c)? {
                t.coeff = n.clone();
                out.push(t);
            }
        }
        Ok(out)
    }

    /// The defining relations: each listed combination vanishes.
    pub fn relations(&self) -> Vec<Vec<Term>> {
        let id = Mat2::identity();
        let own = |i: usize| Term { gen: i, h: id.clone(), coeff: BigInt::one() };
        let mut out = Vec::new();
        for i in 0..self.len() {
            let g = &self.reps[i];
            out.push(vec![own(i), self.unimodular(&g.mul(&Mat2::s()))]);
            let t = Mat2::tau();
            out.push(vec![own(i), self.unimodular(&g.mul(&t)), self.unimodular(&g.mul(&t.mul(&t)))]);
            // D_{-g} = D_g
            out.push(vec![own(i), Term { gen: i, h: id.neg(), coeff: -BigInt::one() }]);
        }
        out
    }
}

/// The involution `g -> iota g iota` used for `Phi | iota`.
pub fn conj_iota(g: &Mat2) -> Mat2 {
    Mat2::from_big(g.a.clone(), -g.b.clone(), -g.c.clone(), g.d.clone())
}
