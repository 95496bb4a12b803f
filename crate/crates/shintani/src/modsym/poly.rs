// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{DirichletChar, Mat2, Ring};
use crate::error::{Error, Result};

/// Which coefficient module a polynomial lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Side {
    /// `L_k`, in the divided powers `X^n Y^{k-n} / (n! (k-n)!)`, index `n`.
    L,
    /// `L*_k`, in the monomials `X^{k-j} Y^j`, index `j`.
    LStar,
}

/// A homogeneous polynomial of degree `k` in one of the two bases.
#[derive(Clone, PartialEq, Debug)]
pub struct SymPoly<E> {
    pub k: usize,
    pub side: Side,
    pub coeffs: Vec<E>,
}

impl<E: Clone> SymPoly<E> {
    pub fn new(k: usize, side: Side, coeffs: Vec<E>) -> Result<Self> {
        if coeffs.len() != k + 1 {
            return Err(Error::DegreeMismatch(k + 1, coeffs.len()));
        }
        Ok(SymPoly { k, side, coeffs })
    }

    pub fn zero<R: Ring<E = E>>(ring: &R, k: usize, side: Side) -> Self {
        SymPoly { k, side, coeffs: vec![ring.zero(); k + 1] }
    }
}

fn binomials(k: usize) -> Vec<Vec<BigInt>> {
    let mut c = vec![vec![BigInt::zero(); k + 1]; k + 1];
    for n in 0..=k {
        c[n][0] = BigInt::one();
        for i in 1..=n {
            c[n][i] = &c[n - 1][i - 1] + if i < n { c[n - 1][i].clone() } else { BigInt::zero() };
        }
    }
    c
}

fn powers(x: &BigInt, k: usize) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(k + 1);
    let mut acc = BigInt::one();
    for _ in 0..=k {
        v.push(acc.clone());
        acc *= x;
    }
    v
}

/// Integer matrix of `F -> F((X, Y) h)` in the basis of `side`; entry
/// `[m][n]` is the coefficient of basis element `m` in the image of `n`.
pub fn substitution_matrix(k: usize, h: &Mat2, side: Side) -> Vec<Vec<BigInt>> {
    // (X, Y) h = (h11 X + h21 Y, h12 X + h22 Y)
    let (p, q, r, s) = (&h.a, &h.c, &h.b, &h.d);
    let (pp, qp, rp, sp) = (powers(p, k), powers(q, k), powers(r, k), powers(s, k));
    let c = binomials(k);
    let mut out = vec![vec![BigInt::zero(); k + 1]; k + 1];
    match side {
        Side::L => {
            // e_n = X^n Y^{k-n}/(n!(k-n)!) maps to sum_m [sum_i C(m,i) C(k-m,n-i)
            //   p^i q^{n-i} r^{m-i} s^{k-n-m+i}] e_m
            for n in 0..=k {
                for m in 0..=k {
                    let mut acc = BigInt::zero();
                    for i in 0..=m.min(n) {
                        if n - i > k - m {
                            continue;
                        }
                        let j = m - i;
                        if j > k - n {
                            continue;
                        }
                        acc += &c[m][i] * &c[k - m][n - i] * &pp[i] * &qp[n - i] * &rp[j] * &sp[k - n - j];
                    }
                    out[m][n] = acc;
                }
            }
        }
        Side::LStar => {
            // X^{k-j} Y^j maps to (pX + qY)^{k-j} (rX + sY)^j
            for j in 0..=k {
                for u in 0..=(k - j) {
                    for v in 0..=j {
                        // X^{k-j-u} Y^u from the first factor, X^{j-v} Y^v from the second
                        let coeff = &c[k - j][u] * &pp[k - j - u] * &qp[u] * &c[j][v] * &rp[j - v] * &sp[v];
                        out[u + v][j] += coeff;
                    }
                }
            }
        }
    }
    out
}

/// Matrix over `ring` of the weight-`k` action of `g`: `chi(a) F((X,Y) g*)`
/// on `L`, `chi(d) F((X,Y) g*)` on `L*`, with `g* = adj(g)`.
pub fn action_matrix<R: Ring>(ring: &R, k: usize, g: &Mat2, chi: &DirichletChar, side: Side) -> Vec<Vec<R::E>> {
    let ch = match side {
        Side::L => chi.eval_big(&g.a),
        Side::LStar => chi.eval_big(&g.d),
    };
    let sub = substitution_matrix(k, &g.adj(), side);
    let chb = BigInt::from(ch);
    sub.iter()
        .map(|row| row.iter().map(|v| ring.from_int(&(v * &chb))).collect())
        .collect()
}

/// Checks the `S_0(M)` conditions: `M | c`, `(a, M) = 1`, `det > 0`.
pub fn check_s0(g: &Mat2, m: u64) -> Result<()> {
    if !g.in_s0(m) {
        return Err(Error::BadSemigroupElement(g.to_string(), m));
    }
    Ok(())
}

/// The action of `g` in `S_0(M)` on a polynomial.
pub fn act_on_poly<R: Ring>(ring: &R, f: &SymPoly<R::E>, g: &Mat2, m: u64, chi: &DirichletChar) -> Result<SymPoly<R::E>> {
    check_s0(g, m)?;
    let a = action_matrix(ring, f.k, g, chi, f.side);
    let coeffs = crate::arith::linalg::mat_vec(ring, &a, &f.coeffs);
    Ok(SymPoly { k: f.k, side: f.side, coeffs })
}

/// `<F, P>` with `<e_i, X^{k-j} Y^j> = (-1)^j delta_ij`.
pub fn pairing<R: Ring>(ring: &R, f: &SymPoly<R::E>, p: &SymPoly<R::E>) -> Result<R::E> {
    if f.k != p.k {
        return Err(Error::DegreeMismatch(f.k, p.k));
    }
    if f.side != Side::L || p.side != Side::LStar {
        return Err(Error::InvalidInput("pairing takes an L polynomial and an L* polynomial".into()));
    }
    Ok(pair_coeffs(ring, &f.coeffs, &p.coeffs))
}

pub(crate) fn pair_coeffs<R: Ring>(ring: &R, f: &[R::E], p: &[R::E]) -> R::E {
    let mut acc = ring.zero();
    for (i, (x, y)) in f.iter().zip(p).enumerate() {
        let t = ring.mul(x, y);
        acc = if i % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
    }
    acc
}

/// `(aY - bX)^k / k!` in the divided-power basis of `L_k`.
pub fn evaluation_vector<R: Ring>(ring: &R, k: usize, a: &BigInt, b: &BigInt) -> SymPoly<R::E> {
    let mb = -b;
    let coeffs = (0..=k)
        .map(|i| ring.from_int(&(num_traits::pow(mb.clone(), i) * num_traits::pow(a.clone(), k - i))))
        .collect();
    SymPoly { k, side: Side::L, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn pairing_examples() {
        let r = Rationals;
        let one = SymPoly::new(0, Side::L, vec![q(1)]).unwrap();
        let one_s = SymPoly::new(0, Side::LStar, vec![q(1)]).unwrap();
        assert_eq!(pairing(&r, &one, &one_s).unwrap(), q(1));
        // P = X^2, (a, b) = (2, 3): P(2, 3) = 4
        let p = SymPoly::new(2, Side::LStar, vec![q(1), q(0), q(0)]).unwrap();
        let f = evaluation_vector(&r, 2, &2.into(), &3.into());
        assert_eq!(pairing(&r, &f, &p).unwrap(), q(4));
        // (a, b) = (1, 0) picks the X^k coefficient
        let p = SymPoly::new(2, Side::LStar, vec![q(5), q(7), q(11)]).unwrap();
        let f = evaluation_vector(&r, 2, &1.into(), &0.into());
        assert_eq!(pairing(&r, &f, &p).unwrap(), q(5));
        assert!(matches!(pairing(&r, &one, &p), Err(Error::DegreeMismatch(0, 2))));
    }

    #[test]
    fn evaluation_identity_general() {
        let r = Rationals;
        let p = SymPoly::new(3, Side::LStar, vec![q(2), q(-1), q(4), q(3)]).unwrap();
        for (a, b) in [(1i64, 2i64), (-3, 5), (4, -1)] {
            let f = evaluation_vector(&r, 3, &a.into(), &b.into());
            let direct = 2 * a.pow(3) - a * a * b + 4 * a * b * b + 3 * b.pow(3);
            assert_eq!(pairing(&r, &f, &p).unwrap(), q(direct));
        }
    }

    #[test]
    fn star_substitution_matches_expansion() {
        // X^2 under g = [[1,1],[0,1]]: adj = [[1,-1],[0,1]], (X,Y) adj = (X, -X + Y)
        let r = Rationals;
        let chi = DirichletChar::trivial(1);
        let f = SymPoly::new(2, Side::LStar, vec![q(1), q(0), q(0)]).unwrap();
        let out = act_on_poly(&r, &f, &Mat2::new(1, 1, 0, 1), 1, &chi).unwrap();
        assert_eq!(out.coeffs, vec![q(1), q(0), q(0)]);
        // Y^2 -> (Y - X)^2 = X^2 - 2XY + Y^2
        let f = SymPoly::new(2, Side::LStar, vec![q(0), q(0), q(1)]).unwrap();
        let out = act_on_poly(&r, &f, &Mat2::new(1, 1, 0, 1), 1, &chi).unwrap();
        assert_eq!(out.coeffs, vec![q(1), q(-2), q(1)]);
    }

    #[test]
    fn character_factor() {
        let r = Rationals;
        let chi = DirichletChar::quadratic(5).unwrap();
        let f = SymPoly::new(1, Side::L, vec![q(1), q(2)]).unwrap();
        let g = Mat2::new(2, 1, 5, 3);
        let with = act_on_poly(&r, &f, &g, 5, &chi).unwrap();
        let without = act_on_poly(&r, &f, &g, 5, &DirichletChar::trivial(5)).unwrap();
        let c = q(chi.eval(2) as i64);
        assert_eq!(with.coeffs, without.coeffs.iter().map(|v| v * &c).collect::<Vec<_>>());
        assert!(act_on_poly(&r, &f, &Mat2::new(5, 1, 5, 2), 5, &chi).is_err());
    }

    #[test]
    fn pairing_is_invariant() {
        let r = Rationals;
        let chi = DirichletChar::trivial(7);
        let f = SymPoly::new(3, Side::L, vec![q(1), q(-2), q(3), q(5)]).unwrap();
        let p = SymPoly::new(3, Side::LStar, vec![q(4), q(1), q(-1), q(2)]).unwrap();
        for g in [Mat2::new(3, 1, 14, 5), Mat2::new(1, 4, 0, 1), Mat2::new(-1, 0, 7, -1)] {
            let lhs = pairing(&r, &act_on_poly(&r, &f, &g, 7, &chi).unwrap(), &act_on_poly(&r, &p, &g, 7, &chi).unwrap()).unwrap();
            assert_eq!(lhs, pairing(&r, &f, &p).unwrap(), "{g}");
        }
    }

    #[test]
    fn action_composes() {
        let r = Rationals;
        let chi = DirichletChar::quadratic(5).unwrap();
        let f = SymPoly::new(2, Side::L, vec![q(1), q(-2), q(3)]).unwrap();
        let g = Mat2::new(2, 1, 5, 3);
        let h = Mat2::new(3, -1, 10, -3);
        let lhs = act_on_poly(&r, &act_on_poly(&r, &f, &g, 5, &chi).unwrap(), &h, 5, &chi).unwrap();
        let rhs = act_on_poly(&r, &f, &g.mul(&h), 5, &chi).unwrap();
        assert_eq!(lhs, rhs);
    }
}
