// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::space::{solve_symbol_space, ModularSymbol, SymbolSpace};
use crate::arith::linalg::{self, Matrix};
use crate::arith::padic::is_prime;
use crate::arith::{DirichletChar, Rationals};
use crate::error::{Error, Result};

/// Which `iota`-eigenspace to work in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignChoice {
    Plus,
    Minus,
    Both,
}

/// A rational Hecke eigensymbol with its eigenvalues `a_l` for primes `l`
/// up to the requested bound (`U_l` when `l | M`, when it acts by a scalar).
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub symbol: ModularSymbol<Rationals>,
    pub eigenvalues: BTreeMap<u64, BigRational>,
    /// Dimension of the common eigenspace this symbol was taken from.
    pub multiplicity: usize,
}

/// Outcome of an eigen-decomposition: the rational systems plus the total
/// dimension left over in non-rational (or non-split) parts.
#[derive(Clone, Debug)]
pub struct EigenReport {
    pub systems: Vec<EigenSystem>,
    pub skipped: Vec<Error>,
}

type Q = BigRational;

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Subspace of coordinate vectors (columns of the basis matrix).
fn restrict(ring: &Rationals, op: &Matrix<Q>, basis: &[Vec<Q>]) -> Matrix<Q> {
    // op * B = B * X; solve column by column
    let n = op.len();
    let w = basis.len();
    let bmat: Matrix<Q> = (0..n).map(|i| (0..w).map(|j| basis[j][i].clone()).collect()).collect();
    let cols: Vec<Vec<Q>> = basis
        .iter()
        .map(|b| {
            let ob = linalg::mat_vec(ring, op, b);
            linalg::solve(ring, &bmat, w, &ob).expect("subspace is stable")
        })
        .collect();
    (0..w).map(|i| (0..w).map(|j| cols[j][i].clone()).collect()).collect()
}

fn eval_poly(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Integer roots of a polynomial with rational coefficients, searched in `[-bound, bound]`.
fn integer_roots(p: &[Q], bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|&x| eval_poly(p, &qi(x)).is_zero()).collect()
}

/// Scales a rational vector to a primitive integral one with first non-zero entry positive.
pub fn normalize_content(v: &[Q]) -> Vec<Q> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or_else(BigInt::one);
    ints.iter().map(|x| Q::from_integer(x / &g * &sign)).collect()
}

fn kernel_in(ring: &Rationals, m: &Matrix<Q>, ncols: usize) -> Vec<Vec<Q>> {
    linalg::kernel(ring, m, ncols).free
}

/// The `+1` or `-1` eigenspace of `iota` as coordinate vectors.
pub fn sign_subspace(space: &SymbolSpace<Rationals>, sign: SignChoice) -> Result<Vec<Vec<Q>>> {
    let n = space.dimension();
    let ident = |i: usize, j: usize| if i == j { qi(1) } else { qi(0) };
    if sign == SignChoice::Both {
        return Ok((0..n).map(|i| (0..n).map(|j| ident(i, j)).collect()).collect());
    }
    let iota = space.operator_matrix(|s| Ok(s.iota()))?;
    let e = if sign == SignChoice::Plus { qi(1) } else { qi(-1) };
    let m: Matrix<Q> = (0..n).map(|i| (0..n).map(|j| &iota[i][j] - &e * ident(i, j)).collect()).collect();
    Ok(kernel_in(&Rationals, &m, n))
}

fn eigen_bound(l: u64, k: usize) -> i64 {
    // |a_l| <= 1 + l^{k+1} covers boundary and cuspidal systems
    1 + (l as i64).pow(k as u32 + 1)
}

/// Simultaneous rational eigenvectors of `T_l`, `l` prime and coprime to `M`,
/// `l <= bound`, on the chosen sign subspace.
pub fn eigensymbols(m: u64, k: usize, chi: &DirichletChar, sign: SignChoice, bound: u64) -> Result<EigenReport> {
    let space = solve_symbol_space(m, k, chi, Rationals)?;
    eigensymbols_in(&space, sign, bound)
}

pub fn eigensymbols_in(space: &SymbolSpace<Rationals>, sign: SignChoice, bound: u64) -> Result<EigenReport> {
    let ring = Rationals;
    let m = space.level();
    let primes: Vec<u64> = (2..=bound).filter(|&l| is_prime(l)).collect();
    let mut ops: BTreeMap<u64, Matrix<Q>> = BTreeMap::new();
    for &l in &primes {
        ops.insert(l, space.operator_matrix(|s| s.hecke_tp(l))?);
    }
    let mut pieces: Vec<Vec<Vec<Q>>> = vec![sign_subspace(space, sign)?];
    pieces.retain(|p| !p.is_empty());
    let mut skipped = Vec::new();
    for &l in primes.iter().filter(|&&l| m % l != 0) {
        let mut next = Vec::new();
        for w in pieces {
            let tw = restrict(&ring, &ops[&l], &w);
            let dim = w.len();
            let cp = linalg::charpoly(&ring, &tw);
            let mut found = 0;
            for lam in integer_roots(&cp, eigen_bound(l, space.k)) {
                let shifted: Matrix<Q> = (0..dim)
                    .map(|i| (0..dim).map(|j| if i == j { &tw[i][j] - qi(lam) } else { tw[i][j].clone() }).collect())
                    .collect();
                let ker = kernel_in(&ring, &shifted, dim);
                found += ker.len();
                // back to full coordinates
                let sub: Vec<Vec<Q>> = ker
                    .iter()
                    .map(|c| {
                        let mut v = vec![qi(0); w[0].len()];
                        for (cj, wj) in c.iter().zip(&w) {
                            for (x, y) in v.iter_mut().zip(wj) {
                                *x += cj * y;
                            }
                        }
                        v
                    })
                    .collect();
                next.push(sub);
            }
            if found < dim {
                skipped.push(Error::IrrationalEigenvalue(l));
            }
        }
        pieces = next;
    }
    let mut systems = Vec::new();
    for w in pieces {
        let mult = w.len();
        for v in &w {
            let sym = space.combination(v);
            let flat = normalize_content(&sym.flat());
            let values: Vec<Vec<Q>> = flat.chunks(space.k + 1).map(|c| c.to_vec()).collect();
            let symbol = ModularSymbol::from_values(ring, space.k, space.chi.clone(), space.manin().clone(), values)?;
            let coords = space.coordinates(&symbol);
            let mut eigenvalues = BTreeMap::new();
            for &l in &primes {
                let img = linalg::mat_vec(&ring, &ops[&l], &coords);
                if let Some(lam) = scalar_ratio(&img, &coords) {
                    eigenvalues.insert(l, lam);
                }
            }
            systems.push(EigenSystem { symbol, eigenvalues, multiplicity: mult });
        }
    }
    Ok(EigenReport { systems, skipped })
}

/// `lam` with `a = lam b`, if `a` is a multiple of the non-zero vector `b`.
pub fn scalar_ratio(a: &[Q], b: &[Q]) -> Option<Q> {
    let i = b.iter().position(|x| !x.is_zero())?;
    let lam = &a[i] / &b[i];
    a.iter().zip(b).all(|(x, y)| *x == &lam * y).then_some(lam)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_normalization() {
        let v = vec![qi(0), Q::new((-2).into(), 3.into()), qi(4)];
        assert_eq!(normalize_content(&v), vec![qi(0), qi(1), qi(-6)]);
    }

    #[test]
    fn integer_root_search() {
        // (x - 2)(x + 3) = x^2 + x - 6
        assert_eq!(integer_roots(&[qi(-6), qi(1), qi(1)], 10), vec![-3, 2]);
    }
}
