// SPDX-License-Identifier: Apache-2.0

//! Dense exact linear algebra over a [`Ring`].
//!
//! Elimination pivots on an entry of minimal valuation, which is ordinary
//! Gaussian elimination over a field and a Smith-form reduction over the
//! chain ring `Z/p^M`.

use super::ring::Ring;

pub type Matrix<E> = Vec<Vec<E>>;

/// Kernel of a matrix, as computed from a diagonal reduction `A V = U^-1 D`.
#[derive(Clone, Debug)]
pub struct Kernel<E> {
    pub ncols: usize,
    /// Generators of full order (one per column without a pivot).
    pub free: Vec<Vec<E>>,
    /// Generators `p^(M-e) v` killed by `p^e`, with their exponent `e`.
    pub torsion: Vec<(Vec<E>, u32)>,
    /// Inverse of the column transform; row `free_idx[i]` of `vinv` gives the
    /// coordinate of a kernel vector along `free[i]`.
    vinv: Matrix<E>,
    free_idx: Vec<usize>,
}

impl<E: Clone> Kernel<E> {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of a kernel vector along the free generators.
    pub fn coordinates<R: Ring<E = E>>(&self, ring: &R, x: &[E]) -> Vec<E> {
        self.free_idx
            .iter()
            .map(|&r| dot(ring, &self.vinv[r], x))
            .collect()
    }

    pub fn max_torsion_exponent(&self) -> u32 {
        self.torsion.iter().map(|t| t.1).max().unwrap_or(0)
    }
}

pub fn dot<R: Ring>(ring: &R, a: &[R::E], b: &[R::E]) -> R::E {
    let mut acc = ring.zero();
    for (x, y) in a.iter().zip(b) {
        if !ring.is_zero(x) && !ring.is_zero(y) {
            acc = ring.add(&acc, &ring.mul(x, y));
        }
    }
    acc
}

pub fn mat_vec<R: Ring>(ring: &R, m: &Matrix<R::E>, v: &[R::E]) -> Vec<R::E> {
    m.iter().map(|row| dot(ring, row, v)).collect()
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::E>, b: &Matrix<R::E>) -> Matrix<R::E> {
    let n = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            let mut out = vec![ring.zero(); n];
            for (k, x) in row.iter().enumerate() {
                if ring.is_zero(x) {
                    continue;
                }
                for (j, y) in b[k].iter().enumerate() {
                    if !ring.is_zero(y) {
                        out[j] = ring.add(&out[j], &ring.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::E> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect()
}

pub fn transpose<E: Clone>(m: &Matrix<E>, ncols: usize) -> Matrix<E> {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn find_pivot<R: Ring>(ring: &R, a: &Matrix<R::E>, k: usize, ncols: usize) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().take(ncols).skip(k) {
            if let Some(v) = ring.valuation(x) {
                if best.map_or(true, |b| v < b.2) {
                    best = Some((i, j, v));
                    if v == 0 {
                        return best;
                    }
                }
            }
        }
    }
    best
}

/// Kernel of `a` (rows of length `ncols`).
pub fn kernel<R: Ring>(ring: &R, a: &Matrix<R::E>, ncols: usize) -> Kernel<R::E> {
    let mut a: Matrix<R::E> = a.clone();
    let mut v = identity(ring, ncols);
    let mut vinv = identity(ring, ncols);
    let mut pivots: Vec<u32> = Vec::new();
    let mut k = 0;
    while k < ncols && k < a.len() {
        let Some((pi, pj, val)) = find_pivot(ring, &a, k, ncols) else {
            break;
        };
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
            vinv.swap(k, pj);
        }
        let piv = a[k][k].clone();
        let pivot_row = a[k].clone();
        for i in (k + 1)..a.len() {
            if ring.is_zero(&a[i][k]) {
                continue;
            }
            let f = ring.divide(&a[i][k], &piv).expect("minimal valuation pivot divides");
            for j in k..ncols {
                if !ring.is_zero(&pivot_row[j]) {
                    let t = ring.mul(&f, &pivot_row[j]);
                    a[i][j] = ring.sub(&a[i][j], &t);
                }
            }
        }
        for j in (k + 1)..ncols {
            if ring.is_zero(&a[k][j]) {
                continue;
            }
            let f = ring.divide(&a[k][j], &piv).expect("minimal valuation pivot divides");
            a[k][j] = ring.zero();
            for row in v.iter_mut() {
                if !ring.is_zero(&row[k]) {
                    let t = ring.mul(&f, &row[k]);
                    row[j] = ring.sub(&row[j], &t);
                }
            }
            // inverse transform: row_k += f * row_j
            let rj = vinv[j].clone();
            for (x, y) in vinv[k].iter_mut().zip(rj.iter()) {
                if !ring.is_zero(y) {
                    *x = ring.add(x, &ring.mul(&f, y));
                }
            }
        }
        pivots.push(val);
        k += 1;
    }
    let column = |j: usize| -> Vec<R::E> { v.iter().map(|r| r[j].clone()).collect() };
    let mut torsion = Vec::new();
    if let Some(m) = ring.precision() {
        for (j, &e) in pivots.iter().enumerate() {
            if e > 0 {
                let scale = ring.pow(&ring.from_i64(prime_of(ring)), (m - e) as u64);
                let col = column(j).iter().map(|x| ring.mul(&scale, x)).collect();
                torsion.push((col, e));
            }
        }
    }
    let free_idx: Vec<usize> = (pivots.len()..ncols).collect();
    let free = free_idx.iter().map(|&j| column(j)).collect();
    Kernel {
        ncols,
        free,
        torsion,
        vinv,
        free_idx,
    }
}

fn prime_of<R: Ring>(ring: &R) -> i64 {
    // the residue characteristic is the smallest integer > 1 that is not a unit
    (2..).find(|n| ring.inv(&ring.from_i64(*n)).is_none()).unwrap()
}

/// Some solution of `a x = b`, if one exists. Over `Z/p^M` the solution is
/// exact modulo `p^M`.
pub fn solve<R: Ring>(ring: &R, a: &Matrix<R::E>, ncols: usize, b: &[R::E]) -> Option<Vec<R::E>> {
    let a_orig = a;
    let b_orig = b;
    let mut a: Matrix<R::E> = a.clone();
    let mut b: Vec<R::E> = b.to_vec();
    let mut perm: Vec<usize> = (0..ncols).collect();
    let mut rank = 0;
    while rank < ncols && rank < a.len() {
        let Some((pi, pj, _)) = find_pivot(ring, &a, rank, ncols) else {
            break;
        };
        a.swap(rank, pi);
        b.swap(rank, pi);
        if pj != rank {
            for row in a.iter_mut() {
                row.swap(rank, pj);
            }
            perm.swap(rank, pj);
        }
        let piv = a[rank][rank].clone();
        let prow = a[rank].clone();
        let pb = b[rank].clone();
        for i in (rank + 1)..a.len() {
            if ring.is_zero(&a[i][rank]) {
                continue;
            }
            let f = ring.divide(&a[i][rank], &piv).expect("pivot divides");
            for j in rank..ncols {
                if !ring.is_zero(&prow[j]) {
                    let t = ring.mul(&f, &prow[j]);
                    a[i][j] = ring.sub(&a[i][j], &t);
                }
            }
            b[i] = ring.sub(&b[i], &ring.mul(&f, &pb));
        }
        rank += 1;
    }
    for bi in b.iter().skip(rank) {
        if !ring.is_zero(bi) {
            return None;
        }
    }
    // Back substitution on the upper-triangular part; columns beyond the
    // rank are set to zero.
    let mut y = vec![ring.zero(); ncols];
    for i in (0..rank).rev() {
        let mut rhs = b[i].clone();
        for j in (i + 1)..rank {
            if !ring.is_zero(&a[i][j]) {
                rhs = ring.sub(&rhs, &ring.mul(&a[i][j], &y[j]));
            }
        }
        y[i] = ring.divide(&rhs, &a[i][i])?;
    }
    let mut x = vec![ring.zero(); ncols];
    for (pos, &orig) in perm.iter().enumerate() {
        x[orig] = y[pos].clone();
    }
    if mat_vec(ring, a_orig, &x) != b_orig {
        return None;
    }
    Some(x)
}

/// Characteristic polynomial `det(X - A)`, coefficients in ascending degree.
/// Division free (Berkowitz), so valid over any commutative ring.
pub fn charpoly<R: Ring>(ring: &R, a: &Matrix<R::E>) -> Vec<R::E> {
    let n = a.len();
    // descending coefficients of the principal r x r minor
    let mut p = vec![ring.one()];
    for r in 0..n {
        let av = a[r][r].clone();
        let col: Vec<R::E> = (0..r).map(|i| a[i][r].clone()).collect();
        let row: Vec<R::E> = (0..r).map(|j| a[r][j].clone()).collect();
        let mut t = vec![ring.one(), ring.neg(&av)];
        let mut w = col.clone();
        for _ in 0..r {
            t.push(ring.neg(&dot(ring, &row, &w)));
            // w <- A_r w
            w = (0..r)
                .map(|i| {
                    let mut acc = ring.zero();
                    for (j, wj) in w.iter().enumerate() {
                        if !ring.is_zero(wj) && !ring.is_zero(&a[i][j]) {
                            acc = ring.add(&acc, &ring.mul(&a[i][j], wj));
                        }
                    }
                    acc
                })
                .collect();
        }
        let mut q = vec![ring.zero(); r + 2];
        for (i, qi) in q.iter_mut().enumerate() {
            for j in 0..=i.min(r) {
                if i - j < t.len() && !ring.is_zero(&p[j]) {
                    *qi = ring.add(qi, &ring.mul(&t[i - j], &p[j]));
                }
            }
        }
        p = q;
    }
    p.reverse();
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{Rationals, ZpRing};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_kernel() {
        let r = Rationals;
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let k = kernel(&r, &a, 3);
        assert_eq!(k.dimension(), 2);
        for v in &k.free {
            assert!(mat_vec(&r, &a, v).iter().all(|x| x == &q(0)));
        }
    }

    #[test]
    fn padic_kernel_has_torsion() {
        let z = ZpRing::new(5, 3).unwrap();
        // 5 x = 0 mod 125 has the torsion solution 25
        let a = vec![vec![z.elt(5)]];
        let k = kernel(&z, &a, 1);
        assert_eq!(k.dimension(), 0);
        assert_eq!(k.torsion.len(), 1);
        assert_eq!(k.torsion[0].0[0], z.elt(25));
    }

    #[test]
    fn kernel_coordinates_roundtrip() {
        let z = ZpRing::new(7, 4).unwrap();
        let a = vec![vec![z.elt(1), z.elt(3), z.elt(14)], vec![z.elt(2), z.elt(6), z.elt(28)]];
        let k = kernel(&z, &a, 3);
        assert_eq!(k.dimension(), 2);
        let comb: Vec<_> = (0..3)
            .map(|i| z.add(&z.mul(&z.elt(3), &k.free[0][i]), &z.mul(&z.elt(5), &k.free[1][i])))
            .collect();
        assert_eq!(k.coordinates(&z, &comb), vec![z.elt(3), z.elt(5)]);
    }

    #[test]
    fn charpoly_small() {
        let r = Rationals;
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(charpoly(&r, &a), vec![q(5), q(-5), q(1)]);
        let b = vec![vec![q(1), q(2), q(0)], vec![q(0), q(1), q(1)], vec![q(4), q(0), q(2)]];
        // det(X - B) = X^3 - 4X^2 + 5X - 10
        assert_eq!(charpoly(&r, &b), vec![q(-10), q(5), q(-4), q(1)]);
    }

    #[test]
    fn solve_consistent_and_not() {
        let r = Rationals;
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = solve(&r, &a, 2, &[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&r, &s, 2, &[q(1), q(3)]).is_none());
    }
}
