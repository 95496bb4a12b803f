// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// The projective line over `Z/m`: pairs `(c, d)` with `gcd(c, d, m) = 1`
/// modulo unit scalars, each class stored by its least representative.
#[derive(Clone, Debug)]
pub struct P1List {
    m: u64,
    points: Vec<(u64, u64)>,
    index: Vec<u32>,
}

impl P1List {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        if m == 1 {
            return P1List {
                m,
                points: vec![(0, 0)],
                index: vec![0],
            };
        }
        let units: Vec<u64> = (1..m).filter(|u| u.gcd(&m) == 1).collect();
        let mut canon = vec![u64::MAX; (m * m) as usize];
        let mut points = Vec::new();
        for c in 0..m {
            for d in 0..m {
                if c.gcd(&d).gcd(&m) != 1 {
                    continue;
                }
                let slot = (c * m + d) as usize;
                if canon[slot] != u64::MAX {
                    continue;
                }
                // (c, d) is the least element of its orbit: rows are visited in order
                points.push((c, d));
                for &u in &units {
                    let k = ((u * c % m) * m + u * d % m) as usize;
                    canon[k] = c * m + d;
                }
            }
        }
        let pos: std::collections::HashMap<u64, u32> = points
            .iter()
            .enumerate()
            .map(|(i, &(c, d))| (c * m + d, i as u32))
            .collect();
        let index = canon
            .iter()
            .map(|&k| if k == u64::MAX { u32::MAX } else { pos[&k] })
            .collect();
        P1List { m, points, index }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> (u64, u64) {
        self.points[i]
    }

    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    /// Index of the class of `(c, d)` with residues already reduced mod `m`.
    pub fn index_of_residues(&self, c: u64, d: u64) -> Option<usize> {
        let i = self.index[(c * self.m + d) as usize];
        (i != u32::MAX).then_some(i as usize)
    }

    pub fn index_of(&self, c: &BigInt, d: &BigInt) -> Option<usize> {
        let mb = BigInt::from(self.m);
        let c = c.mod_floor(&mb).to_u64().unwrap();
        let d = d.mod_floor(&mb).to_u64().unwrap();
        self.index_of_residues(c, d)
    }

    pub fn index_of_i64(&self, c: i64, d: i64) -> Option<usize> {
        let m = self.m as i64;
        self.index_of_residues(c.rem_euclid(m) as u64, d.rem_euclid(m) as u64)
    }
}

/// Integers `(x', y')` with `gcd(x', y') = 1`, `x' = x` and `y' = y (mod m)`.
///
/// Requires `gcd(x, y, m) = 1`.
pub fn lift_coprime(x: u64, y: u64, m: u64) -> (i64, i64) {
    let (x, y, m) = (x as i64, y as i64, m as i64);
    if x == 0 {
        // the pair is a unit multiple of (0, 1); y itself must be coprime to m
        if y.abs() == 1 || m == 1 {
            return (0, 1);
        }
        return (m, y);
    }
    let mut k = 0i64;
    loop {
        let yy = y + k * m;
        if x.gcd(&yy) == 1 {
            return (x, yy);
        }
        k += 1;
    }
}
