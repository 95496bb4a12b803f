// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

//! Bounded orbit oracle for `Gamma_0(M)`-classes of quadratic forms.
//!
//! Generators of `Gamma_0(M)` come from the Schreier construction on the
//! coset graph of `S` and `T`; orbits inside a coefficient box are found by
//! union-find along generator edges.

use std::collections::HashMap;

use num_integer::Integer;
use shintani::arith::Mat2;
use shintani::qf::{enumerate_classes, equivalent_under_gamma0, QuadForm};

fn mul(x: [i64; 4], y: [i64; 4]) -> [i64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn inv(x: [i64; 4]) -> [i64; 4] {
    [x[3], -x[1], -x[2], x[0]]
}

fn bottom_key(g: [i64; 4], m: i64) -> (i64, i64) {
    // bottom row up to unit scalars mod m
    let (c, d) = (g[2].rem_euclid(m), g[3].rem_euclid(m));
    (1..=m.max(1))
        .filter(|u| u.gcd(&m) == 1)
        .map(|u| ((u * c) % m.max(1), (u * d) % m.max(1)))
        .min()
        .unwrap()
}

/// Schreier generators of `Gamma_0(M)` with their inverses.
pub fn gamma0_generators(m: i64) -> Vec<[i64; 4]> {
    let s = [0, -1, 1, 0];
    let t = [1, 1, 0, 1];
    let gens = [s, t, inv(t)];
    let mut reps: HashMap<(i64, i64), [i64; 4]> = HashMap::new();
    let id = [1, 0, 0, 1];
    reps.insert(bottom_key(id, m), id);
    let mut queue = vec![id];
    while let Some(g) = queue.pop() {
        for x in gens {
            let h = mul(g, x);
            let k = bottom_key(h, m);
            if let std::collections::hash_map::Entry::Vacant(e) = reps.entry(k) {
                e.insert(h);
                queue.push(h);
            }
        }
    }
    let mut out = Vec::new();
    for r in reps.values() {
        for x in gens {
            let h = mul(*r, x);
            let back = reps[&bottom_key(h, m)];
            let g = mul(h, inv(back));
            assert_eq!(g[2].rem_euclid(m), 0);
            if g != id && g != [-1, 0, 0, -1] {
                out.push(g);
                out.push(inv(g));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn act(q: QuadForm, g: [i64; 4]) -> QuadForm {
    let [a, b, c, d] = g;
    QuadForm::new(
        q.a * d * d - q.b * b * d + q.c * b * b,
        -2 * q.a * c * d + q.b * (a * d + b * c) - 2 * q.c * a * b,
        q.a * c * c - q.b * a * c + q.c * a * a,
    )
}

struct Uf(Vec<usize>);

impl Uf {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Every form in `F_M` of discriminant `delta` with coefficients bounded by `bound`.
pub fn box_forms(m: u64, delta: i64, bound: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if a == 0 {
                continue;
            }
            let num = b * b - delta;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c.abs() <= bound {
                let q = QuadForm::new(a, b, c);
                if q.in_fm(m) {
                    out.push(q);
                }
            }
        }
    }
    out
}

/// Checks `enumerate_classes(m, delta)` against the box oracle; returns a
/// description of the first discrepancy.
pub fn check_classes(m: u64, delta: i64, bound: i64, gens: &[[i64; 4]]) -> Result<usize, String> {
    let reps = enumerate_classes(m, delta);
    for (i, r) in reps.iter().enumerate() {
        if !r.in_fm(m) || r.discriminant() != delta {
            return Err(format!("rep {r} is not in F_{m} with discriminant {delta}"));
        }
        for s in &reps[..i] {
            if equivalent_under_gamma0(r, s, m).map_err(|e| e.to_string())?.is_some() {
                return Err(format!("reps {s} and {r} are equivalent"));
            }
        }
    }
    let forms = box_forms(m, delta, bound);
    let pos: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut uf = Uf((0..forms.len()).collect());
    for (i, f) in forms.iter().enumerate() {
        for g in gens {
            if let Some(&j) = pos.get(&act(*f, *g)) {
                uf.union(i, j);
            }
        }
    }
    // two representatives joined by generator edges would be a duplicate
    let mut rep_roots: HashMap<usize, QuadForm> = HashMap::new();
    for r in &reps {
        if let Some(&i) = pos.get(r) {
            if let Some(s) = rep_roots.insert(uf.find(i), *r) {
                return Err(format!("reps {s} and {r} lie in one orbit"));
            }
        }
    }
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    for (i, f) in forms.iter().enumerate() {
        let mut hits = Vec::new();
        for (k, r) in reps.iter().enumerate() {
            if let Some(g) = equivalent_under_gamma0(f, r, m).map_err(|e| e.to_string())? {
                let gm = Mat2::from_big(g.a.clone(), g.b.clone(), g.c.clone(), g.d.clone());
                if !gm.in_gamma0(m) || f.act(&gm).map_err(|e| e.to_string())? != *r {
                    return Err(format!("bad witness {g} for {f} ~ {r}"));
                }
                hits.push(k);
            }
        }
        if hits.len() != 1 {
            return Err(format!("{f} matches {} representatives", hits.len()));
        }
        let root = uf.find(i);
        match class_of.get(&root) {
            Some(&k) if k != hits[0] => {
                return Err(format!("{f} is joined by a generator edge to another class"));
            }
            _ => {
                class_of.insert(root, hits[0]);
            }
        }
    }
    Ok(reps.len())
}
