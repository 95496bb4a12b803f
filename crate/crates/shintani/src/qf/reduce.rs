// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::form::{is_square, isqrt, QuadForm};
use crate::arith::mat::ext_gcd;
use crate::arith::Mat2;
use crate::error::{Error, Result};

/// Reducedness for non-square discriminants: `0 < b < sqrt(D)` and
/// `sqrt(D) - b < 2|a| < sqrt(D) + b`.
pub fn is_reduced(q: &QuadForm) -> bool {
    let r = isqrt(q.discriminant());
    let a2 = 2 * q.a.abs();
    q.b > 0 && q.b <= r && r < a2 + q.b && a2 - q.b <= r
}

/// One step of the reduction operator: returns `(rho(Q), g)` with `Q|g = rho(Q)`.
pub fn rho(q: &QuadForm) -> (QuadForm, Mat2) {
    let delta = q.discriminant();
    let r = isqrt(delta);
    let c2 = 2 * q.c.abs();
    // b' = -b mod 2|c|
    let base = (-q.b).rem_euclid(c2);
    let bp = if q.c.abs() > r {
        // -|c| < b' <= |c|
        if base > q.c.abs() {
            base - c2
        } else {
            base
        }
    } else {
        // r - 2|c| < b' <= r
        base + (r - base).div_euclid(c2) * c2
    };
    let s = (bp + q.b) / (2 * q.c);
    let c = (bp as i128 * bp as i128 - delta as i128) / (4 * q.c as i128);
    let next = QuadForm::new(q.c, bp, c as i64);
    (next, Mat2::new(s, -1, 1, 0))
}

/// A reduced form `R` and `h` with `Q|h = R`; non-square discriminant only.
pub fn reduce(q: &QuadForm) -> Result<(QuadForm, Mat2)> {
    let delta = q.discriminant();
    if is_square(delta) {
        return Err(Error::SquareDiscriminant(delta));
    }
    let mut cur = *q;
    let mut h = Mat2::identity();
    while !is_reduced(&cur) {
        let (n, g) = rho(&cur);
        cur = n;
        h = h.mul(&g);
    }
    Ok((cur, h))
}

/// The cycle of reduced forms through `r`, with the step matrices.
pub fn cycle(r: &QuadForm) -> Vec<(QuadForm, Mat2)> {
    let mut out = Vec::new();
    let mut cur = *r;
    loop {
        let (n, g) = rho(&cur);
        out.push((cur, g));
        cur = n;
        if cur == *r {
            return out;
        }
    }
}

/// The product of the step matrices around the cycle of a reduced form,
/// signed to have positive trace.
pub fn cycle_automorph(r: &QuadForm) -> Mat2 {
    let mut p = Mat2::identity();
    for (_, g) in cycle(r) {
        p = p.mul(&g);
    }
    if p.trace().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Generator of the positive-trace automorphs of `Q` in `SL2(Z)`.
///
/// Forms that are not primitive share the automorphs of their primitive part.
pub fn fundamental_automorph(q: &QuadForm) -> Result<Mat2> {
    let (q, _) = q.primitive_part();
    let (r, h) = reduce(&q)?;
    let p = cycle_automorph(&r);
    Ok(h.mul(&p).mul(&h.adj()))
}

/// Canonical representative `(0, s, c)` with `0 <= c < s` of a form with
/// square discriminant `s^2 > 0`, and `h` with `Q|h` equal to it.
pub fn square_canonical(q: &QuadForm) -> Result<(QuadForm, Mat2)> {
    let delta = q.discriminant();
    if delta <= 0 || !is_square(delta) {
        return Err(Error::InvalidInput(format!("{q} does not have positive square discriminant")));
    }
    let s = isqrt(delta);
    // isotropic rows (x, y) with Q(x, y) = 0
    let mut roots: Vec<(i64, i64)> = Vec::new();
    if q.a == 0 {
        roots.push((1, 0));
        roots.push((-q.c, q.b));
    } else {
        roots.push((-q.b + s, 2 * q.a));
        roots.push((-q.b - s, 2 * q.a));
    }
    for (x, y) in roots {
        let g = x.gcd(&y);
        let (x, y) = (x / g, y / g);
        let (_, u, v) = ext_gcd(&BigInt::from(x), &BigInt::from(y));
        // [[x, y], [-v, u]] has determinant one; h is its inverse
        let m = Mat2::from_big(x.into(), y.into(), -v, u);
        let h = m.adj();
        let t = q.act(&h)?;
        debug_assert_eq!(t.a, 0);
        if t.b == s {
            let n = t.c.div_euclid(s);
            let l = Mat2::new(1, 0, n, 1);
            let h = h.mul(&l);
            let t = q.act(&h)?;
            return Ok((t, h));
        }
    }
    Err(Error::InvalidInput(format!("no isotropic row of {q} gives b = {s}")))
}

/// Reduced primitive forms of discriminant `delta` (non-square), grouped into
/// cycles; each cycle is listed from its least form.
pub fn reduced_cycles(delta: i64) -> Vec<Vec<QuadForm>> {
    let r = isqrt(delta);
    let mut forms = Vec::new();
    let mut b = if delta % 2 == 0 { 2 } else { 1 };
    while b <= r {
        let n = (delta - b * b) / 4;
        let mut d = 1;
        while d <= n {
            if n % d == 0 {
                for a in [d, -d] {
                    let q = QuadForm::new(a, b, -n / a);
                    if is_reduced(&q) && q.is_primitive() {
                        forms.push(q);
                    }
                }
            }
            d += 1;
        }
        b += 2;
    }
    forms.sort();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for q in forms {
        if seen.contains(&q) {
            continue;
        }
        let cyc: Vec<QuadForm> = cycle(&q).into_iter().map(|(f, _)| f).collect();
        for f in &cyc {
            seen.insert(*f);
        }
        out.push(cyc);
    }
    out
}
