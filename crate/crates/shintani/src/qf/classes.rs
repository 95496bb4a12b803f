// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::form::{is_square, isqrt, QuadForm};
use super::reduce::{cycle, cycle_automorph, fundamental_automorph, reduce, reduced_cycles, square_canonical};
use crate::arith::p1::lift_coprime;
use crate::arith::{Divisor0, Mat2, P1List, RationalCusp};
use crate::error::{Error, Result};

/// Sign of `x - y sqrt(d)` for `d > 0` not a square.
fn sign_minus_sqrt(x: &BigInt, y: &BigInt, d: i64) -> Ordering {
    let (xs, ys) = (x.sign(), y.sign());
    use num_bigint::Sign::*;
    match (xs, ys) {
        (NoSign, NoSign) => Ordering::Equal,
        (_, NoSign) => x.cmp(&BigInt::zero()),
        (NoSign, Plus) | (Minus, Plus) => Ordering::Less,
        (NoSign, Minus) | (Plus, Minus) => Ordering::Greater,
        (Plus, Plus) => (x * x).cmp(&(y * y * d)),
        (Minus, Minus) => (y * y * d).cmp(&(x * x)),
    }
}

/// The least power of the fundamental automorph lying in `Gamma_0(M)`,
/// normalized by `r - t omega_Q > 1` with `omega_Q = (b + sqrt(D)) / (2c)`.
pub fn gamma_q(q: &QuadForm, m: u64) -> Result<Mat2> {
    let e = fundamental_automorph(q)?;
    let mb = BigInt::from(m);
    let mut n = 1u64;
    let mut cur = e.clone();
    while !cur.c.mod_floor(&mb).is_zero() {
        cur = reduce_mat(&cur.mul(&e), &mb);
        n += 1;
    }
    let g = e.pow(n);
    if satisfies_normalization(q, &g) {
        Ok(g)
    } else {
        Ok(g.adj())
    }
}

fn reduce_mat(g: &Mat2, m: &BigInt) -> Mat2 {
    Mat2::from_big(g.a.mod_floor(m), g.b.mod_floor(m), g.c.mod_floor(m), g.d.mod_floor(m))
}

/// `r - t omega_Q > 1` for `g = [[r, s], [t, u]]`, decided exactly.
pub fn satisfies_normalization(q: &QuadForm, g: &Mat2) -> bool {
    // (r - 1) - t (b + sqrt D) / (2c) > 0  <=>  sign(c) * sign(X - t sqrt D) > 0
    let c = BigInt::from(q.c);
    let x = BigInt::from(2) * &c * (&g.a - 1) - &g.c * q.b;
    let s = sign_minus_sqrt(&x, &g.c, q.discriminant());
    match q.c.signum() {
        1 => s == Ordering::Greater,
        -1 => s == Ordering::Less,
        _ => false,
    }
}

/// How a cycle divisor was obtained.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Provenance {
    Endpoints { omega: RationalCusp, omega_prime: RationalCusp },
    Automorph { gamma: Mat2, base: RationalCusp },
}

/// The boundary `D_Q` of the geodesic attached to a form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleDivisor {
    pub divisor: Divisor0,
    pub provenance: Provenance,
}

/// `D_Q`: `{omega_Q} - {omega'_Q}` for square discriminant, else `{gamma_Q w} - {w}`.
pub fn cycle_divisor(q: &QuadForm, m: u64, w: &RationalCusp) -> Result<CycleDivisor> {
    let delta = q.discriminant();
    if is_square(delta) {
        let s = isqrt(delta);
        let (omega, omega_prime) = if q.c != 0 {
            (RationalCusp::new(q.b + s, 2 * q.c)?, RationalCusp::new(q.b - s, 2 * q.c)?)
        } else if q.b > 0 {
            (RationalCusp::Infinity, RationalCusp::new(q.a, q.b)?)
        } else {
            (RationalCusp::new(q.a, q.b)?, RationalCusp::Infinity)
        };
        return Ok(CycleDivisor {
            divisor: Divisor0::path(omega_prime.clone(), omega.clone()),
            provenance: Provenance::Endpoints { omega, omega_prime },
        });
    }
    let gamma = gamma_q(q, m)?;
    let end = w.act(&gamma);
    Ok(CycleDivisor {
        divisor: Divisor0::path(w.clone(), end),
        provenance: Provenance::Automorph { gamma, base: w.clone() },
    })
}

/// Some `g` in `SL2(Z)` with `Q|g = Q'`.
fn sl2_transporter(q: &QuadForm, qp: &QuadForm) -> Result<Option<Mat2>> {
    if is_square(q.discriminant()) {
        let (t1, h1) = square_canonical(q)?;
        let (t2, h2) = square_canonical(qp)?;
        return Ok((t1 == t2).then(|| h1.mul(&h2.adj())));
    }
    let (r1, h1) = reduce(q)?;
    let (r2, h2) = reduce(qp)?;
    let mut w = Mat2::identity();
    for (f, g) in cycle(&r1) {
        if f == r2 {
            return Ok(Some(h1.mul(&w).mul(&h2.adj())));
        }
        w = w.mul(&g);
    }
    Ok(None)
}

/// Some `g` in `Gamma_0(M)` with `Q|g = Q'`, if the forms are equivalent.
pub fn equivalent_under_gamma0(q: &QuadForm, qp: &QuadForm, m: u64) -> Result<Option<Mat2>> {
    if q.discriminant() != qp.discriminant() {
        return Err(Error::DiscriminantMismatch(q.discriminant(), qp.discriminant()));
    }
    let (q0, c0) = q.primitive_part();
    let (q1, c1) = qp.primitive_part();
    if c0 != c1 {
        return Ok(None);
    }
    let Some(g0) = sl2_transporter(&q0, &q1)? else {
        return Ok(None);
    };
    if g0.in_gamma0(m) {
        return Ok(Some(g0));
    }
    if is_square(q0.discriminant()) {
        return Ok(None);
    }
    // transporters are +-e^n g0
    let e = fundamental_automorph(&q0)?;
    let mb = BigInt::from(m);
    let em = reduce_mat(&e, &mb);
    let mut cur = reduce_mat(&g0, &mb);
    let mut n = 0u64;
    let mut power = Mat2::identity();
    loop {
        n += 1;
        cur = reduce_mat(&em.mul(&cur), &mb);
        power = reduce_mat(&power.mul(&em), &mb);
        if cur.c.is_zero() {
            return Ok(Some(e.pow(n).mul(&g0)));
        }
        if is_scalar_pm1(&power, &mb) {
            return Ok(None);
        }
    }
}

fn is_scalar_pm1(g: &Mat2, m: &BigInt) -> bool {
    let one = BigInt::one().mod_floor(m);
    let mone = (-BigInt::one()).mod_floor(m);
    g.b.is_zero() && g.c.is_zero() && g.a == g.d && (g.a == one || g.a == mone)
}

/// One representative per `Gamma_0(M)`-class of primitive forms in `F_M`
/// with discriminant `delta`.
pub fn primitive_classes(m: u64, delta: i64) -> Vec<QuadForm> {
    if delta <= 0 || !(delta % 4 == 0 || delta % 4 == 1) {
        return Vec::new();
    }
    let p1 = P1List::new(m);
    let mut out = Vec::new();
    let sl2_reps: Vec<(QuadForm, Option<Mat2>)> = if is_square(delta) {
        let s = isqrt(delta);
        (0..s)
            .filter(|c| s.gcd(c) == 1)
            .map(|c| (QuadForm::new(0, s, c), None))
            .collect()
    } else {
        reduced_cycles(delta)
            .into_iter()
            .map(|cyc| {
                let e = cycle_automorph(&cyc[0]);
                (cyc[0], Some(e))
            })
            .collect()
    };
    for (r, e) in sl2_reps {
        let em = e.map(|e| e.residues(m));
        let mut seen = vec![false; p1.len()];
        for start in 0..p1.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            if let Some(em) = em {
                let mut i = start;
                loop {
                    let (x, y) = p1.point(i);
                    let nx = (em[0] * x + em[1] * y) % m;
                    let ny = (em[2] * x + em[3] * y) % m;
                    i = p1.index_of_residues(nx, ny).expect("automorph permutes P1");
                    if i == start {
                        break;
                    }
                    seen[i] = true;
                    orbit.push(i);
                }
            }
            let mut best: Option<QuadForm> = None;
            for i in orbit {
                let (x, y) = p1.point(i);
                let (x, y) = lift_coprime(x, y, m);
                let (_, u, v) = crate::arith::mat::ext_gcd(&BigInt::from(x), &BigInt::from(y));
                let g = Mat2::from_big(x.into(), -v, y.into(), u);
                let Ok(f) = r.act(&g) else { continue };
                if !f.in_fm(m) {
                    break;
                }
                let key = |f: &QuadForm| (f.a.abs().max(f.b.abs()).max(f.c.abs()), *f);
                if best.map_or(true, |b| key(&f) < key(&b)) {
                    best = Some(f);
                }
            }
            out.extend(best);
        }
    }
    out.sort();
    out
}

/// Representatives of all `Gamma_0(M)`-classes of forms in `F_M` with
/// discriminant `delta`, including the multiples `mQ` with `(m, M) = 1`.
pub fn enumerate_classes(m: u64, delta: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    if delta <= 0 {
        return out;
    }
    let mut k = 1i64;
    while k * k <= delta {
        if delta % (k * k) == 0 && (k as u64).gcd(&m) == 1 {
            for q in primitive_classes(m, delta / (k * k)) {
                out.push(q.scale(k));
            }
        }
        k += 1;
    }
    out.sort();
    out
}

/// `D_Q` up to a `Gamma_0(M)`-coboundary, as a signed sum of unimodular
/// divisors `D_g = {g oo} - {g 0}`.
///
/// For non-square discriminants the base point is `h oo` where `Q|h` is
/// reduced; the path to `eps (h oo)` is split along the cycle of reduced
/// forms, and `gamma_Q = eps^{+-n}` repeats it `n` times. Values of
/// invariant symbols paired against `Q^k` do not depend on the base point.
/// With `modulus = Some(R)` all matrices are reduced mod `R`.
#[derive(Clone, Debug)]
pub struct UnimodularChain {
    pub terms: Vec<(Mat2, i64)>,
}

pub fn cycle_chain(q: &QuadForm, m: u64, modulus: Option<&BigInt>) -> Result<Option<UnimodularChain>> {
    if is_square(q.discriminant()) {
        return Ok(None);
    }
    let red = |g: Mat2| match modulus {
        Some(r) => reduce_mat(&g, r),
        None => g,
    };
    let (q0, _) = q.primitive_part();
    let (r, h) = reduce(&q0)?;
    let cyc = cycle(&r);
    let mut base = Vec::with_capacity(cyc.len());
    let mut gj = h.clone();
    for (_, g) in &cyc {
        let s = &g.a;
        let t = Mat2::from_big(BigInt::one(), s.clone(), BigInt::zero(), BigInt::one());
        base.push(red(gj.mul(&t)));
        gj = red(gj.mul(g));
    }
    let p = cycle_automorph(&r);
    let eps = h.mul(&p).mul(&h.adj());
    // gamma_Q = eps^n or eps^{-n}; r - t omega_Q is an eigenvalue, so the
    // normalization of eps^n agrees with that of eps
    let mb = BigInt::from(m);
    let em = reduce_mat(&eps, &mb);
    let mut n = 1u64;
    let mut cur = em.clone();
    while !cur.c.is_zero() {
        cur = reduce_mat(&cur.mul(&em), &mb);
        n += 1;
    }
    let positive = satisfies_normalization(q, &eps);
    let step = if positive { red(eps.clone()) } else { red(eps.adj()) };
    // {eps^n w} - {w} = sum_{i<n} eps^i ({eps w} - {w}) = -sum_{i,j} D_{eps^i B_j};
    // {eps^-n w} - {w} = -sum_{i=1..n} eps^-i ({eps w} - {w}) = +sum D_{eps^-i B_j}
    let mut terms = Vec::with_capacity(n as usize * base.len());
    let (mut power, sign) = if positive { (Mat2::identity(), -1) } else { (step.clone(), 1) };
    for _ in 0..n {
        for b in &base {
            terms.push((red(power.mul(b)), sign));
        }
        power = red(power.mul(&step));
    }
    Ok(Some(UnimodularChain { terms }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_q_examples() {
        let q = QuadForm::new(1, 1, -1);
        let g = gamma_q(&q, 1).unwrap();
        assert_eq!(q.act(&g).unwrap(), q);
        assert_eq!(g.trace(), BigInt::from(3));
        assert!(satisfies_normalization(&q, &g));
        assert!(!satisfies_normalization(&q, &g.adj()));

        let q = QuadForm::new(1, 5, 5);
        let g = gamma_q(&q, 5).unwrap();
        assert!(g.in_gamma0(5));
        assert_eq!(q.act(&g).unwrap(), q);
        // oracle: iterate powers of the fundamental automorph
        let e = fundamental_automorph(&q).unwrap();
        let n = (1..50u64).find(|&n| e.pow(n).in_gamma0(5)).unwrap();
        assert!(g == e.pow(n) || g == e.pow(n).adj());
    }

    #[test]
    fn square_divisors() {
        let d = cycle_divisor(&QuadForm::new(1, 3, 2), 1, &RationalCusp::integer(0)).unwrap();
        assert_eq!(
            d.divisor,
            Divisor0::path(RationalCusp::new(1, 2).unwrap(), RationalCusp::integer(1))
        );
        let d = cycle_divisor(&QuadForm::new(1, 2, 0), 1, &RationalCusp::integer(0)).unwrap();
        assert_eq!(d.divisor, Divisor0::path(RationalCusp::new(1, 2).unwrap(), RationalCusp::Infinity));
    }

    #[test]
    fn automorph_divisor() {
        let q = QuadForm::new(1, 1, -1);
        let d = cycle_divisor(&q, 1, &RationalCusp::integer(0)).unwrap();
        let g = gamma_q(&q, 1).unwrap();
        assert_eq!(d.divisor, Divisor0::path(RationalCusp::integer(0), RationalCusp::integer(0).act(&g)));
    }

    #[test]
    fn class_counts() {
        assert_eq!(primitive_classes(1, 5).len(), 1);
        assert_eq!(primitive_classes(1, 8).len(), 1);
        assert!(enumerate_classes(5, 21).is_empty());
    }

    #[test]
    fn mismatched_discriminants() {
        let r = equivalent_under_gamma0(&QuadForm::new(1, 1, -1), &QuadForm::new(1, 0, -2), 1);
        assert!(matches!(r, Err(Error::DiscriminantMismatch(5, 8))));
    }
}
