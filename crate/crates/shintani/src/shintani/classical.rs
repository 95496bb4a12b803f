// SPDX-License-Identifier: Apache-2.0

//! The cohomological lift of weight `2k` symbols to half-integral weight
//! `k + 3/2` q-expansions, and the Hecke operators on the target.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{kronecker, DirichletChar, RationalCusp, Ring};
use crate::error::{Error, Result};
use crate::modsym::{pair_coeffs, ModularSymbol};
use crate::qf::{cycle_chain, cycle_divisor, enumerate_classes, QuadForm};

/// A q-expansion `sum_{n >= 1} beta_n q^n` of level `4M`, weight `k + 3/2`.
#[derive(Clone, Debug)]
pub struct HalfIntQExp<R: Ring> {
    pub ring: R,
    pub level: u64,
    pub k: usize,
    pub character: DirichletChar,
    /// `coeffs[n - 1] = beta_n`.
    pub coeffs: Vec<R::E>,
}

impl<R: Ring> PartialEq for HalfIntQExp<R> {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.k == o.k && self.character == o.character && self.coeffs == o.coeffs
    }
}

impl<R: Ring> HalfIntQExp<R> {
    pub fn nmax(&self) -> usize {
        self.coeffs.len()
    }

    /// `beta_n`, zero for `n = 0` and `None` past the stored range.
    pub fn coeff(&self, n: usize) -> Option<R::E> {
        match n {
            0 => Some(self.ring.zero()),
            n => self.coeffs.get(n - 1).cloned(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn truncate(&self, nmax: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(nmax);
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        HalfIntQExp { coeffs, ..self.clone() }
    }

    pub fn scale(&self, c: &R::E) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect();
        HalfIntQExp { coeffs, ..self.clone() }
    }

    /// The first `n` where the two expansions differ.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let n = self.nmax().max(o.nmax());
        (1..=n).find(|&i| self.coeff(i) != o.coeff(i))
    }

    pub fn to_json(&self) -> Value {
        let coeffs: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| ((i + 1).to_string(), self.ring.render(c)))
            .collect();
        json!({
            "level": self.level,
            "weight_num": 2 * self.k + 3,
            "weight_den": 2,
            "character": self.character,
            "coeffs": coeffs,
        })
    }
}

/// `chi'(d) = chi(d) * ((-1)^{k+1} M / d)` modulo `4M`.
pub fn shifted_character(chi: &DirichletChar, m: u64, k: usize) -> Result<DirichletChar> {
    let modulus = 4 * m;
    let sign: i64 = if k % 2 == 0 { -1 } else { 1 };
    let chi = chi.lift(modulus)?;
    let values = (0..modulus as i64)
        .map(|d| (chi.eval(d) * kronecker(sign * m as i64, d)) as i8)
        .collect();
    DirichletChar::from_values(modulus, values)
}

/// A character of modulus `M` whose parity is `(-1)^{k+1}`, when one is easy
/// to name: trivial for odd `k`, otherwise a quadratic character attached to
/// a prime `q = 3 mod 4` dividing `M` (or to `4 | M`).
///
/// With the other parity, `Q` and `-Q` contribute opposite terms and the lift
/// vanishes identically.
pub fn default_character(m: u64, k: usize) -> DirichletChar {
    let m = m.max(1);
    if k % 2 == 1 {
        return DirichletChar::trivial(m);
    }
    let odd = crate::modsym::factor_u64(m)
        .into_iter()
        .map(|(q, _)| q)
        .find(|&q| q % 4 == 3)
        .or((m % 4 == 0).then_some(4));
    match odd.map(|q| DirichletChar::quadratic(q).and_then(|c| c.lift(m))) {
        Some(Ok(c)) => c,
        _ => DirichletChar::trivial(m),
    }
}

/// The exponent of `q` attached to discriminant `delta` at level `M`.
pub fn exponent_of(delta: i64, m: u64) -> Option<u64> {
    let den = if m % 2 == 0 { 4 * m as i64 } else { m as i64 };
    (delta > 0 && delta % den == 0).then(|| (delta / den) as u64)
}

/// The discriminant carrying the coefficient of `q^n` at level `M`.
pub fn discriminant_of(n: u64, m: u64) -> i64 {
    let den = if m % 2 == 0 { 4 * m } else { m };
    (n * den) as i64
}

fn check_input<R: Ring>(phi: &ModularSymbol<R>, q: &QuadForm, k: usize) -> Result<()> {
    if phi.k != 2 * k {
        return Err(Error::DegreeMismatch(phi.k, 2 * k));
    }
    if !q.in_fm(phi.level()) {
        return Err(Error::InvalidInput(format!("{q} is not in F_{}", phi.level())));
    }
    Ok(())
}

fn pair_with_power<R: Ring>(phi: &ModularSymbol<R>, value: &[R::E], q: &QuadForm, k: usize, chi: &DirichletChar) -> R::E {
    let r = &phi.ring;
    let qk: Vec<R::E> = q.power_coeffs(k).iter().map(|c| r.from_int(c)).collect();
    let v = pair_coeffs(r, value, &qk);
    r.mul(&v, &r.from_i64(chi.eval(q.a) as i64))
}

/// `chi(Q) <phi(D_Q), Q^k>` for `phi` of weight `2k` and character `chi^2`.
pub fn j_classical<R: Ring>(phi: &ModularSymbol<R>, q: &QuadForm, k: usize, chi: &DirichletChar) -> Result<R::E> {
    check_input(phi, q, k)?;
    let modulus = phi.chain_modulus();
    let value = match cycle_chain(q, phi.level(), modulus.as_ref())? {
        Some(chain) => phi.evaluate_chain(&chain),
        None => {
            let d = cycle_divisor(q, phi.level(), &RationalCusp::integer(0))?;
            phi.evaluate(&d.divisor)?.coeffs
        }
    };
    Ok(pair_with_power(phi, &value, q, k, chi))
}

/// The same quantity computed from the cycle divisor `{gamma_Q w} - {w}`
/// by continued fractions, with an explicit base point `w`.
pub fn j_classical_at<R: Ring>(
    phi: &ModularSymbol<R>,
    q: &QuadForm,
    k: usize,
    chi: &DirichletChar,
    w: &RationalCusp,
) -> Result<R::E> {
    check_input(phi, q, k)?;
    let d = cycle_divisor(q, phi.level(), w)?;
    let value = phi.evaluate(&d.divisor)?.coeffs;
    Ok(pair_with_power(phi, &value, q, k, chi))
}

/// `Theta_{k,chi}(phi)` up to `q^nmax`.
pub fn theta_classical<R: Ring>(phi: &ModularSymbol<R>, k: usize, chi: &DirichletChar, nmax: usize) -> Result<HalfIntQExp<R>> {
    let m = phi.level();
    if phi.k != 2 * k {
        return Err(Error::DegreeMismatch(phi.k, 2 * k));
    }
    let character = shifted_character(chi, m, k)?;
    let r = &phi.ring;
    let coeffs = (1..=nmax as u64)
        .into_par_iter()
        .map(|n| {
            let mut acc = r.zero();
            for q in enumerate_classes(m, discriminant_of(n, m)) {
                acc = r.add(&acc, &j_classical(phi, &q, k, chi)?);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HalfIntQExp { ring: r.clone(), level: 4 * m, k, character, coeffs })
}

/// `sum beta_{pn} q^n` for `p | M`; the character picks up `(p / .)`.
pub fn halfint_tp<R: Ring>(e: &HalfIntQExp<R>, p: u64) -> Result<HalfIntQExp<R>> {
    let m = e.level / 4;
    if p < 2 || m % p != 0 {
        return Err(Error::BadIndex(p, format!("T_p needs p | {m}")));
    }
    let nmax = e.nmax() / p as usize;
    let coeffs = (1..=nmax).map(|n| e.coeffs[n * p as usize - 1].clone()).collect();
    let twist = DirichletChar::from_kronecker(p as i64, e.level)?;
    let character = e.character.mul(&twist);
    Ok(HalfIntQExp { coeffs, character, ..e.clone() })
}

/// `T_{l^2}` for an odd prime `l` prime to the level.
pub fn halfint_tl2<R: Ring>(e: &HalfIntQExp<R>, l: u64) -> Result<HalfIntQExp<R>> {
    if l % 2 == 0 || !crate::arith::padic::is_prime(l) || e.level % l == 0 {
        return Err(Error::BadIndex(l, format!("T_l^2 needs an odd prime not dividing {}", e.level)));
    }
    let r = &e.ring;
    let l2 = (l * l) as usize;
    let nmax = e.nmax() / l2;
    let li = l as i64;
    let chi_l = e.character.eval(li) as i64;
    let sign = kronecker(-1, li) as i64;
    let sign = if (e.k + 1) % 2 == 0 { 1 } else { sign };
    let lk = r.from_int(&num_traits::pow(BigInt::from(l), e.k));
    let l2k1 = r.from_int(&num_traits::pow(BigInt::from(l), 2 * e.k + 1));
    let chi_l2 = r.from_i64(e.character.eval(li * li) as i64);
    let coeffs = (1..=nmax)
        .map(|n| {
            let mut v = e.coeffs[l2 * n - 1].clone();
            let mid = chi_l * sign * kronecker(n as i64, li) as i64;
            if mid != 0 {
                let t = r.mul(&r.mul(&r.from_i64(mid), &lk), &e.coeffs[n - 1]);
                v = r.add(&v, &t);
            }
            if n % l2 == 0 {
                let t = r.mul(&r.mul(&chi_l2, &l2k1), &e.coeffs[n / l2 - 1]);
                v = r.add(&v, &t);
            }
            v
        })
        .collect();
    Ok(HalfIntQExp { coeffs, ..e.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use num_rational::BigRational;

    fn unit_at_one(k: usize, len: usize) -> HalfIntQExp<Rationals> {
        let mut coeffs = vec![BigRational::from_integer(0.into()); len];
        coeffs[0] = BigRational::from_integer(1.into());
        HalfIntQExp { ring: Rationals, level: 4, k, character: DirichletChar::trivial(4), coeffs }
    }

    #[test]
    fn tl2_on_a_single_coefficient() {
        let e = unit_at_one(0, 9);
        let t = halfint_tl2(&e, 3).unwrap();
        assert_eq!(t.coeffs, vec![BigRational::from_integer((-1).into())]);
    }

    #[test]
    fn tp_shifts() {
        let mut e = unit_at_one(0, 10);
        e.level = 20;
        e.character = DirichletChar::trivial(20);
        e.coeffs[0] = BigRational::from_integer(0.into());
        e.coeffs[4] = BigRational::from_integer(7.into());
        let t = halfint_tp(&e, 5).unwrap();
        assert_eq!(t.coeff(1), Some(BigRational::from_integer(7.into())));
        assert_eq!(t.nmax(), 2);
        assert_eq!(t.character.eval(3), kronecker(5, 3));
        assert!(matches!(halfint_tp(&e, 3), Err(Error::BadIndex(3, _))));
        assert!(matches!(halfint_tl2(&e, 5), Err(Error::BadIndex(5, _))));
    }

    #[test]
    fn shifted_character_values() {
        let c = shifted_character(&DirichletChar::trivial(11), 11, 0).unwrap();
        assert_eq!(c.modulus(), 44);
        for d in [1i64, 3, 5, 7, 9, 13] {
            assert_eq!(c.eval(d), kronecker(-11, d));
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(exponent_of(44, 11), Some(4));
        assert_eq!(exponent_of(45, 11), None);
        assert_eq!(discriminant_of(3, 2), 24);
    }
}
