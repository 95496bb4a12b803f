// SPDX-License-Identifier: Apache-2.0

//! The overconvergent lift to formal q-expansions with coefficients in
//! `D~(Z_{p,N}^x)`, the Hecke operators acting on such expansions, and
//! specialization at arithmetic weights.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{kronecker, PadicApprox, RationalCusp, ZpRing};
use crate::dist::{eval_weight_meta, tilde_jq, tilde_jq_tagged, ArithWeight, DistN, MetaCoeff, MomentDist1, TaggedMoments};
use crate::error::{Error, Result};
use crate::ocsymb::OCSymbol;
use crate::qf::{cycle_chain, cycle_divisor, enumerate_classes, QuadForm};

use super::classical::{discriminant_of, shifted_character, HalfIntQExp};

/// A formal expansion `sum_{n >= 1} a(n) q^n` with metaplectic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalQExp {
    pub ring: ZpRing,
    /// `Np`.
    pub level: u64,
    /// Tame level `N`.
    pub tame: u64,
    /// Degree bound of the right factors.
    pub t: usize,
    /// `coeffs[n - 1] = a(n)`.
    pub coeffs: Vec<MetaCoeff>,
}

impl FormalQExp {
    pub fn zero(ring: ZpRing, level: u64, tame: u64, t: usize, nmax: usize) -> Self {
        FormalQExp { ring, level, tame, t, coeffs: vec![MetaCoeff::zero(tame, ring, t); nmax] }
    }

    pub fn nmax(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> Option<&MetaCoeff> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, nmax: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(nmax);
        out
    }

    /// Whether `q^n` can carry a form of `F_{Np}`: its discriminant must be
    /// `0` or `1` mod 4.
    pub fn exponent_realizable(&self, n: u64) -> bool {
        discriminant_of(n, self.level).rem_euclid(4) <= 1
    }

    /// Only realizable exponents carry nonzero coefficients.
    pub fn exponents_integral(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.exponent_realizable(i as u64 + 1))
    }

    /// The first `n` where the two expansions differ.
    pub fn first_difference(&self, o: &Self) -> Option<usize> {
        let n = self.nmax().min(o.nmax());
        (1..=n).find(|&i| self.coeffs[i - 1] != o.coeffs[i - 1])
    }

    /// The module action of `r`, through `sigma`, on every right factor.
    pub fn module_act(&self, r: &DistN) -> Result<Self> {
        let s = r.sigma();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.map_right(|x| x.convolve(&s)))
            .collect::<Result<_>>()?;
        Ok(FormalQExp { coeffs, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| json!({"n": i + 1, "coeff": c.to_json()}))
            .collect();
        json!({
            "level": self.level,
            "N": self.tame,
            "p": self.ring.p,
            "M": self.ring.m,
            "nmax": self.nmax(),
            "coeffs": coeffs,
        })
    }
}

fn chain_modulus(phi: &OCSymbol) -> BigInt {
    BigInt::from(phi.level()) * BigInt::from(phi.ring().modulus())
}

/// `Phi(D_Q)`, from the cycle of reduced forms with matrices reduced
/// modulo `Np p^M`.
fn value_on_cycle(phi: &OCSymbol, q: &QuadForm) -> Result<TaggedMoments> {
    let modulus = chain_modulus(phi);
    match cycle_chain(q, phi.level(), Some(&modulus))? {
        Some(chain) => {
            let terms: Vec<_> = chain
                .terms
                .iter()
                .map(|(g, s)| {
                    let mut t = phi.manin().unimodular(g);
                    t.coeff = BigInt::from(*s);
                    t
                })
                .collect();
            Ok(phi.eval_terms(&terms))
        }
        None => {
            let d = cycle_divisor(q, phi.level(), &RationalCusp::integer(0))?;
            phi.evaluate(&d.divisor)
        }
    }
}

/// `J(Phi, Q) = J~_Q(Phi(D_Q))`.
pub fn j_oc(phi: &OCSymbol, q: &QuadForm) -> Result<MetaCoeff> {
    let v = value_on_cycle(phi, q)?;
    tilde_jq_tagged(&v, q, phi.level())
}

/// The same coefficient from the divisor `{gamma_Q w} - {w}` evaluated by
/// continued fractions, with `J~_Q` applied to each `mu (x) delta_1 [t]`.
pub fn j_oc_at(phi: &OCSymbol, q: &QuadForm, w: &RationalCusp) -> Result<MetaCoeff> {
    let d = cycle_divisor(q, phi.level(), w)?;
    let v = phi.evaluate(&d.divisor)?;
    let ring = phi.ring();
    let n = phi.params().n;
    let t = v.degree_bound();
    let mut acc = MetaCoeff::zero(n, ring, t / 2);
    for (tag, mu) in v.components() {
        if mu.is_zero() {
            continue;
        }
        let r = DistN::tagged(n, tag as i64, MomentDist1::dirac(ring, t, &BigInt::from(1)))?;
        acc = acc.add(&tilde_jq(mu, &r, q, phi.level())?)?;
    }
    Ok(acc)
}

/// `Theta(Phi)` up to `q^nmax`.
pub fn theta_oc(phi: &OCSymbol, nmax: usize) -> Result<FormalQExp> {
    let pr = phi.params();
    let level = phi.level();
    let ring = phi.ring();
    let t = pr.t / 2;
    let coeffs = (1..=nmax as u64)
        .into_par_iter()
        .map(|n| {
            let mut acc = MetaCoeff::zero(pr.n, ring, t);
            for q in enumerate_classes(level, discriminant_of(n, level)) {
                acc = acc.add(&j_oc(phi, &q)?)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalQExp { ring, level, tame: pr.n, t, coeffs })
}

fn check_prime(l: u64) -> Result<()> {
    if !crate::arith::padic::is_prime(l) {
        return Err(Error::BadIndex(l, "not a prime".into()));
    }
    Ok(())
}

/// `[u]_N delta_u * x`, zero when `u` is not a unit mod `N` or `p | u`.
fn dirac_shift(x: &DistN, u: u64) -> Result<DistN> {
    let ring = x.ring();
    let n = x.tame_level();
    if num_integer::gcd(u, n) != 1 || u % ring.p == 0 {
        return Ok(DistN::zero(n, ring, x.degree_bound()));
    }
    let d = MomentDist1::dirac(ring, x.degree_bound(), &BigInt::from(u));
    x.convolve_scalar(&d)?.shift_tag(&BigInt::from(u))
}

/// `T_l` on a formal expansion, for an odd prime `l`:
/// `b(n) = a(n l^2) + (Np n / l) [l]_N delta_l * a(n) + l [l^2]_N delta_{l^2} * a(n / l^2)`.
/// The result holds `nmax / l^2` coefficients.
pub fn qexp_hecke_tl(e: &FormalQExp, l: u64) -> Result<FormalQExp> {
    check_prime(l)?;
    if l == 2 && e.tame % 2 == 1 {
        return Err(Error::BadIndex(2, "T_2 needs an even tame level".into()));
    }
    let l2 = (l * l) as usize;
    let nmax = e.nmax() / l2;
    let lring = e.ring.elt(l as i64);
    let coeffs = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let a = &e.coeffs[n - 1];
            let mut right = e.coeffs[n * l2 - 1].right.clone();
            let sign = kronecker((e.level * n as u64) as i64, l as i64);
            if sign != 0 {
                let mid = dirac_shift(&a.right, l)?;
                right = right.add(&mid.scale(&e.ring.elt(sign as i64)));
            }
            if n % l2 == 0 {
                let low = dirac_shift(&e.coeffs[n / l2 - 1].right, l * l)?;
                right = right.add(&low.scale(&lring));
            }
            Ok(MetaCoeff { left: a.left.clone(), right })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalQExp { coeffs, ..e.clone() })
}

/// `T_{l,l}` on a formal expansion: `b(n) = [l^2]_N delta_{l^2} * a(n)`, for `l` prime to `Np`.
pub fn qexp_hecke_tll(e: &FormalQExp, l: u64) -> Result<FormalQExp> {
    check_prime(l)?;
    if e.level % l == 0 {
        return Err(Error::BadIndex(l, format!("T_(l,l) needs l prime to {}", e.level)));
    }
    let coeffs = e
        .coeffs
        .iter()
        .map(|a| a.map_right(|r| dirac_shift(r, l * l)))
        .collect::<Result<_>>()?;
    Ok(FormalQExp { coeffs, ..e.clone() })
}

/// Evaluates every coefficient at `kappa~`, giving a classical expansion of
/// weight `k + 3/2` and character `chi'`.
pub fn specialize_qexp(e: &FormalQExp, kappa: &ArithWeight) -> Result<HalfIntQExp<ZpRing>> {
    if kappa.k > e.t {
        return Err(Error::InsufficientMoments { needed: kappa.k, have: e.t });
    }
    let coeffs: Vec<PadicApprox> = e.coeffs.iter().map(|c| eval_weight_meta(c, kappa)).collect::<Result<_>>()?;
    let character = shifted_character(&kappa.chi, e.level, kappa.k)?;
    Ok(HalfIntQExp { ring: e.ring, level: 4 * e.level, k: kappa.k, character, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hecke_at_a_level_prime_only_shifts() {
        let ring = ZpRing::new(5, 3).unwrap();
        let mut e = FormalQExp::zero(ring, 15, 3, 2, 20);
        let one = DistN::one(3, ring, 2);
        e.coeffs[17] = MetaCoeff::with_unit_left(one.clone());
        let t = qexp_hecke_tl(&e, 3).unwrap();
        assert_eq!(t.nmax(), 2);
        assert_eq!(t.coeffs[1].right, one);
        assert!(t.coeffs[0].is_zero());
    }

    #[test]
    fn dirac_at_p_vanishes() {
        let ring = ZpRing::new(5, 3).unwrap();
        let one = DistN::one(1, ring, 2);
        assert!(dirac_shift(&one, 5).unwrap().is_zero());
        assert!(!dirac_shift(&one, 3).unwrap().is_zero());
    }
}
