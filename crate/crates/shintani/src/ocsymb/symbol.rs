// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{Divisor0, Mat2, PadicApprox, RationalCusp, Ring, ZpRing};
use crate::dist::{specialize, ArithWeight, DistN, TaggedMoments};
use crate::error::{Error, Result};
use crate::modsym::{conj_iota, hecke_matrices, ManinData, ModularSymbol, Term};

/// Working precision of an overconvergent computation: `Z/p^M` coefficients
/// and moments of degree at most `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OcParams {
    pub p: u64,
    /// Tame level `N`, prime to `p`.
    pub n: u64,
    pub m: u32,
    pub t: usize,
}

impl OcParams {
    pub fn new(p: u64, n: u64, m: u32, t: usize) -> Result<Self> {
        ZpRing::new(p, m)?;
        let n = n.max(1);
        if n.gcd(&p) != 1 {
            return Err(Error::InvalidInput(format!("tame level {n} is not prime to p = {p}")));
        }
        Ok(OcParams { p, n, m, t })
    }

    pub fn level(&self) -> u64 {
        self.n * self.p
    }

    pub fn ring(&self) -> ZpRing {
        ZpRing::new(self.p, self.m).expect("validated on construction")
    }
}

/// An overconvergent modular symbol over `Gamma_0(Np)` with values in the
/// finite model of `D_N`, stored by its values on the Manin generators.
#[derive(Clone, Debug)]
pub struct OCSymbol {
    params: OcParams,
    manin: Arc<ManinData>,
    pub values: Vec<TaggedMoments>,
}

impl PartialEq for OCSymbol {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params && self.values == o.values
    }
}

impl OCSymbol {
    pub fn zero(params: OcParams, manin: Arc<ManinData>) -> Self {
        let v = TaggedMoments::zero(params.n, params.ring(), params.t);
        OCSymbol { params, values: vec![v; manin.len()], manin }
    }

    pub fn from_values(params: OcParams, manin: Arc<ManinData>, values: Vec<TaggedMoments>) -> Result<Self> {
        if manin.level() != params.level() || values.len() != manin.len() {
            return Err(Error::InvalidInput("values do not match the presentation".into()));
        }
        Ok(OCSymbol { params, manin, values })
    }

    pub fn params(&self) -> OcParams {
        self.params
    }

    pub fn level(&self) -> u64 {
        self.params.level()
    }

    pub fn ring(&self) -> ZpRing {
        self.params.ring()
    }

    pub fn manin(&self) -> &Arc<ManinData> {
        &self.manin
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Least valuation of a moment, `M` for zero.
    pub fn min_valuation(&self) -> u32 {
        self.values.iter().map(|v| v.min_valuation()).min().unwrap_or(self.params.m)
    }

    fn map(&self, f: impl Fn(&TaggedMoments) -> TaggedMoments + Sync + Send) -> Self {
        OCSymbol { values: self.values.par_iter().map(f).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        OCSymbol { values: self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        OCSymbol { values: self.values.iter().zip(&o.values).map(|(a, b)| a.sub(b)).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &PadicApprox) -> Self {
        self.map(|v| v.scale(s))
    }

    /// `sum coeff * (x_gen | h)`.
    pub fn eval_terms(&self, terms: &[Term]) -> TaggedMoments {
        let ring = self.ring();
        let mut acc = TaggedMoments::zero(self.params.n, ring, self.params.t);
        for t in terms {
            let x = &self.values[t.gen];
            if x.is_zero() {
                continue;
            }
            acc = acc.add(&x.act_unchecked(&t.h).scale(&ring.from_int(&t.coeff)));
        }
        acc
    }

    pub fn evaluate(&self, d: &Divisor0) -> Result<TaggedMoments> {
        Ok(self.eval_terms(&self.manin.divisor(d)?))
    }

    /// `Phi({to} - {from})`.
    pub fn evaluate_path(&self, from: &RationalCusp, to: &RationalCusp) -> Result<TaggedMoments> {
        let mut terms = self.manin.path_from_infinity(to)?;
        for mut t in self.manin.path_from_infinity(from)? {
            t.coeff = -t.coeff;
            terms.push(t);
        }
        Ok(self.eval_terms(&terms))
    }

    pub fn satisfies_relations(&self) -> bool {
        self.manin.relations().iter().all(|rel| self.eval_terms(rel).is_zero())
    }

    /// `D -> sum_alpha Phi(alpha D) | alpha` for matrices in `S_0(Np)`.
    pub fn act_sum(&self, alphas: &[Mat2]) -> Result<Self> {
        let np = self.level();
        for a in alphas {
            crate::modsym::check_s0(a, np)?;
        }
        let values: Result<Vec<TaggedMoments>> = (0..self.manin.len())
            .into_par_iter()
            .map(|i| {
                let g = self.manin.rep(i);
                let mut acc = TaggedMoments::zero(self.params.n, self.ring(), self.params.t);
                for a in alphas {
                    let ag = a.mul(g);
                    let from = RationalCusp::new(ag.b.clone(), ag.d.clone())?;
                    let to = RationalCusp::new(ag.a.clone(), ag.c.clone())?;
                    let v = self.evaluate_path(&from, &to)?;
                    acc = acc.add(&v.act_unchecked(a));
                }
                Ok(acc)
            })
            .collect();
        Ok(OCSymbol { values: values?, ..self.clone() })
    }

    /// `T_l` for a prime `l`; `U_l` when `l | Np`.
    pub fn hecke_tp(&self, l: u64) -> Result<Self> {
        if !crate::arith::padic::is_prime(l) {
            return Err(Error::BadIndex(l, "not a prime".into()));
        }
        self.act_sum(&hecke_matrices(l, self.level()))
    }

    pub fn hecke_up(&self) -> Result<Self> {
        self.hecke_tp(self.params.p)
    }

    /// `T_{l,l}`: the action of `diag(l, l)` on values.
    pub fn hecke_tll(&self, l: u64) -> Result<Self> {
        if l < 2 || l.gcd(&self.level()) != 1 {
            return Err(Error::BadIndex(l, format!("T_(l,l) needs l coprime to {}", self.level())));
        }
        let g = Mat2::new(l as i64, 0, 0, l as i64);
        Ok(self.map(|v| v.act_unchecked(&g)))
    }

    /// `T_n`, built from prime powers.
    pub fn hecke_tn(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadIndex(0, "T_0 is undefined".into()));
        }
        let mut out = self.clone();
        for (l, e) in crate::modsym::factor_u64(n) {
            if self.level() % l == 0 {
                for _ in 0..e {
                    out = out.hecke_tp(l)?;
                }
                continue;
            }
            let mut prev = out.clone();
            let mut cur = out.hecke_tp(l)?;
            for _ in 1..e {
                let next = cur.hecke_tp(l)?.sub(&prev.hecke_tll(l)?.scale(&self.ring().elt(l as i64)));
                prev = cur;
                cur = next;
            }
            out = cur;
        }
        Ok(out)
    }

    /// `Phi | iota` with `iota = diag(1, -1)`.
    pub fn iota(&self) -> Self {
        let iota = Mat2::iota();
        let values = (0..self.manin.len())
            .map(|i| {
                let t = self.manin.unimodular(&conj_iota(self.manin.rep(i)));
                self.eval_terms(&[t]).act_unchecked(&iota)
            })
            .collect();
        OCSymbol { values, ..self.clone() }
    }

    /// `(Phi | gamma)(D) = Phi(gamma D) | gamma`.
    pub fn act_gamma(&self, gamma: &Mat2) -> Result<Self> {
        if !gamma.in_gamma0(self.level()) {
            return Err(Error::BadSemigroupElement(gamma.to_string(), self.level()));
        }
        self.act_sum(std::slice::from_ref(gamma))
    }

    /// The module action of `r` in `D(Z_{p,N}^x)` on values.
    pub fn module_act(&self, r: &DistN) -> Result<Self> {
        let values = self.values.iter().map(|v| v.module_act(r)).collect::<Result<_>>()?;
        Ok(OCSymbol { values, ..self.clone() })
    }

    /// Forgets moments of degree above `t`.
    pub fn truncate(&self, t: usize) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| {
                let comps = v.components().map(|(_, c)| c.truncate(t)).collect();
                TaggedMoments::from_components(self.params.n, comps).expect("same tag set")
            })
            .collect();
        OCSymbol { params: OcParams { t: t.min(self.params.t), ..self.params }, values, manin: self.manin.clone() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.params.p,
            "N": self.params.n,
            "M": self.params.m,
            "T": self.params.t,
            "level": self.level(),
            "values": self.values.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Generator-wise specialization to a classical symbol over `Gamma_0(Np)` with
/// values in `L_{k,chi}`.
pub fn specialize_symbol(phi: &OCSymbol, kappa: &ArithWeight) -> Result<ModularSymbol<ZpRing>> {
    let values = phi
        .values
        .iter()
        .map(|v| specialize(v, kappa).map(|s| s.coeffs))
        .collect::<Result<Vec<_>>>()?;
    ModularSymbol::from_values(phi.ring(), kappa.k, kappa.chi.clone(), phi.manin.clone(), values)
}

/// The lift of `phi` carried by the degree-`k` stratum: on tag `t` and disc
/// `c`, `m_c(k - b, b) = chi_N(t) chi_p(c) (-1)^b phi_b / ((p - 1) |Delta_N|)`.
/// It specializes back to `phi` at `kappa`.
pub fn canonical_lift(params: OcParams, phi: &ModularSymbol<ZpRing>, kappa: &ArithWeight) -> Result<OCSymbol> {
    let k = kappa.k;
    if k > params.t {
        return Err(Error::InsufficientMoments { needed: k, have: params.t });
    }
    if phi.level() != params.level() || phi.k != k {
        return Err(Error::InvalidInput("symbol does not match the weight and level".into()));
    }
    let ring = params.ring();
    let units = crate::dist::tame_units(params.n);
    let scale = ring
        .elt(((params.p - 1) * units.len() as u64) as i64)
        .inverse()
        .expect("p - 1 and phi(N) are units");
    let values = phi
        .values
        .iter()
        .map(|v| {
            let comps = units
                .iter()
                .map(|&t| {
                    let tw = kappa.tame_character().eval(t as i64);
                    crate::dist::MomentDist2::from_fn(ring, params.t, |c, a, b| {
                        if a + b != k {
                            return ring.zero();
                        }
                        let w = (tw * kappa.wild_character().eval(c as i64)) as i64;
                        let sign = if b % 2 == 0 { w } else { -w };
                        ring.elt(sign) * v[b] * scale
                    })
                })
                .collect();
            TaggedMoments::from_components(params.n, comps)
        })
        .collect::<Result<Vec<_>>>()?;
    OCSymbol::from_values(params, phi.manin().clone(), values)
}

/// Reduces a rational symbol into `Z/p^M`.
pub fn symbol_to_zp(phi: &ModularSymbol<crate::arith::Rationals>, ring: ZpRing) -> Result<ModularSymbol<ZpRing>> {
    let values = phi
        .values
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    crate::arith::ring::rational_to_zp(x, &ring)
                        .ok_or_else(|| Error::InvalidInput(format!("{x} is not p-integral")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ModularSymbol::from_values(ring, phi.k, phi.chi.clone(), phi.manin().clone(), values)
}
