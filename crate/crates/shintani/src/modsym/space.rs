// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::manin::{conj_iota, ManinData, Term};
use super::poly::{action_matrix, Side, SymPoly};
use crate::arith::linalg::{self, Kernel, Matrix};
use crate::arith::{DirichletChar, Divisor0, Mat2, RationalCusp, Ring};
use crate::error::{Error, Result};
use crate::qf::UnimodularChain;

/// A `Gamma_0(M)`-equivariant map from degree-zero divisors to `L_{k,chi}`,
/// stored by its values on the Manin generators.
#[derive(Clone, Debug)]
pub struct ModularSymbol<R: Ring> {
    pub ring: R,
    pub k: usize,
    pub chi: DirichletChar,
    manin: Arc<ManinData>,
    /// `values[i]` is the divided-power coefficient vector of `x_i`.
    pub values: Vec<Vec<R::E>>,
}

impl<R: Ring> PartialEq for ModularSymbol<R> {
    fn eq(&self, o: &Self) -> bool {
        self.k == o.k && self.level() == o.level() && self.values == o.values
    }
}

impl<R: Ring> ModularSymbol<R> {
    pub fn from_values(
        ring: R,
        k: usize,
        chi: DirichletChar,
        manin: Arc<ManinData>,
        values: Vec<Vec<R::E>>,
    ) -> Result<Self> {
        if values.len() != manin.len() || values.iter().any(|v| v.len() != k + 1) {
            return Err(Error::InvalidInput("symbol values do not match the presentation".into()));
        }
        Ok(ModularSymbol { ring, k, chi, manin, values })
    }

    pub fn level(&self) -> u64 {
        self.manin.level()
    }

    pub fn manin(&self) -> &Arc<ManinData> {
        &self.manin
    }

    pub fn flat(&self) -> Vec<R::E> {
        self.values.iter().flatten().cloned().collect()
    }

    fn with_flat(&self, flat: Vec<R::E>) -> Self {
        let values = flat.chunks(self.k + 1).map(|c| c.to_vec()).collect();
        ModularSymbol { values, ..self.clone() }
    }

    pub fn zero_like(&self) -> Self {
        let z = self.ring.zero();
        self.with_flat(vec![z; self.values.len() * (self.k + 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| self.ring.is_zero(v))
    }

    pub fn add(&self, o: &Self) -> Self {
        let r = &self.ring;
        self.with_flat(self.flat().iter().zip(o.flat()).map(|(a, b)| r.add(a, &b)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let r = &self.ring;
        self.with_flat(self.flat().iter().zip(o.flat()).map(|(a, b)| r.sub(a, &b)).collect())
    }

    pub fn scale(&self, c: &R::E) -> Self {
        let r = &self.ring;
        self.with_flat(self.flat().iter().map(|a| r.mul(a, c)).collect())
    }

    fn act_matrix(&self, g: &Mat2) -> Matrix<R::E> {
        action_matrix(&self.ring, self.k, g, &self.chi, Side::L)
    }

    /// `sum coeff * (x_gen | h)`.
    pub fn eval_terms(&self, terms: &[Term]) -> Vec<R::E> {
        let r = &self.ring;
        let mut acc = vec![r.zero(); self.k + 1];
        for t in terms {
            let x = &self.values[t.gen];
            if x.iter().all(|v| r.is_zero(v)) {
                continue;
            }
            let v = if self.k == 0 {
                let ch = self.chi.eval_big(&t.h.a);
                vec![r.mul(&x[0], &r.from_i64(ch as i64))]
            } else {
                linalg::mat_vec(r, &self.act_matrix(&t.h), x)
            };
            let c = r.from_int(&t.coeff);
            for (a, b) in acc.iter_mut().zip(v) {
                *a = r.add(a, &r.mul(&c, &b));
            }
        }
        acc
    }

    /// `Phi(D)` as a polynomial in `L_k`.
    pub fn evaluate(&self, d: &Divisor0) -> Result<SymPoly<R::E>> {
        let terms = self.manin.divisor(d)?;
        SymPoly::new(self.k, Side::L, self.eval_terms(&terms))
    }

    /// A modulus for reducing the matrices of a unimodular chain without
    /// changing the value: `M` times the ring characteristic, or `M` alone in
    /// weight 0. `None` means exact matrices are needed.
    pub fn chain_modulus(&self) -> Option<BigInt> {
        let m = BigInt::from(self.level().max(1));
        match self.ring.characteristic() {
            Some(c) => Some(m * c),
            None if self.k == 0 => Some(m),
            None => None,
        }
    }

    /// `sum sign * Phi(D_g)` over a chain of unimodular matrices.
    pub fn evaluate_chain(&self, chain: &UnimodularChain) -> Vec<R::E> {
        let terms: Vec<Term> = chain
            .terms
            .iter()
            .map(|(g, s)| {
                let mut t = self.manin.unimodular(g);
                t.coeff = BigInt::from(*s);
                t
            })
            .collect();
        self.eval_terms(&terms)
    }

    /// `Phi({to} - {from})`.
    pub fn evaluate_path(&self, from: &RationalCusp, to: &RationalCusp) -> Result<Vec<R::E>> {
        let mut terms = self.manin.path_from_infinity(to)?;
        for mut t in self.manin.path_from_infinity(from)? {
            t.coeff = -t.coeff;
            terms.push(t);
        }
        Ok(self.eval_terms(&terms))
    }

    /// Whether the Manin relations hold exactly.
    pub fn satisfies_relations(&self) -> bool {
        self.manin
            .relations()
            .iter()
            .all(|rel| self.eval_terms(rel).iter().all(|v| self.ring.is_zero(v)))
    }

    /// `Phi | sum_alpha alpha`, i.e. `D -> sum Phi(alpha D) | alpha`.
    pub fn act_sum(&self, alphas: &[Mat2]) -> Result<Self> {
        let values: Result<Vec<Vec<R::E>>> = (0..self.manin.len())
            .into_par_iter()
            .map(|i| {
                let g = self.manin.rep(i);
                let r = &self.ring;
                let mut acc = vec![r.zero(); self.k + 1];
                for a in alphas {
                    let ag = a.mul(g);
                    let from = RationalCusp::new(ag.b.clone(), ag.d.clone())?;
                    let to = RationalCusp::new(ag.a.clone(), ag.c.clone())?;
                    let v = self.evaluate_path(&from, &to)?;
                    let v = linalg::mat_vec(r, &self.act_matrix(a), &v);
                    for (x, y) in acc.iter_mut().zip(v) {
                        *x = r.add(x, &y);
                    }
                }
                Ok(acc)
            })
            .collect();
        Ok(ModularSymbol { values: values?, ..self.clone() })
    }

    /// `Phi | iota` with `iota = diag(1, -1)`.
    pub fn iota(&self) -> Self {
        let iota = Mat2::iota();
        let a = self.act_matrix(&iota);
        let values = (0..self.manin.len())
            .map(|i| {
                let t = self.manin.unimodular(&conj_iota(self.manin.rep(i)));
                let v = self.eval_terms(&[t]);
                linalg::mat_vec(&self.ring, &a, &v)
            })
            .collect();
        ModularSymbol { values, ..self.clone() }
    }

    /// `(Phi^+, Phi^-)` with `Phi^{+-} = (Phi +- Phi|iota) / 2`.
    pub fn involution_split(&self) -> Result<(Self, Self)> {
        let half = self.ring.inv(&self.ring.from_i64(2)).ok_or(Error::TwoNotInvertible)?;
        let i = self.iota();
        Ok((self.add(&i).scale(&half), self.sub(&i).scale(&half)))
    }

    fn check_prime(&self, l: u64) -> Result<()> {
        if !crate::arith::padic::is_prime(l) {
            return Err(Error::BadIndex(l, "not a prime".into()));
        }
        Ok(())
    }

    /// `T_l` for a prime `l` (`U_l` when `l | M`).
    pub fn hecke_tp(&self, l: u64) -> Result<Self> {
        self.check_prime(l)?;
        self.act_sum(&hecke_matrices(l, self.level()))
    }

    /// `T_{l,l}` for `l` coprime to `M`: the scalar matrix `l I`.
    pub fn hecke_tll(&self, l: u64) -> Result<Self> {
        if l.gcd(&self.level()) != 1 || l < 2 {
            return Err(Error::BadIndex(l, format!("T_(l,l) needs l coprime to {}", self.level())));
        }
        let c = self.chi.eval(l as i64) as i64 * (l as i64).pow(self.k as u32);
        Ok(self.scale(&self.ring.from_int(&BigInt::from(c))))
    }

    /// `U_p` for a prime `p | M`.
    pub fn hecke_up(&self, p: u64) -> Result<Self> {
        self.check_prime(p)?;
        if self.level() % p != 0 {
            return Err(Error::BadIndex(p, format!("U_p needs p | {}", self.level())));
        }
        self.hecke_tp(p)
    }

    /// `T_n`, built multiplicatively from prime powers.
    pub fn hecke_tn(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadIndex(0, "T_0 is undefined".into()));
        }
        let mut out = self.clone();
        for (l, e) in factor(n) {
            out = out.hecke_prime_power(l, e)?;
        }
        Ok(out)
    }

    fn hecke_prime_power(&self, l: u64, e: u32) -> Result<Self> {
        if self.level() % l == 0 {
            let mut out = self.clone();
            for _ in 0..e {
                out = out.hecke_tp(l)?;
            }
            return Ok(out);
        }
        // T_{l^{r+1}} = T_l T_{l^r} - l T_{l,l} T_{l^{r-1}}
        let mut prev = self.clone();
        let mut cur = self.hecke_tp(l)?;
        for _ in 1..e {
            let next = cur.hecke_tp(l)?.sub(&prev.hecke_tll(l)?.scale(&self.ring.from_i64(l as i64)));
            prev = cur;
            cur = next;
        }
        Ok(if e == 0 { prev } else { cur })
    }

    /// `(Phi | gamma)(D) = Phi(gamma D) | gamma`, checked on the generators.
    pub fn act_gamma(&self, gamma: &Mat2) -> Result<Self> {
        if !gamma.in_gamma0(self.level()) || !gamma.is_sl2() {
            return Err(Error::BadSemigroupElement(gamma.to_string(), self.level()));
        }
        self.act_sum(std::slice::from_ref(gamma))
    }
}

/// Left coset representatives of the degree-`l` Hecke double coset.
pub fn hecke_matrices(l: u64, m: u64) -> Vec<Mat2> {
    let l = l as i64;
    let mut v: Vec<Mat2> = (0..l).map(|i| Mat2::new(1, i, 0, l)).collect();
    if m as i64 % l != 0 {
        v.push(Mat2::new(l, 0, 0, 1));
    }
    v
}

pub(crate) fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A solved space of modular symbols with a basis.
#[derive(Clone, Debug)]
pub struct SymbolSpace<R: Ring> {
    pub ring: R,
    pub k: usize,
    pub chi: DirichletChar,
    manin: Arc<ManinData>,
    pub basis: Vec<ModularSymbol<R>>,
    kernel: Kernel<R::E>,
}

impl<R: Ring> SymbolSpace<R> {
    pub fn level(&self) -> u64 {
        self.manin.level()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn manin(&self) -> &Arc<ManinData> {
        &self.manin
    }

    /// Largest exponent `e` of a `p^e`-torsion summand dropped from the basis.
    pub fn torsion_exponent(&self) -> u32 {
        self.kernel.max_torsion_exponent()
    }

    /// Coordinates of a symbol of the space in the basis.
    pub fn coordinates(&self, s: &ModularSymbol<R>) -> Vec<R::E> {
        self.kernel.coordinates(&self.ring, &s.flat())
    }

    pub fn combination(&self, coords: &[R::E]) -> ModularSymbol<R> {
        let mut acc = self.basis[0].zero_like();
        for (b, c) in self.basis.iter().zip(coords) {
            if !self.ring.is_zero(c) {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// Matrix of an operator; column `j` holds the coordinates of `op(basis[j])`.
    pub fn operator_matrix<F>(&self, op: F) -> Result<Matrix<R::E>>
    where
        F: Fn(&ModularSymbol<R>) -> Result<ModularSymbol<R>>,
    {
        let n = self.dimension();
        let cols: Vec<Vec<R::E>> = self
            .basis
            .iter()
            .map(|b| op(b).map(|s| self.coordinates(&s)))
            .collect::<Result<_>>()?;
        Ok((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
    }
}

/// Solves the Manin relations for `Hom_{Gamma_0(M)}(Delta_0, L_{k,chi})`.
pub fn solve_symbol_space<R: Ring>(m: u64, k: usize, chi: &DirichletChar, ring: R) -> Result<SymbolSpace<R>> {
    if !ring.six_invertible() {
        return Err(Error::BadCharacteristic);
    }
    let chi = chi.lift(m.max(1))?;
    let manin = Arc::new(ManinData::new(m));
    let n = manin.len();
    let w = k + 1;
    let ncols = n * w;
    let rels = manin.relations();
    let rows: Vec<Vec<Vec<R::E>>> = rels
        .par_iter()
        .map(|rel| {
            let mut block = vec![vec![ring.zero(); ncols]; w];
            for t in rel {
                let a = action_matrix(&ring, k, &t.h, &chi, Side::L);
                let c = ring.from_int(&t.coeff);
                for (r, row) in a.iter().enumerate() {
                    for (s, v) in row.iter().enumerate() {
                        let x = &mut block[r][t.gen * w + s];
                        *x = ring.add(x, &ring.mul(&c, v));
                    }
                }
            }
            block
        })
        .collect();
    let matrix: Matrix<R::E> = rows.into_iter().flatten().collect();
    let kernel = linalg::kernel(&ring, &matrix, ncols);
    let basis = kernel
        .free
        .iter()
        .map(|v| {
            let values = v.chunks(w).map(|c| c.to_vec()).collect();
            ModularSymbol { ring: ring.clone(), k, chi: chi.clone(), manin: manin.clone(), values }
        })
        .collect();
    Ok(SymbolSpace { ring, k, chi, manin, basis, kernel })
}
