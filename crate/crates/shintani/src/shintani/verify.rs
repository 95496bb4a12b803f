// SPDX-License-Identifier: Apache-2.0

//! Machine-checkable reports for the identities relating symbols and lifts.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::arith::{DirichletChar, PadicApprox, Rationals, Ring, ZpRing};
use crate::dist::ArithWeight;
use crate::error::Result;
use crate::modsym::{solve_symbol_space, ModularSymbol};
use crate::ocsymb::{specialize_symbol, OCSymbol};

use super::classical::{halfint_tl2, theta_classical, HalfIntQExp};
use super::overconvergent::{qexp_hecke_tl, qexp_hecke_tll, specialize_qexp, theta_oc, FormalQExp};

pub const INVOLUTION: &str = "Anti-symmetry: Theta(phi | iota) = -Theta(phi)";
pub const EQUIVARIANCE: &str = "Hecke equivariance: Theta(phi | T_l) = Theta(phi) | T_{l^2}";
pub const INTERPOLATION: &str = "Interpolation: Theta(Phi)(kappa~) = Theta_{k,chi}(Phi_kappa)";
pub const OC_HECKE: &str = "Overconvergent Hecke formula: Theta(Phi | T) = Theta(Phi) | T";

/// The first coefficient where two sides disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub n: usize,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub mismatch: Option<Mismatch>,
    pub note: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub theorem: &'static str,
    pub params: Value,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "theorem: {}", self.theorem);
        let _ = writeln!(s, "params: {}", self.params);
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAIL" };
            let _ = write!(s, "  [{status}] {}", c.name);
            if let Some(n) = &c.note {
                let _ = write!(s, " ({n})");
            }
            let _ = writeln!(s);
        }
        let total = self.checks.len();
        let good = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(s, "result: {good}/{total} checks passed");
        if let Some(c) = self.first_failure() {
            let m = c.mismatch.as_ref().unwrap();
            let _ = writeln!(s, "first failure: {} at n = {}", c.name, m.n);
            let _ = writeln!(s, "- expected: {}", m.expected);
            let _ = writeln!(s, "+ actual:   {}", m.actual);
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed(),
                    "note": c.note,
                    "mismatch": c.mismatch.as_ref().map(|m| json!({"n": m.n, "expected": m.expected, "actual": m.actual})),
                })
            })
            .collect();
        json!({
            "schema_version": 1,
            "theorem": self.theorem,
            "params": self.params,
            "passed": self.passed(),
            "checks": checks,
        })
    }
}

fn compare<R: Ring>(name: String, expected: &HalfIntQExp<R>, actual: &HalfIntQExp<R>) -> Check {
    let n = expected.nmax().min(actual.nmax());
    let r = &expected.ring;
    let mismatch = (1..=n)
        .find(|&i| expected.coeff(i) != actual.coeff(i))
        .map(|i| Mismatch { n: i, expected: r.render(&expected.coeff(i).unwrap()), actual: r.render(&actual.coeff(i).unwrap()) });
    Check { name, mismatch, note: None }
}

fn compare_formal(name: String, expected: &FormalQExp, actual: &FormalQExp) -> Check {
    let n = expected.nmax().min(actual.nmax());
    let mismatch = (1..=n).find(|&i| expected.coeffs[i - 1] != actual.coeffs[i - 1]).map(|i| Mismatch {
        n: i,
        expected: expected.coeffs[i - 1].to_json().to_string(),
        actual: actual.coeffs[i - 1].to_json().to_string(),
    });
    Check { name, mismatch, note: Some(format!("{n} coefficients")) }
}

/// Anti-symmetry under `iota` for every basis symbol of weight `2k` and
/// character `chi^2` at level `M`, and vanishing on the plus part.
pub fn verify_involution(level: u64, k: usize, chi: &DirichletChar, nmax: usize) -> Result<VerifyReport> {
    let space = solve_symbol_space(level, 2 * k, &chi.square(), Rationals)?;
    let mut checks = Vec::new();
    for (i, phi) in space.basis.iter().enumerate() {
        let t = theta_classical(phi, k, chi, nmax)?;
        let ti = theta_classical(&phi.iota(), k, chi, nmax)?;
        let neg = t.scale(&Rationals.from_i64(-1));
        checks.push(compare(format!("basis {i}: Theta(phi | iota) = -Theta(phi)"), &neg, &ti));
        let (plus, _) = phi.involution_split()?;
        let tp = theta_classical(&plus, k, chi, nmax)?;
        let zero = tp.scale(&Rationals.zero());
        checks.push(compare(format!("basis {i}: Theta(phi+) = 0"), &zero, &tp));
    }
    Ok(VerifyReport {
        theorem: INVOLUTION,
        params: json!({"level": level, "k": k, "character": chi, "nmax": nmax, "dimension": space.dimension()}),
        checks,
    })
}

/// `Theta(phi | T_l) = Theta(phi) | T_{l^2}` for every basis symbol.
pub fn verify_equivariance(level: u64, k: usize, chi: &DirichletChar, ls: &[u64], nmax: usize) -> Result<VerifyReport> {
    let space = solve_symbol_space(level, 2 * k, &chi.square(), Rationals)?;
    let mut checks = Vec::new();
    for (i, phi) in space.basis.iter().enumerate() {
        for &l in ls {
            let big = theta_classical(phi, k, chi, nmax * (l * l) as usize)?;
            let rhs = halfint_tl2(&big, l)?;
            let lhs = theta_classical(&phi.hecke_tp(l)?, k, chi, nmax)?;
            checks.push(compare(format!("basis {i}: T_{l}"), &rhs, &lhs));
        }
    }
    Ok(VerifyReport {
        theorem: EQUIVARIANCE,
        params: json!({"level": level, "k": k, "character": chi, "l": ls, "nmax": nmax}),
        checks,
    })
}

fn residual_valuation(a: &HalfIntQExp<ZpRing>, b: &HalfIntQExp<ZpRing>) -> u32 {
    let m = a.ring.m;
    a.coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| {
            let d: PadicApprox = *x - *y;
            if d.is_zero() {
                m
            } else {
                d.valuation()
            }
        })
        .min()
        .unwrap_or(m)
}

/// Specializing the overconvergent lift at `kappa~` agrees with the
/// classical lift of the specialized symbol at `kappa = kappa~ o sigma`,
/// modulo `p^(M - loss)`.
pub fn verify_interpolation(phi: &OCSymbol, kappa: &ArithWeight, nmax: usize, loss: u32) -> Result<VerifyReport> {
    let theta = theta_oc(phi, nmax)?;
    verify_interpolation_with(phi, &theta, kappa, loss)
}

/// As [`verify_interpolation`], reusing an already computed `Theta(Phi)`.
pub fn verify_interpolation_with(phi: &OCSymbol, theta: &FormalQExp, kappa: &ArithWeight, loss: u32) -> Result<VerifyReport> {
    let nmax = theta.nmax();
    let ring = phi.ring();
    let target = ring.m.saturating_sub(loss);
    let lhs = specialize_qexp(theta, kappa)?;
    let classical: ModularSymbol<ZpRing> = specialize_symbol(phi, &kappa.sigma())?;
    let rhs = theta_classical(&classical, kappa.k, &kappa.chi, nmax)?;
    let v = residual_valuation(&lhs, &rhs);
    let mut check = if v >= target {
        Check { name: format!("k = {}: coefficients agree", kappa.k), mismatch: None, note: None }
    } else {
        compare(format!("k = {}: coefficients agree", kappa.k), &rhs, &lhs)
    };
    let side = if rhs.is_zero() { "classical side vanishes" } else { "classical side nonzero" };
    check.note = Some(format!("agreement mod p^{v}, required p^{target}; {side}"));
    let nonzero = Check {
        name: format!("k = {}: exponents are integral", kappa.k),
        mismatch: (!theta.exponents_integral()).then(|| Mismatch { n: 0, expected: "integral".into(), actual: "stray exponent".into() }),
        note: None,
    };
    Ok(VerifyReport {
        theorem: INTERPOLATION,
        params: json!({
            "p": ring.p, "N": phi.params().n, "M": ring.m, "T": phi.params().t,
            "k": kappa.k, "character": kappa.chi, "nmax": nmax, "loss": loss,
        }),
        checks: vec![check, nonzero],
    })
}

/// `Theta(Phi | T_l) = Theta(Phi) | T_l` and the `T_{l,l}` analogue: the
/// left side applies the operator to the symbol, the right side applies the
/// explicit formula to the expansion.
pub fn verify_oc_hecke(phi: &OCSymbol, ls: &[u64], nmax: usize) -> Result<VerifyReport> {
    let level = phi.level();
    let lmax = ls.iter().copied().max().unwrap_or(1);
    let base = theta_oc(phi, nmax * (lmax * lmax) as usize)?;
    let mut checks = Vec::new();
    for &l in ls {
        let rhs = qexp_hecke_tl(&base.truncate(nmax * (l * l) as usize), l)?;
        let lhs = theta_oc(&phi.hecke_tp(l)?, nmax)?;
        let op = if level % l == 0 { format!("U_{l}") } else { format!("T_{l}") };
        checks.push(compare_formal(op, &rhs, &lhs));
        if level % l != 0 {
            let rhs = qexp_hecke_tll(&base.truncate(nmax), l)?;
            let lhs = theta_oc(&phi.hecke_tll(l)?, nmax)?;
            checks.push(compare_formal(format!("T_({l},{l})"), &rhs, &lhs));
        }
    }
    let pr = phi.params();
    Ok(VerifyReport {
        theorem: OC_HECKE,
        params: json!({"p": pr.p, "N": pr.n, "M": pr.m, "T": pr.t, "l": ls, "nmax": nmax}),
        checks,
    })
}
