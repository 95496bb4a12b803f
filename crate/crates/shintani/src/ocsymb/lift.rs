// SPDX-License-Identifier: Apache-2.0

use crate::arith::{PadicApprox, ZpRing};
use crate::dist::ArithWeight;
use crate::error::{Error, Result};
use crate::modsym::ModularSymbol;

use super::symbol::{canonical_lift, OCSymbol, OcParams};

fn flat(phi: &OCSymbol) -> Vec<PadicApprox> {
    let mut out = Vec::new();
    for v in &phi.values {
        for (_, mu) in v.components() {
            for c in 1..phi.params().p as i64 {
                for d in 0..=mu.degree_bound() {
                    for b in 0..=d {
                        out.push(mu.get(c, d - b, b).expect("in range"));
                    }
                }
            }
        }
    }
    out
}

/// The eigenvalue of `T_l` on `phi`, read off a coordinate of minimal
/// valuation. It is exact modulo `p^(M - v)` where `v` is that valuation.
pub fn hecke_eigenvalue(phi: &OCSymbol, l: u64) -> Result<PadicApprox> {
    let x = flat(phi);
    let (i, v) = x
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| (i, e.valuation()))
        .min_by_key(|t| t.1)
        .ok_or_else(|| Error::InvalidInput("zero symbol has no eigenvalue".into()))?;
    let ring = phi.ring();
    let y = flat(&phi.hecke_tn(l)?);
    let pv = ring.p.pow(v);
    let prec = ring.m - v;
    let rp = ring.reduce_to(prec)?;
    let unit = rp.from_residue((x[i].residue() / pv) % rp.modulus());
    if y[i].residue() % pv != 0 {
        return Err(Error::NotEigen(l, v));
    }
    let lambda = rp.from_residue((y[i].residue() / pv) % rp.modulus()) * unit.inverse().expect("unit");
    let lam_full = ring.from_residue(lambda.residue());
    let residual = phi.hecke_tn(l)?.sub(&phi.scale(&lam_full));
    let rv = residual.min_valuation();
    if rv < ring.m && rv < prec {
        return Err(Error::NotEigen(l, rv));
    }
    Ok(lambda)
}

/// Lifts a classical `U_p` eigensymbol of weight `kappa` to an overconvergent
/// eigensymbol specializing to it.
///
/// The slope of `a_p` must be below `k + 1`. Starting from the canonical
/// lift, `a_p^-1 U_p` is iterated until it fixes the symbol modulo `p^M`.
/// At positive slope `a_p` cannot be inverted in `Z/p^M` and the canonical
/// lift is returned only if it is already an eigensymbol.
pub fn lift_eigensymbol(
    params: OcParams,
    phi: &ModularSymbol<ZpRing>,
    kappa: &ArithWeight,
    a_p: &PadicApprox,
) -> Result<(OCSymbol, usize)> {
    let slope = if a_p.is_zero() { params.m } else { a_p.valuation() };
    if slope as usize >= kappa.k + 1 {
        return Err(Error::CriticalSlope(slope, kappa.k as u32));
    }
    let mut cur = canonical_lift(params, phi, kappa)?;
    if slope > 0 {
        // a_p is not invertible: only an exact eigen-lift can be accepted
        let residual = cur.hecke_up()?.sub(&cur.scale(a_p));
        if residual.is_zero() {
            return Ok((cur, 1));
        }
        return Err(Error::NoConvergence(residual.min_valuation()));
    }
    let inv = a_p.inverse().expect("unit");
    let max_iter = 4 * params.m as usize + params.t + 8;
    for it in 1..=max_iter {
        let next = cur.hecke_up()?.scale(&inv);
        if next == cur {
            return Ok((cur, it));
        }
        cur = next;
    }
    let residual = cur.hecke_up()?.scale(&inv).sub(&cur).min_valuation();
    Err(Error::NoConvergence(residual))
}
