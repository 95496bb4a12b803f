// SPDX-License-Identifier: Apache-2.0

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::linalg::{self, Matrix};
use crate::arith::{PadicApprox, Ring, ZpRing};
use crate::error::{Error, Result};

use super::space::OcSpace;
use super::symbol::OCSymbol;

/// A segment of a Newton polygon: `multiplicity` roots of valuation `value`.
/// When `exact` is false a coefficient on the segment vanished to the working
/// precision, so `value` is only a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeEntry {
    pub value: Ratio<i64>,
    pub multiplicity: usize,
    pub exact: bool,
}

impl SlopeEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "slope": format!("{}", self.value),
            "slope_f64": self.value.to_f64(),
            "multiplicity": self.multiplicity,
            "exact": self.exact,
        })
    }
}

fn convert(x: &PadicApprox, r: &ZpRing) -> PadicApprox {
    r.from_residue(x.residue() % r.modulus())
}

fn val_or(x: &PadicApprox, m: u32) -> (i64, bool) {
    if x.is_zero() {
        (m as i64, false)
    } else {
        (x.valuation() as i64, true)
    }
}

/// Slopes of the Newton polygon of a monic polynomial given in ascending
/// degree over `Z/p^m`, smallest slope first.
pub fn newton_slopes(poly: &[PadicApprox], m: u32) -> Vec<SlopeEntry> {
    let n = poly.len() - 1;
    let pts: Vec<(i64, i64, bool)> = poly
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (v, known) = val_or(c, m);
            (i as i64, v, known)
        })
        .collect();
    // lower convex hull from x = 0 to x = n
    let mut hull: Vec<usize> = vec![0];
    for i in 1..=n {
        while hull.len() >= 2 {
            let (a, b) = (pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]]);
            let c = pts[i];
            // drop b when it lies on or above the chord a-c
            if (b.1 - a.1) * (c.0 - a.0) >= (c.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out: Vec<SlopeEntry> = hull
        .windows(2)
        .map(|w| {
            let (a, b) = (pts[w[0]], pts[w[1]]);
            SlopeEntry { value: Ratio::new(a.1 - b.1, b.0 - a.0), multiplicity: (b.0 - a.0) as usize, exact: a.2 && b.2 }
        })
        .collect();
    out.reverse();
    out
}

fn poly_mul(r: &ZpRing, a: &[PadicApprox], b: &[PadicApprox]) -> Vec<PadicApprox> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + *x * *y;
        }
    }
    out
}

/// Quotient and remainder by a monic divisor.
fn poly_divrem(r: &ZpRing, a: &[PadicApprox], d: &[PadicApprox]) -> (Vec<PadicApprox>, Vec<PadicApprox>) {
    let dn = d.len() - 1;
    if a.len() <= dn {
        return (vec![], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut q = vec![r.zero(); a.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        for (j, y) in d.iter().enumerate() {
            rem[i + j] = rem[i + j] - c * *y;
        }
    }
    rem.truncate(dn);
    (q, rem)
}

fn matrix_poly(r: &ZpRing, poly: &[PadicApprox], a: &Matrix<PadicApprox>) -> Matrix<PadicApprox> {
    let n = a.len();
    let mut acc = vec![vec![r.zero(); n]; n];
    for c in poly.iter().rev() {
        acc = linalg::mat_mul(r, &acc, a);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = row[i] + *c;
        }
    }
    acc
}

/// Splits a monic `P` over `Z/p^W` as `R Q`, with `R` carrying the roots of
/// valuation above the integer `theta`. Returns `(R, Q, precision)`.
fn split_at(ring: &ZpRing, poly: &[PadicApprox], theta: i64) -> Result<(Vec<PadicApprox>, Vec<PadicApprox>, u32)> {
    let p = ring.p;
    let m = ring.m as i64;
    let n = poly.len() - 1;
    let unresolved = |why: &str| Error::SlopeGapUnresolvable(format!("{theta}: {why}"));
    let vals: Vec<(i64, bool)> = poly.iter().map(|c| val_or(c, ring.m)).collect();
    let shifted: Vec<i64> = vals.iter().enumerate().map(|(i, (v, _))| v + i as i64 * theta).collect();
    let v = *shifted.iter().min().unwrap();
    let r = shifted.iter().position(|&x| x == v).unwrap();
    if !vals[r].1 {
        return Err(unresolved("the dominant coefficient vanishes to working precision"));
    }
    if v >= m {
        return Err(unresolved("precision exhausted by the rescaling"));
    }
    let w = (m - v) as u32;
    let rw = ring.reduce_to(w)?;
    let pw = |e: i64| -> u128 { (p as u128).pow(e as u32) };
    // P_theta(y) = P(p^theta y) / p^v over Z/p^W
    let ph: Vec<PadicApprox> = poly
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let s = i as i64 * theta - v;
            let res = c.residue() as u128;
            let x = if s >= 0 {
                (res % rw.modulus() as u128) * (pw(s) % rw.modulus() as u128)
            } else if res == 0 {
                0
            } else {
                res / pw(-s)
            };
            rw.from_residue((x % rw.modulus() as u128) as u64)
        })
        .collect();
    if r == 0 {
        return Ok((vec![rw.one()], poly.iter().map(|c| convert(c, &rw)).collect(), w));
    }
    let r1 = ring.reduce_to(1)?;
    let to1 = |x: &PadicApprox| convert(x, &r1);
    // P_theta = y^r U mod p with U(0) a unit
    let u_bar: Vec<PadicApprox> = ph[r..].iter().map(to1).collect();
    // B = U^-1 mod y^r, A = (1 - B U) / y^r
    let u0inv = u_bar[0].inverse().expect("unit constant term");
    let mut b = vec![r1.zero(); r];
    for i in 0..r {
        let mut s = if i == 0 { r1.one() } else { r1.zero() };
        for j in 1..=i.min(u_bar.len() - 1) {
            s = s - u_bar[j] * b[i - j];
        }
        b[i] = s * u0inv;
    }
    let bu = poly_mul(&r1, &b, &u_bar);
    let a: Vec<PadicApprox> = (r..bu.len()).map(|i| -bu[i]).collect();
    let mut g: Vec<PadicApprox> = (0..=r).map(|i| if i == r { rw.one() } else { rw.zero() }).collect();
    let mut h: Vec<PadicApprox> = ph[r..].to_vec();
    for k in 1..w {
        let gh = poly_mul(&rw, &g, &h);
        let pk = pw(k as i64) as u64;
        let e: Vec<PadicApprox> = (0..=n)
            .map(|i| {
                let d = ph[i] - gh.get(i).copied().unwrap_or(rw.zero());
                debug_assert_eq!(d.residue() % pk, 0);
                r1.from_residue((d.residue() / pk) % p)
            })
            .collect();
        let be = poly_mul(&r1, &b, &e);
        let dg = &be[..r.min(be.len())];
        let q: Vec<PadicApprox> = be.get(r..).map(|s| s.to_vec()).unwrap_or_default();
        let mut dh = poly_mul(&r1, &a, &e);
        for (i, x) in poly_mul(&r1, &u_bar, &q).into_iter().enumerate() {
            if i < dh.len() {
                dh[i] = dh[i] + x;
            } else {
                dh.push(x);
            }
        }
        let lift = |x: &PadicApprox| rw.from_residue(x.residue()) * rw.from_residue(pk);
        for (i, x) in dg.iter().enumerate() {
            g[i] = g[i] + lift(x);
        }
        for (i, x) in dh.iter().enumerate().take(n - r + 1) {
            if i < h.len() {
                h[i] = h[i] + lift(x);
            }
        }
    }
    // R(x) = p^(theta r) G(x / p^theta)
    let big_r: Vec<PadicApprox> = g
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = theta * (r - i) as i64;
            *c * rw.from_residue((pw(e) % rw.modulus() as u128) as u64)
        })
        .collect();
    let pw_poly: Vec<PadicApprox> = poly.iter().map(|c| convert(c, &rw)).collect();
    let (q, rem) = poly_divrem(&rw, &pw_poly, &big_r);
    if rem.iter().any(|x| !x.is_zero()) {
        return Err(unresolved("factorization did not close"));
    }
    Ok((big_r, q, w))
}

/// Smallest `delta` with `u Q + w R = p^delta`, and such `u`, `w`.
fn bezout(rw: &ZpRing, q: &[PadicApprox], r: &[PadicApprox]) -> Option<(u32, Vec<PadicApprox>, Vec<PadicApprox>)> {
    let (dq, dr) = (q.len() - 1, r.len() - 1);
    let n = dq + dr;
    // unknowns: u (deg < dr), then w (deg < dq)
    let mut mat = vec![vec![rw.zero(); n]; n];
    for a in 0..dr {
        for (i, c) in q.iter().enumerate() {
            mat[a + i][a] = *c;
        }
    }
    for b in 0..dq {
        for (i, c) in r.iter().enumerate() {
            mat[b + i][dr + b] = *c;
        }
    }
    for delta in 0..rw.m {
        let mut rhs = vec![rw.zero(); n];
        rhs[0] = rw.elt(rw.p.pow(delta) as i64);
        if let Some(x) = linalg::solve(rw, &mat, n, &rhs) {
            return Some((delta, x[..dr].to_vec(), x[dr..].to_vec()));
        }
    }
    None
}

/// Per-block U_p data of an overconvergent space.
#[derive(Clone, Debug)]
pub struct BlockSlopes {
    pub d: usize,
    pub j: usize,
    pub dimension: usize,
    pub up: Matrix<PadicApprox>,
    pub charpoly: Vec<PadicApprox>,
    pub slopes: Vec<SlopeEntry>,
}

/// U_p slopes of a space, block by block.
#[derive(Clone, Debug)]
pub struct SlopeData {
    pub p: u64,
    pub n: u64,
    pub m: u32,
    pub t: usize,
    pub blocks: Vec<BlockSlopes>,
}

impl SlopeData {
    /// All slopes with multiplicity, merged across blocks.
    pub fn slopes(&self) -> Vec<SlopeEntry> {
        let mut all: Vec<SlopeEntry> = Vec::new();
        for b in &self.blocks {
            for s in &b.slopes {
                match all.iter_mut().find(|x| x.value == s.value) {
                    Some(x) => {
                        x.multiplicity += s.multiplicity;
                        x.exact &= s.exact;
                    }
                    None => all.push(s.clone()),
                }
            }
        }
        all.sort_by(|a, b| a.value.cmp(&b.value));
        all
    }

    pub fn slopes_up_to(&self, h: Ratio<i64>) -> Vec<SlopeEntry> {
        self.slopes().into_iter().filter(|s| s.value <= h).collect()
    }

    pub fn has_slope(&self, s: Ratio<i64>) -> bool {
        self.slopes().iter().any(|x| x.value == s)
    }

    pub fn to_json(&self, h: Option<Ratio<i64>>) -> Value {
        let keep = |s: &SlopeEntry| h.map_or(true, |h| s.value <= h);
        json!({
            "p": self.p,
            "N": self.n,
            "M": self.m,
            "T": self.t,
            "h": h.map(|h| format!("{h}")),
            "slopes": self.slopes().iter().filter(|s| keep(s)).map(|s| s.to_json()).collect::<Vec<_>>(),
            "blocks": self.blocks.iter().filter(|b| b.dimension > 0).map(|b| json!({
                "degree": b.d,
                "twist": b.j,
                "dimension": b.dimension,
                "slopes": b.slopes.iter().filter(|s| keep(s)).map(|s| s.to_json()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Computes U_p on every block of `space` and the Newton polygons of its
/// characteristic polynomials.
pub fn slope_data(space: &OcSpace) -> Result<SlopeData> {
    let ring = space.params().ring();
    let mut blocks = Vec::with_capacity(space.blocks.len());
    for (i, blk) in space.blocks.iter().enumerate() {
        let up = space.block_operator_matrix(i, |s| s.hecke_up())?;
        let charpoly = linalg::charpoly(&ring, &up);
        let slopes = if up.is_empty() { vec![] } else { newton_slopes(&charpoly, ring.m) };
        blocks.push(BlockSlopes { d: blk.d, j: blk.j, dimension: blk.dimension(), up, charpoly, slopes });
    }
    let pr = space.params();
    Ok(SlopeData { p: pr.p, n: pr.n, m: pr.m, t: pr.t, blocks })
}

/// The projector onto the part of slope at most `h`, in basis coordinates.
#[derive(Clone, Debug)]
pub struct SlopeProjector {
    pub h: Ratio<i64>,
    /// Coefficient ring of `matrix`; its precision is the working precision
    /// less `loss`.
    pub ring: ZpRing,
    pub loss: u32,
    pub rank: usize,
    pub matrix: Matrix<PadicApprox>,
}

impl SlopeProjector {
    pub fn apply(&self, space: &OcSpace, phi: &OCSymbol) -> OCSymbol {
        let coords: Vec<PadicApprox> = space.coordinates(phi).iter().map(|x| convert(x, &self.ring)).collect();
        let image = linalg::mat_vec(&self.ring, &self.matrix, &coords);
        let full = space.params().ring();
        let lifted: Vec<PadicApprox> = image.iter().map(|x| full.from_residue(x.residue())).collect();
        space.combination(&lifted)
    }
}

fn choose_threshold(slopes: &[SlopeEntry], h: Ratio<i64>) -> Result<i64> {
    let below = slopes.iter().filter(|s| s.value <= h).map(|s| s.value).max();
    let above = slopes.iter().filter(|s| s.value > h).map(|s| s.value).min();
    let near_uncertain = slopes.iter().any(|s| !s.exact && s.value <= h);
    if near_uncertain {
        return Err(Error::SlopeGapUnresolvable(format!("{h}: a slope at or below h is only a lower bound")));
    }
    let lo = below.map_or(h.floor(), |b| b.ceil());
    match above {
        Some(a) if lo >= a => Err(Error::SlopeGapUnresolvable(format!("{h}: no integer separates {} and {a}", below.unwrap()))),
        _ => Ok(lo.to_integer()),
    }
}

/// Projector onto the generalized U_p eigenspaces of slope `<= h`.
///
/// On each block the characteristic polynomial is split as `R Q` by Hensel
/// lifting after the substitution `x -> p^theta x`, and the projector is
/// `w(U_p) R(U_p) / p^delta` where `u Q + w R = p^delta`. Both steps cost
/// precision; the total is reported in `loss`.
pub fn slope_projector(space: &OcSpace, data: &SlopeData, h: Ratio<i64>) -> Result<SlopeProjector> {
    let ring = space.params().ring();
    let mut parts: Vec<(Matrix<PadicApprox>, u32, usize)> = Vec::new();
    for b in &data.blocks {
        let n = b.dimension;
        if n == 0 {
            parts.push((vec![], ring.m, 0));
            continue;
        }
        if b.slopes.iter().all(|s| s.value > h) {
            parts.push((vec![vec![ring.zero(); n]; n], ring.m, 0));
            continue;
        }
        if b.slopes.iter().all(|s| s.value <= h) {
            parts.push((linalg::identity(&ring, n), ring.m, n));
            continue;
        }
        let theta = choose_threshold(&b.slopes, h)?;
        let (r, q, w) = split_at(&ring, &b.charpoly, theta)?;
        let rw = ring.reduce_to(w)?;
        let (delta, _, wpoly) = bezout(&rw, &q, &r)
            .ok_or_else(|| Error::SlopeGapUnresolvable(format!("{h}: factors are not coprime at this precision")))?;
        let prec = w - delta;
        if prec == 0 {
            return Err(Error::SlopeGapUnresolvable(format!("{h}: precision exhausted")));
        }
        let a: Matrix<PadicApprox> = b.up.iter().map(|row| row.iter().map(|x| convert(x, &rw)).collect()).collect();
        let x = linalg::mat_mul(&rw, &matrix_poly(&rw, &wpoly, &a), &matrix_poly(&rw, &r, &a));
        let pd = rw.p.pow(delta);
        let rp = ring.reduce_to(prec)?;
        let mut proj = vec![vec![rp.zero(); n]; n];
        for (i, row) in x.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.residue() % pd != 0 {
                    return Err(Error::SlopeGapUnresolvable(format!("{h}: projector is not integral")));
                }
                proj[i][j] = rp.from_residue((e.residue() / pd) % rp.modulus());
            }
        }
        let rank = q.len() - 1;
        parts.push((proj, prec, rank));
    }
    let prec = parts.iter().map(|p| p.1).min().unwrap_or(ring.m);
    let rp = ring.reduce_to(prec)?;
    let dim = space.dimension();
    let mut matrix = vec![vec![rp.zero(); dim]; dim];
    let offsets = space.block_offsets();
    let mut rank = 0;
    for ((m, _, rk), off) in parts.iter().zip(offsets) {
        rank += rk;
        for (i, row) in m.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                matrix[off + i][off + j] = convert(e, &rp);
            }
        }
    }
    Ok(SlopeProjector { h, ring: rp, loss: ring.m - prec, rank, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ring: &ZpRing, c: &[i64]) -> Vec<PadicApprox> {
        c.iter().map(|&x| ring.elt(x)).collect()
    }

    #[test]
    fn polygon_of_a_product() {
        let ring = ZpRing::new(5, 10).unwrap();
        // (x - 1)(x - 5)(x - 25) = x^3 - 31 x^2 + 155 x - 125
        let s = newton_slopes(&poly(&ring, &[-125, 155, -31, 1]), 10);
        let v: Vec<_> = s.iter().map(|e| (e.value, e.multiplicity)).collect();
        assert_eq!(v, vec![(Ratio::from(0), 1), (Ratio::from(1), 1), (Ratio::from(2), 1)]);
    }

    #[test]
    fn fractional_slope() {
        let ring = ZpRing::new(5, 10).unwrap();
        // x^2 - 5 has two roots of valuation 1/2
        let s = newton_slopes(&poly(&ring, &[-5, 0, 1]), 10);
        assert_eq!(s, vec![SlopeEntry { value: Ratio::new(1, 2), multiplicity: 2, exact: true }]);
    }

    #[test]
    fn split_recovers_factors() {
        let ring = ZpRing::new(7, 8).unwrap();
        // (x - 3)(x - 14)(x^2 - 49 x + 98) with slopes 0, 1, 1, 1
        let f = poly_mul(&ring, &poly(&ring, &[-3, 1]), &poly(&ring, &[-14, 1]));
        let f = poly_mul(&ring, &f, &poly(&ring, &[98, -49, 1]));
        let (r, q, w) = split_at(&ring, &f, 0).unwrap();
        let rw = ring.reduce_to(w).unwrap();
        assert_eq!(q, poly(&rw, &[-3, 1]));
        assert_eq!(r.len(), 4);
        let (_, rem) = poly_divrem(&rw, &r, &poly(&rw, &[-14, 1]));
        assert!(rem.iter().all(|x| x.is_zero()));
    }
}
