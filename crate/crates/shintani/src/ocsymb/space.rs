// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use rayon::prelude::*;

use crate::arith::linalg::{self, Kernel, Matrix};
use crate::arith::{PadicApprox, Ring, ZpRing};
use crate::dist::{reduce, substitution, tame_units, teichmuller_table, MomentDist2, TaggedMoments};
use crate::error::Result;
use crate::modsym::ManinData;

use super::symbol::{OCSymbol, OcParams};

/// The solutions supported on moments of degree `d` and twisted by the
/// Teichmuller power `omega^j` on discs.
#[derive(Clone, Debug)]
pub struct OcBlock {
    pub d: usize,
    pub j: usize,
    kernel: Kernel<PadicApprox>,
}

impl OcBlock {
    pub fn dimension(&self) -> usize {
        self.kernel.dimension()
    }
}

/// A solved space of overconvergent symbols.
///
/// The `S_0(Np)` action preserves the moment degree and, on the twisted
/// moments `sum_c omega(c)^j m_c`, acts through `omega^j(A)` times a
/// polynomial substitution. The relations therefore split into blocks
/// indexed by `(d, j)`, solved one at a time.
#[derive(Clone, Debug)]
pub struct OcSpace {
    params: OcParams,
    manin: Arc<ManinData>,
    units: Vec<u64>,
    omega: Vec<PadicApprox>,
    pub blocks: Vec<OcBlock>,
}

fn block_width(ngens: usize, ntags: usize, d: usize) -> usize {
    ngens * ntags * (d + 1)
}

impl OcSpace {
    pub fn params(&self) -> OcParams {
        self.params
    }

    pub fn level(&self) -> u64 {
        self.params.level()
    }

    pub fn manin(&self) -> &Arc<ManinData> {
        &self.manin
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dimension()).sum()
    }

    /// Largest exponent of a `p`-power torsion summand left out of the basis.
    pub fn torsion_exponent(&self) -> u32 {
        self.blocks.iter().map(|b| b.kernel.max_torsion_exponent()).max().unwrap_or(0)
    }

    /// `(block index, position within the block)` of each basis element.
    fn locate(&self, i: usize) -> (usize, usize) {
        let mut i = i;
        for (b, blk) in self.blocks.iter().enumerate() {
            if i < blk.dimension() {
                return (b, i);
            }
            i -= blk.dimension();
        }
        panic!("basis index out of range");
    }

    /// Offsets of the blocks in the basis.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.dimension();
                o
            })
            .collect()
    }

    fn ring(&self) -> ZpRing {
        self.params.ring()
    }

    /// Builds the symbol with twisted moments `v` in block `b`.
    fn from_block_vector(&self, b: usize, v: &[PadicApprox]) -> OCSymbol {
        let ring = self.ring();
        let (d, j) = (self.blocks[b].d, self.blocks[b].j);
        let p = self.params.p;
        let ntags = self.units.len();
        let inv = ring.elt((p - 1) as i64).inverse().expect("p - 1 is a unit");
        let values = (0..self.manin.len())
            .map(|g| {
                let comps = (0..ntags)
                    .map(|t| {
                        let base = (g * ntags + t) * (d + 1);
                        let mut mu = MomentDist2::zero(ring, self.params.t);
                        for c in 1..p {
                            let w = self.omega[c as usize - 1].pow(((p - 1) - j as u64) % (p - 1)) * inv;
                            for bb in 0..=d {
                                mu.set(c as i64, d - bb, bb, w * v[base + bb]).expect("in range");
                            }
                        }
                        mu
                    })
                    .collect();
                TaggedMoments::from_components(self.params.n, comps).expect("tag count")
            })
            .collect();
        OCSymbol::from_values(self.params, self.manin.clone(), values).expect("shape")
    }

    /// Twisted moments of `phi` laid out as a vector of block `b`.
    fn block_vector(&self, b: usize, phi: &OCSymbol) -> Vec<PadicApprox> {
        let ring = self.ring();
        let (d, j) = (self.blocks[b].d, self.blocks[b].j);
        let ntags = self.units.len();
        let mut out = vec![ring.zero(); block_width(self.manin.len(), ntags, d)];
        for (g, val) in phi.values.iter().enumerate() {
            for (t, (_, mu)) in val.components().enumerate() {
                let base = (g * ntags + t) * (d + 1);
                for c in 1..self.params.p {
                    let w = self.omega[c as usize - 1].pow(j as u64);
                    for bb in 0..=d {
                        out[base + bb] = out[base + bb] + w * mu.get(c as i64, d - bb, bb).expect("in range");
                    }
                }
            }
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> OCSymbol {
        let (b, k) = self.locate(i);
        self.from_block_vector(b, &self.blocks[b].kernel.free[k])
    }

    pub fn basis(&self) -> Vec<OCSymbol> {
        (0..self.dimension()).into_par_iter().map(|i| self.basis_element(i)).collect()
    }

    /// Coordinates of a symbol of the space in the basis.
    pub fn coordinates(&self, phi: &OCSymbol) -> Vec<PadicApprox> {
        let ring = self.ring();
        let mut out = Vec::with_capacity(self.dimension());
        for (b, blk) in self.blocks.iter().enumerate() {
            if blk.dimension() == 0 {
                continue;
            }
            let v = self.block_vector(b, phi);
            out.extend(blk.kernel.coordinates(&ring, &v));
        }
        out
    }

    pub fn combination(&self, coords: &[PadicApprox]) -> OCSymbol {
        let mut acc = OCSymbol::zero(self.params, self.manin.clone());
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.basis_element(i).scale(c));
            }
        }
        acc
    }

    /// A random element: a combination of the basis with uniform coefficients.
    pub fn random_element<G: rand::Rng>(&self, rng: &mut G) -> OCSymbol {
        let ring = self.ring();
        let coords: Vec<PadicApprox> = (0..self.dimension())
            .map(|_| ring.from_residue(rng.gen_range(0..ring.modulus())))
            .collect();
        self.combination(&coords)
    }

    /// Matrix of an operator; column `j` holds the coordinates of `op(basis_j)`.
    pub fn operator_matrix<F>(&self, op: F) -> Result<Matrix<PadicApprox>>
    where
        F: Fn(&OCSymbol) -> Result<OCSymbol> + Sync,
    {
        let n = self.dimension();
        let cols: Vec<Vec<PadicApprox>> = (0..n)
            .into_par_iter()
            .map(|i| op(&self.basis_element(i)).map(|s| self.coordinates(&s)))
            .collect::<Result<_>>()?;
        Ok((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
    }

    /// Restriction of an operator to block `b`, in the block's basis.
    pub fn block_operator_matrix<F>(&self, b: usize, op: F) -> Result<Matrix<PadicApprox>>
    where
        F: Fn(&OCSymbol) -> Result<OCSymbol> + Sync,
    {
        let blk = &self.blocks[b];
        let ring = self.ring();
        let n = blk.dimension();
        let cols: Vec<Vec<PadicApprox>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let s = op(&self.from_block_vector(b, &blk.kernel.free[i]))?;
                Ok(blk.kernel.coordinates(&ring, &self.block_vector(b, &s)))
            })
            .collect::<Result<_>>()?;
        Ok((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
    }
}

/// Solves the Manin relations over `Gamma_0(Np)` with values in the finite
/// model of `D_N`.
pub fn solve_oc_space(params: OcParams) -> Result<OcSpace> {
    let ring = params.ring();
    let np = params.level();
    let manin = Arc::new(ManinData::new(np));
    let units = tame_units(params.n);
    let omega = teichmuller_table(&ring);
    let rels = manin.relations();
    let ngens = manin.len();
    let ntags = units.len();
    let p = params.p;
    let tag_pos = |t: u64| -> usize {
        if params.n == 1 {
            0
        } else {
            units.binary_search(&(t % params.n)).expect("unit")
        }
    };
    let index: Vec<(usize, usize)> = (0..=params.t).flat_map(|d| (0..(p - 1) as usize).map(move |j| (d, j))).collect();
    let blocks: Vec<OcBlock> = index
        .par_iter()
        .map(|&(d, j)| {
            let w = block_width(ngens, ntags, d);
            let mut rows: Matrix<PadicApprox> = Vec::new();
            for rel in &rels {
                let mut block = vec![vec![ring.zero(); w]; ntags * (d + 1)];
                for term in rel {
                    let e = [&term.h.a, &term.h.b, &term.h.c, &term.h.d].map(|x| reduce(&ring, x));
                    let s = substitution(&ring, e, d);
                    let a_p = e[0].residue() % p;
                    let twist = omega[a_p as usize - 1].pow(j as u64) * ring.from_int(&term.coeff);
                    let a_n = if params.n == 1 {
                        0
                    } else {
                        use num_integer::Integer;
                        use num_traits::ToPrimitive;
                        term.h.a.mod_floor(&params.n.into()).to_u64().unwrap()
                    };
                    for (ti, &t) in units.iter().enumerate() {
                        let out_tag = tag_pos(if params.n == 1 { 0 } else { t * a_n % params.n });
                        for (bo, srow) in s.iter().enumerate() {
                            let row = &mut block[out_tag * (d + 1) + bo];
                            for (bi, x) in srow.iter().enumerate() {
                                let col = (term.gen * ntags + ti) * (d + 1) + bi;
                                row[col] = row[col] + twist * *x;
                            }
                        }
                    }
                }
                rows.extend(block);
            }
            OcBlock { d, j, kernel: linalg::kernel(&ring, &rows, w) }
        })
        .collect();
    Ok(OcSpace { params, manin, units, omega, blocks })
}
