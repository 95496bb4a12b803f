// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shintani::arith::linalg::{self, Matrix};
use shintani::arith::{DirichletChar, PadicApprox, Ring, ZpRing};
use shintani::dist::{tame_units, ArithWeight, MomentDist2, TaggedMoments};
use shintani::modsym::{eigensymbols, solve_symbol_space, ManinData, SignChoice};
use shintani::ocsymb::{
    hecke_eigenvalue, lift_eigensymbol, slope_data, slope_projector, solve_oc_space, specialize_symbol, symbol_to_zp,
    OCSymbol, OcParams,
};

fn tri(t: usize) -> usize {
    (t + 1) * (t + 2) / 2
}

/// Symbol with a single nonzero moment, used to assemble the relations densely.
fn unit_symbol(params: OcParams, manin: &Arc<ManinData>, gen: usize, tag: usize, c: u64, a: usize, b: usize) -> OCSymbol {
    let ring = params.ring();
    let units = tame_units(params.n);
    let values = (0..manin.len())
        .map(|g| {
            let comps = (0..units.len())
                .map(|t| {
                    let mut mu = MomentDist2::zero(ring, params.t);
                    if g == gen && t == tag {
                        mu.set(c as i64, a, b, ring.one()).unwrap();
                    }
                    mu
                })
                .collect();
            TaggedMoments::from_components(params.n, comps).unwrap()
        })
        .collect();
    OCSymbol::from_values(params, manin.clone(), values).unwrap()
}

#[test]
fn block_solver_matches_dense_kernel() {
    let params = OcParams::new(11, 1, 5, 2).unwrap();
    let ring = params.ring();
    let manin = Arc::new(ManinData::new(params.level()));
    let rels = manin.relations();
    let mut cols: Vec<Vec<PadicApprox>> = Vec::new();
    for gen in 0..manin.len() {
        for c in 1..params.p {
            for d in 0..=params.t {
                for b in 0..=d {
                    let phi = unit_symbol(params, &manin, gen, 0, c, d - b, b);
                    let mut col = Vec::new();
                    for rel in &rels {
                        let v = phi.eval_terms(rel);
                        let mu = v.component(0).unwrap();
                        for cc in 1..params.p {
                            for dd in 0..=params.t {
                                for bb in 0..=dd {
                                    col.push(mu.get(cc as i64, dd - bb, bb).unwrap());
                                }
                            }
                        }
                    }
                    cols.push(col);
                }
            }
        }
    }
    let ncols = cols.len();
    assert_eq!(ncols, manin.len() * (params.p as usize - 1) * tri(params.t));
    let rows: Matrix<PadicApprox> = (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let dense = linalg::kernel(&ring, &rows, ncols);

    let space = solve_oc_space(params).unwrap();
    assert_eq!(space.dimension(), dense.dimension());
    assert_eq!(space.torsion_exponent(), dense.max_torsion_exponent());
    assert!(space.dimension() > 0);
    for phi in space.basis() {
        assert!(phi.satisfies_relations());
    }
}

#[test]
fn coordinates_invert_combination() {
    let params = OcParams::new(5, 3, 4, 2).unwrap();
    let space = solve_oc_space(params).unwrap();
    let ring = params.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phi = space.random_element(&mut rng);
    assert!(phi.satisfies_relations());
    let c = space.coordinates(&phi);
    assert_eq!(space.combination(&c), phi);
    let e: Vec<PadicApprox> = (0..space.dimension()).map(|i| if i == 1 { ring.one() } else { ring.zero() }).collect();
    assert_eq!(space.coordinates(&space.basis_element(1)), e);
}

/// Dimension of the classical space of weight `k` and character `chi` over `Z/p^M`.
fn classical_dim(level: u64, k: usize, chi: &DirichletChar, ring: ZpRing) -> usize {
    solve_symbol_space(level, k, chi, ring).unwrap().dimension()
}

#[test]
fn quadratic_blocks_match_classical_spaces() {
    // p = 5, N = 3: omega^j is quadratic for j in {0, 2}; the tame characters
    // mod 3 are trivial and quadratic
    let params = OcParams::new(5, 3, 4, 2).unwrap();
    let ring = params.ring();
    let space = solve_oc_space(params).unwrap();
    let tame = [DirichletChar::trivial(3), DirichletChar::quadratic(3).unwrap()];
    let wild = [(0usize, DirichletChar::trivial(5)), (2, DirichletChar::quadratic(5).unwrap())];
    for blk in &space.blocks {
        let Some((_, w)) = wild.iter().find(|(j, _)| *j == blk.j) else { continue };
        let expected: usize = tame
            .iter()
            .map(|t| {
                let chi = t.lift(15).unwrap().mul(&w.lift(15).unwrap());
                classical_dim(15, blk.d, &chi, ring)
            })
            .sum();
        assert_eq!(blk.dimension(), expected, "degree {} twist {}", blk.d, blk.j);
    }
}

#[test]
fn weight_zero_up_matches_classical() {
    let params = OcParams::new(5, 3, 5, 0).unwrap();
    let ring = params.ring();
    let space = solve_oc_space(params).unwrap();
    let data = slope_data(&space).unwrap();
    let oc = data.blocks.iter().find(|b| b.d == 0 && b.j == 0).unwrap();
    let classical = solve_symbol_space(15, 0, &DirichletChar::trivial(15), ring).unwrap();
    let up = classical.operator_matrix(|s| s.hecke_up(5)).unwrap();
    // the trivial tame sector is the classical space; the quadratic one is
    // zero in weight 0 by parity
    assert_eq!(oc.dimension, classical.dimension());
    assert_eq!(oc.charpoly, linalg::charpoly(&ring, &up));
}

#[test]
fn specialization_is_hecke_equivariant() {
    let params = OcParams::new(5, 3, 5, 2).unwrap();
    let space = solve_oc_space(params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let phi = space.random_element(&mut rng);
    let chis = [DirichletChar::trivial(15), DirichletChar::quadratic(3).unwrap().lift(15).unwrap()];
    for k in 0..=2 {
        for chi in &chis {
            let kappa = ArithWeight::new(k, chi, 3, 5).unwrap();
            let s = specialize_symbol(&phi, &kappa).unwrap();
            assert!(s.satisfies_relations());
            for l in [2u64, 5, 7] {
                let lhs = specialize_symbol(&phi.hecke_tp(l).unwrap(), &kappa).unwrap();
                let rhs = s.hecke_tp(l).unwrap();
                assert_eq!(lhs.values, rhs.values, "k = {k}, l = {l}");
            }
            let lhs = specialize_symbol(&phi.iota(), &kappa).unwrap();
            assert_eq!(lhs.values, s.iota().values);
        }
    }
}

#[test]
fn hecke_operators_commute() {
    let params = OcParams::new(5, 1, 4, 3).unwrap();
    let space = solve_oc_space(params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = space.random_element(&mut rng);
    let a = phi.hecke_up().unwrap().hecke_tp(3).unwrap();
    let b = phi.hecke_tp(3).unwrap().hecke_up().unwrap();
    assert_eq!(a, b);
    let a = phi.hecke_tp(2).unwrap().hecke_tp(3).unwrap();
    assert_eq!(a, phi.hecke_tn(6).unwrap());
    assert!(phi.hecke_up().unwrap().satisfies_relations());
}

#[test]
fn slope_projector_is_an_idempotent_commuting_with_up() {
    let params = OcParams::new(5, 1, 6, 3).unwrap();
    let space = solve_oc_space(params).unwrap();
    let data = slope_data(&space).unwrap();
    let slopes = data.slopes();
    assert!(slopes.iter().any(|s| s.value > Ratio::from(0)));
    // at least one block mixes slopes on both sides of 0, so the split is exercised
    assert!(data.blocks.iter().any(|b| {
        b.slopes.iter().any(|s| s.value == Ratio::from(0)) && b.slopes.iter().any(|s| s.value > Ratio::from(0))
    }));
    let up = space.operator_matrix(|s| s.hecke_up()).unwrap();
    for h in [0i64, 1, 2] {
        let h = Ratio::from(h);
        let pr = match slope_projector(&space, &data, h) {
            Ok(pr) => pr,
            Err(e) => panic!("h = {h}: {e}"),
        };
        let rp = pr.ring;
        let red = |m: &Matrix<PadicApprox>| -> Matrix<PadicApprox> {
            m.iter().map(|r| r.iter().map(|x| rp.from_residue(x.residue() % rp.modulus())).collect()).collect()
        };
        let e = &pr.matrix;
        assert_eq!(&linalg::mat_mul(&rp, e, e), e);
        let u = red(&up);
        assert_eq!(linalg::mat_mul(&rp, e, &u), linalg::mat_mul(&rp, &u, e));
        let expected: usize = data.slopes_up_to(h).iter().map(|s| s.multiplicity).sum();
        assert_eq!(pr.rank, expected);
    }
}

#[test]
fn eleven_a_lifts_at_eleven() {
    let params = OcParams::new(11, 1, 6, 2).unwrap();
    let ring = params.ring();
    let space = solve_oc_space(params).unwrap();
    let data = slope_data(&space).unwrap();
    assert!(data.has_slope(Ratio::from(0)));

    let rep = eigensymbols(11, 0, &DirichletChar::trivial(11), SignChoice::Minus, 7).unwrap();
    let sys = &rep.systems[0];
    let phi = symbol_to_zp(&sys.symbol, ring).unwrap();
    let kappa = ArithWeight::trivial(0, 1, 11);
    let (lift, _) = lift_eigensymbol(params, &phi, &kappa, &ring.one()).unwrap();
    assert!(lift.satisfies_relations());
    assert_eq!(specialize_symbol(&lift, &kappa).unwrap().values, phi.values);
    assert_eq!(hecke_eigenvalue(&lift, 2).unwrap().centered(), -2);
    assert_eq!(hecke_eigenvalue(&lift, 3).unwrap().centered(), -1);
    let l2 = hecke_eigenvalue(&lift, 2).unwrap();
    let l3 = hecke_eigenvalue(&lift, 3).unwrap();
    assert_eq!(hecke_eigenvalue(&lift, 6).unwrap(), l2 * l3);
}

#[test]
fn critical_slope_is_refused() {
    let params = OcParams::new(11, 1, 4, 1).unwrap();
    let ring = params.ring();
    let rep = eigensymbols(11, 0, &DirichletChar::trivial(11), SignChoice::Minus, 3).unwrap();
    let phi = symbol_to_zp(&rep.systems[0].symbol, ring).unwrap();
    let kappa = ArithWeight::trivial(0, 1, 11);
    let err = lift_eigensymbol(params, &phi, &kappa, &ring.elt(11)).unwrap_err();
    assert!(matches!(err, shintani::Error::CriticalSlope(1, 0)));
}

#[test]
fn symbol_json_has_moments() {
    let params = OcParams::new(5, 1, 3, 1).unwrap();
    let space = solve_oc_space(params).unwrap();
    let v = space.basis_element(0).to_json();
    assert_eq!(v["p"], 5);
    assert_eq!(v["values"].as_array().unwrap().len(), space.manin().len());
}
