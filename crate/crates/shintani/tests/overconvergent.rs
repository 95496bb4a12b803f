// SPDX-License-Identifier: Apache-2.0

mod common {
    pub mod bfs;
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shintani::arith::{DirichletChar, Mat2, PadicApprox, RationalCusp, Ring};
use shintani::dist::{eval_weight_meta, ArithWeight, DistN, MomentDist1};
use shintani::modsym::{eigensymbols, SignChoice};
use shintani::ocsymb::{lift_eigensymbol, solve_oc_space, specialize_symbol, symbol_to_zp, OCSymbol, OcParams};
use shintani::qf::{enumerate_classes, QuadForm};
use shintani::shintani::{
    default_character, discriminant_of, j_classical, j_oc, j_oc_at, qexp_hecke_tl, qexp_hecke_tll, theta_oc,
    verify_interpolation, verify_oc_hecke, FormalQExp,
};

fn random_symbol(params: OcParams, seed: u64) -> OCSymbol {
    let space = solve_oc_space(params).unwrap();
    space.random_element(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn forms(level: u64, nmax: u64) -> Vec<QuadForm> {
    (1..=nmax).flat_map(|n| enumerate_classes(level, discriminant_of(n, level))).collect()
}

fn random_gamma0(gens: &[[i64; 4]], rng: &mut ChaCha8Rng) -> Mat2 {
    let mut g = Mat2::identity();
    for _ in 0..5 {
        let h = gens[rng.gen_range(0..gens.len())];
        g = g.mul(&Mat2::new(h[0], h[1], h[2], h[3]));
    }
    g
}

fn random_dist(n: u64, params: OcParams, rng: &mut ChaCha8Rng) -> DistN {
    let ring = params.ring();
    let mut r = DistN::zero(n, ring, params.t);
    for tag in shintani::dist::tame_units(n) {
        r = r.add(&DistN::tagged(n, tag as i64, MomentDist1::random(ring, params.t, rng)).unwrap());
    }
    r
}

#[test]
fn chain_matches_continued_fractions() {
    for (n, seed) in [(1u64, 1u64), (3, 2)] {
        let phi = random_symbol(OcParams::new(5, n, 4, 2).unwrap(), seed);
        let ws = [RationalCusp::integer(0), RationalCusp::new(2, 7).unwrap(), RationalCusp::Infinity];
        for q in forms(phi.level(), 8) {
            let fast = j_oc(&phi, &q).unwrap();
            for w in &ws {
                assert_eq!(fast, j_oc_at(&phi, &q, w).unwrap(), "{q} from {w}");
            }
        }
    }
}

#[test]
fn coefficient_is_orbit_invariant() {
    let phi = random_symbol(OcParams::new(5, 3, 4, 2).unwrap(), 7);
    let gens = common::bfs::gamma0_generators(15);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for q in forms(15, 6).iter().take(5) {
        let j = j_oc(&phi, q).unwrap();
        for _ in 0..20 {
            let g = random_gamma0(&gens, &mut rng);
            let Ok(qg) = q.act(&g) else { continue };
            assert_eq!(j, j_oc(&phi, &qg).unwrap(), "{q} moved by {g}");
        }
    }
}

#[test]
fn coefficient_specializes_to_the_classical_pairing() {
    let phi = random_symbol(OcParams::new(5, 3, 5, 3).unwrap(), 4);
    let chis = [DirichletChar::trivial(15), DirichletChar::quadratic(3).unwrap().lift(15).unwrap()];
    for k in 0..=1 {
        for chi in &chis {
            let kappa = ArithWeight::new(k, chi, 3, 5).unwrap();
            let classical = specialize_symbol(&phi, &kappa.sigma()).unwrap();
            for q in forms(15, 10) {
                let lhs = eval_weight_meta(&j_oc(&phi, &q).unwrap(), &kappa).unwrap();
                let rhs = j_classical(&classical, &q, k, &kappa.chi).unwrap();
                assert_eq!(lhs, rhs, "k = {k}, {q}");
            }
        }
    }
}

#[test]
fn zero_symbol_has_zero_lift() {
    let params = OcParams::new(5, 1, 3, 2).unwrap();
    let space = solve_oc_space(params).unwrap();
    let zero = OCSymbol::zero(params, space.manin().clone());
    assert!(theta_oc(&zero, 15).unwrap().is_zero());
}

#[test]
fn lift_is_linear_over_the_module() {
    let params = OcParams::new(5, 3, 4, 2).unwrap();
    let phi = random_symbol(params, 12);
    let psi = random_symbol(params, 13);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let r = random_dist(3, params, &mut rng);
    let nmax = 12;
    let lhs = theta_oc(&phi.module_act(&r).unwrap(), nmax).unwrap();
    let rhs = theta_oc(&phi, nmax).unwrap().module_act(&r).unwrap();
    assert_eq!(lhs.first_difference(&rhs), None);
    let sum = theta_oc(&phi.add(&psi), nmax).unwrap();
    let a = theta_oc(&phi, nmax).unwrap();
    let b = theta_oc(&psi, nmax).unwrap();
    for n in 1..=nmax {
        let c = a.coeff(n).unwrap().add(b.coeff(n).unwrap()).unwrap();
        assert_eq!(sum.coeff(n).unwrap(), &c);
    }
}

#[test]
fn only_realizable_exponents_appear() {
    let phi = random_symbol(OcParams::new(5, 3, 3, 2).unwrap(), 21);
    let theta = theta_oc(&phi, 30).unwrap();
    assert!(theta.exponents_integral());
    assert!(!theta.is_zero());
    for n in 1..=30u64 {
        if !theta.exponent_realizable(n) {
            assert!(theta.coeff(n as usize).unwrap().is_zero());
        }
    }
}

#[test]
fn tll_scales_twisted_moments() {
    // on twisted moments, delta_s acts by omega(s)^j s^n
    let phi = random_symbol(OcParams::new(5, 1, 4, 2).unwrap(), 3);
    let theta = theta_oc(&phi, 10).unwrap();
    let ring = phi.ring();
    for l in [3u64, 7] {
        let t = qexp_hecke_tll(&theta, l).unwrap();
        let s = (l * l) as i64;
        let omega = ring.elt(s).teichmuller();
        for n in 1..=10 {
            let a = theta.coeff(n).unwrap().right.component(0).unwrap().twisted_moments();
            let b = t.coeff(n).unwrap().right.component(0).unwrap().twisted_moments();
            for (j, row) in a.iter().enumerate() {
                for (m, x) in row.iter().enumerate() {
                    let f: PadicApprox = omega.pow(j as u64) * ring.elt(s).pow(m as u64);
                    assert_eq!(b[j][m], *x * f, "l = {l}, n = {n}, j = {j}, moment {m}");
                }
            }
        }
    }
}

#[test]
fn hecke_formula_holds_for_small_precision() {
    let phi = random_symbol(OcParams::new(5, 1, 4, 4).unwrap(), 5);
    let report = verify_oc_hecke(&phi, &[3], 10).unwrap();
    assert!(report.passed(), "{}", report.render());
    let phi = random_symbol(OcParams::new(5, 3, 4, 4).unwrap(), 6);
    let report = verify_oc_hecke(&phi, &[3, 5], 6).unwrap();
    assert!(report.passed(), "{}", report.render());
}

#[test]
fn hecke_formula_detects_a_wrong_operator() {
    let phi = random_symbol(OcParams::new(5, 1, 4, 4).unwrap(), 8);
    let base = theta_oc(&phi, 90).unwrap();
    let rhs = qexp_hecke_tl(&base, 3).unwrap();
    let lhs = theta_oc(&phi.hecke_tp(7).unwrap(), 10).unwrap();
    assert!(lhs.first_difference(&rhs).is_some());
}

#[test]
fn lift_interpolates_classical_lifts() {
    let params = OcParams::new(5, 3, 5, 4).unwrap();
    let phi = random_symbol(params, 17);
    let theta = theta_oc(&phi, 20).unwrap();
    let mut nonvanishing = 0;
    for k in 0..=2 {
        let kappa = ArithWeight::new(k, &default_character(15, k), 3, 5).unwrap();
        let report = shintani::shintani::verify::verify_interpolation_with(&phi, &theta, &kappa, 0).unwrap();
        assert!(report.passed(), "{}", report.render());
        let lhs = shintani::shintani::specialize_qexp(&theta, &kappa).unwrap();
        nonvanishing += usize::from(!lhs.is_zero());
    }
    assert!(nonvanishing > 0);
}

#[test]
fn eleven_a_lift_interpolates() {
    let params = OcParams::new(11, 1, 4, 2).unwrap();
    let ring = params.ring();
    let rep = eigensymbols(11, 0, &DirichletChar::trivial(11), SignChoice::Minus, 5).unwrap();
    let phi = symbol_to_zp(&rep.systems[0].symbol, ring).unwrap();
    let (lift, _) = lift_eigensymbol(params, &phi, &ArithWeight::trivial(0, 1, 11), &ring.one()).unwrap();
    let kappa = ArithWeight::new(0, &default_character(11, 0), 1, 11).unwrap();
    let report = verify_interpolation(&lift, &kappa, 20, 0).unwrap();
    assert!(report.passed(), "{}", report.render());
    let lhs = shintani::shintani::specialize_qexp(&theta_oc(&lift, 20).unwrap(), &kappa).unwrap();
    assert!(!lhs.is_zero());
}

#[test]
fn json_lists_nonzero_coefficients() {
    let phi = random_symbol(OcParams::new(5, 1, 3, 2).unwrap(), 2);
    let theta: FormalQExp = theta_oc(&phi, 8).unwrap();
    let v = theta.to_json();
    assert_eq!(v["nmax"], 8);
    let listed = v["coeffs"].as_array().unwrap().len();
    assert_eq!(listed, theta.coeffs.iter().filter(|c| !c.is_zero()).count());
}
