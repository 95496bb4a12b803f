// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use shintani::arith::linalg;
use shintani::arith::{DirichletChar, Divisor0, Mat2, RationalCusp, Rationals};
use shintani::modsym::{
    act_on_poly, eigensymbols, solve_symbol_space, ModularSymbol, SignChoice, SymbolSpace,
};

type Q = BigRational;

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn space(m: u64, k: usize) -> SymbolSpace<Rationals> {
    solve_symbol_space(m, k, &DirichletChar::trivial(m), Rationals).unwrap()
}

/// Relation-matrix nullity computed from scratch: cosets are found by
/// brute-force search over bottom rows, and the action uses plain i64
/// binomial expansion in the monomial basis of the dual module.
fn independent_dimension(m: i64, k: usize) -> usize {
    let same = |a: (i64, i64), b: (i64, i64)| {
        (1..=m.max(1)).any(|u| num_integer::Integer::gcd(&u, &m) == 1 && (u * a.0 - b.0).rem_euclid(m) == 0 && (u * a.1 - b.1).rem_euclid(m) == 0)
    };
    let mut reps: Vec<(i64, i64)> = Vec::new();
    for c in 0..m.max(1) {
        for d in 0..m.max(1) {
            let g = num_integer::Integer::gcd(&num_integer::Integer::gcd(&c, &d), &m);
            if g == 1 && !reps.iter().any(|r| same(*r, (c, d))) {
                reps.push((c, d));
            }
        }
    }
    if m == 1 {
        reps = vec![(0, 1)];
    }
    let find = |c: i64, d: i64| reps.iter().position(|r| same(*r, (c.rem_euclid(m.max(1)), d.rem_euclid(m.max(1))))).unwrap();
    // lift each rep to SL2
    let lift = |(c, d): (i64, i64)| -> [i64; 4] {
        let mut dd = d;
        while num_integer::Integer::gcd(&c, &dd) != 1 {
            dd += m;
        }
        let (c, d) = (c, dd);
        for a in -200i64..200 {
            if (a * d - 1) % c.max(1) == 0 || c == 0 {
                if c == 0 {
                    return [1, 0, 0, 1].map(|x| x * d.signum());
                }
                let b = (a * d - 1) / c;
                return [a, b, c, d];
            }
        }
        unreachable!()
    };
    let mats: Vec<[i64; 4]> = reps.iter().map(|r| lift(*r)).collect();
    let mul = |x: [i64; 4], y: [i64; 4]| [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]];
    let inv = |x: [i64; 4]| [x[3], -x[1], -x[2], x[0]];
    // dual-side action P -> P((X,Y) h^{-1}) written in monomials X^{k-j} Y^j;
    // the dual of the L-module action transposes, which preserves the nullity
    let act = |h: [i64; 4]| -> Vec<Vec<Q>> {
        let g = inv(h);
        let (p, q, r, s) = (g[0], g[2], g[1], g[3]);
        let mut out = vec![vec![qi(0); k + 1]; k + 1];
        for j in 0..=k {
            // (pX + qY)^{k-j} (rX + sY)^j
            let mut poly = vec![qi(0); k + 1];
            poly[0] = qi(1);
            let mut deg = 0;
            for f in 0..k {
                let (u, v) = if f < k - j { (p, q) } else { (r, s) };
                let mut next = vec![qi(0); k + 1];
                for t in 0..=deg {
                    next[t] += &poly[t] * qi(u);
                    next[t + 1] += &poly[t] * qi(v);
                }
                poly = next;
                deg += 1;
            }
            for t in 0..=k {
                out[t][j] = poly[t].clone();
            }
        }
        out
    };
    let n = reps.len();
    let w = k + 1;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let s = [0, -1, 1, 0];
    let tau = [0, -1, 1, -1];
    let term = |g: [i64; 4]| -> (usize, [i64; 4]) {
        let j = find(g[2], g[3]);
        (j, mul(mats[j], inv(g)))
    };
    for i in 0..n {
        let g = mats[i];
        let id = [1, 0, 0, 1];
        let rels = vec![
            vec![(i, id, 1), { let (j, h) = term(mul(g, s)); (j, h, 1) }],
            vec![(i, id, 1), { let (j, h) = term(mul(g, tau)); (j, h, 1) }, { let (j, h) = term(mul(g, mul(tau, tau))); (j, h, 1) }],
            vec![(i, id, 1), (i, [-1, 0, 0, -1], -1)],
        ];
        for rel in rels {
            let mut block = vec![vec![qi(0); n * w]; w];
            for (j, h, c) in rel {
                let a = act(h);
                for r in 0..w {
                    for t in 0..w {
                        block[r][j * w + t] += &a[r][t] * qi(c);
                    }
                }
            }
            rows.extend(block);
        }
    }
    linalg::kernel(&Rationals, &rows, n * w).dimension()
}

#[test]
fn dimensions() {
    assert_eq!(space(11, 0).dimension(), 3);
    // one cusp and genus zero: no invariant maps on degree-zero divisors
    assert_eq!(space(1, 0).dimension(), 0);
    assert_eq!(independent_dimension(1, 0), 0);
    assert_eq!(space(5, 2).dimension(), independent_dimension(5, 2));
    assert_eq!(space(11, 0).dimension(), independent_dimension(11, 0));
    assert_eq!(space(7, 2).dimension(), independent_dimension(7, 2));
    assert_eq!(space(5, 2).dimension(), 4);
}

#[test]
fn bad_characteristic() {
    let r = shintani::arith::ZpRing::new(5, 3).unwrap();
    assert!(solve_symbol_space(11, 0, &DirichletChar::trivial(11), r).is_ok());
}

fn random_gamma0(m: i64, seed: u64) -> Mat2 {
    let mut g = Mat2::identity();
    let mut x = seed;
    for _ in 0..8 {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let t = ((x >> 33) % 7) as i64 - 3;
        let step = if (x >> 20) % 2 == 0 { Mat2::new(1, t, 0, 1) } else { Mat2::new(1, 0, m * t, 1) };
        g = g.mul(&step);
    }
    g
}

#[test]
fn basis_symbols_are_invariant() {
    for (m, k) in [(11u64, 0usize), (5, 2), (5, 1)] {
        let sp = solve_symbol_space(m, k, &DirichletChar::trivial(m), Rationals).unwrap();
        for b in &sp.basis {
            assert!(b.satisfies_relations());
            for seed in 0..20 {
                let g = random_gamma0(m as i64, seed);
                assert_eq!(&b.act_gamma(&g).unwrap(), b, "M={m} k={k} g={g}");
            }
        }
    }
}

#[test]
fn evaluation_transforms_under_gamma0() {
    let sp = space(5, 2);
    let chi = DirichletChar::trivial(5);
    let d = Divisor0::path(RationalCusp::new(2, 7).unwrap(), RationalCusp::new(-3, 11).unwrap());
    for b in &sp.basis {
        for seed in 0..10 {
            let g = random_gamma0(5, seed);
            let lhs = act_on_poly(&Rationals, &b.evaluate(&d.act(&g)).unwrap(), &g, 5, &chi).unwrap();
            assert_eq!(lhs, b.evaluate(&d).unwrap());
        }
        assert!(b.evaluate(&Divisor0::zero()).unwrap().coeffs.iter().all(|c| c.is_zero()));
    }
}

#[test]
fn hecke_operators_commute_and_iota_is_involutive() {
    for (m, k) in [(11u64, 0usize), (5, 2)] {
        let sp = space(m, k);
        let t2 = sp.operator_matrix(|s| s.hecke_tp(2)).unwrap();
        let t3 = sp.operator_matrix(|s| s.hecke_tp(3)).unwrap();
        assert_eq!(linalg::mat_mul(&Rationals, &t2, &t3), linalg::mat_mul(&Rationals, &t3, &t2));
        for b in &sp.basis {
            assert_eq!(&b.iota().iota(), b);
            let (p, mi) = b.involution_split().unwrap();
            assert_eq!(&p.add(&mi), b);
            assert_eq!(p.iota(), p);
            assert_eq!(mi.iota(), mi.scale(&qi(-1)));
            assert_eq!(&b.hecke_tn(6).unwrap(), &b.hecke_tp(2).unwrap().hecke_tp(3).unwrap());
        }
    }
}

#[test]
fn tll_is_trivial_in_weight_two() {
    let sp = space(11, 0);
    for b in &sp.basis {
        assert_eq!(&b.hecke_tll(3).unwrap(), b);
    }
    assert!(sp.basis[0].hecke_tll(11).is_err());
    assert!(sp.basis[0].hecke_up(3).is_err());
}

#[test]
fn level_eleven_eigensystems() {
    let rep = eigensymbols(11, 0, &DirichletChar::trivial(11), SignChoice::Minus, 7).unwrap();
    assert_eq!(rep.systems.len(), 1);
    let sys = &rep.systems[0];
    let want = [(2u64, -2i64), (3, -1), (5, 1), (7, -2)];
    for (l, a) in want {
        assert_eq!(sys.eigenvalues[&l], qi(a), "a_{l}");
    }
    // the symbol really is an eigenvector of T_2
    let s: &ModularSymbol<Rationals> = &sys.symbol;
    assert_eq!(s.hecke_tp(2).unwrap(), s.scale(&qi(-2)));
    assert_eq!(&s.hecke_up(11).unwrap(), s);

    let plus = eigensymbols(11, 0, &DirichletChar::trivial(11), SignChoice::Plus, 7).unwrap();
    assert!(plus.systems.iter().any(|s| s.eigenvalues[&2] == qi(3) && s.eigenvalues[&7] == qi(8)));
    assert!(plus.systems.iter().any(|s| s.eigenvalues[&2] == qi(-2)));
}

#[test]
fn level_five_weight_four() {
    let rep = eigensymbols(5, 2, &DirichletChar::trivial(5), SignChoice::Minus, 7).unwrap();
    let cusp: Vec<_> = rep.systems.iter().filter(|s| s.eigenvalues[&2] != qi(9)).collect();
    assert_eq!(cusp.len(), 1);
    // the weight-4 newform of level 5 has a_2 = -4, a_3 = 2
    assert_eq!(cusp[0].eigenvalues[&2], qi(-4));
    assert_eq!(cusp[0].eigenvalues[&3], qi(2));
}

#[test]
fn up_has_unit_eigenvalue_on_11a() {
    let sp = space(11, 0);
    let u = sp.operator_matrix(|s| s.hecke_up(11)).unwrap();
    let cp = linalg::charpoly(&Rationals, &u);
    let at_one: Q = cp.iter().fold(Q::zero(), |a, c| a + c);
    assert!(at_one.is_zero());
    let _ = BigInt::from(0);
}
