//! Invariants as property tests.

use hotring::corpus;
use hotring::glk::gl_group;
use hotring::homotopy::{homotopy_classes, search_elementary};
use hotring::k0::{k0_presentation, K0Diagram};
use hotring::lattice::cokernel_invariants;
use hotring::poly::{PolyElem, Var};
use hotring::ring::{enumerate_homs, Ring, RingHom};
use hotring::simplex::{sigma, tau};
use hotring::triangle::Factorization;
use hotring::vring::{HomExpr, VirtualElem};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring_at(i: usize) -> Ring {
    let rs = corpus::rings();
    rs[i % rs.len()].1.clone()
}

fn random_poly(r: &Ring, vars: &[Var], seed: u64) -> PolyElem {
    PolyElem::random(r, vars, 3, 4, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn xy() -> [Var; 2] {
    [Var::named("x"), Var::named("y")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(ri in 0usize..11, s in any::<u64>()) {
        let r = ring_at(ri);
        let vs = xy();
        let (a, b, c) = (random_poly(&r, &vs, s), random_poly(&r, &vs, s ^ 1), random_poly(&r, &vs, s ^ 2));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
    }

    #[test]
    fn sigma_and_tau_are_involutions(ri in 0usize..11, s in any::<u64>()) {
        let r = ring_at(ri);
        let [x, y] = xy();
        let p = VirtualElem::Poly(random_poly(&r, &[x, y], s));
        let twice = |e: HomExpr| e.clone().then(e).apply(&p).unwrap();
        prop_assert_eq!(twice(sigma(x)), p.clone());
        prop_assert_eq!(twice(tau(x, y)), p.clone());
        let q = VirtualElem::Poly(random_poly(&r, &[x, y], !s));
        prop_assert_eq!(sigma(x).apply(&p.mul(&q).unwrap()).unwrap(), sigma(x).apply(&p).unwrap().mul(&sigma(x).apply(&q).unwrap()).unwrap());
    }

    #[test]
    fn certificates_reverse(i in 0usize..64, j in 0usize..64) {
        let r = corpus::ring("sq0_z2_squared");
        let homs = enumerate_homs(&r, &r, 1 << 20).unwrap();
        let (f0, f1) = (&homs[i % homs.len()], &homs[j % homs.len()]);
        if let Some(c) = search_elementary(f0, f1, 1, 1 << 20).unwrap().found() {
            c.verify().unwrap();
            let back = c.reversed();
            back.verify().unwrap();
            prop_assert_eq!((&back.f0, &back.f1), (&c.f1, &c.f0));
            prop_assert_eq!(&back.reversed().images, &c.images);
        }
    }

    #[test]
    fn k0_invariant_under_unimodular_row_ops(ops in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..8)) {
        let s = |x: &str| x.to_string();
        let d = K0Diagram {
            objects: ["A", "B", "E"].map(s).to_vec(),
            weak_equivalences: vec![(s("E"), s("B"))],
            fibration_sequences: vec![(s("A"), s("E"), s("B")), (s("A"), s("B"), s("A"))],
        };
        let p = k0_presentation(&d).unwrap();
        let n = p.classes.len();
        let big = |rows: &[Vec<i64>]| -> Vec<Vec<BigInt>> { rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect() };
        let base = cokernel_invariants(&big(&p.relations), n);
        let mut rows = p.relations.clone();
        for (a, b, k) in ops {
            let (a, b) = (a % rows.len(), b % rows.len());
            if a != b {
                let add: Vec<i64> = rows[b].iter().map(|c| c * k).collect();
                rows[a].iter_mut().zip(add).for_each(|(x, y)| *x += y);
            } else {
                rows[a].iter_mut().for_each(|x| *x = -*x);
            }
        }
        prop_assert_eq!(cokernel_invariants(&big(&rows), n), base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn class_count_does_not_grow_with_degree(si in 0usize..11, ti in 0usize..11) {
        let (r, s) = (ring_at(si), ring_at(ti));
        prop_assume!(s.order().pow(r.rank() as u32) <= 64 && s.order() <= 8);
        let c1 = homotopy_classes(&r, &s, 1, 1 << 20).unwrap();
        let c2 = homotopy_classes(&r, &s, 2, 1 << 20).unwrap();
        c2.verify().unwrap();
        prop_assert!(c2.class_count() <= c1.class_count());
    }

    #[test]
    fn gl_circle_group_axioms(p in prop_oneof![Just("f2_unital"), Just("f3_unital"), Just("sq0_z2"), Just("z4_unital")], a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let g = gl_group(&corpus::ring(p), 2, 1 << 20).unwrap();
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inverses[a]), 0);
        prop_assert_eq!(g.mul(g.inverses[a], a), 0);
        prop_assert_eq!(g.mul(0, a), a);
    }

    #[test]
    fn factorization_of_random_homs(si in 0usize..11, ti in 0usize..11, k in any::<usize>(), s in any::<u64>()) {
        let (r, t) = (ring_at(si), ring_at(ti));
        prop_assume!(t.order().pow(r.rank() as u32) <= 1 << 12);
        let homs: Vec<RingHom> = enumerate_homs(&r, &t, 1 << 20).unwrap();
        let u = &homs[k % homs.len()];
        Factorization::new(u, Var::named("x")).verify(&mut ChaCha8Rng::seed_from_u64(s), 20).unwrap();
    }
}
