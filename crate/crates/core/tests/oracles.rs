//! Derived values against independent brute-force oracles.

use hotring::corpus::{self, tower};
use hotring::glk::{kv1_approx, Kv1Options};
use hotring::homotopy::{homotopy_classes, search_homotopy_equivalence};
use hotring::k0::{k0_presentation, K0Diagram};
use hotring::lattice::cokernel_invariants;
use hotring::poly::{loop_factor, Endpoint, PolyElem, Var};
use hotring::ring::{enumerate_homs, FiniteRing, Ring, RingElem, RingHom, RingSpec};
use hotring::simplex::swap_homotopy;
use hotring::triangle::{rotation_homotopy, FinitePuppe};
use hotring::vring::{HomExpr, VirtualElem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_rings() -> Vec<Ring> {
    corpus::rings().into_iter().map(|(_, r)| r).filter(|r| r.order() <= 16).collect()
}

/// Counts additive multiplicative maps by checking every element pair.
fn brute_hom_count(r: &Ring, s: &Ring) -> usize {
    let elems: Vec<RingElem> = r.elements().collect();
    let targets: Vec<RingElem> = s.elements().collect();
    let mut count = 0;
    let mut idx = vec![0usize; r.rank()];
    'search: loop {
        let images: Vec<RingElem> = idx.iter().map(|&i| targets[i].clone()).collect();
        let f = |a: &RingElem| {
            a.coords().iter().zip(&images).fold(s.zero(), |acc, (&c, img)| s.add(&acc, &s.scale_i64(img, c)))
        };
        let additive = (0..r.rank()).all(|i| s.scale_i64(&images[i], r.orders()[i]).is_zero_elem());
        if additive && elems.iter().all(|a| elems.iter().all(|b| f(&r.mul(a, b)) == s.mul(&f(a), &f(b)))) {
            count += 1;
        }
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < targets.len() {
                continue 'search;
            }
            idx[pos] = 0;
        }
        break;
    }
    count
}

#[test]
fn hom_counts_match_brute_force() {
    let rings = small_rings();
    for r in &rings {
        for s in &rings {
            if s.order().pow(r.rank() as u32) > 4096 {
                continue;
            }
            let homs = enumerate_homs(r, s, 1 << 20).unwrap();
            assert_eq!(homs.len(), brute_hom_count(r, s), "{} -> {}", r.label(), s.label());
        }
    }
}

#[test]
fn square_zero_homs_are_all_additive_maps() {
    // every additive map between square-zero rings is multiplicative
    let (a, b) = (corpus::ring("sq0_z2_squared"), corpus::ring("sq0_z2"));
    assert_eq!(enumerate_homs(&a, &b, 1 << 20).unwrap().len(), 4);
    assert_eq!(enumerate_homs(&corpus::ring("sq0_z3"), &corpus::ring("sq0_z3"), 1 << 20).unwrap().len(), 3);
}

fn det2(m: &[i64; 4], p: i64) -> i64 {
    (m[0] * m[3] - m[1] * m[2]).rem_euclid(p)
}

/// `(|GL_2|, |SL_2|)` over `F_p` through `I + M`.
fn gl_sl_counts(p: i64) -> (usize, usize) {
    let mut gl = 0;
    let mut sl = 0;
    for code in 0..p.pow(4) {
        let m = [code % p, code / p % p, code / (p * p) % p, code / (p * p * p)];
        let shifted = [(1 + m[0]) % p, m[1], m[2], (1 + m[3]) % p];
        match det2(&shifted, p) {
            0 => {}
            1 => {
                gl += 1;
                sl += 1;
            }
            _ => gl += 1,
        }
    }
    (gl, sl)
}

#[test]
fn kv1_subgroup_is_det_one() {
    for (name, p) in [("f2_unital", 2), ("f3_unital", 3)] {
        let (gl, sl) = gl_sl_counts(p);
        let pres = kv1_approx(&corpus::ring(name), 2, 1, &Kv1Options::default()).unwrap();
        assert_eq!(pres.gl_order, gl, "{name}");
        assert_eq!(pres.subgroup_order, sl, "{name}");
        assert_eq!(pres.order, gl / sl, "{name}");
    }
    assert_eq!(gl_sl_counts(3), (48, 24));
}

fn idempotents(r: &Ring) -> usize {
    r.elements().filter(|e| &r.mul(e, e) == e).count()
}

#[test]
fn reduced_unital_classes_are_idempotents() {
    // over a reduced ring the only idempotents of R[x] are constant, and a
    // hom out of F_p is fixed by the idempotent it sends 1 to
    for name in ["f2_unital", "f3_unital"] {
        let r = corpus::ring(name);
        for d in 1..=2 {
            let c = homotopy_classes(&r, &r, d, 1 << 20).unwrap();
            c.verify().unwrap();
            assert_eq!(c.class_count(), idempotents(&r), "{name} at d = {d}");
        }
    }
}

fn minors(m: &[Vec<i64>], k: usize) -> Vec<BigInt> {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        if m.is_empty() {
            return BigInt::from(1);
        }
        (0..m.len())
            .map(|j| {
                let sub: Vec<Vec<BigInt>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
                let sign = if j % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                sign * &m[0][j] * det(&sub)
            })
            .sum()
    }
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for rows in subsets(m.len(), k) {
        for cols in subsets(ncols, k) {
            let sub: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
            out.push(det(&sub));
        }
    }
    out
}

/// Invariant factors from gcds of minors: `d_k = D_k / D_(k-1)`.
fn determinantal_invariants(m: &[Vec<i64>], ncols: usize) -> (usize, Vec<BigInt>) {
    let mut prev = BigInt::from(1);
    let mut factors = Vec::new();
    for k in 1..=m.len().min(ncols) {
        let g = minors(m, k).iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        if g.is_zero() {
            break;
        }
        factors.push(&g / &prev);
        prev = g;
    }
    let rank = ncols - factors.len();
    (rank, factors.into_iter().filter(|d| d != &BigInt::from(1)).collect())
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=3);
        let cols = rng.gen_range(1..=4);
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let (rank, torsion) = cokernel_invariants(&big, cols);
        let torsion: Vec<BigInt> = torsion.into_iter().map(|t| t.abs()).collect();
        assert_eq!((rank, torsion), determinantal_invariants(&m, cols), "{m:?}");
    }
}

#[test]
fn k0_square_relation() {
    // K -> P -> B and K -> C -> A give [P] - [B] = [C] - [A]
    let s = |x: &str| x.to_string();
    let d = K0Diagram {
        objects: ["A", "B", "C", "P", "K"].map(s).to_vec(),
        weak_equivalences: vec![],
        fibration_sequences: vec![(s("K"), s("P"), s("B")), (s("K"), s("C"), s("A"))],
    };
    let p = k0_presentation(&d).unwrap();
    assert_eq!((p.rank, p.torsion.len()), (3, 0));
    let zero = vec![BigInt::zero(); 3];
    assert_eq!(p.class_of(&[("P", 1), ("B", -1), ("C", -1), ("A", 1)]).unwrap(), zero);
    assert_ne!(p.class_of(&[("P", 1), ("B", -1)]).unwrap(), zero);
}

fn x() -> Var {
    Var::named("x")
}

fn y() -> Var {
    Var::named("y")
}

/// `(x² - x)(y² - y)` over `r`, times the constant `c`.
fn double_loop(r: &Ring, c: &RingElem) -> PolyElem {
    let f = loop_factor(x()).mul(&loop_factor(y()));
    PolyElem::constant(r, c.clone()).mul_int(&f)
}

#[test]
fn swap_homotopy_is_additive_not_multiplicative() {
    let f3 = corpus::ring("f3_unital");
    let h = swap_homotopy(x(), y(), Var::named("s"));
    let one = f3.unit().unwrap().clone();
    let f = VirtualElem::Poly(double_loop(&f3, &one));
    let two = VirtualElem::Poly(double_loop(&f3, &f3.add(&one, &one)));
    let hf = h.apply(&f).unwrap();
    assert_eq!(h.apply(&f.add(&f).unwrap()).unwrap(), hf.add(&hf).unwrap());
    assert_eq!(h.apply(&two).unwrap(), hf.add(&hf).unwrap());
    assert_ne!(h.apply(&f.mul(&f).unwrap()).unwrap(), hf.mul(&hf).unwrap());
}

fn elem(r: &Ring, c: &[i64]) -> RingElem {
    r.elem(c)
}

#[test]
fn rotation_homotopy_endpoints_by_hand() {
    let t = tower();
    let g = &t.k;
    let b = g.source();
    let c = elem(b, &[1, 1]);
    // a = (x² - x) c is fixed by x -> 1 - x
    let a_poly = PolyElem::constant(b, c.clone()).mul_int(&loop_factor(x()));
    let a = VirtualElem::Poly(a_poly.clone());
    let cert = rotation_homotopy(g, x(), y());
    let at = |e: Endpoint| cert.h.clone().then(HomExpr::Eval(y(), e)).apply(&a).unwrap();
    let zero_b = VirtualElem::Poly(PolyElem::zero(b));
    let zero_c = VirtualElem::Poly(PolyElem::zero(g.target()));
    let kappa = VirtualElem::pair(VirtualElem::pair(zero_b.clone(), zero_c), a.clone());
    let g_a = VirtualElem::Poly(a_poly.map_coeffs(g.target(), |e| g.apply(e)));
    let nu = VirtualElem::pair(VirtualElem::pair(zero_b.clone(), g_a), zero_b);
    assert_eq!(at(Endpoint::Zero), kappa);
    assert_eq!(at(Endpoint::One), nu);
    assert_eq!(cert.f0.apply(&a).unwrap(), kappa);
    assert_eq!(cert.f1.apply(&a).unwrap(), nu);
}

#[test]
fn finite_puppe_orders() {
    // |E B| = |B|^(2m-1) at level m, and E B -> B is onto, so
    // |P(g)| = |A| |B|^(2m-2)
    let m = 2u32;
    let t = tower();
    for g in [&t.k, &t.h] {
        let (a, b) = (g.source().order(), g.target().order());
        let pg = a * b.pow(2 * m - 2);
        let pg1 = pg * a.pow(2 * m - 2);
        let fp = FinitePuppe::new(g, m as usize).unwrap();
        assert_eq!(fp.stages[0].ring().order(), pg);
        assert_eq!(fp.stages[1].ring().order(), pg1);
    }
    assert_eq!(FinitePuppe::new(&t.k, 2).unwrap().stages[1].ring().order(), 256);
}

#[test]
fn graded_inclusion_is_an_equivalence() {
    let f2 = corpus::ring("f2_unital");
    let graded = corpus::ring("graded_f2");
    let incl = RingHom::new(f2.clone(), graded.clone(), vec![graded.unit().unwrap().clone()]).unwrap();
    let eq = search_homotopy_equivalence(&incl, 2, 1 << 20, 4).unwrap().found().expect("equivalence at d = 2");
    eq.fg.verify().unwrap();
    eq.gf.verify().unwrap();
    let proj = RingHom::new(graded.clone(), f2.clone(), vec![f2.elem(&[1]), f2.elem(&[0])]).unwrap();
    assert_eq!(eq.inverse, proj);
}

#[test]
fn malformed_rings_are_rejected() {
    let spec = RingSpec {
        label: "bad".into(),
        orders: vec![2, 2],
        mul: vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]],
        unit: None,
    };
    assert!(FiniteRing::new(spec.clone()).is_ok());
    // g1 g1 = g2, g2 g1 = g1: (g1 g1) g1 = g1 but g1 (g1 g1) = 0
    let nonassoc = RingSpec { mul: vec![vec![vec![0, 1], vec![0, 0]], vec![vec![1, 0], vec![0, 0]]], ..spec };
    assert!(FiniteRing::new(nonassoc).is_err());
}
