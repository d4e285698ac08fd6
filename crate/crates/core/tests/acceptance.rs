//! One PASS/FAIL line per acceptance criterion.

use std::time::{Duration, Instant};

use hotring::corpus::{self, tower};
use hotring::glk::{kv1_approx, monotone_history, Kv1Options};
use hotring::homotopy::{homotopy_classes, path_contraction, search_elementary};
use hotring::k0::k0_presentation;
use hotring::lattice::cokernel_invariants;
use hotring::poly::{Endpoint, Var};
use hotring::ring::{enumerate_homs, Ring, RingHom};
use hotring::simplex::{simplicial_suite, sigma, swap_homotopy, tau};
use hotring::triangle::{octahedron, Factorization, FinitePuppe, MappingPath};
use hotring::vring::{HomExpr, VirtualHom, VirtualRing};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn simplicial_identities() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for (name, r) in corpus::rings() {
        let rep = simplicial_suite(&r, 4, 0, 1000, &mut rng(1)).map_err(|e| format!("{name}: {e}"))?;
        checks += rep.identity_checks;
    }
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{checks} family checks in {:.1}s", t.as_secs_f64()))
}

fn vertex_split() -> Outcome {
    let mut checks = 0;
    for (name, r) in corpus::rings() {
        let rep = simplicial_suite(&r, 0, 3, 300, &mut rng(2)).map_err(|e| format!("{name}: {e}"))?;
        checks += rep.lemma_checks;
    }
    Ok(format!("{checks} probes, n <= 3"))
}

fn contractibility() -> Outcome {
    let (x, y) = (Var::named("x"), Var::named("y"));
    for (name, r) in corpus::rings() {
        let probes = VirtualRing::path(&r, x).probes(&mut rng(3), 200, 4).map_err(err)?;
        path_contraction(&r, x, y).verify_on(&probes).map_err(|e| format!("{name}: {e}"))?;
    }
    let r = corpus::ring("sq0_z2");
    let c = search_elementary(&RingHom::identity(r.clone()), &RingHom::zero(r.clone(), r), 1, 1 << 20)
        .map_err(err)?
        .found()
        .ok_or("no degree-1 homotopy id ~ 0 on sq0_z2")?;
    c.verify().map_err(err)?;
    Ok("E R contracts for every corpus ring; id ~ 0 found on sq0_z2 at d = 1".into())
}

fn kv1_values() -> Outcome {
    let opts = Kv1Options::default();
    let mut notes = Vec::new();
    let timed = |a: &Ring, d: u32| -> Result<_, String> {
        let start = Instant::now();
        let p = kv1_approx(a, 2, d, &opts).map_err(err)?;
        if start.elapsed() > Duration::from_secs(300) {
            return Err(format!("{} took {:?}", a.label(), start.elapsed()));
        }
        Ok(p)
    };
    for name in ["sq0_z2", "sq0_z3", "sq0_z2_squared", "f2_unital"] {
        let p = timed(&corpus::ring(name), 1)?;
        if p.order != 1 {
            return Err(format!("{name}: order {}", p.order));
        }
    }
    let f3 = timed(&corpus::ring("f3_unital"), 1)?;
    let det = f3.determinant.as_ref().ok_or("no determinant certificate for F3")?;
    if f3.order != 2 || !det.exact || det.image_size != 2 {
        return Err(format!("F3: order {}, determinant {det:?}", f3.order));
    }
    notes.push("F3 order 2 certified by det".to_string());
    for name in ["sq0_z2", "sq0_z3"] {
        let h = monotone_history(&corpus::ring(name), 2, 2, &opts).map_err(err)?;
        if h.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("{name}: history {h:?} increases"));
        }
    }
    notes.push("square-zero and F2 trivial; monotone for d = 1, 2".into());
    Ok(notes.join("; "))
}

fn factorization() -> Outcome {
    let rings: Vec<Ring> = corpus::rings().into_iter().map(|(_, r)| r).collect();
    let mut homs = Vec::new();
    'outer: for a in &rings {
        for b in &rings {
            for h in enumerate_homs(a, b, 1 << 16).map_err(err)? {
                homs.push(h);
                if homs.len() == 200 {
                    break 'outer;
                }
            }
        }
    }
    let mut r = rng(5);
    for (i, u) in homs.iter().enumerate() {
        Factorization::new(u, Var::named("x"))
            .verify(&mut r, 40)
            .map_err(|e| format!("hom {i} {} -> {}: {e}", u.source().label(), u.target().label()))?;
    }
    Ok(format!("{} homs", homs.len()))
}

fn puppe_exactness() -> Outcome {
    let t = tower();
    let mut notes = Vec::new();
    for g in [&t.k, &t.h] {
        MappingPath::of_hom(g, Var::named("x")).verify(&mut rng(6), 200).map_err(err)?;
        let fp = FinitePuppe::new(g, 2).map_err(err)?;
        fp.check_composites().map_err(err)?;
        for x in ["sq0_z2", "f2_unital"] {
            let ex = fp.exactness(&corpus::ring(x), 1, 1 << 20).map_err(err)?;
            if !(ex.at_b && ex.at_pg) {
                return Err(format!("{} with X = {x}: {ex:?}", g.source().label()));
            }
        }
        notes.push(format!("|P(g)| = {}, |P(g1)| = {}", fp.stages[0].ring().order(), fp.stages[1].ring().order()));
    }
    Ok(notes.join("; "))
}

fn octahedron_identities() -> Outcome {
    let t = tower();
    let o = octahedron(&t.h, &t.k).map_err(err)?;
    let a = o.verify_intensional(&mut rng(7), 500).map_err(err)?;
    let b = o.verify_finite(2).map_err(err)?;
    if !a.exact_row {
        return Err("A -> F -> E is not exact".into());
    }
    Ok(format!("{} probe checks, {} exhaustive checks at level 2", a.checked, b.checked))
}

fn sigma_tau() -> Outcome {
    let (x, y, s) = (Var::named("x"), Var::named("y"), Var::named("s"));
    for name in ["sq0_z3", "f3_unital", "upper3_f2"] {
        let r = corpus::ring(name);
        let om2 = VirtualRing::loops(&r, x).loop_of(y);
        let probes = om2.probes(&mut rng(8), 1000, 3).map_err(err)?;
        let hom = |e: HomExpr| VirtualHom::new(om2.clone(), om2.clone(), e);
        hom(sigma(x).then(sigma(x))).agrees_with(&HomExpr::Identity, &probes).map_err(|e| format!("σ²: {e}"))?;
        hom(tau(x, y).then(tau(x, y))).agrees_with(&HomExpr::Identity, &probes).map_err(|e| format!("τ²: {e}"))?;
        let h = swap_homotopy(x, y, s);
        hom(h.clone().then(HomExpr::Eval(s, Endpoint::Zero))).agrees_with(&tau(x, y), &probes).map_err(|e| format!("s = 0: {e}"))?;
        hom(h.then(HomExpr::Eval(s, Endpoint::One))).agrees_with(&HomExpr::Identity, &probes).map_err(|e| format!("s = 1: {e}"))?;
    }
    Ok("1000 probes on three rings".into())
}

fn k0_loop() -> Outcome {
    let p = k0_presentation(&corpus::k0_loop()).map_err(err)?;
    if p.rank != 1 || !p.torsion.is_empty() {
        return Err(format!("rank {}, torsion {:?}", p.rank, p.torsion));
    }
    if p.class_of(&[("OA", 1), ("A", 1)]).map_err(err)? != vec![BigInt::from(0)] {
        return Err("[ΩA] + [A] != 0".into());
    }
    let n = p.classes.len();
    let base = cokernel_invariants(&to_big(&p.relations), n);
    let mut r = rng(9);
    for _ in 0..10 {
        let mut rows = p.relations.clone();
        rows.shuffle(&mut r);
        for row in rows.iter_mut() {
            if r.gen_bool(0.5) {
                row.iter_mut().for_each(|c| *c = -*c);
            }
        }
        if cokernel_invariants(&to_big(&rows), n) != base {
            return Err(format!("invariants changed under {rows:?}"));
        }
    }
    Ok("rank 1, [ΩA] = -[A], stable under 10 shuffles".into())
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect()
}

fn class_soundness() -> Outcome {
    let mut runs = 0;
    for (s, t) in [("sq0_z2", "sq0_z2"), ("sq0_z3", "sq0_z3"), ("f2_unital", "graded_f2"), ("graded_f2", "graded_f2"), ("two_z8", "z4_unital")] {
        for d in 1..=2 {
            let c = homotopy_classes(&corpus::ring(s), &corpus::ring(t), d, 1 << 20).map_err(err)?;
            c.verify().map_err(|e| format!("{s} -> {t} at d = {d}: {e}"))?;
            runs += 1;
        }
    }
    let f2 = corpus::ring("f2_unital");
    for d in 1..=3 {
        let c = homotopy_classes(&f2, &f2, d, 1 << 20).map_err(err)?;
        c.verify().map_err(err)?;
        if c.class_count() != 2 {
            return Err(format!("F2 -> F2 has {} classes at d = {d}", c.class_count()));
        }
        runs += 1;
    }
    Ok(format!("{runs} runs re-verified; F2 -> F2 has 2 classes for d = 1..3"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("simplicial identities", simplicial_identities),
        ("vertex-split witness", vertex_split),
        ("contractibility", contractibility),
        ("KV1 values", kv1_values),
        ("factorization contract", factorization),
        ("Puppe exactness", puppe_exactness),
        ("octahedron", octahedron_identities),
        ("sigma/tau algebra", sigma_tau),
        ("K0 loop relation", k0_loop),
        ("homotopy-class soundness", class_soundness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(note) => println!("PASS {:>2} {name}: {note}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
