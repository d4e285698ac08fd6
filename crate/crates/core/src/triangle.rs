//! Fibrations, mapping paths, Puppe sequences and left triangles.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::homotopy::{homotopy_classes, Classes, VirtualCertificate};
use crate::poly::{one_minus, Endpoint, IntPoly, Monomial, PolyElem, Var};
use crate::ring::{kernel, pullback, Ring, RingElem, RingHom, Subring};
use crate::simplex::sigma;
use crate::trunc::{restrict_hom, FinitePath};
use crate::vring::{constant, times_var, HomExpr, Section, VirtualElem, VirtualHom, VirtualRing};

/// Elements to test against: all of them when small, else a random sample.
fn sample<R: Rng + ?Sized>(r: &Ring, rng: &mut R, limit: usize) -> Vec<RingElem> {
    if r.order() <= limit as u128 {
        r.elements().collect()
    } else {
        let mut out = vec![r.zero()];
        out.extend((1..limit).map(|_| r.random_elem(rng)));
        out
    }
}

/// Every variable used anywhere inside a virtual ring.
pub fn all_vars(r: &VirtualRing) -> BTreeSet<Var> {
    match r {
        VirtualRing::Poly { vars, .. } => vars.iter().copied().collect(),
        VirtualRing::Pullback { left, right, .. } => {
            let mut s = all_vars(left);
            s.extend(all_vars(right));
            s
        }
        _ => BTreeSet::new(),
    }
}

/// `x`, `x1`, `x2`, ... : the first not used by `r` nor listed in `avoid`.
pub fn fresh_var(r: &VirtualRing, avoid: &[Var]) -> Var {
    let used = all_vars(r);
    (0..)
        .map(|k| if k == 0 { Var::named("x") } else { Var::named(&format!("x{k}")) })
        .find(|v| !used.contains(v) && !avoid.contains(v))
        .expect("unbounded supply")
}

/// A finite commutative diagram of rings and maps.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub objects: Vec<Ring>,
    pub maps: Vec<RingHom>,
}

#[derive(Clone, Debug)]
pub enum Membership {
    /// every surjection
    Surjections,
    /// the listed maps of the diagram, plus identities
    Marked(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct FibrationFamily {
    pub diagram: Diagram,
    pub membership: Membership,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: u8,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    /// instances examined per axiom
    pub checked: [usize; 4],
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, axiom: u8, detail: String) {
        self.violations.push(Violation { axiom, detail });
    }
}

impl FibrationFamily {
    pub fn surjections(diagram: Diagram) -> Self {
        FibrationFamily { diagram, membership: Membership::Surjections }
    }

    /// Rejects marked maps that are not surjective.
    pub fn marked(diagram: Diagram, marked: Vec<usize>) -> Result<Self> {
        for &i in &marked {
            let f = diagram
                .maps
                .get(i)
                .ok_or_else(|| Error::Dimension(format!("no map {i} in the diagram")))?;
            if !f.is_surjective() {
                return Err(Error::NotSurjective(format!(
                    "marked map {i}: {} -> {}",
                    f.source().label(),
                    f.target().label()
                )));
            }
        }
        Ok(FibrationFamily { diagram, membership: Membership::Marked(marked) })
    }

    pub fn contains(&self, f: &RingHom) -> bool {
        match &self.membership {
            Membership::Surjections => f.is_surjective(),
            Membership::Marked(idx) => {
                (f.source() == f.target() && f == &RingHom::identity(f.source().clone()))
                    || idx.iter().any(|&i| &self.diagram.maps[i] == f)
            }
        }
    }

    fn members(&self) -> Vec<&RingHom> {
        match &self.membership {
            Membership::Surjections => self.diagram.maps.iter().filter(|f| f.is_surjective()).collect(),
            Membership::Marked(idx) => idx.iter().map(|&i| &self.diagram.maps[i]).collect(),
        }
    }

    /// Checks the four axioms on the diagram. Violations are collected;
    /// an `Err` means the checker itself found an inconsistency.
    pub fn check_axioms<R: Rng + ?Sized>(&self, rng: &mut R, probes: usize) -> Result<AxiomReport> {
        let mut rep = AxiomReport::default();
        let members = self.members();

        // R -> 0
        for r in &self.diagram.objects {
            rep.checked[0] += 1;
            let ok = match &self.membership {
                Membership::Surjections => true,
                Membership::Marked(_) => r.order() == 1 || members.iter().any(|f| f.source() == r && f.target().order() == 1),
            };
            if !ok {
                rep.fail(1, format!("{} -> 0 is not a fibration", r.label()));
            }
        }

        // composites and isomorphisms
        for f in &members {
            for g in &members {
                if f.target() != g.source() {
                    continue;
                }
                rep.checked[1] += 1;
                let gf = g.compose(f)?;
                if !self.contains(&gf) {
                    rep.fail(2, format!("composite {} -> {} -> {} is not a fibration", f.source().label(), f.target().label(), g.target().label()));
                }
            }
        }
        for (i, f) in self.diagram.maps.iter().enumerate() {
            if f.is_surjective() && f.is_injective() {
                rep.checked[1] += 1;
                if !self.contains(f) {
                    rep.fail(2, format!("isomorphism {i}: {} -> {} is not marked", f.source().label(), f.target().label()));
                }
            }
        }

        // base change along every map into the target of a fibration
        for g in &members {
            let mut legs: Vec<RingHom> = self.diagram.maps.iter().filter(|f| f.target() == g.target()).cloned().collect();
            legs.push(RingHom::identity(g.target().clone()));
            for f in legs {
                rep.checked[2] += 1;
                let pb = pullback(&f, g)?;
                let by_image = pb.rho.is_surjective();
                if pb.ring.order() <= 1 << 16 && by_image != pb.rho.is_surjective_by_enumeration() {
                    return Err(Error::VerificationFailure(format!("surjectivity tests disagree on the base change of {}", g.source().label())));
                }
                if !by_image {
                    rep.fail(3, format!("base change of {} -> {} along {} is not surjective", g.source().label(), g.target().label(), f.source().label()));
                }
            }
        }

        // factorization of every map
        for f in &self.diagram.maps {
            rep.checked[3] += 1;
            if let Err(e) = Factorization::new(f, Var::named("x")).verify(rng, probes) {
                rep.fail(4, format!("factorization of {} -> {}: {e}", f.source().label(), f.target().label()));
            }
        }
        Ok(rep)
    }
}

/// `u = p ∘ i` through `A' = A x_B B[x]` (the `B[x]` side at `x = 0`), with
/// `i(a) = (a, u(a))` a homotopy equivalence and `p(a, q) = q(1)`
/// surjective.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub u: RingHom,
    pub var: Var,
    pub a_prime: VirtualRing,
}

impl Factorization {
    pub fn new(u: &RingHom, var: Var) -> Self {
        let a_prime = VirtualRing::pullback(
            VirtualRing::finite(u.source()),
            VirtualRing::poly(u.target(), var),
            HomExpr::Coeff(u.clone()),
            HomExpr::Eval(var, Endpoint::Zero),
            Section::MulInt(IntPoly::one()),
        );
        Factorization { u: u.clone(), var, a_prime }
    }

    pub fn i(&self) -> HomExpr {
        HomExpr::pair(HomExpr::Identity, HomExpr::Coeff(self.u.clone()))
    }

    pub fn p(&self) -> HomExpr {
        HomExpr::Snd.then(HomExpr::Eval(self.var, Endpoint::One))
    }

    /// Retraction of `i`.
    pub fn iota2(&self) -> HomExpr {
        HomExpr::Fst
    }

    /// `(0, b x)`, sent to `b` by `p`.
    pub fn preimage(&self, b: &RingElem) -> VirtualElem {
        VirtualElem::pair(constant(self.u.source(), self.u.source().zero()), times_var(self.u.target(), b.clone(), self.var))
    }

    /// `(a, q) -> (a, q(xy))`, from `i ∘ ι2` to the identity.
    pub fn splitting(&self, y: Var) -> VirtualCertificate {
        let xy = IntPoly::var(self.var).mul(&IntPoly::var(y));
        VirtualCertificate {
            source: self.a_prime.clone(),
            target: self.a_prime.clone(),
            var: y,
            h: HomExpr::pair(HomExpr::Fst, HomExpr::Snd.then(HomExpr::subst1(self.var, xy))),
            f0: self.iota2().then(self.i()),
            f1: HomExpr::Identity,
        }
    }

    pub fn verify<R: Rng + ?Sized>(&self, rng: &mut R, probes: usize) -> Result<()> {
        let (a, b) = (self.u.source(), self.u.target());
        let fin_a = VirtualRing::finite(a);
        let fin_b = VirtualRing::finite(b);
        let elems: Vec<VirtualElem> = sample(a, rng, 4096).into_iter().map(|x| constant(a, x)).collect();
        VirtualHom::new(fin_a.clone(), self.a_prime.clone(), self.i()).check_on(&elems)?;
        VirtualHom::new(fin_a.clone(), fin_b.clone(), self.i().then(self.p())).agrees_with(&HomExpr::Coeff(self.u.clone()), &elems)?;
        VirtualHom::new(fin_a.clone(), fin_a, self.i().then(self.iota2())).agrees_with(&HomExpr::Identity, &elems)?;
        let ps = self.a_prime.probes(rng, probes, 3)?;
        VirtualHom::new(self.a_prime.clone(), fin_b, self.p()).check_on(&ps)?;
        for y in sample(b, rng, 4096) {
            let pre = self.preimage(&y);
            self.a_prime.check(&pre)?;
            if self.p().apply(&pre)? != constant(b, y.clone()) {
                return Err(Error::VerificationFailure(format!("p misses {y}")));
            }
        }
        let other = fresh_var(&self.a_prime, &[]);
        self.splitting(other).verify_on(&ps)
    }
}

/// The mapping-path ring `P(g) = A x_B E B` of `g: A -> B`, the path ring
/// in `var`.
#[derive(Clone, Debug)]
pub struct MappingPath {
    pub source: VirtualRing,
    pub target: VirtualRing,
    pub g: HomExpr,
    pub var: Var,
    pub ring: VirtualRing,
}

impl MappingPath {
    pub fn new(source: VirtualRing, target: VirtualRing, g: HomExpr, var: Var) -> Self {
        let ring = VirtualRing::pullback(
            source.clone(),
            target.path_of(var),
            g.clone(),
            HomExpr::Eval(var, Endpoint::One),
            Section::MulInt(IntPoly::var(var)),
        );
        MappingPath { source, target, g, var, ring }
    }

    pub fn of_hom(g: &RingHom, var: Var) -> Self {
        MappingPath::new(VirtualRing::finite(g.source()), VirtualRing::finite(g.target()), HomExpr::Coeff(g.clone()), var)
    }

    /// `g1: P(g) -> A`.
    pub fn g1(&self) -> VirtualHom {
        VirtualHom::new(self.ring.clone(), self.source.clone(), HomExpr::Fst)
    }

    /// `g': P(g) -> E B`.
    pub fn g_prime(&self) -> VirtualHom {
        VirtualHom::new(self.ring.clone(), self.target.path_of(self.var), HomExpr::Snd)
    }

    pub fn loops(&self) -> VirtualRing {
        self.target.loop_of(self.var)
    }

    /// `j: ΩB -> P(g)`, `c -> (0, c)`.
    pub fn j(&self) -> VirtualHom {
        VirtualHom::new(self.loops(), self.ring.clone(), HomExpr::pair(HomExpr::Zero(Box::new(self.source.clone())), HomExpr::Identity))
    }

    /// `(a, e) -> e(y)`, from `0` to `g ∘ g1`.
    pub fn null_homotopy(&self, y: Var) -> VirtualCertificate {
        VirtualCertificate {
            source: self.ring.clone(),
            target: self.target.clone(),
            var: y,
            h: HomExpr::Snd.then(HomExpr::subst1(self.var, IntPoly::var(y))),
            f0: HomExpr::Zero(Box::new(self.target.clone())),
            f1: HomExpr::Fst.then(self.g.clone()),
        }
    }

    /// Checks `g1`, `j`, `g1 ∘ j = 0` and the null-homotopy of `g ∘ g1`
    /// on random probes.
    pub fn verify<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<()> {
        let ps = self.ring.probes(rng, count, 3)?;
        self.g1().check_on(&ps)?;
        self.g_prime().check_on(&ps)?;
        let ls = self.loops().probes(rng, count, 3)?;
        let j = self.j();
        j.check_on(&ls)?;
        for c in &ls {
            let v = HomExpr::Fst.apply(&j.apply(c)?)?;
            if !v.is_zero() {
                return Err(Error::VerificationFailure(format!("g1 ∘ j sends {c} to {v}")));
            }
        }
        let y = fresh_var(&self.ring, &[]);
        self.null_homotopy(y).verify_on(&ps)
    }
}

/// Iterated mapping paths `... -> P(g1) -> P(g) -> B -> C`; `stages[0]` is
/// `P(g)` and `stages[k]` the mapping path of `stages[k-1].g1`.
#[derive(Clone, Debug)]
pub struct Puppe {
    pub g: RingHom,
    pub stages: Vec<MappingPath>,
}

pub fn puppe(g: &RingHom, length: usize, depth_cap: usize) -> Result<Puppe> {
    if length > depth_cap {
        return Err(Error::DepthExceeded { requested: length, cap: depth_cap });
    }
    let mut stages: Vec<MappingPath> = Vec::with_capacity(length);
    for _ in 0..length {
        let stage = match stages.last() {
            None => MappingPath::of_hom(g, Var::named("x")),
            Some(prev) => {
                let v = fresh_var(&prev.source, &[]);
                MappingPath::new(prev.ring.clone(), prev.source.clone(), HomExpr::Fst, v)
            }
        };
        stages.push(stage);
    }
    Ok(Puppe { g: g.clone(), stages })
}

impl Puppe {
    pub fn verify<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<()> {
        for s in &self.stages {
            s.verify(rng, count)?;
        }
        Ok(())
    }
}

/// For `g = id`: `(b, p) -> (p(y), p(xy))` contracts `P(id)`.
pub fn identity_path_contraction(b: &Ring, y: Var) -> VirtualCertificate {
    let mp = MappingPath::of_hom(&RingHom::identity(b.clone()), Var::named("x"));
    let x = mp.var;
    VirtualCertificate {
        source: mp.ring.clone(),
        target: mp.ring.clone(),
        var: y,
        h: HomExpr::pair(
            HomExpr::Snd.then(HomExpr::subst1(x, IntPoly::var(y))),
            HomExpr::Snd.then(HomExpr::subst1(x, IntPoly::var(x).mul(&IntPoly::var(y)))),
        ),
        f0: HomExpr::Zero(Box::new(mp.ring.clone())),
        f1: HomExpr::Identity,
    }
}

/// Two finite stages of the Puppe sequence, at truncation level `m`.
#[derive(Clone, Debug)]
pub struct FinitePuppe {
    pub g: RingHom,
    pub m: usize,
    /// `P(g)` and `P(g1)`
    pub stages: [FinitePath; 2],
}

/// Homotopy classes of `[X, -]` along `P(g1) -> P(g) -> B -> C`, and whether
/// the sequence of pointed sets is exact at `B` and at `P(g)`.
#[derive(Clone, Debug)]
pub struct Exactness {
    /// class counts of `[X, C]`, `[X, B]`, `[X, P(g)]`, `[X, P(g1)]`
    pub class_counts: [usize; 4],
    pub at_b: bool,
    pub at_pg: bool,
}

impl FinitePuppe {
    pub fn new(g: &RingHom, m: usize) -> Result<FinitePuppe> {
        let first = FinitePath::new(g, m)?;
        let second = FinitePath::new(first.g1(), m)?;
        Ok(FinitePuppe { g: g.clone(), m, stages: [first, second] })
    }

    /// Exhaustively checks that each stage's `g1 ∘ j` is zero and that its
    /// null-homotopy of `g ∘ g1` has the right ends.
    pub fn check_composites(&self) -> Result<()> {
        for (k, st) in self.stages.iter().enumerate() {
            let h = st.null_homotopy()?;
            let gg1 = st.g.compose(st.g1())?;
            for z in st.ring().elements() {
                let hz = h.apply(&z);
                if !st.trunc.d0.apply(&hz).is_zero_elem() {
                    return Err(Error::VerificationFailure(format!("stage {k}: null-homotopy does not start at 0 on {z}")));
                }
                if st.trunc.d1.apply(&hz) != gg1.apply(&z) {
                    return Err(Error::VerificationFailure(format!("stage {k}: null-homotopy does not end at g ∘ g1 on {z}")));
                }
            }
            let (_, loops) = st.trunc.loops()?;
            let j = st.j(&loops)?;
            if !st.g1().compose(&j)?.is_zero() {
                return Err(Error::VerificationFailure(format!("stage {k}: g1 ∘ j is not zero")));
            }
        }
        Ok(())
    }

    pub fn exactness(&self, x: &Ring, d: u32, budget: u128) -> Result<Exactness> {
        let (p0, p1) = (&self.stages[0], &self.stages[1]);
        let rings = [self.g.target().clone(), self.g.source().clone(), p0.ring().clone(), p1.ring().clone()];
        let maps = [self.g.clone(), p0.g1().clone(), p1.g1().clone()];
        let classes: Vec<Classes> = rings.iter().map(|r| homotopy_classes(x, r, d, budget)).collect::<Result<_>>()?;
        // class of phi ∘ f in the target list, for every f in the source list
        let push = |phi: &RingHom, src: &Classes, tgt: &Classes| -> Result<Vec<usize>> {
            let index: HashMap<&[RingElem], usize> = tgt.homs.iter().enumerate().map(|(i, h)| (h.images(), i)).collect();
            src.homs
                .iter()
                .map(|f| {
                    let c = phi.compose(f)?;
                    let i = index
                        .get(c.images())
                        .ok_or_else(|| Error::VerificationFailure("composite missing from the hom list".into()))?;
                    Ok(tgt.partition.labels[*i])
                })
                .collect()
        };
        let base = |c: &Classes| -> usize {
            let i = c.homs.iter().position(|h| h.is_zero()).expect("the zero hom is always present");
            c.partition.labels[i]
        };
        // exact at ring m, between rings m + 1 and m - 1
        let exact_at = |m: usize| -> Result<bool> {
            let image: BTreeSet<usize> = push(&maps[m], &classes[m + 1], &classes[m])?.into_iter().collect();
            let down = push(&maps[m - 1], &classes[m], &classes[m - 1])?;
            let b = base(&classes[m - 1]);
            let kernel: BTreeSet<usize> =
                (0..classes[m].homs.len()).filter(|&i| down[i] == b).map(|i| classes[m].partition.labels[i]).collect();
            Ok(image == kernel)
        };
        Ok(Exactness {
            class_counts: [0, 1, 2, 3].map(|i| classes[i].class_count()),
            at_b: exact_at(1)?,
            at_pg: exact_at(2)?,
        })
    }
}

/// `ΩC -> P(g) -> B -> C` and its rotations.
#[derive(Clone, Debug)]
pub struct LeftTriangle {
    pub objects: [VirtualRing; 4],
    pub maps: [HomExpr; 3],
    /// loop variable of `objects[0]`
    pub loop_var: Var,
}

pub fn standard_triangle(g: &RingHom, x: Var) -> LeftTriangle {
    let mp = MappingPath::of_hom(g, x);
    LeftTriangle {
        objects: [mp.loops(), mp.ring.clone(), mp.source.clone(), mp.target.clone()],
        maps: [mp.j().expr, HomExpr::Fst, HomExpr::Coeff(g.clone())],
        loop_var: x,
    }
}

/// `ΩA -> ΩB -> F -> A` from `ΩB -> F -> A -> B`, the new map being
/// `-Ωf = Ωf ∘ σ`.
pub fn rotate(t: &LeftTriangle) -> LeftTriangle {
    let [o0, o1, o2, _] = t.objects.clone();
    let [m0, m1, m2] = t.maps.clone();
    let v = if all_vars(&o2).contains(&t.loop_var) { fresh_var(&o2, &[t.loop_var]) } else { t.loop_var };
    let mut first = m2.then(sigma(v));
    if v != t.loop_var {
        first = first.then(HomExpr::subst1(v, IntPoly::var(t.loop_var)));
    }
    LeftTriangle { objects: [o2.loop_of(v), o0, o1, o2], maps: [first, m0, m1], loop_var: v }
}

impl LeftTriangle {
    /// Checks every map is a homomorphism between consecutive objects.
    pub fn check_maps<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<()> {
        for k in 0..3 {
            let ps = self.objects[k].probes(rng, count, 3)?;
            VirtualHom::new(self.objects[k].clone(), self.objects[k + 1].clone(), self.maps[k].clone())
                .check_on(&ps)
                .map_err(|e| Error::VerificationFailure(format!("map {k}: {e}")))?;
        }
        Ok(())
    }
}

/// How a composite of consecutive triangle maps vanishes.
#[derive(Clone, Debug)]
pub enum Vanishing {
    Literal,
    NullHomotopic(Box<VirtualCertificate>),
}

/// Composites of the standard triangle: `g1 ∘ j = 0` on the nose, `g ∘ g1`
/// through `(b, e) -> e(y)`.
pub fn standard_composites<R: Rng + ?Sized>(g: &RingHom, rng: &mut R, count: usize) -> Result<[Vanishing; 2]> {
    let mp = MappingPath::of_hom(g, Var::named("x"));
    let ls = mp.loops().probes(rng, count, 3)?;
    for c in &ls {
        if !HomExpr::Fst.apply(&mp.j().apply(c)?)?.is_zero() {
            return Err(Error::VerificationFailure(format!("g1 ∘ j does not vanish on {c}")));
        }
    }
    let cert = mp.null_homotopy(Var::named("y"));
    cert.verify_on(&mp.ring.probes(rng, count, 3)?)?;
    Ok([Vanishing::Literal, Vanishing::NullHomotopic(Box::new(cert))])
}

/// `a -> (a(1-y), g(a(1-xy)))`, from `0` to `j ∘ (-Ωg)`: the first composite
/// of the rotated triangle.
pub fn rotated_composite(g: &RingHom, x: Var, y: Var) -> VirtualCertificate {
    let mp = MappingPath::of_hom(g, x);
    let first = rotate(&standard_triangle(g, x)).maps[0].clone();
    VirtualCertificate {
        source: VirtualRing::loops(g.source(), x),
        target: mp.ring.clone(),
        var: y,
        h: rotation_core(g, x, y),
        f0: HomExpr::Zero(Box::new(mp.ring.clone())),
        f1: first.then(mp.j().expr),
    }
}

fn rotation_core(g: &RingHom, x: Var, y: Var) -> HomExpr {
    let (xp, yp) = (IntPoly::var(x), IntPoly::var(y));
    HomExpr::pair(
        HomExpr::subst1(x, one_minus(y)),
        HomExpr::subst1(x, IntPoly::one().sub(&xp.mul(&yp))).then(HomExpr::Coeff(g.clone())),
    )
}

/// The rotation homotopy in `P(g1) = P(g) x_B E B`:
/// `a(x) -> ((a(1-y), g(a(1-xy))), a(x(1-y)))`, from `κ: a -> ((0,0), a)`
/// at `y = 0` to `ν ∘ Ωg ∘ σ: a -> ((0, g(a(1-x))), 0)` at `y = 1`.
pub fn rotation_homotopy(g: &RingHom, x: Var, y: Var) -> VirtualCertificate {
    let pg = MappingPath::of_hom(g, x);
    let pg1 = MappingPath::new(pg.ring.clone(), pg.source.clone(), HomExpr::Fst, x);
    let b = g.source();
    let x_shrunk = IntPoly::var(x).mul(&one_minus(y));
    VirtualCertificate {
        source: VirtualRing::loops(b, x),
        target: pg1.ring.clone(),
        var: y,
        h: HomExpr::pair(rotation_core(g, x, y), HomExpr::subst1(x, x_shrunk)),
        f0: HomExpr::pair(HomExpr::Zero(Box::new(pg.ring.clone())), HomExpr::Identity),
        f1: HomExpr::pair(
            HomExpr::pair(HomExpr::Zero(Box::new(VirtualRing::finite(b))), sigma(x).then(HomExpr::Coeff(g.clone()))),
            HomExpr::Zero(Box::new(VirtualRing::path(b, x))),
        ),
    }
}

/// The octahedral configuration of surjections `h: B -> C`, `k: C -> D`:
/// `A = ker h`, `F = ker kh`, `E = ker k`, `A -> F -> E` exact.
#[derive(Clone, Debug)]
pub struct Octahedron {
    pub h: RingHom,
    pub k: RingHom,
    pub a: Subring,
    pub f: Subring,
    pub e: Subring,
    /// `A -> F`
    pub alpha: RingHom,
    /// `F -> E`, the restriction of `h`
    pub beta: RingHom,
}

pub fn octahedron(h: &RingHom, k: &RingHom) -> Result<Octahedron> {
    if h.target() != k.source() {
        return Err(Error::RingMismatch("h and k are not composable".into()));
    }
    for (name, f) in [("h", h), ("k", k)] {
        if !f.is_surjective() {
            return Err(Error::NotSurjective(format!("{name}: {} -> {}", f.source().label(), f.target().label())));
        }
    }
    let kh = k.compose(h)?;
    let (a, f, e) = (kernel(h), kernel(&kh), kernel(k));
    let alpha = restrict_hom(&a.inclusion, &full(&a.ring), &f)?;
    let beta = restrict_hom(&h.compose(&f.inclusion)?, &full(&f.ring), &e)?;
    Ok(Octahedron { h: h.clone(), k: k.clone(), a, f, e, alpha, beta })
}

/// A ring as a subring of itself.
fn full(r: &Ring) -> Subring {
    crate::ring::subring(r, &r.generators(), r.label().to_string())
}

/// Outcome of the octahedral checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctahedronReport {
    pub orders: [u128; 3],
    pub exact_row: bool,
    /// elements checked for `ψγ = j ∘ Ωℓ` and `ψδ = i`
    pub checked: usize,
}

impl Octahedron {
    /// `ψ: P(β) -> P(h)`, `(f, e) -> (f, ℓ(e))`.
    pub fn psi(&self) -> HomExpr {
        HomExpr::pair(HomExpr::Fst.then(HomExpr::Coeff(self.f.inclusion.clone())), HomExpr::Snd.then(HomExpr::Coeff(self.e.inclusion.clone())))
    }

    fn exact_row(&self) -> bool {
        self.alpha.is_injective()
            && self.beta.is_surjective()
            && self.beta.compose(&self.alpha).map(|c| c.is_zero()).unwrap_or(false)
            && self.a.ring.order() * self.e.ring.order() == self.f.ring.order()
    }

    /// Checks on random probes and on every loop `(x²-x) q` with
    /// `deg q < 2`, so every loop of degree below 4.
    pub fn verify_intensional<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<OctahedronReport> {
        let x = Var::named("x");
        let pb = MappingPath::of_hom(&self.beta, x);
        let ph = MappingPath::of_hom(&self.h, x);
        let psi = VirtualHom::new(pb.ring.clone(), ph.ring.clone(), self.psi());
        psi.check_on(&pb.ring.probes(rng, count, 3)?)?;
        let er = &self.e.ring;
        let mut loops = pb.loops().probes(rng, count, 3)?;
        let lf = crate::poly::loop_factor(x);
        for c0 in er.elements() {
            for c1 in er.elements() {
                let q = PolyElem::from_terms(er, [(Monomial::one(), c0.clone()), (Monomial::var(x, 1), c1)]);
                loops.push(VirtualElem::Poly(q.mul_int(&lf)));
            }
        }
        let left = pb.j().expr.then(self.psi());
        let right = HomExpr::Coeff(self.e.inclusion.clone()).then(ph.j().expr);
        VirtualHom::new(pb.loops(), ph.ring.clone(), left).agrees_with(&right, &loops)?;
        let ar = &self.a.ring;
        let elems: Vec<VirtualElem> = ar.elements().map(|a| constant(ar, a)).collect();
        let delta = HomExpr::pair(HomExpr::Coeff(self.alpha.clone()), HomExpr::Zero(Box::new(VirtualRing::path(er, x))));
        let i = HomExpr::pair(HomExpr::Coeff(self.a.inclusion.clone()), HomExpr::Zero(Box::new(VirtualRing::path(self.h.target(), x))));
        VirtualHom::new(VirtualRing::finite(ar), pb.ring.clone(), delta.clone()).check_on(&elems)?;
        VirtualHom::new(VirtualRing::finite(ar), pb.ring.clone(), delta.then(self.psi())).agrees_with(&i, &elems)?;
        Ok(self.report(loops.len() + elems.len()))
    }

    /// Exhaustive checks on the truncation-level-`m` shadows.
    pub fn verify_finite(&self, m: usize) -> Result<OctahedronReport> {
        let fb = FinitePath::new(&self.beta, m)?;
        let fh = FinitePath::new(&self.h, m)?;
        let te = &fb.trunc;
        let ell_path = restrict_hom(&te.lift(&self.e.inclusion, &fh.trunc)?, &fb.path, &fh.path)?;
        let psi_images = fb
            .ring()
            .generators()
            .iter()
            .map(|z| {
                let mut v = self.f.inclusion.apply(&fb.g1().apply(z)).0;
                v.extend(ell_path.apply(&fb.pb.sigma.apply(z)).0);
                fh.pb.sub.restrict(&RingElem(v)).ok_or_else(|| Error::VerificationFailure(format!("ψ({z}) leaves P(h)")))
            })
            .collect::<Result<Vec<_>>>()?;
        let psi = RingHom::new(fb.ring().clone(), fh.ring().clone(), psi_images)?;
        let (_, le) = te.loops()?;
        let (_, lc) = fh.trunc.loops()?;
        let ell_loops = restrict_hom(&ell_path, &le, &lc)?;
        let gamma = fb.j(&le)?;
        let j = fh.j(&lc)?;
        let mut checked = 0;
        for z in le.ring.elements() {
            if psi.apply(&gamma.apply(&z)) != j.apply(&ell_loops.apply(&z)) {
                return Err(Error::VerificationFailure(format!("ψγ and jΩℓ differ on {z}")));
            }
            checked += 1;
        }
        let embed = |fp: &FinitePath, v: Vec<i64>| -> Result<RingElem> {
            let mut w = v;
            w.extend(std::iter::repeat(0).take(fp.path.ring.rank()));
            fp.pb.sub.restrict(&RingElem(w)).ok_or_else(|| Error::VerificationFailure("constant leaves the mapping path".into()))
        };
        for a in self.a.ring.elements() {
            let delta = embed(&fb, self.alpha.apply(&a).0)?;
            let i = embed(&fh, self.a.inclusion.apply(&a).0)?;
            if psi.apply(&delta) != i {
                return Err(Error::VerificationFailure(format!("ψδ and i differ on {a}")));
            }
            checked += 1;
        }
        Ok(self.report(checked))
    }

    fn report(&self, checked: usize) -> OctahedronReport {
        OctahedronReport {
            orders: [self.a.ring.order(), self.f.ring.order(), self.e.ring.order()],
            exact_row: self.exact_row(),
            checked,
        }
    }
}
