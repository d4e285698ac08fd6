//! Finite nonunital associative rings given by structure constants, their
//! homomorphisms, and the closure operations of an admissible category:
//! ideals and quotients, kernels, fibre products and direct products.
//!
//! A ring is a finite abelian group `Z/d1 + ... + Z/dk` with a bilinear
//! product fixed by the products `gi * gj` of the generators. Associativity
//! and distributivity of the whole ring follow from associativity on
//! generator triples because the product is Z-bilinear.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{kernel_mod, QuotientPresentation, SubgroupPresentation};

/// Coordinates of a ring element, entry `i` reduced modulo `d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem(pub Vec<i64>);

impl RingElem {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Raw ring data as exchanged in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    pub label: String,
    pub orders: Vec<i64>,
    pub mul: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub unit: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteRing {
    label: String,
    orders: Vec<i64>,
    mul: Vec<Vec<RingElem>>,
    unit: Option<RingElem>,
}

pub type Ring = Arc<FiniteRing>;

impl FiniteRing {
    /// Validates raw structure constants and builds the ring.
    pub fn new(spec: RingSpec) -> Result<FiniteRing> {
        let k = spec.orders.len();
        if let Some(i) = spec.orders.iter().position(|&d| d <= 0) {
            return Err(Error::NonPositiveOrder(i));
        }
        if spec.mul.len() != k || spec.mul.iter().any(|r| r.len() != k || r.iter().any(|v| v.len() != k)) {
            return Err(Error::Dimension(format!("expected a {k}x{k}x{k} table")));
        }
        let reduce = |v: &[i64]| -> RingElem {
            RingElem(v.iter().zip(&spec.orders).map(|(&c, &d)| c.rem_euclid(d)).collect())
        };
        let mul: Vec<Vec<RingElem>> =
            spec.mul.iter().map(|row| row.iter().map(|v| reduce(v)).collect()).collect();
        let unit = match &spec.unit {
            Some(u) if u.len() != k => {
                return Err(Error::Dimension(format!("unit has {} coordinates, expected {k}", u.len())))
            }
            Some(u) => Some(reduce(u)),
            None => None,
        };
        let ring = FiniteRing { label: spec.label, orders: spec.orders, mul, unit };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let k = self.rank();
        // well-definedness: d_i * (g_i g_j) = 0 and d_j * (g_i g_j) = 0
        for i in 0..k {
            for j in 0..k {
                let p = &self.mul[i][j];
                if !self.scale_i64(p, self.orders[i]).is_zero_elem()
                    || !self.scale_i64(p, self.orders[j]).is_zero_elem()
                {
                    return Err(Error::IllDefined { i, j });
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let left = self.mul(&self.mul[i][j], &self.generator(l));
                    let right = self.mul(&self.generator(i), &self.mul[j][l]);
                    if left != right {
                        return Err(Error::NotAssociative { i, j, l, left: left.0, right: right.0 });
                    }
                }
            }
        }
        if let Some(e) = &self.unit {
            for i in 0..k {
                let g = self.generator(i);
                if self.mul(e, &g) != g || self.mul(&g, e) != g {
                    return Err(Error::BadUnit(i));
                }
            }
        }
        Ok(())
    }

    /// Builds a ring from trusted data; used by constructions whose
    /// output is correct by construction. Axioms are still asserted in
    /// debug builds.
    pub(crate) fn from_parts(label: String, orders: Vec<i64>, mul: Vec<Vec<RingElem>>, unit: Option<RingElem>) -> FiniteRing {
        let ring = FiniteRing { label, orders, mul, unit };
        debug_assert!(ring.check_axioms().is_ok(), "constructed ring violates axioms");
        ring
    }

    pub fn to_spec(&self) -> RingSpec {
        RingSpec {
            label: self.label.clone(),
            orders: self.orders.clone(),
            mul: self.mul.iter().map(|r| r.iter().map(|e| e.0.clone()).collect()).collect(),
            unit: self.unit.as_ref().map(|u| u.0.clone()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn unit(&self) -> Option<&RingElem> {
        self.unit.as_ref()
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&d| d as u128).product()
    }

    pub fn structure_constant(&self, i: usize, j: usize) -> &RingElem {
        &self.mul[i][j]
    }

    pub fn zero(&self) -> RingElem {
        RingElem(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> RingElem {
        let mut v = vec![0; self.rank()];
        v[i] = 1 % self.orders[i];
        RingElem(v)
    }

    pub fn generators(&self) -> Vec<RingElem> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    pub fn elem(&self, coords: &[i64]) -> RingElem {
        RingElem(coords.iter().zip(&self.orders).map(|(&c, &d)| c.rem_euclid(d)).collect())
    }

    pub fn is_member(&self, a: &RingElem) -> bool {
        a.0.len() == self.rank() && a.0.iter().zip(&self.orders).all(|(&c, &d)| (0..d).contains(&c))
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
                .collect(),
        )
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &d)| (x - y).rem_euclid(d))
                .collect(),
        )
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem(a.0.iter().zip(&self.orders).map(|(&x, &d)| (-x).rem_euclid(d)).collect())
    }

    pub fn scale_i64(&self, a: &RingElem, n: i64) -> RingElem {
        RingElem(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &d)| ((x as i128 * n as i128).rem_euclid(d as i128)) as i64)
                .collect(),
        )
    }

    pub fn scale(&self, a: &RingElem, n: &BigInt) -> RingElem {
        RingElem(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &d)| {
                    let r = (BigInt::from(x) * n).mod_floor(&BigInt::from(d));
                    r.to_i64().unwrap()
                })
                .collect(),
        )
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let k = self.rank();
        let mut acc = vec![0i128; k];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = x as i128 * y as i128;
                for (l, &s) in self.mul[i][j].0.iter().enumerate() {
                    if s != 0 {
                        acc[l] = (acc[l] + c * s as i128).rem_euclid(self.orders[l] as i128);
                    }
                }
            }
        }
        RingElem(acc.into_iter().map(|x| x as i64).collect())
    }

    /// Additive order of an element.
    pub fn additive_order(&self, a: &RingElem) -> i64 {
        a.0.iter()
            .zip(&self.orders)
            .map(|(&x, &d)| d / x.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Position of `a` in the lexicographic enumeration of elements.
    pub fn index_of(&self, a: &RingElem) -> u128 {
        a.0.iter().zip(&self.orders).fold(0u128, |acc, (&c, &d)| acc * d as u128 + c as u128)
    }

    pub fn from_index(&self, mut idx: u128) -> RingElem {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.orders[i] as u128;
            v[i] = (idx % d) as i64;
            idx /= d;
        }
        RingElem(v)
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElem {
        RingElem(self.orders.iter().map(|&d| rng.gen_range(0..d)).collect())
    }

    /// Smallest `c` such that every product of `c` elements vanishes.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let mut power: Vec<RingElem> = self.generators();
        let all = self.generators();
        for c in 1..=self.rank() * 8 + 2 {
            let span = SubgroupPresentation::new(&self.orders, &power.iter().map(|e| e.0.clone()).collect::<Vec<_>>());
            if span.order() == 1 {
                return Some(c);
            }
            let mut next = Vec::new();
            for p in &span.generators {
                let p = RingElem(p.clone());
                for g in &all {
                    next.push(self.mul(&p, g));
                }
            }
            let next_span = SubgroupPresentation::new(&self.orders, &next.iter().map(|e| e.0.clone()).collect::<Vec<_>>());
            if next_span.order() == span.order() {
                return None;
            }
            power = next;
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| self.mul[i][j] == self.mul[j][i]))
    }

    /// Multiplicative inverse of `a` when the ring has a unit and `a` is a unit.
    pub fn inverse(&self, a: &RingElem) -> Option<RingElem> {
        let e = self.unit.as_ref()?;
        self.elements().find(|b| &self.mul(a, b) == e && &self.mul(b, a) == e)
    }

    pub fn is_zero_ring(&self) -> bool {
        self.order() == 1
    }
}

impl RingElem {
    pub fn is_zero_elem(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// The zero ring.
pub fn zero_ring() -> FiniteRing {
    FiniteRing::from_parts("0".into(), vec![], vec![], Some(RingElem(vec![])))
}

/// A ring homomorphism between finite rings, determined by the images of
/// the source generators. Need not preserve units.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<RingElem>,
}

/// Raw hom data as exchanged in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomSpec {
    pub source: String,
    pub target: String,
    pub images: Vec<Vec<i64>>,
}

impl RingHom {
    /// Validates additivity relations and multiplicativity on generator pairs.
    pub fn new(source: Ring, target: Ring, images: Vec<RingElem>) -> Result<RingHom> {
        if images.len() != source.rank() || images.iter().any(|e| !target.is_member(e)) {
            return Err(Error::NotHom(format!(
                "need {} images in {}",
                source.rank(),
                target.label()
            )));
        }
        let hom = RingHom { source, target, images };
        hom.check()?;
        Ok(hom)
    }

    pub(crate) fn new_unchecked(source: Ring, target: Ring, images: Vec<RingElem>) -> RingHom {
        let hom = RingHom { source, target, images };
        debug_assert!(hom.check().is_ok(), "constructed map is not a homomorphism");
        hom
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for (i, img) in self.images.iter().enumerate() {
            if !t.scale_i64(img, s.orders()[i]).is_zero_elem() {
                return Err(Error::NotHom(format!("order of generator {i} not respected")));
            }
        }
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                let lhs = self.apply(s.structure_constant(i, j));
                let rhs = t.mul(&self.images[i], &self.images[j]);
                if lhs != rhs {
                    return Err(Error::NotHom(format!(
                        "f(g{i}g{j}) = {lhs} but f(g{i})f(g{j}) = {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_spec(spec: &HomSpec, source: Ring, target: Ring) -> Result<RingHom> {
        let images = spec.images.iter().map(|v| target.elem(v)).collect::<Vec<_>>();
        if spec.images.iter().any(|v| v.len() != target.rank()) {
            return Err(Error::Dimension("image has wrong number of coordinates".into()));
        }
        RingHom::new(source, target, images)
    }

    pub fn to_spec(&self) -> HomSpec {
        HomSpec {
            source: self.source.label().to_string(),
            target: self.target.label().to_string(),
            images: self.images.iter().map(|e| e.0.clone()).collect(),
        }
    }

    pub fn identity(ring: Ring) -> RingHom {
        let images = ring.generators();
        RingHom { source: ring.clone(), target: ring, images }
    }

    pub fn zero(source: Ring, target: Ring) -> RingHom {
        let images = vec![target.zero(); source.rank()];
        RingHom { source, target, images }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    pub fn apply(&self, a: &RingElem) -> RingElem {
        let t = &self.target;
        let mut acc = t.zero();
        for (&c, img) in a.0.iter().zip(&self.images) {
            if c != 0 {
                acc = t.add(&acc, &t.scale_i64(img, c));
            }
        }
        acc
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &RingHom) -> Result<RingHom> {
        if first.target != self.source {
            return Err(Error::RingMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source.label(),
                self.target.label(),
                first.source.label(),
                first.target.label()
            )));
        }
        let images = first.images.iter().map(|e| self.apply(e)).collect();
        Ok(RingHom { source: first.source.clone(), target: self.target.clone(), images })
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|e| e.is_zero_elem())
    }

    /// Image of the map as a subgroup of the target.
    pub fn image_subgroup(&self) -> SubgroupPresentation {
        let gens: Vec<Vec<i64>> = self.images.iter().map(|e| e.0.clone()).collect();
        SubgroupPresentation::new(self.target.orders(), &gens)
    }

    /// Surjectivity through the order of the image subgroup.
    pub fn is_surjective(&self) -> bool {
        self.image_subgroup().order() == self.target.order()
    }

    /// Surjectivity by enumerating the image of every source element.
    pub fn is_surjective_by_enumeration(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for a in self.source.elements() {
            seen.insert(self.apply(&a));
        }
        seen.len() as u128 == self.target.order()
    }

    pub fn kernel_subgroup(&self) -> SubgroupPresentation {
        let phi: Vec<Vec<i64>> = self.images.iter().map(|e| e.0.clone()).collect();
        let gens = kernel_mod(&phi, self.target.orders());
        SubgroupPresentation::new(self.source.orders(), &gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_subgroup().order() == 1
    }

    /// A preimage of `b`, found by search; `None` when `b` is not in the image.
    pub fn preimage(&self, b: &RingElem) -> Option<RingElem> {
        self.source.elements().find(|a| &self.apply(a) == b)
    }
}

/// A subring of a finite ring together with its inclusion.
#[derive(Clone, Debug)]
pub struct Subring {
    pub ring: Ring,
    pub inclusion: RingHom,
    pres: SubgroupPresentation,
}

impl Subring {
    /// Subring coordinates of an ambient element, `None` if not a member.
    pub fn restrict(&self, x: &RingElem) -> Option<RingElem> {
        self.pres.coords(&x.0).map(RingElem)
    }
}

/// Builds the subring of `ambient` spanned (as a group) by the given
/// elements, which must already be closed under multiplication.
pub fn subring(ambient: &Ring, span: &[RingElem], label: String) -> Subring {
    let gens: Vec<Vec<i64>> = span.iter().map(|e| e.0.clone()).collect();
    let pres = SubgroupPresentation::new(ambient.orders(), &gens);
    let new_gens: Vec<RingElem> = pres.generators.iter().map(|g| RingElem(g.clone())).collect();
    let mul = new_gens
        .iter()
        .map(|a| {
            new_gens
                .iter()
                .map(|b| {
                    let p = ambient.mul(a, b);
                    RingElem(pres.coords(&p.0).expect("span is closed under multiplication"))
                })
                .collect()
        })
        .collect();
    let unit = ambient.unit().and_then(|e| pres.coords(&e.0)).map(RingElem);
    let ring = Arc::new(FiniteRing::from_parts(label, pres.orders.clone(), mul, unit));
    let inclusion = RingHom::new_unchecked(ring.clone(), ambient.clone(), new_gens);
    Subring { ring, inclusion, pres }
}

/// The direct product `A x B` with its two projections.
pub fn product(a: &Ring, b: &Ring) -> (Ring, RingHom, RingHom) {
    let (ka, kb) = (a.rank(), b.rank());
    let mut orders = a.orders().to_vec();
    orders.extend_from_slice(b.orders());
    let k = ka + kb;
    let mut mul = vec![vec![RingElem(vec![0; k]); k]; k];
    for i in 0..ka {
        for j in 0..ka {
            let mut v = a.structure_constant(i, j).0.clone();
            v.extend(std::iter::repeat(0).take(kb));
            mul[i][j] = RingElem(v);
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            let mut v = vec![0; ka];
            v.extend_from_slice(&b.structure_constant(i, j).0);
            mul[ka + i][ka + j] = RingElem(v);
        }
    }
    let unit = match (a.unit(), b.unit()) {
        (Some(ea), Some(eb)) => {
            let mut v = ea.0.clone();
            v.extend_from_slice(&eb.0);
            Some(RingElem(v))
        }
        _ => None,
    };
    let ring = Arc::new(FiniteRing::from_parts(format!("{}x{}", a.label(), b.label()), orders, mul, unit));
    let pa = (0..k)
        .map(|i| if i < ka { a.generator(i) } else { a.zero() })
        .collect();
    let pb = (0..k)
        .map(|i| if i < ka { b.zero() } else { b.generator(i - ka) })
        .collect();
    (
        ring.clone(),
        RingHom::new_unchecked(ring.clone(), a.clone(), pa),
        RingHom::new_unchecked(ring, b.clone(), pb),
    )
}

/// The kernel of a homomorphism as a finite ring, with its inclusion.
pub fn kernel(f: &RingHom) -> Subring {
    let sub = f.kernel_subgroup();
    let span: Vec<RingElem> = sub.generators.iter().map(|g| RingElem(g.clone())).collect();
    subring(f.source(), &span, format!("ker({}->{})", f.source().label(), f.target().label()))
}

/// Fibre product `{(a, b) : f(a) = g(b)}` of `f: A -> C` and `g: B -> C`,
/// with the projections `rho` to `A` and `sigma` to `B`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub ring: Ring,
    pub rho: RingHom,
    pub sigma: RingHom,
    /// inclusion into `A x B`
    pub inclusion: RingHom,
    pub sub: Subring,
}

pub fn pullback(f: &RingHom, g: &RingHom) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::RingMismatch("pullback legs must share their target".into()));
    }
    let (a, b, c) = (f.source(), g.source(), f.target());
    let (prod, pa, pb) = product(a, b);
    // group map A x B -> C, (a, b) -> f(a) - g(b)
    let phi: Vec<Vec<i64>> = f
        .images()
        .iter()
        .map(|e| e.0.clone())
        .chain(g.images().iter().map(|e| c.neg(e).0))
        .collect();
    let gens = kernel_mod(&phi, c.orders());
    let span: Vec<RingElem> = gens.iter().map(|v| prod.elem(v)).collect();
    let label = format!("{}x_{}{}", a.label(), c.label(), b.label());
    let sub = subring(&prod, &span, label);
    let rho = pa.compose(&sub.inclusion)?;
    let sigma = pb.compose(&sub.inclusion)?;
    Ok(Pullback { ring: sub.ring.clone(), rho, sigma, inclusion: sub.inclusion.clone(), sub })
}

/// Two-sided ideal generated by the given elements, as a subgroup.
pub fn ideal_closure(r: &Ring, gens: &[RingElem]) -> SubgroupPresentation {
    let ring_gens = r.generators();
    let mut current: Vec<Vec<i64>> = gens.iter().map(|e| e.0.clone()).collect();
    loop {
        let sub = SubgroupPresentation::new(r.orders(), &current);
        let mut fresh = Vec::new();
        for s in &sub.generators {
            let s = RingElem(s.clone());
            for g in &ring_gens {
                for p in [r.mul(g, &s), r.mul(&s, g)] {
                    if !sub.contains(&p.0) {
                        fresh.push(p.0);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return sub;
        }
        current = sub.generators.clone();
        current.extend(fresh);
    }
}

/// Quotient ring `R / I` with its projection, `I` the ideal generated by
/// `ideal_gens`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ring: Ring,
    pub projection: RingHom,
    pub ideal: SubgroupPresentation,
}

pub fn quotient(r: &Ring, ideal_gens: &[RingElem]) -> Quotient {
    let ideal = ideal_closure(r, ideal_gens);
    let pres = QuotientPresentation::new(r.orders(), &ideal.generators);
    let new_gens: Vec<RingElem> = pres.generators.iter().map(|g| RingElem(g.clone())).collect();
    let mul = new_gens
        .iter()
        .map(|a| new_gens.iter().map(|b| RingElem(pres.map(&r.mul(a, b).0))).collect())
        .collect();
    let unit = r.unit().map(|e| RingElem(pres.map(&e.0)));
    let ring = Arc::new(FiniteRing::from_parts(format!("{}/I", r.label()), pres.orders.clone(), mul, unit));
    let images = r.generators().iter().map(|g| RingElem(pres.map(&g.0))).collect();
    let projection = RingHom::new_unchecked(r.clone(), ring.clone(), images);
    Quotient { ring, projection, ideal }
}

/// Enumerates all ring homomorphisms `R -> S` in lexicographic order of
/// their generator images.
pub fn enumerate_homs(r: &Ring, s: &Ring, budget: u128) -> Result<Vec<RingHom>> {
    let required = s.order().checked_pow(r.rank() as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let k = r.rank();
    // candidates per generator respecting the additive order
    let cands: Vec<Vec<RingElem>> = (0..k)
        .map(|i| s.elements().filter(|x| s.scale_i64(x, r.orders()[i]).is_zero_elem()).collect())
        .collect();
    // pair (i, j) is checkable once every generator in its support is assigned
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            let support_max = r
                .structure_constant(i, j)
                .0
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(l, _)| l)
                .max()
                .unwrap_or(0);
            checks[i.max(j).max(support_max)].push((i, j));
        }
    }
    let mut out = Vec::new();
    let mut images: Vec<RingElem> = Vec::with_capacity(k);
    search_homs(r, s, &cands, &checks, &mut images, &mut out);
    Ok(out)
}

fn apply_partial(s: &Ring, images: &[RingElem], a: &RingElem) -> RingElem {
    let mut acc = s.zero();
    for (&c, img) in a.0.iter().zip(images) {
        if c != 0 {
            acc = s.add(&acc, &s.scale_i64(img, c));
        }
    }
    acc
}

fn search_homs(
    r: &Ring,
    s: &Ring,
    cands: &[Vec<RingElem>],
    checks: &[Vec<(usize, usize)>],
    images: &mut Vec<RingElem>,
    out: &mut Vec<RingHom>,
) {
    let level = images.len();
    if level == r.rank() {
        out.push(RingHom { source: r.clone(), target: s.clone(), images: images.clone() });
        return;
    }
    for x in &cands[level] {
        images.push(x.clone());
        let ok = checks[level].iter().all(|&(i, j)| {
            apply_partial(s, images, r.structure_constant(i, j)) == s.mul(&images[i], &images[j])
        });
        if ok {
            search_homs(r, s, cands, checks, images, out);
        }
        images.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(label: &str, orders: Vec<i64>, mul: Vec<Vec<Vec<i64>>>, unit: Option<Vec<i64>>) -> Result<FiniteRing> {
        FiniteRing::new(RingSpec { label: label.into(), orders, mul, unit })
    }

    fn two_z8() -> Ring {
        Arc::new(ring("2Z/8", vec![4], vec![vec![vec![2]]], None).unwrap())
    }

    fn sq0(p: i64) -> Ring {
        Arc::new(ring("sq0", vec![p], vec![vec![vec![0]]], None).unwrap())
    }

    #[test]
    fn validate_examples() {
        // 2Z/8: (2a)(2b) = 4ab = 2*(2ab), matching g^2 = 2g
        let r = two_z8();
        for a in 0..4 {
            for b in 0..4 {
                let direct = (2 * a * 2 * b) % 8 / 2;
                assert_eq!(r.mul(&r.elem(&[a]), &r.elem(&[b])), r.elem(&[direct]));
            }
        }
        assert!(ring("sq0", vec![2], vec![vec![vec![0]]], None).is_ok());
        assert!(ring("f2", vec![2], vec![vec![vec![1]]], None).is_ok());
        assert!(ring("f2", vec![2], vec![vec![vec![1]]], Some(vec![1])).is_ok());
        assert_eq!(
            ring("f2", vec![2], vec![vec![vec![1]]], Some(vec![0])).unwrap_err(),
            Error::BadUnit(0)
        );
    }

    #[test]
    fn rejects_bad_tables() {
        // Z/4 with g^2 = 1 is fine, but Z/2 x Z/4 with g1*g1 = g2 of order 4 is ill-defined
        let err = ring("bad", vec![2, 4], vec![vec![vec![0, 1], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]], None)
            .unwrap_err();
        assert_eq!(err, Error::IllDefined { i: 0, j: 0 });
        // g1 g1 = g2, g2 g1 = g2, g1 g2 = 0 over Z/2: (g1 g1) g1 = g2 but g1 (g1 g1) = 0
        let err = ring(
            "nonassoc",
            vec![2, 2],
            vec![vec![vec![0, 1], vec![0, 0]], vec![vec![0, 1], vec![0, 0]]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }));
        assert_eq!(ring("neg", vec![0], vec![vec![vec![0]]], None).unwrap_err(), Error::NonPositiveOrder(0));
    }

    #[test]
    fn pullback_examples() {
        let z2 = sq0(2);
        let id = RingHom::identity(z2.clone());
        let pb = pullback(&id, &id).unwrap();
        assert_eq!(pb.ring.order(), 2);

        let zero: Ring = Arc::new(zero_ring());
        let a = two_z8();
        let f = RingHom::zero(a.clone(), zero.clone());
        let g = RingHom::zero(z2.clone(), zero.clone());
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.ring.order(), a.order() * z2.order());

        // 2Z/8 -> 2Z/4 <- sq0 Z/2, brute-force pair count
        let c = sq0(2).as_ref().clone().with_label("2Z/4");
        let c = Arc::new(c);
        let f = RingHom::new(a.clone(), c.clone(), vec![c.elem(&[1])]).unwrap();
        let g = RingHom::new(z2.clone(), c.clone(), vec![c.elem(&[1])]).unwrap();
        let brute = a
            .elements()
            .flat_map(|x| z2.elements().map(move |y| (x.clone(), y)))
            .filter(|(x, y)| f.apply(x) == g.apply(y))
            .count();
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.ring.order(), brute as u128);
        assert_eq!(brute, 4);
        for d in pb.ring.elements() {
            assert_eq!(f.apply(&pb.rho.apply(&d)), g.apply(&pb.sigma.apply(&d)));
        }
    }

    #[test]
    fn quotient_examples() {
        let r = two_z8();
        let q = quotient(&r, &[r.zero()]);
        assert_eq!(q.ring.order(), r.order());
        let q = quotient(&r, &r.generators());
        assert_eq!(q.ring.order(), 1);
        // ideal {0, 4} = {0, 2g}: quotient of order 2 with zero square
        let q = quotient(&r, &[r.elem(&[2])]);
        assert_eq!(q.ring.order(), 2);
        let g = q.ring.generator(0);
        assert!(q.ring.mul(&g, &g).is_zero_elem());
    }

    #[test]
    fn hom_enumeration_examples() {
        let z2 = sq0(2);
        assert_eq!(enumerate_homs(&z2, &z2, 1000).unwrap().len(), 2);
        let zero: Ring = Arc::new(zero_ring());
        assert_eq!(enumerate_homs(&two_z8(), &zero, 1000).unwrap().len(), 1);
        let homs = enumerate_homs(&z2, &two_z8(), 1000).unwrap();
        let imgs: Vec<_> = homs.iter().map(|h| h.images()[0].0[0]).collect();
        // x in 2Z/8 with 2x = 0 and x^2 = 0: x in {0, 4}, i.e. coordinates {0, 2}
        assert_eq!(imgs, vec![0, 2]);
        assert!(matches!(
            enumerate_homs(&two_z8(), &two_z8(), 3),
            Err(Error::BudgetExceeded { required: 4, budget: 3 })
        ));
    }

    #[test]
    fn nilpotency() {
        assert_eq!(sq0(2).nilpotency_class(), Some(2));
        assert_eq!(two_z8().nilpotency_class(), Some(3));
        let f2 = Arc::new(ring("f2", vec![2], vec![vec![vec![1]]], Some(vec![1])).unwrap());
        assert_eq!(f2.nilpotency_class(), None);
    }
}
