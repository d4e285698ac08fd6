//! Elementary homotopies between ring homomorphisms: certificates, their
//! verification, bounded search, homotopy classes and equivalences.
//!
//! A certificate for `f0 ~ f1: S -> R` is a homomorphism `h: S -> R[x]`
//! with `h|x=0 = f0` and `h|x=1 = f1`. Search is a semi-decision
//! procedure: a miss at degree `d` says nothing about higher degrees.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{edge_path, strict_pi0, Partition, UnionFind};
use crate::poly::{one_minus, subst1, Endpoint, Monomial, PolyElem, PolyJson, Var};
use crate::ring::{enumerate_homs, Ring, RingElem, RingHom};
use crate::vring::{HomExpr, VirtualElem, VirtualHom, VirtualRing};

/// `h: S -> R[x]` given on generators, with its claimed endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub var: Var,
    pub images: Vec<PolyElem>,
    pub f0: RingHom,
    pub f1: RingHom,
}

impl Certificate {
    pub fn source(&self) -> &Ring {
        self.f0.source()
    }

    pub fn target(&self) -> &Ring {
        self.f0.target()
    }

    /// `h(s)` for an arbitrary source element.
    pub fn apply(&self, s: &RingElem) -> PolyElem {
        let mut out = PolyElem::zero(self.target());
        for (img, &c) in self.images.iter().zip(&s.0) {
            if c != 0 {
                out = out.add(&img.scale(&BigInt::from(c)));
            }
        }
        out
    }

    /// The constant certificate for `f ~ f`.
    pub fn reflexive(f: &RingHom, var: Var) -> Certificate {
        let images = f.images().iter().map(|a| PolyElem::constant(f.target(), a.clone())).collect();
        Certificate { var, images, f0: f.clone(), f1: f.clone() }
    }

    /// Certificate for `f1 ~ f0` via `x -> 1 - x`.
    pub fn reversed(&self) -> Certificate {
        let map = subst1(self.var, one_minus(self.var));
        Certificate {
            var: self.var,
            images: self.images.iter().map(|p| p.substitute(&map)).collect(),
            f0: self.f1.clone(),
            f1: self.f0.clone(),
        }
    }

    /// Certificate for `f0 ∘ g ~ f1 ∘ g`.
    pub fn precompose(&self, g: &RingHom) -> Result<Certificate> {
        Ok(Certificate {
            var: self.var,
            images: g.images().iter().map(|a| self.apply(a)).collect(),
            f0: self.f0.compose(g)?,
            f1: self.f1.compose(g)?,
        })
    }

    /// Certificate for `k ∘ f0 ~ k ∘ f1`, using `k[x]`.
    pub fn postcompose(&self, k: &RingHom) -> Result<Certificate> {
        Ok(Certificate {
            var: self.var,
            images: self.images.iter().map(|p| p.map_coeffs(k.target(), |c| k.apply(c))).collect(),
            f0: k.compose(&self.f0)?,
            f1: k.compose(&self.f1)?,
        })
    }

    /// Exact verification: homomorphism relations on generators and both
    /// endpoints. The error names the first failing generator or pair.
    pub fn verify(&self) -> Result<()> {
        let (s, r) = (self.source(), self.target());
        if self.f1.source() != s || self.f1.target() != r {
            return Err(Error::RingMismatch("endpoints have different signatures".into()));
        }
        if self.images.len() != s.rank() {
            return Err(Error::Dimension(format!("need {} images, got {}", s.rank(), self.images.len())));
        }
        for (i, img) in self.images.iter().enumerate() {
            if img.base() != r {
                return Err(Error::RingMismatch(format!("image of g{i} has coefficients outside {}", r.label())));
            }
            if let Some(v) = img.vars().into_iter().find(|&v| v != self.var) {
                return Err(Error::UnknownVariable(v.name()));
            }
            if !img.scale(&BigInt::from(s.orders()[i])).is_zero() {
                return Err(Error::VerificationFailure(format!("order of g{i} does not kill its image {img}")));
            }
            let e0 = img.eval(self.var, Endpoint::Zero);
            if e0 != PolyElem::constant(r, self.f0.images()[i].clone()) {
                return Err(Error::VerificationFailure(format!("endpoint x=0 fails on g{i}: {e0}")));
            }
            let e1 = img.eval(self.var, Endpoint::One);
            if e1 != PolyElem::constant(r, self.f1.images()[i].clone()) {
                return Err(Error::VerificationFailure(format!("endpoint x=1 fails on g{i}: {e1}")));
            }
        }
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                let lhs = self.apply(s.structure_constant(i, j));
                let rhs = self.images[i].mul(&self.images[j]);
                if lhs != rhs {
                    return Err(Error::VerificationFailure(format!("not multiplicative on (g{i}, g{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            source: self.source().label().to_string(),
            target: self.target().label().to_string(),
            var: self.var.name(),
            images: self.images.iter().map(|p| p.to_json()).collect(),
            f0: self.f0.images().iter().map(|a| a.0.clone()).collect(),
            f1: self.f1.images().iter().map(|a| a.0.clone()).collect(),
        }
    }

    pub fn from_json(j: &CertificateJson, source: &Ring, target: &Ring) -> Result<Certificate> {
        let elems = |v: &Vec<Vec<i64>>| v.iter().map(|c| target.elem(c)).collect::<Vec<_>>();
        Ok(Certificate {
            var: Var::named(&j.var),
            images: j.images.iter().map(|p| PolyElem::from_json(target, p)).collect::<Result<_>>()?,
            f0: RingHom::new(source.clone(), target.clone(), elems(&j.f0))?,
            f1: RingHom::new(source.clone(), target.clone(), elems(&j.f1))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub source: String,
    pub target: String,
    pub var: String,
    pub images: Vec<PolyJson>,
    pub f0: Vec<Vec<i64>>,
    pub f1: Vec<Vec<i64>>,
}

/// Consecutive certificates `f = h0 ~ h1 ~ ... ~ g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub start: RingHom,
    pub links: Vec<Certificate>,
}

impl Chain {
    pub fn end(&self) -> &RingHom {
        self.links.last().map_or(&self.start, |c| &c.f1)
    }

    pub fn verify(&self) -> Result<()> {
        let mut cur = &self.start;
        for (k, c) in self.links.iter().enumerate() {
            if &c.f0 != cur {
                return Err(Error::VerificationFailure(format!("link {k} does not start where link {} ends", k.max(1) - 1)));
            }
            c.verify()?;
            cur = &c.f1;
        }
        Ok(())
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug)]
pub enum Search<T> {
    Found(T),
    NotFoundAtBound { degree: u32, searched: u128 },
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            Search::NotFoundAtBound { .. } => None,
        }
    }
}

/// Searches `h: S -> R[x]` of degree at most `d` with `h(0) = f0`,
/// `h(1) = f1`. The constant and top coefficients are forced by the
/// endpoints, so `|R|^(k(d-1))` candidates remain, `k = rank S`.
pub fn search_elementary(f0: &RingHom, f1: &RingHom, d: u32, budget: u128) -> Result<Search<Certificate>> {
    let x = Var::named("x");
    if f0.source() != f1.source() || f0.target() != f1.target() {
        return Err(Error::RingMismatch("endpoints have different signatures".into()));
    }
    let (s, r) = (f0.source(), f0.target());
    if d == 0 {
        return Ok(if f0 == f1 {
            Search::Found(Certificate::reflexive(f0, x))
        } else {
            Search::NotFoundAtBound { degree: 0, searched: 1 }
        });
    }
    let k = s.rank();
    let free = (d - 1) as usize;
    let required = r.order().checked_pow((k * free) as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    // per generator: all polynomials with the forced ends, killed by d_i
    let mut cands: Vec<Vec<PolyElem>> = Vec::with_capacity(k);
    for i in 0..k {
        let killed: Vec<RingElem> = r.elements().filter(|a| r.scale_i64(a, s.orders()[i]).is_zero_elem()).collect();
        let (a0, a1) = (&f0.images()[i], &f1.images()[i]);
        let mut list = Vec::new();
        let mut idx = vec![0usize; free];
        loop {
            let mut terms = vec![(Monomial::one(), a0.clone())];
            let mut top = r.sub(a1, a0);
            for (j, &c) in idx.iter().enumerate() {
                terms.push((Monomial::var(x, j as u32 + 1), killed[c].clone()));
                top = r.sub(&top, &killed[c]);
            }
            terms.push((Monomial::var(x, d), top));
            let p = PolyElem::from_terms(r, terms);
            if p.scale(&BigInt::from(s.orders()[i])).is_zero() {
                list.push(p);
            }
            // next index vector
            let mut pos = 0;
            while pos < free {
                idx[pos] += 1;
                if idx[pos] < killed.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == free {
                break;
            }
        }
        cands.push(list);
    }
    let searched = cands.iter().map(|c| c.len() as u128).product();
    // pair (i, j) becomes checkable once its support is assigned
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            let sup = s
                .structure_constant(i, j)
                .0
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(l, _)| l)
                .max()
                .unwrap_or(0);
            checks[i.max(j).max(sup)].push((i, j));
        }
    }
    let mut chosen = Vec::with_capacity(k);
    if backtrack(s, &cands, &checks, &mut chosen) {
        let cert = Certificate { var: x, images: chosen, f0: f0.clone(), f1: f1.clone() };
        cert.verify()?;
        return Ok(Search::Found(cert));
    }
    Ok(Search::NotFoundAtBound { degree: d, searched })
}

fn backtrack(s: &Ring, cands: &[Vec<PolyElem>], checks: &[Vec<(usize, usize)>], chosen: &mut Vec<PolyElem>) -> bool {
    let level = chosen.len();
    if level == cands.len() {
        return true;
    }
    for p in &cands[level] {
        chosen.push(p.clone());
        let ok = checks[level].iter().all(|&(i, j)| {
            let mut lhs = PolyElem::zero(p.base());
            for (l, &c) in s.structure_constant(i, j).0.iter().enumerate() {
                if c != 0 {
                    lhs = lhs.add(&chosen[l].scale(&BigInt::from(c)));
                }
            }
            lhs == chosen[i].mul(&chosen[j])
        });
        if ok && backtrack(s, cands, checks, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Partition of `Hom(R, S)` by elementary homotopies found at degree `d`.
#[derive(Clone, Debug)]
pub struct Classes {
    pub homs: Vec<RingHom>,
    pub partition: Partition,
    /// certificates found, as `(from, to, certificate)` index pairs
    pub edges: Vec<(usize, usize, Certificate)>,
    /// for every non-root hom, the chain to its class representative
    pub merges: Vec<(usize, Chain)>,
    pub degree: u32,
}

impl Classes {
    pub fn class_count(&self) -> usize {
        self.partition.class_count()
    }

    /// Re-verifies every stored chain and that it connects the right homs.
    pub fn verify(&self) -> Result<()> {
        for (i, chain) in &self.merges {
            chain.verify()?;
            let root = self.partition.classes[self.partition.labels[*i]][0];
            if &chain.start != &self.homs[*i] || chain.end() != &self.homs[root] {
                return Err(Error::VerificationFailure(format!("chain for hom {i} does not reach its representative")));
            }
        }
        let merged: usize = self.partition.classes.iter().map(|c| c.len() - 1).sum();
        if merged != self.merges.len() {
            return Err(Error::VerificationFailure("some merges carry no chain".into()));
        }
        Ok(())
    }
}

/// Computes the homotopy classes of `Hom(R, S)` visible at degree `d`.
pub fn homotopy_classes(r: &Ring, s: &Ring, d: u32, budget: u128) -> Result<Classes> {
    let homs = enumerate_homs(r, s, budget)?;
    classes_of(homs, d, budget)
}

/// Homotopy classes of an explicit list of homs with a common signature.
pub fn classes_of(homs: Vec<RingHom>, d: u32, budget: u128) -> Result<Classes> {
    let n = homs.len();
    let mut edges = Vec::new();
    // pairs already joined are skipped; the closure is the same
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if uf.find(i) == uf.find(j) {
                continue;
            }
            if let Search::Found(c) = search_elementary(&homs[i], &homs[j], d, budget)? {
                uf.union(i, j);
                edges.push((i, j, c));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
    let partition = strict_pi0(n, &pairs);
    let mut merges = Vec::new();
    for (i, hom) in homs.iter().enumerate() {
        let root = partition.classes[partition.labels[i]][0];
        if root == i {
            continue;
        }
        let path = edge_path(&pairs, i, root).expect("merged homs are connected");
        let links = path
            .into_iter()
            .map(|(k, forwards)| if forwards { edges[k].2.clone() } else { edges[k].2.reversed() })
            .collect();
        merges.push((i, Chain { start: hom.clone(), links }));
    }
    Ok(Classes { homs, partition, edges, merges, degree: d })
}

/// A homotopy inverse `g` of `f` with the two witnessing chains.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub inverse: RingHom,
    /// `f ∘ g ≃ id`
    pub fg: Chain,
    /// `g ∘ f ≃ id`
    pub gf: Chain,
}

/// Chain from `from` to `to` inside a computed class structure.
fn chain_between(classes: &Classes, from: &RingHom, to: &RingHom, cap: usize) -> Option<Chain> {
    let a = classes.homs.iter().position(|h| h == from)?;
    let b = classes.homs.iter().position(|h| h == to)?;
    let pairs: Vec<(usize, usize)> = classes.edges.iter().map(|&(p, q, _)| (p, q)).collect();
    let path = edge_path(&pairs, a, b)?;
    if path.len() > cap {
        return None;
    }
    let links = path
        .into_iter()
        .map(|(k, forwards)| {
            let c = &classes.edges[k].2;
            if forwards {
                c.clone()
            } else {
                c.reversed()
            }
        })
        .collect();
    Some(Chain { start: from.clone(), links })
}

/// Looks for `g: S -> R` with `fg ≃ id_S` and `gf ≃ id_R` through chains
/// of at most `chain_cap` certificates of degree at most `d`.
pub fn search_homotopy_equivalence(f: &RingHom, d: u32, budget: u128, chain_cap: usize) -> Result<Search<Equivalence>> {
    let (r, s) = (f.source(), f.target());
    let id_r = RingHom::identity(r.clone());
    let id_s = RingHom::identity(s.clone());
    if f == &id_r {
        let empty = Chain { start: id_r.clone(), links: vec![] };
        return Ok(Search::Found(Equivalence { inverse: id_r, fg: empty.clone(), gf: empty }));
    }
    let ends_r = homotopy_classes(r, r, d, budget)?;
    let ends_s = homotopy_classes(s, s, d, budget)?;
    let candidates = enumerate_homs(s, r, budget)?;
    let searched = candidates.len() as u128;
    for g in candidates {
        let fg = f.compose(&g)?;
        let gf = g.compose(f)?;
        if let (Some(c1), Some(c2)) =
            (chain_between(&ends_s, &fg, &id_s, chain_cap), chain_between(&ends_r, &gf, &id_r, chain_cap))
        {
            return Ok(Search::Found(Equivalence { inverse: g, fg: c1, gf: c2 }));
        }
    }
    Ok(Search::NotFoundAtBound { degree: d, searched })
}

/// A homotopy between maps of virtual rings, checked on probes.
#[derive(Clone, Debug)]
pub struct VirtualCertificate {
    pub source: VirtualRing,
    pub target: VirtualRing,
    pub var: Var,
    pub h: HomExpr,
    pub f0: HomExpr,
    pub f1: HomExpr,
}

impl VirtualCertificate {
    /// Checks that `h` is a homomorphism into `target[var]` and that its
    /// evaluations at `var = 0, 1` are `f0` and `f1`, on every probe.
    pub fn verify_on(&self, probes: &[VirtualElem]) -> Result<()> {
        let hom = VirtualHom::new(self.source.clone(), self.target.extend(self.var), self.h.clone());
        hom.check_on(probes)?;
        for (end, f) in [(Endpoint::Zero, &self.f0), (Endpoint::One, &self.f1)] {
            let endpoint = hom.expr.clone().then(HomExpr::Eval(self.var, end));
            VirtualHom::new(self.source.clone(), self.target.clone(), endpoint)
                .agrees_with(f, probes)
                .map_err(|e| Error::VerificationFailure(format!("endpoint {}={}: {e}", self.var, end.value())))?;
        }
        Ok(())
    }

    /// The same homotopy run backwards.
    pub fn reversed(&self) -> VirtualCertificate {
        VirtualCertificate {
            h: self.h.clone().then(HomExpr::subst1(self.var, one_minus(self.var))),
            f0: self.f1.clone(),
            f1: self.f0.clone(),
            ..self.clone()
        }
    }
}

/// The contraction of `E_x R`: `p(x) -> p(xy)`, from `0` to the identity.
pub fn path_contraction(r: &Ring, x: Var, y: Var) -> VirtualCertificate {
    let e = VirtualRing::path(r, x);
    VirtualCertificate {
        source: e.clone(),
        target: e.clone(),
        var: y,
        h: crate::simplex::e_contraction(x, y),
        f0: HomExpr::Zero(Box::new(e)),
        f1: HomExpr::Identity,
    }
}

/// `a_n -> a_n t^n` on a ring graded by generator degrees, `A1² = 0`:
/// from the projection onto degree 0 to the identity.
pub fn graded_certificate(r: &Ring, degrees: &[u32], var: Var) -> Result<Certificate> {
    if degrees.len() != r.rank() {
        return Err(Error::Dimension("one degree per generator".into()));
    }
    let images: Vec<PolyElem> = (0..r.rank())
        .map(|i| PolyElem::term(r, Monomial::var(var, degrees[i]), r.generator(i)))
        .collect();
    let proj: Vec<RingElem> = (0..r.rank()).map(|i| if degrees[i] == 0 { r.generator(i) } else { r.zero() }).collect();
    Ok(Certificate {
        var,
        images,
        f0: RingHom::new(r.clone(), r.clone(), proj)?,
        f1: RingHom::identity(r.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, RingSpec};
    use std::sync::Arc;

    fn ring(label: &str, orders: Vec<i64>, mul: Vec<Vec<Vec<i64>>>, unit: Option<Vec<i64>>) -> Ring {
        Arc::new(FiniteRing::new(RingSpec { label: label.into(), orders, mul, unit }).unwrap())
    }

    #[test]
    fn square_zero_is_contractible_at_degree_one() {
        let r = ring("sq0", vec![2], vec![vec![vec![0]]], None);
        let id = RingHom::identity(r.clone());
        let zero = RingHom::zero(r.clone(), r.clone());
        let c = search_elementary(&id, &zero, 1, 1000).unwrap().found().unwrap();
        c.verify().unwrap();
        c.reversed().verify().unwrap();
    }

    #[test]
    fn unital_f2_has_no_path_from_id_to_zero() {
        let r = ring("F2", vec![2], vec![vec![vec![1]]], Some(vec![1]));
        let id = RingHom::identity(r.clone());
        let zero = RingHom::zero(r.clone(), r.clone());
        for d in 0..=3 {
            assert!(search_elementary(&id, &zero, d, 1 << 20).unwrap().found().is_none());
        }
    }

    #[test]
    fn corrupted_certificate_is_located() {
        let r = ring("sq0", vec![2], vec![vec![vec![0]]], None);
        let id = RingHom::identity(r.clone());
        let zero = RingHom::zero(r.clone(), r.clone());
        let mut c = search_elementary(&zero, &id, 1, 1000).unwrap().found().unwrap();
        c.images[0] = c.images[0].add(&PolyElem::constant(&r, r.generator(0)));
        let err = c.verify().unwrap_err().to_string();
        assert!(err.contains("g0"), "{err}");
    }
}
