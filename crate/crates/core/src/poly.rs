//! Exact sparse multivariate polynomials with central variables.
//!
//! [`PolyElem`] has coefficients in a finite ring; [`IntPoly`] has integer
//! coefficients and acts on the former through the Z-module structure.
//! Affine substitutions such as `x -> 1 - x` are expressed with `IntPoly`
//! because `1 - x` is not an element of a nonunital `R[x]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

/// An interned variable name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

fn interner() -> &'static Mutex<Vec<String>> {
    static NAMES: OnceLock<Mutex<Vec<String>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(Vec::new()))
}

impl Var {
    pub fn named(name: &str) -> Var {
        let mut names = interner().lock().unwrap();
        if let Some(i) = names.iter().position(|n| n == name) {
            return Var(i as u32);
        }
        names.push(name.to_string());
        Var(names.len() as u32 - 1)
    }

    pub fn name(self) -> String {
        interner().lock().unwrap()[self.0 as usize].clone()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Var::named(&s))
    }
}

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes `v` from the monomial, returning its exponent.
    pub fn split_off(&self, v: Var) -> (u32, Monomial) {
        let e = self.degree_in(v);
        (e, Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect()))
    }

    pub fn with_exponent(&self, v: Var, e: u32) -> Monomial {
        let (_, rest) = self.split_off(v);
        rest.mul(&Monomial::var(v, e))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = IntPoly::zero();
        p.add_term(Monomial::one(), BigInt::from(c));
        p
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    pub fn var(v: Var) -> Self {
        IntPoly::monomial(Monomial::var(v, 1), 1)
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        let mut p = IntPoly::zero();
        p.add_term(m, BigInt::from(c));
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut p = IntPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, map: &BTreeMap<Var, IntPoly>) -> IntPoly {
        let mut cache = PowerCache::default();
        let mut out = IntPoly::zero();
        for (m, c) in &self.terms {
            let img = cache.monomial_image(m, map);
            for (m2, c2) in &img.terms {
                out.add_term(m2.clone(), c * c2);
            }
        }
        out
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Leading coefficient in `v` is 1 (as a polynomial in the other
    /// variables it must be the constant 1).
    fn is_monic_univariate_in(&self, v: Var) -> bool {
        let d = self.degree_in(v);
        self.terms.keys().all(|m| m.vars().all(|w| w == v))
            && self.terms.get(&Monomial::var(v, d)).is_some_and(|c| c.is_one())
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct PowerCache {
    powers: BTreeMap<(Var, u32), IntPoly>,
}

impl PowerCache {
    fn power(&mut self, v: Var, e: u32, map: &BTreeMap<Var, IntPoly>) -> IntPoly {
        if let Some(p) = self.powers.get(&(v, e)) {
            return p.clone();
        }
        let base = map.get(&v).cloned().unwrap_or_else(|| IntPoly::var(v));
        let p = if e == 0 {
            IntPoly::one()
        } else {
            self.power(v, e - 1, map).mul(&base)
        };
        self.powers.insert((v, e), p.clone());
        p
    }

    fn monomial_image(&mut self, m: &Monomial, map: &BTreeMap<Var, IntPoly>) -> IntPoly {
        let mut acc = IntPoly::one();
        for &(v, e) in m.pairs() {
            acc = acc.mul(&self.power(v, e, map));
        }
        acc
    }
}

/// Either endpoint of the unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Endpoint {
    Zero,
    One,
}

impl Endpoint {
    pub fn value(self) -> i64 {
        match self {
            Endpoint::Zero => 0,
            Endpoint::One => 1,
        }
    }
}

/// Polynomial with coefficients in a finite ring and central variables.
///
/// Canonical form: no zero coefficients, so two equal polynomials have
/// identical term maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyElem {
    base: Ring,
    terms: BTreeMap<Monomial, RingElem>,
}

impl PolyElem {
    pub fn zero(base: &Ring) -> Self {
        PolyElem { base: base.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(base: &Ring, c: RingElem) -> Self {
        PolyElem::term(base, Monomial::one(), c)
    }

    pub fn term(base: &Ring, m: Monomial, c: RingElem) -> Self {
        let mut p = PolyElem::zero(base);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(base: &Ring, terms: impl IntoIterator<Item = (Monomial, RingElem)>) -> Self {
        let mut p = PolyElem::zero(base);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> RingElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// The element as a constant of the base ring, if it has no variables.
    pub fn as_constant(&self) -> Option<RingElem> {
        if self.terms.keys().all(|m| m.is_one()) {
            Some(self.coeff(&Monomial::one()))
        } else {
            None
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: RingElem) {
        if c.is_zero_elem() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.base.add(e.get(), &c);
                if s.is_zero_elem() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &PolyElem) -> PolyElem {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> PolyElem {
        PolyElem {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), self.base.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &PolyElem) -> PolyElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PolyElem) -> PolyElem {
        let mut p = PolyElem::zero(&self.base);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), self.base.mul(c1, c2));
            }
        }
        p
    }

    pub fn scale(&self, n: &BigInt) -> PolyElem {
        let mut p = PolyElem::zero(&self.base);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), self.base.scale(c, n));
        }
        p
    }

    /// Action of an integer polynomial.
    pub fn mul_int(&self, q: &IntPoly) -> PolyElem {
        let mut p = PolyElem::zero(&self.base);
        for (m1, c1) in &self.terms {
            for (m2, c2) in q.terms() {
                p.add_term(m1.mul(m2), self.base.scale(c1, c2));
            }
        }
        p
    }

    /// Evaluation of one variable at an endpoint: `x = 0` keeps the terms
    /// free of `x`; `x = 1` sends `sum r_n x^n` to `sum r_n`.
    pub fn eval(&self, v: Var, at: Endpoint) -> PolyElem {
        let mut p = PolyElem::zero(&self.base);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            match at {
                Endpoint::Zero if e > 0 => {}
                _ => p.add_term(rest, c.clone()),
            }
        }
        p
    }

    /// Simultaneous substitution of integer polynomials for variables.
    pub fn substitute(&self, map: &BTreeMap<Var, IntPoly>) -> PolyElem {
        let mut cache = PowerCache::default();
        self.substitute_with(|m| cache.monomial_image(m, map))
    }

    /// Substitution given by the image of each monomial.
    pub fn substitute_with(&self, mut image: impl FnMut(&Monomial) -> IntPoly) -> PolyElem {
        let mut p = PolyElem::zero(&self.base);
        for (m, c) in &self.terms {
            for (m2, c2) in image(m).terms() {
                p.add_term(m2.clone(), self.base.scale(c, c2));
            }
        }
        p
    }

    /// Applies a function to every coefficient, landing in `target`.
    pub fn map_coeffs(&self, target: &Ring, f: impl Fn(&RingElem) -> RingElem) -> PolyElem {
        let mut p = PolyElem::zero(target);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Division by an integer polynomial in `v` with leading coefficient 1:
    /// returns `(q, r)` with `self = divisor * q + r` and `deg_v r < deg_v divisor`.
    pub fn div_rem_monic(&self, v: Var, divisor: &IntPoly) -> Result<(PolyElem, PolyElem)> {
        if !divisor.is_monic_univariate_in(v) {
            return Err(Error::Unsupported(format!("divisor {divisor} is not monic in {v}")));
        }
        let d = divisor.degree_in(v);
        let mut rem = self.clone();
        let mut quot = PolyElem::zero(&self.base);
        loop {
            let top = rem
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(v) >= d)
                .max_by_key(|(m, _)| m.degree_in(v))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = top else { break };
            let e = m.degree_in(v);
            let shift = m.with_exponent(v, e - d);
            let t = PolyElem::term(&self.base, shift, c);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul_int(divisor));
        }
        Ok((quot, rem))
    }

    pub fn random<R: Rng + ?Sized>(base: &Ring, vars: &[Var], max_deg: u32, max_terms: usize, rng: &mut R) -> PolyElem {
        let n = rng.gen_range(0..=max_terms);
        let mut p = PolyElem::zero(base);
        for _ in 0..n {
            let m = Monomial::from_pairs(vars.iter().map(|&v| (v, rng.gen_range(0..=max_deg))).collect());
            p.add_term(m, base.random_elem(rng));
        }
        p
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    monomial: m.pairs().iter().map(|&(v, e)| (v.name(), e)).collect(),
                    coeff: c.0.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(base: &Ring, j: &PolyJson) -> Result<PolyElem> {
        let mut p = PolyElem::zero(base);
        for t in &j.terms {
            if t.coeff.len() != base.rank() {
                return Err(Error::Dimension(format!("coefficient {:?} has wrong length", t.coeff)));
            }
            let m = Monomial::from_pairs(t.monomial.iter().map(|(v, &e)| (Var::named(v), e)).collect());
            p.add_term(m, base.elem(&t.coeff));
        }
        Ok(p)
    }

    /// Parses the text form `[c1,...]*x^i*y^j + ...`.
    pub fn parse(base: &Ring, s: &str) -> Result<PolyElem> {
        let s = s.trim();
        let mut p = PolyElem::zero(base);
        if s == "0" || s.is_empty() {
            return Ok(p);
        }
        for term in s.split(" + ") {
            let mut parts = term.trim().split('*');
            let coeff = parts.next().ok_or_else(|| Error::Parse(format!("empty term in `{s}`")))?;
            let inner = coeff
                .strip_prefix('[')
                .and_then(|c| c.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("coefficient `{coeff}` is not a coordinate vector")))?;
            let coords = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(format!("`{c}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?
            };
            if coords.len() != base.rank() {
                return Err(Error::Parse(format!("coefficient `{coeff}` has wrong length")));
            }
            let mut pairs = Vec::new();
            for factor in parts {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|e| Error::Parse(e.to_string()))?),
                    None => (factor, 1),
                };
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(Error::Parse(format!("bad variable `{name}`")));
                }
                pairs.push((Var::named(name), exp));
            }
            p.add_term(Monomial::from_pairs(pairs), base.elem(&coords));
        }
        Ok(p)
    }
}

impl fmt::Display for PolyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// JSON term-map form of a polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: BTreeMap<String, u32>,
    pub coeff: Vec<i64>,
}

/// `v^2 - v`, the generator of the loop ideal.
pub fn loop_factor(v: Var) -> IntPoly {
    IntPoly::var(v).pow(2).sub(&IntPoly::var(v))
}

/// `1 - v`.
pub fn one_minus(v: Var) -> IntPoly {
    IntPoly::one().sub(&IntPoly::var(v))
}

/// Single-variable substitution map.
pub fn subst1(v: Var, q: IntPoly) -> BTreeMap<Var, IntPoly> {
    BTreeMap::from([(v, q)])
}

/// Integer value of a constant `IntPoly`.
pub fn int_value(q: &IntPoly) -> Option<i64> {
    if q.is_zero() {
        return Some(0);
    }
    if q.terms.len() == 1 {
        let (m, c) = q.terms.iter().next().unwrap();
        if m.is_one() {
            return c.to_i64();
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, RingSpec};
    use std::sync::Arc;

    fn z3() -> Ring {
        Arc::new(
            FiniteRing::new(RingSpec { label: "Z/3".into(), orders: vec![3], mul: vec![vec![vec![1]]], unit: Some(vec![1]) })
                .unwrap(),
        )
    }

    #[test]
    fn eval_at_one_sums_coefficients() {
        let r = z3();
        let x = Var::named("x");
        let a = r.elem(&[1]);
        let b = r.elem(&[2]);
        let p = PolyElem::from_terms(&r, [(Monomial::var(x, 2), a.clone()), (Monomial::var(x, 1), b.clone())]);
        assert_eq!(p.eval(x, Endpoint::One).as_constant(), Some(r.add(&a, &b)));
        assert!(p.eval(x, Endpoint::Zero).is_zero());
    }

    #[test]
    fn substitution_of_monomial() {
        let r = z3();
        let (x, y) = (Var::named("x"), Var::named("y"));
        let a = r.elem(&[2]);
        let p = PolyElem::term(&r, Monomial::var(x, 1), a.clone());
        let q = p.substitute(&subst1(x, IntPoly::var(x).mul(&IntPoly::var(y))));
        assert_eq!(q, PolyElem::term(&r, Monomial::from_pairs(vec![(x, 1), (y, 1)]), a));
        assert_eq!(p.substitute(&subst1(x, IntPoly::var(x))), p);
    }

    #[test]
    fn one_minus_x_fixes_loop_factor() {
        let x = Var::named("x");
        let f = loop_factor(x);
        assert_eq!(f.substitute(&subst1(x, one_minus(x))), f);
    }

    #[test]
    fn division_by_loop_factor() {
        let r = z3();
        let x = Var::named("x");
        let a = r.elem(&[1]);
        let q = PolyElem::from_terms(&r, [(Monomial::var(x, 3), a.clone()), (Monomial::one(), a.clone())]);
        let p = q.mul_int(&loop_factor(x));
        let (quot, rem) = p.div_rem_monic(x, &loop_factor(x)).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, q);
    }

    #[test]
    fn text_round_trip() {
        let r = z3();
        let p = PolyElem::parse(&r, "[2]*x^2*y + [1]*x").unwrap();
        assert_eq!(PolyElem::parse(&r, &p.to_string()).unwrap(), p);
        assert!(PolyElem::parse(&r, "[1,2]*x").is_err());
        assert!(PolyElem::parse(&r, "2*x").is_err());
    }
}
