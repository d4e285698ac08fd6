//! Intensional rings: polynomial extensions, path and loop subrings, fibre
//! products of such, the unitalization `A+` and the integers.
//!
//! Elements carry no ring handle of their own beyond the coefficient ring;
//! membership is decided by [`VirtualRing::check`]. Homomorphisms between
//! these rings are symbolic [`HomExpr`] terms. All of them act on extra
//! polynomial variables coefficient-wise, so polynomial extension
//! distributes over fibre products: `(L x_C R)[y] = L[y] x_C[y] R[y]`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{loop_factor, one_minus, Endpoint, IntPoly, Monomial, PolyElem, Var};
use crate::ring::{Ring, RingElem, RingHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VirtualElem {
    Poly(PolyElem),
    Pair(Box<VirtualElem>, Box<VirtualElem>),
    /// `(n, a)` in a unitalization
    Unit(BigInt, RingElem),
    Int(BigInt),
}

impl VirtualElem {
    pub fn pair(a: VirtualElem, b: VirtualElem) -> Self {
        VirtualElem::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_poly(&self) -> Result<&PolyElem> {
        match self {
            VirtualElem::Poly(p) => Ok(p),
            other => Err(Error::MembershipViolation(format!("expected a polynomial, got {other}"))),
        }
    }

    pub fn as_pair(&self) -> Result<(&VirtualElem, &VirtualElem)> {
        match self {
            VirtualElem::Pair(a, b) => Ok((a, b)),
            other => Err(Error::MembershipViolation(format!("expected a pair, got {other}"))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VirtualElem::Poly(p) => p.is_zero(),
            VirtualElem::Pair(a, b) => a.is_zero() && b.is_zero(),
            VirtualElem::Unit(n, a) => n.is_zero() && a.is_zero_elem(),
            VirtualElem::Int(n) => n.is_zero(),
        }
    }

    pub fn add(&self, o: &VirtualElem) -> Result<VirtualElem> {
        self.zip(o, &|a, b| a.add(b), &|n, m| n + m)
    }

    pub fn sub(&self, o: &VirtualElem) -> Result<VirtualElem> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &VirtualElem) -> Result<VirtualElem> {
        self.zip(o, &|a, b| a.mul(b), &|n, m| n * m)
    }

    fn zip(
        &self,
        o: &VirtualElem,
        poly: &dyn Fn(&PolyElem, &PolyElem) -> PolyElem,
        int: &dyn Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<VirtualElem> {
        match (self, o) {
            (VirtualElem::Poly(a), VirtualElem::Poly(b)) => {
                if a.base() != b.base() {
                    return Err(Error::RingMismatch(format!("{} vs {}", a.base().label(), b.base().label())));
                }
                Ok(VirtualElem::Poly(poly(a, b)))
            }
            (VirtualElem::Pair(a1, b1), VirtualElem::Pair(a2, b2)) => {
                Ok(VirtualElem::pair(a1.zip(a2, poly, int)?, b1.zip(b2, poly, int)?))
            }
            (VirtualElem::Int(n), VirtualElem::Int(m)) => Ok(VirtualElem::Int(int(n, m))),
            (VirtualElem::Unit(..), VirtualElem::Unit(..)) => {
                Err(Error::Unsupported("unitalization arithmetic goes through VirtualRing".into()))
            }
            (a, b) => Err(Error::MembershipViolation(format!("shape mismatch: {a} and {b}"))),
        }
    }

    pub fn neg(&self) -> VirtualElem {
        match self {
            VirtualElem::Poly(p) => VirtualElem::Poly(p.neg()),
            VirtualElem::Pair(a, b) => VirtualElem::pair(a.neg(), b.neg()),
            VirtualElem::Unit(n, a) => VirtualElem::Unit(-n, RingElem(a.0.iter().map(|c| -c).collect())),
            VirtualElem::Int(n) => VirtualElem::Int(-n),
        }
    }

    /// Action of `Z[vars]`, component-wise on pairs.
    pub fn mul_int(&self, q: &IntPoly) -> Result<VirtualElem> {
        match self {
            VirtualElem::Poly(p) => Ok(VirtualElem::Poly(p.mul_int(q))),
            VirtualElem::Pair(a, b) => Ok(VirtualElem::pair(a.mul_int(q)?, b.mul_int(q)?)),
            other => Err(Error::Unsupported(format!("polynomial action on {other}"))),
        }
    }

    /// Substitution of variables, component-wise on pairs.
    pub fn substitute(&self, map: &BTreeMap<Var, IntPoly>) -> Result<VirtualElem> {
        match self {
            VirtualElem::Poly(p) => Ok(VirtualElem::Poly(p.substitute(map))),
            VirtualElem::Pair(a, b) => Ok(VirtualElem::pair(a.substitute(map)?, b.substitute(map)?)),
            other => Err(Error::Unsupported(format!("substitution in {other}"))),
        }
    }

    pub fn eval(&self, v: Var, at: Endpoint) -> Result<VirtualElem> {
        match self {
            VirtualElem::Poly(p) => Ok(VirtualElem::Poly(p.eval(v, at))),
            VirtualElem::Pair(a, b) => Ok(VirtualElem::pair(a.eval(v, at)?, b.eval(v, at)?)),
            other => Err(Error::Unsupported(format!("evaluation of {other}"))),
        }
    }
}

impl fmt::Display for VirtualElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VirtualElem::Poly(p) => write!(f, "{p}"),
            VirtualElem::Pair(a, b) => write!(f, "({a}, {b})"),
            VirtualElem::Unit(n, a) => write!(f, "({n}, {a})"),
            VirtualElem::Int(n) => write!(f, "{n}"),
        }
    }
}

/// A set-theoretic section `s` of the right leg of a fibre product,
/// used to manufacture members: `rmap(s(c)) = c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    /// `c -> q * c`; a section of evaluation when `q` takes the value 1 there
    MulInt(IntPoly),
    /// coefficient-wise preimage under a surjective finite hom
    Preimage(RingHom),
    /// the right leg lands in the zero ring
    Zero,
}

impl Section {
    fn apply(&self, c: &VirtualElem, right: &VirtualRing) -> Result<VirtualElem> {
        match self {
            Section::Zero => Ok(right.zero()),
            Section::MulInt(q) => c.mul_int(q),
            Section::Preimage(f) => {
                let p = c.as_poly()?;
                let mut terms = Vec::new();
                for (m, x) in p.terms() {
                    let y = f
                        .preimage(x)
                        .ok_or_else(|| Error::NotSurjective(format!("{x} has no preimage")))?;
                    terms.push((m.clone(), y));
                }
                Ok(VirtualElem::Poly(PolyElem::from_terms(f.source(), terms)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VirtualRing {
    /// Subring of `base[vars]` of polynomials vanishing at the listed
    /// endpoints; `vars = []` is the finite ring itself.
    Poly { base: Ring, vars: Vec<Var>, kernels: Vec<(Var, Endpoint)> },
    /// `{(a, b) : lmap(a) = rmap(b)}`
    Pullback { left: Box<VirtualRing>, right: Box<VirtualRing>, lmap: HomExpr, rmap: HomExpr, section: Section },
    /// `A+ = Z x A` with `(n,a)(m,b) = (nm, nb + ma + ab)`
    Unitalization { base: Ring },
    Integers,
}

impl VirtualRing {
    pub fn finite(r: &Ring) -> Self {
        VirtualRing::Poly { base: r.clone(), vars: vec![], kernels: vec![] }
    }

    /// `R[x]`.
    pub fn poly(r: &Ring, v: Var) -> Self {
        VirtualRing::finite(r).extend(v)
    }

    /// Path ring `E_x R = ker(x = 0)` of `R[x]`.
    pub fn path(r: &Ring, v: Var) -> Self {
        VirtualRing::finite(r).path_of(v)
    }

    /// Loop ring `Omega_x R = ker(x = 0) ∩ ker(x = 1)`.
    pub fn loops(r: &Ring, v: Var) -> Self {
        VirtualRing::finite(r).loop_of(v)
    }

    pub fn unitalization(r: &Ring) -> Self {
        VirtualRing::Unitalization { base: r.clone() }
    }

    pub fn pullback(left: VirtualRing, right: VirtualRing, lmap: HomExpr, rmap: HomExpr, section: Section) -> Self {
        VirtualRing::Pullback { left: Box::new(left), right: Box::new(right), lmap, rmap, section }
    }

    /// Polynomial extension by a fresh variable.
    pub fn extend(&self, v: Var) -> Self {
        self.with_var(v, &[])
    }

    /// Path ring on this ring in a fresh variable.
    pub fn path_of(&self, v: Var) -> Self {
        self.with_var(v, &[Endpoint::Zero])
    }

    /// Loop ring on this ring in a fresh variable.
    pub fn loop_of(&self, v: Var) -> Self {
        self.with_var(v, &[Endpoint::Zero, Endpoint::One])
    }

    /// Polynomials in `v` vanishing at `x = 1` only.
    pub fn copath_of(&self, v: Var) -> Self {
        self.with_var(v, &[Endpoint::One])
    }

    fn with_var(&self, v: Var, ends: &[Endpoint]) -> Self {
        match self {
            VirtualRing::Poly { base, vars, kernels } => {
                assert!(!vars.contains(&v), "variable {v} already adjoined");
                let mut vars = vars.clone();
                vars.push(v);
                let mut kernels = kernels.clone();
                kernels.extend(ends.iter().map(|&e| (v, e)));
                VirtualRing::Poly { base: base.clone(), vars, kernels }
            }
            VirtualRing::Pullback { left, right, lmap, rmap, section } => VirtualRing::Pullback {
                left: Box::new(left.with_var(v, ends)),
                right: Box::new(right.with_var(v, ends)),
                lmap: lmap.clone(),
                rmap: rmap.clone(),
                section: section.clone(),
            },
            other => panic!("polynomial extension of {other:?} is not supported"),
        }
    }

    /// Variables adjoined so far.
    pub fn vars(&self) -> Vec<Var> {
        match self {
            VirtualRing::Poly { vars, .. } => vars.clone(),
            VirtualRing::Pullback { left, .. } => left.vars(),
            _ => vec![],
        }
    }

    pub fn zero(&self) -> VirtualElem {
        match self {
            VirtualRing::Poly { base, .. } => VirtualElem::Poly(PolyElem::zero(base)),
            VirtualRing::Pullback { left, right, .. } => VirtualElem::pair(left.zero(), right.zero()),
            VirtualRing::Unitalization { base } => VirtualElem::Unit(BigInt::zero(), base.zero()),
            VirtualRing::Integers => VirtualElem::Int(BigInt::zero()),
        }
    }

    pub fn add(&self, a: &VirtualElem, b: &VirtualElem) -> Result<VirtualElem> {
        match (self, a, b) {
            (VirtualRing::Unitalization { base }, VirtualElem::Unit(n, x), VirtualElem::Unit(m, y)) => {
                Ok(VirtualElem::Unit(n + m, base.add(x, y)))
            }
            _ => a.add(b),
        }
    }

    pub fn neg(&self, a: &VirtualElem) -> Result<VirtualElem> {
        match (self, a) {
            (VirtualRing::Unitalization { base }, VirtualElem::Unit(n, x)) => Ok(VirtualElem::Unit(-n, base.neg(x))),
            _ => Ok(a.neg()),
        }
    }

    pub fn sub(&self, a: &VirtualElem, b: &VirtualElem) -> Result<VirtualElem> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &VirtualElem, b: &VirtualElem) -> Result<VirtualElem> {
        match (self, a, b) {
            (VirtualRing::Unitalization { base }, VirtualElem::Unit(n, x), VirtualElem::Unit(m, y)) => {
                let second = base.add(&base.add(&base.scale(y, n), &base.scale(x, m)), &base.mul(x, y));
                Ok(VirtualElem::Unit(n * m, second))
            }
            _ => a.mul(b),
        }
    }

    /// Integer multiple `n * a`.
    pub fn scale(&self, a: &VirtualElem, n: i64) -> Result<VirtualElem> {
        match (self, a) {
            (VirtualRing::Unitalization { base }, VirtualElem::Unit(m, x)) => {
                Ok(VirtualElem::Unit(m * n, base.scale_i64(x, n)))
            }
            _ => a.mul_int(&IntPoly::constant(n)),
        }
    }

    /// Decides membership, naming the violated condition.
    pub fn check(&self, e: &VirtualElem) -> Result<()> {
        match (self, e) {
            (VirtualRing::Poly { base, vars, kernels }, VirtualElem::Poly(p)) => {
                if p.base() != base {
                    return Err(Error::MembershipViolation(format!(
                        "coefficients in {} instead of {}",
                        p.base().label(),
                        base.label()
                    )));
                }
                if let Some(v) = p.vars().into_iter().find(|v| !vars.contains(v)) {
                    return Err(Error::UnknownVariable(v.name()));
                }
                for &(v, at) in kernels {
                    if !p.eval(v, at).is_zero() {
                        return Err(Error::MembershipViolation(format!(
                            "{p} does not vanish at {v} = {}",
                            at.value()
                        )));
                    }
                }
                Ok(())
            }
            (VirtualRing::Pullback { left, right, lmap, rmap, .. }, VirtualElem::Pair(a, b)) => {
                left.check(a)?;
                right.check(b)?;
                let (fa, gb) = (lmap.apply(a)?, rmap.apply(b)?);
                if fa != gb {
                    return Err(Error::MembershipViolation(format!("legs disagree: {fa} vs {gb}")));
                }
                Ok(())
            }
            (VirtualRing::Unitalization { base }, VirtualElem::Unit(_, a)) => {
                if base.is_member(a) {
                    Ok(())
                } else {
                    Err(Error::MembershipViolation(format!("{a} is not reduced")))
                }
            }
            (VirtualRing::Integers, VirtualElem::Int(_)) => Ok(()),
            (r, e) => Err(Error::MembershipViolation(format!("{e} has the wrong shape for {}", r.describe()))),
        }
    }

    pub fn contains(&self, e: &VirtualElem) -> bool {
        self.check(e).is_ok()
    }

    /// A random member with polynomial degree at most `deg` before the
    /// kernel factors are applied.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, deg: u32) -> Result<VirtualElem> {
        match self {
            VirtualRing::Poly { base, vars, kernels } => {
                let mut p = PolyElem::random(base, vars, deg, 4, rng);
                for &v in vars {
                    let zero = kernels.contains(&(v, Endpoint::Zero));
                    let one = kernels.contains(&(v, Endpoint::One));
                    let factor = match (zero, one) {
                        (true, true) => loop_factor(v),
                        (true, false) => IntPoly::var(v),
                        (false, true) => one_minus(v),
                        (false, false) => continue,
                    };
                    p = p.mul_int(&factor);
                }
                Ok(VirtualElem::Poly(p))
            }
            VirtualRing::Pullback { left, right, lmap, rmap, section } => {
                let a = left.random(rng, deg)?;
                let noise = right.random(rng, deg)?;
                // b = s(lmap a) + (noise - s(rmap noise)) has rmap(b) = lmap(a)
                let b = section
                    .apply(&lmap.apply(&a)?, right)?
                    .add(&noise)?
                    .sub(&section.apply(&rmap.apply(&noise)?, right)?)?;
                Ok(VirtualElem::pair(a, b))
            }
            VirtualRing::Unitalization { base } => {
                Ok(VirtualElem::Unit(BigInt::from(rng.gen_range(-5i64..=5)), base.random_elem(rng)))
            }
            VirtualRing::Integers => Ok(VirtualElem::Int(BigInt::from(rng.gen_range(-20i64..=20)))),
        }
    }

    /// `count` random members, led by zero.
    pub fn probes<R: Rng + ?Sized>(&self, rng: &mut R, count: usize, deg: u32) -> Result<Vec<VirtualElem>> {
        let mut out = vec![self.zero()];
        while out.len() < count {
            out.push(self.random(rng, deg)?);
        }
        Ok(out)
    }

    pub fn describe(&self) -> String {
        match self {
            VirtualRing::Poly { base, vars, kernels } => {
                let mut s = base.label().to_string();
                if !vars.is_empty() {
                    let vs: Vec<String> = vars.iter().map(|v| v.name()).collect();
                    s = format!("{s}[{}]", vs.join(","));
                }
                for (v, at) in kernels {
                    s = format!("{s}|{v}={}", at.value());
                }
                s
            }
            VirtualRing::Pullback { left, right, .. } => format!("({} x {})", left.describe(), right.describe()),
            VirtualRing::Unitalization { base } => format!("{}+", base.label()),
            VirtualRing::Integers => "Z".into(),
        }
    }
}

/// Symbolic ring homomorphism between virtual rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomExpr {
    Identity,
    Zero(Box<VirtualRing>),
    /// apply a finite hom to every coefficient
    Coeff(RingHom),
    /// `S -> R[vars]` given by generator images, extended coefficient-wise
    GenImages { source: Ring, target: Ring, images: Vec<PolyElem> },
    Eval(Var, Endpoint),
    Subst(BTreeMap<Var, IntPoly>),
    /// `f = F * f'  ->  F * f'(map)`, `F` the product of monic factors
    FactorSubst { factors: Vec<(Var, IntPoly)>, map: BTreeMap<Var, IntPoly> },
    Fst,
    Snd,
    Pair(Box<HomExpr>, Box<HomExpr>),
    /// first, then second
    Then(Box<HomExpr>, Box<HomExpr>),
    /// `A -> A+`, `a -> (0, a)`
    Inject,
    /// `A+ -> Z`, `(n, a) -> n`
    Augment,
}

impl HomExpr {
    pub fn then(self, second: HomExpr) -> HomExpr {
        match (&self, &second) {
            (HomExpr::Identity, _) => second,
            (_, HomExpr::Identity) => self,
            _ => HomExpr::Then(Box::new(self), Box::new(second)),
        }
    }

    pub fn pair(a: HomExpr, b: HomExpr) -> HomExpr {
        HomExpr::Pair(Box::new(a), Box::new(b))
    }

    pub fn subst1(v: Var, q: IntPoly) -> HomExpr {
        HomExpr::Subst(BTreeMap::from([(v, q)]))
    }

    pub fn apply(&self, e: &VirtualElem) -> Result<VirtualElem> {
        match self {
            HomExpr::Identity => Ok(e.clone()),
            HomExpr::Zero(target) => Ok(target.zero()),
            HomExpr::Coeff(f) => {
                let p = e.as_poly()?;
                if p.base() != f.source() {
                    return Err(Error::RingMismatch(format!("{} is not {}", p.base().label(), f.source().label())));
                }
                Ok(VirtualElem::Poly(p.map_coeffs(f.target(), |c| f.apply(c))))
            }
            HomExpr::GenImages { source, target, images } => {
                let p = e.as_poly()?;
                if p.base() != source {
                    return Err(Error::RingMismatch(format!("{} is not {}", p.base().label(), source.label())));
                }
                let mut out = PolyElem::zero(target);
                for (m, c) in p.terms() {
                    for (i, &k) in c.0.iter().enumerate() {
                        if k != 0 {
                            let img = images[i].scale(&BigInt::from(k)).mul_int(&IntPoly::monomial(m.clone(), 1));
                            out = out.add(&img);
                        }
                    }
                }
                Ok(VirtualElem::Poly(out))
            }
            HomExpr::Eval(v, at) => e.eval(*v, *at),
            HomExpr::Subst(map) => e.substitute(map),
            HomExpr::FactorSubst { factors, map } => {
                let p = e.as_poly()?;
                let mut q = p.clone();
                let mut total = IntPoly::one();
                for (v, f) in factors {
                    let (quot, rem) = q.div_rem_monic(*v, f)?;
                    if !rem.is_zero() {
                        return Err(Error::MembershipViolation(format!("{p} is not divisible by {f}")));
                    }
                    q = quot;
                    total = total.mul(f);
                }
                Ok(VirtualElem::Poly(q.substitute(map).mul_int(&total)))
            }
            HomExpr::Fst => Ok(e.as_pair()?.0.clone()),
            HomExpr::Snd => Ok(e.as_pair()?.1.clone()),
            HomExpr::Pair(a, b) => Ok(VirtualElem::pair(a.apply(e)?, b.apply(e)?)),
            HomExpr::Then(a, b) => b.apply(&a.apply(e)?),
            HomExpr::Inject => {
                let p = e.as_poly()?;
                let c = p
                    .as_constant()
                    .ok_or_else(|| Error::Unsupported("unitalization of polynomial elements".into()))?;
                Ok(VirtualElem::Unit(BigInt::zero(), c))
            }
            HomExpr::Augment => match e {
                VirtualElem::Unit(n, _) => Ok(VirtualElem::Int(n.clone())),
                other => Err(Error::MembershipViolation(format!("{other} is not in a unitalization"))),
            },
        }
    }
}

/// A homomorphism with declared source and target.
#[derive(Clone, Debug)]
pub struct VirtualHom {
    pub source: VirtualRing,
    pub target: VirtualRing,
    pub expr: HomExpr,
}

impl VirtualHom {
    pub fn new(source: VirtualRing, target: VirtualRing, expr: HomExpr) -> Self {
        VirtualHom { source, target, expr }
    }

    pub fn apply(&self, e: &VirtualElem) -> Result<VirtualElem> {
        self.expr.apply(e)
    }

    /// Checks that every probe and every sum and product of consecutive
    /// probes is sent into the target additively and multiplicatively.
    pub fn check_on(&self, probes: &[VirtualElem]) -> Result<()> {
        for a in probes {
            self.source.check(a)?;
            let fa = self.apply(a)?;
            self.target
                .check(&fa)
                .map_err(|err| Error::NotHom(format!("image of {a} leaves the target: {err}")))?;
        }
        for (a, b) in probes.iter().zip(probes.iter().cycle().skip(1)) {
            let (fa, fb) = (self.apply(a)?, self.apply(b)?);
            let sum = self.apply(&self.source.add(a, b)?)?;
            if sum != self.target.add(&fa, &fb)? {
                return Err(Error::NotHom(format!("not additive on {a}, {b}")));
            }
            let prod = self.apply(&self.source.mul(a, b)?)?;
            if prod != self.target.mul(&fa, &fb)? {
                return Err(Error::NotHom(format!("not multiplicative on {a}, {b}")));
            }
        }
        Ok(())
    }

    /// Whether two maps agree on every probe; returns the first witness
    /// of disagreement.
    pub fn agrees_with(&self, other: &HomExpr, probes: &[VirtualElem]) -> Result<()> {
        for a in probes {
            let (x, y) = (self.apply(a)?, other.apply(a)?);
            if x != y {
                return Err(Error::VerificationFailure(format!("maps differ on {a}: {x} vs {y}")));
            }
        }
        Ok(())
    }
}

/// Lifts an element of a finite ring to a constant polynomial.
pub fn constant(r: &Ring, a: RingElem) -> VirtualElem {
    VirtualElem::Poly(PolyElem::constant(r, a))
}

/// `a * v` as a polynomial.
pub fn times_var(r: &Ring, a: RingElem, v: Var) -> VirtualElem {
    VirtualElem::Poly(PolyElem::term(r, Monomial::var(v, 1), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, RingSpec};
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn sq0() -> Ring {
        Arc::new(FiniteRing::new(RingSpec { label: "sq0".into(), orders: vec![2], mul: vec![vec![vec![0]]], unit: None }).unwrap())
    }

    #[test]
    fn path_and_loop_membership() {
        let r = sq0();
        let x = Var::named("x");
        let a = r.generator(0);
        let ax = times_var(&r, a.clone(), x);
        assert!(VirtualRing::path(&r, x).contains(&ax));
        assert!(!VirtualRing::loops(&r, x).contains(&ax));
        let l = VirtualElem::Poly(PolyElem::constant(&r, a).mul_int(&loop_factor(x)));
        assert!(VirtualRing::loops(&r, x).contains(&l));
        assert!(VirtualRing::loops(&r, x).contains(&VirtualRing::loops(&r, x).zero()));
    }

    #[test]
    fn unitalization_arithmetic() {
        let r = sq0();
        let plus = VirtualRing::unitalization(&r);
        let one = VirtualElem::Unit(BigInt::one(), r.zero());
        let u = VirtualElem::Unit(BigInt::one(), r.generator(0));
        assert_eq!(plus.mul(&u, &u).unwrap(), one);
        assert_eq!(plus.mul(&one, &u).unwrap(), u);
        let aug = HomExpr::Augment;
        let inc = HomExpr::Inject;
        let a = constant(&r, r.generator(0));
        assert!(aug.apply(&inc.apply(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn pullback_probes_are_members() {
        let r = sq0();
        let x = Var::named("x");
        // E_x R x_R R along x = 1 and the identity
        let v = VirtualRing::pullback(
            VirtualRing::finite(&r),
            VirtualRing::path(&r, x),
            HomExpr::Identity,
            HomExpr::Eval(x, Endpoint::One),
            Section::MulInt(IntPoly::var(x)),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in v.probes(&mut rng, 50, 3).unwrap() {
            v.check(&p).unwrap();
        }
        let y = Var::named("y");
        let vy = v.extend(y);
        for p in vy.probes(&mut rng, 50, 2).unwrap() {
            vy.check(&p).unwrap();
        }
    }
}
