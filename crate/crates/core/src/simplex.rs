//! The simplicial ring `R[Δ]` and explicit homotopy formulas.
//!
//! Level `n` is `R[t0..tn]/(t0 + ... + tn - 1)`, stored as polynomials in
//! `t1..tn` with `t0 = 1 - (t1 + ... + tn)` eliminated. Faces and
//! degeneracies are the usual substitutions on `t0..tn`, rewritten in the
//! remaining variables.

use std::cell::RefCell;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{loop_factor, one_minus, Endpoint, IntPoly, Monomial, PolyElem, Var};
use crate::ring::{zero_ring, Ring};
use crate::vring::{HomExpr, Section, VirtualRing};

/// `t_j` for `j >= 1`.
pub fn t(j: usize) -> Var {
    Var::named(&format!("t{j}"))
}

/// `t_j` at level `n` as an integer polynomial, including `t0`.
fn t_at(n: usize, j: usize) -> IntPoly {
    if j == 0 {
        (1..=n).fold(IntPoly::one(), |acc, k| acc.sub(&IntPoly::var(t(k))))
    } else {
        IntPoly::var(t(j))
    }
}

#[derive(Clone, Debug)]
pub struct SimplexRing {
    pub base: Ring,
    pub n: usize,
}

impl SimplexRing {
    pub fn new(base: &Ring, n: usize) -> Self {
        SimplexRing { base: base.clone(), n }
    }

    pub fn vars(&self) -> Vec<Var> {
        (1..=self.n).map(t).collect()
    }

    pub fn ring(&self) -> VirtualRing {
        self.vars().into_iter().fold(VirtualRing::finite(&self.base), |r, v| r.extend(v))
    }
}

/// Substitution realizing the face `d_i: R[Δ^n] -> R[Δ^{n-1}]`.
pub fn face_map(n: usize, i: usize) -> Result<BTreeMap<Var, IntPoly>> {
    if n == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, level: n });
    }
    let mut map = BTreeMap::new();
    for j in 1..=n {
        let img = if j < i {
            t_at(n - 1, j)
        } else if j == i {
            IntPoly::zero()
        } else {
            t_at(n - 1, j - 1)
        };
        map.insert(t(j), img);
    }
    Ok(map)
}

/// Substitution realizing the degeneracy `s_i: R[Δ^n] -> R[Δ^{n+1}]`.
pub fn degeneracy_map(n: usize, i: usize) -> Result<BTreeMap<Var, IntPoly>> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, level: n });
    }
    let mut map = BTreeMap::new();
    for j in 1..=n {
        let img = if j < i {
            t_at(n + 1, j)
        } else if j == i {
            t_at(n + 1, j).add(&t_at(n + 1, j + 1))
        } else {
            t_at(n + 1, j + 1)
        };
        map.insert(t(j), img);
    }
    Ok(map)
}

thread_local! {
    /// monomial images under `(is_face, n, i)`
    static MEMO: RefCell<HashMap<(bool, usize, usize), (BTreeMap<Var, IntPoly>, HashMap<Monomial, IntPoly>)>> =
        RefCell::new(HashMap::new());
}

fn apply_memo(face: bool, n: usize, i: usize, p: &PolyElem) -> Result<PolyElem> {
    MEMO.with(|memo| {
        let mut memo = memo.borrow_mut();
        let entry = match memo.entry((face, n, i)) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                let map = if face { face_map(n, i)? } else { degeneracy_map(n, i)? };
                e.insert((map, HashMap::new()))
            }
        };
        let (map, images) = entry;
        Ok(p.substitute_with(|m| {
            images
                .entry(m.clone())
                .or_insert_with(|| IntPoly::monomial(m.clone(), 1).substitute(map))
                .clone()
        }))
    })
}

pub fn face(n: usize, i: usize, p: &PolyElem) -> Result<PolyElem> {
    apply_memo(true, n, i, p)
}

pub fn degeneracy(n: usize, i: usize, p: &PolyElem) -> Result<PolyElem> {
    apply_memo(false, n, i, p)
}

/// One of the five families of simplicial identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityFamily {
    /// `d_i d_j = d_{j-1} d_i`, `i < j`
    FaceFace,
    /// `d_i s_j = s_{j-1} d_i`, `i < j`
    FaceDegenBelow,
    /// `d_j s_j = d_{j+1} s_j = id`
    FaceDegenEqual,
    /// `d_i s_j = s_j d_{i-1}`, `i > j + 1`
    FaceDegenAbove,
    /// `s_i s_j = s_{j+1} s_i`, `i <= j`
    DegenDegen,
}

impl IdentityFamily {
    pub const ALL: [IdentityFamily; 5] = [
        IdentityFamily::FaceFace,
        IdentityFamily::FaceDegenBelow,
        IdentityFamily::FaceDegenEqual,
        IdentityFamily::FaceDegenAbove,
        IdentityFamily::DegenDegen,
    ];
}

/// Checks one identity family at level `n` on an element of `R[Δ^n]`.
/// Compositions are written right to left: `d_i d_j` applies `d_j` first.
pub fn check_identity(family: IdentityFamily, n: usize, p: &PolyElem) -> Result<()> {
    let fail = |what: String| Err(Error::VerificationFailure(format!("{what} at level {n} on {p}")));
    match family {
        IdentityFamily::FaceFace => {
            for j in 1..=n {
                for i in 0..j {
                    if n < 2 {
                        continue;
                    }
                    let lhs = face(n - 1, i, &face(n, j, p)?)?;
                    let rhs = face(n - 1, j - 1, &face(n, i, p)?)?;
                    if lhs != rhs {
                        return fail(format!("d{i} d{j} != d{} d{i}", j - 1));
                    }
                }
            }
        }
        IdentityFamily::FaceDegenBelow => {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = face(n + 1, i, &degeneracy(n, j, p)?)?;
                    let rhs = degeneracy(n - 1, j - 1, &face(n, i, p)?)?;
                    if lhs != rhs {
                        return fail(format!("d{i} s{j} != s{} d{i}", j - 1));
                    }
                }
            }
        }
        IdentityFamily::FaceDegenEqual => {
            for j in 0..=n {
                let s = degeneracy(n, j, p)?;
                if &face(n + 1, j, &s)? != p || &face(n + 1, j + 1, &s)? != p {
                    return fail(format!("d{j} s{j} or d{} s{j} is not the identity", j + 1));
                }
            }
        }
        IdentityFamily::FaceDegenAbove => {
            for j in 0..=n {
                for i in (j + 2)..=(n + 1) {
                    let lhs = face(n + 1, i, &degeneracy(n, j, p)?)?;
                    let rhs = degeneracy(n - 1, j, &face(n, i - 1, p)?)?;
                    if lhs != rhs {
                        return fail(format!("d{i} s{j} != s{j} d{}", i - 1));
                    }
                }
            }
        }
        IdentityFamily::DegenDegen => {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = degeneracy(n + 1, i, &degeneracy(n, j, p)?)?;
                    let rhs = degeneracy(n + 1, j + 1, &degeneracy(n, i, p)?)?;
                    if lhs != rhs {
                        return fail(format!("s{i} s{j} != s{} s{i}", j + 1));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Counts from a run of [`simplicial_suite`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub max_level: usize,
    pub lemma_max_level: usize,
    pub probes: usize,
    pub identity_checks: usize,
    pub lemma_checks: usize,
}

/// All identity families for `n <= max_n` and the vertex-split maps for
/// `n <= lemma_max`, each on `probes` random elements.
pub fn simplicial_suite<R: Rng + ?Sized>(r: &Ring, max_n: usize, lemma_max: usize, probes: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut rep = SuiteReport { max_level: max_n, lemma_max_level: lemma_max, probes, identity_checks: 0, lemma_checks: 0 };
    for n in 0..=max_n {
        let vars = SimplexRing::new(r, n).vars();
        for _ in 0..probes {
            let p = PolyElem::random(r, &vars, 2, 3, rng);
            for fam in IdentityFamily::ALL {
                check_identity(fam, n, &p)?;
                rep.identity_checks += 1;
            }
        }
    }
    let x = Var::named("x");
    for n in 0..=lemma_max {
        let mut vars = SimplexRing::new(r, n).vars();
        vars.push(x);
        for _ in 0..probes {
            check_lemma_h(x, n, &PolyElem::random(r, &vars, 2, 3, rng))?;
            rep.lemma_checks += 1;
        }
    }
    Ok(rep)
}

/// The map `h_v` on `R[x][Δ^n]` for the vertex split `v(i)`:
/// `x -> x (t0 + ... + ti)`, fixing `R[Δ^n]`. `i = -1` sends `x` to 0 and
/// `i = n` is the identity.
pub fn lemma_h(x: Var, n: usize, i: isize) -> Result<BTreeMap<Var, IntPoly>> {
    if i < -1 || i > n as isize {
        return Err(Error::IndexOutOfRange { index: (i + 1) as usize, level: n });
    }
    let mut weight = IntPoly::zero();
    for j in 0..=i {
        weight = weight.add(&t_at(n, j as usize));
    }
    Ok(BTreeMap::from([(x, IntPoly::var(x).mul(&weight))]))
}

/// Index of `v ∘ δ_k`, where `δ_k` skips `k`.
pub fn split_after_face(i: isize, k: usize) -> isize {
    if (k as isize) <= i {
        i - 1
    } else {
        i
    }
}

/// Index of `v ∘ σ_k`, where `σ_k` repeats `k`.
pub fn split_after_degeneracy(i: isize, k: usize) -> isize {
    if (k as isize) <= i {
        i + 1
    } else {
        i
    }
}

/// Checks `d_k h_v = h_{v δ_k} d_k` and `s_k h_v = h_{v σ_k} s_k` for every
/// `v` and `k` at level `n`, on one element of `R[x][Δ^n]`.
pub fn check_lemma_h(x: Var, n: usize, p: &PolyElem) -> Result<()> {
    for i in -1..=(n as isize) {
        let hp = p.substitute(&lemma_h(x, n, i)?);
        for k in 0..=n {
            if n > 0 {
                let lhs = face(n, k, &hp)?;
                let rhs = face(n, k, p)?.substitute(&lemma_h(x, n - 1, split_after_face(i, k))?);
                if lhs != rhs {
                    return Err(Error::VerificationFailure(format!("d{k} h(v{i}) mismatch at level {n} on {p}")));
                }
            }
            let lhs = degeneracy(n, k, &hp)?;
            let rhs = degeneracy(n, k, p)?.substitute(&lemma_h(x, n + 1, split_after_degeneracy(i, k))?);
            if lhs != rhs {
                return Err(Error::VerificationFailure(format!("s{k} h(v{i}) mismatch at level {n} on {p}")));
            }
        }
    }
    Ok(())
}

/// The contraction `p(x) -> p(xy)` of `E_x R` into `E_x R[y]`.
pub fn e_contraction(x: Var, y: Var) -> HomExpr {
    HomExpr::subst1(x, IntPoly::var(x).mul(&IntPoly::var(y)))
}

/// `σ: a(x) -> a(1 - x)` on `Ω_x R`.
pub fn sigma(x: Var) -> HomExpr {
    HomExpr::subst1(x, one_minus(x))
}

/// `τ` exchanging the two loop variables of `Ω²R`.
pub fn tau(x: Var, y: Var) -> HomExpr {
    HomExpr::Subst(BTreeMap::from([(x, IntPoly::var(y)), (y, IntPoly::var(x))]))
}

/// The map `Ω²B -> Ω²B[s]`,
/// `(x²-x)(y²-y) f'(x,y) -> (x²-x)(y²-y) f'(sx + (1-s)y, (1-s)x + sy)`,
/// with `s = 0` giving `τ` and `s = 1` the identity.
pub fn swap_homotopy(x: Var, y: Var, s: Var) -> HomExpr {
    let (xp, yp, sp) = (IntPoly::var(x), IntPoly::var(y), IntPoly::var(s));
    let new_x = sp.mul(&xp).add(&one_minus(s).mul(&yp));
    let new_y = one_minus(s).mul(&xp).add(&sp.mul(&yp));
    HomExpr::FactorSubst {
        factors: vec![(x, loop_factor(x)), (y, loop_factor(y))],
        map: BTreeMap::from([(x, new_x), (y, new_y)]),
    }
}

/// `Ω̃B = {(f, g) ∈ B[x] x B[x] : f(0) = 0, g(1) = 0, f(1) = g(0)}`.
pub fn omega_tilde(b: &Ring, x: Var) -> VirtualRing {
    VirtualRing::pullback(
        VirtualRing::path(b, x),
        VirtualRing::finite(b).copath_of(x),
        HomExpr::Eval(x, Endpoint::One),
        HomExpr::Eval(x, Endpoint::Zero),
        Section::MulInt(one_minus(x)),
    )
}

/// `A x B` as a fibre product over the zero ring.
pub fn product(a: VirtualRing, b: VirtualRing) -> VirtualRing {
    let zero = VirtualRing::finite(&std::sync::Arc::new(zero_ring()));
    VirtualRing::pullback(a, b, HomExpr::Zero(Box::new(zero.clone())), HomExpr::Zero(Box::new(zero)), Section::Zero)
}

/// `α: f -> (f, 0)`.
pub fn alpha(b: &Ring, x: Var) -> HomExpr {
    HomExpr::pair(HomExpr::Identity, HomExpr::Zero(Box::new(VirtualRing::finite(b).copath_of(x))))
}

/// `β: f -> (0, f)`.
pub fn beta(b: &Ring, x: Var) -> HomExpr {
    HomExpr::pair(HomExpr::Zero(Box::new(VirtualRing::path(b, x))), HomExpr::Identity)
}

/// `ω: ΩB x ΩB -> Ω̃B`, `(f, g) -> (f, g)`.
pub fn omega_pair() -> HomExpr {
    HomExpr::pair(HomExpr::Fst, HomExpr::Snd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::ring::{FiniteRing, RingSpec};
    use crate::vring::VirtualElem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn z3() -> Ring {
        Arc::new(
            FiniteRing::new(RingSpec { label: "Z/3".into(), orders: vec![3], mul: vec![vec![vec![1]]], unit: Some(vec![1]) })
                .unwrap(),
        )
    }

    #[test]
    fn level_one_faces_are_endpoint_evaluations() {
        let r = z3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = PolyElem::random(&r, &[t(1)], 4, 4, &mut rng);
            assert_eq!(face(1, 0, &p).unwrap(), p.eval(t(1), Endpoint::One));
            assert_eq!(face(1, 1, &p).unwrap(), p.eval(t(1), Endpoint::Zero));
        }
    }

    #[test]
    fn identities_at_small_levels() {
        let r = z3();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 0..=3 {
            let vars: Vec<Var> = (1..=n).map(t).collect();
            for _ in 0..10 {
                let p = PolyElem::random(&r, &vars, 2, 3, &mut rng);
                for fam in IdentityFamily::ALL {
                    check_identity(fam, n, &p).unwrap();
                }
            }
        }
    }

    #[test]
    fn out_of_range_index() {
        assert!(face_map(2, 3).is_err());
        assert!(degeneracy_map(1, 2).is_err());
        assert!(face_map(0, 0).is_err());
    }

    #[test]
    fn sigma_fixes_loop_factor_constants() {
        let r = z3();
        let x = Var::named("x");
        let f = VirtualElem::Poly(PolyElem::constant(&r, r.elem(&[2])).mul_int(&loop_factor(x)));
        assert_eq!(sigma(x).apply(&f).unwrap(), f);
    }

    #[test]
    fn swap_homotopy_endpoints_on_a_monomial() {
        let r = z3();
        let (x, y, s) = (Var::named("x"), Var::named("y"), Var::named("s"));
        let core = PolyElem::term(&r, Monomial::from_pairs(vec![(x, 2), (y, 1)]), r.elem(&[1]));
        let f = VirtualElem::Poly(core.mul_int(&loop_factor(x).mul(&loop_factor(y))));
        let h = swap_homotopy(x, y, s).apply(&f).unwrap();
        assert_eq!(h.eval(s, Endpoint::One).unwrap(), f);
        assert_eq!(h.eval(s, Endpoint::Zero).unwrap(), tau(x, y).apply(&f).unwrap());
    }
}
