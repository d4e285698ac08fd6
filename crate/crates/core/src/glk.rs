//! Circle-operation matrix groups over nonunital rings and the bounded
//! computation of `π0 GL_n(A[Δ])`.
//!
//! `GL_n(A)` is the kernel of `GL_n(A+) -> GL_n(Z)`; its elements are
//! `I + M` and are stored as `M`. The group law is `M ∘ N = M + N + MN`
//! with neutral element `0`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Endpoint, Monomial, PolyElem, Var};
use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    base: Ring,
    entries: Vec<PolyElem>,
}

impl Matrix {
    pub fn zero(base: &Ring, n: usize) -> Self {
        Matrix { n, base: base.clone(), entries: vec![PolyElem::zero(base); n * n] }
    }

    pub fn from_constants(base: &Ring, n: usize, entries: &[RingElem]) -> Self {
        assert_eq!(entries.len(), n * n);
        Matrix { n, base: base.clone(), entries: entries.iter().map(|a| PolyElem::constant(base, a.clone())).collect() }
    }

    pub fn from_polys(base: &Ring, n: usize, entries: Vec<PolyElem>) -> Self {
        assert_eq!(entries.len(), n * n);
        Matrix { n, base: base.clone(), entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyElem {
        &self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|e| e.as_constant().is_some())
    }

    /// Entries of a constant matrix.
    pub fn key(&self) -> Vec<RingElem> {
        self.entries.iter().map(|e| e.as_constant().expect("constant matrix")).collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        Matrix { entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { entries: self.entries.iter().map(|a| a.neg()).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = PolyElem::zero(&self.base);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                entries.push(acc);
            }
        }
        Matrix { entries, ..self.clone() }
    }

    /// `M ∘ N = M + N + MN`.
    pub fn circle(&self, o: &Matrix) -> Matrix {
        self.add(o).add(&self.mul(o))
    }

    pub fn eval(&self, v: Var, at: Endpoint) -> Matrix {
        Matrix { entries: self.entries.iter().map(|a| a.eval(v, at)).collect(), ..self.clone() }
    }

    /// Drops every term of degree above `d` in `v`.
    pub fn truncate(&self, v: Var, d: u32) -> Matrix {
        let entries = self
            .entries
            .iter()
            .map(|p| PolyElem::from_terms(&self.base, p.terms().filter(|(m, _)| m.degree_in(v) <= d).map(|(m, c)| (m.clone(), c.clone()))))
            .collect();
        Matrix { entries, ..self.clone() }
    }

    /// `diag(M, 0)`, the stabilization into size `n + 1`.
    pub fn stabilize(&self) -> Matrix {
        let m = self.n + 1;
        let mut out = Matrix::zero(&self.base, m);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[i * m + j] = self.get(i, j).clone();
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A matrix with a verified quasi-inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiMatrix {
    pub m: Matrix,
    pub witness: Matrix,
}

impl QiMatrix {
    pub fn new(m: Matrix, witness: Matrix) -> Result<Self> {
        let q = QiMatrix { m, witness };
        q.verify()?;
        Ok(q)
    }

    pub fn verify(&self) -> Result<()> {
        if !self.m.circle(&self.witness).is_zero() || !self.witness.circle(&self.m).is_zero() {
            return Err(Error::VerificationFailure(format!("{} is not quasi-inverse to {}", self.witness, self.m)));
        }
        Ok(())
    }

    /// `M ∘ M'` with witness `N' ∘ N`.
    pub fn circle(&self, o: &QiMatrix) -> QiMatrix {
        QiMatrix { m: self.m.circle(&o.m), witness: o.witness.circle(&self.witness) }
    }
}

/// Verdict of the quasi-inverse cascade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuasiInverse {
    Witness(Matrix),
    NotQuasiInvertible,
    Unknown(Vec<String>),
}

/// Facts about the coefficient ring used to pick a strategy.
#[derive(Clone, Debug)]
pub struct RingFacts {
    pub nilpotency_class: Option<usize>,
    pub commutative: bool,
    pub unital: bool,
    /// no nonzero nilpotent elements
    pub reduced: bool,
}

impl RingFacts {
    pub fn of(r: &Ring) -> Self {
        let reduced = r.elements().all(|a| a.is_zero_elem() || !is_nilpotent(r, &a));
        RingFacts {
            nilpotency_class: r.nilpotency_class(),
            commutative: r.is_commutative(),
            unital: r.unit().is_some(),
            reduced,
        }
    }
}

fn is_nilpotent(r: &Ring, a: &RingElem) -> bool {
    let mut p = a.clone();
    for _ in 0..=r.order().min(64) {
        if p.is_zero_elem() {
            return true;
        }
        p = r.mul(&p, a);
    }
    p.is_zero_elem()
}

/// Finds a quasi-inverse of `m`, trying in order: the terminating series
/// over a nilpotent ring; the adjugate over a commutative unital ring; the
/// circle-power orbit for constant matrices; the truncated power series
/// `-P + P² - ...` for polynomial matrices `P` with `P(0) = 0`, accepted
/// only if the witness identity holds exactly.
pub fn quasi_inverse(m: &Matrix, facts: &RingFacts, t: Var, degree_cap: u32) -> QuasiInverse {
    let mut trace = Vec::new();
    if m.is_zero() {
        return QuasiInverse::Witness(m.clone());
    }
    if let Some(c) = facts.nilpotency_class {
        let w = series(m, c.saturating_sub(1).max(1));
        if m.circle(&w).is_zero() && w.circle(m).is_zero() {
            return QuasiInverse::Witness(w);
        }
        trace.push("nilpotent series failed".to_string());
    }
    if facts.commutative && facts.unital {
        if m.is_constant() {
            return match adjugate_witness(m) {
                Some(w) => QuasiInverse::Witness(w),
                None => QuasiInverse::NotQuasiInvertible,
            };
        }
        if facts.reduced {
            // units of A[t] are the units of A
            match det_one_plus(m).as_constant() {
                Some(c) if m.base().inverse(&c).is_some() => {}
                _ => return QuasiInverse::NotQuasiInvertible,
            }
        }
        trace.push("determinant test inconclusive".to_string());
    }
    if m.is_constant() {
        return orbit_witness(m);
    }
    if m.eval(t, Endpoint::Zero).is_zero() {
        let w = series(m, degree_cap as usize).truncate(t, degree_cap);
        if m.circle(&w).is_zero() && w.circle(m).is_zero() {
            return QuasiInverse::Witness(w);
        }
        trace.push(format!("power series truncated at degree {degree_cap} is not a witness"));
    } else {
        trace.push("nonzero constant term".to_string());
    }
    QuasiInverse::Unknown(trace)
}

/// `-M + M² - ... ± M^k`.
fn series(m: &Matrix, k: usize) -> Matrix {
    let mut acc = Matrix::zero(m.base(), m.size());
    let mut power = m.neg();
    for _ in 0..k {
        acc = acc.add(&power);
        power = power.mul(&m.neg());
        if power.is_zero() {
            break;
        }
    }
    acc
}

fn orbit_witness(m: &Matrix) -> QuasiInverse {
    // circle powers M, M∘M, ...; M is invertible iff the orbit returns to 0
    let mut seen: HashMap<Vec<RingElem>, ()> = HashMap::new();
    let mut prev = Matrix::zero(m.base(), m.size());
    let mut cur = m.clone();
    loop {
        if cur.is_zero() {
            return QuasiInverse::Witness(prev);
        }
        if seen.insert(cur.key(), ()).is_some() {
            return QuasiInverse::NotQuasiInvertible;
        }
        prev = cur.clone();
        cur = cur.circle(m);
    }
}

/// `I + M` over a unital ring.
fn one_plus(m: &Matrix) -> Vec<PolyElem> {
    let r = m.base();
    let e = r.unit().expect("unital base").clone();
    let n = m.size();
    (0..n * n)
        .map(|k| {
            let p = m.entries[k].clone();
            if k / n == k % n {
                p.add(&PolyElem::constant(r, e.clone()))
            } else {
                p
            }
        })
        .collect()
}

fn det(entries: &[PolyElem], n: usize, base: &Ring) -> PolyElem {
    if n == 0 {
        return PolyElem::constant(base, base.unit().expect("unital base").clone());
    }
    if n == 1 {
        return entries[0].clone();
    }
    let mut acc = PolyElem::zero(base);
    for j in 0..n {
        let minor = minor(entries, n, 0, j);
        let term = entries[j].mul(&det(&minor, n - 1, base));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn minor(entries: &[PolyElem], n: usize, row: usize, col: usize) -> Vec<PolyElem> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for i in 0..n {
        for j in 0..n {
            if i != row && j != col {
                out.push(entries[i * n + j].clone());
            }
        }
    }
    out
}

/// `det(I + M)` over a commutative unital ring.
pub fn det_one_plus(m: &Matrix) -> PolyElem {
    det(&one_plus(m), m.size(), m.base())
}

fn adjugate_witness(m: &Matrix) -> Option<Matrix> {
    let r = m.base();
    let n = m.size();
    let a = one_plus(m);
    let d = det(&a, n, r).as_constant()?;
    let dinv = r.inverse(&d)?;
    let mut inv = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // adj(A)_ij = (-1)^(i+j) det(minor_ji)
            let c = det(&minor(&a, n, j, i), n - 1, r);
            let c = if (i + j) % 2 == 0 { c } else { c.neg() };
            inv.push(c.mul(&PolyElem::constant(r, dinv.clone())));
        }
    }
    // N = (I + M)^-1 - I
    let e = PolyElem::constant(r, r.unit()?.clone());
    for k in 0..n {
        inv[k * n + k] = inv[k * n + k].sub(&e);
    }
    let w = Matrix::from_polys(r, n, inv);
    (m.circle(&w).is_zero() && w.circle(m).is_zero()).then_some(w)
}

/// `GL_n(A)` with its elements in lexicographic order of entries.
#[derive(Clone, Debug)]
pub struct GlGroup {
    pub base: Ring,
    pub n: usize,
    pub elements: Vec<Matrix>,
    pub inverses: Vec<usize>,
    index: HashMap<Vec<RingElem>, usize>,
}

impl GlGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(&m.key()).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.elements[a].circle(&self.elements[b])).expect("closed under the circle product")
    }

    /// Group axioms: neutral element, witnesses, closure and associativity.
    /// Pairs and triples are exhaustive when `|G| <= full_limit` and a
    /// deterministic sample otherwise.
    pub fn check_axioms(&self, full_limit: usize) -> Result<()> {
        let g = self.order();
        let zero = self.index_of(&Matrix::zero(&self.base, self.n)).ok_or_else(|| Error::VerificationFailure("0 missing".into()))?;
        for a in 0..g {
            QiMatrix::new(self.elements[a].clone(), self.elements[self.inverses[a]].clone())?;
            if self.mul(a, zero) != a || self.mul(zero, a) != a {
                return Err(Error::VerificationFailure(format!("0 is not neutral for {}", self.elements[a])));
            }
        }
        let pick = |k: usize, salt: usize| (k.wrapping_mul(7919).wrapping_add(salt * 104_729)) % g;
        let pairs: Vec<(usize, usize)> = if g <= full_limit {
            (0..g).flat_map(|a| (0..g).map(move |b| (a, b))).collect()
        } else {
            (0..5_000).map(|k| (pick(k, 1), pick(k, 2))).collect()
        };
        for &(a, b) in &pairs {
            let prod = self.elements[a].circle(&self.elements[b]);
            if self.index_of(&prod).is_none() {
                return Err(Error::VerificationFailure(format!("product {prod} left the group")));
            }
        }
        let triples: Vec<(usize, usize, usize)> = if g <= full_limit {
            (0..g).flat_map(|a| (0..g).flat_map(move |b| (0..g).map(move |c| (a, b, c)))).collect()
        } else {
            (0..5_000).map(|k| (pick(k, 3), pick(k, 4), pick(k, 5))).collect()
        };
        for (a, b, c) in triples {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::VerificationFailure(format!("associativity fails on ({a}, {b}, {c})")));
            }
        }
        Ok(())
    }
}

/// All `n x n` constant matrices over `A` whose quasi-inverse exists; the
/// zero matrix comes first.
pub fn gl_group(a: &Ring, n: usize, budget: u128) -> Result<GlGroup> {
    let k = n * n;
    let required = a.order().checked_pow(k as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let facts = RingFacts::of(a);
    let elems: Vec<RingElem> = a.elements().collect();
    let t = Var::named("t");
    let mut elements = Vec::new();
    let mut witnesses = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let entries: Vec<RingElem> = idx.iter().map(|&i| elems[i].clone()).collect();
        let m = Matrix::from_constants(a, n, &entries);
        if let QuasiInverse::Witness(w) = quasi_inverse(&m, &facts, t, 0) {
            elements.push(m);
            witnesses.push(w);
        }
        if !advance(&mut idx, elems.len()) {
            break;
        }
    }
    let index: HashMap<Vec<RingElem>, usize> = elements.iter().enumerate().map(|(i, m)| (m.key(), i)).collect();
    let inverses = witnesses.iter().map(|w| index[&w.key()]).collect();
    Ok(GlGroup { base: a.clone(), n, elements, inverses, index })
}

/// Odometer over `0..base` with the last position fastest; `false` once
/// every vector was visited.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for pos in (0..idx.len()).rev() {
        idx[pos] += 1;
        if idx[pos] < base {
            return true;
        }
        idx[pos] = 0;
    }
    false
}

/// Side certificate from `det(I + M)` for commutative unital reduced bases:
/// `det(I + P(t))` is a unit of `A[t]`, hence constant, so the determinant
/// is constant on homotopy classes.
#[derive(Clone, Debug, Serialize)]
pub struct DeterminantCertificate {
    pub image_size: usize,
    /// every generator of the identified subgroup has determinant 1
    pub kernel_contains_subgroup: bool,
    /// the quotient is no larger than the determinant image
    pub exact: bool,
}

/// The level-`(n, d)` approximation of `KV1(A)`.
#[derive(Clone, Debug, Serialize)]
pub struct Pi0Presentation {
    pub size: usize,
    pub degree: u32,
    pub gl_order: usize,
    pub subgroup_order: usize,
    pub order: usize,
    pub normal: bool,
    pub abelian: bool,
    pub invariant_factors: Option<Vec<u64>>,
    /// coset index of every element of `GL_n(A)`
    #[serde(skip)]
    pub class_of: Vec<usize>,
    pub candidates: u128,
    pub witnessed: usize,
    pub unknown: usize,
    pub determinant: Option<DeterminantCertificate>,
}

/// Options for [`kv1_approx`].
#[derive(Clone, Debug)]
pub struct Kv1Options {
    pub budget: u128,
    /// witness degree cap as a multiple of `d`
    pub cap_factor: u32,
    pub full_axiom_limit: usize,
}

impl Default for Kv1Options {
    fn default() -> Self {
        Kv1Options { budget: 1 << 20, cap_factor: 2, full_axiom_limit: 60 }
    }
}

/// Quotient of `GL_n(A)` by the subgroup `H` generated by the values `P(1)`
/// of quasi-invertible `P = M1 t + ... + Md t^d`. Candidates whose
/// quasi-invertibility is undecided are skipped, so `H` never exceeds the
/// true identified subgroup.
pub fn kv1_approx(a: &Ring, n: usize, d: u32, opts: &Kv1Options) -> Result<Pi0Presentation> {
    let gl = gl_group(a, n, opts.budget)?;
    gl.check_axioms(opts.full_axiom_limit)?;
    let k = n * n * d as usize;
    let candidates = a.order().checked_pow(k as u32).unwrap_or(u128::MAX);
    if candidates > opts.budget {
        return Err(Error::BudgetExceeded { required: candidates, budget: opts.budget });
    }
    let facts = RingFacts::of(a);
    let t = Var::named("t");
    let elems: Vec<RingElem> = a.elements().collect();
    let mut idx = vec![0usize; k];
    let mut ends: Vec<usize> = Vec::new();
    let (mut witnessed, mut unknown) = (0, 0);
    loop {
        let mut entries = vec![PolyElem::zero(a); n * n];
        for (pos, &i) in idx.iter().enumerate() {
            let (deg, cell) = (pos / (n * n) + 1, pos % (n * n));
            if !elems[i].is_zero_elem() {
                entries[cell] = entries[cell].add(&PolyElem::term(a, Monomial::var(t, deg as u32), elems[i].clone()));
            }
        }
        let p = Matrix::from_polys(a, n, entries);
        match quasi_inverse(&p, &facts, t, d * opts.cap_factor) {
            QuasiInverse::Witness(w) => {
                debug_assert!(QiMatrix::new(p.clone(), w).is_ok());
                witnessed += 1;
                let end = p.eval(t, Endpoint::One);
                ends.push(gl.index_of(&end).expect("endpoint of a quasi-invertible path is in GL"));
            }
            QuasiInverse::Unknown(_) => unknown += 1,
            QuasiInverse::NotQuasiInvertible => {}
        }
        if !advance(&mut idx, elems.len()) {
            break;
        }
    }
    ends.sort();
    ends.dedup();
    let (members, gens) = generate(&gl, &ends);
    let normal = (0..gl.order()).all(|x| {
        gens.iter().all(|&s| members[gl.mul(gl.mul(x, s), gl.inverses[x])])
    });
    // left cosets x∘H
    let mut class_of = vec![usize::MAX; gl.order()];
    let mut reps = Vec::new();
    let hs: Vec<usize> = (0..gl.order()).filter(|&h| members[h]).collect();
    for x in 0..gl.order() {
        if class_of[x] != usize::MAX {
            continue;
        }
        for &h in &hs {
            class_of[gl.mul(x, h)] = reps.len();
        }
        reps.push(x);
    }
    let q = reps.len();
    let abelian = normal
        && reps.iter().all(|&x| {
            reps.iter().all(|&y| {
                let c = gl.mul(gl.mul(x, y), gl.mul(gl.inverses[x], gl.inverses[y]));
                members[c]
            })
        });
    let invariant_factors = abelian.then(|| {
        let table: Vec<Vec<usize>> =
            (0..q).map(|i| (0..q).map(|j| class_of[gl.mul(reps[i], reps[j])]).collect()).collect();
        abelian_invariants(&table, class_of[0])
    });
    let determinant = (facts.commutative && facts.unital && facts.reduced).then(|| {
        let dets: Vec<RingElem> = gl.elements.iter().map(|m| det_one_plus(m).as_constant().unwrap()).collect();
        let mut image = dets.clone();
        image.sort();
        image.dedup();
        let one = a.unit().unwrap();
        let kernel_contains_subgroup = gens.iter().all(|&s| &dets[s] == one);
        DeterminantCertificate { image_size: image.len(), kernel_contains_subgroup, exact: kernel_contains_subgroup && q <= image.len() }
    });
    Ok(Pi0Presentation {
        size: n,
        degree: d,
        gl_order: gl.order(),
        subgroup_order: hs.len(),
        order: q,
        normal,
        abelian,
        invariant_factors,
        class_of,
        candidates,
        witnessed,
        unknown,
        determinant,
    })
}

/// Subgroup generated by `seeds`: membership flags and a generating subset.
fn generate(gl: &GlGroup, seeds: &[usize]) -> (Vec<bool>, Vec<usize>) {
    let zero = gl.index_of(&Matrix::zero(&gl.base, gl.n)).unwrap();
    let mut members = vec![false; gl.order()];
    members[zero] = true;
    let mut list = vec![zero];
    let mut gens: Vec<usize> = Vec::new();
    for &s in seeds {
        if members[s] {
            continue;
        }
        gens.push(s);
        // re-close under all accepted generators
        let mut frontier = list.clone();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = gl.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    list.push(y);
                    frontier.push(y);
                }
            }
        }
    }
    (members, gens)
}

/// Invariant factors of a finite abelian group from its multiplication
/// table, via the counts `|{x : x^(p^j) = e}|` for each prime `p`.
pub fn abelian_invariants(table: &[Vec<usize>], identity: usize) -> Vec<u64> {
    let q = table.len() as u64;
    let power = |x: usize, e: u64| {
        let mut acc = identity;
        for _ in 0..e {
            acc = table[acc][x];
        }
        acc
    };
    let mut primes = Vec::new();
    let mut m = q;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // cyclic p-factors, as exponent lists
    let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &p in &primes {
        let mut counts = vec![0u32];
        let mut pj = 1u64;
        loop {
            pj *= p;
            let c = (0..table.len()).filter(|&x| power(x, pj) == identity).count() as u64;
            let mut log = 0;
            let mut v = c;
            while v > 1 {
                v /= p;
                log += 1;
            }
            if log == *counts.last().unwrap() {
                break;
            }
            counts.push(log);
        }
        // number of factors with exponent >= j is counts[j] - counts[j-1]
        let ge: Vec<u32> = (1..counts.len()).map(|j| counts[j] - counts[j - 1]).collect();
        let mut exps = Vec::new();
        for j in 0..ge.len() {
            let next = ge.get(j + 1).copied().unwrap_or(0);
            for _ in 0..(ge[j] - next) {
                exps.push(j as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        parts.insert(p, exps);
    }
    // combine the largest p-parts into the last invariant factor, and so on
    let len = parts.values().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, exps) in parts {
        for (i, e) in exps.iter().enumerate() {
            factors[len - 1 - i] *= p.pow(*e);
        }
    }
    factors
}

/// Class counts of the level-`(n, d')` approximations for `d' = 1..=d`.
pub fn monotone_history(a: &Ring, n: usize, d: u32, opts: &Kv1Options) -> Result<Vec<usize>> {
    (1..=d).map(|k| kv1_approx(a, n, k, opts).map(|p| p.order)).collect()
}

/// Checks that `M -> diag(M, 0)` is a homomorphism `GL_n -> GL_{n+1}`
/// sending the identified subgroup at level `(n, d)` into the one at level
/// `(n + 1, d)`.
pub fn check_stabilization(a: &Ring, n: usize, d: u32, opts: &Kv1Options) -> Result<()> {
    let small = gl_group(a, n, opts.budget)?;
    let big = gl_group(a, n + 1, opts.budget)?;
    let lo = kv1_approx(a, n, d, opts)?;
    let hi = kv1_approx(a, n + 1, d, opts)?;
    let img: Vec<usize> = small
        .elements
        .iter()
        .map(|m| big.index_of(&m.stabilize()).ok_or_else(|| Error::VerificationFailure(format!("diag({m}, 0) is not in GL"))))
        .collect::<Result<_>>()?;
    for x in 0..small.order() {
        for y in 0..small.order() {
            if img[small.mul(x, y)] != big.mul(img[x], img[y]) {
                return Err(Error::VerificationFailure("stabilization is not a homomorphism".into()));
            }
        }
        // identified elements stay identified
        if lo.class_of[x] == lo.class_of[0] && hi.class_of[img[x]] != hi.class_of[0] {
            return Err(Error::VerificationFailure(format!("{} loses its identification", small.elements[x])));
        }
    }
    Ok(())
}

/// `e_ij(a)` in circle form: the matrix with `a` at `(i, j)`.
pub fn elementary(a: &Ring, n: usize, i: usize, j: usize, x: &RingElem) -> Matrix {
    let mut entries = vec![a.zero(); n * n];
    entries[i * n + j] = x.clone();
    Matrix::from_constants(a, n, &entries)
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
    fn square_zero_witness_is_negation() {
        let r = ring("sq0", vec![2], vec![vec![vec![0]]], None);
        let facts = RingFacts::of(&r);
        let m = Matrix::from_constants(&r, 2, &[r.generator(0), r.zero(), r.generator(0), r.generator(0)]);
        assert_eq!(quasi_inverse(&m, &facts, Var::named("t"), 2), QuasiInverse::Witness(m.neg()));
    }

    #[test]
    fn gl1_of_f3_has_order_two() {
        let r = ring("F3", vec![3], vec![vec![vec![1]]], Some(vec![1]));
        let g = gl_group(&r, 1, 1000).unwrap();
        let keys: Vec<Vec<RingElem>> = g.elements.iter().map(|m| m.key()).collect();
        assert_eq!(keys, vec![vec![r.elem(&[0])], vec![r.elem(&[1])]]);
        g.check_axioms(100).unwrap();
    }

    #[test]
    fn invariants_of_small_groups() {
        // Z/2 x Z/2 and Z/4 as tables
        let klein: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        assert_eq!(abelian_invariants(&klein, 0), vec![2, 2]);
        let z4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        assert_eq!(abelian_invariants(&z4, 0), vec![4]);
        let z6: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        assert_eq!(abelian_invariants(&z6, 0), vec![6]);
        assert_eq!(abelian_invariants(&[vec![0]], 0), Vec::<u64>::new());
    }

    #[test]
    fn kv1_small_values() {
        let opts = Kv1Options::default();
        let f3 = ring("F3", vec![3], vec![vec![vec![1]]], Some(vec![1]));
        let p = kv1_approx(&f3, 2, 1, &opts).unwrap();
        assert_eq!((p.gl_order, p.order), (48, 2));
        assert!(p.normal && p.abelian);
        assert_eq!(p.invariant_factors, Some(vec![2]));
        let det = p.determinant.unwrap();
        assert!(det.exact && det.image_size == 2);
        let f2 = ring("F2", vec![2], vec![vec![vec![1]]], Some(vec![1]));
        assert_eq!(kv1_approx(&f2, 2, 1, &opts).unwrap().order, 1);
        let sq0 = ring("sq0", vec![2], vec![vec![vec![0]]], None);
        assert_eq!(kv1_approx(&sq0, 2, 1, &opts).unwrap().order, 1);
    }
}
