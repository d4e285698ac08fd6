//! Finite reductions `R[x]/(x²-x)^m`.
//!
//! Both evaluations `x = 0, 1` factor through the quotient, so path rings,
//! loop rings and mapping-path rings have finite shadows built from it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Endpoint, PolyElem, Var};
use crate::ring::{kernel, pullback, FiniteRing, Pullback, Ring, RingElem, RingHom, Subring};

/// `R[x]/(x²-x)^m`, coordinates ordered by degree block then generator.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub base: Ring,
    pub m: usize,
    pub ring: Ring,
    /// evaluation at 0 and at 1
    pub d0: RingHom,
    pub d1: RingHom,
}

/// Coefficients of `(x² - x)^m`, lowest degree first.
fn modulus(m: usize) -> Vec<i64> {
    let mut f = vec![1i64];
    for _ in 0..m {
        // multiply by x² - x
        let mut g = vec![0i64; f.len() + 2];
        for (i, &c) in f.iter().enumerate() {
            g[i + 2] += c;
            g[i + 1] -= c;
        }
        f = g;
    }
    f
}

/// `x^n mod (x² - x)^m` as integer coefficients of `1, x, ..., x^(2m-1)`.
fn reduce_power(n: usize, m: usize) -> Vec<i64> {
    let f = modulus(m);
    let deg = 2 * m;
    let mut p = vec![0i64; n.max(deg) + 1];
    p[n] = 1;
    for top in (deg..p.len()).rev() {
        let c = p[top];
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                p[top - deg + i] -= c * fi;
            }
        }
    }
    p.truncate(deg);
    p
}

impl Truncation {
    pub fn new(base: &Ring, m: usize) -> Result<Truncation> {
        if m == 0 {
            return Err(Error::Unsupported("truncation level must be positive".into()));
        }
        let k = base.rank();
        let blocks = 2 * m;
        let rank = k * blocks;
        let mut orders = Vec::with_capacity(rank);
        for _ in 0..blocks {
            orders.extend_from_slice(base.orders());
        }
        let mut mul = vec![vec![RingElem(vec![0; rank]); rank]; rank];
        for a in 0..blocks {
            for b in 0..blocks {
                let red = reduce_power(a + b, m);
                for i in 0..k {
                    for j in 0..k {
                        let c = base.structure_constant(i, j);
                        let mut v = vec![0i64; rank];
                        for (l, &r) in red.iter().enumerate() {
                            if r != 0 {
                                let s = base.scale_i64(c, r);
                                v[l * k..(l + 1) * k].copy_from_slice(&s.0);
                            }
                        }
                        mul[a * k + i][b * k + j] = RingElem(v);
                    }
                }
            }
        }
        let unit = base.unit().map(|e| {
            let mut v = vec![0i64; rank];
            v[..k].copy_from_slice(&e.0);
            RingElem(v)
        });
        let label = format!("{}[x]/(x^2-x)^{m}", base.label());
        let ring = Arc::new(FiniteRing::new(crate::ring::RingSpec {
            label,
            orders,
            mul: mul.into_iter().map(|row| row.into_iter().map(|e| e.0).collect()).collect(),
            unit: unit.map(|e| e.0),
        })?);
        let d0 = (0..rank).map(|g| if g < k { base.generator(g) } else { base.zero() }).collect();
        let d1 = (0..rank).map(|g| base.generator(g % k)).collect();
        let d0 = RingHom::new(ring.clone(), base.clone(), d0)?;
        let d1 = RingHom::new(ring.clone(), base.clone(), d1)?;
        Ok(Truncation { base: base.clone(), m, ring, d0, d1 })
    }

    /// Image of a polynomial in `base[v]` under the quotient map.
    pub fn reduce(&self, p: &PolyElem, v: Var) -> Result<RingElem> {
        let k = self.base.rank();
        let mut acc = self.ring.zero();
        for (mono, c) in p.terms() {
            let (e, rest) = mono.split_off(v);
            if !rest.is_one() {
                return Err(Error::UnknownVariable(format!("{rest}")));
            }
            for (l, &r) in reduce_power(e as usize, self.m).iter().enumerate() {
                if r != 0 {
                    let mut w = vec![0i64; self.ring.rank()];
                    w[l * k..(l + 1) * k].copy_from_slice(&self.base.scale_i64(c, r).0);
                    acc = self.ring.add(&acc, &self.ring.elem(&w));
                }
            }
        }
        Ok(acc)
    }

    /// Evaluation through the reduction, for compatibility checks.
    pub fn endpoint(&self, at: Endpoint) -> &RingHom {
        match at {
            Endpoint::Zero => &self.d0,
            Endpoint::One => &self.d1,
        }
    }

    /// `f[x]` on truncations.
    pub fn lift(&self, f: &RingHom, target: &Truncation) -> Result<RingHom> {
        if f.source() != &self.base || f.target() != &target.base || self.m != target.m {
            return Err(Error::RingMismatch("truncations do not match the hom".into()));
        }
        let (k, kt) = (self.base.rank(), target.base.rank());
        let images = (0..self.ring.rank())
            .map(|g| {
                let (block, i) = (g / k, g % k);
                let mut v = vec![0i64; target.ring.rank()];
                v[block * kt..(block + 1) * kt].copy_from_slice(&f.images()[i].0);
                RingElem(v)
            })
            .collect();
        RingHom::new(self.ring.clone(), target.ring.clone(), images)
    }

    /// The finite path ring `ker d0`.
    pub fn path(&self) -> Subring {
        kernel(&self.d0)
    }

    /// The finite loop ring `ker d0 ∩ ker d1`, with its inclusion into the
    /// path ring.
    pub fn loops(&self) -> Result<(Subring, Subring)> {
        let e = self.path();
        let d1 = self.d1.compose(&e.inclusion)?;
        Ok((e, kernel(&d1)))
    }
}

/// Restricts `f: S -> T` to subrings `S' -> T'`, failing if some image
/// leaves `T'`.
pub fn restrict_hom(f: &RingHom, src: &Subring, tgt: &Subring) -> Result<RingHom> {
    let images = src
        .inclusion
        .images()
        .iter()
        .map(|g| {
            let y = f.apply(g);
            tgt.restrict(&y).ok_or_else(|| Error::VerificationFailure(format!("{y} leaves the subring")))
        })
        .collect::<Result<Vec<_>>>()?;
    RingHom::new(src.ring.clone(), tgt.ring.clone(), images)
}

/// Finite shadow of the mapping-path ring `P(g) = B x_C E C`.
#[derive(Clone, Debug)]
pub struct FinitePath {
    pub g: RingHom,
    pub trunc: Truncation,
    pub path: Subring,
    /// `d1` restricted to the path ring
    pub end: RingHom,
    pub pb: Pullback,
}

impl FinitePath {
    pub fn new(g: &RingHom, m: usize) -> Result<FinitePath> {
        let trunc = Truncation::new(g.target(), m)?;
        let path = trunc.path();
        let end = trunc.d1.compose(&path.inclusion)?;
        let pb = pullback(g, &end)?;
        Ok(FinitePath { g: g.clone(), trunc, path, end, pb })
    }

    pub fn ring(&self) -> &Ring {
        &self.pb.ring
    }

    /// `g1: P(g) -> B`.
    pub fn g1(&self) -> &RingHom {
        &self.pb.rho
    }

    /// The null-homotopy of `g ∘ g1` as a hom `P(g) -> C[y]/(y²-y)^m`:
    /// `(b, e) -> e`.
    pub fn null_homotopy(&self) -> Result<RingHom> {
        self.path.inclusion.compose(&self.pb.sigma)
    }

    /// `j: ΩC -> P(g)`, `c -> (0, c)`, on the finite loop ring.
    pub fn j(&self, loops: &Subring) -> Result<RingHom> {
        let b = self.g.source();
        let images = loops
            .inclusion
            .images()
            .iter()
            .map(|c| {
                let mut v = vec![0i64; b.rank()];
                v.extend_from_slice(&c.0);
                self.pb.sub.restrict(&RingElem(v)).ok_or_else(|| Error::VerificationFailure(format!("(0, {c}) is not in P(g)")))
            })
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(loops.ring.clone(), self.ring().clone(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn power_reduction() {
        assert_eq!(modulus(1), vec![0, -1, 1]);
        // x^2 = x mod x^2 - x
        assert_eq!(reduce_power(2, 1), vec![0, 1]);
        assert_eq!(reduce_power(5, 1), vec![0, 1]);
        assert_eq!(reduce_power(3, 2), vec![0, 0, 0, 1]);
    }

    #[test]
    fn evaluations_factor_through_the_reduction() {
        let r = Arc::new(
            FiniteRing::new(RingSpec { label: "Z/3".into(), orders: vec![3], mul: vec![vec![vec![1]]], unit: Some(vec![1]) })
                .unwrap(),
        );
        let tr = Truncation::new(&r, 2).unwrap();
        assert_eq!(tr.ring.order(), 81);
        let x = Var::named("x");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = PolyElem::random(&r, &[x], 7, 5, &mut rng);
            let q = PolyElem::random(&r, &[x], 7, 5, &mut rng);
            let (rp, rq) = (tr.reduce(&p, x).unwrap(), tr.reduce(&q, x).unwrap());
            assert_eq!(tr.reduce(&p.mul(&q), x).unwrap(), tr.ring.mul(&rp, &rq));
            for at in [Endpoint::Zero, Endpoint::One] {
                assert_eq!(PolyElem::constant(&r, tr.endpoint(at).apply(&rp)), p.eval(x, at));
            }
        }
        let (e, l) = tr.loops().unwrap();
        assert_eq!((e.ring.order(), l.ring.order()), (27, 9));
    }
}
