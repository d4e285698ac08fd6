//! Integer linear algebra: Smith normal form over arbitrary-precision
//! integers, and presentations of subgroups and quotients of finite
//! abelian groups `Z/d1 + ... + Z/dk`.
//!
//! Vectors are row vectors throughout; a subgroup is the row span of a
//! matrix together with the relation lattice `diag(d1, ..., dk)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMatrix = Vec<Vec<BigInt>>;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d0 | d1 | ...`, all non-negative.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub u: IMatrix,
    pub v: IMatrix,
    pub v_inv: IMatrix,
    pub rank: usize,
}

pub fn identity(n: usize) -> IMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_big(rows: &[Vec<i64>]) -> IMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn vec_mul(x: &[BigInt], m: &IMatrix) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![BigInt::zero(); cols];
    for (xi, row) in x.iter().zip(m) {
        if xi.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(row) {
            *o += xi * a;
        }
    }
    out
}

pub fn mat_mul(a: &IMatrix, b: &IMatrix) -> IMatrix {
    a.iter().map(|row| vec_mul(row, b)).collect()
}

/// Smith normal form of an `m x n` integer matrix.
pub fn smith(a: &IMatrix, ncols: usize) -> Smith {
    let m = a.len();
    let n = ncols;
    let mut a: IMatrix = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut v_inv = identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero |entry| in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, &mut u, i, t, &-q);
                if !a[i][t].is_zero() {
                    swap_rows(&mut a, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, &mut v, &mut v_inv, j, t, &-q);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, &mut v, &mut v_inv, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut bad_row = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(i) => add_row(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diag = (0..m.min(n)).map(|i| a[i][i].clone()).collect::<Vec<_>>();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Smith { diag, u, v, v_inv, rank }
}

fn swap_rows(a: &mut IMatrix, u: &mut IMatrix, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        u.swap(i, j);
    }
}

fn swap_cols(a: &mut IMatrix, v: &mut IMatrix, v_inv: &mut IMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in v.iter_mut() {
        row.swap(i, j);
    }
    v_inv.swap(i, j);
}

/// row_i += c * row_j
fn add_row(a: &mut IMatrix, u: &mut IMatrix, i: usize, j: usize, c: &BigInt) {
    for mat in [a, u] {
        let src = mat[j].clone();
        for (x, s) in mat[i].iter_mut().zip(src) {
            *x += c * s;
        }
    }
}

/// col_i += c * col_j
fn add_col(a: &mut IMatrix, v: &mut IMatrix, v_inv: &mut IMatrix, i: usize, j: usize, c: &BigInt) {
    for mat in [a, v] {
        for row in mat.iter_mut() {
            let s = row[j].clone();
            row[i] += c * s;
        }
    }
    let src = v_inv[i].clone();
    for (x, s) in v_inv[j].iter_mut().zip(src) {
        *x -= c * s;
    }
}

/// Invariant factors of the abelian group `Z^ncols / rowspan(rows)`:
/// `(rank of free part, torsion factors > 1)`.
pub fn cokernel_invariants(rows: &IMatrix, ncols: usize) -> (usize, Vec<BigInt>) {
    let s = smith(rows, ncols);
    let free = ncols - s.rank;
    let torsion = s.diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
    (free, torsion)
}

/// A finite group `Z/e1 + ... + Z/er` presented as a quotient of
/// `Z/d1 + ... + Z/dk` by the span of some relation vectors.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub orders: Vec<i64>,
    /// `k x k` change of basis; old coordinates `x` map to `x * v` and
    /// keep the columns listed in `kept`.
    v: IMatrix,
    kept: Vec<usize>,
    /// Old-coordinate representatives of the new generators.
    pub generators: Vec<Vec<i64>>,
}

impl QuotientPresentation {
    pub fn new(old_orders: &[i64], relations: &[Vec<i64>]) -> Self {
        let k = old_orders.len();
        let mut rows = to_big(relations);
        for (i, &d) in old_orders.iter().enumerate() {
            let mut r = vec![BigInt::zero(); k];
            r[i] = BigInt::from(d);
            rows.push(r);
        }
        let s = smith(&rows, k);
        let kept: Vec<usize> = (0..k).filter(|&i| !s.diag[i].is_one()).collect();
        let orders = kept.iter().map(|&i| i64::try_from(&s.diag[i]).expect("order fits")).collect();
        let generators = kept
            .iter()
            .map(|&i| {
                s.v_inv[i]
                    .iter()
                    .zip(old_orders)
                    .map(|(x, &d)| i64::try_from(x.mod_floor(&BigInt::from(d))).unwrap())
                    .collect()
            })
            .collect();
        QuotientPresentation { orders, v: s.v, kept, generators }
    }

    /// New coordinates of the class of an old-coordinate vector.
    pub fn map(&self, x: &[i64]) -> Vec<i64> {
        let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        let y = vec_mul(&xb, &self.v);
        self.kept
            .iter()
            .zip(&self.orders)
            .map(|(&i, &e)| i64::try_from(y[i].mod_floor(&BigInt::from(e))).unwrap())
            .collect()
    }
}

/// A subgroup of `Z/d1 + ... + Z/dk` generated by given vectors,
/// presented in invariant-factor form with explicit generators.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub orders: Vec<i64>,
    /// Old-coordinate vectors of the new generators, reduced mod orders.
    pub generators: Vec<Vec<i64>>,
    ambient: Vec<i64>,
    /// basis of the lattice L = span(gens) + diag(orders): row i is
    /// `e_i * v_inv[i]`; coordinates of x in L are `(x v)_i / e_i`.
    v: IMatrix,
    e: Vec<BigInt>,
    inner: QuotientInner,
}

#[derive(Clone, Debug)]
struct QuotientInner {
    v: IMatrix,
    kept: Vec<usize>,
}

impl SubgroupPresentation {
    pub fn new(ambient: &[i64], gens: &[Vec<i64>]) -> Self {
        let k = ambient.len();
        let mut rows = to_big(gens);
        for (i, &d) in ambient.iter().enumerate() {
            let mut r = vec![BigInt::zero(); k];
            r[i] = BigInt::from(d);
            rows.push(r);
        }
        let s = smith(&rows, k);
        debug_assert_eq!(s.rank, k);
        let e: Vec<BigInt> = s.diag[..k].to_vec();
        // basis rows b_i = e_i * v_inv_i
        let basis: IMatrix = (0..k)
            .map(|i| s.v_inv[i].iter().map(|x| x * &e[i]).collect())
            .collect();
        // relations d_j * eps_j in the basis: (d_j eps_j v)_i / e_i
        let rel: IMatrix = (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| {
                        let val = BigInt::from(ambient[j]) * &s.v[j][i];
                        let (q, r) = val.div_rem(&e[i]);
                        debug_assert!(r.is_zero());
                        q
                    })
                    .collect()
            })
            .collect();
        let s2 = smith(&rel, k);
        let kept: Vec<usize> = (0..k).filter(|&i| !s2.diag[i].is_one()).collect();
        let orders: Vec<i64> =
            kept.iter().map(|&i| i64::try_from(&s2.diag[i]).expect("order fits")).collect();
        let generators = kept
            .iter()
            .map(|&i| {
                vec_mul(&s2.v_inv[i], &basis)
                    .iter()
                    .zip(ambient)
                    .map(|(x, &d)| i64::try_from(x.mod_floor(&BigInt::from(d))).unwrap())
                    .collect()
            })
            .collect();
        SubgroupPresentation {
            orders,
            generators,
            ambient: ambient.to_vec(),
            v: s.v,
            e,
            inner: QuotientInner { v: s2.v, kept },
        }
    }

    /// Subgroup coordinates of `x`, or `None` when `x` is not a member.
    pub fn coords(&self, x: &[i64]) -> Option<Vec<i64>> {
        let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        let y = vec_mul(&xb, &self.v);
        let mut c = Vec::with_capacity(y.len());
        for (yi, ei) in y.iter().zip(&self.e) {
            let (q, r) = yi.div_rem(ei);
            if !r.is_zero() {
                return None;
            }
            c.push(q);
        }
        let z = vec_mul(&c, &self.inner.v);
        Some(
            self.inner
                .kept
                .iter()
                .zip(&self.orders)
                .map(|(&i, &o)| i64::try_from(z[i].mod_floor(&BigInt::from(o))).unwrap())
                .collect(),
        )
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.coords(x).is_some()
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().map(|&o| o as u128).product()
    }

    pub fn ambient(&self) -> &[i64] {
        &self.ambient
    }
}

/// Left integer kernel of the map `Z^k -> Z/c1 + ... + Z/cm` given by the
/// `k x m` matrix `phi` (row i = image of generator i): returns generators.
pub fn kernel_mod(phi: &[Vec<i64>], codomain: &[i64]) -> Vec<Vec<i64>> {
    let k = phi.len();
    let m = codomain.len();
    let mut rows = to_big(phi);
    for (j, &c) in codomain.iter().enumerate() {
        let mut r = vec![BigInt::zero(); m];
        r[j] = BigInt::from(c);
        rows.push(r);
    }
    let s = smith(&rows, m);
    (s.rank..k + m)
        .map(|i| {
            s.u[i][..k]
                .iter()
                .map(|x| i64::try_from(x).expect("kernel vector fits i64"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(rows: &[&[i64]]) -> IMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn smith_reconstructs() {
        let a = b(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, 3);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(d[i][j], s.diag[i]);
                } else {
                    assert!(d[i][j].is_zero());
                }
            }
        }
        assert_eq!(s.diag, vec![2.into(), 6.into(), 12.into()]);
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(3));
    }

    #[test]
    fn quotient_of_z8_by_4() {
        let q = QuotientPresentation::new(&[8], &[vec![4]]);
        assert_eq!(q.orders, vec![4]);
        assert_eq!(q.map(&[5]), vec![1]);
    }

    #[test]
    fn subgroup_of_z4_z2() {
        // subgroup generated by (2,1) in Z/4 + Z/2
        let s = SubgroupPresentation::new(&[4, 2], &[vec![2, 1]]);
        assert_eq!(s.order(), 2);
        assert!(s.contains(&[2, 1]));
        assert!(!s.contains(&[2, 0]));
        assert!(s.contains(&[0, 0]));
    }

    #[test]
    fn kernel_of_reduction() {
        // Z/4 -> Z/2, 1 -> 1: kernel generated by 2
        let gens = kernel_mod(&[vec![1]], &[2]);
        let s = SubgroupPresentation::new(&[4], &gens);
        assert_eq!(s.order(), 2);
        assert!(s.contains(&[2]));
    }

    #[test]
    fn cokernel_free_part() {
        let (free, tors) = cokernel_invariants(&b(&[&[1, 1, 0]]), 3);
        assert_eq!(free, 2);
        assert!(tors.is_empty());
        let (free, tors) = cokernel_invariants(&b(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(free, 0);
        assert_eq!(tors, vec![BigInt::from(6)]);
    }
}
