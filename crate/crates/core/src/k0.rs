//! The Grothendieck group of a finite diagram: generators `[R]`, a relation
//! `[R] = [S]` per weak equivalence and `[E] = [F] + [B]` per fibration
//! sequence `F -> E -> B`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::smith;

/// Name of the zero object; `[0] = 0` is always imposed.
pub const ZERO: &str = "0";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Diagram {
    pub objects: Vec<String>,
    #[serde(default, rename = "weq")]
    pub weak_equivalences: Vec<(String, String)>,
    /// `(F, E, B)`
    #[serde(default, rename = "fib_seq")]
    pub fibration_sequences: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Presentation {
    pub rank: usize,
    #[serde(with = "decimal::vec")]
    pub torsion: Vec<BigInt>,
    /// coordinates in `Z/t1 + ... + Z/tk + Z^rank`
    #[serde(with = "decimal::map")]
    pub classes: BTreeMap<String, Vec<BigInt>>,
    pub relations: Vec<Vec<i64>>,
}

impl K0Diagram {
    /// Objects in order, with `0` appended when absent.
    pub fn generators(&self) -> Vec<String> {
        let mut objs = self.objects.clone();
        if !objs.iter().any(|o| o == ZERO) {
            objs.push(ZERO.into());
        }
        objs
    }

    pub fn relations(&self) -> Result<Vec<Vec<i64>>> {
        let objs = self.generators();
        let index = |name: &str| {
            objs.iter()
                .position(|o| o == name)
                .ok_or_else(|| Error::Parse(format!("unknown object {name}")))
        };
        let mut rows = Vec::new();
        let mut zero = vec![0i64; objs.len()];
        zero[index(ZERO)?] = 1;
        rows.push(zero);
        for (a, b) in &self.weak_equivalences {
            let mut r = vec![0i64; objs.len()];
            r[index(a)?] += 1;
            r[index(b)?] -= 1;
            rows.push(r);
        }
        for (f, e, b) in &self.fibration_sequences {
            let mut r = vec![0i64; objs.len()];
            r[index(e)?] += 1;
            r[index(f)?] -= 1;
            r[index(b)?] -= 1;
            rows.push(r);
        }
        Ok(rows)
    }
}

pub fn k0_presentation(diagram: &K0Diagram) -> Result<K0Presentation> {
    let objs = diagram.generators();
    let n = objs.len();
    let relations = diagram.relations()?;
    let rows: Vec<Vec<BigInt>> = relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let s = smith(&rows, n);
    let diag: Vec<BigInt> = (0..n).map(|j| s.diag.get(j).cloned().unwrap_or_else(BigInt::zero)).collect();
    let kept: Vec<usize> = (0..n).filter(|&j| !diag[j].is_one()).collect();
    let torsion: Vec<BigInt> = kept.iter().filter(|&&j| !diag[j].is_zero()).map(|&j| diag[j].clone()).collect();
    let rank = kept.len() - torsion.len();
    // the basis change x -> x V diagonalises the relations, so the class of
    // generator i is row i of V read modulo the diagonal
    let classes = objs
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let coords = kept
                .iter()
                .map(|&j| {
                    let c = s.v[i][j].clone();
                    if diag[j].is_zero() {
                        c
                    } else {
                        c.mod_floor(&diag[j])
                    }
                })
                .collect();
            (name.clone(), coords)
        })
        .collect();
    Ok(K0Presentation { rank, torsion, classes, relations })
}

impl K0Presentation {
    /// Class of `sum c_i [R_i]`.
    pub fn class_of(&self, combo: &[(&str, i64)]) -> Result<Vec<BigInt>> {
        let width = self.torsion.len() + self.rank;
        let mut acc = vec![BigInt::zero(); width];
        for (name, c) in combo {
            let v = self.classes.get(*name).ok_or_else(|| Error::Parse(format!("unknown object {name}")))?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x * BigInt::from(*c);
            }
        }
        for (a, t) in acc.iter_mut().zip(&self.torsion) {
            *a = a.mod_floor(t);
        }
        Ok(acc)
    }
}

/// Integers as decimal strings in JSON.
mod decimal {
    use num_bigint::BigInt;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    fn parse<E: Error>(s: &str) -> Result<BigInt, E> {
        s.parse().map_err(|_| E::custom(format!("not an integer: {s}")))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?.iter().map(|s| parse(s)).collect()
        }
    }

    pub mod map {
        use super::*;
        use std::collections::BTreeMap;

        pub fn serialize<S: Serializer>(m: &BTreeMap<String, Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
            s.collect_map(m.iter().map(|(k, v)| (k, v.iter().map(|x| x.to_string()).collect::<Vec<_>>())))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Vec<BigInt>>, D::Error> {
            BTreeMap::<String, Vec<String>>::deserialize(d)?
                .into_iter()
                .map(|(k, v)| Ok((k, v.iter().map(|s| parse(s)).collect::<Result<_, _>>()?)))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_is_negative() {
        let d = K0Diagram {
            objects: vec!["A".into(), "OA".into()],
            weak_equivalences: vec![],
            fibration_sequences: vec![("OA".into(), "0".into(), "A".into())],
        };
        let p = k0_presentation(&d).unwrap();
        assert_eq!((p.rank, p.torsion.len()), (1, 0));
        assert_eq!(p.class_of(&[("A", 1), ("OA", 1)]).unwrap(), vec![BigInt::zero()]);
        assert_eq!(p.class_of(&[("0", 1)]).unwrap(), vec![BigInt::zero()]);
        let back: K0Presentation = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn torsion_from_a_doubled_relation() {
        // [E] = 2[A], [E] = 0 through E ~ 0
        let d = K0Diagram {
            objects: vec!["A".into(), "E".into()],
            weak_equivalences: vec![("E".into(), "0".into())],
            fibration_sequences: vec![("A".into(), "E".into(), "A".into())],
        };
        let p = k0_presentation(&d).unwrap();
        assert_eq!(p.rank, 0);
        assert_eq!(p.torsion, vec![BigInt::from(2)]);
        assert_eq!(p.class_of(&[("A", 2)]).unwrap(), vec![BigInt::zero()]);
        assert_ne!(p.class_of(&[("A", 1)]).unwrap(), vec![BigInt::zero()]);
    }
}
