//! The bundled ring corpus.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::k0::K0Diagram;
use crate::ring::{FiniteRing, HomSpec, Ring, RingHom, RingSpec};

macro_rules! entry {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../corpus/", $name, ".json")))
    };
}

/// `(file stem, JSON)` for every bundled ring.
pub const RINGS: &[(&str, &str)] = &[
    entry!("sq0_z2"),
    entry!("sq0_z3"),
    entry!("two_z8"),
    entry!("upper3_f2"),
    entry!("f2_unital"),
    entry!("f3_unital"),
    entry!("z4_unital"),
    entry!("graded_f2"),
    entry!("sq0_z2_squared"),
    entry!("sq0_z2_cubed"),
    entry!("zero"),
];

pub const TOWER_H: &str = include_str!("../../../corpus/tower_h.json");
pub const TOWER_K: &str = include_str!("../../../corpus/tower_k.json");
pub const K0_LOOP: &str = include_str!("../../../corpus/k0_loop.json");

pub fn parse_ring(json: &str) -> Result<Ring> {
    let spec: RingSpec = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Arc::new(FiniteRing::new(spec)?))
}

/// Every bundled ring, by file stem.
pub fn rings() -> Vec<(&'static str, Ring)> {
    RINGS.iter().map(|(n, j)| (*n, parse_ring(j).expect("bundled ring is valid"))).collect()
}

/// Looks a ring up by file stem or by label.
pub fn lookup(name: &str) -> Option<(&'static str, Ring)> {
    rings().into_iter().find(|(n, r)| *n == name || r.label() == name)
}

pub fn ring(name: &str) -> Ring {
    lookup(name).unwrap_or_else(|| panic!("no corpus ring {name}")).1
}

/// Resolves a hom whose endpoints are named by label among `rings`.
pub fn parse_hom(json: &str, rings: &[Ring]) -> Result<RingHom> {
    let spec: HomSpec = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let find = |label: &str| {
        rings
            .iter()
            .find(|r| r.label() == label)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("unknown ring label {label}")))
    };
    RingHom::from_spec(&spec, find(&spec.source)?, find(&spec.target)?)
}

/// The surjection tower `(Z/2)^3 -> (Z/2)^2 -> Z/2`, square-zero.
#[derive(Clone, Debug)]
pub struct Tower {
    pub h: RingHom,
    pub k: RingHom,
}

pub fn tower() -> Tower {
    let all: Vec<Ring> = rings().into_iter().map(|(_, r)| r).collect();
    Tower {
        h: parse_hom(TOWER_H, &all).expect("bundled hom is valid"),
        k: parse_hom(TOWER_K, &all).expect("bundled hom is valid"),
    }
}

pub fn k0_loop() -> K0Diagram {
    serde_json::from_str(K0_LOOP).expect("bundled diagram is valid")
}

/// Generator degrees of the graded example `F2 + F2 e`.
pub const GRADED_DEGREES: [u32; 2] = [0, 1];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads() {
        let rs = rings();
        assert_eq!(rs.len(), RINGS.len());
        assert_eq!(ring("upper3_f2").nilpotency_class(), Some(3));
        assert_eq!(ring("two_z8").order(), 4);
        let t = tower();
        assert!(t.h.is_surjective() && t.k.is_surjective());
    }
}
