//! Deterministic union-find and the strict `π0` partition.

/// Union-find in which the smaller index always becomes the root.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Returns whether the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Partition of `0..n` into classes, each labelled by its least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// class index of each element
    pub labels: Vec<usize>,
    /// members of each class, classes ordered by least member
    pub classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    /// Whether every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.classes.iter().all(|c| c.iter().all(|&m| coarser.same(c[0], m)))
    }
}

/// Reflexive, symmetric and transitive closure of the given edges.
pub fn strict_pi0(n: usize, edges: &[(usize, usize)]) -> Partition {
    let mut uf = UnionFind::new(n);
    let mut sorted = edges.to_vec();
    sorted.sort();
    for (a, b) in sorted {
        uf.union(a, b);
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut labels = vec![0; n];
    let mut index_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = roots[i];
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = classes.len();
            classes.push(Vec::new());
        }
        labels[i] = index_of_root[r];
        classes[labels[i]].push(i);
    }
    Partition { labels, classes }
}

/// Shortest path from `from` to `to` over undirected edges, as a list of
/// `(edge index, traversed forwards)`.
pub fn edge_path(edges: &[(usize, usize)], from: usize, to: usize) -> Option<Vec<(usize, bool)>> {
    use std::collections::{BTreeMap, VecDeque};
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: BTreeMap<usize, (usize, usize, bool)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for (k, &(a, b)) in edges.iter().enumerate() {
            let (next, forwards) = if a == u {
                (b, true)
            } else if b == u {
                (a, false)
            } else {
                continue;
            };
            if next == from || prev.contains_key(&next) {
                continue;
            }
            prev.insert(next, (u, k, forwards));
            if next == to {
                let mut path = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, k, f) = prev[&cur];
                    path.push((k, f));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(next);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_without_edges() {
        let p = strict_pi0(4, &[]);
        assert_eq!(p.class_count(), 4);
    }

    #[test]
    fn chain_merges() {
        let p = strict_pi0(3, &[(1, 2), (0, 1)]);
        assert_eq!(p.classes, vec![vec![0, 1, 2]]);
        assert_eq!(edge_path(&[(1, 2), (0, 1)], 2, 0), Some(vec![(0, false), (1, false)]));
    }

    #[test]
    fn labels_follow_least_member() {
        let p = strict_pi0(5, &[(4, 1), (3, 2)]);
        assert_eq!(p.classes, vec![vec![0], vec![1, 4], vec![2, 3]]);
        assert!(strict_pi0(5, &[]).refines(&p));
        assert!(!p.refines(&strict_pi0(5, &[])));
    }
}
