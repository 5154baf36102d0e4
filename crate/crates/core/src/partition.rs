//! Canonical set partitions of `0..n`.

use std::collections::HashMap;
use std::hash::Hash;

/// A partition of `0..n` stored as a class index per element.
///
/// Classes are numbered in order of their least member, so two partitions
/// are equal exactly when their `class` vectors are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    class: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Groups elements with equal keys.
    pub fn from_keys<K: Eq + Hash>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let class: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        let count = ids.len();
        Partition { class, count }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { class: (0..n).collect(), count: n }
    }

    pub fn full(n: usize) -> Self {
        Partition { class: vec![0; n], count: usize::from(n > 0) }
    }

    /// Builds a partition from explicit blocks; `None` unless they cover `0..n` disjointly.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Option<Self> {
        let mut class = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return None;
            }
            for &x in block {
                if x >= n || class[x] != usize::MAX {
                    return None;
                }
                class[x] = b;
            }
        }
        if class.contains(&usize::MAX) {
            return None;
        }
        Some(Self::from_keys(class))
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.count
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    pub fn classes_vec(&self) -> &[usize] {
        &self.class
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    /// Blocks in class order, members ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &c) in self.class.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.count == self.class.len()
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![usize::MAX; self.count];
        self.class.iter().zip(&other.class).all(|(&a, &b)| {
            if image[a] == usize::MAX {
                image[a] = b;
            }
            image[a] == b
        })
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_keys(self.class.iter().zip(&other.class))
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.count];
            for (x, &c) in p.class.iter().enumerate() {
                if first[c] == usize::MAX {
                    first[c] = x;
                } else {
                    uf.union(first[c], x);
                }
            }
        }
        Partition::from_keys((0..n).map(|x| uf.find(x)))
    }

    /// Transports a partition along a map `0..len → 0..self.len()`.
    pub fn pull_back(&self, f: &[usize]) -> Partition {
        Partition::from_keys(f.iter().map(|&x| self.class[x]))
    }
}

/// Disjoint-set forest with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_numbering() {
        let p = Partition::from_keys(["b", "a", "b", "c"]);
        assert_eq!(p.classes_vec(), [0, 1, 0, 2]);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
        assert_eq!(Partition::from_blocks(4, &[vec![1], vec![3], vec![0, 2]]).unwrap(), p);
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_none());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![1]]).is_none());
    }

    proptest! {
        #[test]
        fn meet_and_join_bound_both(a in proptest::collection::vec(0usize..3, 0..9), b_seed in any::<u64>()) {
            let n = a.len();
            let b: Vec<usize> = (0..n).map(|i| ((b_seed >> (i % 60)) & 3) as usize).collect();
            let (p, q) = (Partition::from_keys(a), Partition::from_keys(b));
            let (m, j) = (p.meet(&q), p.join(&q));
            prop_assert!(m.refines(&p) && m.refines(&q));
            prop_assert!(p.refines(&j) && q.refines(&j));
            prop_assert!(Partition::discrete(n).refines(&m));
            prop_assert!(j.refines(&Partition::full(n)));
        }
    }
}
