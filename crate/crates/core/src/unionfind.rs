//! Disjoint sets with path compression and union by size.

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "too many elements for u32 indices");
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Size of the set containing `x`.
    pub fn size_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }

    /// Merges the sets of `a` and `b`; returns the surviving root, or `None`
    /// if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        Some(ra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_unions() {
        let mut uf = UnionFind::new(10);
        for (a, b) in [
            (4, 3),
            (3, 8),
            (6, 5),
            (9, 4),
            (2, 1),
            (5, 0),
            (7, 2),
            (6, 1),
        ] {
            uf.union(a, b);
        }
        assert_eq!(uf.components(), 2);
        assert!(uf.connected(8, 9));
        assert!(!uf.connected(0, 9));
        assert_eq!(uf.size_of(0), 6);
        assert_eq!(uf.union(0, 7), None);
    }

    proptest! {
        #[test]
        fn agrees_with_naive_labels(pairs in proptest::collection::vec((0usize..40, 0usize..40), 0..80)) {
            let mut uf = UnionFind::new(40);
            let mut label: Vec<usize> = (0..40).collect();
            for (a, b) in pairs {
                uf.union(a, b);
                let (la, lb) = (label[a], label[b]);
                for l in label.iter_mut() {
                    if *l == lb { *l = la; }
                }
            }
            for a in 0..40 {
                for b in 0..40 {
                    prop_assert_eq!(uf.connected(a, b), label[a] == label[b]);
                }
            }
            let distinct: std::collections::HashSet<_> = label.iter().collect();
            prop_assert_eq!(uf.components(), distinct.len());
        }
    }
}
