/// Disjoint sets whose representative carries a caller-chosen label.
#[derive(Debug, Clone)]
pub(crate) struct LabeledUnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    label: Vec<usize>,
}

impl LabeledUnionFind {
    pub fn new(len: usize) -> Self {
        LabeledUnionFind {
            parent: (0..len).collect(),
            rank: vec![0; len],
            label: (0..len).collect(),
        }
    }

    fn root(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Label of the set containing `x`.
    pub fn find(&mut self, x: usize) -> usize {
        let r = self.root(x);
        self.label[r]
    }

    /// Merges the sets of `x` and `y`; the merged set gets `label`.
    pub fn union(&mut self, x: usize, y: usize, label: usize) {
        let (mut rx, mut ry) = (self.root(x), self.root(y));
        if rx != ry {
            if self.rank[rx] < self.rank[ry] {
                std::mem::swap(&mut rx, &mut ry);
            }
            self.parent[ry] = rx;
            if self.rank[rx] == self.rank[ry] {
                self.rank[rx] += 1;
            }
        }
        self.label[rx] = label;
    }
}
