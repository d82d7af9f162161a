use crate::vertex_set::VertexSet;

/// Family of pairwise incomparable sets kept as the minimal elements of
/// everything inserted so far. Buckets by cardinality so subset queries only
/// scan sets that are small enough to qualify.
#[derive(Clone, Debug, Default)]
pub struct MinimalAntichain {
    by_size: Vec<Vec<VertexSet>>,
    len: usize,
}

impl MinimalAntichain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whether some member is a subset of `set`.
    pub fn covers(&self, set: &VertexSet) -> bool {
        let size = set.len();
        self.by_size
            .iter()
            .take(size + 1)
            .any(|bucket| bucket.iter().any(|m| m.is_subset(set)))
    }

    /// Inserts `set` and evicts its strict supersets. Returns `false` (and
    /// changes nothing) when `set` is already covered.
    pub fn insert(&mut self, set: VertexSet) -> bool {
        if self.covers(&set) {
            return false;
        }
        let size = set.len();
        for bucket in self.by_size.iter_mut().skip(size + 1) {
            let before = bucket.len();
            bucket.retain(|m| !set.is_subset(m));
            self.len -= before - bucket.len();
        }
        if self.by_size.len() <= size {
            self.by_size.resize_with(size + 1, Vec::new);
        }
        self.by_size[size].push(set);
        self.len += 1;
        true
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Members ordered by cardinality, then lexicographically.
    pub fn sorted_members(&self) -> Vec<&VertexSet> {
        let mut all: Vec<&VertexSet> = self.by_size.iter().flatten().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }
}
