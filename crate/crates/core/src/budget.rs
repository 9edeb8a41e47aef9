/// Work limits shared by the certified searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Pair expansions allowed in one branch-and-bound run.
    pub max_nodes: usize,
    /// Deepest cylinder level the search may reach.
    pub max_depth: usize,
    /// Longest preperiod tried when looking for a common periodic point.
    pub witness_preperiod: usize,
    /// Longest period word whose fixed point is used as a witness candidate.
    pub witness_period: usize,
    /// Largest system that powers and compositions may build.
    pub max_maps: usize,
    /// Largest number of balls in one cylinder cover.
    pub max_cover: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 1_000_000,
            max_depth: 40,
            witness_preperiod: 6,
            witness_period: 2,
            max_maps: 4096,
            max_cover: 1 << 20,
        }
    }
}

impl Budget {
    pub fn with_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn with_maps(mut self, max_maps: usize) -> Self {
        self.max_maps = max_maps;
        self
    }
}
