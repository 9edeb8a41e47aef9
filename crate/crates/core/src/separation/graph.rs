use super::verdict::{decide_in, IntersectionVerdict};
use crate::attractor::{distance_between, AttractorContext, Witness};
use crate::budget::Budget;
use crate::error::Result;
use crate::system::IfsSystem;
use crate::word::Word;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Certified adjacency `i ∼ j ⟺ φ_i(E) ∩ φ_j(E) ≠ ∅` on `{0, …, N−1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjacencyGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    undecided: Vec<(usize, usize)>,
    #[serde(skip)]
    verdicts: BTreeMap<(usize, usize), IntersectionVerdict>,
}

impl AdjacencyGraph {
    /// Builds a graph from verdicts keyed by `(i, j)` with `i < j`.
    pub fn from_verdicts(vertices: usize, verdicts: BTreeMap<(usize, usize), IntersectionVerdict>) -> Self {
        let edges = verdicts
            .iter()
            .filter(|(_, v)| v.is_intersecting())
            .map(|(&k, _)| k)
            .collect();
        let undecided = verdicts
            .iter()
            .filter(|(_, v)| v.is_undecided())
            .map(|(&k, _)| k)
            .collect();
        AdjacencyGraph {
            vertices,
            edges,
            undecided,
            verdicts,
        }
    }

    /// Graph with the given certified edges and no undecided pairs.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        AdjacencyGraph {
            vertices,
            edges,
            undecided: Vec::new(),
            verdicts: BTreeMap::new(),
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn undecided(&self) -> &[(usize, usize)] {
        &self.undecided
    }

    pub fn verdict(&self, i: usize, j: usize) -> Option<&IntersectionVerdict> {
        self.verdicts.get(&(i.min(j), i.max(j)))
    }

    pub fn verdicts(&self) -> &BTreeMap<(usize, usize), IntersectionVerdict> {
        &self.verdicts
    }

    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// All pairwise verdicts, computed in parallel and merged in pair order.
pub fn adjacency_graph(sys: &IfsSystem, budget: &Budget) -> Result<AdjacencyGraph> {
    let ctx = AttractorContext::new(sys, budget);
    let n = sys.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| decide_in(&ctx, i, j, budget).map(|v| ((i, j), v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AdjacencyGraph::from_verdicts(n, verdicts.into_iter().collect()))
}

pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Classes as sorted member lists, ordered by smallest member.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.parent.len() {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }
}

/// The connected components of the certified-edge graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentPartition {
    components: Vec<Vec<usize>>,
    /// Undecided pairs existed, so components may be too fine.
    provisional: bool,
}

impl ComponentPartition {
    /// A partition given explicitly; components are normalized and sorted.
    pub fn new(components: Vec<Vec<usize>>, provisional: bool) -> Self {
        let mut components: Vec<Vec<usize>> = components
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        components.sort_by_key(|c| c[0]);
        ComponentPartition {
            components,
            provisional,
        }
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn is_provisional(&self) -> bool {
        self.provisional
    }

    pub fn component_of(&self, i: usize) -> Option<usize> {
        self.components.iter().position(|c| c.contains(&i))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Renders components with the system's labels, e.g. `{{1}, {2,3}}`.
    pub fn display_with(&self, labels: &[Word]) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|&i| labels[i].to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for ComponentPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.components.iter().flatten().max().map_or(0, |m| m + 1);
        let labels: Vec<Word> = (0..n).map(Word::single).collect();
        f.write_str(&self.display_with(&labels))
    }
}

pub fn components(graph: &AdjacencyGraph) -> ComponentPartition {
    let mut uf = UnionFind::new(graph.vertices());
    for &(a, b) in graph.edges() {
        uf.union(a, b);
    }
    ComponentPartition {
        components: uf.classes(),
        provisional: !graph.is_complete(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PropertyCheck {
    Pass,
    Fail { reason: String },
    Undecided { reason: String },
}

impl PropertyCheck {
    pub fn passed(&self) -> bool {
        matches!(self, PropertyCheck::Pass)
    }

    pub fn failed(&self) -> bool {
        matches!(self, PropertyCheck::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentCheck {
    pub component: Vec<usize>,
    /// The component's images are disjoint from all other images.
    pub separated: PropertyCheck,
    /// The component is connected through certified intersections.
    pub connected: PropertyCheck,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub checks: Vec<ComponentCheck>,
}

impl ComponentReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.separated.passed() && c.connected.passed())
    }
}

/// Re-checks that each component is separated from the rest and internally connected.
pub fn verify_component_properties(
    sys: &IfsSystem,
    partition: &ComponentPartition,
    budget: &Budget,
) -> Result<ComponentReport> {
    let ctx = AttractorContext::new(sys, budget);
    let mut checks = Vec::new();
    for comp in partition.components() {
        let inside: Vec<Word> = comp.iter().map(|&i| Word::single(i)).collect();
        let outside: Vec<Word> = (0..sys.len())
            .filter(|i| !comp.contains(i))
            .map(Word::single)
            .collect();
        let separated = if outside.is_empty() {
            PropertyCheck::Pass
        } else {
            let b = distance_between(&ctx, &inside, &ctx, &outside, budget)?;
            separation_check(b.witness.as_ref(), b.is_positive())
        };
        let connected = connectivity_check(&ctx, comp, budget)?;
        checks.push(ComponentCheck {
            component: comp.clone(),
            separated,
            connected,
        });
    }
    Ok(ComponentReport { checks })
}

fn separation_check(witness: Option<&Witness>, positive: bool) -> PropertyCheck {
    if let Some(w) = witness {
        let a = w.left.prefix.first().unwrap_or(0) + 1;
        let b = w.right.prefix.first().unwrap_or(0) + 1;
        PropertyCheck::Fail {
            reason: format!("images {a} and {b} meet at {}", w.point),
        }
    } else if positive {
        PropertyCheck::Pass
    } else {
        PropertyCheck::Undecided {
            reason: "distance to the complement not resolved within budget".into(),
        }
    }
}

fn connectivity_check(ctx: &AttractorContext<'_>, comp: &[usize], budget: &Budget) -> Result<PropertyCheck> {
    if comp.len() == 1 {
        return Ok(PropertyCheck::Pass);
    }
    let mut uf = UnionFind::new(comp.len());
    let mut unresolved = false;
    for a in 0..comp.len() {
        for b in a + 1..comp.len() {
            match decide_in(ctx, comp[a], comp[b], budget)? {
                IntersectionVerdict::CertifiedIntersect { .. } => {
                    uf.union(a, b);
                }
                IntersectionVerdict::Undecided { .. } => unresolved = true,
                IntersectionVerdict::CertifiedDisjoint { .. } => {}
            }
        }
    }
    let classes = uf.classes();
    Ok(if classes.len() == 1 {
        PropertyCheck::Pass
    } else if unresolved {
        PropertyCheck::Undecided {
            reason: "some internal pairs are undecided".into(),
        }
    } else {
        let first: Vec<usize> = classes[0].iter().map(|&k| comp[k] + 1).collect();
        PropertyCheck::Fail {
            reason: format!("subset {first:?} has no certified intersection with the rest"),
        }
    })
}
