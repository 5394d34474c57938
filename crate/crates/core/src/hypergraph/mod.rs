//! Canonical non-uniform hypergraphs.
//!
//! A [`Hypergraph`] is a vertex count `n` plus, for every cardinality `r`, a
//! set of strictly increasing vertex sequences of length `r`. Vertices are
//! labelled `1..=n`. Only nonempty levels are stored, so the key set of the
//! level map is exactly the edge-type set `T(H)`.

mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use io::{parse_hypergraph, read_hypergraph, HypergraphJson};

/// Strictly increasing list of 1-based vertex labels.
pub type Edge = Vec<usize>;

/// Soft limits for desk-scale tooling. Enumeration-based oracles are only
/// guaranteed to finish quickly inside these bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_cardinality: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: 24, max_cardinality: 6 }
    }
}

impl Limits {
    pub fn check(&self, h: &Hypergraph) -> Result<()> {
        if h.n() > self.max_vertices {
            return Err(Error::InvalidParams(format!(
                "{} vertices exceeds the soft limit of {}",
                h.n(),
                self.max_vertices
            )));
        }
        if let Some(r) = h.edge_types().max() {
            if r > self.max_cardinality {
                return Err(Error::InvalidParams(format!(
                    "cardinality {r} exceeds the soft limit of {}",
                    self.max_cardinality
                )));
            }
        }
        Ok(())
    }
}

/// A sorted set of distinct positive edge cardinalities, e.g. `{1, 2, r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeTypeSet(BTreeSet<usize>);

impl EdgeTypeSet {
    pub fn new<I: IntoIterator<Item = usize>>(types: I) -> Result<Self> {
        let set: BTreeSet<usize> = types.into_iter().collect();
        if set.is_empty() || set.contains(&0) {
            return Err(Error::InvalidEdgeTypes);
        }
        Ok(EdgeTypeSet(set))
    }

    /// Parses a comma-separated list such as `"1,2,3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let types = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<usize>().map_err(|e| Error::Parse(format!("edge type {p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(types)
    }

    pub fn contains(&self, r: usize) -> bool {
        self.0.contains(&r)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> usize {
        *self.0.first().expect("edge type sets are nonempty")
    }

    pub fn max(&self) -> usize {
        *self.0.last().expect("edge type sets are nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for EdgeTypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Edge types actually present in a hypergraph. Unlike [`EdgeTypeSet`] this
/// may be empty (a hypergraph with no edges).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PresentTypes(BTreeSet<usize>);

impl PresentTypes {
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
    pub fn contains(&self, r: usize) -> bool {
        self.0.contains(&r)
    }
    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }
    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
    /// The nonempty type set, if any edge exists.
    pub fn as_edge_types(&self) -> Option<EdgeTypeSet> {
        EdgeTypeSet::new(self.0.iter().copied()).ok()
    }
    /// Whether the present types equal the given list exactly.
    pub fn equals(&self, types: &[usize]) -> bool {
        self.0.len() == types.len() && types.iter().all(|r| self.0.contains(r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    levels: BTreeMap<usize, BTreeSet<Edge>>,
}

impl Hypergraph {
    /// Validates and canonicalises a raw edge list.
    ///
    /// Each edge is sorted; an edge that repeats a vertex, falls outside
    /// `1..=n`, is empty, or coincides with another edge after sorting is
    /// rejected.
    pub fn new(n: usize, raw: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut h = Hypergraph::empty(n);
        for mut edge in raw {
            if edge.is_empty() {
                return Err(Error::EmptyEdge);
            }
            if let Some(&v) = edge.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            edge.sort_unstable();
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(edge));
            }
            let level = h.levels.entry(edge.len()).or_default();
            if level.contains(&edge) {
                return Err(Error::DuplicateEdge(edge));
            }
            level.insert(edge);
        }
        Ok(h)
    }

    /// Hypergraph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Hypergraph { n, levels: BTreeMap::new() }
    }

    /// The complete hypergraph `K_n^T`.
    pub fn complete(n: usize, types: &EdgeTypeSet) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if types.max() > n {
            return Err(Error::CardinalityTooLarge { r: types.max(), n });
        }
        let levels = types
            .iter()
            .map(|r| (r, (1..=n).combinations(r).collect::<BTreeSet<_>>()))
            .collect();
        Ok(Hypergraph { n, levels })
    }

    /// Builds from already-canonical level sets. Empty levels are dropped.
    pub(crate) fn from_levels(n: usize, levels: BTreeMap<usize, BTreeSet<Edge>>) -> Self {
        let levels = levels.into_iter().filter(|(_, e)| !e.is_empty()).collect();
        Hypergraph { n, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_types(&self) -> PresentTypes {
        PresentTypes(self.levels.keys().copied().collect())
    }

    /// Total number of edges over all levels.
    pub fn edge_count(&self) -> usize {
        self.levels.values().map(BTreeSet::len).sum()
    }

    /// Number of `r`-edges.
    pub fn level_size(&self, r: usize) -> usize {
        self.levels.get(&r).map_or(0, BTreeSet::len)
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// The `r`-edges in canonical order.
    pub fn edges(&self, r: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.levels.get(&r).into_iter().flatten()
    }

    /// Every edge, grouped by ascending cardinality.
    pub fn all_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.levels.values().flatten()
    }

    pub(crate) fn levels(&self) -> &BTreeMap<usize, BTreeSet<Edge>> {
        &self.levels
    }

    /// Membership test for a canonical (sorted) edge.
    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        self.levels.get(&edge.len()).is_some_and(|l| l.contains(edge))
    }

    /// The level hypergraph `H^r`: same vertex count, only the `r`-edges.
    pub fn level(&self, r: usize) -> Hypergraph {
        let mut levels = BTreeMap::new();
        if let Some(edges) = self.levels.get(&r) {
            levels.insert(r, edges.clone());
        }
        Hypergraph { n: self.n, levels }
    }

    /// Vertices covered by at least one `r`-edge.
    pub fn vertex_support(&self, r: usize) -> BTreeSet<usize> {
        self.edges(r).flatten().copied().collect()
    }

    /// True iff every `r`-subset of `s` is an edge for each `r ∈ types` with
    /// `r <= |s|`. Vacuously true for the empty set.
    pub fn is_complete_on(&self, s: &BTreeSet<usize>, types: &EdgeTypeSet) -> bool {
        let verts: Vec<usize> = s.iter().copied().collect();
        types
            .iter()
            .filter(|&r| r <= verts.len())
            .all(|r| verts.iter().copied().combinations(r).all(|e| self.contains_edge(&e)))
    }

    /// Union of two hypergraphs on the larger vertex count.
    pub fn union(&self, other: &Hypergraph) -> Hypergraph {
        let mut levels = self.levels.clone();
        for (r, edges) in &other.levels {
            levels.entry(*r).or_default().extend(edges.iter().cloned());
        }
        Hypergraph { n: self.n.max(other.n), levels }
    }

    /// Relabels vertices: vertex `v` becomes `new_label[v - 1]`.
    pub fn relabel(&self, new_label: &[usize]) -> Result<Hypergraph> {
        if new_label.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: new_label.len() });
        }
        let mut seen = vec![false; self.n];
        for &l in new_label {
            if l == 0 || l > self.n || std::mem::replace(&mut seen[l - 1], true) {
                return Err(Error::InvalidParams("relabelling is not a permutation of 1..=n".into()));
            }
        }
        let levels = self
            .levels
            .iter()
            .map(|(&r, edges)| {
                let relabelled = edges
                    .iter()
                    .map(|e| {
                        let mut m: Edge = e.iter().map(|&v| new_label[v - 1]).collect();
                        m.sort_unstable();
                        m
                    })
                    .collect();
                (r, relabelled)
            })
            .collect();
        Ok(Hypergraph { n: self.n, levels })
    }

    /// Sub-hypergraph induced on `keep`, relabelled to `1..=|keep|` in
    /// ascending order of the kept labels.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> Result<Hypergraph> {
        if keep.is_empty() {
            return Err(Error::NoVertices);
        }
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
        let levels = self
            .levels
            .iter()
            .map(|(&r, edges)| {
                let kept = edges
                    .iter()
                    .filter(|e| e.iter().all(|v| index.contains_key(v)))
                    .map(|e| e.iter().map(|v| index[v]).collect::<Edge>())
                    .collect();
                (r, kept)
            })
            .collect();
        Ok(Hypergraph::from_levels(keep.len(), levels))
    }

    /// Canonical edge list, grouped by cardinality then lexicographic.
    pub fn canonical_edges(&self) -> Vec<Edge> {
        self.all_edges().cloned().collect()
    }

    /// SHA-256 over the canonical form, hex encoded.
    pub fn canonical_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("n={}\n", self.n));
        for e in self.all_edges() {
            hasher.update(e.iter().join(" "));
            hasher.update("\n");
        }
        hex::encode(hasher.finalize())
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(n={}; ", self.n)?;
        let edges = self.all_edges().map(|e| e.iter().join("")).join(" ");
        write!(f, "{edges})")
    }
}

/// Binomial coefficient as `u128`, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
