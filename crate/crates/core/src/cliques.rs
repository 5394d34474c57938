//! Exact search for complete `T`-subgraphs.
//!
//! A vertex set `S` is complete for `T` when every `r`-subset of `S` is an
//! `r`-edge for each `r ∈ T` with `r <= |S|`. Completeness is hereditary, so
//! a depth-first search that grows `S` in increasing label order and filters
//! the remaining candidates after each insertion visits every complete set.
//! When `2 ∈ T` candidates are prefiltered with the 2-level adjacency; when
//! `1 ∈ T` vertices without their singleton edge are dropped up front.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;

use crate::hypergraph::{EdgeTypeSet, Hypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    /// Lexicographically smallest maximum complete set (1-based).
    pub vertices: Vec<usize>,
    pub order: usize,
    /// False when another complete set of the same order exists.
    pub is_unique_max: bool,
}

struct Search<'a> {
    h: &'a Hypergraph,
    /// Levels other than 1 and 2 that need explicit subset checks.
    higher: Vec<usize>,
    adjacency: Option<Vec<Vec<bool>>>,
    eligible: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(h: &'a Hypergraph, types: &EdgeTypeSet) -> Self {
        let n = h.n();
        let eligible = (1..=n)
            .filter(|&v| !types.contains(1) || h.contains_edge(&[v]))
            .collect();
        let adjacency = types.contains(2).then(|| {
            let mut adj = vec![vec![false; n + 1]; n + 1];
            for e in h.edges(2) {
                adj[e[0]][e[1]] = true;
                adj[e[1]][e[0]] = true;
            }
            adj
        });
        let higher = types.iter().filter(|&r| r > 2).collect();
        Search { h, higher, adjacency, eligible }
    }

    /// Whether `S ∪ {v}` stays complete, given `S` is complete.
    fn can_add(&self, s: &[usize], v: usize) -> bool {
        if let Some(adj) = &self.adjacency {
            if !s.iter().all(|&u| adj[u][v]) {
                return false;
            }
        }
        self.higher.iter().all(|&r| {
            if r > s.len() + 1 {
                return true;
            }
            s.iter().copied().combinations(r - 1).all(|mut a| {
                a.push(v);
                a.sort_unstable();
                self.h.contains_edge(&a)
            })
        })
    }

    fn filter(&self, s: &[usize], cands: &[usize]) -> Vec<usize> {
        cands.iter().copied().filter(|&u| self.can_add(s, u)).collect()
    }

    /// Branch and bound for the largest set; first hit in lexicographic
    /// order wins ties.
    fn maximum(&self, s: &mut Vec<usize>, cands: &[usize], best: &mut Vec<usize>) {
        if s.len() > best.len() {
            *best = s.clone();
        }
        for (k, &v) in cands.iter().enumerate() {
            if s.len() + (cands.len() - k) <= best.len() {
                return;
            }
            s.push(v);
            let next = self.filter(s, &cands[k + 1..]);
            self.maximum(s, &next, best);
            s.pop();
        }
    }

    /// Collects up to `limit` complete sets of exactly `size` vertices.
    fn of_size(&self, s: &mut Vec<usize>, cands: &[usize], size: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
        if out.len() >= limit {
            return;
        }
        if s.len() == size {
            out.push(s.clone());
            return;
        }
        for (k, &v) in cands.iter().enumerate() {
            if s.len() + (cands.len() - k) < size || out.len() >= limit {
                return;
            }
            s.push(v);
            let next = self.filter(s, &cands[k + 1..]);
            self.of_size(s, &next, size, limit, out);
            s.pop();
        }
    }

    /// Bron–Kerbosch without pivoting; valid for any hereditary family when
    /// both candidate and excluded sets are refiltered against the current
    /// set. `budget` bounds the number of visited nodes.
    fn maximal(
        &self,
        s: &mut Vec<usize>,
        cands: Vec<usize>,
        mut excluded: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
        budget: &mut usize,
    ) {
        if out.len() >= limit || *budget == 0 {
            return;
        }
        *budget -= 1;
        if cands.is_empty() {
            if excluded.is_empty() && !s.is_empty() {
                let mut found = s.clone();
                found.sort_unstable();
                out.push(found);
            }
            return;
        }
        for (k, &v) in cands.iter().enumerate() {
            s.push(v);
            let next_c = self.filter(s, &cands[k + 1..]);
            let next_x = self.filter(s, &excluded);
            self.maximal(s, next_c, next_x, out, limit, budget);
            s.pop();
            excluded.push(v);
        }
    }
}

/// Maximum complete `T`-subgraph, exact.
pub fn max_complete_subgraph(h: &Hypergraph, types: &EdgeTypeSet) -> CliqueResult {
    let search = Search::new(h, types);
    let mut best = Vec::new();
    search.maximum(&mut Vec::new(), &search.eligible, &mut best);
    let order = best.len();
    let is_unique_max = if order == 0 {
        true
    } else {
        let mut found = Vec::new();
        search.of_size(&mut Vec::new(), &search.eligible, order, 2, &mut found);
        found.len() < 2
    };
    CliqueResult { vertices: best, order, is_unique_max }
}

/// Whether some `t`-subset is complete for `T`. Vacuously true for `t = 0`.
pub fn contains_complete(h: &Hypergraph, t: usize, types: &EdgeTypeSet) -> bool {
    if t == 0 {
        return true;
    }
    let search = Search::new(h, types);
    if search.eligible.len() < t {
        return false;
    }
    let mut found = Vec::new();
    search.of_size(&mut Vec::new(), &search.eligible, t, 1, &mut found);
    !found.is_empty()
}

/// Up to `limit` inclusion-maximal complete `T`-subgraphs, in discovery
/// order. The search visits at most `budget` nodes.
pub fn maximal_complete_subgraphs(h: &Hypergraph, types: &EdgeTypeSet, limit: usize, budget: usize) -> Vec<Vec<usize>> {
    let search = Search::new(h, types);
    let mut out = Vec::new();
    let mut budget = budget;
    search.maximal(&mut Vec::new(), search.eligible.clone(), Vec::new(), &mut out, limit, &mut budget);
    out
}

/// All complete sets of a given order (up to `limit`).
pub fn complete_subgraphs_of_order(h: &Hypergraph, t: usize, types: &EdgeTypeSet, limit: usize) -> Vec<BTreeSet<usize>> {
    let search = Search::new(h, types);
    let mut out = Vec::new();
    search.of_size(&mut Vec::new(), &search.eligible, t, limit, &mut out);
    out.into_iter().map(|s| s.into_iter().collect()).collect()
}
