//! Left-compression `C_{i←j}`.
//!
//! `C_{i←j}(e)` swaps `j` for `i` in an edge that contains `j` but not `i`.
//! Applied to a family, an edge moves to its image unless the image is
//! already an edge, in which case it stays put; level sizes are therefore
//! preserved. A hypergraph is left-compressed when no such move changes it.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph};

/// Image of a single edge under `C_{i←j}`, kept in sorted order.
pub fn compress_edge(edge: &[usize], i: usize, j: usize) -> Result<Edge> {
    if i == 0 || i >= j {
        return Err(Error::InvalidCompression { i, j, n: usize::MAX });
    }
    Ok(shift(edge, i, j))
}

fn shift(edge: &[usize], i: usize, j: usize) -> Edge {
    if edge.contains(&i) || !edge.contains(&j) {
        return edge.to_vec();
    }
    let mut out: Edge = edge.iter().map(|&v| if v == j { i } else { v }).collect();
    out.sort_unstable();
    out
}

/// The compressed hypergraph `H_{i←j}`.
pub fn compress_hypergraph(h: &Hypergraph, i: usize, j: usize) -> Result<Hypergraph> {
    if i == 0 || i >= j || j > h.n() {
        return Err(Error::InvalidCompression { i, j, n: h.n() });
    }
    let levels: BTreeMap<usize, BTreeSet<Edge>> = h
        .levels()
        .iter()
        .map(|(&r, edges)| {
            let moved = edges
                .iter()
                .map(|e| {
                    let img = shift(e, i, j);
                    if edges.contains(&img) {
                        e.clone()
                    } else {
                        img
                    }
                })
                .collect();
            (r, moved)
        })
        .collect();
    Ok(Hypergraph::from_levels(h.n(), levels))
}

/// True iff every edge containing `j` but not `i` (for `i < j`) already has
/// its image `C_{i←j}(e)` in the same level.
pub fn is_left_compressed(h: &Hypergraph) -> bool {
    h.levels().values().all(|edges| {
        edges.iter().all(|e| {
            e.iter().all(|&j| {
                (1..j).all(|i| e.contains(&i) || edges.contains(&shift(e, i, j)))
            })
        })
    })
}

/// `Φ(H) = Σ_e Σ_{v∈e} v`; strictly decreases on every effective step.
pub fn potential(h: &Hypergraph) -> usize {
    h.all_edges().flatten().sum()
}

/// Outcome of [`left_compress_fixpoint`].
#[derive(Debug, Clone)]
pub struct Fixpoint {
    pub hypergraph: Hypergraph,
    /// Number of `(i, j)` steps that changed the edge set.
    pub steps: usize,
}

/// Applies compressions until the hypergraph is left-compressed.
///
/// Pairs are swept in lexicographic order and the sweep restarts after
/// every effective step, so the result is deterministic.
pub fn left_compress_fixpoint(h: &Hypergraph) -> Fixpoint {
    let mut current = h.clone();
    let mut steps = 0;
    let bound = potential(h);
    'restart: loop {
        for j in 2..=current.n() {
            for i in 1..j {
                let next = compress_hypergraph(&current, i, j).expect("1 <= i < j <= n");
                if next != current {
                    steps += 1;
                    debug_assert!(potential(&next) < potential(&current));
                    debug_assert!(steps <= bound);
                    current = next;
                    continue 'restart;
                }
            }
        }
        break;
    }
    Fixpoint { hypergraph: current, steps }
}
