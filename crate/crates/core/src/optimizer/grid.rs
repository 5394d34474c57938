//! Brute-force maximisation over the rational grid `{k/D : Σk = D}`.
//!
//! The grid maximum is a certified lower bound on the simplex maximum. If
//! `G` bounds every partial derivative on the simplex, each simplex point
//! is within `ℓ1` distance `n/D` of some grid point, so the grid maximum is
//! also within `G·n/D` of the true one. Grid points that are discrete local
//! maxima within that slack are then polished by continuous ascent.

use serde::Serialize;

use super::{ascent, SolverConfig};
use crate::error::{Error, Result};
use crate::hypergraph::{binomial, Hypergraph};
use crate::objective::{Coefficients, LevelWeights, Polynomial, WeightVector};
use crate::par;

pub const GRID_POINT_LIMIT: u128 = 10_000_000;
const MAX_POLISH: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    /// Exact maximum over the grid (up to float evaluation).
    pub value: f64,
    pub x: WeightVector,
    /// Best value after polishing grid local maxima; never below `value`.
    pub polished_value: f64,
    pub polished_x: WeightVector,
    pub points: u128,
    /// `G·n/D`, an upper bound on `max_S L − value`.
    pub lipschitz_slack: f64,
}

pub fn grid_oracle(h: &Hypergraph, alpha: &Coefficients, d: usize) -> Result<GridResult> {
    grid_oracle_weighted(h, &alpha.level_weights(h)?, d, &SolverConfig::default())
}

pub fn grid_oracle_weighted(h: &Hypergraph, weights: &LevelWeights, d: usize, cfg: &SolverConfig) -> Result<GridResult> {
    if d == 0 {
        return Err(Error::InvalidParams("grid resolution must be positive".into()));
    }
    let n = h.n();
    let points = binomial((d + n - 1) as u64, (n - 1) as u64);
    if points > GRID_POINT_LIMIT {
        return Err(Error::GridTooLarge { points, limit: GRID_POINT_LIMIT });
    }
    let poly = Polynomial::new(h, weights);
    let slack = gradient_bound(h, weights) * n as f64 / d as f64;

    // Pass 1: grid maximum, partitioned by the first coordinate.
    let firsts: Vec<usize> = (0..=d).collect();
    let best = par::map_slice(&firsts, cfg.parallel, |&k0| {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for_each_composition(n, d, k0, |k| {
            let v = poly.eval(&to_point(k, d));
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, k.to_vec()));
            }
        });
        best
    })
    .into_iter()
    .flatten()
    .fold(None::<(f64, Vec<usize>)>, |acc, c| match acc {
        Some(a) if a.0 >= c.0 => Some(a),
        _ => Some(c),
    })
    .expect("grid is nonempty");

    // Pass 2: discrete local maxima within the slack.
    let threshold = best.0 - slack;
    let mut seeds: Vec<(f64, Vec<usize>)> = par::map_slice(&firsts, cfg.parallel, |&k0| {
        let mut found = Vec::new();
        for_each_composition(n, d, k0, |k| {
            let v = poly.eval(&to_point(k, d));
            if v >= threshold && is_local_max(&poly, k, d, v) {
                found.push((v, k.to_vec()));
            }
        });
        found.sort_by(|a, b| b.0.total_cmp(&a.0));
        found.truncate(MAX_POLISH);
        found
    })
    .into_iter()
    .flatten()
    .collect();
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    seeds.truncate(MAX_POLISH);

    let x_grid = to_point(&best.1, d);
    let polished = par::map_slice(&seeds, cfg.parallel, |(_, k)| ascent::ascend(&poly, &to_point(k, d), cfg));
    let (mut polished_value, mut polished_x) = (best.0, x_grid.clone());
    for run in polished {
        if run.value > polished_value {
            polished_value = run.value;
            polished_x = run.x;
        }
    }
    Ok(GridResult {
        value: best.0,
        x: WeightVector::renormalize(x_grid)?,
        polished_value,
        polished_x: WeightVector::renormalize(polished_x)?,
        points,
        lipschitz_slack: slack,
    })
}

/// `max_i Σ_{e∋i} w_e`, which bounds every partial on the simplex.
fn gradient_bound(h: &Hypergraph, weights: &LevelWeights) -> f64 {
    let mut per_vertex = vec![0.0; h.n()];
    for e in h.all_edges() {
        let w = weights.get(e.len());
        e.iter().for_each(|&v| per_vertex[v - 1] += w);
    }
    per_vertex.into_iter().fold(0.0, f64::max)
}

fn to_point(k: &[usize], d: usize) -> Vec<f64> {
    k.iter().map(|&c| c as f64 / d as f64).collect()
}

/// No single unit transfer `k_a → k_b` improves the value.
fn is_local_max(poly: &Polynomial, k: &[usize], d: usize, v: f64) -> bool {
    let mut x = to_point(k, d);
    let unit = 1.0 / d as f64;
    for a in 0..k.len() {
        if k[a] == 0 {
            continue;
        }
        for b in 0..k.len() {
            if a == b {
                continue;
            }
            x[a] -= unit;
            x[b] += unit;
            let w = poly.eval(&x);
            x[a] += unit;
            x[b] -= unit;
            if w > v {
                return false;
            }
        }
    }
    true
}

/// Visits every composition of `d` into `n` parts whose first part is
/// `first`, in lexicographic order.
fn for_each_composition<F: FnMut(&[usize])>(n: usize, d: usize, first: usize, mut f: F) {
    let mut k = vec![0; n];
    k[0] = first;
    if n == 1 {
        if first == d {
            f(&k);
        }
        return;
    }
    let rest = d - first;
    // k[1..n-1] enumerated as an odometer; the last part takes the remainder.
    k[n - 1] = rest;
    loop {
        f(&k);
        // Advance: find the rightmost free position (< n-1) that can grow.
        let mut pos = n - 2;
        loop {
            if pos == 0 {
                return;
            }
            if k[n - 1] > 0 {
                k[pos] += 1;
                k[n - 1] -= 1;
                break;
            }
            // Carry: reset this position and move left.
            k[n - 1] += k[pos];
            k[pos] = 0;
            pos -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::EdgeTypeSet;

    #[test]
    fn composition_count() {
        for (n, d) in [(1, 4), (2, 5), (3, 4), (4, 6)] {
            let mut count = 0u128;
            for first in 0..=d {
                for_each_composition(n, d, first, |k| {
                    assert_eq!(k.iter().sum::<usize>(), d);
                    count += 1;
                });
            }
            assert_eq!(count, binomial((d + n - 1) as u64, (n - 1) as u64));
        }
    }

    #[test]
    fn single_edge_at_half() {
        let h = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        let g = grid_oracle(&h, &Coefficients::base_only(2), 2).unwrap();
        assert_eq!(g.value, 0.25);
        assert_eq!(g.x.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn complete_graph_grid_is_exact() {
        for t in 2..=5usize {
            let h = Hypergraph::complete(t, &EdgeTypeSet::new([2]).unwrap()).unwrap();
            let g = grid_oracle(&h, &Coefficients::base_only(2), 60).unwrap();
            let expected = 0.5 * (1.0 - 1.0 / t as f64);
            assert!((g.value - expected).abs() < 1e-12, "t={t}: {}", g.value);
        }
    }

    #[test]
    fn rejects_huge_grids() {
        let h = Hypergraph::empty(20);
        assert!(matches!(
            grid_oracle(&h, &Coefficients::base_only(2), 100),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn polish_never_loses_value() {
        let h = Hypergraph::new(4, vec![vec![1, 2], vec![2, 3], vec![1, 3], vec![1, 2, 4], vec![3, 4]]).unwrap();
        let g = grid_oracle(&h, &Coefficients::unit(2, 3), 7).unwrap();
        assert!(g.polished_value >= g.value);
        assert!(g.lipschitz_slack > 0.0);
    }
}
