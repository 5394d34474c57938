use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use proptest::prelude::*;

use lagrangian_lab::cliques::max_complete_subgraph;
use lagrangian_lab::compression::{compress_hypergraph, is_left_compressed, left_compress_fixpoint};
use lagrangian_lab::generators::gen_random_levels;
use lagrangian_lab::objective::{eval_l, eval_lambda_prime, factorial, LevelWeights, Polynomial};
use lagrangian_lab::optimizer::{grid_oracle, maximize, maximize_weighted, project_to_simplex};
use lagrangian_lab::{Coefficients, EdgeTypeSet, Hypergraph, SolverConfig, WeightVector};

fn small_cfg() -> SolverConfig {
    SolverConfig { starts: 16, parallel: false, ..SolverConfig::default() }
}

/// A random non-empty hypergraph on `n` vertices with levels drawn from `1..=4`.
fn hypergraph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n, 1u8..16, 0.2f64..0.9, any::<u64>()).prop_filter_map("no edges", |(n, mask, density, seed)| {
        let levels: Vec<(usize, f64)> = (1..=4).filter(|r| mask & (1 << (r - 1)) != 0 && *r <= n).map(|r| (r, density)).collect();
        let h = gen_random_levels(n, &levels, seed).ok()?;
        (!h.is_empty()).then_some(h)
    })
}

fn with_point(max_n: usize) -> impl Strategy<Value = (Hypergraph, Vec<f64>)> {
    hypergraph(max_n).prop_flat_map(|h| {
        let n = h.n();
        (Just(h), prop::collection::vec(0.0f64..1.0, n))
    })
}

fn simplex_point(raw: &[f64]) -> WeightVector {
    let shifted: Vec<f64> = raw.iter().map(|v| v + 1e-3).collect();
    WeightVector::renormalize(shifted).unwrap()
}

fn unit(h: &Hypergraph) -> Coefficients {
    let types = h.edge_types();
    Coefficients::unit(types.min().unwrap(), types.max().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_prime_is_rescaled_weighted_program((h, raw) in with_point(7)) {
        let x = simplex_point(&raw);
        let types = h.edge_types().to_vec();
        let r0 = types[0];
        let scaled = factorial(r0) * eval_l(&h, &Coefficients::lambda_prime(&types).unwrap(), &x).unwrap();
        let direct = eval_lambda_prime(&h, &x).unwrap();
        prop_assert!((scaled - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn euler_relation((h, raw) in with_point(7)) {
        // Each level is homogeneous of degree r, so x·∇L = Σ r·L_r.
        let x = simplex_point(&raw);
        let poly = Polynomial::new(&h, &LevelWeights::unit(&h));
        let g = poly.gradient(x.as_slice());
        let lhs: f64 = x.as_slice().iter().zip(&g).map(|(a, b)| a * b).sum();
        let rhs: f64 = poly.level_values(x.as_slice()).iter().map(|&(r, v)| r as f64 * v).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn zero_weight_vertex_drops_out((h, raw) in with_point(7), pick in any::<prop::sample::Index>()) {
        let n = h.n();
        let v = pick.index(n) + 1;
        let mut y: Vec<f64> = raw.iter().map(|a| a + 1e-3).collect();
        y[v - 1] = 0.0;
        let x = WeightVector::renormalize(y).unwrap();
        let keep: BTreeSet<usize> = (1..=n).filter(|&u| u != v).collect();
        let rest = h.induced(&keep).unwrap();
        let rest_x: Vec<f64> = keep.iter().map(|&u| x.weight(u)).collect();
        let w = LevelWeights::unit(&h);
        let full = Polynomial::new(&h, &w).eval(x.as_slice());
        let reduced = Polynomial::new(&rest, &w).eval(&rest_x);
        prop_assert!((full - reduced).abs() <= 1e-12);
    }

    #[test]
    fn compression_keeps_level_sizes(h in hypergraph(7), i in 1usize..7, gap in 1usize..6) {
        let j = i + gap;
        prop_assume!(j <= h.n());
        let c = compress_hypergraph(&h, i, j).unwrap();
        for r in h.edge_types().iter() {
            prop_assert_eq!(c.level_size(r), h.level_size(r));
        }
    }

    #[test]
    fn fixpoint_is_left_compressed_and_stable(h in hypergraph(7)) {
        let f = left_compress_fixpoint(&h).hypergraph;
        prop_assert!(is_left_compressed(&f));
        prop_assert_eq!(left_compress_fixpoint(&f).steps, 0);
        for r in h.edge_types().iter() {
            prop_assert_eq!(f.level_size(r), h.level_size(r));
        }
    }

    #[test]
    fn clique_search_matches_brute_force(h in hypergraph(8)) {
        let types = h.edge_types().as_edge_types().unwrap();
        let found = max_complete_subgraph(&h, &types);
        let complete = |s: &[usize]| {
            types.iter().all(|r| r > s.len() || s.iter().copied().combinations(r).all(|e| h.contains_edge(&e)))
        };
        let best = (1..=h.n()).rev().find(|&k| (1..=h.n()).combinations(k).any(|s| complete(&s))).unwrap();
        prop_assert_eq!(found.order, best);
        prop_assert!(complete(&found.vertices));
        let first = (1..=h.n()).combinations(best).find(|s| complete(s)).unwrap();
        prop_assert_eq!(found.vertices, first);
    }

    #[test]
    fn analytic_gradient_matches_central_differences((h, raw) in with_point(7)) {
        let x = simplex_point(&raw);
        let poly = Polynomial::new(&h, &LevelWeights::unit(&h));
        let g = poly.gradient(x.as_slice());
        let step = 1e-5;
        for i in 0..h.n() {
            let mut up = x.as_slice().to_vec();
            let mut down = up.clone();
            up[i] += step;
            down[i] -= step;
            let fd = (poly.eval(&up) - poly.eval(&down)) / (2.0 * step);
            prop_assert!((fd - g[i]).abs() <= 1e-7 * g[i].abs().max(1.0));
        }
    }

    #[test]
    fn projection_lands_on_simplex(v in prop::collection::vec(-5.0f64..5.0, 1..10)) {
        let p = project_to_simplex(&v);
        prop_assert!(p.as_slice().iter().all(|&a| a >= 0.0));
        prop_assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let again = project_to_simplex(p.as_slice());
        for (a, b) in p.as_slice().iter().zip(again.as_slice()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn canonical_hash_ignores_edge_order(h in hypergraph(7), seed in any::<u64>()) {
        let mut edges = h.canonical_edges();
        let k = (seed as usize) % edges.len();
        edges.rotate_left(k);
        let shuffled: Vec<Vec<usize>> = edges.into_iter().map(|mut e| { e.reverse(); e }).collect();
        let again = Hypergraph::new(h.n(), shuffled).unwrap();
        prop_assert_eq!(again.canonical_hash(), h.canonical_hash());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adding_edges_never_lowers_the_maximum(h in hypergraph(6), extra in hypergraph(6)) {
        prop_assume!(extra.n() <= h.n());
        let types = h.edge_types();
        let added: Vec<Vec<usize>> = extra.all_edges().filter(|e| types.contains(e.len())).cloned().collect();
        let bigger = h.union(&Hypergraph::new(h.n(), added).unwrap());
        let w = LevelWeights::unit(&h);
        let cfg = small_cfg();
        let small = maximize_weighted(&h, &w, &cfg).unwrap().value;
        let large = maximize_weighted(&bigger, &w, &cfg).unwrap().value;
        prop_assert!(large >= small - 1e-9);
    }

    #[test]
    fn optimizer_meets_grid_oracle(h in hypergraph(4)) {
        let alpha = unit(&h);
        let best = maximize(&h, &alpha, &small_cfg()).unwrap();
        let grid = grid_oracle(&h, &alpha, 20).unwrap();
        prop_assert!(best.value >= grid.value - 1e-12);
        prop_assert!(grid.value >= best.value - grid.lipschitz_slack - 1e-12);
        prop_assert!((best.value - grid.polished_value).abs() <= 1e-6);
        prop_assert!(best.kkt_residual <= 1e-5);
    }

    #[test]
    fn maximum_dominates_uniform_on_clique(h in hypergraph(7)) {
        let types = h.edge_types().as_edge_types().unwrap();
        let clique = max_complete_subgraph(&h, &types);
        let alpha = unit(&h);
        let at_clique = eval_l(&h, &alpha, &WeightVector::uniform_on(h.n(), &clique.vertices).unwrap()).unwrap();
        let best = maximize(&h, &alpha, &small_cfg()).unwrap();
        prop_assert!(best.value >= at_clique - 1e-12);
    }
}

#[test]
fn level_weights_follow_factorials() {
    let h = Hypergraph::complete(4, &EdgeTypeSet::new([1, 2, 3]).unwrap()).unwrap();
    let w: BTreeMap<usize, f64> = LevelWeights::lambda_prime(&h).0;
    assert_eq!(w, BTreeMap::from([(1, 1.0), (2, 2.0), (3, 6.0)]));
}
