//! Maximisation of hypergraph polynomials over the standard simplex.
//!
//! [`maximize`] runs projected-gradient ascent from three kinds of starting
//! points and keeps the best: uniform weightings on every maximal complete
//! subgraph, uniform weightings on each prefix `[k]`, and Dirichlet(1)
//! samples. Each run is cleaned up (tiny weights truncated, uncovered
//! support pairs merged) before selection, and ties in value go to the
//! smallest, then lexicographically first, support.

mod ascent;
mod grid;
mod simplex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::cliques::{max_complete_subgraph, maximal_complete_subgraphs};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::objective::{Coefficients, LevelWeights, Polynomial, WeightVector};
use crate::par;

pub use grid::{grid_oracle, grid_oracle_weighted, GridResult, GRID_POINT_LIMIT};
pub use simplex::project_to_simplex;

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "LAGRANGIAN_LAB_SEED";
const DEFAULT_SEED: u64 = 0x5eed;
const WARM_START_BUDGET: usize = 200_000;

pub fn default_seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Number of Dirichlet(1) random starts.
    pub starts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    /// Stationarity tolerance `‖P(x + ∇L) − x‖_∞`.
    pub tol_grad: f64,
    pub tol_value: f64,
    /// Weights at or below this are treated as zero.
    pub support_epsilon: f64,
    /// Weights in `(support_epsilon, repolish_below)` trigger a re-run from
    /// the truncated support.
    pub repolish_below: f64,
    /// Candidates within this much of the best value count as ties for the
    /// minimal-support rule.
    pub tie_tol: f64,
    pub grid_resolution: usize,
    pub seed: u64,
    pub max_warm_starts: usize,
    /// Fan independent runs out over the thread pool.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 64,
            max_iters: 5000,
            initial_step: 1.0,
            tol_grad: 1e-9,
            tol_value: 1e-12,
            support_epsilon: 1e-10,
            repolish_below: 1e-6,
            tie_tol: 1e-9,
            grid_resolution: 24,
            seed: default_seed(),
            max_warm_starts: 256,
            parallel: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("initial_step", self.initial_step),
            ("tol_grad", self.tol_grad),
            ("tol_value", self.tol_value),
            ("support_epsilon", self.support_epsilon),
            ("tie_tol", self.tie_tol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("solver {name} must be positive")));
            }
        }
        if self.max_iters == 0 || self.grid_resolution == 0 {
            return Err(Error::InvalidParams("solver max_iters and grid_resolution must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Best point came from a random Dirichlet start.
    Multistart,
    /// Best point came from the grid oracle's polish.
    Grid,
    /// Best point came from a clique or prefix warm start.
    Warmstart,
    /// Best point needed support merging after ascent.
    Combined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub value: f64,
    pub x: WeightVector,
    /// Vertices with weight above `support_epsilon`, ascending.
    pub support: Vec<usize>,
    pub kkt_residual: f64,
    pub method: Method,
    pub iterations: usize,
    pub converged: bool,
    /// Vertex labels ordered by non-increasing weight (ties by label), so
    /// `sorted_weights[k] = x[permutation[k]]`.
    pub permutation: Vec<usize>,
    pub sorted_weights: Vec<f64>,
}

impl OptimizationResult {
    fn assemble(poly: &Polynomial, x: Vec<f64>, method: Method, iterations: usize, converged: bool, cfg: &SolverConfig) -> Self {
        let x = WeightVector::renormalize(x).expect("ascent keeps positive mass");
        let value = poly.eval(x.as_slice());
        let support = x.support(cfg.support_epsilon);
        let kkt_residual = kkt_from_gradient(x.as_slice(), &poly.gradient(x.as_slice()), cfg.support_epsilon);
        let mut permutation: Vec<usize> = (1..=x.len()).collect();
        permutation.sort_by(|&a, &b| x.weight(b).total_cmp(&x.weight(a)).then(a.cmp(&b)));
        let sorted_weights = permutation.iter().map(|&v| x.weight(v)).collect();
        OptimizationResult { value, x, support, kkt_residual, method, iterations, converged, permutation, sorted_weights }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
    method: Method,
    support: Vec<usize>,
}

/// Maximises `L_α(H, ·)` over the simplex.
pub fn maximize(h: &Hypergraph, alpha: &Coefficients, cfg: &SolverConfig) -> Result<OptimizationResult> {
    let weights = alpha.level_weights(h)?;
    maximize_weighted(h, &weights, cfg)
}

/// Maximises `λ′(H, ·)` directly with level weights `r!`.
pub fn maximize_lambda_prime(h: &Hypergraph, cfg: &SolverConfig) -> Result<OptimizationResult> {
    maximize_weighted(h, &LevelWeights::lambda_prime(h), cfg)
}

/// Maximises `Σ_r w_r Σ_{e∈H^r} Π x` for explicit level weights.
pub fn maximize_weighted(h: &Hypergraph, weights: &LevelWeights, cfg: &SolverConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let poly = Polynomial::new(h, weights);
    let n = h.n();
    if h.is_empty() {
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        return Ok(OptimizationResult::assemble(&poly, e1, Method::Warmstart, 0, true, cfg));
    }

    let starts = starting_points(h, cfg);
    let cover = poly.pair_cover();
    let candidates: Vec<Candidate> = par::map_slice(&starts, cfg.parallel, |(x0, method)| {
        let run = ascent::ascend(&poly, x0, cfg);
        refine(&poly, &cover, run, *method, cfg)
    });

    let best = candidates.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
    let chosen = candidates
        .iter()
        .filter(|c| c.value >= best - cfg.tie_tol)
        .min_by(|a, b| a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support)))
        .expect("at least one start");
    Ok(OptimizationResult::assemble(&poly, chosen.x.clone(), chosen.method, chosen.iterations, chosen.converged, cfg))
}

fn starting_points(h: &Hypergraph, cfg: &SolverConfig) -> Vec<(Vec<f64>, Method)> {
    let n = h.n();
    let uniform = |set: &[usize]| {
        let mut x = vec![0.0; n];
        set.iter().for_each(|&v| x[v - 1] = 1.0 / set.len() as f64);
        x
    };
    let mut starts = Vec::new();
    if let Some(types) = h.edge_types().as_edge_types() {
        let best = max_complete_subgraph(h, &types);
        if !best.vertices.is_empty() {
            starts.push((uniform(&best.vertices), Method::Warmstart));
        }
        for set in maximal_complete_subgraphs(h, &types, cfg.max_warm_starts, WARM_START_BUDGET) {
            if set != best.vertices {
                starts.push((uniform(&set), Method::Warmstart));
            }
        }
    }
    for k in 1..=n {
        starts.push((uniform(&(1..=k).collect::<Vec<_>>()), Method::Warmstart));
    }
    for s in 0..cfg.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s as u64);
        let draw: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
        let total: f64 = draw.iter().sum();
        starts.push((draw.into_iter().map(|v| v / total).collect(), Method::Multistart));
    }
    starts
}

/// Truncates negligible weights and merges support pairs that no edge
/// covers.
///
/// For an uncovered pair `{i, j}` the objective is affine along
/// `e_i − e_j`, so moving all of one weight onto the other (in the
/// direction of the larger partial) never lowers the value and shrinks the
/// support.
fn refine(poly: &Polynomial, cover: &[Vec<bool>], run: ascent::Run, method: Method, cfg: &SolverConfig) -> Candidate {
    let mut method = method;
    let mut run = truncate(poly, run, cfg);
    for _ in 0..poly.n() {
        let support: Vec<usize> = (0..poly.n()).filter(|&k| run.x[k] > cfg.support_epsilon).collect();
        let uncovered = support
            .iter()
            .enumerate()
            .flat_map(|(a, &i)| support[a + 1..].iter().map(move |&j| (i, j)))
            .find(|&(i, j)| !cover[i][j]);
        let Some((i, j)) = uncovered else { break };
        let g = poly.gradient(&run.x);
        let mut x = run.x.clone();
        let (keep, drop) = if g[i] >= g[j] { (i, j) } else { (j, i) };
        x[keep] += x[drop];
        x[drop] = 0.0;
        let next = truncate(poly, ascent::ascend(poly, &x, cfg), cfg);
        if next.value < run.value - cfg.tie_tol {
            break;
        }
        run = ascent::Run { iterations: run.iterations + next.iterations, ..next };
        method = Method::Combined;
    }
    if !run.converged {
        run = polish_face(poly, run, cfg);
    }
    let support = (1..=poly.n()).filter(|&v| run.x[v - 1] > cfg.support_epsilon).collect();
    Candidate { x: run.x, value: run.value, iterations: run.iterations, converged: run.converged, method, support }
}

/// Re-ascends with the zero weights pinned. Near a degenerate optimum, where
/// a zero-weight vertex has the same partial as the support, free ascent
/// creeps along that direction; on the face it converges, and the point is
/// accepted as converged only if it is stationary on the whole simplex.
fn polish_face(poly: &Polynomial, run: ascent::Run, cfg: &SolverConfig) -> ascent::Run {
    let face: Vec<bool> = run.x.iter().map(|&v| v > cfg.support_epsilon).collect();
    let again = ascent::ascend_on_face(poly, &run.x, cfg, &face);
    if again.value < run.value - cfg.tol_value {
        return run;
    }
    let g = poly.gradient(&again.x);
    let converged = ascent::stationarity(&again.x, &g) <= cfg.tol_grad;
    ascent::Run { iterations: run.iterations + again.iterations, converged, ..again }
}

fn truncate(poly: &Polynomial, mut run: ascent::Run, cfg: &SolverConfig) -> ascent::Run {
    let needs_polish = run.x.iter().any(|&v| v > cfg.support_epsilon && v < cfg.repolish_below);
    if needs_polish {
        let cut: Vec<f64> = run.x.iter().map(|&v| if v < cfg.repolish_below { 0.0 } else { v }).collect();
        let again = ascent::ascend(poly, &cut, cfg);
        if again.value >= run.value - cfg.tol_value {
            run = ascent::Run { iterations: run.iterations + again.iterations, ..again };
        }
    }
    for v in &mut run.x {
        if *v <= cfg.support_epsilon {
            *v = 0.0;
        }
    }
    let sum: f64 = run.x.iter().sum();
    run.x.iter_mut().for_each(|v| *v /= sum);
    run.value = poly.eval(&run.x);
    run
}

fn kkt_from_gradient(x: &[f64], g: &[f64], eps: f64) -> f64 {
    let (mut s_max, mut s_min, mut z_max) = (f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (&xi, &gi) in x.iter().zip(g) {
        if xi > eps {
            s_max = s_max.max(gi);
            s_min = s_min.min(gi);
        } else {
            z_max = z_max.max(gi);
        }
    }
    let spread = s_max - s_min;
    let violation = if z_max.is_finite() { (z_max - s_max).max(0.0) } else { 0.0 };
    spread + violation
}

/// First-order optimality residual at `x`: the spread of partials over the
/// support plus the largest excess of a zero-weight partial over the
/// support's maximum. Zero at any KKT point of the simplex program.
pub fn kkt_residual(h: &Hypergraph, alpha: &Coefficients, x: &WeightVector) -> Result<f64> {
    let g = crate::objective::gradient(h, alpha, x)?;
    Ok(kkt_from_gradient(x.as_slice(), &g, SolverConfig::default().support_epsilon))
}

/// Whether every pair of support vertices lies together in some edge.
pub fn support_pair_cover(h: &Hypergraph, result: &OptimizationResult) -> bool {
    let s = &result.support;
    s.iter().enumerate().all(|(a, &i)| {
        s[a + 1..].iter().all(|&j| h.all_edges().any(|e| e.contains(&i) && e.contains(&j)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::EdgeTypeSet;

    fn complete(n: usize, t: &[usize]) -> Hypergraph {
        Hypergraph::complete(n, &EdgeTypeSet::new(t.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn motzkin_straus_k5() {
        let res = maximize(&complete(5, &[2]), &Coefficients::base_only(2), &SolverConfig::default()).unwrap();
        assert!((res.value - 0.4).abs() < 1e-6);
        assert_eq!(res.support.len(), 5);
        assert!(res.kkt_residual < 1e-9);
    }

    #[test]
    fn lambda_prime_k3_one_two() {
        let h = complete(3, &[1, 2]);
        let alpha = Coefficients::lambda_prime(&[1, 2]).unwrap();
        assert_eq!(alpha.get(2), Some(2.0));
        let res = maximize(&h, &alpha, &SolverConfig::default()).unwrap();
        assert!((res.value - 5.0 / 3.0).abs() < 1e-6);
        let direct = maximize_lambda_prime(&h, &SolverConfig::default()).unwrap();
        assert!((direct.value - 5.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn kkt_examples() {
        let k4 = complete(4, &[2]);
        let x = WeightVector::uniform_on(4, &[1, 2, 3, 4]).unwrap();
        assert!(kkt_residual(&k4, &Coefficients::base_only(2), &x).unwrap() < 1e-12);
        let edge = Hypergraph::new(2, vec![vec![1, 2]]).unwrap();
        let e1 = WeightVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(kkt_residual(&edge, &Coefficients::base_only(2), &e1).unwrap(), 1.0);
    }

    #[test]
    fn pair_cover_flags_split_support() {
        let h = Hypergraph::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let poly = Polynomial::new(&h, &LevelWeights::unit(&h));
        let cfg = SolverConfig::default();
        let forced = OptimizationResult::assemble(&poly, vec![0.25; 4], Method::Multistart, 0, true, &cfg);
        assert!(!support_pair_cover(&h, &forced));
        let res = maximize(&h, &Coefficients::base_only(2), &cfg).unwrap();
        assert!(support_pair_cover(&h, &res));
        assert_eq!(res.support, vec![1, 2]);
        assert!((res.value - 0.25).abs() < 1e-12);

        let single = OptimizationResult::assemble(&poly, vec![1.0, 0.0, 0.0, 0.0], Method::Warmstart, 0, true, &cfg);
        assert!(support_pair_cover(&h, &single));
    }

    #[test]
    fn empty_hypergraph() {
        let res = maximize(&Hypergraph::empty(3), &Coefficients::base_only(2), &SolverConfig::default()).unwrap();
        assert_eq!(res.value, 0.0);
        assert_eq!(res.support, vec![1]);
    }

    #[test]
    fn minimal_support_on_a_path() {
        // Optima of the path 1-2-3 form a segment; the reported one should
        // use two vertices, the lexicographically first pair.
        let path = Hypergraph::new(3, vec![vec![1, 2], vec![2, 3]]).unwrap();
        let res = maximize(&path, &Coefficients::base_only(2), &SolverConfig::default()).unwrap();
        assert!((res.value - 0.25).abs() < 1e-12);
        assert_eq!(res.support, vec![1, 2]);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let h = Hypergraph::new(5, vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 4, 5], vec![2, 5]]).unwrap();
        let alpha = Coefficients::unit(2, 3);
        let cfg = SolverConfig { seed: 11, ..SolverConfig::default() };
        let a = maximize(&h, &alpha, &cfg).unwrap();
        let b = maximize(&h, &alpha, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sorted_view_is_non_increasing() {
        let h = Hypergraph::new(4, vec![vec![2, 4], vec![1, 2], vec![2, 3, 4]]).unwrap();
        let res = maximize(&h, &Coefficients::unit(2, 3), &SolverConfig::default()).unwrap();
        assert!(res.sorted_weights.windows(2).all(|w| w[0] >= w[1]));
        for (k, &v) in res.permutation.iter().enumerate() {
            assert_eq!(res.sorted_weights[k], res.x.weight(v));
        }
    }
}
