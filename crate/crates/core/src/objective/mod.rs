//! Objective families over the standard simplex.
//!
//! * `λ(H, x)`: sum of edge monomials of a uniform hypergraph.
//! * `λ′(H, x) = Σ_r r! Σ_{e ∈ H^r} Π_{v∈e} x_v`.
//! * `L_α(H, x) = Σ_r α_r Σ_{e ∈ H^r} Π_{v∈e} x_v` with `α_{r0} = 1` for the
//!   base type `r0`.
//!
//! All three are multilinear, so partial derivatives are the weighted link
//! sums `L(E_i, x)` and the mixed partials are `L(E_{ij}, x)`.

mod exact;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub use exact::{
    eval_exact, lambda_prime_exact, parse_rational, rational_from_f64, rational_to_f64,
    RationalCoefficients, RationalWeightVector,
};

/// Tolerance on `Σ x_i = 1` for a feasible weighting.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Levels with more edges than this are reduced with pairwise summation.
const PAIRWISE_THRESHOLD: usize = 10_000;

/// A point of the standard simplex, indexed by vertex `1..=n` via
/// [`WeightVector::weight`] or positionally via [`WeightVector::as_slice`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidWeights("empty vector".into()));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidWeights(format!("entry {v} is negative or not finite")));
        }
        let sum: f64 = x.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidWeights(format!("entries sum to {sum}, not 1")));
        }
        Ok(WeightVector(x))
    }

    /// Uniform weight on `support` (1-based labels), zero elsewhere.
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidWeights("uniform weighting needs a nonempty support".into()));
        }
        let mut x = vec![0.0; n];
        let w = 1.0 / support.len() as f64;
        for &v in support {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            x[v - 1] = w;
        }
        WeightVector::new(x)
    }

    /// Builds from an almost-feasible vector by clamping negatives and
    /// rescaling. Used after floating-point updates.
    pub fn renormalize(mut x: Vec<f64>) -> Result<Self> {
        for v in &mut x {
            if !v.is_finite() || *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = x.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidWeights("no positive mass to normalise".into()));
        }
        x.iter_mut().for_each(|v| *v /= sum);
        WeightVector::new(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Weight of vertex `v` (1-based).
    pub fn weight(&self, v: usize) -> f64 {
        self.0[v - 1]
    }

    /// Vertices with weight above `eps`, ascending.
    pub fn support(&self, eps: f64) -> Vec<usize> {
        (1..=self.0.len()).filter(|&v| self.0[v - 1] > eps).collect()
    }
}

/// Coefficients of the weighted program: base type `r0` with `α_{r0} = 1`
/// and a positive `α_r` for each higher level.
///
/// Coefficients are checked against a hypergraph only when used, so one
/// value can serve a whole family of instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub r0: usize,
    #[serde(default)]
    pub alpha: BTreeMap<usize, f64>,
}

impl Coefficients {
    pub fn new(r0: usize, alpha: BTreeMap<usize, f64>) -> Result<Self> {
        if r0 == 0 {
            return Err(Error::InvalidEdgeTypes);
        }
        for (&r, &a) in &alpha {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::NonPositiveCoefficient(r));
            }
            if r <= r0 {
                return Err(Error::InvalidParams(format!(
                    "coefficient given for level {r}, which is not above the base type {r0}"
                )));
            }
        }
        Ok(Coefficients { r0, alpha })
    }

    /// Only the base level, with coefficient 1.
    pub fn base_only(r0: usize) -> Self {
        Coefficients { r0, alpha: BTreeMap::new() }
    }

    /// Coefficient 1 on every level from `r0` up to `max_r`.
    pub fn unit(r0: usize, max_r: usize) -> Self {
        Coefficients { r0, alpha: (r0 + 1..=max_r).map(|r| (r, 1.0)).collect() }
    }

    /// The scaling that turns `L_α` into `λ′ / r0!`: `α_r = r!/r0!`.
    pub fn lambda_prime(types: &[usize]) -> Result<Self> {
        let r0 = *types.iter().min().ok_or(Error::InvalidEdgeTypes)?;
        let alpha = types
            .iter()
            .filter(|&&r| r > r0)
            .map(|&r| (r, factorial(r) / factorial(r0)))
            .collect();
        Coefficients::new(r0, alpha)
    }

    /// Coefficient of level `r`, if defined.
    pub fn get(&self, r: usize) -> Option<f64> {
        if r == self.r0 {
            Some(1.0)
        } else {
            self.alpha.get(&r).copied()
        }
    }

    /// Resolves a weight for every nonempty level of `h`.
    pub fn level_weights(&self, h: &Hypergraph) -> Result<LevelWeights> {
        let mut weights = BTreeMap::new();
        for r in h.edge_types().iter() {
            if r < self.r0 {
                return Err(Error::LevelBelowBase { level: r, base: self.r0 });
            }
            let a = self.get(r).ok_or(Error::MissingCoefficient(r))?;
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::NonPositiveCoefficient(r));
            }
            weights.insert(r, a);
        }
        Ok(LevelWeights(weights))
    }
}

/// Fully explicit per-level weights `w_r`; the objective is
/// `Σ_r w_r Σ_{e∈H^r} Π x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelWeights(pub BTreeMap<usize, f64>);

impl LevelWeights {
    /// `w_r = r!` for every level of `h`.
    pub fn lambda_prime(h: &Hypergraph) -> Self {
        LevelWeights(h.edge_types().iter().map(|r| (r, factorial(r))).collect())
    }

    /// `w_r = 1` for every level of `h`.
    pub fn unit(h: &Hypergraph) -> Self {
        LevelWeights(h.edge_types().iter().map(|r| (r, 1.0)).collect())
    }

    pub fn get(&self, r: usize) -> f64 {
        self.0.get(&r).copied().unwrap_or(0.0)
    }
}

/// `r!` as a float (exact for the cardinalities in use).
pub fn factorial(r: usize) -> f64 {
    (1..=r).map(|k| k as f64).product()
}

#[derive(Debug, Clone)]
struct LevelTerms {
    r: usize,
    weight: f64,
    /// Flattened 0-based vertex indices, `r` per edge.
    vertices: Vec<usize>,
}

impl LevelTerms {
    fn edges(&self) -> std::slice::ChunksExact<'_, usize> {
        self.vertices.chunks_exact(self.r)
    }

    fn len(&self) -> usize {
        self.vertices.len() / self.r
    }
}

/// A hypergraph objective compiled into flat per-level edge arrays.
///
/// This is the hot path for the optimizer; [`eval_l`] and [`gradient`] go
/// through it as well.
#[derive(Debug, Clone)]
pub struct Polynomial {
    n: usize,
    levels: Vec<LevelTerms>,
}

impl Polynomial {
    pub fn new(h: &Hypergraph, weights: &LevelWeights) -> Self {
        let levels = h
            .levels()
            .iter()
            .map(|(&r, edges)| LevelTerms {
                r,
                weight: weights.get(r),
                vertices: edges.iter().flatten().map(|v| v - 1).collect(),
            })
            .collect();
        Polynomial { n: h.n(), levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value at any point of `R^n` (not only the simplex).
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.levels.iter().map(|lvl| lvl.weight * level_sum(lvl, x)).sum()
    }

    /// Value of each level's raw monomial sum (without weights).
    pub fn level_values(&self, x: &[f64]) -> Vec<(usize, f64)> {
        self.levels.iter().map(|lvl| (lvl.r, level_sum(lvl, x))).collect()
    }

    /// `∂/∂x_i` for every `i`, written into `out`.
    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        for lvl in &self.levels {
            for e in lvl.edges() {
                for (k, &v) in e.iter().enumerate() {
                    let mut p = lvl.weight;
                    for (m, &u) in e.iter().enumerate() {
                        if m != k {
                            p *= x[u];
                        }
                    }
                    out[v] += p;
                }
            }
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n];
        self.gradient_into(x, &mut g);
        g
    }

    /// Whether some edge contains both 0-based indices `a` and `b`.
    pub(crate) fn pair_cover(&self) -> Vec<Vec<bool>> {
        let mut cover = vec![vec![false; self.n]; self.n];
        for lvl in &self.levels {
            for e in lvl.edges() {
                for (k, &a) in e.iter().enumerate() {
                    for &b in &e[k + 1..] {
                        cover[a][b] = true;
                        cover[b][a] = true;
                    }
                }
            }
        }
        cover
    }
}

fn level_sum(lvl: &LevelTerms, x: &[f64]) -> f64 {
    let monomial = |e: &[usize]| e.iter().map(|&v| x[v]).product::<f64>();
    if lvl.len() > PAIRWISE_THRESHOLD {
        let terms: Vec<f64> = lvl.edges().map(monomial).collect();
        pairwise_sum(&terms)
    } else {
        lvl.edges().map(monomial).sum()
    }
}

/// Recursive pairwise summation; rounding error grows with `log n`.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn check_len(h: &Hypergraph, x: &WeightVector) -> Result<()> {
    if x.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), got: x.len() });
    }
    Ok(())
}

/// `L_α(H, x)`.
pub fn eval_l(h: &Hypergraph, alpha: &Coefficients, x: &WeightVector) -> Result<f64> {
    check_len(h, x)?;
    let weights = alpha.level_weights(h)?;
    Ok(Polynomial::new(h, &weights).eval(x.as_slice()))
}

/// `λ′(H, x)`, computed straight from the edge sets.
pub fn eval_lambda_prime(h: &Hypergraph, x: &WeightVector) -> Result<f64> {
    check_len(h, x)?;
    let x = x.as_slice();
    Ok(h.levels()
        .iter()
        .map(|(&r, edges)| {
            let s: f64 = edges.iter().map(|e| e.iter().map(|&v| x[v - 1]).product::<f64>()).sum();
            factorial(r) * s
        })
        .sum())
}

/// `∇L_α(H, x)`; component `i` is `L(E_i, x)`.
pub fn gradient(h: &Hypergraph, alpha: &Coefficients, x: &WeightVector) -> Result<Vec<f64>> {
    check_len(h, x)?;
    let weights = alpha.level_weights(h)?;
    Ok(Polynomial::new(h, &weights).gradient(x.as_slice()))
}

/// The link quantities of a vertex pair `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairQuantities {
    /// `L(E_{ij}, x)`, the mixed partial `∂²L/∂x_i∂x_j`.
    pub joint: f64,
    /// `L(E_{i∖j}, x)`: links of `i` whose swap to `j` is not an edge.
    pub i_not_j: f64,
    /// `L(E_{j∖i}, x)`.
    pub j_not_i: f64,
    /// Links of `i` (avoiding `j`) whose swap to `j` is also an edge. This
    /// part is common to both partials.
    pub shared: f64,
}

/// Computes `L(E_{ij})`, `L(E_{i∖j})`, `L(E_{j∖i})` at `x`.
///
/// Together they satisfy
/// `∂_i L − ∂_j L = (x_j − x_i)·L(E_{ij}) + L(E_{i∖j}) − L(E_{j∖i})`.
pub fn pair_quantities(
    h: &Hypergraph,
    alpha: &Coefficients,
    x: &WeightVector,
    i: usize,
    j: usize,
) -> Result<PairQuantities> {
    check_len(h, x)?;
    if i == j {
        return Err(Error::SameVertex(i));
    }
    for v in [i, j] {
        if v == 0 || v > h.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
        }
    }
    let weights = alpha.level_weights(h)?;
    let xs = x.as_slice();
    let prod_except = |e: &[usize], skip: &[usize]| -> f64 {
        e.iter().filter(|v| !skip.contains(v)).map(|&v| xs[v - 1]).product()
    };
    let mut q = PairQuantities { joint: 0.0, i_not_j: 0.0, j_not_i: 0.0, shared: 0.0 };
    for (&r, edges) in h.levels() {
        let w = weights.get(r);
        for e in edges {
            let has_i = e.contains(&i);
            let has_j = e.contains(&j);
            match (has_i, has_j) {
                (true, true) => q.joint += w * prod_except(e, &[i, j]),
                (true, false) | (false, true) => {
                    let (from, to) = if has_i { (i, j) } else { (j, i) };
                    let mut swapped: Vec<usize> = e.iter().map(|&v| if v == from { to } else { v }).collect();
                    swapped.sort_unstable();
                    let p = w * prod_except(e, &[from]);
                    if edges.contains(&swapped) {
                        if has_i {
                            q.shared += p;
                        }
                    } else if has_i {
                        q.i_not_j += p;
                    } else {
                        q.j_not_i += p;
                    }
                }
                (false, false) => {}
            }
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::EdgeTypeSet;

    fn complete(n: usize, t: &[usize]) -> Hypergraph {
        Hypergraph::complete(n, &EdgeTypeSet::new(t.iter().copied()).unwrap()).unwrap()
    }

    fn uniform(n: usize) -> WeightVector {
        WeightVector::uniform_on(n, &(1..=n).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let v = eval_l(&complete(3, &[2]), &Coefficients::base_only(2), &uniform(3)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);

        let alpha = Coefficients::unit(1, 3);
        let v = eval_l(&complete(3, &[1, 2, 3]), &alpha, &uniform(3)).unwrap();
        assert!((v - 37.0 / 27.0).abs() < 1e-15);

        let single = Hypergraph::new(3, vec![vec![1]]).unwrap();
        let e1 = WeightVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(eval_l(&single, &Coefficients::base_only(1), &e1).unwrap(), 1.0);
    }

    #[test]
    fn missing_and_misplaced_coefficients() {
        let h = complete(3, &[2, 3]);
        let x = uniform(3);
        assert!(matches!(eval_l(&h, &Coefficients::base_only(2), &x), Err(Error::MissingCoefficient(3))));
        assert!(matches!(
            eval_l(&h, &Coefficients::base_only(3), &x),
            Err(Error::LevelBelowBase { level: 2, base: 3 })
        ));
        assert!(Coefficients::new(2, BTreeMap::from([(3, -1.0)])).is_err());
        assert!(Coefficients::new(2, BTreeMap::from([(2, 1.0)])).is_err());
    }

    #[test]
    fn lambda_prime_examples() {
        let v = eval_lambda_prime(&complete(3, &[1, 2]), &uniform(3)).unwrap();
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
        let v = eval_lambda_prime(&complete(4, &[2, 3]), &uniform(4)).unwrap();
        assert!((v - 9.0 / 8.0).abs() < 1e-15);
        assert_eq!(eval_lambda_prime(&Hypergraph::empty(3), &uniform(3)).unwrap(), 0.0);
    }

    #[test]
    fn gradient_examples() {
        let g = gradient(&complete(3, &[2]), &Coefficients::base_only(2), &uniform(3)).unwrap();
        for gi in g {
            assert!((gi - 2.0 / 3.0).abs() < 1e-15);
        }
        let single = Hypergraph::new(3, vec![vec![1]]).unwrap();
        let x = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(gradient(&single, &Coefficients::base_only(1), &x).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn pair_quantities_on_triangle() {
        let q = pair_quantities(&complete(3, &[2]), &Coefficients::base_only(2), &uniform(3), 1, 2).unwrap();
        assert_eq!(q.joint, 1.0);
        // 13 swaps to 23, which is an edge, so it is shared rather than private.
        assert_eq!(q.i_not_j, 0.0);
        assert_eq!(q.j_not_i, 0.0);
        assert!((q.shared - 1.0 / 3.0).abs() < 1e-15);

        let path = Hypergraph::new(3, vec![vec![1, 3]]).unwrap();
        let q = pair_quantities(&path, &Coefficients::base_only(2), &uniform(3), 1, 2).unwrap();
        assert_eq!(q.joint, 0.0);
        assert!((q.i_not_j - 1.0 / 3.0).abs() < 1e-15);
        assert!(pair_quantities(&path, &Coefficients::base_only(2), &uniform(3), 2, 2).is_err());
    }

    #[test]
    fn singleton_links() {
        let h = Hypergraph::new(2, vec![vec![1]]).unwrap();
        let x = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let q = pair_quantities(&h, &Coefficients::base_only(1), &x, 1, 2).unwrap();
        assert_eq!(q.joint, 0.0);
        assert_eq!(q.i_not_j, 1.0);
    }

    #[test]
    fn weight_vector_rules() {
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![-0.1, 1.1]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        let x = WeightVector::uniform_on(4, &[2, 4]).unwrap();
        assert_eq!(x.support(1e-10), vec![2, 4]);
        assert_eq!(x.weight(2), 0.5);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<f64> = (0..20_000).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-10);
    }
}
