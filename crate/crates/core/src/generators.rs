//! Seeded instance families.
//!
//! Every planted family has a target theorem. A draw is accepted only when
//! the target's hypothesis check passes on it; otherwise the next stream of
//! the seeded generator is tried, up to [`MAX_RETRIES`] times.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compression::left_compress_fixpoint;
use crate::error::{Error, Result};
use crate::hypergraph::{binomial, Edge, EdgeTypeSet, Hypergraph, Limits};
use crate::theorems::{check_hypotheses, TheoremId, TheoremParams};

pub const MAX_RETRIES: u64 = 1000;
const DEFAULT_DENSITY: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Graph with a planted clique of order `t` and no larger clique.
    Ms,
    /// `{1,2}`-graph whose largest complete `{1,2}`-subgraph has order `t`.
    T3,
    /// `{1,r}`-graph with exactly `t` singletons, all on a complete set.
    T4,
    /// `{1,2,3}`-graph with exactly `t` singletons on a complete set.
    T5,
    /// `{2,r}`-graph whose pairs are exactly those of `[t]`.
    T6a,
    /// As `t6a` with singletons on `[t]` and possibly elsewhere.
    T6b,
    /// `{2,r}`-graph with `m` pairs: all of `[t]` plus pairs from `t+1`
    /// into at most `t−2` clique vertices.
    T7a,
    /// As `t7a` with singletons.
    T7b,
    /// `{2, r_3, …}` (or `{1, 2, r_3, …}`) graph with pairs exactly on `[t]`.
    T9,
    /// `r`-graph on `t+1` vertices with `m` edges containing `[t]^(r)`.
    Ptz,
    /// 3-graph with `m` edges and no complete 3-graph on `t` vertices.
    TpzzFree,
    /// Random `T`-graph pushed to its left-compressed fixpoint.
    RandomLc,
}

impl Family {
    pub const ALL: &'static [Family] = &[
        Family::Ms,
        Family::T3,
        Family::T4,
        Family::T5,
        Family::T6a,
        Family::T6b,
        Family::T7a,
        Family::T7b,
        Family::T9,
        Family::Ptz,
        Family::TpzzFree,
        Family::RandomLc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ms => "ms",
            Family::T3 => "t3",
            Family::T4 => "t4",
            Family::T5 => "t5",
            Family::T6a => "t6a",
            Family::T6b => "t6b",
            Family::T7a => "t7a",
            Family::T7b => "t7b",
            Family::T9 => "t9",
            Family::Ptz => "ptz",
            Family::TpzzFree => "tpzz-free",
            Family::RandomLc => "random-lc",
        }
    }

    /// The theorem whose hypotheses a draw must satisfy.
    pub fn target(self, p: &GenParams) -> Option<TheoremId> {
        Some(match self {
            Family::Ms => TheoremId::MsT1,
            Family::T3 => TheoremId::NonunifT3,
            Family::T4 => TheoremId::OneRT4,
            Family::T5 => TheoremId::OneTwoThreeT5,
            Family::T6a => TheoremId::TwoRT6a,
            Family::T6b => TheoremId::OneTwoRT6b,
            Family::T7a => TheoremId::TwoREdgesT7a,
            Family::T7b => TheoremId::OneTwoREdgesT7b,
            Family::T9 if p.types().contains(&1) => TheoremId::GeneralT9b,
            Family::T9 => TheoremId::GeneralT9a,
            Family::Ptz if p.pairs => TheoremId::MixedT10a,
            Family::Ptz if p.singletons && p.r() == 3 => TheoremId::MixedT10b,
            Family::Ptz => TheoremId::Ptz,
            Family::TpzzFree if p.singletons => TheoremId::MixedT10c,
            Family::TpzzFree => TheoremId::Tpzz,
            Family::RandomLc => return None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RLevelMode {
    /// `[t]^(r)` plus random `r`-sets of `[n]`.
    #[default]
    Random,
    /// Every `r`-subset of `[n]`.
    Complete,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenParams {
    pub t: Option<usize>,
    pub r: Option<usize>,
    pub n: Option<usize>,
    /// Edge count of the constrained level.
    pub m: Option<usize>,
    /// Inclusion probability of optional edges.
    pub density: Option<f64>,
    /// Edge types for `t9` and `random-lc`.
    pub types: Option<Vec<usize>>,
    pub r_level: RLevelMode,
    /// Add singleton edges (on every vertex for `ptz` and `tpzz-free`).
    pub singletons: bool,
    /// Add all pairs of `[t]` (`ptz`).
    pub pairs: bool,
    pub alpha_2: Option<f64>,
    pub alpha_r: Option<f64>,
}

impl GenParams {
    fn r(&self) -> usize {
        self.r.unwrap_or(3)
    }

    fn types(&self) -> Vec<usize> {
        self.types.clone().unwrap_or_else(|| vec![2, self.r()])
    }

    fn t(&self) -> Result<usize> {
        self.t.ok_or_else(|| Error::InvalidParams("family needs t".into()))
    }

    fn density(&self) -> Result<f64> {
        let d = self.density.unwrap_or(DEFAULT_DENSITY);
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::InvalidParams(format!("density {d} outside [0, 1]")));
        }
        Ok(d)
    }

    /// Parameters for the target theorem's check.
    pub fn theorem_params(&self, family: Family) -> TheoremParams {
        let mut p = TheoremParams {
            t: self.t,
            r: self.r,
            alpha_2: self.alpha_2,
            alpha_r: self.alpha_r,
            ..TheoremParams::default()
        };
        match family {
            Family::T9 => {
                p.r = None;
                p.alpha = self.types().into_iter().filter(|&s| s > 2).map(|s| (s, self.alpha_r.unwrap_or(1.0))).collect();
                p.alpha_r = None;
            }
            Family::T3 | Family::Ms => p.r = None,
            Family::Ptz if self.pairs => {
                let mut types = vec![2, self.r()];
                if self.singletons {
                    types.insert(0, 1);
                }
                p.types = Some(types);
            }
            _ => {}
        }
        p
    }
}

fn all_subsets(vertices: &[usize], r: usize) -> impl Iterator<Item = Edge> + '_ {
    vertices.iter().copied().combinations(r)
}

fn range(a: usize, b: usize) -> Vec<usize> {
    (a..=b).collect()
}

struct Builder<'a> {
    rng: &'a mut ChaCha8Rng,
    edges: BTreeSet<Edge>,
}

impl Builder<'_> {
    fn complete_on(&mut self, vertices: &[usize], r: usize) {
        self.edges.extend(all_subsets(vertices, r));
    }

    /// Adds each `r`-subset of `vertices` independently with probability `p`.
    fn random_on(&mut self, vertices: &[usize], r: usize, p: f64) {
        for e in all_subsets(vertices, r) {
            if self.rng.random_bool(p) {
                self.edges.insert(e);
            }
        }
    }

    /// Adds `k` distinct members of `pool` chosen uniformly.
    fn choose(&mut self, pool: &[Edge], k: usize) {
        for i in sample(self.rng, pool.len(), k) {
            self.edges.insert(pool[i].clone());
        }
    }
}

fn planted_clique(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Vec<usize> {
    let mut s: Vec<usize> = sample(rng, n, t).into_iter().map(|i| i + 1).collect();
    s.sort_unstable();
    s
}

fn default_n(p: &GenParams, t: usize, extra: usize) -> usize {
    p.n.unwrap_or(t + extra)
}

/// One unchecked draw.
fn draw(family: Family, p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Hypergraph> {
    let mut b = Builder { rng, edges: BTreeSet::new() };
    let n;
    match family {
        Family::Ms | Family::T3 => {
            let t = p.t()?;
            n = default_n(p, t, 4);
            check_order(t, n)?;
            let clique = planted_clique(b.rng, n, t);
            b.complete_on(&clique, 2);
            b.random_on(&range(1, n), 2, p.density()?);
            if family == Family::T3 {
                b.complete_on(&clique, 1);
                b.random_on(&range(1, n), 1, 0.5);
            }
        }
        Family::T4 | Family::T5 => {
            let t = p.t()?;
            let r = if family == Family::T5 { 3 } else { p.r() };
            n = default_n(p, t, 2);
            check_order(t, n)?;
            let clique = planted_clique(b.rng, n, t);
            b.complete_on(&clique, 1);
            b.complete_on(&clique, r);
            b.random_on(&range(1, n), r, p.density()?);
            if family == Family::T5 {
                b.complete_on(&clique, 2);
                b.random_on(&range(1, n), 2, p.density()?);
            }
        }
        Family::T6a | Family::T6b | Family::T9 => {
            let t = p.t()?;
            n = default_n(p, t, 2);
            check_order(t, n)?;
            let types = match family {
                Family::T9 => p.types(),
                Family::T6a => vec![2, p.r()],
                _ => vec![1, 2, p.r()],
            };
            b.complete_on(&range(1, t), 2);
            for &r in types.iter().filter(|&&r| r >= 3) {
                match p.r_level {
                    RLevelMode::Complete => b.complete_on(&range(1, n), r),
                    RLevelMode::Random => {
                        b.complete_on(&range(1, t), r);
                        b.random_on(&range(1, n), r, p.density()?);
                    }
                }
            }
            if types.contains(&1) {
                b.complete_on(&range(1, t), 1);
                b.random_on(&range(t + 1, n), 1, 0.5);
            }
        }
        Family::T7a | Family::T7b => {
            let t = p.t()?;
            let base = binomial(t as u64, 2) as usize;
            let m = p.m.unwrap_or(base);
            if m < base || m > base + t.saturating_sub(2) {
                return Err(Error::Infeasible(format!("m = {m} outside {base}..={}", base + t.saturating_sub(2))));
            }
            let extra = m - base;
            n = default_n(p, t, 1);
            check_order(t + usize::from(extra > 0), n)?;
            b.complete_on(&range(1, t), 2);
            for i in sample(b.rng, t, extra) {
                b.edges.insert(vec![i + 1, t + 1]);
            }
            let r = p.r();
            b.complete_on(&range(1, t), r);
            b.random_on(&range(1, n), r, p.density()?);
            if family == Family::T7b {
                b.complete_on(&range(1, t), 1);
                b.random_on(&range(t + 1, n), 1, 0.5);
            }
        }
        Family::Ptz => {
            let t = p.t()?;
            let r = p.r();
            n = t + 1;
            check_order(r, t)?;
            let base = binomial(t as u64, r as u64) as usize;
            let m = p.m.unwrap_or(base);
            let pool: Vec<Edge> = all_subsets(&range(1, t), r - 1)
                .map(|mut e| {
                    e.push(t + 1);
                    e
                })
                .collect();
            if m < base || m > base + pool.len() {
                return Err(Error::Infeasible(format!("m = {m} outside {base}..={}", base + pool.len())));
            }
            b.complete_on(&range(1, t), r);
            b.choose(&pool, m - base);
            if p.pairs {
                b.complete_on(&range(1, t), 2);
            }
            if p.singletons {
                b.complete_on(&range(1, n), 1);
            }
        }
        Family::TpzzFree => {
            let t = p.t()?;
            n = default_n(p, t, 1);
            check_order(3, n)?;
            let pool: Vec<Edge> = all_subsets(&range(1, n), 3).collect();
            let m = p.m.ok_or_else(|| Error::InvalidParams("tpzz-free needs m".into()))?;
            if m > pool.len() {
                return Err(Error::Infeasible(format!("m = {m} exceeds the {} triples on {n} vertices", pool.len())));
            }
            b.choose(&pool, m);
            if p.singletons {
                b.complete_on(&range(1, n), 1);
            }
        }
        Family::RandomLc => {
            let n = p.n.ok_or_else(|| Error::InvalidParams("random-lc needs n".into()))?;
            let types = EdgeTypeSet::new(p.types())?;
            let h = gen_random(n, &types, p.density()?, b.rng.random())?;
            return Ok(left_compress_fixpoint(&h).hypergraph);
        }
    }
    Hypergraph::new(n, b.edges.into_iter().collect())
}

fn check_order(need: usize, n: usize) -> Result<()> {
    if need > n {
        return Err(Error::Infeasible(format!("needs at least {need} vertices, have {n}")));
    }
    let limits = Limits::default();
    if n > limits.max_vertices {
        return Err(Error::InvalidParams(format!("n = {n} exceeds the limit {}", limits.max_vertices)));
    }
    Ok(())
}

/// Draws from `family` until the target theorem's hypotheses hold.
pub fn gen_planted(family: Family, params: &GenParams, seed: u64) -> Result<Hypergraph> {
    let target = family.target(params);
    let tparams = params.theorem_params(family);
    for attempt in 0..MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let h = draw(family, params, &mut rng)?;
        let Some(id) = target else { return Ok(h) };
        let report = check_hypotheses(id, &h, &tparams)?;
        let wanted_strict = matches!(family, Family::TpzzFree);
        if report.ok() && report.strict == wanted_strict {
            return Ok(h);
        }
    }
    Err(Error::Infeasible(format!("no {family} instance satisfying its hypotheses after {MAX_RETRIES} draws")))
}

/// Each potential edge of each level in `types` is included independently
/// with probability `density`.
pub fn gen_random(n: usize, types: &EdgeTypeSet, density: f64, seed: u64) -> Result<Hypergraph> {
    let levels: Vec<(usize, f64)> = types.iter().map(|r| (r, density)).collect();
    gen_random_levels(n, &levels, seed)
}

/// As [`gen_random`] with a separate density per level.
pub fn gen_random_levels(n: usize, levels: &[(usize, f64)], seed: u64) -> Result<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for &(r, p) in levels {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("density {p} outside [0, 1]")));
        }
        if r == 0 {
            return Err(Error::InvalidEdgeTypes);
        }
        if r > n {
            return Err(Error::CardinalityTooLarge { r, n });
        }
        for e in (1..=n).combinations(r) {
            if rng.random_bool(p) {
                edges.push(e);
            }
        }
    }
    Hypergraph::new(n, edges)
}
