//! Hypothesis checks. Failed conditions are reported, never thrown.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::closed::factorial_q;
use super::{Setup, TheoremId, TheoremParams};
use crate::cliques::{contains_complete, max_complete_subgraph};
use crate::error::{Error, Result};
use crate::hypergraph::{binomial, EdgeTypeSet, Hypergraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    /// The computed quantities behind the verdict.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub conditions: Vec<Condition>,
    pub t: Option<usize>,
    pub m: usize,
    /// Lexicographically first maximum clique for the id's clique types.
    pub clique: Vec<usize>,
    /// The conclusion to test is a strict inequality.
    pub strict: bool,
}

impl HypothesisReport {
    pub fn ok(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }
}

struct Conditions(Vec<Condition>);

impl Conditions {
    fn push(&mut self, name: &str, holds: bool, detail: String) {
        self.0.push(Condition { name: name.into(), holds, detail });
    }
}

fn types(v: &[usize]) -> EdgeTypeSet {
    EdgeTypeSet::new(v.iter().copied()).expect("registry families are valid")
}

fn q(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `C(t,2) ≤ m ≤ C(t,2) + t − 2`.
fn window_pairs(t: usize, m: usize) -> (bool, String) {
    let lo = binomial(t as u64, 2) as i128;
    let hi = lo + t as i128 - 2;
    let m = m as i128;
    (lo <= m && m <= hi, format!("{lo} <= m = {m} <= {hi}"))
}

/// `C(t,3) ≤ m ≤ C(t,3) + C(t−1,2)`.
fn window_pz(t: usize, m: usize) -> (bool, String) {
    let lo = binomial(t as u64, 3) as i128;
    let hi = lo + binomial(t.saturating_sub(1) as u64, 2) as i128;
    let m = m as i128;
    (lo <= m && m <= hi, format!("{lo} <= m = {m} <= {hi}"))
}

/// `C(t,3) ≤ m ≤ C(t,3) + C(t−1,2) − t/2`, compared after doubling.
fn window_tpzz(t: usize, m: usize) -> (bool, String) {
    let lo = binomial(t as u64, 3) as i128;
    let hi2 = 2 * (lo + binomial(t.saturating_sub(1) as u64, 2) as i128) - t as i128;
    let m = m as i128;
    (lo <= m && 2 * m <= hi2, format!("{lo} <= m = {m} <= {}", hi2 as f64 / 2.0))
}

/// `C(t,r) ≤ m ≤ C(t,r) + C(t−1,r−1) − (2^{r−3} − 1)(C(t−1,r−2) − 1)`.
fn window_ptz(t: usize, r: usize, m: usize) -> (bool, String) {
    let t1 = t.saturating_sub(1) as u64;
    let lo = binomial(t as u64, r as u64) as i128;
    let hi = lo + binomial(t1, r as u64 - 1) as i128
        - ((1i128 << (r - 3)) - 1) * (binomial(t1, r as u64 - 2) as i128 - 1);
    let m = m as i128;
    (lo <= m && m <= hi, format!("{lo} <= m = {m} <= {hi}"))
}

/// Reports the hypotheses of `id` on `h`.
pub fn check_hypotheses(id: TheoremId, h: &Hypergraph, params: &TheoremParams) -> Result<HypothesisReport> {
    let setup = Setup::resolve(id, params, Some(h))?;
    check(&setup, h, params)
}

pub(crate) fn check(setup: &Setup, h: &Hypergraph, params: &TheoremParams) -> Result<HypothesisReport> {
    use TheoremId::*;
    let id = setup.id;
    let mut c = Conditions(Vec::new());

    let present = h.edge_types().to_vec();
    c.push(
        "edge types",
        present.iter().all(|r| setup.family.contains(r)),
        format!("T(H) = {present:?} within {:?}", setup.family),
    );

    let clique = max_complete_subgraph(h, &types(&setup.clique_types));
    let window_param = matches!(id, Tpzz | MixedT10c);
    let t = if window_param {
        params.t.ok_or_else(|| Error::InvalidParams(format!("{id} needs t (the window parameter)")))?
    } else {
        let t = params.t.unwrap_or(clique.order);
        c.push(
            "clique order",
            clique.order == t,
            format!("maximum complete {:?}-subgraph has order {}, t = {t}", setup.clique_types, clique.order),
        );
        t
    };
    c.push("t positive", t >= 1, format!("t = {t}"));

    let r = setup.r.unwrap_or(2);
    let alpha = |s: usize| setup.exact_alpha.get(&s).cloned().unwrap_or_else(BigRational::one);
    let support2 = h.vertex_support(2).len();
    let singletons = h.level_size(1);
    let tq = q(t);

    let mut m = h.edge_count();
    let mut strict = false;
    match id {
        MsT1 => {}
        NonunifT3 => c.push("t at least 2", t >= 2, format!("t = {t}")),
        OneRT4 => {
            c.push("singleton count", singletons == t, format!("{singletons} singleton edges, t = {t}"));
            // ⌈(α_r − (r−2)!)^{r−2} / ((r−2)! α_r^{r−3})⌉; exponents of 0 give 1.
            let a = alpha(r);
            let f = factorial_q(r - 2);
            let num = (&a - &f).pow(r as i32 - 2);
            let den = &f * a.pow(r as i32 - 3);
            let bound = (num / den).ceil();
            c.push("threshold", tq >= bound, format!("t = {t} >= {bound}"));
        }
        OneTwoThreeT5 => {
            c.push("singleton count", singletons == t, format!("{singletons} singleton edges, t = {t}"));
            let (a2, a3) = (alpha(2), alpha(3));
            let s = &a2 + &a3;
            let bound = ((&s * &s - &a3) / &s).ceil();
            c.push("threshold", tq >= bound, format!("t = {t} >= {bound}"));
        }
        TwoRT6a | OneTwoRT6b | TwoREdgesT7a | OneTwoREdgesT7b => {
            let a2 = if matches!(id, TwoRT6a | TwoREdgesT7a) { BigRational::one() } else { alpha(2) };
            let f = factorial_q(r - 2);
            let bound = alpha(r) / (&a2 * &f) + BigRational::one();
            c.push("threshold", tq >= bound, format!("t = {t} >= {bound}"));
            if matches!(id, TwoRT6a | OneTwoRT6b) {
                c.push("level-2 vertex order", support2 == t, format!("|V(H^2)| = {support2}, t = {t}"));
            } else {
                m = h.level_size(2);
                let (ok, detail) = window_pairs(t, m);
                c.push("level-2 edge window", ok, detail);
            }
            if id == OneTwoREdgesT7b {
                let strong = alpha(r) / &f;
                let weak = &strong / q(2);
                c.push("alpha_2 >= alpha_r/(r-2)!", a2 >= strong, format!("alpha_2 = {a2}, bound {strong}"));
                c.push("alpha_2 >= alpha_r/(2(r-2)!)", a2 >= weak, format!("alpha_2 = {a2}, bound {weak}"));
            }
        }
        Cor1a | Cor1b | Cor2a | Cor2b => {
            let bound = r * (r - 1) / 2 + 1;
            c.push("threshold", t >= bound, format!("t = {t} >= {bound}"));
            if matches!(id, Cor1a | Cor1b) {
                c.push("level-2 vertex order", support2 == t, format!("|V(H^2)| = {support2}, t = {t}"));
            } else {
                c.push("r in 3..=4", (3..=4).contains(&r), format!("r = {r}"));
                m = h.level_size(2);
                let (ok, detail) = window_pairs(t, m);
                c.push("level-2 edge window", ok, detail);
            }
        }
        GeneralT9a | GeneralT9b => {
            let a2 = if id == GeneralT9a { BigRational::one() } else { alpha(2) };
            let above_two = setup.family.iter().filter(|&&s| s > 2).count();
            let bound = q(above_two) * alpha(r) / (&a2 * factorial_q(r - 2)) + BigRational::one();
            c.push("threshold", tq >= bound, format!("t = {t} >= {bound} ({above_two} levels above 2)"));
            c.push("level-2 vertex order", support2 == t, format!("|V(H^2)| = {support2}, t = {t}"));
        }
        MixedT10a => {
            c.push("vertex count", h.n() == t + 1, format!("n = {}, t + 1 = {}", h.n(), t + 1));
            m = h.level_size(r);
            let (ok, detail) = window_ptz(t, r, m);
            c.push("level-r edge window", ok, detail);
            let lower: Vec<usize> = setup.family.iter().copied().filter(|&s| s < r).collect();
            let order = max_complete_subgraph(h, &types(&lower)).order;
            c.push("lower clique order", order == t, format!("maximum complete {lower:?}-subgraph has order {order}"));
        }
        MixedT10b => {
            m = h.level_size(3);
            let (ok, detail) = window_pz(t, m);
            c.push("level-3 edge window", ok, detail);
            if setup.family.contains(&2) {
                let order = max_complete_subgraph(h, &types(&[1, 2])).order;
                c.push("lower clique order", order == t, format!("maximum complete [1, 2]-subgraph has order {order}"));
            }
        }
        MixedT10c => {
            m = h.level_size(3);
            let (ok, detail) = window_tpzz(t, m);
            c.push("level-3 edge window", ok, detail);
            if contains_complete(h, t, &types(&[3])) {
                let with_singletons = contains_complete(h, t, &types(&[1, 3]));
                c.push(
                    "singletons on the clique",
                    with_singletons,
                    format!("complete [1, 3]-subgraph of order {t}: {with_singletons}"),
                );
            } else {
                strict = true;
            }
        }
        Pz => {
            m = h.level_size(3);
            let (ok, detail) = window_pz(t, m);
            c.push("level-3 edge window", ok, detail);
        }
        Tpzz => {
            m = h.level_size(3);
            let (ok, detail) = window_tpzz(t, m);
            c.push("level-3 edge window", ok, detail);
            let has = contains_complete(h, t, &types(&[3]));
            c.push("no complete t-subgraph", !has, format!("complete 3-subgraph of order {t}: {has}"));
            strict = true;
        }
        Ptz => {
            c.push("vertex count", h.n() == t + 1, format!("n = {}, t + 1 = {}", h.n(), t + 1));
            m = h.level_size(r);
            let (ok, detail) = window_ptz(t, r, m);
            c.push("level-r edge window", ok, detail);
        }
    }
    Ok(HypothesisReport { conditions: c.0, t: Some(t), m, clique: clique.vertices, strict })
}
