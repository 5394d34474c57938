//! Registry of the Motzkin–Straus type results: closed forms, hypothesis
//! checks and a numerical verification driver.
//!
//! Each [`TheoremId`] fixes an objective (plain `λ`, `λ′`, or the weighted
//! program `L_α`), a target edge-type family `T`, and the cliques whose
//! order `t` determines the claimed optimum `L(K_t^T)`. [`verify`] checks the
//! hypotheses, maximises numerically, evaluates the uniform weighting on the
//! maximum clique in exact arithmetic and compares all three.

mod closed;
mod hypotheses;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::objective::{
    eval_exact, lambda_prime_exact, rational_from_f64, rational_to_f64, Coefficients, RationalCoefficients,
    RationalWeightVector,
};
use crate::optimizer::{maximize, maximize_lambda_prime, OptimizationResult, SolverConfig};

pub use closed::{closed_form, closed_form_exact, complete_value, lambda_prime_closed, lambda_prime_complete};
pub use hypotheses::{check_hypotheses, Condition, HypothesisReport};

/// Default gap demanded by the strict-inequality conclusions.
pub const DEFAULT_STRICTNESS_MARGIN: f64 = 1e-4;

macro_rules! theorem_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum TheoremId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl TheoremId {
            pub const ALL: &'static [TheoremId] = &[$(TheoremId::$variant),*];

            pub fn name(self) -> &'static str {
                match self {
                    $(TheoremId::$variant => $name,)*
                }
            }
        }
    };
}

theorem_ids! {
    MsT1 => "MS_T1",
    NonunifT3 => "NONUNIF_T3",
    OneRT4 => "ONE_R_T4",
    OneTwoThreeT5 => "ONE_TWO_THREE_T5",
    TwoRT6a => "TWO_R_T6a",
    OneTwoRT6b => "ONE_TWO_R_T6b",
    TwoREdgesT7a => "TWO_R_EDGES_T7a",
    OneTwoREdgesT7b => "ONE_TWO_R_EDGES_T7b",
    Cor1a => "COR1a",
    Cor1b => "COR1b",
    Cor2a => "COR2a",
    Cor2b => "COR2b",
    GeneralT9a => "GENERAL_T9a",
    GeneralT9b => "GENERAL_T9b",
    MixedT10a => "MIXED_T10a",
    MixedT10b => "MIXED_T10b",
    MixedT10c => "MIXED_T10c",
    Pz => "PZ",
    Tpzz => "TPZZ",
    Ptz => "PTZ",
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_").to_ascii_uppercase();
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.name().to_ascii_uppercase() == key)
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

/// Parameters shared by the registry. Unused fields are ignored by ids that
/// do not need them; missing coefficients default to 1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheoremParams {
    /// Clique order. Derived from the instance when absent, except for the
    /// strict-inequality results where it is the window parameter.
    pub t: Option<usize>,
    /// Top cardinality; inferred from the instance when absent.
    pub r: Option<usize>,
    #[serde(alias = "alpha2")]
    pub alpha_2: Option<f64>,
    #[serde(alias = "alpha3", alias = "alpha_3")]
    pub alpha_r: Option<f64>,
    /// Per-level coefficients, used by the general family and as a fallback
    /// for `alpha_2`/`alpha_r`.
    pub alpha: BTreeMap<usize, f64>,
    /// Picks the variant of the mixed results, e.g. `[1, 2, 3]`.
    pub types: Option<Vec<usize>>,
    pub strictness_margin: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Objective {
    Lambda,
    LambdaPrime,
    Weighted,
}

/// An id with its parameters resolved against an (optional) instance.
#[derive(Debug, Clone)]
pub(crate) struct Setup {
    pub id: TheoremId,
    pub family: Vec<usize>,
    pub objective: Objective,
    pub r: Option<usize>,
    /// Coefficients above the base type, for [`Objective::Weighted`].
    pub alpha: BTreeMap<usize, f64>,
    pub exact_alpha: BTreeMap<usize, BigRational>,
    /// Edge types of the clique whose order is `t`.
    pub clique_types: Vec<usize>,
    pub notes: Vec<String>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Setup {
    pub(crate) fn resolve(id: TheoremId, params: &TheoremParams, h: Option<&Hypergraph>) -> Result<Self> {
        use TheoremId::*;
        let present = h.map(|h| h.edge_types().to_vec()).unwrap_or_default();
        let top = present.iter().copied().filter(|&r| r >= 3).max();
        let needs_r = || -> Result<usize> {
            let r = params
                .r
                .or(top)
                .ok_or_else(|| Error::InvalidParams(format!("{id} needs r (none given, none inferable)")))?;
            if r < 3 {
                return Err(Error::InvalidParams(format!("{id} needs r >= 3, got {r}")));
            }
            Ok(r)
        };
        let fixed_three = || -> Result<usize> {
            match params.r {
                Some(r) if r != 3 => Err(Error::InvalidParams(format!("{id} is stated for r = 3, got {r}"))),
                _ => Ok(3),
            }
        };
        let alpha_r = |r: usize| -> Result<f64> {
            positive("alpha_r", params.alpha_r.or_else(|| params.alpha.get(&r).copied()).unwrap_or(1.0))
        };
        let alpha_2 = || -> Result<f64> {
            positive("alpha_2", params.alpha_2.or_else(|| params.alpha.get(&2).copied()).unwrap_or(1.0))
        };
        let base_two = || -> Result<()> {
            match params.alpha_2 {
                Some(a) if a != 1.0 => Err(Error::InvalidParams(format!(
                    "{id} has level 2 as its base type, so alpha_2 is fixed to 1 (got {a})"
                ))),
                _ => Ok(()),
            }
        };
        let variant = |allowed: &[Vec<usize>], pick_second: bool| -> Result<Vec<usize>> {
            match &params.types {
                Some(t) => {
                    let mut t = t.clone();
                    t.sort_unstable();
                    t.dedup();
                    allowed.iter().find(|a| **a == t).cloned().ok_or_else(|| {
                        Error::InvalidParams(format!("{id} accepts types {allowed:?}, got {t:?}"))
                    })
                }
                None => Ok(allowed[usize::from(pick_second)].clone()),
            }
        };

        let mut notes = Vec::new();
        let (family, objective, r, alpha): (Vec<usize>, Objective, Option<usize>, BTreeMap<usize, f64>) = match id {
            MsT1 => (vec![2], Objective::Lambda, None, BTreeMap::new()),
            NonunifT3 => (vec![1, 2], Objective::LambdaPrime, None, BTreeMap::new()),
            OneRT4 => {
                let r = needs_r()?;
                (vec![1, r], Objective::Weighted, Some(r), BTreeMap::from([(r, alpha_r(r)?)]))
            }
            OneTwoThreeT5 => {
                let r = fixed_three()?;
                (vec![1, 2, 3], Objective::Weighted, Some(r), BTreeMap::from([(2, alpha_2()?), (3, alpha_r(3)?)]))
            }
            TwoRT6a | TwoREdgesT7a => {
                base_two()?;
                let r = needs_r()?;
                notes.push("level-2 coefficient is the base coefficient 1".into());
                (vec![2, r], Objective::Weighted, Some(r), BTreeMap::from([(r, alpha_r(r)?)]))
            }
            OneTwoRT6b | OneTwoREdgesT7b => {
                let r = needs_r()?;
                if id == OneTwoREdgesT7b {
                    notes.push("both coefficient conditions on alpha_2 are required".into());
                }
                (vec![1, 2, r], Objective::Weighted, Some(r), BTreeMap::from([(2, alpha_2()?), (r, alpha_r(r)?)]))
            }
            Cor1a | Cor2a => {
                let r = needs_r()?;
                (vec![2, r], Objective::LambdaPrime, Some(r), BTreeMap::new())
            }
            Cor1b | Cor2b => {
                let r = needs_r()?;
                (vec![1, 2, r], Objective::LambdaPrime, Some(r), BTreeMap::new())
            }
            GeneralT9a | GeneralT9b => {
                let mut levels: BTreeMap<usize, f64> = params.alpha.iter().filter(|(&r, _)| r > 2).map(|(&r, &a)| (r, a)).collect();
                if levels.is_empty() {
                    let r = needs_r()?;
                    levels.insert(r, alpha_r(r)?);
                }
                for (&r, &a) in &levels {
                    positive(&format!("alpha[{r}]"), a)?;
                }
                let top = *levels.keys().max().expect("nonempty");
                notes.push(format!("threshold evaluated at the largest level r = {top}"));
                let mut family: Vec<usize> = levels.keys().copied().collect();
                if id == GeneralT9a {
                    base_two()?;
                    family.insert(0, 2);
                } else {
                    levels.insert(2, alpha_2()?);
                    family.splice(0..0, [1, 2]);
                }
                (family, Objective::Weighted, Some(top), levels)
            }
            MixedT10a => {
                let r = needs_r()?;
                let family = variant(&[vec![2, r], vec![1, 2, r]], present.contains(&1))?;
                (family, Objective::LambdaPrime, Some(r), BTreeMap::new())
            }
            MixedT10b => {
                let r = fixed_three()?;
                let family = variant(&[vec![1, 3], vec![1, 2, 3]], present.contains(&2))?;
                if family == [1, 3] {
                    notes.push("{1,3} variant: cliques over {1,3}, compared with the complete {1,3}-graph".into());
                }
                (family, Objective::LambdaPrime, Some(r), BTreeMap::new())
            }
            MixedT10c => (vec![1, fixed_three()?], Objective::LambdaPrime, Some(3), BTreeMap::new()),
            Pz | Tpzz => (vec![fixed_three()?], Objective::Lambda, Some(3), BTreeMap::new()),
            Ptz => {
                let r = params.r.or(present.iter().copied().max()).ok_or_else(|| {
                    Error::InvalidParams("PTZ needs r (none given, none inferable)".into())
                })?;
                if r < 3 {
                    return Err(Error::InvalidParams(format!("PTZ needs r >= 3, got {r}")));
                }
                (vec![r], Objective::Lambda, Some(r), BTreeMap::new())
            }
        };
        let exact_alpha = alpha
            .iter()
            .map(|(&r, &a)| Ok((r, rational_from_f64(a)?)))
            .collect::<Result<_>>()?;
        let clique_types = match id {
            MixedT10c => vec![1, 3],
            _ => family.clone(),
        };
        Ok(Setup { id, family, objective, r, alpha, exact_alpha, clique_types, notes })
    }

    pub(crate) fn r0(&self) -> usize {
        self.family[0]
    }

    /// Per-level weights of the objective, exactly.
    fn level_weights_exact(&self) -> BTreeMap<usize, BigRational> {
        match self.objective {
            Objective::Lambda => BTreeMap::from([(self.r0(), BigRational::one())]),
            Objective::LambdaPrime => self.family.iter().map(|&s| (s, closed::factorial_q(s))).collect(),
            Objective::Weighted => {
                let mut w = self.exact_alpha.clone();
                w.insert(self.r0(), BigRational::one());
                w
            }
        }
    }

    pub(crate) fn closed_exact(&self, t: usize) -> BigRational {
        complete_value(t, &self.level_weights_exact())
    }

    fn coefficients(&self) -> Result<Coefficients> {
        Coefficients::new(self.r0(), self.alpha.clone())
    }

    fn maximize(&self, h: &Hypergraph, cfg: &SolverConfig) -> Result<OptimizationResult> {
        match self.objective {
            Objective::Lambda => maximize(h, &Coefficients::base_only(self.r0()), cfg),
            Objective::LambdaPrime => maximize_lambda_prime(h, cfg),
            Objective::Weighted => maximize(h, &self.coefficients()?, cfg),
        }
    }

    /// Objective value at `x` in exact arithmetic, computed from the edge
    /// sets rather than from the closed form.
    fn eval_exact(&self, h: &Hypergraph, x: &RationalWeightVector) -> Result<BigRational> {
        match self.objective {
            Objective::Lambda => eval_exact(h, &RationalCoefficients::base_only(self.r0()), x),
            Objective::LambdaPrime => lambda_prime_exact(h, x),
            Objective::Weighted => eval_exact(h, &RationalCoefficients::new(self.r0(), self.exact_alpha.clone())?, x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// Hypotheses do not hold; the conclusion was not tested.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremVerdict {
    pub id: TheoremId,
    pub status: VerdictStatus,
    pub pass: bool,
    pub hypotheses_ok: bool,
    pub conditions: Vec<Condition>,
    pub t: Option<usize>,
    pub r: Option<usize>,
    /// Edge count of the level the hypotheses constrain (whole hypergraph
    /// when none is singled out).
    pub m: usize,
    pub clique: Vec<usize>,
    pub closed_form: Option<f64>,
    pub closed_form_exact: Option<String>,
    pub numerical: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub uniform_on_clique: Option<f64>,
    pub uniform_on_clique_exact: Option<String>,
    /// Uniform-on-clique value equals the closed form as rationals.
    pub exact_agreement: Option<bool>,
    pub kkt_residual: Option<f64>,
    pub converged: Option<bool>,
    pub tolerance: f64,
    /// The conclusion is a strict inequality `numerical < closed_form`.
    pub strict: bool,
    pub strictness_margin: Option<f64>,
    /// `closed_form − numerical`.
    pub gap: Option<f64>,
    pub notes: Vec<String>,
}

/// Checks `id` on `h`: hypotheses, numerical optimum, exact value at the
/// uniform weighting on the maximum clique, and the claimed closed form.
///
/// An equality conclusion passes when the numerical optimum is within `tol`
/// of the closed form, the exact uniform-on-clique value equals it, and
/// the solver converged. A strict conclusion passes when the optimum is
/// below the closed form by more than the strictness margin.
pub fn verify(id: TheoremId, h: &Hypergraph, params: &TheoremParams, cfg: &SolverConfig, tol: f64) -> Result<TheoremVerdict> {
    let setup = Setup::resolve(id, params, Some(h))?;
    let report = hypotheses::check(&setup, h, params)?;
    let hypotheses_ok = report.ok();
    let closed_exact = report.t.filter(|&t| t > 0).map(|t| setup.closed_exact(t));
    let mut verdict = TheoremVerdict {
        id,
        status: VerdictStatus::NotApplicable,
        pass: false,
        hypotheses_ok,
        conditions: report.conditions,
        t: report.t,
        r: setup.r,
        m: report.m,
        clique: report.clique.clone(),
        closed_form: closed_exact.as_ref().map(rational_to_f64),
        closed_form_exact: closed_exact.as_ref().map(ToString::to_string),
        numerical: None,
        weights: None,
        uniform_on_clique: None,
        uniform_on_clique_exact: None,
        exact_agreement: None,
        kkt_residual: None,
        converged: None,
        tolerance: tol,
        strict: report.strict,
        strictness_margin: None,
        gap: None,
        notes: setup.notes.clone(),
    };
    let Some(closed_exact) = closed_exact.filter(|_| hypotheses_ok) else {
        return Ok(verdict);
    };
    let closed = rational_to_f64(&closed_exact);

    let result = setup.maximize(h, cfg)?;
    verdict.numerical = Some(result.value);
    verdict.weights = Some(result.x.as_slice().to_vec());
    verdict.kkt_residual = Some(result.kkt_residual);
    verdict.converged = Some(result.converged);
    verdict.gap = Some(closed - result.value);

    if !report.clique.is_empty() {
        let x = RationalWeightVector::uniform_on(h.n(), &report.clique)?;
        let u = setup.eval_exact(h, &x)?;
        verdict.uniform_on_clique = Some(rational_to_f64(&u));
        verdict.exact_agreement = Some(u == closed_exact);
        verdict.uniform_on_clique_exact = Some(u.to_string());
    }

    let pass = if report.strict {
        let margin = params.strictness_margin.unwrap_or(DEFAULT_STRICTNESS_MARGIN);
        verdict.strictness_margin = Some(margin);
        result.value < closed - margin
    } else {
        (result.value - closed).abs() <= tol && verdict.exact_agreement == Some(true)
    };
    if !result.converged {
        verdict.notes.push("solver did not reach the stationarity tolerance".into());
    }
    verdict.pass = pass && result.converged;
    verdict.status = if verdict.pass { VerdictStatus::Pass } else { VerdictStatus::Fail };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::EdgeTypeSet;

    #[test]
    fn ids_round_trip() {
        for &id in TheoremId::ALL {
            assert_eq!(id.name().parse::<TheoremId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
        }
        assert_eq!("two-r-t6a".parse::<TheoremId>().unwrap(), TheoremId::TwoRT6a);
        assert!("T11".parse::<TheoremId>().is_err());
        assert_eq!(TheoremId::ALL.len(), 20);
    }

    #[test]
    fn params_from_json() {
        let p: TheoremParams = serde_json::from_str(r#"{"t": 4, "r": 3, "alpha_r": 1.5, "alpha": {"4": 2}}"#).unwrap();
        assert_eq!(p.t, Some(4));
        assert_eq!(p.alpha[&4], 2.0);
        assert!(serde_json::from_str::<TheoremParams>(r#"{"tt": 4}"#).is_err());
    }

    #[test]
    fn singleton_pairs_clique_of_three() {
        // K_3^{1,2} plus a pendant pair without singletons.
        let mut edges = Hypergraph::complete(3, &EdgeTypeSet::new([1, 2]).unwrap()).unwrap().canonical_edges();
        edges.push(vec![3, 4]);
        let h = Hypergraph::new(4, edges).unwrap();
        let v = verify(TheoremId::NonunifT3, &h, &TheoremParams::default(), &SolverConfig::default(), 1e-6).unwrap();
        assert!(v.pass, "{v:#?}");
        assert_eq!(v.t, Some(3));
        assert_eq!(v.closed_form_exact.as_deref(), Some("5/3"));
        assert!((v.numerical.unwrap() - 5.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn failed_hypotheses_are_not_applicable() {
        let h = Hypergraph::new(3, vec![vec![1, 2], vec![1, 2, 3]]).unwrap();
        let v = verify(TheoremId::MsT1, &h, &TheoremParams::default(), &SolverConfig::default(), 1e-6).unwrap();
        assert_eq!(v.status, VerdictStatus::NotApplicable);
        assert!(!v.pass);
        assert!(v.numerical.is_none());
    }

    #[test]
    fn resolve_rejects_bad_parameters() {
        let p = TheoremParams { r: Some(2), ..TheoremParams::default() };
        assert!(Setup::resolve(TheoremId::OneRT4, &p, None).is_err());
        let p = TheoremParams { r: Some(4), ..TheoremParams::default() };
        assert!(Setup::resolve(TheoremId::Pz, &p, None).is_err());
        let p = TheoremParams { r: Some(3), alpha_2: Some(2.0), ..TheoremParams::default() };
        assert!(Setup::resolve(TheoremId::TwoRT6a, &p, None).is_err());
        let p = TheoremParams { r: Some(3), alpha_r: Some(-1.0), ..TheoremParams::default() };
        assert!(Setup::resolve(TheoremId::OneRT4, &p, None).is_err());
    }

    #[test]
    fn mixed_variant_follows_instance() {
        let with_pairs = Hypergraph::new(4, vec![vec![1], vec![1, 2], vec![1, 2, 3]]).unwrap();
        let s = Setup::resolve(TheoremId::MixedT10b, &TheoremParams::default(), Some(&with_pairs)).unwrap();
        assert_eq!(s.family, vec![1, 2, 3]);
        let s = Setup::resolve(TheoremId::MixedT10b, &TheoremParams::default(), None).unwrap();
        assert_eq!(s.family, vec![1, 3]);
        let p = TheoremParams { types: Some(vec![3, 2]), r: Some(3), ..TheoremParams::default() };
        assert_eq!(Setup::resolve(TheoremId::MixedT10a, &p, None).unwrap().family, vec![2, 3]);
    }
}
