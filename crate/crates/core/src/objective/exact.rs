//! Exact rational evaluation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"`
/// exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// The exact binary value of a finite float.
pub fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| Error::Parse(format!("{v} has no rational value")))
}

pub fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exact counterpart of [`super::Coefficients`].
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCoefficients {
    pub r0: usize,
    pub alpha: BTreeMap<usize, BigRational>,
}

impl RationalCoefficients {
    pub fn new(r0: usize, alpha: BTreeMap<usize, BigRational>) -> Result<Self> {
        if r0 == 0 {
            return Err(Error::InvalidEdgeTypes);
        }
        for (&r, a) in &alpha {
            if !a.is_positive() {
                return Err(Error::NonPositiveCoefficient(r));
            }
            if r <= r0 {
                return Err(Error::InvalidParams(format!(
                    "coefficient given for level {r}, which is not above the base type {r0}"
                )));
            }
        }
        Ok(RationalCoefficients { r0, alpha })
    }

    pub fn base_only(r0: usize) -> Self {
        RationalCoefficients { r0, alpha: BTreeMap::new() }
    }

    /// `α_r = r!/r0!`.
    pub fn lambda_prime(types: &[usize]) -> Result<Self> {
        let r0 = *types.iter().min().ok_or(Error::InvalidEdgeTypes)?;
        let alpha = types
            .iter()
            .filter(|&&r| r > r0)
            .map(|&r| (r, BigRational::from_integer(factorial(r) / factorial(r0))))
            .collect();
        RationalCoefficients::new(r0, alpha)
    }

    /// Exact image of float coefficients.
    pub fn from_float(c: &super::Coefficients) -> Result<Self> {
        let alpha = c
            .alpha
            .iter()
            .map(|(&r, &a)| Ok((r, rational_from_f64(a)?)))
            .collect::<Result<_>>()?;
        RationalCoefficients::new(c.r0, alpha)
    }

    /// Parses `{"r0": 2, "alpha": {"3": "3/2"}}`; values may be JSON numbers
    /// (read exactly from their decimal text) or strings.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            r0: usize,
            #[serde(default)]
            alpha: BTreeMap<usize, serde_json::Value>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        let alpha = raw
            .alpha
            .into_iter()
            .map(|(r, v)| {
                let q = match v {
                    serde_json::Value::String(s) => parse_rational(&s)?,
                    serde_json::Value::Number(n) => parse_rational(&n.to_string())?,
                    other => return Err(Error::Parse(format!("coefficient {other} is not a number"))),
                };
                Ok((r, q))
            })
            .collect::<Result<_>>()?;
        RationalCoefficients::new(raw.r0, alpha)
    }

    fn get(&self, r: usize) -> Option<BigRational> {
        if r == self.r0 {
            Some(BigRational::one())
        } else {
            self.alpha.get(&r).cloned()
        }
    }
}

fn factorial(r: usize) -> BigInt {
    (1..=r).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// A point of the simplex with exact rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalWeightVector(Vec<BigRational>);

impl RationalWeightVector {
    pub fn new(x: Vec<BigRational>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidWeights("empty vector".into()));
        }
        if x.iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidWeights("negative entry".into()));
        }
        let sum: BigRational = x.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidWeights(format!("entries sum to {sum}, not 1")));
        }
        Ok(RationalWeightVector(x))
    }

    /// Exactly `1/|support|` on `support` (1-based), zero elsewhere.
    pub fn uniform_on(n: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidWeights("uniform weighting needs a nonempty support".into()));
        }
        let w = BigRational::new(BigInt::one(), BigInt::from(support.len()));
        let mut x = vec![BigRational::zero(); n];
        for &v in support {
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            x[v - 1] = w.clone();
        }
        RationalWeightVector::new(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }
}

/// `L_α(H, x)` in exact arithmetic.
pub fn eval_exact(h: &Hypergraph, alpha: &RationalCoefficients, x: &RationalWeightVector) -> Result<BigRational> {
    if x.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), got: x.len() });
    }
    let xs = x.as_slice();
    let mut total = BigRational::zero();
    for (&r, edges) in h.levels() {
        if r < alpha.r0 {
            return Err(Error::LevelBelowBase { level: r, base: alpha.r0 });
        }
        let a = alpha.get(r).ok_or(Error::MissingCoefficient(r))?;
        let mut level = BigRational::zero();
        for e in edges {
            if e.iter().any(|&v| xs[v - 1].is_zero()) {
                continue;
            }
            level += e.iter().fold(BigRational::one(), |acc, &v| acc * &xs[v - 1]);
        }
        total += a * level;
    }
    Ok(total)
}

/// `λ′(H, x) = r0! · L_{r!/r0!}(H, x)` in exact arithmetic.
pub fn lambda_prime_exact(h: &Hypergraph, x: &RationalWeightVector) -> Result<BigRational> {
    let types = h.edge_types().to_vec();
    if types.is_empty() {
        return Ok(BigRational::zero());
    }
    let coeffs = RationalCoefficients::lambda_prime(&types)?;
    let scale = BigRational::from_integer(factorial(coeffs.r0));
    Ok(scale * eval_exact(h, &coeffs, x)?)
}
