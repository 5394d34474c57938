//! Closed-form values at the uniform weighting of a complete hypergraph.
//!
//! Every closed form in the registry is `Σ_{s∈T} w_s · C(t,s)/t^s`, the
//! objective of `K_t^T` at `x_i = 1/t`, with `w_s` equal to `α_s`, to `s!`
//! (for `λ′`) or to 1 (plain `λ`). For example `α_r·C(t,r)/t^r` is the
//! familiar `α_r Π_{i=1}^{r−1}(t−i)/(r! t^{r−1})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Setup, TheoremId, TheoremParams};
use crate::error::{Error, Result};
use crate::objective::rational_to_f64;

pub(crate) fn factorial_q(r: usize) -> BigRational {
    BigRational::from_integer((1..=r).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

fn binomial_q(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `Σ_s w_s C(t,s)/t^s`; levels with `s > t` contribute nothing.
pub fn complete_value(t: usize, weights: &BTreeMap<usize, BigRational>) -> BigRational {
    if t == 0 {
        return BigRational::zero();
    }
    let tq = BigInt::from(t);
    weights
        .iter()
        .map(|(&s, w)| w * BigRational::new(binomial_q(t, s), num_traits::pow(tq.clone(), s)))
        .sum()
}

/// `λ′(K_t^T) = Σ_{s∈T} s!·C(t,s)/t^s`, exact.
pub fn lambda_prime_complete(t: usize, types: &[usize]) -> BigRational {
    complete_value(t, &types.iter().map(|&s| (s, factorial_q(s))).collect())
}

/// `λ′` of the complete hypergraph a `λ′`-flavoured result compares against:
/// `K_t^{2,r}` for the `{2,r}` forms, `K_t^{1,2,r}` for COR1b and
/// `K_t^{1,r}` for MIXED_T10b.
pub fn lambda_prime_closed(id: TheoremId, t: usize, r: usize) -> Result<f64> {
    if t < r {
        return Err(Error::InvalidParams(format!("need t >= r, got t={t}, r={r}")));
    }
    let types: &[usize] = match id {
        TheoremId::Cor1a | TheoremId::MixedT10a => &[2, r],
        TheoremId::Cor1b => &[1, 2, r],
        TheoremId::MixedT10b => &[1, r],
        other => return Err(Error::InvalidParams(format!("{other} has no lambda-prime closed form here"))),
    };
    Ok(rational_to_f64(&lambda_prime_complete(t, types)))
}

/// Exact closed form of `id` for the given parameters. `t` is required.
pub fn closed_form_exact(id: TheoremId, params: &TheoremParams) -> Result<BigRational> {
    let t = params.t.ok_or_else(|| Error::InvalidParams("closed form needs t".into()))?;
    if t == 0 {
        return Err(Error::InvalidParams("t must be at least 1".into()));
    }
    Ok(Setup::resolve(id, params, None)?.closed_exact(t))
}

pub fn closed_form(id: TheoremId, params: &TheoremParams) -> Result<f64> {
    closed_form_exact(id, params).map(|q| rational_to_f64(&q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn params(t: usize, r: Option<usize>, a2: Option<f64>, ar: Option<f64>) -> TheoremParams {
        TheoremParams { t: Some(t), r, alpha_2: a2, alpha_r: ar, ..TheoremParams::default() }
    }

    #[test]
    fn registry_examples() {
        assert_eq!(closed_form_exact(TheoremId::OneRT4, &params(5, Some(3), None, Some(6.0))).unwrap(), q(37, 25));
        assert_eq!(closed_form(TheoremId::OneRT4, &params(5, Some(3), None, Some(6.0))).unwrap(), 1.48);
        assert_eq!(closed_form_exact(TheoremId::TwoRT6a, &params(4, Some(3), None, Some(1.0))).unwrap(), q(7, 16));
        assert_eq!(
            closed_form_exact(TheoremId::OneTwoThreeT5, &params(3, None, Some(1.0), Some(1.0))).unwrap(),
            q(37, 27)
        );
    }

    #[test]
    fn motzkin_straus_and_singletons() {
        for t in 2..=8usize {
            let ms = closed_form_exact(TheoremId::MsT1, &params(t, None, None, None)).unwrap();
            assert_eq!(ms, q(t as i64 - 1, 2 * t as i64));
            let t3 = closed_form_exact(TheoremId::NonunifT3, &params(t, None, None, None)).unwrap();
            assert_eq!(t3, q(2 * t as i64 - 1, t as i64));
            assert_eq!(lambda_prime_complete(t, &[1, 2]), t3);
        }
    }

    #[test]
    fn lambda_prime_values() {
        assert_eq!(lambda_prime_complete(4, &[2, 3]), q(9, 8));
        assert_eq!(lambda_prime_complete(4, &[1, 3]), q(11, 8));
        assert_eq!(lambda_prime_closed(TheoremId::Cor1a, 4, 3).unwrap(), 1.125);
        assert_eq!(lambda_prime_closed(TheoremId::MixedT10b, 4, 3).unwrap(), 1.375);
        assert!(lambda_prime_closed(TheoremId::Cor1a, 2, 3).is_err());
        assert!(lambda_prime_closed(TheoremId::MsT1, 4, 3).is_err());
    }

    #[test]
    fn corollary_two_matches_its_product_form() {
        for t in 4..=10usize {
            for r in 3..=4usize {
                let tail: BigRational = (1..r)
                    .map(|i| BigRational::from_integer(BigInt::from(t - i)))
                    .product::<BigRational>()
                    / BigRational::from_integer(num_traits::pow(BigInt::from(t), r - 1));
                let head = q(t as i64 - 1, t as i64);
                let p = params(t, Some(r), None, None);
                assert_eq!(closed_form_exact(TheoremId::Cor2a, &p).unwrap(), &head + &tail);
                assert_eq!(closed_form_exact(TheoremId::Cor2b, &p).unwrap(), BigRational::one() + head + tail);
            }
        }
    }

    #[test]
    fn level_two_plus_singletons_shifts_by_one() {
        for t in 3..=12usize {
            for r in 3..=5usize {
                if r > t {
                    continue;
                }
                let a = closed_form_exact(TheoremId::TwoRT6a, &params(t, Some(r), None, Some(2.5))).unwrap();
                let b = closed_form_exact(TheoremId::OneTwoRT6b, &params(t, Some(r), Some(1.0), Some(2.5))).unwrap();
                assert_eq!(a + BigRational::one(), b);
            }
        }
    }

    #[test]
    fn needs_t() {
        assert!(closed_form(TheoremId::MsT1, &TheoremParams::default()).is_err());
    }
}
