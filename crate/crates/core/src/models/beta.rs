use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::rational::{binomial, format_rational, from_biguint, int, parse_rational, Rational};

/// The beta-splitting parameter: a rational `β > -2`, or one of the two
/// limiting endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaParam {
    Finite(Rational),
    /// `β = -2`: all mass on the comb.
    CombLimit,
    /// `β → ∞`.
    Infinity,
}

impl BetaParam {
    pub fn finite(beta: Rational) -> Result<BetaParam> {
        if beta <= int(-2) {
            return Err(Error::domain(format!(
                "finite beta must exceed -2, got {beta} (use the comb endpoint for -2)"
            )));
        }
        Ok(BetaParam::Finite(beta))
    }

    /// Accepts `p/q`, integers, decimals, `-2` (comb endpoint) and
    /// `inf`/`infinity`/`∞`.
    pub fn parse(text: &str) -> Result<BetaParam> {
        let s = text.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "∞" => return Ok(BetaParam::Infinity),
            _ => {}
        }
        let r = parse_rational(s)?;
        if r == int(-2) {
            Ok(BetaParam::CombLimit)
        } else {
            BetaParam::finite(r)
        }
    }
}

impl fmt::Display for BetaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaParam::Finite(b) => f.write_str(&format_rational(b)),
            BetaParam::CombLimit => f.write_str("-2"),
            BetaParam::Infinity => f.write_str("inf"),
        }
    }
}

// q_n(i) as a ratio of polynomials in β, from the rational simplification of
// the Gamma form with falling factorials.
fn beta_q_parts(n: usize, i: usize) -> (Polynomial, Polynomial) {
    let r = |v: usize| Rational::from_integer(BigInt::from(v));
    let one = Rational::one();
    let two = int(2);
    let num = (&Polynomial::falling(&r(i), &one, i) * &Polynomial::falling(&r(n - i), &one, n - i))
        .scale(&from_biguint(&binomial(n as u64, i as u64)));
    let den = &Polynomial::falling(&r(n + 1), &two, n)
        - &Polynomial::falling(&r(n), &one, n).scale(&two);
    (num, den)
}

/// Split probability `q_n(i)` of the beta-splitting model.
///
/// Removable singularities (both polynomials vanish, as at `β = -1`) are
/// resolved by cancelling the common linear factor, so the value there is
/// the exact limit.
pub fn beta_q(n: usize, i: usize, beta: &BetaParam) -> Result<Rational> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::domain(format!("beta_q needs 1 <= i <= n-1, got n = {n}, i = {i}")));
    }
    match beta {
        BetaParam::CombLimit => Ok(if n == 2 {
            Rational::one()
        } else if i == 1 || i == n - 1 {
            Rational::new(1.into(), 2.into())
        } else {
            Rational::zero()
        }),
        BetaParam::Infinity => {
            let (num, den) = beta_q_parts(n, i);
            match (num.degree(), den.degree()) {
                (_, None) => Err(Error::domain("beta_q: vanishing denominator")),
                (None, _) => Ok(Rational::zero()),
                (Some(a), Some(b)) if a < b => Ok(Rational::zero()),
                (Some(a), Some(b)) if a == b => Ok(num.leading() / den.leading()),
                _ => Err(Error::domain("beta_q diverges as beta grows")),
            }
        }
        BetaParam::Finite(b) => {
            let (mut num, mut den) = beta_q_parts(n, i);
            while den.eval(b).is_zero() {
                if !num.eval(b).is_zero() || den.is_zero() {
                    return Err(Error::domain(format!(
                        "beta_q({n}, {i}) has a pole at beta = {b}"
                    )));
                }
                num = num.deflate(b);
                den = den.deflate(b);
            }
            Ok(num.eval(b) / den.eval(b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn fin(p: i64, q: i64) -> BetaParam {
        BetaParam::finite(ratio(p, q)).unwrap()
    }

    #[test]
    fn four_leaf_rational_functions() {
        for b in [ratio(0, 1), ratio(1, 1), ratio(-3, 2), ratio(10, 1), ratio(-1, 1)] {
            let beta = BetaParam::Finite(b.clone());
            let four = int(4);
            let den = int(18) + int(7) * &b;
            assert_eq!(
                int(2) * beta_q(4, 1, &beta).unwrap(),
                (int(12) + &four * &b) / &den
            );
            assert_eq!(beta_q(4, 2, &beta).unwrap(), (int(6) + int(3) * &b) / &den);
        }
        assert_eq!(beta_q(4, 2, &BetaParam::Infinity).unwrap(), ratio(3, 7));
    }

    #[test]
    fn endpoints() {
        assert_eq!(beta_q(5, 1, &BetaParam::CombLimit).unwrap(), ratio(1, 2));
        assert_eq!(beta_q(5, 2, &BetaParam::CombLimit).unwrap(), ratio(0, 1));
        assert_eq!(beta_q(2, 1, &BetaParam::CombLimit).unwrap(), ratio(1, 1));
        // limit at infinity is C(n, i) / (2^n - 2)
        for n in 2..10usize {
            for i in 1..n {
                let want = from_biguint(&binomial(n as u64, i as u64)) / int((1 << n) - 2);
                assert_eq!(beta_q(n, i, &BetaParam::Infinity).unwrap(), want);
            }
        }
    }

    #[test]
    fn yule_is_uniform() {
        for n in 2..10 {
            for i in 1..n {
                assert_eq!(beta_q(n, i, &fin(0, 1)).unwrap(), ratio(1, n as i64 - 1));
            }
        }
    }

    #[test]
    fn parse_params() {
        assert_eq!(BetaParam::parse("inf").unwrap(), BetaParam::Infinity);
        assert_eq!(BetaParam::parse("-2").unwrap(), BetaParam::CombLimit);
        assert_eq!(BetaParam::parse("-3/2").unwrap(), fin(-3, 2));
        assert!(BetaParam::parse("-5/2").is_err());
        assert!(BetaParam::parse("nope").is_err());
        assert_eq!(BetaParam::parse("-3/2").unwrap().to_string(), "-3/2");
    }

    #[test]
    fn index_errors() {
        assert!(beta_q(4, 0, &fin(0, 1)).is_err());
        assert!(beta_q(4, 4, &fin(0, 1)).is_err());
        assert!(beta_q(1, 1, &fin(0, 1)).is_err());
    }
}
