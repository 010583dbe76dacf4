use num_traits::{One, Zero};

use crate::rational::Rational;

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Polynomial {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Rational) -> Polynomial {
        Polynomial::new(vec![c])
    }

    /// `a + b·x`
    pub fn linear(a: Rational, b: Rational) -> Polynomial {
        Polynomial::new(vec![a, b])
    }

    /// Falling factorial `(a + b·x)(a + b·x - 1)⋯(a + b·x - k + 1)`.
    pub fn falling(a: &Rational, b: &Rational, k: usize) -> Polynomial {
        (0..k).fold(Polynomial::constant(Rational::one()), |acc, j| {
            &acc * &Polynomial::linear(a - Rational::from_integer(j.into()), b.clone())
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Quotient by `(x - r)`; the remainder `p(r)` is dropped.
    pub fn deflate(&self, r: &Rational) -> Polynomial {
        let Some(deg) = self.degree() else {
            return self.clone();
        };
        let mut out = vec![Rational::zero(); deg];
        let mut carry = Rational::zero();
        for k in (1..=deg).rev() {
            carry = &self.coeffs[k] + carry * r;
            out[k - 1] = carry.clone();
        }
        Polynomial::new(out)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) - rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn falling_factorial() {
        // (x)_3 = x(x-1)(x-2) = x^3 - 3x^2 + 2x
        let p = Polynomial::falling(&int(0), &int(1), 3);
        assert_eq!(p.coeffs(), [int(0), int(2), int(-3), int(1)]);
        assert_eq!(p.eval(&int(5)), int(60));
        assert_eq!(Polynomial::falling(&int(4), &int(0), 0).eval(&int(9)), int(1));
    }

    #[test]
    fn deflation_is_exact_at_roots() {
        let p = &Polynomial::linear(int(1), int(1)) * &Polynomial::linear(int(-3), int(2));
        let q = p.deflate(&int(-1));
        assert_eq!(q, Polynomial::linear(int(-3), int(2)));
        assert_eq!(q.eval(&ratio(3, 2)), int(0));
        assert_eq!(p.degree(), Some(2));
        assert_eq!((&p - &p).degree(), None);
    }
}
