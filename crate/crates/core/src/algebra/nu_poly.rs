use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{rational_to_f64, Rational};
use crate::{Error, Result};

/// Dense univariate polynomial in `ν` with exact rational coefficients.
///
/// `coeffs[i]` is the coefficient of `ν^i`. The trailing coefficient is
/// nonzero unless the polynomial is zero, in which case `coeffs` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NuPolynomial {
    coeffs: Vec<Rational>,
}

impl NuPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · ν^degree`
    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| super::int(c)).collect())
    }

    /// `−ν² − v²`, the basic factor of the elliptic `A` polynomial.
    pub fn neg_nu_sq_minus(v_sq: Rational) -> Self {
        Self::from_coeffs(vec![-v_sq, Rational::zero(), -Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `ν^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True when the polynomial has no `ν` dependence (zero included).
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    /// Index of the first nonzero odd coefficient, if any.
    pub fn first_odd_term(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(i, c)| i % 2 == 1 && !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn is_even(&self) -> bool {
        self.first_odd_term().is_none()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    /// Value at `ν = ±iλ` for an even polynomial: `ν²` becomes `−λ²`.
    pub fn eval_at_imag(&self, lam: &Rational) -> Result<Rational> {
        if let Some(degree) = self.first_odd_term() {
            return Err(Error::NotEven { degree });
        }
        let minus_lam_sq = -(lam * lam);
        Ok(self
            .coeffs
            .iter()
            .step_by(2)
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &minus_lam_sq + c))
    }

    /// `∫_0^x p(t) dt`.
    pub fn integral_from_zero(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = (acc + c / Rational::from_integer((i as i64 + 1).into())) * x;
        }
        acc
    }

    /// Coefficients of `ν^{2i}`, i.e. the even part re-indexed by `i`.
    pub fn even_coeffs(&self) -> Vec<Rational> {
        self.coeffs.iter().step_by(2).cloned().collect()
    }
}

impl Add for &NuPolynomial {
    type Output = NuPolynomial;

    fn add(self, rhs: &NuPolynomial) -> NuPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        NuPolynomial::from_coeffs(coeffs)
    }
}

impl Sub for &NuPolynomial {
    type Output = NuPolynomial;

    fn sub(self, rhs: &NuPolynomial) -> NuPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &NuPolynomial {
    type Output = NuPolynomial;

    fn mul(self, rhs: &NuPolynomial) -> NuPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return NuPolynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        NuPolynomial::from_coeffs(coeffs)
    }
}

impl Neg for &NuPolynomial {
    type Output = NuPolynomial;

    fn neg(self) -> NuPolynomial {
        NuPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for NuPolynomial {
            type Output = NuPolynomial;
            fn $method(self, rhs: NuPolynomial) -> NuPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&NuPolynomial> for NuPolynomial {
            type Output = NuPolynomial;
            fn $method(self, rhs: &NuPolynomial) -> NuPolynomial {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for NuPolynomial {
    type Output = NuPolynomial;

    fn neg(self) -> NuPolynomial {
        -&self
    }
}

impl fmt::Display for NuPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "nu")?,
                (1, false) => write!(f, "{mag}*nu")?,
                (_, true) => write!(f, "nu^{i}")?,
                (_, false) => write!(f, "{mag}*nu^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> NuPolynomial {
        NuPolynomial::from_i64(c)
    }

    #[test]
    fn additive_inverse_is_zero() {
        let a = p(&[-25, 0, -1]);
        let b = p(&[25, 0, 1]);
        let s = &a + &b;
        assert!(s.is_zero());
        assert_eq!(s.degree(), None);
    }

    #[test]
    fn product_of_factors() {
        let prod = p(&[-4, 0, -1]) * p(&[-1, 0, -1]);
        assert_eq!(prod, p(&[4, 0, 5, 0, 1]));
        assert_eq!(prod.degree(), Some(4));
        assert_eq!(prod.to_string(), "nu^4 + 5*nu^2 + 4");
    }

    #[test]
    fn scaling() {
        let s = p(&[1, 0, 1]).scale(&rat(3, 2));
        assert_eq!(s.coeffs(), &[rat(3, 2), int(0), rat(3, 2)]);
        assert!(p(&[1, 2]).scale(&int(0)).is_zero());
    }

    #[test]
    fn imaginary_evaluation() {
        let a = p(&[-25, 0, -1]);
        assert_eq!(a.eval_at_imag(&int(5)).unwrap(), int(0));
        assert_eq!(a.eval_at_imag(&int(3)).unwrap(), int(-16));
        assert_eq!(a.eval_at_imag(&int(-3)).unwrap(), int(-16));
        assert_eq!(p(&[4, 0, 5, 0, 1]).eval_at_imag(&int(1)).unwrap(), int(0));
        assert_eq!(
            p(&[1, 1]).eval_at_imag(&int(1)),
            Err(Error::NotEven { degree: 1 })
        );
    }

    #[test]
    fn antiderivative() {
        assert_eq!(p(&[-2, 0, -2]).integral_from_zero(&int(2)), rat(-28, 3));
        assert_eq!(p(&[1]).integral_from_zero(&int(7)), int(7));
        assert_eq!(p(&[]).integral_from_zero(&int(7)), int(0));
        assert_eq!(p(&[3, 4]).integral_from_zero(&int(0)), int(0));
    }

    fn small_poly() -> impl Strategy<Value = NuPolynomial> {
        prop::collection::vec(-6i64..=6, 0..5).prop_map(|c| p(&c))
    }

    fn small_even_poly() -> impl Strategy<Value = NuPolynomial> {
        prop::collection::vec(-6i64..=6, 0..4).prop_map(|c| {
            let mut v = vec![0; 2 * c.len()];
            for (i, x) in c.into_iter().enumerate() {
                v[2 * i] = x;
            }
            p(&v)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
            }
            let s = &a + &b;
            prop_assert!(s.degree() <= a.degree().max(b.degree()));
        }

        #[test]
        fn imag_eval_is_multiplicative(a in small_even_poly(), b in small_even_poly(), lam in -9i64..=9) {
            let lam = int(lam);
            let lhs = (&a * &b).eval_at_imag(&lam).unwrap();
            let rhs = a.eval_at_imag(&lam).unwrap() * b.eval_at_imag(&lam).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
