use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::rational::{rational_to_f64, Rational};

/// The cyclotomic field `Q(ω_N) = Q[x]/Φ_N(x)`, `ω_N = e^{2πi/N}`.
///
/// Elements are stored in the power basis `1, x, …, x^{φ(N)−1}`, which makes
/// equality (and in particular zero-testing) exact and canonical.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: usize,
    // Φ_N, lowest degree first, monic.
    modulus: Vec<BigInt>,
    // reductions[j] = x^j mod Φ_N for 0 ≤ j < N
    reductions: Vec<Vec<Rational>>,
}

impl CyclotomicField {
    pub fn new(order: usize) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;

        let mut reductions = Vec::with_capacity(order);
        let mut current = vec![Rational::zero(); degree];
        current[0] = Rational::one();
        for _ in 0..order {
            reductions.push(current.clone());
            // multiply by x, then fold x^degree back using Φ_N
            let top = current[degree - 1].clone();
            let mut next = vec![Rational::zero(); degree];
            next[1..degree].clone_from_slice(&current[..degree - 1]);
            if !top.is_zero() {
                for (c, m) in next.iter_mut().zip(&modulus) {
                    *c -= &top * Rational::from_integer(m.clone());
                }
            }
            current = next;
        }

        Arc::new(Self {
            order,
            modulus,
            reductions,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ(N)`, the field degree over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn reduce_power(&self, e: i64) -> &[Rational] {
        &self.reductions[e.rem_euclid(self.order as i64) as usize]
    }
}

/// `Φ_N(x) = Π_{d | N} (x^d − 1)^{μ(N/d)}`.
fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut poly = vec![BigInt::one()];
    let mut divide_by = Vec::new();
    for &d in &divisors {
        match moebius(n / d) {
            1 => {
                // poly *= x^d − 1
                let mut next = vec![BigInt::zero(); poly.len() + d];
                for (i, c) in poly.iter().enumerate() {
                    next[i + d] += c;
                    next[i] -= c;
                }
                poly = next;
            }
            -1 => divide_by.push(d),
            _ => {}
        }
    }
    for d in divide_by {
        // exact division by x^d − 1, from the top down
        let deg = poly.len() - 1;
        let mut quotient = vec![BigInt::zero(); deg + 1 - d];
        let mut rem = poly.clone();
        for i in (d..=deg).rev() {
            let c = rem[i].clone();
            quotient[i - d] = c.clone();
            rem[i] -= &c;
            rem[i - d] += &c;
        }
        debug_assert!(rem.iter().all(Zero::is_zero));
        poly = quotient;
    }
    poly
}

fn moebius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// An element of a [`CyclotomicField`].
#[derive(Debug, Clone)]
pub struct CycloElem {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl CycloElem {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self {
            field: Arc::clone(field),
            coeffs: vec![Rational::zero(); field.degree()],
        }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: Rational) -> Self {
        let mut out = Self::zero(field);
        out.coeffs[0] = r;
        out
    }

    /// `ω_N^e`
    pub fn root_power(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let mut out = Self::zero(field);
        out.add_root_power(e, &Rational::one());
        out
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `self += c · ω_N^e`
    pub fn add_root_power(&mut self, e: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let red = self.field.reduce_power(e);
        for (a, r) in self.coeffs.iter_mut().zip(red) {
            if !r.is_zero() {
                *a += c * r;
            }
        }
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "cyclotomic elements from different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        Self {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let mut out = Self::zero(&self.field);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.add_root_power((i + j) as i64, &(a * b));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n)
                    * rational_to_f64(c)
            })
            .sum()
    }

    /// Largest absolute coefficient in the power basis, as a double.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})*w{}^{j}", self.field.order)?,
            }
        }
        Ok(())
    }
}
