use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::{Angle, CycloElem, CyclotomicField, NuPolynomial, Rational};
use crate::{Error, Result};

/// Laurent monomial `Π_j ζ_j^{e_j}` in the phase variables `ζ_j = e^{iφ_j}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseMonomial(pub Vec<i64>);

impl PhaseMonomial {
    pub fn unit(vars: usize) -> Self {
        Self(vec![0; vars])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().map(|e| -e).collect())
    }

    /// `e^{i Σ e_j φ_j}`
    pub fn eval(&self, angles: &[Angle]) -> Complex64 {
        let phase: f64 = self
            .0
            .iter()
            .zip(angles)
            .map(|(&e, a)| e as f64 * a.radians())
            .sum();
        Complex64::from_polar(1.0, phase)
    }

    /// Exponent of `ω_N` equal to this monomial when `ζ_j = ω_N^{shifts[j]}`.
    pub fn root_exponent(&self, shifts: &[i64]) -> i64 {
        self.0.iter().zip(shifts).map(|(e, s)| e * s).sum()
    }
}

impl fmt::Display for PhaseMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Finite sum `Σ ζ^e · p_e(ν)` over Laurent monomials in a fixed number of
/// phase variables. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasePolynomial {
    vars: usize,
    terms: BTreeMap<PhaseMonomial, NuPolynomial>,
}

impl PhasePolynomial {
    pub fn zero(vars: usize) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PhaseMonomial, NuPolynomial)>,
    {
        let mut out = Self::zero(vars);
        for (mono, poly) in terms {
            out.add_term(mono, &poly)?;
        }
        Ok(out)
    }

    /// Constant-in-phase polynomial.
    pub fn from_nu(vars: usize, poly: NuPolynomial) -> Self {
        let mut out = Self::zero(vars);
        if !poly.is_zero() {
            out.terms.insert(PhaseMonomial::unit(vars), poly);
        }
        out
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PhaseMonomial, &NuPolynomial)> {
        self.terms.iter()
    }

    pub fn get(&self, mono: &PhaseMonomial) -> Option<&NuPolynomial> {
        self.terms.get(mono)
    }

    fn check_len(&self, mono_len: usize) -> Result<()> {
        if mono_len != self.vars {
            return Err(Error::DimensionMismatch {
                expected: self.vars,
                actual: mono_len,
            });
        }
        Ok(())
    }

    /// Accumulates `ζ^mono · poly`, pruning the entry if it cancels.
    pub fn add_term(&mut self, mono: PhaseMonomial, poly: &NuPolynomial) -> Result<()> {
        self.check_len(mono.len())?;
        if poly.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let sum = &*existing + poly;
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mono, poly.clone());
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other.vars)?;
        let mut out = self.clone();
        for (mono, poly) in &other.terms {
            out.add_term(mono.clone(), poly)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.vars);
        for (mono, poly) in &self.terms {
            let p = poly.scale(c);
            if !p.is_zero() {
                out.terms.insert(mono.clone(), p);
            }
        }
        out
    }

    /// Monomial-wise convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_len(other.vars)?;
        let mut out = Self::zero(self.vars);
        for (ma, pa) in &self.terms {
            for (mb, pb) in &other.terms {
                let mono = PhaseMonomial(ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect());
                out.add_term(mono, &(pa * pb))?;
            }
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient polynomial.
    pub fn map_coeffs<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&NuPolynomial) -> NuPolynomial,
    {
        let mut out = Self::zero(self.vars);
        for (mono, poly) in &self.terms {
            let p = f(poly);
            if !p.is_zero() {
                out.terms.insert(mono.clone(), p);
            }
        }
        out
    }

    /// Largest `ν`-degree among the stored coefficients.
    pub fn max_nu_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(NuPolynomial::degree).max()
    }

    pub fn is_nu_free(&self) -> bool {
        self.terms.values().all(NuPolynomial::is_constant)
    }

    /// Replaces each monomial exponent vector `e` by `−e`.
    pub fn invert_phases(&self) -> Self {
        Self {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, p)| (m.inverse(), p.clone()))
                .collect(),
        }
    }

    /// Negates the exponents of phase variable `j` only.
    pub fn invert_phase_var(&self, j: usize) -> Self {
        Self {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, p)| {
                    let mut e = m.0.clone();
                    e[j] = -e[j];
                    (PhaseMonomial(e), p.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `ζ_j = e^{iφ_j}` and a numeric `ν`.
    pub fn numeric_eval(&self, angles: &[Angle], nu: f64) -> Result<Complex64> {
        self.check_len(angles.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(mono, poly)| mono.eval(angles) * poly.eval_f64(nu))
            .sum())
    }

    /// Substitutes `ζ_j = e^{iφ_j}` only, leaving complex coefficients of
    /// `ν^0, ν^1, …`.
    pub fn numeric_coeffs(&self, angles: &[Angle]) -> Result<Vec<Complex64>> {
        self.check_len(angles.len())?;
        let len = self.max_nu_degree().map_or(0, |d| d + 1);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for (mono, poly) in &self.terms {
            let phase = mono.eval(angles);
            for (i, c) in poly.coeffs().iter().enumerate() {
                out[i] += phase * super::rational_to_f64(c);
            }
        }
        Ok(out)
    }

    /// Exact substitution `ζ_j = ω_N^{shifts[j]}` of a `ν`-free value, with
    /// each coefficient polynomial first collapsed to a rational by `f`.
    pub fn cyclotomic_value<F>(
        &self,
        field: &std::sync::Arc<CyclotomicField>,
        shifts: &[i64],
        mut f: F,
    ) -> Result<CycloElem>
    where
        F: FnMut(&NuPolynomial) -> Rational,
    {
        self.check_len(shifts.len())?;
        let mut acc = CycloElem::zero(field);
        for (mono, poly) in &self.terms {
            acc.add_root_power(mono.root_exponent(shifts), &f(poly));
        }
        Ok(acc)
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (i, (mono, poly)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{mono}: {poly}")?;
        }
        write!(f, "}}")
    }
}
