//! Pseudopolynomial structure of sequences in `m`.
//!
//! A pseudopolynomial `Σ C_j m^j e^{imφ_j}` with every `φ_j ∈ 2πZ/q` is an
//! honest polynomial on each residue class `m ≡ r (mod q)`. Degrees are found
//! with forward differences: exactly for exact values, against a scaled
//! tolerance for floating ones.

use num_complex::Complex64;
use num_traits::Zero;

use crate::algebra::{int, rational_to_f64, CycloElem, Rational};
use crate::{Error, Result};

/// Values whose finite differences can be taken and tested for vanishing.
pub trait SequenceValue: Clone {
    fn difference(&self, earlier: &Self) -> Self;

    /// `self / c`
    fn divide(&self, c: &Rational) -> Self;

    /// Exact values ignore `tol`; floating values compare `|x|` against
    /// `tol · scale`.
    fn negligible(&self, tol: f64, scale: f64) -> bool;

    fn to_complex(&self) -> Complex64;

    /// Exact rendering when one exists.
    fn exact_string(&self) -> Option<String> {
        None
    }
}

impl SequenceValue for Rational {
    fn difference(&self, earlier: &Self) -> Self {
        self - earlier
    }

    fn divide(&self, c: &Rational) -> Self {
        self / c
    }

    fn negligible(&self, _tol: f64, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn exact_string(&self) -> Option<String> {
        Some(self.to_string())
    }
}

impl SequenceValue for CycloElem {
    fn difference(&self, earlier: &Self) -> Self {
        self.sub(earlier)
    }

    fn divide(&self, c: &Rational) -> Self {
        self.scale(&c.recip())
    }

    fn negligible(&self, _tol: f64, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_complex(&self) -> Complex64 {
        CycloElem::to_complex(self)
    }

    fn exact_string(&self) -> Option<String> {
        Some(self.to_string())
    }
}

impl SequenceValue for Complex64 {
    fn difference(&self, earlier: &Self) -> Self {
        self - earlier
    }

    fn divide(&self, c: &Rational) -> Self {
        self / rational_to_f64(c)
    }

    fn negligible(&self, tol: f64, scale: f64) -> bool {
        self.norm() <= tol * scale.max(f64::MIN_POSITIVE)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl SequenceValue for f64 {
    fn difference(&self, earlier: &Self) -> Self {
        self - earlier
    }

    fn divide(&self, c: &Rational) -> Self {
        self / rational_to_f64(c)
    }

    fn negligible(&self, tol: f64, scale: f64) -> bool {
        self.abs() <= tol * scale.max(f64::MIN_POSITIVE)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

/// Forward differences `Δ^0 f(0), Δ^1 f(0), …` down to a single value.
pub fn forward_differences<V: SequenceValue>(values: &[V]) -> Vec<Vec<V>> {
    let mut rows = vec![values.to_vec()];
    while rows.last().is_some_and(|r| r.len() > 1) {
        let last = rows.last().unwrap();
        let next = last.windows(2).map(|w| w[1].difference(&w[0])).collect();
        rows.push(next);
    }
    rows
}

/// Polynomial fit of one residue class `m = r, r+q, r+2q, …`.
#[derive(Debug, Clone)]
pub struct ResidueFit<V> {
    pub residue: usize,
    pub samples: usize,
    /// `None` when no degree up to `samples − 2` explains the data.
    pub degree: Option<usize>,
    /// `Δ^i f(r)` for `i ≤ degree` (step `q`): Newton coefficients.
    pub newton: Vec<V>,
    /// Leading coefficient as a polynomial in `m`.
    pub leading: Option<V>,
}

impl<V: SequenceValue> ResidueFit<V> {
    /// Value of the fitted polynomial at sample index `j` (`m = r + q·j`).
    pub fn eval_index(&self, j: usize) -> Complex64 {
        let mut binom = 1.0;
        let mut acc = Complex64::zero();
        for (i, c) in self.newton.iter().enumerate() {
            if i > 0 {
                binom *= (j as f64 - (i as f64 - 1.0)) / i as f64;
            }
            acc += c.to_complex() * binom;
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct PseudoPolyReport<V> {
    pub q: usize,
    pub residues: Vec<ResidueFit<V>>,
}

impl<V> PseudoPolyReport<V> {
    /// Largest residue degree; `None` if some class was not polynomial.
    pub fn global_degree(&self) -> Option<usize> {
        self.residues
            .iter()
            .map(|r| r.degree)
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn degrees(&self) -> Vec<Option<usize>> {
        self.residues.iter().map(|r| r.degree).collect()
    }
}

/// Splits `values[m]`, `m = 0..=M`, into residue classes mod `q` and finds
/// the degree of each.
///
/// Every class needs at least `max_degree + 2` samples so that a degree up
/// to `max_degree` can be both fitted and confirmed.
pub fn pseudopoly_extract<V: SequenceValue>(
    values: &[V],
    q: usize,
    max_degree: usize,
    tol: f64,
) -> Result<PseudoPolyReport<V>> {
    if q == 0 {
        return Err(Error::NonPositive("q = 0".into()));
    }
    let need = max_degree + 2;
    // shared by all residue classes
    let scale = values
        .iter()
        .map(|v| v.to_complex().norm())
        .fold(0.0, f64::max);
    let mut residues = Vec::with_capacity(q);
    for r in 0..q {
        let class: Vec<V> = values.iter().skip(r).step_by(q).cloned().collect();
        if class.len() < need {
            return Err(Error::InsufficientSamples {
                residue: r,
                have: class.len(),
                need,
            });
        }
        let diffs = forward_differences(&class);
        // degree D when every (D+1)-th difference vanishes
        let degree = (0..class.len() - 1).find(|&d| {
            let order = d + 1;
            let bound = scale * 2f64.powi(order as i32);
            diffs[order].iter().all(|v| v.negligible(tol, bound))
        });
        let newton: Vec<V> = match degree {
            Some(d) => diffs[..=d].iter().map(|row| row[0].clone()).collect(),
            None => Vec::new(),
        };
        let leading = degree.map(|d| {
            let factorial: Rational = (1..=d as i64).map(int).product();
            let step = int(q as i64);
            let q_pow: Rational = std::iter::repeat_n(step, d).product();
            newton[d].divide(&(factorial * q_pow))
        });
        residues.push(ResidueFit {
            residue: r,
            samples: class.len(),
            degree,
            newton,
            leading,
        });
    }
    Ok(PseudoPolyReport { q, residues })
}
