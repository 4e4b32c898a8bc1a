//! The elliptic trace-formula polynomials `P_σ^γ(ν)`.
//!
//! With `Λ + ρ_M = v_2 e_2 + … + v_{n+1} e_{n+1}` and `d` identity blocks in
//! the elliptic element,
//!
//! ```text
//! A(Λ, ν) = Π_{2≤j≤d} (−ν² − v_j²) · Π_{2≤i<j≤d} (v_i² − v_j²)
//! B(Λ)    = e^{−i(v_{d+1} φ_{d+1} + … + v_{n+1} φ_{n+1})}
//! P_σ^γ(ν) = Σ_{s ∈ W(D_n)} det(s) · A(s(Λ+ρ_M), ν) · B(s(Λ+ρ_M))
//! ```
//!
//! `B` is kept symbolic as a Laurent monomial in `ζ_j = e^{iφ_j}`, so every
//! result here is exact. Taking `d = n + 1` (no phase slots) gives the
//! identity-element stand-in.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::algebra::{int, NuPolynomial, PhaseMonomial, PhasePolynomial, Rational};
use crate::lie::{self, weyl_cap, EllipticClass, RayConfig, WeightVector};
use crate::{Error, Result};

/// `P^γ_{σ_{τ(m),k}}` together with the indices it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticPolynomial {
    pub value: PhasePolynomial,
    pub d: usize,
    pub k: usize,
    pub m: i64,
}

fn check_d(n: usize, d: usize) -> Result<()> {
    if d < 1 || d > n + 1 {
        return Err(Error::IndexOutOfRange {
            index: d as i64,
            max: n as i64 + 1,
        });
    }
    Ok(())
}

/// `A(Λ, ν)` for `Λ = w`, reading slots `e_2 … e_d`.
pub fn a_factor(w: &WeightVector, d: usize) -> Result<NuPolynomial> {
    check_d(w.len(), d)?;
    let squares: Vec<Rational> = w.coords()[..d - 1].iter().map(|v| v * v).collect();
    Ok(a_from_squares(&squares))
}

fn a_from_squares(squares: &[Rational]) -> NuPolynomial {
    let mut poly = NuPolynomial::one();
    for sq in squares {
        poly = poly * NuPolynomial::neg_nu_sq_minus(sq.clone());
    }
    let mut vandermonde = Rational::one();
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i + 1..] {
            vandermonde *= a - b;
        }
    }
    poly.scale(&vandermonde)
}

/// Exponents of `B(Λ)` in the `ζ_j` convention: `(−v_{d+1}, …, −v_{n+1})`.
pub fn b_monomial(w: &WeightVector, d: usize) -> Result<PhaseMonomial> {
    check_d(w.len(), d)?;
    let tail = WeightVector::new(w.coords()[d - 1..].to_vec()).to_ints()?;
    Ok(PhaseMonomial(tail.into_iter().map(|v| -v).collect()))
}

/// `Σ_{s∈W} det(s) A(s·w, d) B(s·w, d)` for an integral weight `w`.
///
/// Weyl elements are first bucketed by the pair (`A`-slots, `B`-exponents)
/// with integer multiplicities, so the exact polynomial algebra runs once per
/// distinct bucket rather than once per group element.
pub fn weyl_sum(w: &[i64], d: usize, cap: usize) -> Result<PhasePolynomial> {
    let n = w.len();
    check_d(n, d)?;
    let group = lie::enumerate_weyl_d(n, cap)?;

    let mut buckets: HashMap<(Vec<i64>, Vec<i64>), i64> = HashMap::new();
    let mut image = vec![0i64; n];
    for s in group {
        s.apply_ints(w, &mut image);
        // A only sees the squares of the first d−1 slots
        let a_key: Vec<i64> = image[..d - 1].iter().map(|v| v * v).collect();
        let b_key: Vec<i64> = image[d - 1..].iter().map(|v| -v).collect();
        *buckets.entry((a_key, b_key)).or_insert(0) += i64::from(s.det());
    }

    let mut a_cache: HashMap<Vec<i64>, NuPolynomial> = HashMap::new();
    let mut keys: Vec<_> = buckets.into_iter().filter(|(_, c)| *c != 0).collect();
    keys.sort();
    let mut out = PhasePolynomial::zero(n + 1 - d);
    for ((a_key, b_key), count) in keys {
        let a = a_cache
            .entry(a_key)
            .or_insert_with_key(|k| a_from_squares(&k.iter().map(|&s| int(s)).collect::<Vec<_>>()));
        out.add_term(PhaseMonomial(b_key), &a.scale(&int(count)))?;
    }
    Ok(out)
}

fn p_gamma_d(cfg: &RayConfig, k: usize, d: usize) -> Result<PhasePolynomial> {
    check_d(cfg.n(), d)?;
    let w = lie::sigma_weight_plus_rho_ints(cfg, k)?;
    weyl_sum(&w, d, weyl_cap())
}

/// `P^γ_{σ_{τ(m),k}}(ν)` as an exact phase polynomial.
pub fn build_p_gamma(cfg: &RayConfig, k: usize, cls: &EllipticClass) -> Result<EllipticPolynomial> {
    let value = p_gamma_d(cfg, k, cls.d())?;
    debug_assert!(value
        .terms()
        .all(|(_, p)| p.is_even() && p.degree().is_none_or(|deg| deg <= 2 * (cls.d() - 1))));
    Ok(EllipticPolynomial {
        value,
        d: cls.d(),
        k,
        m: cfg.m(),
    })
}

/// Identity-case polynomial `P_{σ_{τ(m),k}}` stand-in (`d = n + 1`), a pure
/// polynomial in `ν`.
pub fn identity_p(cfg: &RayConfig, k: usize) -> Result<NuPolynomial> {
    let p = p_gamma_d(cfg, k, cfg.n() + 1)?;
    Ok(p.get(&PhaseMonomial::unit(0))
        .cloned()
        .unwrap_or_else(NuPolynomial::zero))
}

/// `Σ_k (−1)^k P^γ_{σ_{τ(m),k}}` for `d` identity blocks, checked to be free
/// of `ν`.
pub fn alternating_sum_d(cfg: &RayConfig, d: usize) -> Result<PhasePolynomial> {
    check_d(cfg.n(), d)?;
    let mut acc = PhasePolynomial::zero(cfg.n() + 1 - d);
    for k in 0..=cfg.n() {
        let p = p_gamma_d(cfg, k, d)?;
        acc = if k % 2 == 0 {
            acc.add(&p)?
        } else {
            acc.sub(&p)?
        };
    }
    if let Some((mono, poly)) = acc.terms().find(|(_, p)| !p.is_constant()) {
        return Err(Error::LemmaViolation(format!(
            "{cfg}, d={d}: coefficient of {mono} is {poly}"
        )));
    }
    Ok(acc)
}

pub fn alternating_sum(cfg: &RayConfig, cls: &EllipticClass) -> Result<PhasePolynomial> {
    alternating_sum_d(cfg, cls.d())
}

/// The `d = n + 1` alternating sum: a single rational constant.
pub fn identity_alternating_sum(cfg: &RayConfig) -> Result<Rational> {
    let s = alternating_sum_d(cfg, cfg.n() + 1)?;
    Ok(s.get(&PhaseMonomial::unit(0))
        .map(NuPolynomial::constant_term)
        .unwrap_or_else(Rational::zero))
}

/// Coefficients `a^γ_{k,i}(m)` of `ν^{2i}` after substituting the class
/// angles into the phases.
pub fn coefficient_table(cfg: &RayConfig, k: usize, cls: &EllipticClass) -> Result<Vec<Complex64>> {
    let p = build_p_gamma(cfg, k, cls)?;
    let all = p.value.numeric_coeffs(cls.angles())?;
    Ok(all.into_iter().step_by(2).collect())
}

/// Outcome of [`eqfora_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqForA {
    /// Number of points `ν = ±iλ_j`, `j ≠ κ`, at which `A` vanished.
    pub zeros_verified: usize,
    /// `A(Λ_κ, ±iλ_κ)`.
    pub value: Rational,
    /// `Π_{i<j}(λ_i² − λ_j²)` over `K` ordered by decreasing `λ`.
    pub vandermonde: Rational,
    /// `(−1)^p` with `p` the position of `κ` in that ordering.
    pub sign: i8,
}

/// Checks the root placement of `A(Λ_κ, ν)` where `Λ_κ` fills the `d − 1`
/// non-phase slots with `K \ {κ}` (`d = |K|`).
///
/// `A` must vanish at `ν = ±iλ_j` for every `j ≠ κ`, and at `±iλ_κ` it must
/// equal `(−1)^p · Π_{i<j}(λ_i² − λ_j²)`. A failure of either is reported as
/// [`Error::LemmaViolation`].
pub fn eqfora_check(lams: &[i64], kappa: i64) -> Result<EqForA> {
    let mut sorted = lams.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Duplicate(w[0]));
    }
    let p = sorted
        .iter()
        .position(|&l| l == kappa)
        .ok_or_else(|| Error::InvalidRay(format!("kappa = {kappa} is not an element of K")))?;
    let rest: Vec<Rational> = sorted
        .iter()
        .filter(|&&l| l != kappa)
        .map(|&l| int(l * l))
        .collect();
    let a = a_from_squares(&rest);

    let mut zeros = 0;
    for &l in sorted.iter().filter(|&&l| l != kappa) {
        for lam in [int(l), int(-l)] {
            let v = a.eval_at_imag(&lam)?;
            if !v.is_zero() {
                return Err(Error::LemmaViolation(format!(
                    "A(Lambda_kappa, {lam}i) = {v}, expected 0"
                )));
            }
            zeros += 1;
        }
    }

    let value = a.eval_at_imag(&int(kappa))?;
    if value != a.eval_at_imag(&int(-kappa))? {
        return Err(Error::LemmaViolation("A differs at +i and -i".into()));
    }
    let squares: Vec<Rational> = sorted.iter().map(|&l| int(l * l)).collect();
    let mut vandermonde = Rational::one();
    for (i, x) in squares.iter().enumerate() {
        for y in &squares[i + 1..] {
            vandermonde *= x - y;
        }
    }
    let sign: i8 = if p % 2 == 0 { 1 } else { -1 };
    if value != &vandermonde * int(sign.into()) {
        return Err(Error::LemmaViolation(format!(
            "A(Lambda_kappa, {kappa}i) = {value}, expected {sign} * {vandermonde}"
        )));
    }
    Ok(EqForA {
        zeros_verified: zeros,
        value,
        vandermonde,
        sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Angle;

    fn cfg(n: usize, tau: &[i64], m: i64) -> RayConfig {
        RayConfig::new(n, tau.to_vec(), m).unwrap()
    }

    fn quarter(n: usize, d: usize) -> EllipticClass {
        let angles = (0..n + 1 - d)
            .map(|j| Angle::two_pi(1, 4 + j as i64).unwrap())
            .collect();
        EllipticClass::new(n, d, angles, int(1)).unwrap()
    }

    fn term(vars: &[(i64, &[i64])]) -> PhasePolynomial {
        PhasePolynomial::from_terms(
            1,
            vars.iter()
                .map(|(e, c)| (PhaseMonomial(vec![*e]), NuPolynomial::from_i64(c))),
        )
        .unwrap()
    }

    #[test]
    fn a_factor_examples() {
        let w = WeightVector::from_ints(&[5, 3]);
        assert_eq!(a_factor(&w, 1).unwrap(), NuPolynomial::one());
        assert_eq!(
            a_factor(&w, 2).unwrap(),
            NuPolynomial::from_i64(&[-25, 0, -1])
        );
        // (−ν²−25)(−ν²−9)·16
        assert_eq!(
            a_factor(&w, 3).unwrap(),
            NuPolynomial::from_i64(&[3600, 0, 544, 0, 16])
        );
        assert!(a_factor(&w, 4).is_err());
        assert!(a_factor(&w, 0).is_err());
    }

    #[test]
    fn b_monomial_examples() {
        let w = WeightVector::from_ints(&[5, 3]);
        assert_eq!(b_monomial(&w, 2).unwrap(), PhaseMonomial(vec![-3]));
        assert_eq!(b_monomial(&w, 1).unwrap(), PhaseMonomial(vec![-5, -3]));
        assert!(b_monomial(&w, 3).unwrap().is_empty());
        let half = WeightVector::new(vec![int(1), crate::algebra::rat(1, 2)]);
        assert!(matches!(
            b_monomial(&half, 1),
            Err(Error::NonIntegralWeight(_))
        ));
        assert!(b_monomial(&half, 3).is_ok());
    }

    #[test]
    fn p_gamma_examples() {
        let c = cfg(2, &[0, 0, 0], 0);
        let p2 = build_p_gamma(&c, 2, &quarter(2, 2)).unwrap();
        // (−ν²−4)(ζ⁻¹+ζ) − (−ν²−1)(ζ⁻²+ζ²)
        let want = term(&[
            (-1, &[-4, 0, -1]),
            (1, &[-4, 0, -1]),
            (-2, &[1, 0, 1]),
            (2, &[1, 0, 1]),
        ]);
        assert_eq!(p2.value, want);
        assert_eq!((p2.d, p2.k, p2.m), (2, 2, 0));

        let p0 = build_p_gamma(&c, 0, &quarter(2, 2)).unwrap();
        let want = term(&[(0, &[-2, 0, -2]), (1, &[0, 0, 1]), (-1, &[0, 0, 1])]);
        assert_eq!(p0.value, want);

        for k in 0..=2 {
            let p = build_p_gamma(&cfg(2, &[1, 0, 0], 3), k, &quarter(2, 1)).unwrap();
            assert!(p.value.is_nu_free());
        }
    }

    #[test]
    fn alternating_sum_examples() {
        let s0 = alternating_sum(&cfg(2, &[0, 0, 0], 0), &quarter(2, 2)).unwrap();
        assert_eq!(
            s0,
            term(&[(0, &[6]), (1, &[-4]), (-1, &[-4]), (2, &[1]), (-2, &[1])])
        );
        let s1 = alternating_sum(&cfg(2, &[0, 0, 0], 1), &quarter(2, 2)).unwrap();
        assert_eq!(
            s1,
            term(&[
                (1, &[5]),
                (-1, &[5]),
                (2, &[-8]),
                (-2, &[-8]),
                (3, &[3]),
                (-3, &[3])
            ])
        );
        assert!(alternating_sum(&cfg(3, &[2, 1, 0, 0], 2), &quarter(3, 1))
            .unwrap()
            .is_nu_free());
    }

    #[test]
    fn identity_sums() {
        assert_eq!(
            identity_alternating_sum(&cfg(2, &[0, 0, 0], 0)).unwrap(),
            int(48)
        );
        assert_eq!(
            identity_alternating_sum(&cfg(2, &[0, 0, 0], 1)).unwrap(),
            int(480)
        );
        // n = 1: (−ν²−λ_1²) − (−ν²−λ_0²) = λ_0² − λ_1²
        assert_eq!(
            identity_alternating_sum(&cfg(1, &[0, 0], 3)).unwrap(),
            int(16 - 9)
        );
    }

    #[test]
    fn coefficient_table_examples() {
        let c = cfg(2, &[0, 0, 0], 0);
        let a = coefficient_table(&c, 2, &quarter(2, 2)).unwrap();
        assert_eq!(a.len(), 2);
        // ζ = i: (−ν²−4)(i − i) − (−ν²−1)(−1 − 1) = −2ν² − 2
        assert!((a[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        assert!((a[1] - Complex64::new(-2.0, 0.0)).norm() < 1e-12);

        let one = coefficient_table(&c, 1, &quarter(2, 1)).unwrap();
        assert!(one.len() <= 1);
    }

    #[test]
    fn eqfora_examples() {
        let r = eqfora_check(&[2, 1], 2).unwrap();
        assert_eq!(r.zeros_verified, 2);
        assert_eq!(r.value, int(3));
        let r = eqfora_check(&[3, 2, 1], 3).unwrap();
        assert_eq!(r.value, int(120));
        assert_eq!(r.vandermonde, int(120));
        let r = eqfora_check(&[3, 2, 1], 2).unwrap();
        assert_eq!((r.value, r.sign, r.zeros_verified), (int(-120), -1, 4));
        assert_eq!(eqfora_check(&[2, 2, 1], 2), Err(Error::Duplicate(2)));
        assert!(eqfora_check(&[2, 1], 5).is_err());
    }
}
