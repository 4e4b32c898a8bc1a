//! Elliptic and identity contributions `ME(τ(m))`, `MI(τ(m))` and the
//! heat-trace terms they come from.
//!
//! ```text
//! ME(τ(m)) = Σ_k Σ_γ (−1)^k vol(Γ_γ\G_γ) ∫_0^{λ_k} P^γ_{σ_k}(t) dt
//! MI(τ(m)) = vol(O) Σ_k (−1)^k ∫_0^{λ_k} P_{σ_k}(t) dt
//! ```
//!
//! The identity Plancherel polynomial `P_σ` is not built in. Unless the
//! caller supplies coefficients, `MI` uses the `d = n + 1` elliptic formula,
//! which is proportional to (not equal to) the true polynomial; results
//! computed that way carry [`Normalization::StandIn`].
//!
//! Neither the `O(e^{−cm})` remainders nor the hyperbolic contribution are
//! computed anywhere in this crate.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::{
    int, rational_to_f64, CycloElem, CyclotomicField, NuPolynomial, PhasePolynomial, Rational,
};
use crate::elliptic::{self, build_p_gamma, identity_p};
use crate::lie::{EllipticClass, RayConfig};
use crate::quad::{self, Tolerance};
use crate::{Error, Result};

/// A positive real given either exactly or as a double.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx(f64),
}

impl Real {
    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => rational_to_f64(r),
            Real::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(r) => Some(r),
            Real::Approx(_) => None,
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Real::Exact(r) => *r > Rational::zero(),
            Real::Approx(x) => *x > 0.0 && x.is_finite(),
        }
    }
}

/// Orbifold-level inputs: volume, elliptic classes and an optional true
/// Plancherel polynomial per `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbifoldData {
    n: usize,
    volume: Real,
    classes: Vec<EllipticClass>,
    plancherel: Option<Vec<NuPolynomial>>,
}

impl OrbifoldData {
    /// `plancherel[k]` lists the coefficients of `ν^0, ν^2, ν^4, …` for
    /// `P_{σ_{τ(m),k}}`; there must be `n + 1` lists.
    pub fn new(
        n: usize,
        volume: Real,
        classes: Vec<EllipticClass>,
        plancherel: Option<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        if !volume.is_positive() {
            return Err(Error::NonPositive("orbifold volume".into()));
        }
        for c in &classes {
            if c.d() > n || c.angles().len() != n + 1 - c.d() {
                return Err(Error::InvalidClass(format!(
                    "class with d = {} and {} angles does not fit n = {n}",
                    c.d(),
                    c.angles().len()
                )));
            }
        }
        let plancherel = plancherel
            .map(|lists| {
                if lists.len() != n + 1 {
                    return Err(Error::PlancherelArity {
                        expected: n + 1,
                        actual: lists.len(),
                    });
                }
                Ok(lists
                    .into_iter()
                    .map(|even| {
                        let mut coeffs = vec![Rational::zero(); 2 * even.len()];
                        for (i, c) in even.into_iter().enumerate() {
                            coeffs[2 * i] = c;
                        }
                        NuPolynomial::from_coeffs(coeffs)
                    })
                    .collect())
            })
            .transpose()?;
        Ok(Self {
            n,
            volume,
            classes,
            plancherel,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn volume(&self) -> &Real {
        &self.volume
    }

    pub fn classes(&self) -> &[EllipticClass] {
        &self.classes
    }

    pub fn plancherel(&self) -> Option<&[NuPolynomial]> {
        self.plancherel.as_deref()
    }

    /// Least common multiple of all class periods (1 without classes).
    pub fn period(&self) -> usize {
        self.classes
            .iter()
            .fold(1i64, |acc, c| acc.lcm(&c.period())) as usize
    }

    /// `Q(ω_q)` with `q` = [`OrbifoldData::period`]; every exact value for
    /// this orbifold lives there.
    pub fn field(&self) -> Arc<CyclotomicField> {
        CyclotomicField::new(self.period())
    }

    /// The largest block count among the classes.
    pub fn max_d(&self) -> Option<usize> {
        self.classes.iter().map(EllipticClass::d).max()
    }

    fn check_ray(&self, cfg: &RayConfig) -> Result<()> {
        if cfg.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: cfg.n(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Exact arithmetic in `Q(ω_q)`.
    #[default]
    Exact,
    /// Phases substituted in double precision.
    Float,
}

/// A computed quantity: always a complex double, plus the exact value in the
/// orbifold's cyclotomic field when computed in [`Mode::Exact`].
#[derive(Debug, Clone, PartialEq)]
pub struct Value {
    pub approx: Complex64,
    pub exact: Option<CycloElem>,
}

impl Value {
    fn from_exact(e: CycloElem) -> Self {
        Self {
            approx: e.to_complex(),
            exact: Some(e),
        }
    }

    fn from_approx(approx: Complex64) -> Self {
        Self {
            approx,
            exact: None,
        }
    }

    /// The exact value when it is a rational number.
    pub fn exact_rational(&self) -> Option<Rational> {
        self.exact.as_ref().and_then(CycloElem::as_rational)
    }

    pub fn add(&self, other: &Value) -> Value {
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        Value {
            approx: self.approx + other.approx,
            exact,
        }
    }

    pub fn half(&self) -> Value {
        let half = Rational::new(1.into(), 2.into());
        Value {
            approx: self.approx / 2.0,
            exact: self.exact.as_ref().map(|e| e.scale(&half)),
        }
    }
}

/// Whether an `MI`-derived value used the built-in stand-in polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    StandIn,
    Plancherel,
}

impl Normalization {
    pub fn label(&self) -> &'static str {
        match self {
            Normalization::StandIn => "stand-in normalization",
            Normalization::Plancherel => "user plancherel",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub value: Value,
    pub normalization: Normalization,
}

/// `∫_0^λ p(t) dt`.
pub fn integral_zero_to_lambda(p: &NuPolynomial, lam: i64) -> Result<Rational> {
    if lam < 0 {
        return Err(Error::NegativeBound(lam));
    }
    Ok(p.integral_from_zero(&int(lam)))
}

/// Term-wise `∫_0^λ` of a phase polynomial; the result is `ν`-free.
pub fn integral_phase_zero_to_lambda(p: &PhasePolynomial, lam: i64) -> Result<PhasePolynomial> {
    if lam < 0 {
        return Err(Error::NegativeBound(lam));
    }
    let x = int(lam);
    Ok(p.map_coeffs(|c| NuPolynomial::constant(c.integral_from_zero(&x))))
}

/// `ζ_j = ω_N^{shift_j}` for the class angles.
fn class_shifts(cls: &EllipticClass, order: usize) -> Vec<i64> {
    cls.angles()
        .iter()
        .map(|a| {
            let (num, den) = a.turns();
            num * (order as i64 / den)
        })
        .collect()
}

/// `P^γ_{σ_k}` for every `k`, shared across classes with the same `d`.
struct EllipticCache<'a> {
    cfg: &'a RayConfig,
    by_d: HashMap<usize, Vec<PhasePolynomial>>,
}

impl<'a> EllipticCache<'a> {
    fn new(cfg: &'a RayConfig) -> Self {
        Self {
            cfg,
            by_d: HashMap::new(),
        }
    }

    fn get(&mut self, cls: &EllipticClass) -> Result<&[PhasePolynomial]> {
        if !self.by_d.contains_key(&cls.d()) {
            let polys = (0..=self.cfg.n())
                .map(|k| build_p_gamma(self.cfg, k, cls).map(|p| p.value))
                .collect::<Result<Vec<_>>>()?;
            self.by_d.insert(cls.d(), polys);
        }
        Ok(&self.by_d[&cls.d()])
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `ME(τ(m))`. Expected to be (nearly) real.
pub fn me(cfg: &RayConfig, orb: &OrbifoldData, mode: Mode) -> Result<Value> {
    orb.check_ray(cfg)?;
    let lams = cfg.lambdas();
    let mut cache = EllipticCache::new(cfg);
    match mode {
        Mode::Exact => {
            let field = orb.field();
            let mut acc = CycloElem::zero(&field);
            for cls in orb.classes() {
                let shifts = class_shifts(cls, field.order());
                let polys = cache.get(cls)?;
                for (k, p) in polys.iter().enumerate() {
                    let weight = cls.weight() * int(sign(k));
                    let x = int(lams[k]);
                    let v = p.cyclotomic_value(&field, &shifts, |c| c.integral_from_zero(&x))?;
                    acc = acc.add(&v.scale(&weight));
                }
            }
            Ok(Value::from_exact(acc))
        }
        Mode::Float => {
            let mut acc = Complex64::zero();
            for cls in orb.classes() {
                let polys = cache.get(cls)?;
                let w = rational_to_f64(cls.weight());
                for (k, p) in polys.iter().enumerate() {
                    let integrated = integral_phase_zero_to_lambda(p, lams[k])?;
                    acc += integrated.numeric_eval(cls.angles(), 0.0)? * w * sign(k) as f64;
                }
            }
            Ok(Value::from_approx(acc))
        }
    }
}

/// The (`ν`-free) alternating sum `Σ_k (−1)^k P^γ_k` at the class angles,
/// exactly in `field`, which must contain every class root of unity.
pub fn alternating_sum_at(
    cfg: &RayConfig,
    cls: &EllipticClass,
    field: &Arc<CyclotomicField>,
) -> Result<CycloElem> {
    let shifts = class_shifts(cls, field.order());
    elliptic::alternating_sum(cfg, cls)?.cyclotomic_value(field, &shifts, |c| c.constant_term())
}

/// `P_{σ_k}` for each `k`: user coefficients when given, else the stand-in.
pub fn identity_polynomials(
    cfg: &RayConfig,
    orb: &OrbifoldData,
) -> Result<(Vec<NuPolynomial>, Normalization)> {
    orb.check_ray(cfg)?;
    match orb.plancherel() {
        Some(p) => Ok((p.to_vec(), Normalization::Plancherel)),
        None => Ok((
            (0..=cfg.n())
                .map(|k| identity_p(cfg, k))
                .collect::<Result<_>>()?,
            Normalization::StandIn,
        )),
    }
}

/// `MI(τ(m))`, scaled by the orbifold volume.
pub fn mi_standin(cfg: &RayConfig, orb: &OrbifoldData, mode: Mode) -> Result<Normalized> {
    let (polys, normalization) = identity_polynomials(cfg, orb)?;
    let lams = cfg.lambdas();
    let mut sum = Rational::zero();
    for (k, p) in polys.iter().enumerate() {
        sum += integral_zero_to_lambda(p, lams[k])? * int(sign(k));
    }
    let value = match (mode, orb.volume()) {
        (Mode::Exact, Real::Exact(vol)) => {
            Value::from_exact(CycloElem::from_rational(&orb.field(), sum * vol))
        }
        (Mode::Exact, Real::Approx(_)) => {
            return Err(Error::Inexact("exact mode needs a rational volume"))
        }
        (Mode::Float, vol) => {
            Value::from_approx(Complex64::new(rational_to_f64(&sum) * vol.to_f64(), 0.0))
        }
    };
    Ok(Normalized {
        value,
        normalization,
    })
}

/// `log T^{(2)}(τ(m)) = MI / 2`.
pub fn log_t2(cfg: &RayConfig, orb: &OrbifoldData, mode: Mode) -> Result<Normalized> {
    let mi = mi_standin(cfg, orb, mode)?;
    Ok(Normalized {
        value: mi.value.half(),
        normalization: mi.normalization,
    })
}

/// `(MI + ME) / 2`: `log T(τ(m))` without the `O(e^{−cm})` remainder, which
/// is not computed.
pub fn log_t_approx(cfg: &RayConfig, orb: &OrbifoldData, mode: Mode) -> Result<Normalized> {
    let mi = mi_standin(cfg, orb, mode)?;
    let e = me(cfg, orb, mode)?;
    Ok(Normalized {
        value: mi.value.add(&e).half(),
        normalization: mi.normalization,
    })
}

/// `∫_R e^{−tλ²} λ^{2i} dλ = (2i−1)!! / (2t)^i · √(π/t)`.
pub fn gaussian_moment(i: usize, t: f64) -> f64 {
    let double_factorial: f64 = (1..=i).map(|j| (2 * j - 1) as f64).product();
    double_factorial / (2.0 * t).powi(i as i32) * (std::f64::consts::PI / t).sqrt()
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::NonPositive(format!("t = {t}")));
    }
    Ok(())
}

/// `∫_R e^{−tλ²} P(iλ) dλ` for complex coefficients of `ν^0, ν^1, …`, via
/// Gaussian moments (odd powers integrate to zero).
fn gaussian_transform(coeffs: &[Complex64], t: f64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .step_by(2)
        .map(|(j, c)| {
            let i = j / 2;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            c * sign * gaussian_moment(i, t)
        })
        .sum()
}

/// The same integral by adaptive quadrature of `e^{−tλ²} P(iλ)` over both
/// half-lines, with `P(iλ)` evaluated by complex Horner.
fn gaussian_transform_quadrature(coeffs: &[Complex64], t: f64) -> Result<Complex64> {
    let p_at = |lam: f64| -> Complex64 {
        let z = Complex64::new(0.0, lam);
        coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c)
    };
    let tol = Tolerance {
        rel: 1e-13,
        abs: 1e-300,
        max_intervals: 8000,
    };
    let mut out = Complex64::zero();
    for dir in [1.0, -1.0] {
        let re = quad::integrate_to_infinity(|x| (-t * x * x).exp() * p_at(dir * x).re, 0.0, tol)?;
        let im = quad::integrate_to_infinity(|x| (-t * x * x).exp() * p_at(dir * x).im, 0.0, tol)?;
        out += Complex64::new(re.value, im.value);
    }
    Ok(out)
}

fn real_coeffs(p: &NuPolynomial) -> Vec<Complex64> {
    p.coeffs()
        .iter()
        .map(|c| Complex64::new(rational_to_f64(c), 0.0))
        .collect()
}

/// Which route evaluates the Gaussian integrals in the heat traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatMethod {
    ClosedForm,
    Quadrature,
}

fn transform(coeffs: &[Complex64], t: f64, method: HeatMethod) -> Result<Complex64> {
    match method {
        HeatMethod::ClosedForm => Ok(gaussian_transform(coeffs, t)),
        HeatMethod::Quadrature => gaussian_transform_quadrature(coeffs, t),
    }
}

/// Per-`k` summands `2 (−1)^{k+1} e^{−tλ_k²} ∫_R e^{−tλ²} P_k(iλ) dλ` of the
/// identity heat trace, without the volume factor.
pub fn heat_trace_i_terms(
    cfg: &RayConfig,
    orb: &OrbifoldData,
    t: f64,
    method: HeatMethod,
) -> Result<Vec<f64>> {
    check_t(t)?;
    let (polys, _) = identity_polynomials(cfg, orb)?;
    let lams = cfg.lambdas();
    polys
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let g = transform(&real_coeffs(p), t, method)?;
            let lk = lams[k] as f64;
            Ok(-2.0 * sign(k) as f64 * (-t * lk * lk).exp() * g.re)
        })
        .collect()
}

/// `I(t, τ(m)) = 2 vol(O) Σ_k (−1)^{k+1} e^{−tλ_k²} ∫_R e^{−tλ²} P_k(iλ) dλ`.
pub fn heat_trace_i(cfg: &RayConfig, orb: &OrbifoldData, t: f64) -> Result<f64> {
    heat_trace_i_with(cfg, orb, t, HeatMethod::ClosedForm)
}

pub fn heat_trace_i_with(
    cfg: &RayConfig,
    orb: &OrbifoldData,
    t: f64,
    method: HeatMethod,
) -> Result<f64> {
    let terms = heat_trace_i_terms(cfg, orb, t, method)?;
    Ok(orb.volume().to_f64() * terms.iter().sum::<f64>())
}

/// Per-(class, `k`) summands of the elliptic heat trace, class weight
/// included.
pub fn heat_trace_e_terms(
    cfg: &RayConfig,
    orb: &OrbifoldData,
    t: f64,
    method: HeatMethod,
) -> Result<Vec<Complex64>> {
    check_t(t)?;
    orb.check_ray(cfg)?;
    let lams = cfg.lambdas();
    let mut cache = EllipticCache::new(cfg);
    let mut out = Vec::new();
    for cls in orb.classes() {
        let w = rational_to_f64(cls.weight());
        let polys = cache.get(cls)?;
        for (k, p) in polys.iter().enumerate() {
            let coeffs = p.numeric_coeffs(cls.angles())?;
            let g = transform(&coeffs, t, method)?;
            let lk = lams[k] as f64;
            out.push(g * (-2.0 * sign(k) as f64 * w * (-t * lk * lk).exp()));
        }
    }
    Ok(out)
}

/// `E(t, τ(m)) = 2 Σ_γ vol(Γ_γ\G_γ) Σ_k (−1)^{k+1} e^{−tλ_k²} ∫_R e^{−tλ²} P^γ_k(iλ) dλ`.
pub fn heat_trace_e(cfg: &RayConfig, orb: &OrbifoldData, t: f64) -> Result<Complex64> {
    heat_trace_e_with(cfg, orb, t, HeatMethod::ClosedForm)
}

pub fn heat_trace_e_with(
    cfg: &RayConfig,
    orb: &OrbifoldData,
    t: f64,
    method: HeatMethod,
) -> Result<Complex64> {
    Ok(heat_trace_e_terms(cfg, orb, t, method)?.into_iter().sum())
}

/// Both sides of the split
/// `Σ_k (−1)^k ∫_0^{λ_k} P_k = ∫_0^{λ_n} Σ_k (−1)^k P_k + Σ_k (−1)^k ∫_{λ_n}^{λ_k} P_k`,
/// kept symbolic in the phases.
#[derive(Debug, Clone, PartialEq)]
pub struct Telescoping {
    pub lhs: PhasePolynomial,
    pub head: PhasePolynomial,
    pub tail: PhasePolynomial,
    /// `λ_n` times the (`ν`-free) alternating sum.
    pub head_closed_form: PhasePolynomial,
}

impl Telescoping {
    pub fn holds(&self) -> bool {
        self.head.add(&self.tail).is_ok_and(|s| s == self.lhs) && self.head == self.head_closed_form
    }
}

pub fn telescoping(cfg: &RayConfig, d: usize) -> Result<Telescoping> {
    let n = cfg.n();
    let vars = n + 1 - d;
    let lams = cfg.lambdas();
    let lam_n = lams[n];
    let alt = elliptic::alternating_sum_d(cfg, d)?;
    let mut lhs = PhasePolynomial::zero(vars);
    let mut alt_poly = PhasePolynomial::zero(vars);
    let mut tail = PhasePolynomial::zero(vars);
    for (k, &lam_k) in lams.iter().enumerate() {
        let w = crate::lie::sigma_weight_plus_rho_ints(cfg, k)?;
        let p = elliptic::weyl_sum(&w, d, crate::lie::weyl_cap())?.scale(&int(sign(k)));
        lhs = lhs.add(&integral_phase_zero_to_lambda(&p, lam_k)?)?;
        alt_poly = alt_poly.add(&p)?;
        let upper = int(lam_k);
        let lower = int(lam_n);
        tail = tail.add(&p.map_coeffs(|c| {
            NuPolynomial::constant(c.integral_from_zero(&upper) - c.integral_from_zero(&lower))
        }))?;
    }
    let head = integral_phase_zero_to_lambda(&alt_poly, lam_n)?;
    Ok(Telescoping {
        lhs,
        head,
        tail,
        head_closed_form: alt.scale(&int(lam_n)),
    })
}

/// One normalized growth sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub m: i64,
    pub value: f64,
}

/// A normalized sequence `quantity(m) / m^exponent` over an `m` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pub exponent: f64,
    pub rows: Vec<GrowthRow>,
}

/// Boundedness read-out of a [`GrowthTable`] around a split point `m₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthVerdict {
    pub max_before: f64,
    pub argmax_before: i64,
    pub max_after: f64,
    pub argmax_after: i64,
    /// `1.1 ×` the maximum before the split.
    pub threshold: f64,
    /// Every value at or after the split stays under the threshold.
    pub bounded: bool,
}

impl GrowthTable {
    pub fn assess(&self, split: i64) -> Option<GrowthVerdict> {
        let pick = |before: bool| {
            self.rows.iter().filter(|r| (r.m < split) == before).fold(
                None,
                |best: Option<GrowthRow>, r| match best {
                    Some(b) if b.value >= r.value => Some(b),
                    _ => Some(*r),
                },
            )
        };
        let before = pick(true)?;
        let after = pick(false)?;
        let threshold = 1.1 * before.value;
        Some(GrowthVerdict {
            max_before: before.value,
            argmax_before: before.m,
            max_after: after.value,
            argmax_after: after.m,
            threshold,
            bounded: after.value <= threshold,
        })
    }
}

fn check_m_grid(m_grid: &[i64]) -> Result<()> {
    if m_grid.is_empty() {
        return Err(Error::EmptyGrid("m grid"));
    }
    if m_grid.iter().any(|&m| m < 1) {
        return Err(Error::NonPositive("normalized growth needs m >= 1".into()));
    }
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRay("m grid must be increasing".into()));
    }
    Ok(())
}

/// `max_{k,i} |a^γ_{k,i}(m)| / m^{2(d−1) + d(d−1)/2}` for each grid `m`.
pub fn growth_check_lemma53(
    base: &RayConfig,
    cls: &EllipticClass,
    m_grid: &[i64],
) -> Result<GrowthTable> {
    check_m_grid(m_grid)?;
    let d = cls.d();
    let exponent = (2 * (d - 1) + d * (d - 1) / 2) as f64;
    let rows = m_grid
        .iter()
        .map(|&m| {
            let cfg = base.with_m(m)?;
            let mut worst = 0.0f64;
            for k in 0..=cfg.n() {
                for a in elliptic::coefficient_table(&cfg, k, cls)? {
                    worst = worst.max(a.norm());
                }
            }
            Ok(GrowthRow {
                m,
                value: worst / (m as f64).powf(exponent),
            })
        })
        .collect::<Result<_>>()?;
    Ok(GrowthTable { exponent, rows })
}

/// `max_{k, ν} |P^γ_k(ν)| / m^{d(d−1)/2}` with `ν` running over
/// `λ_n + f·(λ_k − λ_n)` for each fraction `f ∈ [0, 1]` in `nu_fracs`.
pub fn growth_check_lemma54(
    base: &RayConfig,
    cls: &EllipticClass,
    m_grid: &[i64],
    nu_fracs: &[f64],
) -> Result<GrowthTable> {
    check_m_grid(m_grid)?;
    if nu_fracs.is_empty() {
        return Err(Error::EmptyGrid("nu grid"));
    }
    if nu_fracs.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(Error::InvalidRay("nu fractions must lie in [0, 1]".into()));
    }
    let d = cls.d();
    let exponent = (d * (d - 1) / 2) as f64;
    let rows = m_grid
        .iter()
        .map(|&m| {
            let cfg = base.with_m(m)?;
            let lams = cfg.lambdas();
            let lam_n = lams[cfg.n()] as f64;
            let mut worst = 0.0f64;
            for (k, &lam_k) in lams.iter().enumerate() {
                let p = build_p_gamma(&cfg, k, cls)?.value;
                let span = lam_k as f64 - lam_n;
                for f in nu_fracs {
                    let v = p.numeric_eval(cls.angles(), lam_n + f * span)?;
                    worst = worst.max(v.norm());
                }
            }
            Ok(GrowthRow {
                m,
                value: worst / (m as f64).powf(exponent),
            })
        })
        .collect::<Result<_>>()?;
    Ok(GrowthTable { exponent, rows })
}

/// Evenly spaced fractions `0, 1/j, …, 1`, both interval ends included.
pub fn default_nu_fracs(points: usize) -> Vec<f64> {
    let j = points.max(2) - 1;
    (0..=j).map(|i| i as f64 / j as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Angle};

    fn cfg(m: i64) -> RayConfig {
        RayConfig::trivial(2, m).unwrap()
    }

    fn pinned_orbifold() -> OrbifoldData {
        let cls = EllipticClass::new(2, 2, vec![Angle::two_pi(1, 4).unwrap()], int(1)).unwrap();
        OrbifoldData::new(2, Real::Exact(int(1)), vec![cls], None).unwrap()
    }

    #[test]
    fn integrals() {
        let p = NuPolynomial::from_i64(&[-2, 0, -2]);
        assert_eq!(integral_zero_to_lambda(&p, 2).unwrap(), rat(-28, 3));
        assert_eq!(
            integral_zero_to_lambda(&NuPolynomial::one(), 7).unwrap(),
            int(7)
        );
        assert_eq!(
            integral_zero_to_lambda(&NuPolynomial::zero(), 7).unwrap(),
            int(0)
        );
        assert_eq!(integral_zero_to_lambda(&p, 0).unwrap(), int(0));
        assert_eq!(
            integral_zero_to_lambda(&p, -1),
            Err(Error::NegativeBound(-1))
        );
    }

    #[test]
    fn me_pinned_values() {
        let orb = pinned_orbifold();
        assert_eq!(
            me(&cfg(0), &orb, Mode::Exact).unwrap().exact_rational(),
            Some(int(0))
        );
        assert_eq!(
            me(&cfg(1), &orb, Mode::Exact).unwrap().exact_rational(),
            Some(rat(-16, 3))
        );
        let f = me(&cfg(1), &orb, Mode::Float).unwrap();
        assert!((f.approx - Complex64::new(-16.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!(f.exact.is_none());
    }

    #[test]
    fn me_without_classes_is_zero() {
        let orb = OrbifoldData::new(2, Real::Exact(int(1)), vec![], None).unwrap();
        for m in 0..4 {
            assert!(me(&cfg(m), &orb, Mode::Exact)
                .unwrap()
                .exact
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn mi_with_zero_plancherel() {
        let zero = vec![vec![int(0)]; 3];
        let orb = OrbifoldData::new(2, Real::Exact(int(3)), vec![], Some(zero)).unwrap();
        let mi = mi_standin(&cfg(4), &orb, Mode::Exact).unwrap();
        assert_eq!(mi.value.exact_rational(), Some(int(0)));
        assert_eq!(mi.normalization, Normalization::Plancherel);
        assert!(matches!(
            OrbifoldData::new(2, Real::Exact(int(1)), vec![], Some(vec![vec![]; 2])),
            Err(Error::PlancherelArity {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn mi_standin_matches_direct_antiderivatives() {
        // P_k = 4(ν²+a²)(ν²+b²)(a²−b²) with (a, b) the λ-list minus λ_k
        let orb = pinned_orbifold();
        let c = cfg(0);
        let lams = c.lambdas();
        let mut want = Rational::zero();
        for k in 0..3usize {
            let ab: Vec<i64> = lams
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, &l)| l)
                .collect();
            let (a2, b2) = (int(ab[0] * ab[0]), int(ab[1] * ab[1]));
            let x = int(lams[k]);
            // ∫_0^x 4(a²−b²)(t⁴ + (a²+b²)t² + a²b²) dt
            let x3 = &x * &x * &x;
            let x5 = &x3 * &x * &x;
            let val =
                int(4) * (&a2 - &b2) * (x5 / int(5) + (&a2 + &b2) * x3 / int(3) + &a2 * &b2 * &x);
            want += val * int(sign(k));
        }
        let got = mi_standin(&c, &orb, Mode::Exact).unwrap();
        assert_eq!(got.value.exact_rational(), Some(want));
        assert_eq!(got.normalization, Normalization::StandIn);
    }

    #[test]
    fn log_t_consistency() {
        let orb = pinned_orbifold();
        for m in 0..5 {
            let c = cfg(m);
            let t2 = log_t2(&c, &orb, Mode::Exact).unwrap().value.exact.unwrap();
            let t = log_t_approx(&c, &orb, Mode::Exact)
                .unwrap()
                .value
                .exact
                .unwrap();
            let e = me(&c, &orb, Mode::Exact).unwrap().exact.unwrap();
            assert_eq!(t.sub(&t2), e.scale(&rat(1, 2)));
        }
    }

    #[test]
    fn inexact_volume_needs_float_mode() {
        let orb = OrbifoldData::new(2, Real::Approx(0.5), vec![], None).unwrap();
        assert!(matches!(
            mi_standin(&cfg(0), &orb, Mode::Exact),
            Err(Error::Inexact(_))
        ));
        assert!(mi_standin(&cfg(0), &orb, Mode::Float).is_ok());
        assert!(OrbifoldData::new(2, Real::Approx(-1.0), vec![], None).is_err());
    }

    #[test]
    fn gaussian_moments() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gaussian_moment(0, 1.0) - sqrt_pi).abs() < 1e-15);
        assert!((gaussian_moment(1, 1.0) - sqrt_pi / 2.0).abs() < 1e-15);
        assert!(
            (gaussian_moment(2, 0.5) - 3.0 * (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-13
        );
    }

    #[test]
    fn heat_trace_d1_class() {
        // d = 1: P constant in ν, so ∫ e^{−tλ²} c dλ = c √(π/t)
        let angles = vec![Angle::two_pi(1, 3).unwrap(), Angle::two_pi(1, 5).unwrap()];
        let cls = EllipticClass::new(2, 1, angles.clone(), rat(1, 2)).unwrap();
        let orb = OrbifoldData::new(2, Real::Exact(int(1)), vec![cls.clone()], None).unwrap();
        let c = cfg(2);
        let t = 0.7;
        let mut want = Complex64::zero();
        for (k, lk) in c.lambdas().into_iter().enumerate() {
            let p = build_p_gamma(&c, k, &cls).unwrap().value;
            let ck = p.numeric_eval(&angles, 0.0).unwrap();
            let lk = lk as f64;
            want += ck
                * 2.0
                * 0.5
                * -(sign(k) as f64)
                * (-t * lk * lk).exp()
                * (std::f64::consts::PI / t).sqrt();
        }
        let got = heat_trace_e(&c, &orb, t).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm());
        assert!(heat_trace_e(&c, &orb, 0.0).is_err());
    }

    #[test]
    fn telescoping_split() {
        for m in 0..4 {
            for d in 1..=3 {
                assert!(telescoping(&cfg(m), d).unwrap().holds(), "m={m} d={d}");
            }
        }
    }

    #[test]
    fn growth_verdict() {
        let t = GrowthTable {
            exponent: 1.0,
            rows: vec![
                GrowthRow { m: 1, value: 2.0 },
                GrowthRow { m: 2, value: 3.0 },
                GrowthRow { m: 3, value: 3.2 },
                GrowthRow { m: 4, value: 1.0 },
            ],
        };
        let v = t.assess(3).unwrap();
        assert_eq!((v.argmax_before, v.argmax_after), (2, 3));
        assert!(v.bounded);
        assert!(!t.assess(2).unwrap().bounded);
        assert!(growth_check_lemma53(&cfg(0), &pinned_orbifold().classes()[0], &[]).is_err());
        assert!(
            growth_check_lemma54(&cfg(0), &pinned_orbifold().classes()[0], &[1, 2], &[]).is_err()
        );
    }
}
