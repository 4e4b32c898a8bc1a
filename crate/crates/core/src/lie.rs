//! Root data and highest-weight bookkeeping for `G = Spin(1,2n+1)` and
//! `M = Spin(2n)`.
//!
//! Weights of `M` are written in the basis `e_2, …, e_{n+1}`; the `e_1`
//! direction carries the continuous parameter `ν` and is never stored here.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{int, Angle, Rational};
use crate::{Error, Result};

/// Default largest rank for which `W(D_n)` may be enumerated
/// (`2^7 · 8! ≈ 5.2·10^6` elements).
pub const DEFAULT_WEYL_CAP: usize = 8;

/// Environment variable overriding [`DEFAULT_WEYL_CAP`].
pub const WEYL_CAP_ENV: &str = "TORSION_WEYL_CAP";

/// The active Weyl rank cap: `TORSION_WEYL_CAP` if set and parseable,
/// otherwise [`DEFAULT_WEYL_CAP`].
pub fn weyl_cap() -> usize {
    std::env::var(WEYL_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_WEYL_CAP)
}

/// A point `τ(m)` on the ray through the base highest weight `τ`.
///
/// The representation of `G` has highest weight `(τ_1+m, …, τ_{n+1}+m)`;
/// only the base weight must be dominant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RayConfig {
    n: usize,
    tau: Vec<i64>,
    m: i64,
}

impl RayConfig {
    pub fn new(n: usize, tau: Vec<i64>, m: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidRay("n must be at least 1".into()));
        }
        if tau.len() != n + 1 {
            return Err(Error::InvalidRay(format!(
                "tau must have n+1 = {} entries, got {}",
                n + 1,
                tau.len()
            )));
        }
        if tau.iter().any(|&t| t < 0) {
            return Err(Error::InvalidRay("tau entries must be non-negative".into()));
        }
        if tau.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidRay("tau not non-increasing".into()));
        }
        if m < 0 {
            return Err(Error::InvalidRay("m must be non-negative".into()));
        }
        Ok(Self { n, tau, m })
    }

    /// The trivial base weight `τ = 0`.
    pub fn trivial(n: usize, m: i64) -> Result<Self> {
        Self::new(n, vec![0; n + 1], m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> &[i64] {
        &self.tau
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Same base weight, different ray parameter.
    pub fn with_m(&self, m: i64) -> Result<Self> {
        Self::new(self.n, self.tau.clone(), m)
    }

    /// `λ_0 > λ_1 > … > λ_n`.
    pub fn lambdas(&self) -> Vec<i64> {
        (0..=self.n).map(|k| self.lambda_unchecked(k)).collect()
    }

    fn lambda_unchecked(&self, k: usize) -> i64 {
        self.m + self.tau[k] + (self.n - k) as i64
    }
}

impl fmt::Display for RayConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} tau={:?} m={}", self.n, self.tau, self.m)
    }
}

/// Rational coordinates on `e_2, …, e_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    coords: Vec<Rational>,
}

impl WeightVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Integer coordinates, or an error naming the first non-integral entry.
    pub fn to_ints(&self) -> Result<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if !c.is_integer() {
                    return Err(Error::NonIntegralWeight(c.to_string()));
                }
                i64::try_from(c.to_integer()).map_err(|_| Error::NonIntegralWeight(c.to_string()))
            })
            .collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `ρ_M = Σ_{j=2}^{n+1} (n+1−j) e_j`.
pub fn rho_m(n: usize) -> Result<WeightVector> {
    if n < 1 {
        return Err(Error::InvalidRay("n must be at least 1".into()));
    }
    let coords: Vec<i64> = (0..n as i64).rev().collect();
    Ok(WeightVector::from_ints(&coords))
}

/// `λ_{τ(m),k} = m + τ_{k+1} + n − k`.
pub fn lambda_tau_k(cfg: &RayConfig, k: usize) -> Result<i64> {
    check_k(cfg, k)?;
    Ok(cfg.lambda_unchecked(k))
}

fn check_k(cfg: &RayConfig, k: usize) -> Result<()> {
    if k > cfg.n {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            max: cfg.n as i64,
        });
    }
    Ok(())
}

/// `Λ(σ_{τ(m),k}) + ρ_M`: the list `λ_0, …, λ_n` with `λ_k` removed.
pub fn sigma_weight_plus_rho(cfg: &RayConfig, k: usize) -> Result<WeightVector> {
    Ok(WeightVector::from_ints(&sigma_weight_plus_rho_ints(
        cfg, k,
    )?))
}

pub(crate) fn sigma_weight_plus_rho_ints(cfg: &RayConfig, k: usize) -> Result<Vec<i64>> {
    check_k(cfg, k)?;
    Ok((0..=cfg.n)
        .filter(|&j| j != k)
        .map(|j| cfg.lambda_unchecked(j))
        .collect())
}

/// An element of `W(D_n)`: a permutation composed with an even number of
/// sign changes.
///
/// Acting on a weight, slot `perm[i]` of the result receives
/// `signs[perm[i]] · w[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
    det: i8,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        if signs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidRay(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidRay("signs must be ±1".into()));
        }
        if signs.iter().filter(|&&s| s == -1).count() % 2 != 0 {
            return Err(Error::InvalidRay("odd number of sign changes".into()));
        }
        let det = permutation_sign(&perm);
        Ok(Self { perm, signs, det })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
            det: 1,
        }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `sign(perm) · Π signs`, which equals `sign(perm)` since the number of
    /// sign changes is even.
    pub fn det(&self) -> i8 {
        self.det
    }

    /// `self ∘ other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.rank();
        let inv = self.inverse_perm();
        let perm = (0..n).map(|i| self.perm[other.perm[i]]).collect();
        let signs = (0..n)
            .map(|k| self.signs[k] * other.signs[inv[k]])
            .collect();
        Self {
            perm,
            signs,
            det: self.det * other.det,
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let inv = self.inverse_perm();
        // s⁻¹ moves slot j back to inv[j]; the sign travels with the entry.
        let signs = (0..n).map(|k| self.signs[self.perm[k]]).collect();
        Self {
            perm: inv,
            signs,
            det: self.det,
        }
    }

    fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.rank()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    pub(crate) fn apply_ints(&self, w: &[i64], out: &mut [i64]) {
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = i64::from(self.signs[p]) * w[i];
        }
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut visited = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !visited[j] {
            visited[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// `s · w`: coordinate `j` of the result is `signs[j] · w[perm⁻¹(j)]`.
pub fn apply_weyl(s: &SignedPermutation, w: &WeightVector) -> Result<WeightVector> {
    if s.rank() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: s.rank(),
            actual: w.len(),
        });
    }
    let mut coords = vec![Rational::zero(); w.len()];
    for (i, &p) in s.perm.iter().enumerate() {
        let c = &w.coords[i];
        coords[p] = if s.signs[p] < 0 { -c } else { c.clone() };
    }
    Ok(WeightVector::new(coords))
}

/// Lazily enumerates `W(D_n)`: permutations in lexicographic order, each
/// combined with every even sign pattern.
#[derive(Debug, Clone)]
pub struct WeylGroupD {
    n: usize,
    perm: Option<Vec<usize>>,
    det: i8,
    mask: u32,
}

impl WeylGroupD {
    /// `2^{n−1} · n!`
    pub fn order(&self) -> u64 {
        (1..=self.n as u64).product::<u64>() << (self.n - 1)
    }

    fn advance_perm(&mut self) {
        let Some(p) = self.perm.as_mut() else { return };
        // next lexicographic permutation
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            self.perm = None;
            return;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        self.det = permutation_sign(p);
    }
}

impl Iterator for WeylGroupD {
    type Item = SignedPermutation;

    fn next(&mut self) -> Option<SignedPermutation> {
        loop {
            let perm = self.perm.as_ref()?;
            if self.mask >= 1 << self.n {
                self.mask = 0;
                self.advance_perm();
                continue;
            }
            let mask = self.mask;
            self.mask += 1;
            if !mask.count_ones().is_multiple_of(2) {
                continue;
            }
            let signs = (0..self.n)
                .map(|b| if mask >> b & 1 == 1 { -1 } else { 1 })
                .collect();
            return Some(SignedPermutation {
                perm: perm.clone(),
                signs,
                det: self.det,
            });
        }
    }
}

/// All of `W(D_n)`, refusing ranks above `cap`.
pub fn enumerate_weyl_d(n: usize, cap: usize) -> Result<WeylGroupD> {
    if n < 1 {
        return Err(Error::InvalidRay("n must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::WeylCapExceeded { rank: n, cap });
    }
    Ok(WeylGroupD {
        n,
        perm: Some((0..n).collect()),
        det: 1,
        mask: 0,
    })
}

/// Dimension of the `G`-representation `τ(m)`, from the Weyl dimension
/// formula over `Δ⁺(g) = {e_i ± e_j : 1 ≤ i < j ≤ n+1}`.
pub fn weyl_dim(cfg: &RayConfig) -> BigInt {
    let rank = cfg.n + 1;
    let rho: Vec<i64> = (0..rank as i64).rev().collect();
    let shifted: Vec<i64> = cfg
        .tau
        .iter()
        .zip(&rho)
        .map(|(t, r)| t + cfg.m + r)
        .collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..rank {
        for j in i + 1..rank {
            num *= (shifted[i] - shifted[j]) * (shifted[i] + shifted[j]);
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j]);
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// A conjugacy class of elliptic elements: `d` identity blocks followed by
/// rotations through the distinct nonzero angles `φ_{d+1}, …, φ_{n+1}`.
///
/// `weight` stands for the centralizer volume `vol(Γ_γ\G_γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticClass {
    d: usize,
    angles: Vec<Angle>,
    weight: Rational,
}

impl EllipticClass {
    pub fn new(n: usize, d: usize, angles: Vec<Angle>, weight: Rational) -> Result<Self> {
        if d < 1 || d > n {
            return Err(Error::InvalidClass(format!("d = {d} outside 1..={n}")));
        }
        if angles.len() != n + 1 - d {
            return Err(Error::InvalidClass(format!(
                "expected n+1-d = {} angles, got {}",
                n + 1 - d,
                angles.len()
            )));
        }
        if angles.iter().any(Angle::is_zero_mod_two_pi) {
            return Err(Error::InvalidClass("angle is 0 mod 2pi".into()));
        }
        for (i, a) in angles.iter().enumerate() {
            if angles[..i].iter().any(|b| a.congruent(b)) {
                return Err(Error::InvalidClass("angles must be distinct".into()));
            }
        }
        if weight <= Rational::zero() {
            return Err(Error::InvalidClass("weight must be positive".into()));
        }
        Ok(Self { d, angles, weight })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    /// Least common multiple of the angle periods; `e^{imφ_j}` is periodic
    /// in `m` with this period for every `j`.
    pub fn period(&self) -> i64 {
        self.angles.iter().fold(1, |acc, a| acc.lcm(&a.period()))
    }

    /// Dimension `2d − 1` of the fixed-point set in `H^{2n+1}`.
    pub fn stratum_dim(&self) -> usize {
        2 * self.d - 1
    }
}
