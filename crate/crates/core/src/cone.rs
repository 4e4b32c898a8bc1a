//! Divergence of `‖∇T f‖²` for the cone family `l(u, t) = u·t^{1/2} + t`.
//!
//! The integral `∫_0^1 u² / (64 t^{5/4} (√t + u)^{5/2}) dt` is infinite. It
//! is never "computed": [`tail_integral`] returns the regularized integral
//! over `[ε, 1]`, which grows like `ε^{−1/4} / (16√u)` as `ε → 0`.

use crate::quad::{self, Tolerance};
use crate::{Error, Result};

pub const TAIL_REL_TOL: f64 = 1e-9;

/// A member of the deformation family; `u = 0` is the undeformed metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeFamily {
    u: f64,
}

impl ConeFamily {
    pub fn new(u: f64) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::NonPositive(format!("u = {u}")));
        }
        Ok(Self { u })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// Leading behaviour `ε^{−1/4} / (16√u)` of the tail.
    pub fn leading_tail(&self, eps: f64) -> f64 {
        eps.powf(-0.25) / (16.0 * self.u.sqrt())
    }

    fn eval(&self, t: f64) -> f64 {
        let u = self.u;
        u * u / (64.0 * t.powf(1.25) * (t.sqrt() + u).powf(2.5))
    }
}

/// `u² / (64 · t^{5/4} · (√t + u)^{5/2})`
pub fn integrand(u: f64, t: f64) -> Result<f64> {
    let fam = ConeFamily::new(u)?;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositive(format!("t = {t}")));
    }
    Ok(fam.eval(t))
}

/// `∫_ε^1` of [`integrand`], to relative accuracy `rel_tol`.
///
/// The initial partition is geometric from `ε` upward so the `t^{−5/4}`
/// singularity sits at the left end of a short first panel.
pub fn tail_integral_with_tol(u: f64, eps: f64, rel_tol: f64) -> Result<f64> {
    let fam = ConeFamily::new(u)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::NonPositive(format!("eps = {eps} outside (0, 1)")));
    }
    let mut points = vec![eps];
    let mut x = eps;
    while x * 4.0 < 1.0 {
        x *= 4.0;
        points.push(x);
    }
    points.push(1.0);
    let tol = Tolerance {
        rel: rel_tol,
        abs: 0.0,
        max_intervals: 20_000,
    };
    Ok(quad::integrate_with_breakpoints(|t| fam.eval(t), &points, tol)?.value)
}

pub fn tail_integral(u: f64, eps: f64) -> Result<f64> {
    tail_integral_with_tol(u, eps, TAIL_REL_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeRow {
    pub eps: f64,
    pub tail: f64,
    /// `tail · ε^{1/4} · 16√u`, which tends to 1.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeReport {
    pub u: f64,
    pub rows: Vec<ConeRow>,
    /// Least-squares slope of `log tail` against `log ε`.
    pub slope: f64,
}

/// Tails over an `ε` grid with the fitted log–log slope.
pub fn cone_report(u: f64, eps_grid: &[f64]) -> Result<ConeReport> {
    cone_report_with_tol(u, eps_grid, TAIL_REL_TOL)
}

pub fn cone_report_with_tol(u: f64, eps_grid: &[f64], rel_tol: f64) -> Result<ConeReport> {
    if eps_grid.len() < 2 {
        return Err(Error::EmptyGrid("need at least two eps values"));
    }
    let fam = ConeFamily::new(u)?;
    let rows = eps_grid
        .iter()
        .map(|&eps| {
            let tail = tail_integral_with_tol(u, eps, rel_tol)?;
            Ok(ConeRow {
                eps,
                tail,
                normalized: tail / fam.leading_tail(eps),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps.ln(), r.tail.ln())).collect();
    Ok(ConeReport {
        u,
        slope: least_squares_slope(&xy),
        rows,
    })
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `10^{−3}, 10^{−4}, …, 10^{−8}`
pub fn default_eps_grid() -> Vec<f64> {
    (3..=8).map(|k| 10f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrand_values() {
        let v = integrand(1.0, 1.0).unwrap();
        assert!((v - 1.0 / (64.0 * 2f64.powf(2.5))).abs() < 1e-18);
        assert!((v - 2.76214e-3).abs() < 1e-8);
        let q = integrand(1.0, 0.25).unwrap();
        let want = 1.0 / (64.0 * 0.25f64.powf(1.25) * 1.5f64.powf(2.5));
        assert!((q - want).abs() < 1e-15);
        assert!(integrand(0.0, 1.0).is_err());
        assert!(integrand(1.0, 0.0).is_err());
    }

    #[test]
    fn large_u_balance() {
        let t: f64 = 0.3;
        for u in [1e6, 1e8] {
            let ratio = integrand(u, t).unwrap() / (u.powf(-0.5) * t.powf(-1.25) / 64.0);
            assert!((ratio - 1.0).abs() < 5.0 * t.sqrt() / u);
        }
    }

    #[test]
    fn tail_grows_as_eps_shrinks() {
        let a = tail_integral(1.0, 1e-2).unwrap();
        let b = tail_integral(1.0, 1e-4).unwrap();
        assert!(b > a && a > 0.0);
        assert!(tail_integral(1.0, 1.0).is_err());
        assert!(tail_integral(1.0, 0.0).is_err());
    }

    #[test]
    fn tail_matches_high_precision_reference() {
        // reference values from 30-digit tanh-sinh quadrature
        let cases = [
            (1e-3, 0.209_339_542_102_001_6),
            (1e-8, 6.082_151_409_203_092),
        ];
        for (eps, want) in cases {
            let got = tail_integral(1.0, eps).unwrap();
            assert!(((got - want) / want).abs() < 1e-9, "{eps}: {got}");
        }
    }

    #[test]
    fn halving_tolerance_is_stable() {
        for eps in [1e-3, 1e-6, 1e-8] {
            let a = tail_integral_with_tol(1.0, eps, TAIL_REL_TOL).unwrap();
            let b = tail_integral_with_tol(1.0, eps, TAIL_REL_TOL / 2.0).unwrap();
            assert!(((a - b) / a).abs() < 1e-7);
        }
    }
}
