//! Exact engine for the elliptic and identity contributions to the
//! analytic-torsion asymptotics of compact odd-dimensional hyperbolic
//! orbifolds `Γ\H^{2n+1}` along rays of representations `τ(m)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`lie`]: root data of `Spin(1,2n+1)` / `Spin(2n)`, the Weyl group
//!   `W(D_n)` and the Weyl dimension formula.
//! * [`algebra`]: exact rationals, even polynomials in `ν`, Laurent phase
//!   polynomials and cyclotomic fields for root-of-unity substitution.
//! * [`elliptic`]: the polynomials `P_σ^γ(ν)` and their alternating sums.
//! * [`torsion`]: `ME`, the identity stand-in for `MI`, heat-trace closed
//!   forms and growth tables.
//! * [`pseudo`]: pseudopolynomial degree detection by finite differences.
//! * [`quad`] and [`cone`]: adaptive quadrature and the cone-metric
//!   divergence demonstration.

pub mod algebra;
pub mod cone;
pub mod elliptic;
mod error;
pub mod lie;
pub mod pseudo;
pub mod quad;
pub mod torsion;

pub use error::{Error, Result};
