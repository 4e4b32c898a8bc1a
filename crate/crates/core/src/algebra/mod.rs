//! Exact coefficient arithmetic.
//!
//! Everything here is value-typed and immutable from the outside. Rationals
//! are arbitrary precision; polynomials in `ν` store dense coefficient
//! vectors; phase polynomials key their terms by exact integer exponent
//! vectors so that monomial identity never depends on floating angles.

mod angle;
mod cyclotomic;
mod nu_poly;
mod phase_poly;
mod rational;

pub use angle::{Angle, AngleUnit};
pub use cyclotomic::{CycloElem, CyclotomicField};
pub use nu_poly::NuPolynomial;
pub use phase_poly::{PhaseMonomial, PhasePolynomial};
pub use rational::{int, rat, rational_to_f64, Rational};
