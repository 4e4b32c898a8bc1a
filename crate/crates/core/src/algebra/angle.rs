use std::fmt;

use num_integer::Integer;

use crate::{Error, Result};

/// Unit in which an angle fraction `p/q` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AngleUnit {
    /// angle = 2π·p/q
    #[default]
    TwoPi,
    /// angle = π·p/q
    Pi,
}

/// A rational multiple of π, stored as the reduced fraction the caller gave
/// together with the unit it is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    num: i64,
    den: i64,
    unit: AngleUnit,
}

impl Angle {
    pub fn new(num: i64, den: i64, unit: AngleUnit) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidClass("angle denominator is zero".into()));
        }
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Self {
            num: sign * num / g,
            den: sign * den / g,
            unit,
        })
    }

    pub fn two_pi(num: i64, den: i64) -> Result<Self> {
        Self::new(num, den, AngleUnit::TwoPi)
    }

    pub fn pi(num: i64, den: i64) -> Result<Self> {
        Self::new(num, den, AngleUnit::Pi)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn unit(&self) -> AngleUnit {
        self.unit
    }

    /// The angle as a reduced fraction `(a, b)` of a full turn with
    /// `0 ≤ a < b`.
    pub fn turns(&self) -> (i64, i64) {
        let (n, d) = match self.unit {
            AngleUnit::TwoPi => (self.num, self.den),
            AngleUnit::Pi => (self.num, 2 * self.den),
        };
        let g = n.gcd(&d);
        let (n, d) = (n / g, d / g);
        (n.rem_euclid(d), d)
    }

    /// Denominator of [`Angle::turns`]: the period in `m` of `e^{imφ}`.
    pub fn period(&self) -> i64 {
        self.turns().1
    }

    pub fn is_zero_mod_two_pi(&self) -> bool {
        self.turns().0 == 0
    }

    /// Same point on the circle.
    pub fn congruent(&self, other: &Angle) -> bool {
        self.turns() == other.turns()
    }

    pub fn radians(&self) -> f64 {
        let (n, d) = self.turns();
        std::f64::consts::TAU * (n as f64) / (d as f64)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.unit {
            AngleUnit::TwoPi => write!(f, "2pi*{}/{}", self.num, self.den),
            AngleUnit::Pi => write!(f, "pi*{}/{}", self.num, self.den),
        }
    }
}
