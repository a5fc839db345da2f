//! Coefficient fields.
//!
//! Exact rationals are the reference semantics. `f64` is available for
//! tolerance-based demonstrations, and is the only mode in which the
//! transcendental primitives can be lifted to nilpotent arguments.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use crate::rational::Rational;

/// Elementary functions with hard-coded derivative towers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Exp,
    Sin,
    Cos,
    Log,
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Log => "log",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Elementary::Exp),
            "sin" => Some(Elementary::Sin),
            "cos" => Some(Elementary::Cos),
            "log" => Some(Elementary::Log),
            _ => None,
        }
    }
}

/// A field usable as the coefficient ring of Weil algebras.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// True when every operation is performed without rounding.
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    /// Magnitude used for residual reporting.
    fn magnitude(&self) -> f64;

    fn abs_value(&self) -> Self;

    /// Report encoding: `[num, den]` for exact values, a number otherwise.
    fn to_json(&self) -> serde_json::Value;

    /// Zero test under the given tolerance (ignored in exact mode).
    fn is_negligible(&self, tol: f64) -> bool;

    /// `order`-th derivative of `f` at `x`.
    fn elementary_derivative(f: Elementary, x: &Self, order: usize) -> Result<Self>;

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n)
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Rational::new(n, d)
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn to_json(&self) -> serde_json::Value {
        Rational::to_json(self)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn elementary_derivative(f: Elementary, _x: &Self, _order: usize) -> Result<Self> {
        Err(Error::NonPolynomialInExactMode(f.name().to_string()))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn elementary_derivative(f: Elementary, x: &Self, order: usize) -> Result<Self> {
        Ok(match f {
            Elementary::Exp => x.exp(),
            Elementary::Sin => match order % 4 {
                0 => x.sin(),
                1 => x.cos(),
                2 => -x.sin(),
                _ => -x.cos(),
            },
            Elementary::Cos => match order % 4 {
                0 => x.cos(),
                1 => -x.sin(),
                2 => -x.cos(),
                _ => x.sin(),
            },
            Elementary::Log => {
                if order == 0 {
                    x.ln()
                } else {
                    // d^k/dx^k log x = (-1)^(k-1) (k-1)! / x^k
                    let mut fact = 1.0;
                    for j in 1..order {
                        fact *= j as f64;
                    }
                    let sign = if order % 2 == 1 { 1.0 } else { -1.0 };
                    sign * fact / x.powi(order as i32)
                }
            }
        })
    }
}

/// Scalar mode selected at the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarMode {
    Rational,
    Float { tol: f64 },
}

impl ScalarMode {
    pub fn float(tol: f64) -> Result<Self> {
        if tol > 0.0 && tol.is_finite() {
            Ok(ScalarMode::Float { tol })
        } else {
            Err(Error::Config(format!("tolerance must be positive, got {tol}")))
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            ScalarMode::Rational => 0.0,
            ScalarMode::Float { tol } => *tol,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Float { .. } => "float",
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_mode_rejects_transcendentals() {
        let x = rat(1, 2);
        assert!(matches!(
            Rational::elementary_derivative(Elementary::Exp, &x, 0),
            Err(Error::NonPolynomialInExactMode(_))
        ));
    }

    #[test]
    fn log_derivative_tower() {
        let x = 2.0f64;
        let d3 = f64::elementary_derivative(Elementary::Log, &x, 3).unwrap();
        assert!((d3 - 2.0 / 8.0).abs() < 1e-15);
        let d2 = f64::elementary_derivative(Elementary::Log, &x, 2).unwrap();
        assert!((d2 + 0.25).abs() < 1e-15);
    }

    #[test]
    fn float_mode_needs_positive_tolerance() {
        assert!(ScalarMode::float(0.0).is_err());
        assert!(ScalarMode::float(1e-9).is_ok());
    }
}
