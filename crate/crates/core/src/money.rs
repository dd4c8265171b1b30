//! Non-negative KZT amounts.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ModelError;

/// A non-negative amount of Kazakh tenge.
///
/// Arithmetic stays at full `f64` precision. Rounding to whole tenge
/// (half-up) happens only through [`Money::whole_kzt`], which is also what
/// the `Serialize` impl emits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Money(f64);

impl Money {
    pub const ZERO: Money = Money(0.0);

    pub fn new(amount: f64) -> Result<Self, ModelError> {
        if !amount.is_finite() || amount < 0.0 {
            return Err(ModelError::Domain(format!(
                "money amount must be finite and non-negative, got {amount}"
            )));
        }
        Ok(Money(amount))
    }

    pub fn amount(self) -> f64 {
        self.0
    }

    /// Rounded half-up to whole KZT.
    pub fn whole_kzt(self) -> u64 {
        (self.0 + 0.5).floor() as u64
    }

    pub fn scale(self, k: f64) -> Result<Self, ModelError> {
        Money::new(self.0 * k)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl Mul<f64> for Money {
    type Output = f64;
    fn mul(self, rhs: f64) -> f64 {
        self.0 * rhs
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} KZT", group_thousands(self.whole_kzt()))
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.whole_kzt())
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = f64::deserialize(deserializer)?;
        Money::new(raw).map_err(serde::de::Error::custom)
    }
}

/// `1234567` -> `"1,234,567"`.
pub fn group_thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}
