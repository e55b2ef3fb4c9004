use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real number carried at the precision of the [`PrecisionContext`] that
/// created it.
pub type BigReal = Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision, in significant decimal digits.
///
/// Values are MPFR floats with `ceil(digits * log2(10))` mantissa bits and
/// round-to-nearest, so every operation is correctly rounded to at least
/// `digits` decimal digits. The context is a plain value; nothing about
/// precision lives in global state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrecisionContext {
    digits: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 10;
    /// Default for the discrete Stieltjes route.
    pub const STIELTJES_DIGITS: u32 = 100;
    /// Default for the moment systems and the Chebyshev algorithm.
    pub const MOMENTS_DIGITS: u32 = 400;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidPrecision(digits));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32
    }

    pub fn zero(&self) -> BigReal {
        Float::new(self.bits())
    }

    pub fn one(&self) -> BigReal {
        Float::with_val(self.bits(), 1)
    }

    pub fn from_i64(&self, v: i64) -> BigReal {
        Float::with_val(self.bits(), v)
    }

    pub fn from_integer(&self, v: &Integer) -> BigReal {
        Float::with_val(self.bits(), v)
    }

    pub fn from_rational(&self, v: &Rational) -> BigReal {
        Float::with_val(self.bits(), v)
    }

    /// Rounds `v` (of any precision) to this context.
    pub fn round(&self, v: &BigReal) -> BigReal {
        Float::with_val(self.bits(), v)
    }

    /// `10^exponent` rounded to the context.
    pub fn pow10(&self, exponent: i32) -> BigReal {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(exponent)
    }

    /// `10^(offset - digits)`, the resolution scale used for thresholds.
    pub fn resolution(&self, offset: i32) -> BigReal {
        self.pow10(offset - self.digits as i32)
    }

    pub fn parse(&self, s: &str) -> Result<BigReal> {
        parse_real(s, self)
    }
}

/// Scientific-notation decimal string with enough digits that
/// [`parse_real`] at the same precision restores the exact value.
pub fn format_real(x: &BigReal) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0e0".into() } else { "0e0".into() };
    }
    format!("{x:e}")
}

/// Parses a plain or scientific decimal string at the context precision.
pub fn parse_real(s: &str, ctx: &PrecisionContext) -> Result<BigReal> {
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let (value, _) = Float::with_val_round(ctx.bits(), parsed, Round::Nearest);
    if !value.is_finite() {
        return Err(Error::Parse(format!("{s:?} is not a finite number")));
    }
    Ok(value)
}

/// Fixed-point decimal rendering with `decimals` digits after the point,
/// for human-facing output and comparisons against printed tables.
pub fn format_fixed(x: &BigReal, decimals: usize) -> String {
    let scale = Integer::from(10).pow(decimals as u32);
    let scaled = Float::with_val(x.prec() + 64, x * &scale);
    let mut int = scaled
        .round()
        .to_integer()
        .expect("finite value");
    let negative = int < 0;
    int.abs_mut();
    let mut digits = int.to_string();
    if digits.len() <= decimals {
        digits = format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits);
    }
    let split = digits.len() - decimals;
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{digits}")
    } else {
        format!("{sign}{}.{}", &digits[..split], &digits[split..])
    }
}

impl TryFrom<u32> for PrecisionContext {
    type Error = Error;

    fn try_from(digits: u32) -> Result<Self> {
        Self::new(digits)
    }
}

impl From<PrecisionContext> for u32 {
    fn from(ctx: PrecisionContext) -> u32 {
        ctx.digits
    }
}
