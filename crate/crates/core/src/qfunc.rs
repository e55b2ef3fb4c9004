//! Minkowski's question mark function `q` on `[0, 1]`.
//!
//! On a rational with continued fraction `[a_1, ..., a_n]`,
//! `q(x) = 2 * sum_k (-1)^(k+1) 2^-(a_1 + ... + a_k)`, a dyadic rational.

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::farey::continued_fraction;
use crate::numerics::{BigReal, PrecisionContext};

/// Largest quotient sum accepted by the exact evaluators; the result's
/// denominator is `2^sum`.
pub const MAX_QUOTIENT_SUM: u64 = 1 << 26;

/// A rational in `[0, 1]` whose denominator is a power of two.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicValue(Rational);

impl DyadicValue {
    fn new(value: Rational) -> Self {
        debug_assert!(value.denom().is_power_of_two());
        debug_assert!((0..=1).contains(&value));
        Self(value)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    /// `j` such that the reduced denominator is `2^j`.
    pub fn exponent(&self) -> u32 {
        self.0.denom().significant_bits() - 1
    }

    pub fn to_real(&self, ctx: &PrecisionContext) -> BigReal {
        ctx.from_rational(&self.0)
    }

    /// Exact decimal expansion (always finite for a dyadic rational).
    pub fn to_decimal(&self) -> String {
        let j = self.exponent();
        if j == 0 {
            return self.0.numer().to_string();
        }
        // p / 2^j = p * 5^j / 10^j
        let scaled = self.0.numer() * Integer::from(Integer::u_pow_u(5, j));
        let digits = format!("{:0>width$}", scaled.to_string(), width = j as usize + 1);
        let split = digits.len() - j as usize;
        let frac = digits[split..].trim_end_matches('0');
        format!("{}.{}", &digits[..split], frac)
    }
}

impl fmt::Display for DyadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

fn check_unit(r: &Rational) -> Result<()> {
    if *r < 0 || *r > 1 {
        return Err(Error::OutOfRange(format!("{r} is not in [0, 1]")));
    }
    Ok(())
}

/// Evaluates the alternating dyadic series for an arbitrary list of
/// positive partial quotients (canonical or with a trailing 1).
pub fn q_from_quotients(quotients: &[u64]) -> Result<DyadicValue> {
    let total: u64 = quotients.iter().sum();
    if total > MAX_QUOTIENT_SUM {
        return Err(Error::OutOfRange(format!("quotient sum {total} too large")));
    }
    // 2 * sum (-1)^(k+1) 2^-S_k = (sum (-1)^(k+1) 2^(total - S_k + 1)) / 2^total
    let mut numer = Integer::new();
    let mut partial = 0u64;
    for (k, &a) in quotients.iter().enumerate() {
        partial += a;
        let term = Integer::from(1) << (total - partial + 1) as u32;
        if k % 2 == 0 {
            numer += term;
        } else {
            numer -= term;
        }
    }
    let denom = Integer::from(1) << total as u32;
    Ok(DyadicValue::new(Rational::from((numer, denom))))
}

/// Exact `q(r)` for rational `r` in `[0, 1]`.
pub fn q_rational(r: &Rational) -> Result<DyadicValue> {
    check_unit(r)?;
    if *r == 0 || *r == 1 {
        return Ok(DyadicValue::new(r.clone()));
    }
    q_from_quotients(&continued_fraction(r)?)
}

/// `q(x)` for a real `x` in `[0, 1]`, accurate to the context resolution.
///
/// The exact binary value of `x` is expanded by the Euclidean algorithm
/// until the quotient sum `S` passes `digits * log2(10) + 10`; every
/// dropped term is below `2^-S`.
pub fn q_real(x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if x.is_nan() || *x < 0 || *x > 1 {
        return Err(Error::OutOfRange(format!("{x} is not in [0, 1]")));
    }
    if x.is_zero() || *x == 1 {
        return Ok(ctx.round(x));
    }
    let budget = (f64::from(ctx.digits()) * std::f64::consts::LOG2_10).ceil() as u64 + 10;
    let exact = x.to_rational().expect("finite");
    let mut a = exact.denom().clone();
    let mut b = exact.numer().clone();
    // Terms with S_k <= budget, summed exactly over 2^budget.
    let mut numer = Integer::new();
    let mut partial = 0u64;
    let mut k = 0usize;
    while b != 0 {
        let (q, rem): (Integer, Integer) = a.div_rem_ref(&b).into();
        match q.to_u64() {
            Some(q) if partial + q <= budget => partial += q,
            _ => break,
        }
        let term = Integer::from(1) << (budget - partial + 1) as u32;
        if k.is_multiple_of(2) {
            numer += term;
        } else {
            numer -= term;
        }
        k += 1;
        a = b;
        b = rem;
    }
    let value = Float::with_val(ctx.bits(), &numer) >> budget as u32;
    Ok(value)
}

/// `q_n(x)` for the two-branch iterated function system started from the
/// uniform distribution `q_0(t) = t`.
pub fn ifs_evaluate(x: &Rational, depth: u32) -> Result<Rational> {
    check_unit(x)?;
    if depth > 64 {
        return Err(Error::OutOfRange(format!("depth {depth} exceeds 64")));
    }
    // q_depth(x) = offset + scale * q_remaining(y)
    let mut offset = Rational::from(0);
    let mut scale = Rational::from(1);
    let mut y = x.clone();
    let half = Rational::from((1, 2));
    for _ in 0..depth {
        if y <= half {
            let one_minus = Rational::from(1 - &y);
            y /= one_minus;
            scale /= 2;
        } else {
            offset += &scale;
            let one_minus = Rational::from(1 - &y);
            y = one_minus / y;
            scale /= -2;
        }
    }
    Ok(offset + scale * y)
}

/// `q(b) - q(a)`, the mass of `[a, b]`.
pub fn q_gap(a: &Rational, b: &Rational) -> Result<DyadicValue> {
    check_unit(a)?;
    check_unit(b)?;
    if a >= b {
        return Err(Error::EmptyInterval { left: a.to_string(), right: b.to_string() });
    }
    let diff = q_rational(b)?.into_rational() - q_rational(a)?.into_rational();
    Ok(DyadicValue::new(diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::{from_continued_fraction, mediant, minkowski_sequence};

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn q(x: Rational) -> Rational {
        q_rational(&x).unwrap().into_rational()
    }

    #[test]
    fn rational_examples() {
        assert_eq!(q(r(1, 2)), r(1, 2));
        assert_eq!(q(r(1, 3)), r(1, 4));
        assert_eq!(q(r(2, 5)), r(3, 8));
        // mediant cross-check
        assert_eq!(q(r(2, 5)), (q(r(1, 3)) + q(r(1, 2))) / 2);
        assert_eq!(q(r(0, 1)), 0);
        assert_eq!(q(r(1, 1)), 1);
        assert!(q_rational(&r(3, 2)).is_err());
        assert!(q_rational(&r(-1, 2)).is_err());
    }

    #[test]
    fn dyadic_rendering() {
        let v = q_rational(&r(2, 5)).unwrap();
        assert_eq!(v.to_string(), "3/8");
        assert_eq!(v.to_decimal(), "0.375");
        assert_eq!(v.exponent(), 3);
        assert_eq!(q_rational(&r(1, 1)).unwrap().to_decimal(), "1");
        assert_eq!(q_rational(&r(0, 1)).unwrap().to_decimal(), "0");
    }

    #[test]
    fn real_examples() {
        let ctx = PrecisionContext::new(60).unwrap();
        let half = ctx.one() / 2u32;
        assert_eq!(q_real(&half, &ctx).unwrap(), half);
        let third = ctx.one() / 3u32;
        let v = q_real(&third, &ctx).unwrap();
        let quarter = ctx.one() / 4u32;
        assert!(Float::with_val(ctx.bits(), &v - &quarter).abs() < ctx.resolution(5));
        assert!(q_real(&ctx.from_i64(2), &ctx).is_err());
    }

    #[test]
    fn ifs_examples() {
        assert_eq!(ifs_evaluate(&r(1, 2), 1).unwrap(), r(1, 2));
        for n in 2..20 {
            assert_eq!(ifs_evaluate(&r(1, 3), n).unwrap(), r(1, 4));
        }
        assert_eq!(ifs_evaluate(&r(1, 3), 0).unwrap(), r(1, 3));
        assert!(ifs_evaluate(&r(1, 3), 65).is_err());
    }

    #[test]
    fn ifs_converges_at_half_rate() {
        let seq = minkowski_sequence(8).unwrap();
        for n in 0..12u32 {
            let bound = Rational::from((1, 1u64 << n));
            for x in seq.points() {
                let err = (ifs_evaluate(x, n).unwrap() - q(x.clone())).abs();
                assert!(err <= bound, "x={x} n={n}");
            }
        }
    }

    #[test]
    fn gap_examples() {
        assert_eq!(q_gap(&r(0, 1), &r(1, 5)).unwrap().into_rational(), r(1, 16));
        let lo = r(1, 2) - r(1, 20);
        let hi = r(1, 2) + r(1, 20);
        assert_eq!(q_gap(&lo, &hi).unwrap().into_rational(), r(3, 64));
        assert_eq!(q_gap(&r(0, 1), &r(1, 1)).unwrap().into_rational(), 1);
        assert!(matches!(q_gap(&r(1, 2), &r(1, 2)), Err(Error::EmptyInterval { .. })));
        assert!(matches!(q_gap(&r(2, 3), &r(1, 2)), Err(Error::EmptyInterval { .. })));
    }

    #[test]
    fn mediant_rule_level_ten() {
        let seq = minkowski_sequence(10).unwrap();
        let pts = seq.points();
        for w in pts.windows(2) {
            let m = mediant(&w[0], &w[1]);
            assert_eq!(q(m), (q(w[0].clone()) + q(w[1].clone())) / 2);
        }
    }

    #[test]
    fn trailing_one_representation() {
        let x = r(7, 19);
        let mut cf = continued_fraction(&x).unwrap();
        let canonical = q_from_quotients(&cf).unwrap();
        *cf.last_mut().unwrap() -= 1;
        cf.push(1);
        assert_eq!(from_continued_fraction(&cf), x);
        assert_eq!(q_from_quotients(&cf).unwrap(), canonical);
    }
}
