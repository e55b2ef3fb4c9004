//! Stern-Brocot levels of `[0, 1]` and continued fractions of rationals.

use std::io::Write;

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};

/// `(a + a') / (b + b')` in lowest terms.
pub fn mediant(x: &Rational, y: &Rational) -> Rational {
    let num = Integer::from(x.numer() + y.numer());
    let den = Integer::from(x.denom() + y.denom());
    Rational::from((num, den))
}

/// Level `N` of the Stern-Brocot construction on `[0, 1]`: start from
/// `{0/1, 1/1}` and insert the mediant between every consecutive pair,
/// `N - 1` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiSequence {
    level: u32,
    points: Vec<Rational>,
}

impl MinkowskiSequence {
    /// `2^24 + 1` points is the most we agree to materialize.
    pub const MAX_LEVEL: u32 = 25;

    pub fn new(level: u32) -> Result<Self> {
        if level == 0 || level > Self::MAX_LEVEL {
            return Err(Error::LevelTooLarge { level, max: Self::MAX_LEVEL });
        }
        let mut points = vec![Rational::from(0), Rational::from(1)];
        for _ in 1..level {
            let mut next = Vec::with_capacity(2 * points.len() - 1);
            for pair in points.windows(2) {
                next.push(pair[0].clone());
                next.push(mediant(&pair[0], &pair[1]));
            }
            next.push(Rational::from(1));
            points = next;
        }
        Ok(Self { level, points })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Rational> {
        self.points
    }

    /// `index,numerator,denominator` with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["index", "numerator", "denominator"])?;
        for (i, p) in self.points.iter().enumerate() {
            w.write_record([i.to_string(), p.numer().to_string(), p.denom().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Point {
            index: usize,
            numerator: String,
            denominator: String,
        }
        #[derive(Serialize)]
        struct Doc {
            level: u32,
            points: Vec<Point>,
        }
        let doc = Doc {
            level: self.level,
            points: self
                .points
                .iter()
                .enumerate()
                .map(|(index, p)| Point {
                    index,
                    numerator: p.numer().to_string(),
                    denominator: p.denom().to_string(),
                })
                .collect(),
        };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }
}

pub fn minkowski_sequence(level: u32) -> Result<MinkowskiSequence> {
    MinkowskiSequence::new(level)
}

/// Partial quotients `[a_1, ..., a_n]` of `r = 1/(a_1 + 1/(a_2 + ...))` for
/// `0 < r < 1`, in the canonical form whose last quotient is at least 2
/// (except for `r = 1/1`, which is out of range anyway).
pub fn continued_fraction(r: &Rational) -> Result<Vec<u64>> {
    if *r <= 0 || *r >= 1 {
        return Err(Error::OutOfRange(format!("{r} is not in (0, 1)")));
    }
    // r = p/q: the quotients are those of q/p.
    let mut a = r.denom().clone();
    let mut b = r.numer().clone();
    let mut quotients = Vec::new();
    while b != 0 {
        let (q, rem): (Integer, Integer) = a.div_rem_ref(&b).into();
        let q = q
            .to_u64()
            .ok_or_else(|| Error::OutOfRange(format!("partial quotient of {r} exceeds 64 bits")))?;
        quotients.push(q);
        a = b;
        b = rem;
    }
    Ok(quotients)
}

/// Inverse of [`continued_fraction`]; accepts any list of positive
/// quotients, canonical or not.
pub fn from_continued_fraction(quotients: &[u64]) -> Rational {
    let mut value = Rational::from(0);
    for &a in quotients.iter().rev() {
        value += a;
        value.recip_mut();
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(mediant(&r(0, 1), &r(1, 1)), r(1, 2));
        assert_eq!(mediant(&r(1, 3), &r(1, 2)), r(2, 5));
        assert_eq!(mediant(&r(1, 2), &r(1, 1)), r(2, 3));
    }

    #[test]
    fn small_levels() {
        let m1 = minkowski_sequence(1).unwrap();
        assert_eq!(m1.points(), &[r(0, 1), r(1, 1)]);
        let m3 = minkowski_sequence(3).unwrap();
        assert_eq!(m3.points(), &[r(0, 1), r(1, 3), r(1, 2), r(2, 3), r(1, 1)]);
        assert_eq!(minkowski_sequence(10).unwrap().len(), 513);
    }

    #[test]
    fn level_guard() {
        assert!(matches!(minkowski_sequence(0), Err(Error::LevelTooLarge { level: 0, .. })));
        assert!(matches!(minkowski_sequence(26), Err(Error::LevelTooLarge { level: 26, .. })));
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(continued_fraction(&r(1, 2)).unwrap(), vec![2]);
        assert_eq!(continued_fraction(&r(2, 5)).unwrap(), vec![2, 2]);
        assert_eq!(continued_fraction(&r(3, 7)).unwrap(), vec![2, 3]);
        for bad in [r(0, 1), r(1, 1), r(3, 2), r(-1, 2)] {
            assert!(matches!(continued_fraction(&bad), Err(Error::OutOfRange(_))));
        }
    }

    #[test]
    fn reconstruct_non_canonical() {
        assert_eq!(from_continued_fraction(&[2, 1, 1]), r(2, 5));
        assert_eq!(from_continued_fraction(&[2, 2]), r(2, 5));
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        minkowski_sequence(2).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,numerator,denominator\n0,0,1\n1,1,2\n2,1,1\n");
    }
}
