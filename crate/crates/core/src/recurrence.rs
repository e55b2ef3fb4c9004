//! Three-term recurrence coefficients of monic orthogonal polynomials,
//! `P_{n+1}(x) = (x - b_n) P_n(x) - a_n^2 P_{n-1}(x)`,
//! by the discretized Stieltjes procedure and by the Chebyshev algorithm,
//! plus evaluation, zeros and asymptotic diagnostics.

use std::fmt;
use std::io::{Read, Write};

use log::warn;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, MeasureSource};
use crate::moments::{MomentProvenance, MomentVector};
use crate::numerics::{format_real, parse_real, tridiag_eigenvalues, BigReal, PrecisionContext};

/// Default tolerance of [`trusted_prefix_scan`].
pub const DEFAULT_PREFIX_TOL: f64 = 1e-20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Stieltjes,
    Chebyshev,
    /// Read back from a file without recomputation.
    Imported,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Stieltjes => "stieltjes",
            Method::Chebyshev => "chebyshev",
            Method::Imported => "imported",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSource {
    Measure { level: Option<u32>, nodes: usize },
    Moments(MomentProvenance),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceProvenance {
    pub method: Method,
    pub source: CoefficientSource,
    pub digits: u32,
    /// Whether the measure is known to be symmetric about 1/2, which makes
    /// every `b_k = 1/2` a usable control.
    pub symmetric: bool,
}

/// `b_0..b_n` and `a_1^2..a_n^2`; only the first `trusted_prefix` of the
/// `b` (and the matching `a^2`) are considered reliable.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoefficients {
    b: Vec<BigReal>,
    a2: Vec<BigReal>,
    provenance: RecurrenceProvenance,
    trusted_prefix: usize,
}

impl RecurrenceCoefficients {
    /// `a2[k - 1]` is `a_k^2`, so `a2` is one shorter than `b`. The trusted
    /// prefix starts at the full length and is lowered by the symmetry scan
    /// when the provenance says the measure is symmetric.
    pub fn new(b: Vec<BigReal>, a2: Vec<BigReal>, provenance: RecurrenceProvenance) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::Format("no recurrence coefficients".into()));
        }
        if a2.len() + 1 != b.len() {
            return Err(Error::DimensionMismatch { expected: b.len() - 1, found: a2.len() });
        }
        let mut rc = Self { trusted_prefix: b.len(), b, a2, provenance };
        rc.trusted_prefix = positivity_prefix(&rc.a2, rc.b.len());
        if rc.provenance.symmetric {
            let tol = Float::with_val(rc.b[0].prec(), DEFAULT_PREFIX_TOL);
            rc.trusted_prefix = rc.trusted_prefix.min(trusted_prefix_scan(&rc, &tol));
        }
        Ok(rc)
    }

    pub fn b(&self) -> &[BigReal] {
        &self.b
    }

    /// `a_1^2, a_2^2, ...`
    pub fn a2(&self) -> &[BigReal] {
        &self.a2
    }

    /// `a_k^2` for `k >= 1`.
    pub fn a2_at(&self, k: usize) -> Option<&BigReal> {
        k.checked_sub(1).and_then(|i| self.a2.get(i))
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn provenance(&self) -> &RecurrenceProvenance {
        &self.provenance
    }

    pub fn trusted_prefix(&self) -> usize {
        self.trusted_prefix
    }

    /// First `n` of the `b` and `n - 1` of the `a^2`.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.clamp(1, self.b.len());
        Self {
            b: self.b[..n].to_vec(),
            a2: self.a2[..n - 1].to_vec(),
            provenance: self.provenance.clone(),
            trusted_prefix: self.trusted_prefix.min(n),
        }
    }

    /// `k,b_k,a2_k`; `a2_0` is left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["k", "b_k", "a2_k"])?;
        for (k, b) in self.b.iter().enumerate() {
            let a2 = self.a2_at(k).map(format_real).unwrap_or_default();
            w.write_record([k.to_string(), format_real(b), a2])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses a [`write_csv`](Self::write_csv) table. Nothing is known about
    /// the origin, so the trusted prefix covers the positive `a^2` only.
    pub fn read_csv<R: Read>(input: R, ctx: &PrecisionContext) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut b = Vec::new();
        let mut a2 = Vec::new();
        for (row, record) in r.records().enumerate() {
            let record = record?;
            let field = |i: usize| record.get(i).ok_or_else(|| Error::Format(format!("row {row}: missing column {i}")));
            let k: usize = field(0)?.parse().map_err(|_| Error::Format(format!("row {row}: bad index")))?;
            if k != row {
                return Err(Error::Format(format!("row {row}: expected index {row}, found {k}")));
            }
            b.push(parse_real(field(1)?, ctx)?);
            if k > 0 {
                a2.push(parse_real(field(2)?, ctx)?);
            }
        }
        let provenance = RecurrenceProvenance {
            method: Method::Imported,
            source: CoefficientSource::Unknown,
            digits: ctx.digits(),
            symmetric: false,
        };
        Self::new(b, a2, provenance)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let doc = CoefficientFile {
            provenance: self.provenance.clone(),
            trusted_prefix: self.trusted_prefix,
            b: self.b.iter().map(format_real).collect(),
            a2: self.a2.iter().map(format_real).collect(),
        };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }

    pub fn read_json<R: Read>(input: R) -> Result<Self> {
        let doc: CoefficientFile = serde_json::from_reader(input)?;
        let ctx = PrecisionContext::new(doc.provenance.digits)?;
        let parse = |v: &[String]| v.iter().map(|s| parse_real(s, &ctx)).collect::<Result<Vec<_>>>();
        let mut rc = Self::new(parse(&doc.b)?, parse(&doc.a2)?, doc.provenance)?;
        rc.trusted_prefix = rc.trusted_prefix.min(doc.trusted_prefix);
        Ok(rc)
    }

    /// Two whitespace-separated columns `k a_k^2`, for `k` in the trusted
    /// range.
    pub fn write_a2_plot<W: Write>(&self, mut out: W) -> Result<()> {
        for k in 1..self.trusted_prefix {
            writeln!(out, "{k} {}", format_real(&self.a2[k - 1]))?;
        }
        Ok(())
    }

    /// Two whitespace-separated columns `k g_k` (see [`geometric_means`]).
    pub fn write_geometric_plot<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, g) in geometric_means(self).iter().enumerate() {
            writeln!(out, "{} {}", i + 1, format_real(g))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientFile {
    provenance: RecurrenceProvenance,
    trusted_prefix: usize,
    b: Vec<String>,
    a2: Vec<String>,
}

/// Index of the first `a_k^2 <= 0`, or `len`.
fn positivity_prefix(a2: &[BigReal], len: usize) -> usize {
    a2.iter().position(|v| !(*v > 0)).map_or(len, |i| i + 1)
}

/// Discretized Stieltjes procedure: `b_k = <x P_k, P_k> / <P_k, P_k>` and
/// `a_{k+1}^2 = <P_{k+1}, P_{k+1}> / <P_k, P_k>`, with the inner products
/// taken over the nodes of `mu`. Returns `b_0..b_{n_max}`,
/// `a_1^2..a_{n_max}^2`.
pub fn stieltjes(mu: &DiscreteMeasure, n_max: usize, ctx: &PrecisionContext) -> Result<RecurrenceCoefficients> {
    if n_max >= mu.len() {
        return Err(Error::DegreeTooLarge { degree: n_max, limit: mu.len() - 1 });
    }
    let bits = ctx.bits();
    let (x, w) = mu.to_reals(ctx);
    let mut prev = vec![ctx.zero(); x.len()];
    let mut cur = vec![ctx.one(); x.len()];
    let mut b = Vec::with_capacity(n_max + 1);
    let mut a2: Vec<BigReal> = Vec::with_capacity(n_max);
    let mut norm_prev = ctx.zero();
    let mut wp2 = Float::new(bits);
    let mut t = Float::new(bits);
    for k in 0..=n_max {
        let mut s0 = ctx.zero();
        let mut s1 = ctx.zero();
        for i in 0..x.len() {
            wp2.assign(cur[i].square_ref());
            wp2 *= &w[i];
            s0 += &wp2;
            t.assign(&wp2 * &x[i]);
            s1 += &t;
        }
        if !(s0 > 0) {
            return Err(Error::LostOrthogonality { degree: k });
        }
        if k > 0 {
            a2.push(Float::with_val(bits, &s0 / &norm_prev));
        }
        let bk = Float::with_val(bits, &s1 / &s0);
        if k < n_max {
            // prev <- (x - b_k) cur - a_k^2 prev, then swap.
            let a2k = if k > 0 { a2[k - 1].clone() } else { ctx.zero() };
            for i in 0..x.len() {
                t.assign(&x[i] - &bk);
                t *= &cur[i];
                prev[i] *= &a2k;
                t -= &prev[i];
                std::mem::swap(&mut prev[i], &mut t);
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        b.push(bk);
        norm_prev = s0;
    }
    let level = match mu.source() {
        MeasureSource::Level(n) => Some(n),
        MeasureSource::Custom => None,
    };
    let provenance = RecurrenceProvenance {
        method: Method::Stieltjes,
        source: CoefficientSource::Measure { level, nodes: mu.len() },
        digits: ctx.digits(),
        symmetric: mu.is_symmetric(),
    };
    RecurrenceCoefficients::new(b, a2, provenance)
}

/// Chebyshev algorithm on ordinary moments through the mixed moments
/// `sigma_{k,l} = int P_k(x) x^l`, kept as two rolling rows. Needs
/// `m_0..m_{2 n_max + 1}` and returns `b_0..b_{n_max}`, `a_1^2..a_{n_max}^2`.
///
/// If some `sigma_{k,k}` is not positive the moments no longer determine a
/// positive measure to working precision; the result is cut at `k`.
pub fn chebyshev(m: &MomentVector, n_max: usize, ctx: &PrecisionContext) -> Result<RecurrenceCoefficients> {
    let needed = 2 * n_max + 2;
    if m.len() < needed {
        return Err(Error::InsufficientMoments { needed, available: m.len() });
    }
    let bits = ctx.bits();
    let last = needed - 1;
    let mut row_prev2 = vec![ctx.zero(); needed];
    let mut row_prev: Vec<BigReal> = m.values()[..needed].iter().map(|v| ctx.round(v)).collect();
    if !(row_prev[0] > 0) {
        return Err(Error::LostPositivity { degree: 0 });
    }
    let mut b = vec![Float::with_val(bits, &row_prev[1] / &row_prev[0])];
    let mut a2: Vec<BigReal> = Vec::with_capacity(n_max);
    let mut row = vec![ctx.zero(); needed];
    let mut t = Float::new(bits);
    for k in 1..=n_max {
        let b_prev = &b[k - 1];
        let a2_prev = if k >= 2 { a2[k - 2].clone() } else { ctx.zero() };
        for l in k..=last - k {
            row[l].assign(&row_prev[l + 1]);
            t.assign(b_prev * &row_prev[l]);
            row[l] -= &t;
            t.assign(&a2_prev * &row_prev2[l]);
            row[l] -= &t;
        }
        if !(row[k] > 0) {
            warn!("chebyshev: sigma_{{{k},{k}}} is not positive, stopping at degree {k}");
            break;
        }
        a2.push(Float::with_val(bits, &row[k] / &row_prev[k - 1]));
        let lead = Float::with_val(bits, &row[k + 1] / &row[k]);
        let lag = Float::with_val(bits, &row_prev[k] / &row_prev[k - 1]);
        b.push(lead - lag);
        std::mem::swap(&mut row_prev2, &mut row_prev);
        std::mem::swap(&mut row_prev, &mut row);
    }
    let provenance = RecurrenceProvenance {
        method: Method::Chebyshev,
        source: CoefficientSource::Moments(*m.provenance()),
        digits: ctx.digits(),
        symmetric: m.provenance().is_symmetric(),
    };
    RecurrenceCoefficients::new(b, a2, provenance)
}

/// `P_n(x)` by the forward recurrence.
pub fn eval_monic(rc: &RecurrenceCoefficients, n: usize, x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if n >= rc.trusted_prefix {
        return Err(Error::DegreeTooLarge { degree: n, limit: rc.trusted_prefix.saturating_sub(1) });
    }
    let bits = ctx.bits();
    let mut prev = ctx.zero();
    let mut cur = ctx.one();
    for k in 0..n {
        let mut next = Float::with_val(bits, x - &rc.b[k]);
        next *= &cur;
        if k > 0 {
            next -= Float::with_val(bits, &rc.a2[k - 1] * &prev);
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `g_k = (a_1^2 ... a_k^2)^(1/k)` for `k = 1..trusted_prefix - 1`, as the
/// exponential of the mean logarithm.
pub fn geometric_means(rc: &RecurrenceCoefficients) -> Vec<BigReal> {
    let count = rc.trusted_prefix.saturating_sub(1);
    let mut out = Vec::with_capacity(count);
    let Some(first) = rc.a2.first() else { return out };
    let bits = first.prec();
    let mut log_sum = Float::new(bits);
    for (i, v) in rc.a2[..count].iter().enumerate() {
        log_sum += Float::with_val(bits, v.ln_ref());
        let mean = Float::with_val(bits, &log_sum / (i as u32 + 1));
        out.push(mean.exp());
    }
    out
}

/// Zeros of `P_n`, the eigenvalues of the `n x n` Jacobi matrix, ascending.
pub fn jacobi_zeros(rc: &RecurrenceCoefficients, n: usize, ctx: &PrecisionContext) -> Result<Vec<BigReal>> {
    if n == 0 || n >= rc.trusted_prefix {
        return Err(Error::DegreeTooLarge { degree: n, limit: rc.trusted_prefix.saturating_sub(1) });
    }
    let off: Vec<BigReal> = rc.a2[..n - 1].iter().map(|v| Float::with_val(ctx.bits(), v.sqrt_ref())).collect();
    tridiag_eigenvalues(&rc.b[..n], &off, ctx)
}

/// Smallest `k` with `|b_k - 1/2| > tol` or `a_k^2 <= 0`, else the length.
/// Meaningful only for measures symmetric about 1/2.
pub fn trusted_prefix_scan(rc: &RecurrenceCoefficients, tol: &BigReal) -> usize {
    let mut dev = Float::new(rc.b[0].prec());
    for (k, b) in rc.b.iter().enumerate() {
        if k > 0 && !(rc.a2[k - 1] > 0) {
            return k;
        }
        dev.assign(b - 0.5f64);
        dev.abs_mut();
        if dev > *tol {
            return k;
        }
    }
    rc.b.len()
}

/// Quantities for comparing the coefficients with the Nevai class
/// `M(1/2, 1/4)` of `[0, 1]`, over `k = 1..trusted_prefix - 1`.
#[derive(Debug, Clone)]
pub struct NevaiReport {
    pub count: usize,
    /// Running means `(a_1^2 + ... + a_k^2) / k`.
    pub running_means: Vec<BigReal>,
    pub mean_a2: BigReal,
    pub min_a2: BigReal,
    pub max_a2: BigReal,
    pub geometric_mean: BigReal,
    /// `max |b_k - 1/2|` over the range.
    pub max_b_deviation: BigReal,
    /// `a_k^2 - 1/16`.
    pub discrepancy: Vec<BigReal>,
    /// `(1/4)^2`, the limit of `a_n^2` in the Nevai class (capacity of
    /// `[0, 1]` squared).
    pub reference_a2: BigReal,
    pub reference_a: BigReal,
}

pub fn nevai_diagnostics(rc: &RecurrenceCoefficients) -> Result<NevaiReport> {
    if rc.trusted_prefix < 5 {
        return Err(Error::OutOfRange(format!(
            "trusted prefix {} is below 5",
            rc.trusted_prefix
        )));
    }
    let bits = rc.b[0].prec();
    let count = rc.trusted_prefix - 1;
    let values = &rc.a2[..count];
    let reference_a = Float::with_val(bits, 0.25f64);
    let reference_a2 = Float::with_val(bits, 0.0625f64);
    let mut sum = Float::new(bits);
    let mut running_means = Vec::with_capacity(count);
    for (i, v) in values.iter().enumerate() {
        sum += v;
        running_means.push(Float::with_val(bits, &sum / (i as u32 + 1)));
    }
    let min_a2 = values.iter().min_by(|x, y| x.partial_cmp(y).expect("finite")).expect("non-empty").clone();
    let max_a2 = values.iter().max_by(|x, y| x.partial_cmp(y).expect("finite")).expect("non-empty").clone();
    let geometric_mean = geometric_means(rc).pop().expect("non-empty");
    let max_b_deviation = rc.b[..count + 1]
        .iter()
        .map(|b| Float::with_val(bits, b - 0.5f64).abs())
        .max_by(|x, y| x.partial_cmp(y).expect("finite"))
        .expect("non-empty");
    let discrepancy = values.iter().map(|v| Float::with_val(bits, v - &reference_a2)).collect();
    Ok(NevaiReport {
        count,
        mean_a2: running_means.last().expect("non-empty").clone(),
        running_means,
        min_a2,
        max_a2,
        geometric_mean,
        max_b_deviation,
        discrepancy,
        reference_a2,
        reference_a,
    })
}

impl fmt::Display for NevaiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &BigReal| x.to_string_radix(10, Some(12));
        writeln!(f, "coefficients used: a_1^2..a_{}^2", self.count)?;
        writeln!(f, "mean a_k^2: {}", show(&self.mean_a2))?;
        writeln!(f, "min a_k^2: {}", show(&self.min_a2))?;
        writeln!(f, "max a_k^2: {}", show(&self.max_a2))?;
        writeln!(f, "geometric mean g_{}: {}", self.count, show(&self.geometric_mean))?;
        writeln!(f, "max |b_k - 1/2|: {}", show(&self.max_b_deviation))?;
        writeln!(f, "reference a^2 = (1/4)^2: {}", show(&self.reference_a2))?;
        write!(f, "reference a = 1/4: {}", show(&self.reference_a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{discrete_moments, empirical_measure};
    use rug::Rational;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn close(a: &BigReal, b: &BigReal, tol: &BigReal) -> bool {
        Float::with_val(a.prec(), a - b).abs() <= *tol
    }

    fn uniform_moments(n: u32, c: &PrecisionContext) -> MomentVector {
        MomentVector::custom((0..n).map(|k| c.one() / (k + 1)).collect(), true, c)
    }

    fn plain(b: Vec<BigReal>, a2: Vec<BigReal>, symmetric: bool) -> RecurrenceCoefficients {
        let provenance = RecurrenceProvenance {
            method: Method::Imported,
            source: CoefficientSource::Unknown,
            digits: 30,
            symmetric,
        };
        RecurrenceCoefficients::new(b, a2, provenance).unwrap()
    }

    #[test]
    fn two_point_measure() {
        let c = ctx(50);
        let mu = DiscreteMeasure::new(vec![Rational::from(0), Rational::from(1)], vec![Rational::from((1, 2)); 2]).unwrap();
        let rc = stieltjes(&mu, 1, &c).unwrap();
        assert_eq!(rc.b()[0], 0.5);
        assert_eq!(rc.a2()[0], 0.25);
        assert!(matches!(stieltjes(&mu, 2, &c), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn uniform_moments_give_legendre() {
        let c = ctx(80);
        let n_max = 10;
        let rc = chebyshev(&uniform_moments(2 * n_max as u32 + 2, &c), n_max, &c).unwrap();
        assert_eq!(rc.trusted_prefix(), n_max + 1);
        let tol = c.resolution(30);
        for (k, b) in rc.b().iter().enumerate() {
            assert!(close(b, &(c.one() / 2u32), &tol), "b_{k}");
        }
        for k in 1..=n_max as u32 {
            let expect = c.from_i64((k * k) as i64) / (4 * (4 * k * k - 1));
            assert!(close(rc.a2_at(k as usize).unwrap(), &expect, &tol), "a_{k}^2");
        }
        assert!(matches!(
            chebyshev(&uniform_moments(21, &c), n_max, &c),
            Err(Error::InsufficientMoments { needed: 22, available: 21 })
        ));
    }

    #[test]
    fn stieltjes_symmetric_levels() {
        let c = ctx(60);
        let rc = stieltjes(&empirical_measure(8).unwrap(), 20, &c).unwrap();
        assert_eq!(rc.trusted_prefix(), 21);
        let tol = c.resolution(20);
        assert!(rc.b().iter().all(|b| close(b, &(c.one() / 2u32), &tol)));
        assert!(rc.a2().iter().all(|a| *a > 0));
    }

    #[test]
    fn stieltjes_matches_chebyshev_on_small_level() {
        let c = ctx(120);
        let mu = empirical_measure(5).unwrap();
        let n_max = 6;
        let s = stieltjes(&mu, n_max, &c).unwrap();
        let ch = chebyshev(&discrete_moments(&mu, 2 * n_max + 1, &c), n_max, &c).unwrap();
        let tol = c.resolution(40);
        for k in 0..=n_max {
            assert!(close(&s.b()[k], &ch.b()[k], &tol), "b_{k}");
        }
        for k in 0..n_max {
            assert!(close(&s.a2()[k], &ch.a2()[k], &tol), "a2 {k}");
        }
    }

    #[test]
    fn chebyshev_stops_when_positivity_is_lost() {
        // Two-point measure: sigma_{2,2} vanishes.
        let c = ctx(40);
        let half = c.one() / 2u32;
        let mut values = vec![c.one()];
        values.extend(std::iter::repeat_n(half, 7));
        let rc = chebyshev(&MomentVector::custom(values, true, &c), 3, &c).unwrap();
        assert_eq!(rc.len(), 2);
        assert_eq!(rc.trusted_prefix(), 2);
        assert_eq!(rc.a2()[0], 0.25);
    }

    #[test]
    fn evaluation_and_orthogonality() {
        let c = ctx(100);
        let mu = empirical_measure(7).unwrap();
        let rc = stieltjes(&mu, 6, &c).unwrap();
        let x = c.parse("0.3").unwrap();
        assert_eq!(eval_monic(&rc, 0, &x, &c).unwrap(), 1);
        let p1 = eval_monic(&rc, 1, &x, &c).unwrap();
        assert!(close(&p1, &c.parse("-0.2").unwrap(), &c.resolution(50)));
        let ip = mu.integrate(
            |t| eval_monic(&rc, 2, t, &c).unwrap() * eval_monic(&rc, 1, t, &c).unwrap(),
            &c,
        );
        assert!(ip.abs() < c.resolution(20));
        assert!(matches!(eval_monic(&rc, 7, &x, &c), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn zeros_small_cases() {
        let c = ctx(50);
        let rc = chebyshev(&uniform_moments(8, &c), 3, &c).unwrap();
        let z1 = jacobi_zeros(&rc, 1, &c).unwrap();
        assert!(close(&z1[0], &(c.one() / 2u32), &c.resolution(30)));
        let z2 = jacobi_zeros(&rc, 2, &c).unwrap();
        let delta = c.one() / (c.from_i64(3).sqrt() * 2u32);
        assert!(close(&z2[0], &Float::with_val(c.bits(), c.one() / 2u32 - &delta), &c.resolution(30)));
        assert!(close(&z2[1], &Float::with_val(c.bits(), c.one() / 2u32 + &delta), &c.resolution(30)));
        assert!(jacobi_zeros(&rc, 0, &c).is_err());
    }

    #[test]
    fn interlacing_on_level_measure() {
        let c = ctx(60);
        let rc = stieltjes(&empirical_measure(9).unwrap(), 12, &c).unwrap();
        let z10 = jacobi_zeros(&rc, 10, &c).unwrap();
        let z11 = jacobi_zeros(&rc, 11, &c).unwrap();
        for i in 0..10 {
            assert!(z11[i] < z10[i] && z10[i] < z11[i + 1]);
        }
        assert!(z11[0] > 0 && z11[10] < 1);
    }

    #[test]
    fn prefix_scan() {
        let c = ctx(30);
        let half = c.one() / 2u32;
        let a2 = vec![c.one() / 16u32; 7];
        let rc = plain(vec![half.clone(); 8], a2.clone(), true);
        assert_eq!(rc.trusted_prefix(), 8);
        let tol = c.parse("1e-20").unwrap();
        assert_eq!(trusted_prefix_scan(&rc, &tol), 8);
        let mut b = vec![half; 8];
        b[5] += c.parse("1e-3").unwrap();
        let rc = plain(b.clone(), a2.clone(), true);
        assert_eq!(trusted_prefix_scan(&rc, &tol), 5);
        assert_eq!(rc.trusted_prefix(), 5);
        // Without the symmetry control only positivity counts.
        assert_eq!(plain(b, a2, false).trusted_prefix(), 8);
    }

    #[test]
    fn constant_sequence_diagnostics() {
        let c = ctx(30);
        let rc = plain(vec![c.one() / 2u32; 9], vec![c.one() / 16u32; 8], true);
        let report = nevai_diagnostics(&rc).unwrap();
        let tol = c.resolution(2);
        assert_eq!(report.count, 8);
        assert!(close(&report.mean_a2, &report.reference_a2, &tol));
        assert!(close(&report.geometric_mean, &report.reference_a2, &tol));
        assert!(report.discrepancy.iter().all(|d| d.is_zero()));
        assert!(nevai_diagnostics(&rc.truncated(4)).is_err());
        assert_eq!(geometric_means(&rc).len(), 8);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let c = ctx(40);
        let rc = stieltjes(&empirical_measure(6).unwrap(), 5, &c).unwrap();
        let mut buf = Vec::new();
        rc.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,b_k,a2_k\n0,"));
        let back = RecurrenceCoefficients::read_csv(text.as_bytes(), &c).unwrap();
        assert_eq!(back.b(), rc.b());
        assert_eq!(back.a2(), rc.a2());
        assert_eq!(back.provenance().method, Method::Imported);

        let mut buf = Vec::new();
        rc.write_json(&mut buf).unwrap();
        let back = RecurrenceCoefficients::read_json(buf.as_slice()).unwrap();
        assert_eq!(back, rc);
    }

    #[test]
    fn plot_files() {
        let c = ctx(30);
        let rc = plain(vec![c.one() / 2u32; 4], vec![c.one() / 4u32; 3], true);
        let mut buf = Vec::new();
        rc.write_a2_plot(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
        let mut buf = Vec::new();
        rc.write_geometric_plot(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("1 2.5"));
    }
}
