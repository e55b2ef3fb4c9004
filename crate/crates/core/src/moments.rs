//! Moments `m_s = int x^s dq(x)` from truncated infinite linear systems.
//!
//! Two systems are available, both of the form
//! `m_s = sum_{k>=0} e_{k+s} C(k+s-1, k) m_k` for `s >= 1`:
//!
//! * [`SystemVariant::A`]: `e_j = (-1)^k c_j` (alternating, very badly
//!   conditioned once truncated, but with a small truncation error);
//! * [`SystemVariant::B`]: `e_j = d_j` (positive, well conditioned, larger
//!   truncation error),
//!
//! where `c_j = sum_{n>=1} 1 / (2^n n^j)` and `d_j = 2 c_j - 1`.
//! Truncating `k` to `0..=K` and moving the `m_0 = 1` term to the right-hand
//! side gives a `K x K` system in `m_1..m_K`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use log::info;
use rug::{Float, Integer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cond_inf, format_real, parse_real, solve_dense, BigReal, DenseMatrix, PrecisionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemVariant {
    A,
    B,
}

impl fmt::Display for SystemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemVariant::A => "A",
            SystemVariant::B => "B",
        })
    }
}

impl FromStr for SystemVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(SystemVariant::A),
            "B" | "b" => Ok(SystemVariant::B),
            other => Err(Error::Parse(format!("unknown system variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentSource {
    System { variant: SystemVariant },
    Discrete { level: Option<u32>, symmetric: bool },
    Custom { symmetric: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentProvenance {
    pub source: MomentSource,
    /// `K` for the linear systems, `k_max` for discrete moments.
    pub system_size: usize,
    pub series_terms: usize,
    pub digits: u32,
}

impl MomentProvenance {
    /// Whether the underlying measure is symmetric about 1/2, so that every
    /// `b_k` equals 1/2.
    pub fn is_symmetric(&self) -> bool {
        match self.source {
            MomentSource::System { .. } => true,
            MomentSource::Discrete { symmetric, .. } | MomentSource::Custom { symmetric } => symmetric,
        }
    }
}

/// `m_0..=m_K` together with how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    values: Vec<BigReal>,
    provenance: MomentProvenance,
}

impl MomentVector {
    pub fn new(values: Vec<BigReal>, provenance: MomentProvenance) -> Self {
        Self { values, provenance }
    }

    /// Moments supplied by the caller, e.g. a known closed form.
    pub fn custom(values: Vec<BigReal>, symmetric: bool, ctx: &PrecisionContext) -> Self {
        let provenance = MomentProvenance {
            source: MomentSource::Custom { symmetric },
            system_size: values.len().saturating_sub(1),
            series_terms: 0,
            digits: ctx.digits(),
        };
        Self { values, provenance }
    }

    pub fn values(&self) -> &[BigReal] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Option<&BigReal> {
        self.values.get(k)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> &MomentProvenance {
        &self.provenance
    }

    /// `|m_1 - 1/2|`; the first moment of a measure symmetric about 1/2 is
    /// known exactly.
    pub fn m1_error(&self) -> Option<BigReal> {
        let m1 = self.values.get(1)?;
        let mut err = Float::with_val(m1.prec(), m1 - 0.5f64);
        err.abs_mut();
        Some(err)
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        let doc = MomentFile {
            provenance: self.provenance,
            values: self.values.iter().map(format_real).collect(),
        };
        serde_json::to_writer_pretty(out, &doc)?;
        Ok(())
    }

    pub fn to_json_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_json(&mut buf)?;
        Ok(String::from_utf8(buf).expect("json is utf-8"))
    }

    /// Values are parsed at the precision recorded in the provenance.
    pub fn read_json<R: Read>(input: R) -> Result<Self> {
        let doc: MomentFile = serde_json::from_reader(input)?;
        let ctx = PrecisionContext::new(doc.provenance.digits)?;
        let values = doc.values.iter().map(|s| parse_real(s, &ctx)).collect::<Result<Vec<_>>>()?;
        Ok(Self { values, provenance: doc.provenance })
    }
}

#[derive(Serialize, Deserialize)]
struct MomentFile {
    provenance: MomentProvenance,
    values: Vec<String>,
}

/// `c_0..=c_max` and `d_0..=d_max` for a fixed number of series terms.
///
/// `d_j` is summed directly as `2 sum_{n=2}^{terms} 1/(2^n n^j)`, which is
/// `2 c_j - 1` for the same truncated series without the cancellation of
/// forming the difference.
#[derive(Debug, Clone)]
pub struct SeriesTable {
    c: Vec<BigReal>,
    d: Vec<BigReal>,
    terms: usize,
}

impl SeriesTable {
    const GUARD_BITS: u32 = 64;

    pub fn new(max_index: usize, terms: usize, ctx: &PrecisionContext) -> Result<Self> {
        if terms == 0 {
            return Err(Error::OutOfRange("series needs at least one term".into()));
        }
        let bits = ctx.bits() + Self::GUARD_BITS;
        let mut c = vec![Float::new(bits); max_index + 1];
        let mut d = vec![Float::new(bits); max_index + 1];
        let mut term = Float::new(bits);
        let mut inv_n = Float::new(bits);
        for n in 1..=terms {
            // 1 / (2^n n^j), j = 0, 1, ...
            term.assign_one_over_pow2(n);
            inv_n.assign_recip(n);
            for j in 0..=max_index {
                c[j] += &term;
                if n >= 2 {
                    d[j] += &term;
                }
                term *= &inv_n;
            }
        }
        let c = c.iter().map(|v| ctx.round(v)).collect();
        let d = d.into_iter().map(|v| ctx.round(&(v * 2u32))).collect();
        Ok(Self { c, d, terms })
    }

    pub fn c(&self, j: usize) -> &BigReal {
        &self.c[j]
    }

    pub fn d(&self, j: usize) -> &BigReal {
        &self.d[j]
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn max_index(&self) -> usize {
        self.c.len() - 1
    }
}

trait AssignSeriesTerm {
    fn assign_one_over_pow2(&mut self, n: usize);
    fn assign_recip(&mut self, n: usize);
}

impl AssignSeriesTerm for Float {
    fn assign_one_over_pow2(&mut self, n: usize) {
        use rug::Assign;
        self.assign(1);
        *self >>= n as u32;
    }

    fn assign_recip(&mut self, n: usize) {
        use rug::Assign;
        self.assign(1);
        *self /= n as u32;
    }
}

/// `sum_{n=1}^{terms} 1 / (2^n n^k)`; the neglected tail is below `2^-terms`.
pub fn c_series(k: usize, terms: usize, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(SeriesTable::new(k, terms, ctx)?.c[k].clone())
}

/// `2 c_k - 1` for the same truncated series.
pub fn d_series(k: usize, terms: usize, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(SeriesTable::new(k, terms, ctx)?.d[k].clone())
}

/// Matrix and right-hand side of the `K x K` truncated system for
/// `m_1..=m_K`. Row `s - 1`, column `k - 1` holds
/// `delta_{sk} - e_{k+s} C(k+s-1, k)`; the right-hand side is `e_s`.
pub fn assemble_system(
    variant: SystemVariant,
    size: usize,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<(DenseMatrix, Vec<BigReal>)> {
    if size < 2 {
        return Err(Error::OutOfRange(format!("system size {size} is below 2")));
    }
    let table = SeriesTable::new(2 * size, terms, ctx)?;
    assemble_with_table(variant, size, &table, ctx)
}

fn assemble_with_table(
    variant: SystemVariant,
    size: usize,
    table: &SeriesTable,
    ctx: &PrecisionContext,
) -> Result<(DenseMatrix, Vec<BigReal>)> {
    let bits = ctx.bits();
    let coefficient = |j: usize, k: usize| -> BigReal {
        match variant {
            SystemVariant::A if k % 2 == 1 => -table.c(j).clone(),
            SystemVariant::A => table.c(j).clone(),
            SystemVariant::B => table.d(j).clone(),
        }
    };
    let mut rows = Vec::with_capacity(size);
    for s in 1..=size {
        let mut row = Vec::with_capacity(size);
        // C(k+s-1, k) built up from C(s-1, 0) = 1.
        let mut binom = Integer::from(1);
        for k in 1..=size {
            binom *= (k + s - 1) as u32;
            binom /= k as u32;
            let mut entry = Float::with_val(bits, &coefficient(k + s, k) * &binom);
            entry = -entry;
            if k == s {
                entry += 1u32;
            }
            row.push(entry);
        }
        rows.push(row);
    }
    let rhs = (1..=size).map(|s| coefficient(s, 0)).collect();
    Ok((DenseMatrix::from_rows(rows)?, rhs))
}

/// Solves the truncated system and returns `m_0 = 1, m_1, ..., m_K`.
pub fn solve_moments(
    variant: SystemVariant,
    size: usize,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<MomentVector> {
    let (matrix, rhs) = assemble_system(variant, size, terms, ctx)?;
    let solution = solve_dense(&matrix, &rhs, ctx)?;
    let mut values = Vec::with_capacity(size + 1);
    values.push(ctx.one());
    values.extend(solution);
    let moments = MomentVector::new(
        values,
        MomentProvenance {
            source: MomentSource::System { variant },
            system_size: size,
            series_terms: terms,
            digits: ctx.digits(),
        },
    );
    if let Some(err) = moments.m1_error() {
        info!(
            "variant {variant}, K={size}, terms={terms}, digits={}: |m_1 - 1/2| = {}",
            ctx.digits(),
            err.to_string_radix(10, Some(6))
        );
    }
    Ok(moments)
}

/// `cond_inf` of the truncated system matrix.
pub fn system_condition(
    variant: SystemVariant,
    size: usize,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<BigReal> {
    let (matrix, _) = assemble_system(variant, size, terms, ctx)?;
    cond_inf(&matrix, ctx)
}

/// Outcome of [`validate_moments`]; every check is reported, none aborts.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub m0_is_one: bool,
    pub m1_error: Option<BigReal>,
    pub m1_within_tolerance: bool,
    pub positive: bool,
    pub monotone: bool,
    /// `(size, determinant > 0)` for the leading Hankel matrices that the
    /// available moments allow, sizes 1 to 6.
    pub hankel: Vec<(usize, bool)>,
}

impl MomentReport {
    pub fn passed(&self) -> bool {
        self.m0_is_one
            && self.m1_within_tolerance
            && self.positive
            && self.monotone
            && self.hankel.iter().all(|&(_, ok)| ok)
    }
}

impl fmt::Display for MomentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "m_0 = 1: {}", mark(self.m0_is_one))?;
        match &self.m1_error {
            Some(e) => writeln!(
                f,
                "|m_1 - 1/2| = {}: {}",
                e.to_string_radix(10, Some(6)),
                mark(self.m1_within_tolerance)
            )?,
            None => writeln!(f, "|m_1 - 1/2|: missing")?,
        }
        writeln!(f, "positive: {}", mark(self.positive))?;
        writeln!(f, "nonincreasing: {}", mark(self.monotone))?;
        for (n, ok) in &self.hankel {
            writeln!(f, "Hankel det {n}x{n} > 0: {}", mark(*ok))?;
        }
        Ok(())
    }
}

/// Determinant by elimination with partial pivoting; zero if singular.
fn determinant(mut a: Vec<Vec<BigReal>>, ctx: &PrecisionContext) -> BigReal {
    let n = a.len();
    let mut det = ctx.one();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| {
                a[i][k].cmp_abs(&a[j][k]).unwrap_or(std::cmp::Ordering::Equal).then(j.cmp(&i))
            })
            .expect("non-empty range");
        if a[p][k].is_zero() {
            return ctx.zero();
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in bottom.iter_mut() {
            let factor = Float::with_val(ctx.bits(), &row[k] / &pivot[k]);
            for (dst, src) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                *dst -= &factor * src;
            }
        }
    }
    det
}

/// Sanity checks on a moment sequence of a probability measure on `[0, 1]`
/// symmetric about 1/2.
pub fn validate_moments(m: &MomentVector, m1_tolerance: &BigReal, ctx: &PrecisionContext) -> MomentReport {
    let values: Vec<BigReal> = m.values().iter().map(|v| ctx.round(v)).collect();
    let m0_is_one = values.first().is_some_and(|v| *v == 1);
    let m1_error = m.m1_error();
    let m1_within_tolerance = m1_error.as_ref().is_some_and(|e| e <= m1_tolerance);
    let positive = values.iter().all(|v| *v > 0);
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let mut hankel = Vec::new();
    for n in 1..=6usize {
        if 2 * n - 1 > values.len() {
            break;
        }
        let h: Vec<Vec<BigReal>> = (0..n).map(|i| (0..n).map(|j| values[i + j].clone()).collect()).collect();
        hankel.push((n, determinant(h, ctx) > 0));
    }
    MomentReport { m0_is_one, m1_error, m1_within_tolerance, positive, monotone, hankel }
}
