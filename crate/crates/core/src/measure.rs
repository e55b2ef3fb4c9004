//! Finite discrete measures with exact rational nodes and weights, in
//! particular the uniform measure on a Stern-Brocot level.

use std::io::{Read, Write};

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::MinkowskiSequence;
use crate::moments::{MomentProvenance, MomentSource, MomentVector};
use crate::numerics::{BigReal, PrecisionContext};
use crate::qfunc::q_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureSource {
    /// Uniform weights on the Stern-Brocot level `N`.
    Level(u32),
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    nodes: Vec<Rational>,
    weights: Vec<Rational>,
    source: MeasureSource,
}

impl DiscreteMeasure {
    pub const MAX_LEVEL: u32 = 20;

    /// Validates strictly increasing nodes, positive weights and unit mass.
    pub fn new(nodes: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), found: weights.len() });
        }
        if nodes.is_empty() {
            return Err(Error::Format("measure has no nodes".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("nodes are not strictly increasing".into()));
        }
        if weights.iter().any(|w| *w <= 0) {
            return Err(Error::Format("weights must be positive".into()));
        }
        let mass: Rational = weights.iter().sum();
        if mass != 1 {
            return Err(Error::Format(format!("total mass is {mass}, not 1")));
        }
        Ok(Self { nodes, weights, source: MeasureSource::Custom })
    }

    pub fn empirical(level: u32) -> Result<Self> {
        if level == 0 || level > Self::MAX_LEVEL {
            return Err(Error::LevelTooLarge { level, max: Self::MAX_LEVEL });
        }
        let nodes = MinkowskiSequence::new(level)?.into_points();
        let w = Rational::from((1, nodes.len() as u64));
        let weights = vec![w; nodes.len()];
        Ok(Self { nodes, weights, source: MeasureSource::Level(level) })
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn source(&self) -> MeasureSource {
        self.source
    }

    pub fn total_mass(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Mirror-symmetric about 1/2 with mirrored weights.
    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let j = n - 1 - i;
            Rational::from(&self.nodes[i] + &self.nodes[j]) == 1 && self.weights[i] == self.weights[j]
        })
    }

    /// Nodes and weights rounded once to the context.
    pub fn to_reals(&self, ctx: &PrecisionContext) -> (Vec<BigReal>, Vec<BigReal>) {
        (
            self.nodes.iter().map(|x| ctx.from_rational(x)).collect(),
            self.weights.iter().map(|w| ctx.from_rational(w)).collect(),
        )
    }

    /// `sum_i w_i f(x_i)`, accumulated left to right.
    pub fn integrate<F>(&self, mut f: F, ctx: &PrecisionContext) -> BigReal
    where
        F: FnMut(&BigReal) -> BigReal,
    {
        let mut acc = ctx.zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let fx = f(&ctx.from_rational(x));
            acc += fx * ctx.from_rational(w);
        }
        acc
    }

    /// `node_num,node_den,weight_num,weight_den` with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["node_num", "node_den", "weight_num", "weight_den"])?;
        for (x, wt) in self.nodes.iter().zip(&self.weights) {
            w.write_record([
                x.numer().to_string(),
                x.denom().to_string(),
                wt.numer().to_string(),
                wt.denom().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the format of [`write_csv`](Self::write_csv); the result is a
    /// custom measure even if it happens to equal an empirical one.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for record in rdr.records() {
            let record = record?;
            if record.len() != 4 {
                return Err(Error::Format(format!("expected 4 columns, found {}", record.len())));
            }
            let int = |i: usize| -> Result<Integer> {
                record[i].trim().parse::<Integer>().map_err(|e| Error::Parse(format!("{:?}: {e}", &record[i])))
            };
            let frac = |n: Integer, d: Integer| -> Result<Rational> {
                if d == 0 {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Rational::from((n, d)))
            };
            nodes.push(frac(int(0)?, int(1)?)?);
            weights.push(frac(int(2)?, int(3)?)?);
        }
        Self::new(nodes, weights)
    }
}

pub fn empirical_measure(level: u32) -> Result<DiscreteMeasure> {
    DiscreteMeasure::empirical(level)
}

fn lcm_of<'a>(values: impl Iterator<Item = &'a Integer>) -> Integer {
    values.fold(Integer::from(1), |acc, v| acc.lcm(v))
}

/// Moments `m_0..=m_{k_max}` of a discrete measure.
///
/// The sums are formed exactly over the common denominator
/// `lcm(weight dens) * lcm(node dens)^k` and rounded once, so each moment
/// is correctly rounded to the context. Cost grows with `k_max` times the
/// bit length of that denominator; intended for levels up to about 14.
pub fn discrete_moments(mu: &DiscreteMeasure, k_max: usize, ctx: &PrecisionContext) -> MomentVector {
    let node_lcm = lcm_of(mu.nodes.iter().map(|x| x.denom()));
    let weight_lcm = lcm_of(mu.weights.iter().map(|w| w.denom()));
    // x_i = c_i / node_lcm, w_i = u_i / weight_lcm
    let scaled_nodes: Vec<Integer> = mu
        .nodes
        .iter()
        .map(|x| x.numer() * Integer::from(&node_lcm / x.denom()))
        .collect();
    let mut powers: Vec<Integer> = mu
        .weights
        .iter()
        .map(|w| w.numer() * Integer::from(&weight_lcm / w.denom()))
        .collect();

    let mut values = Vec::with_capacity(k_max + 1);
    let mut denom = weight_lcm.clone();
    for k in 0..=k_max {
        if k > 0 {
            for (p, c) in powers.iter_mut().zip(&scaled_nodes) {
                *p *= c;
            }
            denom *= &node_lcm;
        }
        let sum: Integer = powers.iter().sum();
        values.push(ctx.from_rational(&Rational::from((sum, denom.clone()))));
    }

    let provenance = MomentProvenance {
        source: MomentSource::Discrete {
            level: match mu.source {
                MeasureSource::Level(n) => Some(n),
                MeasureSource::Custom => None,
            },
            symmetric: mu.is_symmetric(),
        },
        system_size: k_max,
        series_terms: 0,
        digits: ctx.digits(),
    };
    MomentVector::new(values, provenance)
}

/// `max_x |q_N(x) - q(x)|` for the empirical distribution function of
/// level `N`, evaluated exactly from both one-sided limits at every jump.
pub fn sup_distance(level: u32) -> Result<Rational> {
    const MAX: u32 = 14;
    if level == 0 || level > MAX {
        return Err(Error::LevelTooLarge { level, max: MAX });
    }
    let points = MinkowskiSequence::new(level)?.into_points();
    let m = points.len() as u64;
    let mut best = Rational::new();
    for (i, x) in points.iter().enumerate() {
        let qx = q_rational(x)?.into_rational();
        let before = Rational::from((i as u64, m));
        let after = Rational::from((i as u64 + 1, m));
        for step in [before, after] {
            let d = (step - &qx).abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}
