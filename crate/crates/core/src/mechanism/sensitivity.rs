use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::cube_config;
use crate::error::{Error, Result};
use crate::subdivision::{enumerate_triangulations, EnumerationOptions, Subdivision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// `| |a|₁ − |b|₁ |`
    Cardinality,
    /// `|a − b|₁`
    Hamming,
}

impl Metric {
    pub fn distance(self, a: &[i64], b: &[i64]) -> u64 {
        match self {
            Metric::Cardinality => (a.iter().sum::<i64>() - b.iter().sum::<i64>()).unsigned_abs(),
            Metric::Hamming => a.iter().zip(b).map(|(x, y)| (x - y).unsigned_abs()).sum(),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cardinality" => Ok(Metric::Cardinality),
            "hamming" => Ok(Metric::Hamming),
            _ => Err(Error::Parse(format!("unknown metric {s:?}"))),
        }
    }
}

/// Largest distance between two points of a common cell.
pub fn sensitivity(sub: &Subdivision, metric: Metric) -> u64 {
    let config = sub.config();
    sub.cells()
        .iter()
        .flat_map(|c| {
            let idx = c.indices();
            idx.iter().enumerate().flat_map(move |(k, &a)| idx[k + 1..].iter().map(move |&b| (a, b)))
        })
        .map(|(a, b)| metric.distance(config.point(a), config.point(b)))
        .max()
        .unwrap_or(0)
}

pub fn cardinality_sensitivity(sub: &Subdivision) -> u64 {
    sensitivity(sub, Metric::Cardinality)
}

pub fn hamming_sensitivity(sub: &Subdivision) -> u64 {
    sensitivity(sub, Metric::Hamming)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Minimum over all triangulations of the cube.
    Exhaustive,
    /// Known lower bound and the value of an explicit construction.
    Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalSensitivity {
    pub items: usize,
    pub metric: Metric,
    pub lower: u64,
    pub upper: u64,
    pub method: Method,
}

impl OptimalSensitivity {
    pub fn exact(&self) -> Option<u64> {
        (self.method == Method::Exhaustive).then_some(self.lower)
    }
}

/// Smallest achievable sensitivity over all regular subdivisions of `[0,1]^m`.
///
/// Refining a subdivision never increases a within-cell distance and every
/// regular subdivision has a regular triangulation refining it, so for small
/// `m` the minimum over the (all regular) triangulations is the exact value.
pub fn optimal_sensitivity(items: usize, metric: Metric) -> Result<OptimalSensitivity> {
    if !(1..=10).contains(&items) {
        return Err(Error::OutOfRange(format!("item count {items} not in 1..=10")));
    }
    if items <= 3 {
        let config = Arc::new(cube_config(items)?);
        let all = enumerate_triangulations(&config, &EnumerationOptions::default())?;
        let best = all
            .representatives
            .iter()
            .map(|t| sensitivity(t, metric))
            .min()
            .ok_or_else(|| Error::Invariant("no triangulation found".into()))?;
        return Ok(OptimalSensitivity { items, metric, lower: best, upper: best, method: Method::Exhaustive });
    }
    let (lower, upper) = match metric {
        Metric::Cardinality => (1, 1),
        Metric::Hamming => (2, items as u64 - 1),
    };
    Ok(OptimalSensitivity { items, metric, lower, upper, method: Method::Bounds })
}
