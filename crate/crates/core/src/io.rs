//! JSON forms of the library's values. Rationals are strings (`"-1/4"`, `"3"`),
//! absent polynomial terms are `"-inf"`, and maps are keyed by point labels.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::PointConfiguration;
use crate::error::{Error, Result};
use crate::mechanism::{AffineMaximizer, Mechanism};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::subdivision::{Cell, Lifting, Subdivision};
use crate::tropical::{Coefficient, TropicalPolynomial};

pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self>;

    /// Pretty-printed, newline-terminated.
    fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("values serialize");
        s.push('\n');
        s
    }

    fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(parse_err)?;
        Self::from_json(&v)
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn decode<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(parse_err)
}

fn encode<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("values serialize")
}

fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDto {
    dimension: usize,
    points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Json for PointConfiguration {
    fn to_json(&self) -> Value {
        encode(&ConfigDto {
            dimension: self.dimension(),
            points: self.points().to_vec(),
            labels: Some(self.labels().to_vec()),
        })
    }

    /// Accepts the object form or a shorthand string such as `"cube:3"`.
    fn from_json(value: &Value) -> Result<Self> {
        if let Value::String(s) = value {
            return s.parse();
        }
        let dto: ConfigDto = decode(value)?;
        if dto.points.iter().any(|p| p.len() != dto.dimension) {
            return Err(Error::Parse("point length differs from the stated dimension".into()));
        }
        let config = PointConfiguration::new(dto.points, dto.labels)?;
        // Keep the structured kind when the points match a standard configuration.
        if let Some(short) = standard_shorthand(&config) {
            return short.parse();
        }
        Ok(config)
    }
}

fn standard_shorthand(config: &PointConfiguration) -> Option<String> {
    let d = config.dimension();
    let candidates = [format!("cube:{d}")];
    candidates.into_iter().find(|s| {
        s.parse::<PointConfiguration>()
            .map(|c| c.points() == config.points() && c.labels() == config.labels())
            .unwrap_or(false)
    })
}

fn config_to_json(config: &PointConfiguration) -> Value {
    match config.shorthand() {
        Some(s) => Value::String(s),
        None => config.to_json(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubdivisionDto {
    config: Value,
    cells: Vec<Vec<usize>>,
}

impl Json for Subdivision {
    fn to_json(&self) -> Value {
        encode(&SubdivisionDto {
            config: config_to_json(self.config()),
            cells: self.cells().iter().map(|c| c.indices().to_vec()).collect(),
        })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let dto: SubdivisionDto = decode(value)?;
        let config = Arc::new(PointConfiguration::from_json(&dto.config)?);
        let n = config.len();
        if let Some(bad) = dto.cells.iter().flatten().find(|&&i| i >= n) {
            return Err(Error::Parse(format!("cell index {bad} out of range for {n} points")));
        }
        if dto.cells.iter().any(Vec::is_empty) {
            return Err(Error::Parse("empty cell".into()));
        }
        Ok(Subdivision::new(config, dto.cells.into_iter().map(Cell::new)))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftingDto {
    heights: Vec<String>,
}

impl Json for Lifting {
    fn to_json(&self) -> Value {
        encode(&LiftingDto { heights: strings(&self.heights) })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let dto: LiftingDto = decode(value)?;
        Ok(Lifting::new(rationals(&dto.heights)?))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialDto {
    support: Vec<Vec<i64>>,
    coeffs: Vec<String>,
}

impl Json for TropicalPolynomial {
    fn to_json(&self) -> Value {
        encode(&PolynomialDto {
            support: self.support().to_vec(),
            coeffs: self.coeffs().iter().map(Coefficient::to_string).collect(),
        })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let dto: PolynomialDto = decode(value)?;
        let coeffs = dto
            .coeffs
            .iter()
            .map(|s| match s.trim() {
                "-inf" => Ok(Coefficient::NegInfinity),
                t => parse_rational(t).map(Coefficient::Finite),
            })
            .collect::<Result<Vec<_>>>()?;
        TropicalPolynomial::new(dto.support, coeffs)
    }
}

fn keyed<'a>(labels: &[String], values: &'a BTreeMap<String, String>, what: &str) -> Result<Vec<&'a String>> {
    if values.len() != labels.len() {
        return Err(Error::Parse(format!("expected {} {what}, got {}", labels.len(), values.len())));
    }
    labels
        .iter()
        .map(|l| values.get(l).ok_or_else(|| Error::Parse(format!("missing {what} for {l}"))))
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MechanismDto {
    items: usize,
    payments: BTreeMap<String, String>,
}

impl Json for Mechanism {
    fn to_json(&self) -> Value {
        let config = self.config();
        let payments =
            config.labels().iter().cloned().zip(self.payments().iter().map(format_rational)).collect();
        encode(&MechanismDto { items: self.items(), payments })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let dto: MechanismDto = decode(value)?;
        let config = crate::config::cube_config(dto.items)?;
        let raw = keyed(config.labels(), &dto.payments, "payments")?;
        let payments = raw.into_iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Mechanism::new(dto.items, payments)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineDto {
    players: usize,
    items: usize,
    weights: Vec<String>,
    biases: BTreeMap<String, String>,
}

impl Json for AffineMaximizer {
    fn to_json(&self) -> Value {
        let config = self.config();
        let biases = config.labels().iter().cloned().zip(self.biases().iter().map(format_rational)).collect();
        encode(&AffineDto { players: self.players(), items: self.items(), weights: strings(self.weights()), biases })
    }

    fn from_json(value: &Value) -> Result<Self> {
        let dto: AffineDto = decode(value)?;
        let config = crate::config::simplex_product_config(dto.players, dto.items)?;
        let raw = keyed(config.labels(), &dto.biases, "biases")?;
        let biases = raw.into_iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        AffineMaximizer::new(dto.players, dto.items, rationals(&dto.weights)?, biases)
    }
}
