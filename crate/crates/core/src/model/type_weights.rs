use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::graph::DepType;
use crate::error::{Error, Result};

pub const MIN_TYPE_WEIGHT: f64 = 0.1;
pub const MAX_TYPE_WEIGHT: f64 = 10.0;

/// Shipped defaults, one `TYPE = weight` line per dependency type.
pub const DEFAULT_TYPE_WEIGHTS: &str = include_str!("../../data/type_weights.txt");

/// Positive weight per dependency type, each within `[0.1, 10]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeWeights {
    weights: [f64; 13],
}

impl TypeWeights {
    /// Optimized defaults. MixIn is not produced for C, C++ or Java and is carried as 1.0.
    pub fn defaults() -> Self {
        TypeWeights::parse(DEFAULT_TYPE_WEIGHTS).expect("shipped type weights are valid")
    }

    pub fn uniform(value: f64) -> Result<Self> {
        check_range(DepType::Call, value)?;
        Ok(TypeWeights { weights: [value; 13] })
    }

    pub fn from_array(weights: [f64; 13]) -> Result<Self> {
        for t in DepType::ALL {
            check_range(t, weights[t.index()])?;
        }
        Ok(TypeWeights { weights })
    }

    pub fn get(&self, t: DepType) -> f64 {
        self.weights[t.index()]
    }

    pub fn set(&mut self, t: DepType, value: f64) -> Result<()> {
        check_range(t, value)?;
        self.weights[t.index()] = value;
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 13] {
        self.weights
    }

    /// Parses `TYPE = weight` lines. Blank lines and `#` comments are ignored;
    /// every one of the 13 types must be present exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = [f64::NAN; 13];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("type weights line {}: expected `TYPE = weight`", lineno + 1)))?;
            let t: DepType = key
                .trim()
                .parse()
                .map_err(|name| Error::UnknownDependencyTypes(vec![name]))?;
            let w: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("type weights line {}: bad number `{}`", lineno + 1, value.trim())))?;
            check_range(t, w)?;
            if !weights[t.index()].is_nan() {
                return Err(Error::Config(format!("type weights: `{t}` given twice")));
            }
            weights[t.index()] = w;
        }
        let missing: Vec<&str> = DepType::ALL
            .iter()
            .filter(|t| weights[t.index()].is_nan())
            .map(|t| t.as_str())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Config(format!("type weights missing: {}", missing.join(", "))));
        }
        Ok(TypeWeights { weights })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in DepType::ALL {
            let _ = writeln!(out, "{} = {}", t, self.get(t));
        }
        out
    }
}

impl Default for TypeWeights {
    fn default() -> Self {
        TypeWeights::defaults()
    }
}

fn check_range(t: DepType, w: f64) -> Result<()> {
    if !(MIN_TYPE_WEIGHT..=MAX_TYPE_WEIGHT).contains(&w) {
        return Err(Error::Config(format!(
            "weight {w} for `{t}` is outside [{MIN_TYPE_WEIGHT}, {MAX_TYPE_WEIGHT}]"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_published_table() {
        let tw = TypeWeights::defaults();
        let expected = [
            (DepType::Implement, 7.575),
            (DepType::Throw, 9.053),
            (DepType::Call, 0.177),
            (DepType::Create, 1.665),
            (DepType::ImplLink, 9.33),
            (DepType::Extend, 2.159),
            (DepType::Use, 0.509),
            (DepType::Parameter, 5.146),
            (DepType::Import, 8.300),
            (DepType::Cast, 0.701),
            (DepType::Return, 5.702),
            (DepType::Contain, 4.478),
            (DepType::MixIn, 1.0),
        ];
        for (t, w) in expected {
            assert_eq!(tw.get(t), w, "{t}");
        }
    }

    #[test]
    fn text_round_trips() {
        let tw = TypeWeights::defaults();
        assert_eq!(TypeWeights::parse(&tw.to_text()).unwrap(), tw);
    }

    #[test]
    fn out_of_range_and_missing_are_rejected() {
        assert!(TypeWeights::uniform(0.01).is_err());
        assert!(TypeWeights::parse("Call = 1").is_err());
        let bad = TypeWeights::defaults().to_text().replace("Call = 0.177", "Call = 11");
        assert!(TypeWeights::parse(&bad).is_err());
    }
}
