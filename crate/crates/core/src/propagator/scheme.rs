use std::fmt;

use crate::error::{Error, Result};
use crate::opalg::TauMeasure;

/// Averaging prescription for V in one time slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceScheme {
    Left,
    Right,
    Midpoint,
    UniformBJ,
    Mixture(TauMeasure),
}

impl SliceScheme {
    pub fn measure(&self) -> TauMeasure {
        match self {
            Self::Left => TauMeasure::left(),
            Self::Right => TauMeasure::right(),
            Self::Midpoint => TauMeasure::weyl(),
            Self::UniformBJ => TauMeasure::Uniform,
            Self::Mixture(m) => m.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "left" => Ok(Self::Left),
            "right" => Ok(Self::Right),
            "midpoint" | "weyl" => Ok(Self::Midpoint),
            "bj" | "uniform" | "uniformbj" | "uniform_bj" => Ok(Self::UniformBJ),
            other if other.starts_with("mix:") || other.starts_with("tau:") => Ok(Self::Mixture(TauMeasure::parse(s)?)),
            _ => Err(Error::InvalidInput(format!("unknown slice scheme '{s}'"))),
        }
    }

    /// Comma-separated list; mixtures may not appear in lists (their atoms use commas).
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        if s.trim_start().starts_with("mix:") {
            return Ok(vec![Self::parse(s)?]);
        }
        s.split(',').filter(|t| !t.trim().is_empty()).map(Self::parse).collect()
    }
}

impl fmt::Display for SliceScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Left => f.write_str("left"),
            Self::Right => f.write_str("right"),
            Self::Midpoint => f.write_str("midpoint"),
            Self::UniformBJ => f.write_str("bj"),
            Self::Mixture(m) => write!(f, "{m}"),
        }
    }
}
