use std::fmt;

use serde::{Deserialize, Serialize};

/// Which special value γ takes at a place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GammaClass {
    Zero,
    MinusOne,
    Infinity,
    Generic,
}

impl fmt::Display for GammaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaClass::Zero => "Zero",
            GammaClass::MinusOne => "MinusOne",
            GammaClass::Infinity => "Infinity",
            GammaClass::Generic => "Generic",
        })
    }
}

impl std::str::FromStr for GammaClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" | "0" => Ok(GammaClass::Zero),
            "minusone" | "minus_one" | "-1" => Ok(GammaClass::MinusOne),
            "infinity" | "inf" => Ok(GammaClass::Infinity),
            "generic" => Ok(GammaClass::Generic),
            other => Err(format!("unknown gamma class '{other}'")),
        }
    }
}

/// Classification key at a place: the value class of γ, its ramification
/// order `d` toward that value, and `b = |ord β′|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalData {
    pub gamma_class: GammaClass,
    pub d: u32,
    pub b: u32,
}

impl LocalData {
    pub fn new(gamma_class: GammaClass, d: u32, b: u32) -> Self {
        LocalData { gamma_class, d, b }
    }

    /// `d ≥ 1` for the special classes, `d = 0` for generic places.
    pub fn is_valid(&self) -> bool {
        match self.gamma_class {
            GammaClass::Generic => self.d == 0,
            _ => self.d >= 1,
        }
    }
}
