//! Global invariants of a classified fibration over a base curve of genus g.
//!
//! Sums over points of the base are sums over places weighted by degree.

use num_traits::{Signed, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::classifier::{classify, ClassifyError, FibreKind, FibreRecord};
use crate::local::{GammaClass, LocalData};
use crate::ratfunc::{critical_places_with_smooth, map_degree, Place, RatFuncError};
use crate::weierstrass::WeierstrassDatum;
use crate::Q;

pub const CY_RATIONALE: &str = "degree-0 necessary condition only";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("zeros of gamma have total order {zeros}, more than the map degree {n}")]
    ZeroOrderExceedsDegree { zeros: u64, n: u64 },
}

/// One place of the base with its local data and fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrePlace {
    /// `None` for hand-built data given only by degree.
    pub place: Option<Place>,
    pub degree: u32,
    pub local: LocalData,
    pub record: FibreRecord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationData {
    pub genus: u32,
    pub map_degree: u64,
    pub places: Vec<FibrePlace>,
}

impl FibrationData {
    pub fn new(genus: u32, map_degree: u64) -> Self {
        FibrationData { genus, map_degree, places: Vec::new() }
    }

    pub fn push(&mut self, place: Option<Place>, degree: u32, local: LocalData) -> Result<(), ClassifyError> {
        let record = classify(&local)?;
        self.places.push(FibrePlace { place, degree, local, record });
        Ok(())
    }

    /// Rational base, all critical places of `(β′, γ)` including smooth
    /// fibres where β′ has even order.
    pub fn from_datum(datum: &WeierstrassDatum) -> Result<Self, InvariantsError> {
        let n = map_degree(&datum.gamma)? as u64;
        let mut data = FibrationData::new(0, n);
        for (place, local) in critical_places_with_smooth(&datum.gamma, &datum.beta_prime)? {
            let deg = place.degree();
            data.push(Some(place), deg, local)?;
        }
        let zeros = data.weighted_sum(GammaClass::Zero, |p| p.local.d as u64);
        if zeros > n {
            return Err(InvariantsError::ZeroOrderExceedsDegree { zeros, n });
        }
        Ok(data)
    }

    fn weighted_sum(&self, class: GammaClass, f: impl Fn(&FibrePlace) -> u64) -> u64 {
        self.places.iter().filter(|p| p.local.gamma_class == class).map(|p| p.degree as u64 * f(p)).sum()
    }

    /// `Σ deg·d` over the places in each special class (Zero, MinusOne, Infinity).
    pub fn class_orders(&self) -> [u64; 3] {
        [GammaClass::Zero, GammaClass::MinusOne, GammaClass::Infinity].map(|c| self.weighted_sum(c, |p| p.local.d as u64))
    }
}

pub fn parity_check(data: &FibrationData) -> bool {
    data.places.iter().map(|p| p.degree as u64 * (p.local.b as u64 % 2)).sum::<u64>() % 2 == 0
}

/// `(2g − 2) + N/6 + Σ deg·S`.
pub fn canonical_degree(data: &FibrationData) -> Q {
    let mut k = Q::from_integer((2 * data.genus as i64 - 2).into()) + Q::new((data.map_degree as i64).into(), 6.into());
    for p in &data.places {
        k += Q::from_integer(p.degree.into()) * &p.record.s;
    }
    k
}

/// Betti numbers with the conditions under which they are not established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Betti {
    pub b: [Option<i64>; 7],
    /// Indices of the reported numbers that depend on an unchecked hypothesis.
    pub flagged: Vec<usize>,
    pub flags: Vec<String>,
}

impl Betti {
    pub fn is_flagged(&self, i: usize) -> bool {
        self.flagged.contains(&i)
    }

    pub fn is_complete(&self) -> bool {
        self.b.iter().all(Option::is_some) && self.flagged.is_empty()
    }
}

impl Serialize for Betti {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(8))?;
        for (i, v) in self.b.iter().enumerate() {
            m.serialize_entry(&format!("b{i}"), v)?;
        }
        m.serialize_entry("flags", &self.flags)?;
        m.end()
    }
}

/// Fibres at γ = −1 other than III with d = 1.
fn smoothness_violations(data: &FibrationData) -> Vec<String> {
    let mut bad: Vec<String> = data
        .places
        .iter()
        .filter(|p| p.local.gamma_class == GammaClass::MinusOne)
        .filter(|p| !(p.record.fibre_type.kind == FibreKind::III && p.local.d == 1))
        .map(|p| format!("{} with d={}", p.record.fibre_type.kind, p.local.d))
        .collect();
    bad.dedup();
    bad
}

pub fn betti(data: &FibrationData) -> Betti {
    let g = data.genus as i64;
    let b1 = 2 * g;
    let b2 = 20 + data.places.iter().map(|p| p.degree as i64 * (p.record.components as i64 - 1)).sum::<i64>();
    let b3 = 6 * (g - 1) + data.places.iter().map(|p| p.degree as i64 * p.record.r as i64).sum::<i64>();

    let mut flags = Vec::new();
    let mut flagged = Vec::new();
    let bad = smoothness_violations(data);
    if !bad.is_empty() {
        flags.push(format!(
            "b2, b3 require smoothness: smoothness criterion violated ({} at gamma=-1)",
            bad.join(", ")
        ));
        flagged.extend([2, 3, 4]);
    }
    let i0star_off_minus_one = data
        .places
        .iter()
        .any(|p| p.record.fibre_type.kind == FibreKind::I0Star && p.local.gamma_class != GammaClass::MinusOne);
    let b3 = if i0star_off_minus_one {
        flags.push("b3 withheld: I0* fibre with gamma != -1".to_string());
        flagged.retain(|&i| i != 3);
        None
    } else {
        Some(b3)
    };
    Betti { b: [Some(1), Some(b1), Some(b2), b3, Some(b2), Some(b1), Some(1)], flagged, flags }
}

/// `2 − 2b₁ + 2b₂ − b₃`, withheld unless every number is present and unflagged.
pub fn euler(b: &Betti) -> Option<i64> {
    if !b.is_complete() {
        return None;
    }
    let v = |i: usize| b.b[i].unwrap();
    Some(2 - 2 * v(1) + 2 * v(2) - v(3))
}

pub fn cy_candidate(data: &FibrationData) -> bool {
    data.genus == 0 && canonical_degree(data).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalReport {
    pub parity_ok: bool,
    pub canonical_degree: Q,
    pub betti: Betti,
    pub euler: Option<i64>,
    pub cy_candidate: bool,
    pub notes: Vec<String>,
}

impl GlobalReport {
    pub fn compute(data: &FibrationData) -> Self {
        let betti = betti(data);
        let euler = euler(&betti);
        let cy = cy_candidate(data);
        let mut notes = Vec::new();
        if cy {
            notes.push(format!("Calabi-Yau candidate: {CY_RATIONALE}"));
        }
        let k = canonical_degree(data);
        if k.is_positive() && data.genus == 0 {
            notes.push("canonical degree is positive".to_string());
        }
        GlobalReport { parity_ok: parity_check(data), canonical_degree: k, betti, euler, cy_candidate: cy, notes }
    }
}

impl Serialize for GlobalReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GlobalReport", 6)?;
        st.serialize_field("parity_ok", &self.parity_ok)?;
        st.serialize_field("canonical_degree", &crate::q_to_string(&self.canonical_degree))?;
        st.serialize_field("betti", &self.betti)?;
        st.serialize_field("euler", &self.euler)?;
        st.serialize_field("cy_candidate", &self.cy_candidate)?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}
