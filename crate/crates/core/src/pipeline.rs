//! Configuration in, report out: parse, find places, classify, aggregate.

use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::classifier::{ClassifyError, FibreRecord};
use crate::invariants::{FibrationData, GlobalReport, InvariantsError};
use crate::local::{GammaClass, LocalData};
use crate::ratfunc::{parse_ratfunc, RatFuncError, RationalFunction};
use crate::weierstrass::{singular_points_check, Sampler, WeierstrassDatum, WeierstrassError};
use crate::{q_to_string, Q};

pub const SCHEMA: &str = "k3fib-report/1";
pub const TOOL: &str = "k3fib";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn class_from_str<'de, D: Deserializer<'de>>(d: D) -> Result<GammaClass, D::Error> {
    String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
}

fn one() -> u32 {
    1
}

/// Explicit local data at a place of the given degree.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceSpec {
    #[serde(deserialize_with = "class_from_str")]
    pub gamma_class: GammaClass,
    #[serde(default)]
    pub d: u32,
    #[serde(default)]
    pub b: u32,
    #[serde(default = "one")]
    pub degree: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub base_genus: u32,
    pub gamma: Option<String>,
    pub beta_prime: Option<String>,
    pub places: Option<Vec<PlaceSpec>>,
    /// Degree N of γ; inferred from the places when absent.
    pub map_degree: Option<u64>,
}

impl Config {
    pub fn from_function(gamma: &str, beta_prime: &str) -> Self {
        Config { gamma: Some(gamma.into()), beta_prime: Some(beta_prime.into()), ..Default::default() }
    }

    pub fn from_places(places: Vec<PlaceSpec>) -> Self {
        Config { places: Some(places), ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot parse {field}: {source}")]
    Parse { field: &'static str, source: RatFuncError },
    #[error("gamma is constant: the family is isotrivial")]
    Isotrivial,
    #[error("invalid places list: {0}")]
    InvalidPlaces(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl PipelineError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Parse { .. } => 2,
            PipelineError::Inconsistency(_) => 3,
            PipelineError::Internal(_) => 4,
            PipelineError::Isotrivial => 5,
            PipelineError::InvalidPlaces(_) => 6,
        }
    }
}

impl From<ClassifyError> for PipelineError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::InvalidLocalData(_) => PipelineError::InvalidPlaces(e.to_string()),
            ClassifyError::TableIntegrity { .. } => PipelineError::Inconsistency(e.to_string()),
        }
    }
}

impl From<InvariantsError> for PipelineError {
    fn from(e: InvariantsError) -> Self {
        match e {
            InvariantsError::RatFunc(RatFuncError::Isotrivial) => PipelineError::Isotrivial,
            InvariantsError::RatFunc(r) => PipelineError::Internal(r.to_string()),
            InvariantsError::Classify(c) => c.into(),
            InvariantsError::ZeroOrderExceedsDegree { .. } => PipelineError::Inconsistency(e.to_string()),
        }
    }
}

/// One row of the per-place table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceRow {
    pub place: String,
    pub degree: u32,
    pub gamma_class: GammaClass,
    pub d: u32,
    pub b: u32,
    #[serde(flatten)]
    pub fibre: FibreRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub base_genus: u32,
    pub gamma: Option<String>,
    pub beta_prime: Option<String>,
    pub map_degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub input: InputEcho,
    pub places: Vec<PlaceRow>,
    pub global: GlobalReport,
    pub checks: Vec<String>,
}

fn parse_field(field: &'static str, s: &str) -> Result<RationalFunction, PipelineError> {
    parse_ratfunc(s).map_err(|source| PipelineError::Parse { field, source })
}

fn data_from_places(config: &Config, specs: &[PlaceSpec]) -> Result<FibrationData, PipelineError> {
    let mut data = FibrationData::new(config.base_genus, 0);
    for (i, s) in specs.iter().enumerate() {
        if s.degree == 0 {
            return Err(PipelineError::InvalidPlaces(format!("place {i}: degree must be positive")));
        }
        let local = LocalData::new(s.gamma_class, s.d, s.b);
        if !local.is_valid() {
            return Err(PipelineError::InvalidPlaces(format!(
                "place {i}: d = {} is not allowed for gamma class {}",
                s.d, s.gamma_class
            )));
        }
        data.push(None, s.degree, local)?;
    }
    let orders = data.class_orders();
    let nonzero: Vec<u64> = orders.iter().copied().filter(|&o| o > 0).collect();
    data.map_degree = match config.map_degree {
        Some(n) => {
            if let Some(&o) = orders.iter().find(|&&o| o > n) {
                return Err(PipelineError::Inconsistency(format!(
                    "places carry total order {o} over one value of gamma, more than map_degree {n}"
                )));
            }
            n
        }
        None => {
            if nonzero.windows(2).any(|w| w[0] != w[1]) {
                return Err(PipelineError::Inconsistency(format!(
                    "total orders over gamma = 0, -1, inf are {orders:?}; give map_degree explicitly"
                )));
            }
            nonzero.first().copied().unwrap_or(0)
        }
    };
    Ok(data)
}

/// Rational base point where the fibre is a generic Weierstrass quartic.
fn generic_base_point(datum: &WeierstrassDatum, rng: &mut Sampler) -> Option<(Q, Q, Q)> {
    for _ in 0..200 {
        let t = rng.rational();
        let (Some(g), Some(bp)) = (datum.gamma.eval(&t), datum.beta_prime.eval(&t)) else { continue };
        if g != Q::from_integer(0.into()) && g != Q::from_integer((-1).into()) && bp != Q::from_integer(0.into()) {
            return Some((t, g, bp));
        }
    }
    None
}

pub fn run(config: &Config, options: &Options) -> Result<Report, PipelineError> {
    let mut checks = Vec::new();
    let (data, gamma_s, beta_s) = match (&config.gamma, &config.places) {
        (Some(_), Some(_)) => {
            return Err(PipelineError::Config("give either gamma or places, not both".into()));
        }
        (None, None) => return Err(PipelineError::Config("one of gamma or places is required".into())),
        (None, Some(specs)) => {
            if config.beta_prime.is_some() {
                return Err(PipelineError::Config("beta_prime is only used together with gamma".into()));
            }
            (data_from_places(config, specs)?, None, None)
        }
        (Some(g), None) => {
            if config.base_genus > 0 {
                return Err(PipelineError::Config("base_genus > 0 requires an explicit places list".into()));
            }
            if config.map_degree.is_some() {
                return Err(PipelineError::Config("map_degree is computed from gamma; remove it".into()));
            }
            let b = config.beta_prime.clone().unwrap_or_else(|| "1".into());
            let gamma = parse_field("gamma", g)?;
            let beta_prime = parse_field("beta_prime", &b)?;
            let datum = WeierstrassDatum::new(beta_prime, gamma).map_err(|e| match e {
                WeierstrassError::ConstantGamma => PipelineError::Isotrivial,
                WeierstrassError::ZeroBetaPrime => PipelineError::Config("beta_prime must be nonzero".into()),
                other => PipelineError::Internal(other.to_string()),
            })?;
            let data = FibrationData::from_datum(&datum)?;
            if !crate::invariants::parity_check(&data) {
                return Err(PipelineError::Internal("parity fails for a rational beta'".into()));
            }
            let mut rng = Sampler::new(options.seed);
            if let Some((t, g, bp)) = generic_base_point(&datum, &mut rng) {
                let r = singular_points_check(&bp, &g, 20, options.seed)
                    .map_err(|e| PipelineError::Internal(e.to_string()))?;
                let status = if r.passed() { "OK" } else { "FAIL" };
                checks.push(format!(
                    "generic fibre at t={}: singular exactly at P1..P4 on 20 sampled points: {status}",
                    q_to_string(&t)
                ));
                if !r.passed() {
                    return Err(PipelineError::Internal(r.to_string()));
                }
            }
            (data, Some(g.clone()), Some(b))
        }
    };
    let global = GlobalReport::compute(&data);
    let places = data
        .places
        .iter()
        .map(|p| PlaceRow {
            place: p.place.as_ref().map(|pl| pl.to_string()).unwrap_or_else(|| "-".into()),
            degree: p.degree,
            gamma_class: p.local.gamma_class,
            d: p.local.d,
            b: p.local.b,
            fibre: p.record.clone(),
        })
        .collect();
    Ok(Report {
        schema: SCHEMA,
        tool: TOOL,
        version: VERSION,
        seed: options.seed,
        input: InputEcho { base_genus: config.base_genus, gamma: gamma_s, beta_prime: beta_s, map_degree: data.map_degree },
        places,
        global,
        checks,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human-readable report with the same numbers as the JSON form.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} ({}, seed {})", self.tool, self.version, self.schema, self.seed);
        if let (Some(g), Some(b)) = (&self.input.gamma, &self.input.beta_prime) {
            let _ = writeln!(s, "gamma = {g}\nbeta' = {b}");
        }
        let _ = writeln!(s, "base genus {}, map degree {}\n", self.input.base_genus, self.input.map_degree);

        let header = ["place", "deg", "class", "d", "b", "type", "C", "R", "S", "det", "mult"];
        let rows: Vec<[String; 11]> = self
            .places
            .iter()
            .map(|p| {
                let f = &p.fibre;
                let ty = if f.fibre_type.singular { format!("{} (sing)", f.fibre_type.kind) } else { f.fibre_type.kind.to_string() };
                [
                    p.place.clone(),
                    p.degree.to_string(),
                    p.gamma_class.to_string(),
                    p.d.to_string(),
                    p.b.to_string(),
                    ty,
                    f.components.to_string(),
                    f.r.to_string(),
                    q_to_string(&f.s),
                    f.det.to_string(),
                    f.max_multiplicity.to_string(),
                ]
            })
            .collect();
        let widths: Vec<usize> =
            (0..11).map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap()).collect();
        let line = |cells: Vec<&str>| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
        };
        let _ = writeln!(s, "{}", line(header.to_vec()));
        for (r, p) in rows.iter().zip(&self.places) {
            let _ = writeln!(s, "{}", line(r.iter().map(String::as_str).collect()));
            let _ = writeln!(s, "    monodromy {}", p.fibre.monodromy);
            if let Some(n) = &p.fibre.note {
                let _ = writeln!(s, "    note: {n}");
            }
        }

        let g = &self.global;
        let _ = writeln!(s);
        let _ = writeln!(s, "parity_ok: {}", g.parity_ok);
        let _ = writeln!(s, "canonical_degree: {}", q_to_string(&g.canonical_degree));
        let betti: Vec<String> = g
            .betti
            .b
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let v = b.map(|v| v.to_string()).unwrap_or_else(|| "withheld".into());
                let mark = if g.betti.is_flagged(i) { " (flagged)" } else { "" };
                format!("b{i}={v}{mark}")
            })
            .collect();
        let _ = writeln!(s, "betti: {}", betti.join(" "));
        let _ = writeln!(s, "euler: {}", g.euler.map(|e| e.to_string()).unwrap_or_else(|| "withheld".into()));
        let _ = writeln!(s, "cy_candidate: {}", g.cy_candidate);
        for f in &g.betti.flags {
            let _ = writeln!(s, "flag: {f}");
        }
        for n in &g.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "check: {c}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(r: &Report) -> Vec<String> {
        r.places.iter().map(|p| p.fibre.fibre_type.kind.to_string()).collect()
    }

    #[test]
    fn linear_example() {
        let r = run(&Config::from_function("t", "1"), &Options::default()).unwrap();
        assert_eq!(kinds(&r), ["I1", "III", "II*"]);
        assert_eq!(q_to_string(&r.global.canonical_degree), "-1/1");
        assert_eq!(r.checks.len(), 1);
    }

    #[test]
    fn sextic_example() {
        let r = run(&Config::from_function("-(t^6)", "t^2-1"), &Options::default()).unwrap();
        assert_eq!(r.places.len(), 6);
        assert_eq!(kinds(&r).iter().filter(|k| *k == "III*").count(), 2);
        assert!(r.global.cy_candidate);
        let inf = r.places.iter().find(|p| p.place == "inf").unwrap();
        assert_eq!((inf.fibre.fibre_type.kind.to_string(), inf.d, inf.b), ("I0".to_string(), 6, 2));
    }

    #[test]
    fn single_generic_place() {
        let cfg = Config::from_places(vec![PlaceSpec { gamma_class: GammaClass::Generic, d: 0, b: 1, degree: 1 }]);
        let r = run(&cfg, &Options::default()).unwrap();
        assert!(!r.global.parity_ok);
        assert_eq!(kinds(&r), ["I0*"]);
    }

    #[test]
    fn errors_have_distinct_codes() {
        let parse = run(&Config::from_function("t+", "1"), &Options::default()).unwrap_err();
        assert_eq!(parse.exit_code(), 2);
        let iso = run(&Config::from_function("3", "1"), &Options::default()).unwrap_err();
        assert_eq!(iso.exit_code(), 5);
        let bad = Config::from_places(vec![PlaceSpec { gamma_class: GammaClass::Zero, d: 0, b: 0, degree: 1 }]);
        assert_eq!(run(&bad, &Options::default()).unwrap_err().exit_code(), 6);
        let mut genus = Config::from_function("t", "1");
        genus.base_genus = 1;
        assert_eq!(run(&genus, &Options::default()).unwrap_err().exit_code(), 2);
        let mismatch = Config::from_places(vec![
            PlaceSpec { gamma_class: GammaClass::Zero, d: 2, b: 0, degree: 1 },
            PlaceSpec { gamma_class: GammaClass::Infinity, d: 1, b: 0, degree: 1 },
        ]);
        assert_eq!(run(&mismatch, &Options::default()).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn deterministic_json() {
        let cfg = Config::from_function("(t^3-2)/(t^2+1)", "t+5");
        let a = run(&cfg, &Options { seed: 9 }).unwrap().to_json();
        let b = run(&cfg, &Options { seed: 9 }).unwrap().to_json();
        assert_eq!(a, b);
    }
}
