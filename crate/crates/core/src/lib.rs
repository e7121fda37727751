//! Exact classification of singular fibres of threefolds fibred by
//! M1-polarized K3 surfaces over P¹, starting from the Weierstrass datum
//! (β′, γ). Each place gets local data and a fibre type with its monodromy;
//! the global pass adds the canonical degree and Betti numbers.
//!
//! Everything is exact: rationals are [`Q`], cyclotomic entries live in Z[ω].

pub mod classifier;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod local;
pub mod monodromy;
pub mod pipeline;
pub mod ratfunc;
pub mod selfcheck;
pub mod weierstrass;

/// Exact rational number.
pub type Q = num_rational::BigRational;

pub use classifier::{classify, FibreKind, FibreRecord, FibreType, MaxMultiplicity};
pub use invariants::{FibrationData, GlobalReport};
pub use local::{GammaClass, LocalData};
pub use monodromy::{CycInt, Mat3};
pub use pipeline::{Config, Options, PipelineError, PlaceSpec, Report};
pub use ratfunc::{Place, Polynomial, RatFuncError, RationalFunction};

/// Parse a decimal or `p/q` rational.
pub fn parse_q(s: &str) -> Option<Q> {
    s.trim().parse().ok()
}

/// `p/q` form with an explicit denominator, e.g. `-1/1`.
pub fn q_to_string(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
