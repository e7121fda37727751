//! Pass/fail reports for the built-in verification suites.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn record(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Record an equality check, with both sides in the detail.
    pub fn expect_eq<T: PartialEq + fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) {
        let passed = got == want;
        let detail = if passed { format!("{got:?}") } else { format!("got {got:?}, expected {want:?}") };
        self.record(name, passed, detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "OK" } else { "FAIL" };
            writeln!(f, "[{}] {} {}: {}", self.suite, tag, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Names accepted by [`run_suite`].
pub const SUITES: &[&str] = &["lattice", "toric", "monodromy", "counts", "weierstrass", "all"];

/// Run a named verification suite; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64) -> Option<Vec<CheckReport>> {
    use crate::{classifier, lattice, weierstrass};
    let one = |n: &str| -> CheckReport {
        match n {
            "lattice" => lattice::verify_all(),
            "toric" => weierstrass::verify_toric(),
            "monodromy" => classifier::table_crosscheck(),
            "counts" => classifier::counts_check(1000),
            _ => weierstrass_suite(seed),
        }
    };
    match name {
        "all" => Some(SUITES[..5].iter().map(|n| one(n)).collect()),
        n if SUITES.contains(&n) => Some(vec![one(n)]),
        _ => None,
    }
}

fn weierstrass_suite(seed: u64) -> CheckReport {
    use crate::weierstrass::{
        canonicalize_quartic, singular_points_check, verify_derivation_chain, weierstrass_equation, GammaValue, Sampler,
    };
    let mut r = CheckReport::new("weierstrass");
    let mut rng = Sampler::new(seed);
    let (alpha, beta) = (rng.nonzero(), rng.nonzero());
    match verify_derivation_chain(&alpha, &beta, 20, seed) {
        Ok(c) => r.merge(c),
        Err(e) => r.record("derivation chain", false, e.to_string()),
    }
    let mut round_trip = true;
    for _ in 0..100 {
        let (bp, g) = (rng.nonzero(), rng.nonzero());
        let form = weierstrass_equation(&bp, &GammaValue::Finite(g.clone())).map(|w| w.form);
        let back = form.ok().and_then(|f| canonicalize_quartic(&f).ok());
        round_trip &= back.is_some_and(|c| c.beta_prime == bp && c.gamma == GammaValue::Finite(g));
    }
    r.record("canonicalize inverts the Weierstrass form", round_trip, format!("100 samples, seed {seed}"));
    let mut g = rng.nonzero();
    if g == crate::Q::from_integer((-1).into()) {
        g = crate::Q::from_integer(2.into());
    }
    match singular_points_check(&rng.nonzero(), &g, 20, seed) {
        Ok(c) => r.merge(c),
        Err(e) => r.record("singular points", false, e.to_string()),
    }
    r
}
