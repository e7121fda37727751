//! Lattices and intersection numbers on the generic fibre.
//!
//! The generic fibre carries 21 smooth rational (−2)-curves: two A7 chains
//! `E1..E7`, `F1..F7` joined through `Lx`, the chain `D1–D2–D3` joining `Ly`
//! to `Lz`, and `C` meeting only `Lx`. Linear equivalence of divisors is
//! checked numerically, by pairing against all 21 curves.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::linalg::{self, block_sum, IntMatrix};
use crate::selfcheck::CheckReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeName {
    H,
    E8,
    A1,
    M1,
    M1Perp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntLattice {
    pub gram: IntMatrix,
}

impl IntLattice {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.gram)
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&self.gram)
    }

    /// `(positive, negative)` index of inertia.
    pub fn signature(&self) -> (usize, usize) {
        let (p, n, _) = linalg::inertia(&self.gram);
        (p, n)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.gram.len();
        (0..n).all(|i| (0..n).all(|j| self.gram[i][j] == self.gram[j][i]))
    }
}

fn hyperbolic() -> IntMatrix {
    vec![vec![0, 1], vec![1, 0]]
}

/// Negative-definite E8: nodes 1..7 form a chain and node 8 is attached to node 3.
fn e8() -> IntMatrix {
    let mut m = vec![vec![0; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -2;
    }
    let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, i + 1)).collect();
    edges.push((2, 7));
    for (a, b) in edges {
        m[a][b] = 1;
        m[b][a] = 1;
    }
    m
}

pub fn gram(name: LatticeName) -> IntLattice {
    let gram = match name {
        LatticeName::H => hyperbolic(),
        LatticeName::E8 => e8(),
        LatticeName::A1 => vec![vec![-2]],
        LatticeName::M1 => block_sum(&[hyperbolic(), e8(), e8(), vec![vec![-2]]]),
        LatticeName::M1Perp => block_sum(&[hyperbolic(), vec![vec![2]]]),
    };
    IntLattice { gram }
}

pub const CURVE_NAMES: [&str; 21] = [
    "E1", "E2", "E3", "E4", "E5", "E6", "E7", "F1", "F2", "F3", "F4", "F5", "F6", "F7", "D1", "D2",
    "D3", "Lx", "Ly", "Lz", "C",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveConfig {
    pub names: Vec<String>,
    pub intersection: IntMatrix,
}

impl CurveConfig {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn curve(&self, name: &str) -> DivisorClass {
        self.class(&[(name, 1)])
    }

    /// Class from `(curve name, coefficient)` terms. Panics on an unknown name.
    pub fn class(&self, terms: &[(&str, i64)]) -> DivisorClass {
        let mut coeffs = vec![0; self.len()];
        for (name, c) in terms {
            let i = self.index(name).unwrap_or_else(|| panic!("unknown curve {name}"));
            coeffs[i] += c;
        }
        DivisorClass { coeffs }
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        let n = self.len();
        (0..n)
            .map(|i| a.coeffs[i] * (0..n).map(|j| self.intersection[i][j] * b.coeffs[j]).sum::<i64>())
            .sum()
    }

    /// Pairings of `a` with every curve, in name order.
    pub fn pairing_vector(&self, a: &DivisorClass) -> Vec<i64> {
        (0..self.len()).map(|i| self.pair(a, &DivisorClass::unit(self.len(), i))).collect()
    }

    pub fn numerically_equivalent(&self, a: &DivisorClass, b: &DivisorClass) -> bool {
        self.pairing_vector(a) == self.pairing_vector(b)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.intersection[i][j] != 0)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph curves {\n");
        for n in &self.names {
            let _ = writeln!(s, "  \"{n}\";");
        }
        for (i, j) in self.edges() {
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", self.names[i], self.names[j]);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Integer combination of the configuration's curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    fn unit(n: usize, i: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[i] = 1;
        DivisorClass { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    /// Curves with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect()
    }
}

pub fn generic_fibre_config() -> CurveConfig {
    let names: Vec<String> = CURVE_NAMES.iter().map(|s| s.to_string()).collect();
    let idx = |s: &str| names.iter().position(|n| n == s).unwrap();
    let mut m = vec![vec![0i64; 21]; 21];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -2;
    }
    let chain = [
        "E1", "E2", "E3", "E4", "E5", "E6", "E7", "Lx", "F7", "F6", "F5", "F4", "F3", "F2", "F1",
    ];
    let mut edges: Vec<(&str, &str)> = chain.windows(2).map(|w| (w[0], w[1])).collect();
    edges.extend([
        ("E2", "Ly"),
        ("Ly", "D1"),
        ("D1", "D2"),
        ("D2", "D3"),
        ("D3", "Lz"),
        ("Lz", "F2"),
        ("Lx", "C"),
    ]);
    for (a, b) in edges {
        let (i, j) = (idx(a), idx(b));
        m[i][j] = 1;
        m[j][i] = 1;
    }
    CurveConfig { names, intersection: m }
}

/// Named divisor classes on the generic fibre.
pub mod classes {
    use super::{CurveConfig, DivisorClass};

    fn terms(cfg: &CurveConfig, t: &[(&str, i64)]) -> DivisorClass {
        cfg.class(t)
    }

    /// II* fibre of the standard fibration.
    pub fn f(cfg: &CurveConfig) -> DivisorClass {
        terms(cfg, &[("D1", 2), ("Ly", 4), ("E1", 3), ("E2", 6), ("E3", 5), ("E4", 4), ("E5", 3), ("E6", 2), ("E7", 1)])
    }

    /// Second II* fibre of the standard fibration. The D-curve meeting `Lz` is
    /// `D3`, mirroring `2D1 + 4Ly` in `F`.
    pub fn f_prime(cfg: &CurveConfig) -> DivisorClass {
        terms(cfg, &[("D3", 2), ("Lz", 4), ("F1", 3), ("F2", 6), ("F3", 5), ("F4", 4), ("F5", 3), ("F6", 2), ("F7", 1)])
    }

    /// I12* fibre of the alternate fibration.
    pub fn i12_star(cfg: &CurveConfig) -> DivisorClass {
        let mut t = vec![("Ly", 1), ("E1", 1), ("F1", 1), ("Lz", 1), ("Lx", 2)];
        for n in ["E2", "E3", "E4", "E5", "E6", "E7", "F7", "F6", "F5", "F4", "F3", "F2"] {
            t.push((n, 2));
        }
        terms(cfg, &t)
    }

    pub fn iii_star(cfg: &CurveConfig) -> DivisorClass {
        terms(cfg, &[("D2", 1), ("D1", 2), ("Ly", 3), ("E2", 4), ("E3", 3), ("E4", 2), ("E5", 1), ("E1", 2)])
    }

    pub fn i6_star(cfg: &CurveConfig) -> DivisorClass {
        let mut t = vec![("Lz", 1), ("F1", 1), ("E7", 1), ("C", 1), ("Lx", 2)];
        for n in ["F2", "F3", "F4", "F5", "F6", "F7"] {
            t.push((n, 2));
        }
        terms(cfg, &t)
    }

    /// I18 cycle; also the class of a smooth fibre G of that fibration.
    pub fn i18(cfg: &CurveConfig) -> DivisorClass {
        let names = [
            "E2", "E3", "E4", "E5", "E6", "E7", "Lx", "F7", "F6", "F5", "F4", "F3", "F2", "Lz", "D3",
            "D2", "D1", "Ly",
        ];
        let t: Vec<(&str, i64)> = names.iter().map(|n| (*n, 1)).collect();
        terms(cfg, &t)
    }

    pub fn w(cfg: &CurveConfig) -> DivisorClass {
        let mut t = vec![("Lx", 2), ("Ly", 1), ("Lz", 1), ("C", 1), ("D1", 1), ("D2", 1), ("D3", 1), ("E1", 1), ("F1", 1)];
        for i in 2..=7 {
            t.push((["E2", "E3", "E4", "E5", "E6", "E7"][i - 2], 2));
            t.push((["F2", "F3", "F4", "F5", "F6", "F7"][i - 2], 2));
        }
        terms(cfg, &t)
    }

    pub fn y(cfg: &CurveConfig) -> DivisorClass {
        terms(
            cfg,
            &[("Ly", 4), ("D1", 3), ("D2", 2), ("D3", 1), ("E1", 3), ("E2", 6), ("E3", 5), ("E4", 4), ("E5", 3), ("E6", 2), ("E7", 1)],
        )
    }

    pub fn z(cfg: &CurveConfig) -> DivisorClass {
        terms(
            cfg,
            &[("Lz", 4), ("D1", 1), ("D2", 2), ("D3", 3), ("F1", 3), ("F2", 6), ("F3", 5), ("F4", 4), ("F5", 3), ("F6", 2), ("F7", 1)],
        )
    }

    /// `X = Lx + C + ΣEi + ΣFi + G` with `G` numerically the I18 fibre.
    pub fn x(cfg: &CurveConfig) -> DivisorClass {
        let mut t = vec![("Lx", 1), ("C", 1)];
        for n in super::CURVE_NAMES.iter().filter(|n| n.starts_with('E') || n.starts_with('F')) {
            t.push((n, 1));
        }
        terms(cfg, &t).add(&i18(cfg))
    }

    /// The 19 classes spanning the M1 polarization.
    pub fn m1_generators(cfg: &CurveConfig) -> Vec<(String, DivisorClass)> {
        let mut out: Vec<(String, DivisorClass)> = [
            "E1", "E2", "E3", "E4", "E5", "E6", "F1", "F2", "F3", "F4", "F5", "F6", "Lx", "Ly", "Lz",
            "D1", "D3",
        ]
        .iter()
        .map(|n| (n.to_string(), cfg.curve(n)))
        .collect();
        let fc = f(cfg);
        out.push(("F".into(), fc.clone()));
        out.push(("F-C".into(), fc.sub(&cfg.curve("C"))));
        out
    }
}

/// Affine Dynkin diagram a fibre is expected to realize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineType {
    /// Ẽ8 (II*)
    E8,
    /// Ẽ7 (III*)
    E7,
    /// D̃n (I*_{n−4})
    D(usize),
    /// Ãn cycle (I_{n+1})
    A(usize),
}

impl AffineType {
    /// Multiset of marks (null-vector coefficients), sorted.
    pub fn marks(self) -> Vec<i64> {
        let mut v = match self {
            AffineType::E8 => vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
            AffineType::E7 => vec![1, 2, 3, 4, 3, 2, 1, 2],
            AffineType::D(n) => {
                let mut v = vec![1; 4];
                v.extend(std::iter::repeat_n(2, n - 3));
                v
            }
            AffineType::A(n) => vec![1; n + 1],
        };
        v.sort_unstable();
        v
    }
}

/// A fibre class of type `t` is orthogonal to each curve in its connected
/// support, with the marks of `t` as coefficients.
fn check_fibre(cfg: &CurveConfig, report: &mut CheckReport, label: &str, class: &DivisorClass, t: AffineType) {
    report.expect_eq(format!("{label}: self-intersection"), cfg.pair(class, class), 0);
    let support = class.support();
    let orth = support
        .iter()
        .all(|&i| cfg.pair(class, &DivisorClass::unit(cfg.len(), i)) == 0);
    report.record(format!("{label}: orthogonal to its components"), orth, format!("{} components", support.len()));
    let mut marks: Vec<i64> = support.iter().map(|&i| class.coeffs[i]).collect();
    marks.sort_unstable();
    report.expect_eq(format!("{label}: marks of {t:?}"), marks, t.marks());
    report.record(format!("{label}: connected support"), connected(cfg, &support), String::new());
    // Curves outside the fibre meet it nonnegatively.
    let nef = (0..cfg.len()).all(|i| support.contains(&i) || cfg.pair(class, &DivisorClass::unit(cfg.len(), i)) >= 0);
    report.record(format!("{label}: nonnegative on other curves"), nef, String::new());
}

fn connected(cfg: &CurveConfig, nodes: &[usize]) -> bool {
    let Some(&start) = nodes.first() else { return false };
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in nodes {
            if !seen.contains(&v) && cfg.intersection[u][v] > 0 {
                seen.push(v);
                stack.push(v);
            }
        }
    }
    seen.len() == nodes.len()
}

fn check_multisection(cfg: &CurveConfig, report: &mut CheckReport, label: &str, fibre: &DivisorClass, curve: &str, degree: i64) {
    let role = match degree {
        0 => "in a fibre",
        1 => "section",
        _ => "bisection",
    };
    report.expect_eq(format!("{label}: {curve} is a {role}"), cfg.pair(fibre, &cfg.curve(curve)), degree);
}

pub fn verify_elliptic_fibrations() -> CheckReport {
    use classes::*;
    let cfg = generic_fibre_config();
    let mut r = CheckReport::new("lattice");

    // (1) standard fibration: two II* fibres
    let (f1, f2) = (f(&cfg), f_prime(&cfg));
    check_fibre(&cfg, &mut r, "fibration 1, F", &f1, AffineType::E8);
    check_fibre(&cfg, &mut r, "fibration 1, F'", &f2, AffineType::E8);
    r.record("fibration 1: F ~ F'", cfg.numerically_equivalent(&f1, &f2), String::new());
    r.expect_eq(
        "fibration 1: F marks on (D1,Ly,E1..E7)",
        ["D1", "Ly", "E1", "E2", "E3", "E4", "E5", "E6", "E7"].map(|n| f1.coeffs[cfg.index(n).unwrap()]).to_vec(),
        vec![2, 4, 3, 6, 5, 4, 3, 2, 1],
    );
    check_multisection(&cfg, &mut r, "fibration 1", &f1, "Lx", 1);
    check_multisection(&cfg, &mut r, "fibration 1", &f1, "D2", 2);
    check_multisection(&cfg, &mut r, "fibration 1", &f1, "C", 0);

    // (2) alternate fibration: I12*
    let g2 = i12_star(&cfg);
    check_fibre(&cfg, &mut r, "fibration 2, I12*", &g2, AffineType::D(16));
    check_multisection(&cfg, &mut r, "fibration 2", &g2, "D1", 1);
    check_multisection(&cfg, &mut r, "fibration 2", &g2, "D3", 1);
    check_multisection(&cfg, &mut r, "fibration 2", &g2, "C", 2);
    check_multisection(&cfg, &mut r, "fibration 2", &g2, "D2", 0);

    // (3) III* and I6*
    let (a3, b3) = (iii_star(&cfg), i6_star(&cfg));
    check_fibre(&cfg, &mut r, "fibration 3, III*", &a3, AffineType::E7);
    check_fibre(&cfg, &mut r, "fibration 3, I6*", &b3, AffineType::D(10));
    r.record("fibration 3: III* ~ I6*", cfg.numerically_equivalent(&a3, &b3), String::new());
    check_multisection(&cfg, &mut r, "fibration 3", &a3, "D3", 1);
    check_multisection(&cfg, &mut r, "fibration 3", &a3, "E6", 1);

    // (4) I18
    let g4 = i18(&cfg);
    check_fibre(&cfg, &mut r, "fibration 4, I18", &g4, AffineType::A(17));
    for s in ["E1", "C", "F1"] {
        check_multisection(&cfg, &mut r, "fibration 4", &g4, s, 1);
    }
    r
}

pub fn m1_generator_gram() -> IntLattice {
    let cfg = generic_fibre_config();
    let gens = classes::m1_generators(&cfg);
    let gram = gens
        .iter()
        .map(|(_, a)| gens.iter().map(|(_, b)| cfg.pair(a, b)).collect())
        .collect();
    IntLattice { gram }
}

pub fn verify_m1_span() -> CheckReport {
    let mut r = CheckReport::new("lattice");
    let g = m1_generator_gram();
    let m1 = gram(LatticeName::M1);
    r.expect_eq("M1 generators: rank", g.rank(), 19);
    r.expect_eq("M1 generators: |det|", num_traits::Signed::abs(&g.det()), BigInt::from(2));
    r.expect_eq("M1 generators: signature", g.signature(), (1, 18));
    r.expect_eq("M1 generators: det equals det M1", g.det(), m1.det());
    r.expect_eq("M1 generators: signature equals M1", g.signature(), m1.signature());
    r
}

pub fn verify_intrinsic_divisors() -> CheckReport {
    use classes::*;
    let cfg = generic_fibre_config();
    let mut r = CheckReport::new("lattice");
    let (w, x, y, z) = (w(&cfg), x(&cfg), y(&cfg), z(&cfg));
    r.record("W ~ Y", cfg.numerically_equivalent(&w, &y), String::new());
    r.record("Y ~ Z", cfg.numerically_equivalent(&y, &z), String::new());
    r.record("W ~ X", cfg.numerically_equivalent(&w, &x), String::new());
    r.expect_eq("W^2", cfg.pair(&w, &w), 4);
    r.expect_eq("h0 = 2 + W^2/2", 2 + cfg.pair(&w, &w) / 2, 4);
    r
}

pub fn verify_standard_lattices() -> CheckReport {
    let mut r = CheckReport::new("lattice");
    let dets: BTreeMap<&str, (LatticeName, i64, (usize, usize))> = [
        ("H", (LatticeName::H, -1, (1, 1))),
        ("E8", (LatticeName::E8, 1, (0, 8))),
        ("A1", (LatticeName::A1, -2, (0, 1))),
        ("M1", (LatticeName::M1, 2, (1, 18))),
        ("M1perp", (LatticeName::M1Perp, -2, (2, 1))),
    ]
    .into_iter()
    .collect();
    for (label, (name, det, sig)) in dets {
        let l = gram(name);
        r.record(format!("{label}: symmetric"), l.is_symmetric(), String::new());
        r.expect_eq(format!("{label}: det"), l.det(), BigInt::from(det));
        r.expect_eq(format!("{label}: signature"), l.signature(), sig);
    }
    r
}

/// Every lattice check in one report.
pub fn verify_all() -> CheckReport {
    let mut r = verify_standard_lattices();
    r.merge(verify_elliptic_fibrations());
    r.merge(verify_m1_span());
    r.merge(verify_intrinsic_divisors());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_adjacencies() {
        let cfg = generic_fibre_config();
        let p = |a: &str, b: &str| cfg.pair(&cfg.curve(a), &cfg.curve(b));
        assert_eq!(p("E2", "E3"), 1);
        assert_eq!(p("C", "D2"), 0);
        assert_eq!(p("C", "Lx"), 1);
        assert!(CURVE_NAMES.iter().all(|n| p(n, n) == -2));
        assert_eq!(cfg.edges().len(), 21);
    }

    #[test]
    fn standard_lattices() {
        assert_eq!(gram(LatticeName::H).gram, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(gram(LatticeName::A1).det(), BigInt::from(-2));
        let m1 = gram(LatticeName::M1);
        assert_eq!(m1.det(), BigInt::from(2));
        assert_eq!(m1.signature(), (1, 18));
        assert_eq!(gram(LatticeName::E8).signature(), (0, 8));
    }

    #[test]
    fn all_suites_pass() {
        let r = verify_all();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn fibre_class_f_squares_to_zero() {
        let cfg = generic_fibre_config();
        let f = classes::f(&cfg);
        assert_eq!(cfg.pair(&f, &f), 0);
        assert_eq!(cfg.pair(&cfg.curve("E1"), &cfg.curve("E1")), -2);
    }

    #[test]
    fn dot_export_lists_every_edge() {
        let dot = generic_fibre_config().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 21);
        assert!(dot.contains("\"Lx\" -- \"C\""));
    }
}
