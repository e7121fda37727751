//! Singular fibre classification from local data.
//!
//! [`classify`] is a table lookup keyed on `(gamma_class, d, b)`; every result
//! is cross-checked against the determinant and fixed rank of the local
//! monodromy, so a wrong table entry cannot go unnoticed.

use std::fmt;
use std::fmt::Write as _;

use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::local::{GammaClass, LocalData};
use crate::monodromy::{conj_invariants, local_monodromy, CycInt, Mat3};
use crate::selfcheck::CheckReport;
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FibreKind {
    I0,
    I0Star,
    Id(u32),
    IdStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl FibreKind {
    /// Name usable as a file stem, e.g. `I0star`, `I6`, `IIstar`.
    pub fn file_stem(&self) -> String {
        self.to_string().replace('*', "star")
    }

    /// Every kind without a parameter, plus `Id`/`IdStar` at the given `d`.
    pub fn all_with(d: u32) -> [FibreKind; 10] {
        use FibreKind::*;
        [I0, I0Star, Id(d), IdStar(d), II, III, IV, IIStar, IIIStar, IVStar]
    }
}

impl fmt::Display for FibreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibreKind::I0 => f.write_str("I0"),
            FibreKind::I0Star => f.write_str("I0*"),
            FibreKind::Id(d) => write!(f, "I{d}"),
            FibreKind::IdStar(d) => write!(f, "I{d}*"),
            FibreKind::II => f.write_str("II"),
            FibreKind::III => f.write_str("III"),
            FibreKind::IV => f.write_str("IV"),
            FibreKind::IIStar => f.write_str("II*"),
            FibreKind::IIIStar => f.write_str("III*"),
            FibreKind::IVStar => f.write_str("IV*"),
        }
    }
}

/// A fibre kind with the "(singular)" mark: an extra isolated singularity in
/// the fibre or in the threefold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FibreType {
    pub kind: FibreKind,
    pub singular: bool,
}

impl FibreType {
    pub fn new(kind: FibreKind, singular: bool) -> Self {
        FibreType { kind, singular }
    }

    pub fn smooth(kind: FibreKind) -> Self {
        FibreType { kind, singular: false }
    }
}

impl fmt::Display for FibreType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if self.singular {
            f.write_str(" (singular)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MaxMultiplicity {
    Value(u32),
    /// The fibre is not simple normal crossings.
    NotApplicable,
}

impl fmt::Display for MaxMultiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxMultiplicity::Value(m) => write!(f, "{m}"),
            MaxMultiplicity::NotApplicable => f.write_str("n/a"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreRecord {
    pub fibre_type: FibreType,
    pub components: u64,
    pub r: u32,
    pub s: Q,
    pub det: i64,
    pub max_multiplicity: MaxMultiplicity,
    pub monodromy: Mat3,
    pub note: Option<String>,
}

impl Serialize for FibreRecord {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("FibreRecord", 9)?;
        st.serialize_field("type", &self.fibre_type.kind.to_string())?;
        st.serialize_field("singular", &self.fibre_type.singular)?;
        st.serialize_field("C", &self.components)?;
        st.serialize_field("R", &self.r)?;
        st.serialize_field("S", &crate::q_to_string(&self.s))?;
        st.serialize_field("det", &self.det)?;
        match self.max_multiplicity {
            MaxMultiplicity::Value(m) => st.serialize_field("max_multiplicity", &m)?,
            MaxMultiplicity::NotApplicable => st.serialize_field("max_multiplicity", "n/a")?,
        }
        st.serialize_field("monodromy", &self.monodromy)?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("invalid local data {0:?}: d must be positive unless gamma is generic, and 0 if it is")]
    InvalidLocalData(LocalData),
    #[error("table integrity violation for {data:?} ({kind}): {detail}")]
    TableIntegrity { data: LocalData, kind: FibreKind, detail: String },
}

/// Table values of one fibre kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub components: u64,
    pub r: u32,
    pub s: Q,
    pub det: i64,
    pub max_multiplicity: MaxMultiplicity,
    pub rho: Mat3,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// The table row of a kind: components, R, S, det, maximal multiplicity and ρ.
pub fn table_row(kind: FibreKind) -> TableRow {
    use MaxMultiplicity::{NotApplicable as NA, Value as M};
    let w = CycInt::omega_pow;
    let (one, neg) = (CycInt::ONE, CycInt::int(-1));
    let (components, r, s, det, mm, rho) = match kind {
        FibreKind::I0 => (1, 0, q(0, 1), 1, M(1), Mat3::identity()),
        FibreKind::I0Star => (11, 3, q(1, 2), -1, M(2), -Mat3::identity()),
        FibreKind::Id(d) => {
            let d = d as u64;
            (d * d + 2, 2, q(0, 1), 1, M(1), crate::monodromy::unipotent_power(d as i64))
        }
        FibreKind::IdStar(d) => {
            let d = d as u64;
            (2 * d * d + 9 * d + 10, 3, q(1, 2), -1, M(2), -crate::monodromy::unipotent_power(d as i64))
        }
        FibreKind::III => (1, 1, q(0, 1), -1, NA, Mat3::diag(neg, one, one)),
        FibreKind::IIIStar => (11, 2, q(1, 2), 1, M(2), Mat3::diag(one, neg, neg)),
        FibreKind::IIStar => (53, 3, q(5, 6), -1, M(6), Mat3::diag(neg, w(1), w(5))),
        FibreKind::IVStar => (22, 2, q(2, 3), 1, M(3), Mat3::diag(one, w(2), w(4))),
        FibreKind::IV => (6, 2, q(1, 3), 1, M(1), Mat3::diag(one, w(4), w(2))),
        FibreKind::II => (3, 3, q(1, 6), -1, M(1), Mat3::diag(neg, w(5), w(1))),
    };
    TableRow { components, r, s, det, max_multiplicity: mm, rho }
}

/// Fibre types whose central fibre has simple normal crossings.
pub fn is_snc(kind: FibreKind) -> bool {
    matches!(
        kind,
        FibreKind::Id(_) | FibreKind::IdStar(_) | FibreKind::I0Star | FibreKind::IIStar | FibreKind::IVStar
    )
}

/// `e = (d + 3·(b mod 2)) mod 6` indexes the γ = ∞ types.
fn infinity_kind(d: u32, b: u32) -> FibreKind {
    match (d as u64 + 3 * (b % 2) as u64) % 6 {
        0 => FibreKind::I0,
        1 => FibreKind::IIStar,
        2 => FibreKind::IVStar,
        3 => FibreKind::I0Star,
        4 => FibreKind::IV,
        _ => FibreKind::II,
    }
}

pub fn fibre_type(data: &LocalData) -> Result<FibreType, ClassifyError> {
    if !data.is_valid() {
        return Err(ClassifyError::InvalidLocalData(*data));
    }
    let (d, b_odd) = (data.d, data.b % 2 == 1);
    Ok(match data.gamma_class {
        GammaClass::Generic if b_odd => FibreType::smooth(FibreKind::I0Star),
        GammaClass::Generic => FibreType::smooth(FibreKind::I0),
        GammaClass::Zero if b_odd => FibreType::smooth(FibreKind::IdStar(d)),
        GammaClass::Zero => FibreType::smooth(FibreKind::Id(d)),
        GammaClass::MinusOne => match (d % 2 == 1, b_odd) {
            (true, false) => FibreType::new(FibreKind::III, true),
            (true, true) => FibreType::new(FibreKind::IIIStar, true),
            (false, false) => FibreType::new(FibreKind::I0, true),
            (false, true) => FibreType::new(FibreKind::I0Star, true),
        },
        GammaClass::Infinity => FibreType::smooth(infinity_kind(d, data.b)),
    })
}

fn note_for(data: &LocalData, t: &FibreType) -> Option<String> {
    match (data.gamma_class, t.kind) {
        (GammaClass::MinusOne, FibreKind::I0 | FibreKind::I0Star) => Some(format!(
            "isolated terminal singularity s^2 + t^2 + u^2 + v^{} = 0 in the threefold; \
             existence of a projective small resolution is not decided",
            data.d
        )),
        (GammaClass::MinusOne, FibreKind::III) => Some("fibre contains an isolated A1 singularity".into()),
        (GammaClass::MinusOne, FibreKind::IIIStar) => {
            Some("threefold has isolated singularities on this fibre".into())
        }
        _ => None,
    }
}

/// Classify the fibre over a place from its local data.
pub fn classify(data: &LocalData) -> Result<FibreRecord, ClassifyError> {
    let fibre_type = fibre_type(data)?;
    let row = table_row(fibre_type.kind);
    let monodromy = local_monodromy(data);
    let inv = conj_invariants(&monodromy);
    let integrity = |detail: String| ClassifyError::TableIntegrity { data: *data, kind: fibre_type.kind, detail };
    if inv.det != row.det {
        return Err(integrity(format!("det(monodromy) = {}, table det = {}", inv.det, row.det)));
    }
    if 3 - inv.fixed_rank as u32 != row.r {
        return Err(integrity(format!("3 - fixed rank = {}, table R = {}", 3 - inv.fixed_rank, row.r)));
    }
    if monodromy != row.rho {
        return Err(integrity(format!("monodromy {monodromy} differs from table matrix {}", row.rho)));
    }
    Ok(FibreRecord {
        fibre_type,
        components: row.components,
        r: row.r,
        s: row.s,
        det: row.det,
        max_multiplicity: row.max_multiplicity,
        monodromy,
        note: note_for(data, &fibre_type),
    })
}

/// Exact comparison of a monodromy matrix with the table's representative.
pub fn matches_table(m: &Mat3, kind: FibreKind) -> bool {
    *m == table_row(kind).rho
}

/// The two normal forms of a γ = ∞ fibre: `A` when b is even, `B` when odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfinityForm {
    A,
    B,
}

impl InfinityForm {
    pub fn for_b(b: u32) -> Self {
        if b.is_multiple_of(2) {
            InfinityForm::A
        } else {
            InfinityForm::B
        }
    }

    fn other(self) -> Self {
        match self {
            InfinityForm::A => InfinityForm::B,
            InfinityForm::B => InfinityForm::A,
        }
    }
}

/// Reduce `(form, d, k)` to `(other form, d − 3, k + 1)` until `d ≤ 3`, then
/// read off the type from the base cases `d ∈ {1, 2, 3}`.
pub fn infinity_reduce(form: InfinityForm, d: u32, k: u32) -> FibreKind {
    assert!(d >= 1, "d must be positive");
    let (mut form, mut d, mut _k) = (form, d, k);
    while d > 3 {
        form = form.other();
        d -= 3;
        _k += 1;
    }
    match (form, d) {
        (InfinityForm::A, 1) => FibreKind::IIStar,
        (InfinityForm::A, 2) => FibreKind::IVStar,
        (InfinityForm::A, _) => FibreKind::I0Star,
        (InfinityForm::B, 1) => FibreKind::IV,
        (InfinityForm::B, 2) => FibreKind::II,
        (InfinityForm::B, _) => FibreKind::I0,
    }
}

/// Two-row lookup by `d mod 6`.
pub fn infinity_table(form: InfinityForm, d: u32) -> FibreKind {
    use FibreKind::*;
    let a = [I0, IIStar, IVStar, I0Star, IV, II];
    let b = [I0Star, IV, II, I0, IIStar, IVStar];
    let row = if form == InfinityForm::A { a } else { b };
    row[(d % 6) as usize]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type-(m,n) singularity needs m >= 2 and m >= n >= 0, got ({m},{n})")]
pub struct MnError {
    pub m: i64,
    pub n: i64,
}

/// Exceptional components of a resolved type-(m,n) singularity.
pub fn mn_exceptional_count(m: i64, n: i64) -> Result<i64, MnError> {
    if m < 2 || n < 0 || n > m {
        return Err(MnError { m, n });
    }
    Ok(m + n - 2)
}

/// Components of an I_d* fibre: the total and its five summands.
pub fn idstar_component_count(d: u64) -> (u64, [u64; 5]) {
    assert!(d >= 1);
    let parts = [3, 5 * d + 4, 2 * (d + 3), 2 * (d - 1), 2 * d * d - 1];
    (parts.iter().sum(), parts)
}

/// Components over the point R by the recursion `R(d) = R(d−2) + 8d − 8`.
pub fn r_point_components(d: u64) -> u64 {
    assert!(d >= 1);
    let mut r = if d % 2 == 1 { 1 } else { 7 };
    let mut k = if d % 2 == 1 { 1 } else { 2 };
    while k < d {
        k += 2;
        r += 8 * k - 8;
    }
    r
}

/// A maximal cone of the node resolution: three rays on the height-1 slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cone {
    pub rays: [[i64; 3]; 3],
}

impl Cone {
    pub fn det(&self) -> i64 {
        let [a, b, c] = self.rays;
        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
    }
}

type P2 = [i64; 2];

fn orient(a: P2, b: P2, c: P2) -> i64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Positive iff `d` lies strictly inside the circle through the
/// counterclockwise triangle `a b c`.
fn in_circle(a: P2, b: P2, c: P2, d: P2) -> i128 {
    let row = |p: P2| {
        let (x, y) = ((p[0] - d[0]) as i128, (p[1] - d[1]) as i128);
        [x, y, x * x + y * y]
    };
    let (r1, r2, r3) = (row(a), row(b), row(c));
    r1[0] * (r2[1] * r3[2] - r2[2] * r3[1]) - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
        + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0])
}

/// Triangulate the slice polygon `hull` with extra points by stellar
/// insertion, then Lawson flips toward a Delaunay triangulation.
fn triangulate(hull: [P2; 3], extra: &[P2]) -> Vec<[P2; 3]> {
    let ccw = |t: [P2; 3]| if orient(t[0], t[1], t[2]) < 0 { [t[0], t[2], t[1]] } else { t };
    let mut tris = vec![ccw(hull)];
    for &p in extra {
        let mut next = Vec::new();
        for t in tris {
            let o = [orient(t[1], t[2], p), orient(t[2], t[0], p), orient(t[0], t[1], p)];
            if o.iter().any(|&x| x < 0) || o.iter().filter(|&&x| x == 0).count() >= 2 {
                next.push(t);
                continue;
            }
            // Replace each edge not through p by a triangle with apex p.
            for i in 0..3 {
                if o[i] != 0 {
                    next.push(ccw([t[(i + 1) % 3], t[(i + 2) % 3], p]));
                }
            }
        }
        tris = next;
    }
    loop {
        let mut flipped = false;
        'search: for i in 0..tris.len() {
            for j in i + 1..tris.len() {
                let shared: Vec<P2> = tris[i].iter().copied().filter(|v| tris[j].contains(v)).collect();
                if shared.len() != 2 {
                    continue;
                }
                let a = *tris[i].iter().find(|v| !shared.contains(v)).unwrap();
                let b = *tris[j].iter().find(|v| !shared.contains(v)).unwrap();
                if in_circle(tris[i][0], tris[i][1], tris[i][2], b) > 0 {
                    tris[i] = ccw([a, b, shared[0]]);
                    tris[j] = ccw([a, b, shared[1]]);
                    flipped = true;
                    break 'search;
                }
            }
        }
        if !flipped {
            return tris;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

/// Crepant resolution of the node `stu = v²` by refining the dual cone with
/// rays `(1,0,1)`, `(0,1,1)`, `(1,1,1)`.
pub fn toric_resolve_node() -> (Vec<Cone>, CheckReport) {
    let mut report = CheckReport::new("toric");
    let cone_rays = [[1i64, 0, 0], [0, 1, 0], [-1, -1, 2]];
    let dual_rays = [[0i64, 0, 1], [2, 0, 1], [0, 2, 1]];
    let dot = |a: [i64; 3], b: [i64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let dual_ok = dual_rays.iter().all(|&u| {
        let pairings: Vec<i64> = cone_rays.iter().map(|&v| dot(u, v)).collect();
        pairings.iter().all(|&x| x >= 0) && pairings.iter().filter(|&&x| x == 0).count() == 2
    });
    report.record("dual cone rays are the facet normals", dual_ok, format!("{dual_rays:?}"));

    let added = [[1i64, 0, 1], [0, 1, 1], [1, 1, 1]];
    let slice = |r: [i64; 3]| [r[0], r[1]];
    let tris = triangulate(
        [slice(dual_rays[0]), slice(dual_rays[1]), slice(dual_rays[2])],
        &added.map(slice),
    );
    let cones: Vec<Cone> = tris
        .iter()
        .map(|t| Cone { rays: t.map(|p| [p[0], p[1], 1]) })
        .collect();

    report.expect_eq("maximal cones", cones.len(), 4);
    let dets: Vec<i64> = cones.iter().map(|c| c.det().abs()).collect();
    report.record("every cone unimodular", dets.iter().all(|&d| d == 1), format!("|det| = {dets:?}"));
    let height_one = cones.iter().flat_map(|c| c.rays).all(|r| r[2] == 1);
    report.record("all rays at height 1", height_one, String::new());
    let primitive = added.iter().all(|r| gcd(gcd(r[0], r[1]), r[2]) == 1);
    report.record("added rays primitive", primitive, String::new());
    let central = cones.iter().any(|c| added.iter().all(|r| c.rays.contains(r)));
    report.record("added rays span a face triangle", central, String::new());
    // Unimodular cones of total volume 4 tile the dual cone's slice (area 4).
    let volume: i64 = dets.iter().sum();
    report.expect_eq("total normalized volume", volume, 4);
    (cones, report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub kind: String,
    pub nodes: Vec<(String, u32)>,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    fn build(kind: FibreKind, nodes: &[(&str, u32)], edges: &[(&str, &str)]) -> Self {
        let idx = |n: &str| nodes.iter().position(|(m, _)| *m == n).expect("known node");
        DualGraph {
            kind: kind.to_string(),
            nodes: nodes.iter().map(|(n, m)| (n.to_string(), *m)).collect(),
            edges: edges.iter().map(|(a, b)| (idx(a), idx(b))).collect(),
        }
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m: Vec<u32> = self.nodes.iter().map(|n| n.1).collect();
        m.sort_unstable();
        m
    }

    /// DOT with node labels `name (mult)`.
    pub fn to_dot(&self) -> String {
        let mut s = format!("graph \"{}\" {{\n", self.kind);
        for (i, (name, mult)) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{name} ({mult})\"];");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Components and maximal multiplicity of a fibre kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphMetadata {
    pub kind: String,
    pub components: u64,
    pub max_multiplicity: String,
    pub notice: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DualGraphResult {
    Full(DualGraph),
    Metadata(GraphMetadata),
}

impl DualGraphResult {
    pub fn to_dot(&self) -> String {
        match self {
            DualGraphResult::Full(g) => g.to_dot(),
            DualGraphResult::Metadata(m) => format!(
                "graph \"{}\" {{\n  label=\"{} components, max multiplicity {}\";\n}}\n",
                m.kind, m.components, m.max_multiplicity
            ),
        }
    }
}

/// Full dual graphs for I0*, IV and II; component metadata for the rest.
pub fn dual_graph(kind: FibreKind) -> DualGraphResult {
    match kind {
        FibreKind::I0Star => DualGraphResult::Full(DualGraph::build(
            kind,
            &[
                ("Y", 1),
                ("Z", 1),
                ("X", 2),
                ("S", 1),
                ("B", 1),
                ("L1", 1),
                ("L2", 1),
                ("L3", 1),
                ("R1", 1),
                ("R2", 1),
                ("R3", 1),
            ],
            &[
                ("Y", "Z"),
                ("Y", "X"),
                ("Z", "X"),
                ("Y", "L1"),
                ("Z", "R1"),
                ("X", "L1"),
                ("X", "L2"),
                ("X", "L3"),
                ("X", "R1"),
                ("X", "R2"),
                ("X", "R3"),
                ("X", "B"),
                ("L1", "L2"),
                ("L2", "L3"),
                ("L3", "B"),
                ("B", "R3"),
                ("R3", "R2"),
                ("R2", "R1"),
                ("S", "X"),
                ("S", "B"),
                ("S", "L1"),
                ("S", "R1"),
            ],
        )),
        FibreKind::IV => DualGraphResult::Full(DualGraph::build(
            kind,
            &[("Top", 1), ("A", 1), ("B", 1), ("Bottom", 1), ("B'", 1), ("A'", 1)],
            &[
                ("Top", "A"),
                ("Top", "B"),
                ("Top", "Bottom"),
                ("Top", "B'"),
                ("Top", "A'"),
                ("A", "B"),
                ("B", "Bottom"),
                ("B'", "Bottom"),
                ("A'", "B'"),
            ],
        )),
        FibreKind::II => DualGraphResult::Full(DualGraph::build(
            kind,
            &[("y=0", 1), ("z=0", 1), ("wy+wz+x^2=0", 1)],
            &[("y=0", "z=0"), ("y=0", "wy+wz+x^2=0"), ("z=0", "wy+wz+x^2=0")],
        )),
        other => {
            let row = table_row(other);
            DualGraphResult::Metadata(GraphMetadata {
                kind: other.to_string(),
                components: row.components,
                max_multiplicity: row.max_multiplicity.to_string(),
                notice: format!("no full dual graph is shipped for {other}; counts only"),
            })
        }
    }
}

/// Consistency checks of the table against monodromy and the count formulas.
pub fn table_crosscheck() -> CheckReport {
    let mut r = CheckReport::new("monodromy");
    for d in [1u32, 2, 3, 7] {
        for kind in FibreKind::all_with(d) {
            if matches!(kind, FibreKind::Id(_) | FibreKind::IdStar(_)) || d == 1 {
                let row = table_row(kind);
                let inv = conj_invariants(&row.rho);
                r.expect_eq(format!("{kind}: det rho"), inv.det, row.det);
                r.expect_eq(format!("{kind}: R = 3 - fixed rank"), 3 - inv.fixed_rank as u32, row.r);
                if let MaxMultiplicity::Value(m) = row.max_multiplicity {
                    if is_snc(kind) {
                        r.expect_eq(format!("{kind}: S = 1 - 1/m"), row.s.clone(), Q::one() - q(1, m as i64));
                    }
                }
            }
        }
    }
    let mut ok = true;
    for class in [GammaClass::Zero, GammaClass::MinusOne, GammaClass::Infinity, GammaClass::Generic] {
        for d in 0..=50u32 {
            for b in 0..=10u32 {
                let data = LocalData::new(class, d, b);
                if data.is_valid() && classify(&data).is_err() {
                    ok = false;
                }
            }
        }
    }
    r.record("classify consistent with monodromy for d <= 50, b <= 10", ok, String::new());
    let agree = (1..=60u32).all(|d| {
        [InfinityForm::A, InfinityForm::B].iter().all(|&f| {
            let b = if f == InfinityForm::A { 0 } else { 1 };
            let via_e = infinity_kind(d, b);
            infinity_reduce(f, d, 0) == via_e && infinity_table(f, d) == via_e
        })
    });
    r.record("infinity reduction agrees with the mod-6 rule", agree, String::new());
    r
}

pub fn counts_check(max_d: u64) -> CheckReport {
    let mut r = CheckReport::new("counts");
    let id_ok = (1..=max_d).all(|d| table_row(FibreKind::Id(d as u32)).components == d * d + 2);
    r.record(format!("I_d count d^2+2 for d <= {max_d}"), id_ok, String::new());
    let star_ok = (1..=max_d).all(|d| {
        let (total, parts) = idstar_component_count(d);
        total == 2 * d * d + 9 * d + 10
            && parts[4] == r_point_components(d)
            && table_row(FibreKind::IdStar(d as u32)).components == total
    });
    r.record(format!("I_d* breakdown sums to 2d^2+9d+10 for d <= {max_d}"), star_ok, String::new());
    r.expect_eq("R-point base case d=1", r_point_components(1), 1);
    r.expect_eq("R-point base case d=2", r_point_components(2), 7);
    r.expect_eq("(m,n) = (4,3)", mn_exceptional_count(4, 3), Ok(5));
    r.expect_eq("(m,n) = (3,2)", mn_exceptional_count(3, 2), Ok(3));
    r.expect_eq("(m,n) = (2,0)", mn_exceptional_count(2, 0), Ok(0));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use GammaClass::*;

    fn rec(c: GammaClass, d: u32, b: u32) -> FibreRecord {
        classify(&LocalData::new(c, d, b)).unwrap()
    }

    #[test]
    fn worked_rows() {
        let r = rec(Zero, 2, 0);
        assert_eq!((r.fibre_type.kind, r.components, r.r, r.s.clone(), r.det), (FibreKind::Id(2), 6, 2, q(0, 1), 1));
        let r = rec(Infinity, 7, 0);
        assert_eq!((r.fibre_type.kind, r.components, r.s.clone()), (FibreKind::IIStar, 53, q(5, 6)));
        let r = rec(MinusOne, 1, 1);
        assert_eq!((r.fibre_type, r.det), (FibreType::new(FibreKind::IIIStar, true), 1));
        assert_eq!(rec(Generic, 0, 3).fibre_type.kind, FibreKind::I0Star);
    }

    #[test]
    fn invalid_local_data() {
        assert!(classify(&LocalData::new(Zero, 0, 0)).is_err());
        assert!(classify(&LocalData::new(Generic, 1, 0)).is_err());
    }

    #[test]
    fn minus_one_even_d_is_flagged() {
        let r = rec(MinusOne, 2, 0);
        assert_eq!(r.fibre_type, FibreType::new(FibreKind::I0, true));
        assert!(r.note.unwrap().contains("v^2"));
        assert_eq!(rec(MinusOne, 4, 1).fibre_type, FibreType::new(FibreKind::I0Star, true));
    }

    #[test]
    fn matches_table_examples() {
        let inf = crate::monodromy::gamma_matrix(Infinity);
        assert!(matches_table(&-inf, FibreKind::IV));
        assert!(matches_table(&-inf.pow(2), FibreKind::II));
        assert!(matches_table(&crate::monodromy::gamma_matrix(Zero).pow(2), FibreKind::Id(2)));
        assert!(!matches_table(&inf, FibreKind::IV));
    }

    #[test]
    fn infinity_reduction_examples() {
        assert_eq!(infinity_reduce(InfinityForm::A, 1, 0), FibreKind::IIStar);
        assert_eq!(infinity_reduce(InfinityForm::B, 2, 0), FibreKind::II);
        assert_eq!(infinity_reduce(InfinityForm::A, 9, 0), FibreKind::I0Star);
    }

    #[test]
    fn mn_counts() {
        assert_eq!(mn_exceptional_count(4, 3), Ok(5));
        assert_eq!(mn_exceptional_count(3, 2), Ok(3));
        assert_eq!(mn_exceptional_count(2, 0), Ok(0));
        assert!(mn_exceptional_count(1, 0).is_err());
        assert!(mn_exceptional_count(3, 4).is_err());
    }

    #[test]
    fn idstar_counts() {
        assert_eq!(idstar_component_count(1), (21, [3, 9, 8, 0, 1]));
        assert_eq!(idstar_component_count(2).0, 36);
        assert_eq!(idstar_component_count(2).1[4], 7);
        assert_eq!(idstar_component_count(3).0, 55);
        assert_eq!(r_point_components(3), 17);
    }

    #[test]
    fn node_resolution() {
        let (cones, report) = toric_resolve_node();
        assert!(report.passed(), "{report}");
        assert_eq!(cones.len(), 4);
        assert!(cones.iter().any(|c| {
            let mut rays = c.rays.to_vec();
            rays.sort();
            rays == vec![[0, 1, 1], [1, 0, 1], [1, 1, 1]]
        }));
    }

    #[test]
    fn dual_graphs() {
        let DualGraphResult::Full(g) = dual_graph(FibreKind::I0Star) else { panic!() };
        let mut want = vec![1; 10];
        want.push(2);
        assert_eq!(g.multiplicities(), want);
        let DualGraphResult::Full(g) = dual_graph(FibreKind::II) else { panic!() };
        assert_eq!(g.nodes.len(), 3);
        let DualGraphResult::Full(g) = dual_graph(FibreKind::IV) else { panic!() };
        assert_eq!(g.multiplicities(), vec![1; 6]);
        let DualGraphResult::Metadata(m) = dual_graph(FibreKind::IIStar) else { panic!() };
        assert_eq!((m.components, m.max_multiplicity.as_str()), (53, "6"));
        let DualGraphResult::Metadata(m) = dual_graph(FibreKind::IdStar(2)) else { panic!() };
        assert_eq!(m.components, 36);
        assert!(dual_graph(FibreKind::I0Star).to_dot().contains("X (2)"));
    }

    #[test]
    fn crosschecks_pass() {
        let r = table_crosscheck();
        assert!(r.passed(), "{r}");
        let r = counts_check(1000);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn file_stems() {
        assert_eq!(FibreKind::I0Star.file_stem(), "I0star");
        assert_eq!(FibreKind::IIStar.file_stem(), "IIstar");
        assert_eq!(FibreKind::Id(6).file_stem(), "I6");
    }
}
