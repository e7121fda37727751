//! Normal forms of the K3 family and the maps between their parameters.
//!
//! The quartic
//! `a1·w⁴ + a2·w²yz + a3·wxyz + a4·wy²z + a5·wyz² + a6·x²yz = 0`
//! is in Weierstrass form when `a = (γ/27, 1, 0, 1, 1, β′)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::ratfunc::RationalFunction;
use crate::selfcheck::CheckReport;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeierstrassError {
    #[error("beta = 1/4 is excluded: beta' = 1/(4 beta - 1) is infinite")]
    DegenerateBeta,
    #[error("beta' must be nonzero")]
    ZeroBetaPrime,
    #[error("gamma has a pole here; use the gamma = infinity normal form")]
    GammaAtInfinity,
    #[error("quartic is not admissible: a1 a4 a5 a6 = 0")]
    NotAdmissible,
    #[error("gamma must be nonconstant")]
    ConstantGamma,
    #[error("gamma = 0 is a cusp: j is infinite")]
    Cusp,
}

/// Value of γ at a point, possibly infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaValue {
    Finite(Q),
    Infinite,
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaValue::Finite(q) => write!(f, "{q}"),
            GammaValue::Infinite => f.write_str("inf"),
        }
    }
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `β′ = 1/(4β − 1)` and `γ = 1728α/(4β − 1)³`.
pub fn params_from_alpha_beta(alpha: &Q, beta: &Q) -> Result<(Q, Q), WeierstrassError> {
    let m = qi(4) * beta - qi(1);
    if m.is_zero() {
        return Err(WeierstrassError::DegenerateBeta);
    }
    let bp = Q::one() / &m;
    let gamma = qi(1728) * alpha / (&m * &m * &m);
    Ok((bp, gamma))
}

/// Coefficients `a1..a6` (stored 0-based) of the quartic in `(w, x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticForm {
    pub a: [Q; 6],
}

const MONOMIALS: [&str; 6] = ["w^4", "w^2*y*z", "w*x*y*z", "w*y^2*z", "w*y*z^2", "x^2*y*z"];

impl QuarticForm {
    pub fn new(a: [Q; 6]) -> Self {
        QuarticForm { a }
    }

    /// `a1 a4 a5 a6 ≠ 0`.
    pub fn is_admissible(&self) -> bool {
        [0, 3, 4, 5].iter().all(|&i| !self.a[i].is_zero())
    }

    /// The form after substituting `x ↦ x/t`: `a3 ↦ a3/t`, `a6 ↦ a6/t²`.
    pub fn rescale_x(&self, t: &Q) -> Self {
        let mut a = self.a.clone();
        a[2] = &a[2] / t;
        a[5] = &a[5] / (t * t);
        QuarticForm { a }
    }

    pub fn eval(&self, p: &[Q; 4]) -> Q {
        let [w, x, y, z] = p;
        let a = &self.a;
        &a[0] * w * w * w * w
            + &a[1] * w * w * y * z
            + &a[2] * w * x * y * z
            + &a[3] * w * y * y * z
            + &a[4] * w * y * z * z
            + &a[5] * x * x * y * z
    }

    /// Gradient `(∂w, ∂x, ∂y, ∂z)` at a point.
    pub fn gradient(&self, p: &[Q; 4]) -> [Q; 4] {
        let [w, x, y, z] = p;
        let a = &self.a;
        let two = qi(2);
        [
            qi(4) * &a[0] * w * w * w + &two * &a[1] * w * y * z + &a[2] * x * y * z + &a[3] * y * y * z + &a[4] * y * z * z,
            &a[2] * w * y * z + &two * &a[5] * x * y * z,
            &a[1] * w * w * z + &a[2] * w * x * z + &two * &a[3] * w * y * z + &a[4] * w * z * z + &a[5] * x * x * z,
            &a[1] * w * w * y + &a[2] * w * x * y + &a[3] * w * y * y + &two * &a[4] * w * y * z + &a[5] * x * x * y,
        ]
    }
}

impl fmt::Display for QuarticForm {
    /// Human-readable equation in the variable order `(w, x, y, z)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .a
            .iter()
            .zip(MONOMIALS)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| if c.is_one() { m.to_string() } else { format!("({c})*{m}") })
            .collect();
        if terms.is_empty() {
            f.write_str("0 = 0")
        } else {
            write!(f, "{} = 0", terms.join(" + "))
        }
    }
}

impl Serialize for QuarticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuarticForm", 6)?;
        for (i, key) in ["a1", "a2", "a3", "a4", "a5", "a6"].into_iter().enumerate() {
            st.serialize_field(key, &crate::q_to_string(&self.a[i]))?;
        }
        st.end()
    }
}

/// The pair `(β′, γ)` of rational functions on the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassDatum {
    pub beta_prime: RationalFunction,
    pub gamma: RationalFunction,
}

impl WeierstrassDatum {
    pub fn new(beta_prime: RationalFunction, gamma: RationalFunction) -> Result<Self, WeierstrassError> {
        if gamma.is_constant() {
            return Err(WeierstrassError::ConstantGamma);
        }
        if beta_prime.is_zero() {
            return Err(WeierstrassError::ZeroBetaPrime);
        }
        Ok(WeierstrassDatum { beta_prime, gamma })
    }

    /// The fibre's quartic at a rational point of the base.
    pub fn fibre_at(&self, t: &Q) -> Result<WeierstrassForm, WeierstrassError> {
        let gamma = match self.gamma.eval(t) {
            Some(g) => GammaValue::Finite(g),
            None => GammaValue::Infinite,
        };
        let bp = self.beta_prime.eval(t).ok_or(WeierstrassError::ZeroBetaPrime)?;
        weierstrass_equation(&bp, &gamma)
    }
}

/// A Weierstrass quartic, with a flag when `γ = 0` makes `a1` vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassForm {
    pub form: QuarticForm,
    pub degenerate_at_zero: bool,
}

pub fn weierstrass_equation(beta_prime: &Q, gamma: &GammaValue) -> Result<WeierstrassForm, WeierstrassError> {
    if beta_prime.is_zero() {
        return Err(WeierstrassError::ZeroBetaPrime);
    }
    let GammaValue::Finite(g) = gamma else {
        return Err(WeierstrassError::GammaAtInfinity);
    };
    let form = QuarticForm::new([g / qi(27), qi(1), qi(0), qi(1), qi(1), beta_prime.clone()]);
    Ok(WeierstrassForm { form, degenerate_at_zero: g.is_zero() })
}

/// Result of normalizing a quartic to `(β′, γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub beta_prime: Q,
    pub gamma: GammaValue,
    /// `a1 a4 a5 a6³ / β′³` without the factor 27, for comparison with the
    /// other normalization in use.
    pub gamma_without_27: GammaValue,
}

/// `β′ = a2 a6 − a3²/4` and `γ = 27 a1 a4 a5 a6³ / β′³`; `β′ = 0` gives γ = ∞.
pub fn canonicalize_quartic(q: &QuarticForm) -> Result<Canonical, WeierstrassError> {
    if !q.is_admissible() {
        return Err(WeierstrassError::NotAdmissible);
    }
    let a = &q.a;
    let bp = &a[1] * &a[5] - &a[2] * &a[2] / qi(4);
    if bp.is_zero() {
        return Ok(Canonical { beta_prime: bp, gamma: GammaValue::Infinite, gamma_without_27: GammaValue::Infinite });
    }
    let raw = &a[0] * &a[3] * &a[4] * &a[5] * &a[5] * &a[5] / (&bp * &bp * &bp);
    Ok(Canonical {
        beta_prime: bp,
        gamma: GammaValue::Finite(qi(27) * &raw),
        gamma_without_27: GammaValue::Finite(raw),
    })
}

/// `j = −1/γ`.
pub fn elliptic_j(gamma: &Q) -> Result<Q, WeierstrassError> {
    if gamma.is_zero() {
        return Err(WeierstrassError::Cusp);
    }
    Ok(-(Q::one() / gamma))
}

/// Seeded source of small nonzero rationals.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> Q {
        let n: i64 = self.rng.gen_range(-60..=60);
        let d: i64 = self.rng.gen_range(1..=24);
        Q::new(n.into(), d.into())
    }

    pub fn nonzero(&mut self) -> Q {
        loop {
            let q = self.rational();
            if !q.is_zero() {
                return q;
            }
        }
    }
}

/// `ψ(x) = (x0⁶, x1⁶, x2⁶, x3², x0x1x2x3, x0²x1²x2²)`.
pub fn psi(x: &[Q; 4]) -> [Q; 6] {
    let [x0, x1, x2, x3] = x;
    let p6 = |v: &Q| v * v * v * v * v * v;
    let s = x0 * x1 * x2;
    [p6(x0), p6(x1), p6(x2), x3 * x3, &s * x3, &s * &s]
}

/// Open form `X + Y + Z + α/(X³YZ) + β/X + 1`.
fn open_form(alpha: &Q, beta: &Q, x: &Q, y: &Q, z: &Q) -> Q {
    x + y + z + alpha / (x * x * x * y * z) + beta / x + qi(1)
}

/// Check the chain from the toric hypersurface to the Weierstrass open form at
/// `samples` seeded random torus points.
pub fn verify_derivation_chain(alpha: &Q, beta: &Q, samples: usize, seed: u64) -> Result<CheckReport, WeierstrassError> {
    let (bp, gamma) = params_from_alpha_beta(alpha, beta)?;
    let m = qi(4) * beta - qi(1);
    let mut rng = Sampler::new(seed);
    let mut r = CheckReport::new("weierstrass");
    let (mut psi_ok, mut hyper_ok, mut torus_ok, mut identity_ok, mut solution_ok) = (true, true, true, true, true);
    let mut witness = String::new();
    for _ in 0..samples {
        let x = [rng.nonzero(), rng.nonzero(), rng.nonzero(), rng.nonzero()];
        let y = psi(&x);
        // Image of ψ satisfies both relations.
        if &y[0] * &y[1] * &y[2] != &y[5] * &y[5] * &y[5] || &y[3] * &y[5] != &y[4] * &y[4] {
            psi_ok = false;
            witness = format!("{x:?}");
        }
        // Toric polynomial equals the hyperplane pulled back by ψ.
        let [x0, x1, x2, x3] = &x;
        let toric = alpha * x0.pow(6) + x1.pow(6) + x2.pow(6) + x3 * x3 + x0 * x1 * x2 * x3 + beta * (x0 * x1 * x2).pow(2);
        let hyper = alpha * &y[0] + &y[1] + &y[2] + &y[3] + &y[4] + beta * &y[5];
        hyper_ok &= toric == hyper;
        // On the torus y4 = 1 the hyperplane becomes the open form in (y3, y2, y1).
        let yn: Vec<Q> = y.iter().map(|v| v / &y[4]).collect();
        let expected_y0 = Q::one() / (&yn[1] * &yn[2] * yn[3].pow(3));
        let restricted = alpha * &yn[0] + &yn[1] + &yn[2] + &yn[3] + qi(1) + beta * &yn[5];
        torus_ok &= yn[0] == expected_y0
            && yn[5] == Q::one() / &yn[3]
            && restricted == open_form(alpha, beta, &yn[3], &yn[2], &yn[1]);

        // (X, Y, Z) ↦ (2X + 1, 4XY/(4β−1), 4XZ/(4β−1)) multiplies the open form by 4X/(4β−1).
        let (xx, yy, zz) = (rng.nonzero(), rng.nonzero(), rng.nonzero());
        let (x4, y4, z4) = (qi(2) * &xx + qi(1), qi(4) * &xx * &yy / &m, qi(4) * &xx * &zz / &m);
        let lhs = &x4 * &x4 * &bp + &y4 + &z4 + &gamma / (qi(27) * &y4 * &z4) + qi(1);
        if lhs != qi(4) * &xx / &m * open_form(alpha, beta, &xx, &yy, &zz) {
            identity_ok = false;
            witness = format!("X={xx}, Y={yy}, Z={zz}");
        }

        // Genuine solution: fix X and u = YZ, solve Y + Z = s linearly, then
        // evaluate the (symmetric) transformed equation through s and u.
        let (xx, u) = (rng.nonzero(), rng.nonzero());
        let s = -(&xx + alpha / (xx.pow(3) * &u) + beta / &xx + qi(1));
        let sum = qi(4) * &xx * &s / &m;
        let prod = qi(16) * &xx * &xx * &u / (&m * &m);
        let x4 = qi(2) * &xx + qi(1);
        if prod.is_zero() || !(&x4 * &x4 * &bp + &sum + &gamma / (qi(27) * &prod) + qi(1)).is_zero() {
            solution_ok = false;
            witness = format!("X={xx}, YZ={u}");
        }
    }
    let detail = |ok: bool| if ok { format!("{samples} points, seed {seed}") } else { format!("witness {witness}") };
    r.record("psi image satisfies y0y1y2 = y5^3 and y3y5 = y4^2", psi_ok, detail(psi_ok));
    r.record("toric polynomial is the pulled-back hyperplane", hyper_ok, detail(hyper_ok));
    r.record("torus chart gives the open form", torus_ok, detail(torus_ok));
    r.record("change of variables scales the open form by 4X/(4beta-1)", identity_ok, detail(identity_ok));
    r.record("solutions map to solutions", solution_ok, detail(solution_ok));
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricData {
    pub vertices: [[i64; 3]; 4],
    pub sublattice_index: String,
    pub group_invariants: Vec<String>,
    pub group_order: String,
}

pub const U: [[i64; 3]; 4] = [[-1, -1, -1], [5, -1, -1], [-1, 5, -1], [-1, -1, 1]];

/// Vertices with the quotient of the lattice by their span.
pub fn toric_construction() -> ToricData {
    let basis: Vec<Vec<i64>> = U[1..].iter().map(|r| r.to_vec()).collect();
    let index = linalg::det(&basis).abs();
    let invariants: Vec<BigInt> = linalg::smith_diagonal(&basis);
    let order: BigInt = invariants.iter().product();
    ToricData {
        vertices: U,
        sublattice_index: index.to_string(),
        group_invariants: invariants.iter().map(|d| d.to_string()).collect(),
        group_order: order.to_string(),
    }
}

/// Canonical representative of the class of `(d0, d1, d2, d3) ∈ Z6³ ⊕ Z2`
/// modulo the diagonal `(k, k, k, k mod 2)`: shift so that `d0 = 0`.
fn g_normalize(d: [i64; 4]) -> [i64; 4] {
    let k = d[0].rem_euclid(6);
    [0, (d[1] - k).rem_euclid(6), (d[2] - k).rem_euclid(6), (d[3] - k).rem_euclid(2)]
}

/// Elements of G, enumerated from its definition.
pub fn group_g_elements() -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for d0 in 0..6 {
        for d1 in 0..6 {
            for d2 in 0..6 {
                for d3 in 0..2 {
                    if (d0 + d1 + d2 + 3 * d3) % 6 == 0 {
                        let n = g_normalize([d0, d1, d2, d3]);
                        if !out.contains(&n) {
                            out.push(n);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Grading `δ(d) = (d0 + d1 + d2 + 3d3, [(−d1 − d2 − 3d3, d1, d2, d3)])`.
pub fn delta(d: [i64; 4]) -> (i64, [i64; 4]) {
    let [d0, d1, d2, d3] = d;
    (d0 + d1 + d2 + 3 * d3, g_normalize([-d1 - d2 - 3 * d3, d1, d2, d3]))
}

/// Exponent vectors of degree `δ = (6, 0)`.
pub fn enumerate_anticanonical_monomials() -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for d3 in 0..=2 {
        for d0 in 0..=6 {
            for d1 in 0..=6 {
                for d2 in 0..=6 {
                    let d = [d0, d1, d2, d3];
                    if delta(d) == (6, [0; 4]) {
                        out.push(d);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn element_orders(elements: &[[i64; 4]]) -> Vec<usize> {
    let mut orders: Vec<usize> = elements
        .iter()
        .map(|&e| {
            (1..=12)
                .find(|&k| g_normalize([e[0] * k, e[1] * k, e[2] * k, e[3] * k]) == [0; 4])
                .unwrap() as usize
        })
        .collect();
    orders.sort_unstable();
    orders
}

fn cyclic_product_orders(invariants: &[usize]) -> Vec<usize> {
    let mut orders = vec![1usize];
    for &n in invariants {
        let mut next = Vec::new();
        for &o in &orders {
            for k in 0..n {
                let ok = n / num_integer::gcd(n, k);
                next.push(num_integer::lcm(o, ok));
            }
        }
        orders = next;
    }
    orders.sort_unstable();
    orders
}

pub fn verify_toric() -> CheckReport {
    let mut r = CheckReport::new("toric");
    let data = toric_construction();
    let u0: Vec<i64> = (0..3).map(|i| -U[1][i] - U[2][i] - 3 * U[3][i]).collect();
    r.expect_eq("u0 = -u1 - u2 - 3u3", u0, U[0].to_vec());
    r.expect_eq("index", data.sublattice_index.as_str(), "12");
    r.expect_eq("|G| via Smith normal form", data.group_order.as_str(), "12");
    let elems = group_g_elements();
    r.expect_eq("|G| by enumeration", elems.len(), 12);
    let inv: Vec<usize> = data.group_invariants.iter().map(|s| s.parse().unwrap()).collect();
    r.expect_eq("G matches M/M' up to isomorphism", element_orders(&elems), cyclic_product_orders(&inv));
    r.expect_eq("delta(1,1,1,1)", delta([1, 1, 1, 1]), (6, [0; 4]));
    let monos = enumerate_anticanonical_monomials();
    let want = vec![[6, 0, 0, 0], [2, 2, 2, 0], [1, 1, 1, 1], [0, 6, 0, 0], [0, 0, 6, 0], [0, 0, 0, 2]];
    let mut sorted_want = want.clone();
    sorted_want.sort_by(|a, b| b.cmp(a));
    r.expect_eq("anticanonical monomials", monos.clone(), sorted_want);
    let swapped: Vec<[i64; 4]> = monos.iter().map(|d| [d[0], d[2], d[1], d[3]]).collect();
    r.record("monomials closed under x1 <-> x2", swapped.iter().all(|d| monos.contains(d)), String::new());
    let (_, node) = crate::classifier::toric_resolve_node();
    r.merge(node);
    r
}

/// Gradient of the Weierstrass quartic vanishes at the four special points
/// and nowhere among `samples` seeded random points of the surface.
pub fn singular_points_check(beta_prime: &Q, gamma: &Q, samples: usize, seed: u64) -> Result<CheckReport, WeierstrassError> {
    if gamma.is_zero() || *gamma == qi(-1) {
        return Err(WeierstrassError::NotAdmissible);
    }
    let form = weierstrass_equation(beta_prime, &GammaValue::Finite(gamma.clone()))?.form;
    let mut r = CheckReport::new("weierstrass");
    let zero = |g: &[Q; 4]| g.iter().all(Zero::is_zero);
    let pts = [
        ("P1 {w=x=y=0}", [qi(0), qi(0), qi(0), qi(1)]),
        ("P2 {w=x=z=0}", [qi(0), qi(0), qi(1), qi(0)]),
        ("P3 {w=y=z=0}", [qi(0), qi(1), qi(0), qi(0)]),
        ("P4 {w=x=y+z=0}", [qi(0), qi(0), qi(1), qi(-1)]),
    ];
    for (name, p) in &pts {
        let ok = form.eval(p).is_zero() && zero(&form.gradient(p));
        r.record(format!("singular at {name}"), ok, String::new());
    }

    let mut rng = Sampler::new(seed);
    let mut bad = Vec::new();
    let mut checked = 0;
    while checked < samples {
        let (u, v) = (rng.nonzero(), rng.nonzero());
        match checked % 4 {
            // Points on the three lines of the locus w = 0, away from P1..P4.
            0 if u != -v.clone() => {
                let p = [qi(0), qi(0), u, v];
                if !form.eval(&p).is_zero() || zero(&form.gradient(&p)) {
                    bad.push(format!("{p:?}"));
                }
            }
            1 => {
                let p = [qi(0), u, qi(0), v];
                if !form.eval(&p).is_zero() || zero(&form.gradient(&p)) {
                    bad.push(format!("{p:?}"));
                }
            }
            2 => {
                let p = [qi(0), u, v, qi(0)];
                if !form.eval(&p).is_zero() || zero(&form.gradient(&p)) {
                    bad.push(format!("{p:?}"));
                }
            }
            // Chart w = 1: with a3 = 0 the equation fixes x² = r exactly, and
            // ∂w, ∂y, ∂z depend on x only through x², while ∂x = 2β′xyz.
            3 => {
                let (y, z) = (u, v);
                let yz = &y * &z;
                let r2 = -(&form.a[0] + &yz + &y * &yz + &yz * &z) / (beta_prime * &yz);
                let a = &form.a;
                let dw = qi(4) * &a[0] + qi(2) * &yz + &y * &yz + &yz * &z;
                let dy = &z + qi(2) * &yz + &z * &z + beta_prime * &r2 * &z;
                let dz = &y + &y * &y + qi(2) * &yz + beta_prime * &r2 * &y;
                let dx_nonzero = !r2.is_zero();
                if dw.is_zero() && dy.is_zero() && dz.is_zero() && !dx_nonzero {
                    bad.push(format!("w=1, y={y}, z={z}, x^2={r2}"));
                }
            }
            _ => continue,
        }
        checked += 1;
    }
    r.record(
        format!("gradient nonzero at {samples} random surface points"),
        bad.is_empty(),
        if bad.is_empty() { format!("seed {seed}; heuristic, not a proof") } else { bad.join("; ") },
    );
    Ok(r)
}
