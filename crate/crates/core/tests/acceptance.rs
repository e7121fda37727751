//! Acceptance criteria, one pass/fail line each, with the time limit enforced.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use k3fib_core::classifier::{
    classify, idstar_component_count, mn_exceptional_count, r_point_components, table_row, toric_resolve_node,
    FibreKind, MaxMultiplicity,
};
use k3fib_core::invariants::{parity_check, FibrationData};
use k3fib_core::lattice::{m1_generator_gram, verify_elliptic_fibrations, verify_intrinsic_divisors};
use k3fib_core::monodromy::{gamma_matrix, local_monodromy, unipotent_power, CycInt, Mat3};
use k3fib_core::pipeline::{run, Config, Options};
use k3fib_core::ratfunc::{factor, ord_at, Place, Polynomial, RationalFunction};
use k3fib_core::weierstrass::{
    canonicalize_quartic, enumerate_anticanonical_monomials, toric_construction, weierstrass_equation, GammaValue,
    Sampler,
};
use k3fib_core::{q_to_string, GammaClass, LocalData, Q};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn w(k: i64) -> CycInt {
    CycInt::omega_pow(k)
}

fn int(a: i64) -> CycInt {
    CycInt::int(a)
}

/// One row of the fibre table as printed, with a local datum producing it.
struct Row {
    data: LocalData,
    kind: FibreKind,
    c: u64,
    r: u32,
    s: Q,
    det: i64,
    mult: MaxMultiplicity,
    rho: Mat3,
}

fn table() -> Vec<Row> {
    use FibreKind::*;
    use GammaClass::*;
    use MaxMultiplicity::*;
    let ld = LocalData::new;
    let neg_id = Mat3::diag(int(-1), int(-1), int(-1));
    let mut rows = vec![
        Row { data: ld(Generic, 0, 0), kind: I0, c: 1, r: 0, s: q(0, 1), det: 1, mult: Value(1), rho: Mat3::identity() },
        Row { data: ld(Generic, 0, 1), kind: I0Star, c: 11, r: 3, s: q(1, 2), det: -1, mult: Value(2), rho: neg_id },
        Row { data: ld(Infinity, 6, 0), kind: I0, c: 1, r: 0, s: q(0, 1), det: 1, mult: Value(1), rho: Mat3::identity() },
        Row { data: ld(Infinity, 3, 0), kind: I0Star, c: 11, r: 3, s: q(1, 2), det: -1, mult: Value(2), rho: neg_id },
        Row {
            data: ld(MinusOne, 1, 0),
            kind: III,
            c: 1,
            r: 1,
            s: q(0, 1),
            det: -1,
            mult: NotApplicable,
            rho: Mat3::diag(int(-1), int(1), int(1)),
        },
        Row {
            data: ld(MinusOne, 1, 1),
            kind: IIIStar,
            c: 11,
            r: 2,
            s: q(1, 2),
            det: 1,
            mult: Value(2),
            rho: Mat3::diag(int(1), int(-1), int(-1)),
        },
        Row {
            data: ld(Infinity, 1, 0),
            kind: IIStar,
            c: 53,
            r: 3,
            s: q(5, 6),
            det: -1,
            mult: Value(6),
            rho: Mat3::diag(int(-1), w(1), w(5)),
        },
        Row {
            data: ld(Infinity, 2, 0),
            kind: IVStar,
            c: 22,
            r: 2,
            s: q(2, 3),
            det: 1,
            mult: Value(3),
            rho: Mat3::diag(int(1), w(2), w(4)),
        },
        Row {
            data: ld(Infinity, 4, 0),
            kind: IV,
            c: 6,
            r: 2,
            s: q(1, 3),
            det: 1,
            mult: Value(1),
            rho: Mat3::diag(int(1), w(4), w(2)),
        },
        Row {
            data: ld(Infinity, 5, 0),
            kind: II,
            c: 3,
            r: 3,
            s: q(1, 6),
            det: -1,
            mult: Value(1),
            rho: Mat3::diag(int(-1), w(5), w(1)),
        },
    ];
    for d in [1u32, 2, 3, 7, 12] {
        let dd = d as i64;
        let u = Mat3::from_ints([[1, dd, dd * (dd - 1) / 2], [0, 1, dd], [0, 0, 1]]);
        rows.push(Row { data: ld(Zero, d, 0), kind: Id(d), c: (d * d + 2) as u64, r: 2, s: q(0, 1), det: 1, mult: Value(1), rho: u });
        rows.push(Row {
            data: ld(Zero, d, 1),
            kind: IdStar(d),
            c: (2 * d * d + 9 * d + 10) as u64,
            r: 3,
            s: q(1, 2),
            det: -1,
            mult: Value(2),
            rho: -u,
        });
    }
    rows
}

fn ac1() -> Outcome {
    let rows = table();
    for row in &rows {
        let rec = classify(&row.data).map_err(|e| e.to_string())?;
        let got = (rec.fibre_type.kind, rec.components, rec.det, rec.r, rec.s.clone(), rec.max_multiplicity);
        let want = (row.kind, row.c, row.det, row.r, row.s.clone(), row.mult);
        ensure!(got == want, "{:?}: got {got:?}, want {want:?}", row.data);
        ensure!(rec.monodromy == row.rho, "{:?}: rho {} != {}", row.data, rec.monodromy, row.rho);
        ensure!(local_monodromy(&row.data) == row.rho, "{:?}: local_monodromy", row.data);
    }
    Ok(format!("{} rows", rows.len()))
}

fn ac2() -> Outcome {
    let id = Mat3::identity();
    let g_m1 = gamma_matrix(GammaClass::MinusOne);
    let g_inf = gamma_matrix(GammaClass::Infinity);
    let g_0 = gamma_matrix(GammaClass::Zero);
    ensure!(g_m1.pow(2) == id, "Gamma_-1^2 != Id");
    ensure!(g_inf.pow(3) == -id, "Gamma_inf^3 != -Id");
    ensure!(g_inf.pow(6) == id, "Gamma_inf^6 != Id");
    for d in 0..=100i64 {
        let want = Mat3::from_ints([[1, d, d * (d - 1) / 2], [0, 1, d], [0, 0, 1]]);
        ensure!(g_0.pow(d as u32) == want, "Gamma_0^{d}");
        ensure!(unipotent_power(d) == want, "unipotent_power({d})");
    }
    for row in table() {
        let m = local_monodromy(&row.data);
        ensure!(3 - m.fixed_rank() as u32 == row.r, "{:?}: 3 - fixed rank != R", row.data);
    }
    Ok("Gamma relations, d <= 100, R = 3 - fixed rank".into())
}

fn ac3() -> Outcome {
    for d in 1..=1000u64 {
        let c = table_row(FibreKind::Id(d as u32)).components;
        ensure!(c == d * d + 2, "I{d}: {c}");
        let (total, parts) = idstar_component_count(d);
        let want = [3, 5 * d + 4, 2 * (d + 3), 2 * (d - 1), 2 * d * d - 1];
        ensure!(parts == want, "I{d}* breakdown {parts:?}");
        ensure!(total == 2 * d * d + 9 * d + 10, "I{d}* total {total}");
        ensure!(table_row(FibreKind::IdStar(d as u32)).components == total, "I{d}* table");
        ensure!(r_point_components(d) == 2 * d * d - 1, "R({d})");
    }
    ensure!(r_point_components(1) == 1 && r_point_components(2) == 7, "R base cases");
    for d in 3..=1000 {
        ensure!(r_point_components(d) == r_point_components(d - 2) + 8 * d - 8, "R recursion at {d}");
    }
    let mn = [(4, 3), (3, 2), (2, 0)].map(|(m, n)| mn_exceptional_count(m, n));
    ensure!(mn == [Ok(5), Ok(3), Ok(0)], "mn counts {mn:?}");
    Ok("d <= 1000".into())
}

fn ac4() -> Outcome {
    let t = toric_construction();
    ensure!(t.sublattice_index == "12", "index {}", t.sublattice_index);
    ensure!(t.group_order == "12", "|G| {}", t.group_order);
    let mut monos = enumerate_anticanonical_monomials();
    monos.sort();
    let mut want = vec![[6, 0, 0, 0], [0, 6, 0, 0], [0, 0, 6, 0], [0, 0, 0, 2], [1, 1, 1, 1], [2, 2, 2, 0]];
    want.sort();
    ensure!(monos == want, "monomials {monos:?}");
    let (cones, report) = toric_resolve_node();
    ensure!(report.passed(), "{report}");
    ensure!(cones.len() == 4, "{} cones", cones.len());
    for c in &cones {
        ensure!(c.det().abs() == 1, "cone {:?} not unimodular", c.rays);
        ensure!(c.rays.iter().all(|r| r[2] == 1), "cone {:?} leaves height 1", c.rays);
    }
    Ok("index 12, |G| 12, 6 monomials, 4 unimodular cones".into())
}

fn ac5() -> Outcome {
    let g = m1_generator_gram();
    ensure!(g.rank() == 19, "rank {}", g.rank());
    ensure!(g.det().abs() == BigInt::from(2), "det {}", g.det());
    ensure!(g.signature() == (1, 18), "signature {:?}", g.signature());
    let mut r = verify_elliptic_fibrations();
    r.merge(verify_intrinsic_divisors());
    ensure!(r.passed(), "{r}");
    Ok(format!("rank 19, |det| 2, signature (1,18), {} fibration checks", r.checks.len()))
}

fn ac6() -> Outcome {
    let mut rng = Sampler::new(2024);
    for _ in 0..100 {
        let (bp, g) = (rng.nonzero(), rng.nonzero());
        let form = weierstrass_equation(&bp, &GammaValue::Finite(g.clone())).map_err(|e| e.to_string())?.form;
        let c = canonicalize_quartic(&form).map_err(|e| e.to_string())?;
        ensure!(c.beta_prime == bp && c.gamma == GammaValue::Finite(g.clone()), "round trip at ({bp}, {g})");
    }
    for _ in 0..100 {
        let a: [Q; 6] = std::array::from_fn(|_| rng.nonzero());
        let form = k3fib_core::weierstrass::QuarticForm::new(a);
        let t = rng.nonzero();
        let (c0, c1) = (canonicalize_quartic(&form), canonicalize_quartic(&form.rescale_x(&t)));
        let (c0, c1) = (c0.map_err(|e| e.to_string())?, c1.map_err(|e| e.to_string())?);
        ensure!(c0.gamma == c1.gamma, "gamma not invariant under t = {t}");
        ensure!(c1.beta_prime == &c0.beta_prime / (&t * &t), "beta' covariance at t = {t}");
    }
    Ok("100 round trips, 100 rescalings".into())
}

fn ac7() -> Outcome {
    let fixture: Value =
        serde_json::from_str(include_str!("fixtures/worked_examples.json")).map_err(|e| e.to_string())?;
    let mut times = Vec::new();
    for ex in fixture["examples"].as_array().unwrap() {
        let start = Instant::now();
        let gamma = ex["gamma"].as_str().unwrap();
        let cfg = Config::from_function(gamma, ex["beta_prime"].as_str().unwrap());
        let r = run(&cfg, &Options::default()).map_err(|e| e.to_string())?;
        ensure!(r.input.map_degree == ex["map_degree"].as_u64().unwrap(), "{gamma}: map degree");
        let want = ex["places"].as_array().unwrap();
        ensure!(r.places.len() == want.len(), "{gamma}: {} places", r.places.len());
        for (p, w) in r.places.iter().zip(want) {
            let got = (
                p.place.as_str(),
                p.degree as u64,
                p.gamma_class.to_string(),
                p.d as u64,
                p.b as u64,
                p.fibre.fibre_type.kind.to_string(),
                p.fibre.components,
                p.fibre.r as u64,
                q_to_string(&p.fibre.s),
            );
            let exp = (
                w["place"].as_str().unwrap(),
                w["degree"].as_u64().unwrap(),
                w["gamma_class"].as_str().unwrap().to_string(),
                w["d"].as_u64().unwrap(),
                w["b"].as_u64().unwrap(),
                w["type"].as_str().unwrap().to_string(),
                w["C"].as_u64().unwrap(),
                w["R"].as_u64().unwrap(),
                w["S"].as_str().unwrap().to_string(),
            );
            ensure!(got == exp, "{gamma}: got {got:?}, want {exp:?}");
        }
        let g = &r.global;
        ensure!(g.parity_ok == ex["parity_ok"].as_bool().unwrap(), "{gamma}: parity");
        ensure!(q_to_string(&g.canonical_degree) == ex["canonical_degree"].as_str().unwrap(), "{gamma}: K degree");
        ensure!(g.betti.b[2] == ex["b2"].as_i64(), "{gamma}: b2 {:?}", g.betti.b[2]);
        ensure!(g.betti.b[3] == ex["b3"].as_i64(), "{gamma}: b3 {:?}", g.betti.b[3]);
        ensure!(g.euler == ex["euler"].as_i64(), "{gamma}: euler {:?}", g.euler);
        ensure!(g.cy_candidate == ex["cy_candidate"].as_bool().unwrap(), "{gamma}: cy");
        let flagged = g.betti.flags.iter().any(|f| f.contains("smoothness"));
        ensure!(flagged == ex["smoothness_flag"].as_bool().unwrap(), "{gamma}: flags {:?}", g.betti.flags);
        if !flagged {
            ensure!(g.betti.flags.is_empty(), "{gamma}: unexpected flags {:?}", g.betti.flags);
        }
        let dt = start.elapsed();
        ensure!(dt < Duration::from_secs(1), "{gamma}: took {dt:?}");
        times.push(format!("{gamma}: {:.0?}", dt));
    }
    Ok(times.join(", "))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Polynomial {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs: Vec<Q> = (0..=deg).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        let p = Polynomial::new(coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_function(rng: &mut ChaCha8Rng) -> RationalFunction {
    let (n, d) = (random_poly(rng, 4), random_poly(rng, 4));
    RationalFunction::new(n, d).expect("nonzero denominator")
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut built = 0;
    while built < 200 {
        let (gamma, bp) = (random_function(&mut rng), random_function(&mut rng));
        if gamma.is_constant() || bp.is_zero() {
            continue;
        }
        let datum = k3fib_core::weierstrass::WeierstrassDatum::new(bp, gamma).map_err(|e| e.to_string())?;
        let data = FibrationData::from_datum(&datum).map_err(|e| e.to_string())?;
        ensure!(parity_check(&data), "parity fails for {datum:?}");
        built += 1;
    }
    for _ in 0..200 {
        let f = random_function(&mut rng);
        let mut places = vec![Place::Infinity];
        for p in [f.numerator(), f.denominator()] {
            if !p.is_constant() {
                places.extend(factor(p).map_err(|e| e.to_string())?.factors.into_iter().map(|(g, _)| Place::Finite(g)));
            }
        }
        let mut total = 0i64;
        for p in &places {
            total += p.degree() as i64 * ord_at(&f, p).map_err(|e| e.to_string())?;
        }
        ensure!(total == 0, "divisor of {f} has degree {total}");
    }
    for class in [GammaClass::Zero, GammaClass::MinusOne, GammaClass::Infinity, GammaClass::Generic] {
        let ds: Vec<u32> = if class == GammaClass::Generic { vec![0] } else { (1..=50).collect() };
        for &d in &ds {
            for b in 0..=10 {
                let base = classify(&LocalData::new(class, d, b)).map_err(|e| e.to_string())?;
                let shifted = classify(&LocalData::new(class, d, b + 2)).map_err(|e| e.to_string())?;
                ensure!(base == shifted, "{class} d={d}: b -> b+2 changes the fibre");
                if class == GammaClass::Infinity {
                    let per = classify(&LocalData::new(class, d + 6, b)).map_err(|e| e.to_string())?;
                    ensure!(base == per, "infinity d={d} b={b}: d -> d+6 changes the fibre");
                }
            }
        }
    }
    Ok("200 parity data, 200 divisors, b+2 and d+6 stability".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 8] = [
        ("AC1", "fibre table reproduction", ac1, 1),
        ("AC2", "monodromy algebra", ac2, 1),
        ("AC3", "component-count oracles", ac3, 1),
        ("AC4", "toric suite", ac4, 1),
        ("AC5", "lattice suite", ac5, 1),
        ("AC6", "round-trip canonicalization", ac6, 5),
        ("AC7", "worked examples", ac7, 2),
        ("AC8", "property suite", ac8, 10),
    ];
    let mut failed = 0;
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let dt = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if dt > Duration::from_secs(limit) => Err(format!("{detail}; over the {limit}s limit")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("{id} PASS {name} ({dt:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name} ({dt:.2?}): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
