//! 3×3 matrices over Z[ω], ω a primitive sixth root of unity, and the local
//! monodromy `(−Id)^b · Γ^d` on the transcendental lattice.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::local::{GammaClass, LocalData};
use crate::Q;

/// `a + b·ω` with `ω² = ω − 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CycInt {
    pub a: i64,
    pub b: i64,
}

impl CycInt {
    pub const ZERO: CycInt = CycInt { a: 0, b: 0 };
    pub const ONE: CycInt = CycInt { a: 1, b: 0 };
    pub const OMEGA: CycInt = CycInt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        CycInt { a, b }
    }

    pub const fn int(a: i64) -> Self {
        CycInt { a, b: 0 }
    }

    /// ω^k for any integer k.
    pub fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(6) {
            0 => CycInt::new(1, 0),
            1 => CycInt::new(0, 1),
            2 => CycInt::new(-1, 1),
            3 => CycInt::new(-1, 0),
            4 => CycInt::new(0, -1),
            _ => CycInt::new(1, -1),
        }
    }

    /// Complex conjugate: ω ↦ ω⁵ = 1 − ω.
    pub fn conj(self) -> Self {
        CycInt::new(self.a + self.b, -self.b)
    }

    /// Field norm `a² + ab + b²`.
    pub fn norm(self) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn pow(self, mut e: u32) -> Self {
        let (mut base, mut acc) = (self, CycInt::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, r: CycInt) -> CycInt {
        CycInt::new(self.a + r.a, self.b + r.b)
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, r: CycInt) -> CycInt {
        CycInt::new(self.a - r.a, self.b - r.b)
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt::new(-self.a, -self.b)
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, r: CycInt) -> CycInt {
        // (a + bω)(c + dω) = ac + (ad + bc)ω + bd(ω − 1)
        CycInt::new(self.a * r.a - self.b * r.b, self.a * r.b + self.b * r.a + self.b * r.b)
    }
}

impl fmt::Display for CycInt {
    /// `a+b*w`, or `a-b*w` when `b < 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 0 {
            write!(f, "{}-{}*w", self.a, -self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for CycInt {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("expected 'a+b*w', got '{s}'");
        let body = s.strip_suffix("*w").ok_or_else(bad)?;
        // The sign separating a and b is the last '+' or '-' not at the start.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let a: i64 = body[..split].parse().map_err(|_| bad())?;
        let b: i64 = body[split + 1..].parse().map_err(|_| bad())?;
        let b = if &body[split..=split] == "-" { -b } else { b };
        Ok(CycInt::new(a, b))
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Element `a + bω` of the field Q(ω).
#[derive(Clone, PartialEq, Eq, Debug)]
struct QOmega {
    a: Q,
    b: Q,
}

impl QOmega {
    fn from_cyc(c: CycInt) -> Self {
        QOmega { a: Q::from_integer(c.a.into()), b: Q::from_integer(c.b.into()) }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn mul(&self, r: &QOmega) -> QOmega {
        QOmega { a: &self.a * &r.a - &self.b * &r.b, b: &self.a * &r.b + &self.b * &r.a + &self.b * &r.b }
    }

    fn sub(&self, r: &QOmega) -> QOmega {
        QOmega { a: &self.a - &r.a, b: &self.b - &r.b }
    }

    fn inv(&self) -> QOmega {
        let n = &self.a * &self.a + &self.a * &self.b + &self.b * &self.b;
        QOmega { a: (&self.a + &self.b) / &n, b: -&self.b / &n }
    }
}

/// 3×3 matrix over Z[ω].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat3(pub [[CycInt; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        Self::diag(CycInt::ONE, CycInt::ONE, CycInt::ONE)
    }

    pub fn diag(x: CycInt, y: CycInt, z: CycInt) -> Self {
        let o = CycInt::ZERO;
        Mat3([[x, o, o], [o, y, o], [o, o, z]])
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Self {
        Mat3(m.map(|r| r.map(CycInt::int)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let (mut base, mut acc) = (*self, Mat3::identity());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn det(&self) -> CycInt {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> CycInt {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Dimension of the fixed space `ker(m − Id)` over Q(ω).
    #[allow(clippy::needless_range_loop)]
    pub fn fixed_rank(&self) -> usize {
        let mut a: Vec<Vec<QOmega>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let e = if i == j { self.0[i][j] - CycInt::ONE } else { self.0[i][j] };
                        QOmega::from_cyc(e)
                    })
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..3 {
            let Some(p) = (rank..3).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, rank);
            let inv = a[rank][c].inv();
            for i in 0..3 {
                if i != rank && !a[i][c].is_zero() {
                    let f = a[i][c].mul(&inv);
                    for j in c..3 {
                        let v = f.mul(&a[rank][j]);
                        a[i][j] = a[i][j].sub(&v);
                    }
                }
            }
            rank += 1;
        }
        3 - rank
    }

    /// Smallest `k ≤ 12` with `m^k = Id`.
    pub fn finite_order(&self) -> Option<u32> {
        let id = Mat3::identity();
        let mut p = *self;
        for k in 1..=12 {
            if p == id {
                return Some(k);
            }
            p = p * *self;
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, r: Mat3) -> Mat3 {
        let mut out = [[CycInt::ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).fold(CycInt::ZERO, |acc, k| acc + self.0[i][k] * r.0[k][j]);
            }
        }
        Mat3(out)
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        Mat3(self.0.map(|r| r.map(|x| -x)))
    }
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Γ for the class of γ's value; the identity for generic places.
pub fn gamma_matrix(class: GammaClass) -> Mat3 {
    match class {
        GammaClass::Zero => Mat3::from_ints([[1, 1, 0], [0, 1, 1], [0, 0, 1]]),
        GammaClass::MinusOne => Mat3::diag(CycInt::int(-1), CycInt::ONE, CycInt::ONE),
        GammaClass::Infinity => Mat3::diag(CycInt::int(-1), CycInt::omega_pow(1), CycInt::omega_pow(5)),
        GammaClass::Generic => Mat3::identity(),
    }
}

/// `(−Id)^b · Γ^d`.
pub fn local_monodromy(data: &LocalData) -> Mat3 {
    let m = gamma_matrix(data.gamma_class).pow(data.d);
    if data.b % 2 == 1 {
        -m
    } else {
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjInvariants {
    pub det: i64,
    pub trace: CycInt,
    pub fixed_rank: usize,
    pub finite_order: Option<u32>,
}

/// Conjugation invariants. Panics if the determinant is not ±1, which no
/// monodromy matrix produced here can have.
pub fn conj_invariants(m: &Mat3) -> ConjInvariants {
    let det = m.det();
    assert!(det.b == 0 && det.a.abs() == 1, "determinant {det} is not a sign");
    ConjInvariants { det: det.a, trace: m.trace(), fixed_rank: m.fixed_rank(), finite_order: m.finite_order() }
}

/// Closed form of Γ_0^d.
pub fn unipotent_power(d: i64) -> Mat3 {
    Mat3::from_ints([[1, d, d * (d - 1) / 2], [0, 1, d], [0, 0, 1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_relations() {
        let w = CycInt::OMEGA;
        assert_eq!(w * w, w - CycInt::ONE);
        assert_eq!(w.pow(3), -CycInt::ONE);
        assert_eq!(w.pow(6), CycInt::ONE);
        for k in 0..12 {
            assert_eq!(w.pow(k as u32), CycInt::omega_pow(k));
        }
        assert_eq!(w * w.conj(), CycInt::ONE);
    }

    #[test]
    fn display_parse_round_trip() {
        for c in [CycInt::new(3, -2), CycInt::new(-1, 0), CycInt::new(0, 5), CycInt::new(-4, -4)] {
            assert_eq!(c.to_string().parse::<CycInt>().unwrap(), c);
        }
        assert_eq!(CycInt::new(1, -1).to_string(), "1-1*w");
        assert!("1+w".parse::<CycInt>().is_err());
    }

    #[test]
    fn generator_matrices() {
        assert_eq!(gamma_matrix(GammaClass::Zero), Mat3::from_ints([[1, 1, 0], [0, 1, 1], [0, 0, 1]]));
        assert_eq!(gamma_matrix(GammaClass::MinusOne), Mat3::from_ints([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        let inf = gamma_matrix(GammaClass::Infinity);
        assert_eq!(inf.0[1][1], CycInt::new(0, 1));
        assert_eq!(inf.0[2][2], CycInt::new(1, -1));
    }

    #[test]
    fn local_monodromy_examples() {
        let id = Mat3::identity();
        assert_eq!(local_monodromy(&LocalData::new(GammaClass::Infinity, 3, 0)), -id);
        assert_eq!(
            local_monodromy(&LocalData::new(GammaClass::Zero, 3, 0)),
            Mat3::from_ints([[1, 3, 3], [0, 1, 3], [0, 0, 1]])
        );
        assert_eq!(local_monodromy(&LocalData::new(GammaClass::Generic, 0, 2)), id);
    }

    #[test]
    fn invariants_of_generators() {
        let m = conj_invariants(&gamma_matrix(GammaClass::MinusOne));
        assert_eq!((m.det, m.fixed_rank, m.finite_order), (-1, 2, Some(2)));
        let m = conj_invariants(&gamma_matrix(GammaClass::Infinity));
        assert_eq!((m.det, m.fixed_rank, m.finite_order), (-1, 0, Some(6)));
        for d in 1..5 {
            let m = conj_invariants(&gamma_matrix(GammaClass::Zero).pow(d));
            assert_eq!((m.det, m.fixed_rank, m.finite_order), (1, 1, None));
        }
    }

    #[test]
    fn json_entries() {
        let v = gamma_matrix(GammaClass::Infinity).to_json();
        assert_eq!(v[1][1], "0+1*w");
        assert_eq!(v[2][2], "1-1*w");
        let back: Mat3 = serde_json::from_value(v).unwrap();
        assert_eq!(back, gamma_matrix(GammaClass::Infinity));
    }
}
