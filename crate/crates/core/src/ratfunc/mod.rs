//! Rational functions on P¹ over Q and their orders at places.

mod factor;
mod parse;
mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

pub use factor::{factor, squarefree_decomposition, Factorization};
pub use parse::parse_ratfunc;
pub use poly::Polynomial;

use crate::local::{GammaClass, LocalData};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by the zero function at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("the zero function has no order at a place")]
    ZeroFunction,
    #[error("constant gamma: the fibration is isotrivial")]
    Isotrivial,
}

/// Quotient `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::DivisionByZero { pos: 0 });
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lc = den.leading_coeff();
        let inv = Q::one() / &lc;
        Ok(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn t() -> Self {
        Self::from_poly(Polynomial::t())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, if this function is constant.
    pub fn as_constant(&self) -> Option<Q> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn recip(&self) -> Result<Self, RatFuncError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RatFuncError> {
        if rhs.is_zero() {
            return Err(RatFuncError::DivisionByZero { pos: 0 });
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// Degree as a morphism P¹ → P¹.
    pub fn degree(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.num.deg().max(self.den.deg())
        }
    }
}

impl fmt::Display for RationalFunction {
    /// Printed so that the parser reads back the same function.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

/// A closed point of P¹ over Q: a monic irreducible polynomial, or infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Polynomial),
    Infinity,
}

impl Place {
    /// Finite place of a monic irreducible polynomial. Irreducibility is checked.
    pub fn finite(p: Polynomial) -> Option<Place> {
        if p.is_constant() || !p.is_monic() {
            return None;
        }
        let f = factor(&p).ok()?;
        (f.factors.len() == 1 && f.factors[0].1 == 1).then_some(Place::Finite(p))
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.deg() as u32,
            Place::Infinity => 1,
        }
    }
}

impl Ord for Place {
    /// Finite places by degree then coefficients; infinity last.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => a.canonical_cmp(b),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

/// Order of vanishing (positive) or pole (negative) of `f` at `p`.
pub fn ord_at(f: &RationalFunction, p: &Place) -> Result<i64, RatFuncError> {
    if f.is_zero() {
        return Err(RatFuncError::ZeroFunction);
    }
    Ok(match p {
        Place::Infinity => f.den.deg() as i64 - f.num.deg() as i64,
        Place::Finite(q) => f.num.multiplicity_of(q) as i64 - f.den.multiplicity_of(q) as i64,
    })
}

/// Degree of γ as a map P¹ → P¹; constant γ is rejected as isotrivial.
pub fn map_degree(gamma: &RationalFunction) -> Result<u32, RatFuncError> {
    if gamma.is_constant() {
        return Err(RatFuncError::Isotrivial);
    }
    Ok(gamma.degree() as u32)
}

/// Every place where γ ∈ {0, −1, ∞} or β′ has a zero or pole, with its local data.
///
/// Places with generic γ and even `b` are omitted. Listed by class
/// (Zero, MinusOne, Infinity, Generic), then by place.
pub fn critical_places(
    gamma: &RationalFunction,
    beta_prime: &RationalFunction,
) -> Result<Vec<(Place, LocalData)>, RatFuncError> {
    collect_places(gamma, beta_prime, false)
}

/// As [`critical_places`], but keeping generic places with even `b` (smooth
/// fibres where the model still changes).
pub fn critical_places_with_smooth(
    gamma: &RationalFunction,
    beta_prime: &RationalFunction,
) -> Result<Vec<(Place, LocalData)>, RatFuncError> {
    collect_places(gamma, beta_prime, true)
}

fn collect_places(
    gamma: &RationalFunction,
    beta_prime: &RationalFunction,
    keep_even_generic: bool,
) -> Result<Vec<(Place, LocalData)>, RatFuncError> {
    map_degree(gamma)?;
    if beta_prime.is_zero() {
        return Err(RatFuncError::ZeroFunction);
    }
    let gamma_plus_one = gamma + &RationalFunction::one();

    let mut candidates: Vec<Place> = vec![Place::Infinity];
    for poly in [
        gamma.numerator(),
        gamma.denominator(),
        gamma_plus_one.numerator(),
        beta_prime.numerator(),
        beta_prime.denominator(),
    ] {
        if poly.is_constant() {
            continue;
        }
        for (g, _) in factor(poly)?.factors {
            candidates.push(Place::Finite(g));
        }
    }
    candidates.sort();
    candidates.dedup();

    let mut out = Vec::new();
    for place in candidates {
        let og = ord_at(gamma, &place)?;
        let ob = ord_at(beta_prime, &place)?.unsigned_abs() as u32;
        let (class, d) = if og > 0 {
            (GammaClass::Zero, og as u32)
        } else if og < 0 {
            (GammaClass::Infinity, (-og) as u32)
        } else {
            match ord_at(&gamma_plus_one, &place)? {
                o if o > 0 => (GammaClass::MinusOne, o as u32),
                _ => (GammaClass::Generic, 0),
            }
        };
        if class == GammaClass::Generic && ob == 0 {
            continue;
        }
        if class == GammaClass::Generic && ob.is_multiple_of(2) && !keep_even_generic {
            continue;
        }
        out.push((place, LocalData::new(class, d, ob)));
    }
    out.sort_by(|a, b| a.1.gamma_class.cmp(&b.1.gamma_class).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}
