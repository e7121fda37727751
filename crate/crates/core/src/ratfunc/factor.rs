//! Factorization of univariate polynomials over the rationals.
//!
//! Squarefree decomposition is Yun's algorithm over Q. Each squarefree part is
//! split into irreducibles by the Zassenhaus method: factor modulo a small
//! prime (distinct-degree then Cantor–Zassenhaus equal-degree splitting), lift
//! the modular factorization with quadratic Hensel steps past a Mignotte bound,
//! and recombine subsets of lifted factors by trial division over Z.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Polynomial;
use super::RatFuncError;
use crate::Q;

/// `unit * prod(factor^multiplicity)`, factors monic, irreducible over Q and
/// pairwise distinct, listed in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Q,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::constant(self.unit.clone()), |acc, (g, e)| {
                &acc * &g.pow(*e)
            })
    }
}

/// Full factorization into monic irreducibles over Q.
pub fn factor(f: &Polynomial) -> Result<Factorization, RatFuncError> {
    if f.is_zero() {
        return Err(RatFuncError::ZeroPolynomial);
    }
    let unit = f.leading_coeff();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f)? {
        for g in factor_squarefree_part(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization { unit, factors })
}

/// Yun's algorithm: monic squarefree, pairwise coprime `a_i` with
/// `f = lc(f) * prod(a_i^i)`. Parts equal to 1 are omitted.
pub fn squarefree_decomposition(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>, RatFuncError> {
    if f.is_zero() {
        return Err(RatFuncError::ZeroPolynomial);
    }
    let f = f.monic();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1u32;
    while !b.is_constant() {
        let a = b.gcd(&d);
        let b_next = b.div_exact(&a).expect("gcd divides");
        let c_next = d.div_exact(&a).expect("gcd divides");
        d = &c_next - &b_next.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    Ok(out)
}

/// Split a monic squarefree polynomial into monic irreducible factors.
fn factor_squarefree_part(f: &Polynomial) -> Vec<Polynomial> {
    if f.deg() <= 1 {
        return vec![f.monic()];
    }
    let (_, ints) = f.primitive_integer_part();
    zassenhaus(&ints)
        .into_iter()
        .map(|g| Polynomial::from_integers(&g).monic())
        .collect()
}

const PRIME_TRIALS: usize = 6;

fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();

    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in odd_primes() {
        if tried == PRIME_TRIALS {
            break;
        }
        let field = Fp(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = field.reduce(f);
        let dfp = field.derivative(&fp);
        if field.gcd(&fp, &dfp).len() != 1 {
            continue;
        }
        tried += 1;
        let facs = field.factor_monic_squarefree(&field.make_monic(&fp), p);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
    }
    let (p, modular) = best.expect("some prime is good for a squarefree polynomial");

    // Mignotte: any factor of lc*g/lc(g) has coefficients below |lc| * 2^n * ||f||_2.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = lc.abs() * (BigInt::one() << n) * (norm2.sqrt() + 1u32);
    let target = bound * 2u32 + 1u32;
    let mut modulus = BigInt::from(p);
    let mut steps = 0;
    while modulus <= target {
        modulus = &modulus * &modulus;
        steps += 1;
    }

    let lifted = hensel_lift(f, &modular, p, steps);
    recombine(f.to_vec(), lifted, &modulus)
}

fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

fn recombine(mut f: Vec<BigInt>, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        for subset in combinations(lifted.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut cand = vec![lc];
            for &i in &subset {
                cand = mod_mul(&cand, &lifted[i], modulus);
            }
            let cand = primitive(&symmetric(&cand, modulus));
            if let Some(q) = int_div_exact(&f, &cand) {
                f = q;
                found.push(cand);
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    found.push(primitive(&f));
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn primitive(g: &[BigInt]) -> Vec<BigInt> {
    let mut content = g.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.last().is_some_and(Signed::is_negative) {
        content = -content;
    }
    g.iter().map(|c| c / &content).collect()
}

/// Exact division over Z; `None` if the quotient is not integral or a remainder remains.
fn int_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() > a.len() {
        return None;
    }
    // Cheap rejection on constant terms first.
    if !b[0].is_zero() && !(&a[0] % &b[0]).is_zero() {
        return None;
    }
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, r) = rem[k + db].div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] -= &c * bc;
        }
        q[k] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(q)
}

// ---- arithmetic modulo a big modulus (Hensel lifting) ----

fn trim_big(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn mod_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    trim_big(&mut v);
    v
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2u32;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn mod_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    mod_reduce(&v, m)
}

fn mod_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    mod_reduce(&v, m)
}

fn mod_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    mod_reduce(&out, m)
}

/// Division by a monic polynomial modulo `m`.
fn mod_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), mod_reduce(a, m));
    }
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].mod_floor(m);
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] -= &c * bc;
        }
        q[k] = c;
    }
    rem.truncate(db);
    (mod_reduce(&q, m), mod_reduce(&rem, m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

fn lift_from_fp(v: &ModPoly) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift `f = lc(f) * prod(factors) mod p` to the same identity modulo `p^(2^steps)`.
/// Returns monic lifted factors.
fn hensel_lift(f: &[BigInt], factors: &[ModPoly], p: u64, steps: u32) -> Vec<Vec<BigInt>> {
    let field = Fp(p);
    let pm = BigInt::from(p);
    let mut final_m = pm.clone();
    for _ in 0..steps {
        final_m = &final_m * &final_m;
    }
    let f = mod_reduce(f, &final_m);
    lift_tree(&f, factors, &field, &pm, steps, &final_m)
}

fn lift_tree(
    f: &[BigInt],
    factors: &[ModPoly],
    field: &Fp,
    p: &BigInt,
    steps: u32,
    final_m: &BigInt,
) -> Vec<Vec<BigInt>> {
    let lc = f.last().unwrap().clone();
    if factors.len() == 1 {
        let inv = mod_inverse(&lc, final_m);
        return vec![mod_mul(f, &[inv], final_m)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc_p = (&lc % p).mod_floor(p).to_u64().unwrap();
    let g0 = left.iter().fold(vec![lc_p], |acc, u| field.mul(&acc, u));
    let h0 = right.iter().fold(vec![1u64], |acc, u| field.mul(&acc, u));
    let (s0, t0) = field.ext_gcd_cofactors(&g0, &h0);

    let mut g = lift_from_fp(&g0);
    let mut h = lift_from_fp(&h0);
    let mut s = lift_from_fp(&s0);
    let mut t = lift_from_fp(&t0);
    let mut m = p.clone();
    for _ in 0..steps {
        m = &m * &m;
        let e = mod_sub(f, &mod_mul(&g, &h, &m), &m);
        let (q, r) = mod_divrem_monic(&mod_mul(&s, &e, &m), &h, &m);
        let g1 = mod_add(&mod_add(&g, &mod_mul(&t, &e, &m), &m), &mod_mul(&q, &g, &m), &m);
        let h1 = mod_add(&h, &r, &m);
        let b = mod_sub(
            &mod_add(&mod_mul(&s, &g1, &m), &mod_mul(&t, &h1, &m), &m),
            &[BigInt::one()],
            &m,
        );
        let (c, d) = mod_divrem_monic(&mod_mul(&s, &b, &m), &h1, &m);
        s = mod_sub(&s, &d, &m);
        t = mod_sub(&mod_sub(&t, &mod_mul(&t, &b, &m), &m), &mod_mul(&c, &g1, &m), &m);
        g = g1;
        h = h1;
    }
    let mut out = lift_tree(&g, left, field, p, steps, final_m);
    out.extend(lift_tree(&h, right, field, p, steps, final_m));
    out
}

// ---- arithmetic over F_p ----

type ModPoly = Vec<u64>;

#[derive(Clone, Copy)]
struct Fp(u64);

impl Fp {
    fn trim(v: &mut ModPoly) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn reduce(&self, f: &[BigInt]) -> ModPoly {
        let p = BigInt::from(self.0);
        let mut v: ModPoly = f.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect();
        Self::trim(&mut v);
        v
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        self.powm(a, self.0 - 2)
    }

    fn powm(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulm(acc, a);
            }
            a = self.mulm(a, a);
            e >>= 1;
        }
        acc
    }

    fn sub(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let n = a.len().max(b.len());
        let mut v: ModPoly = (0..n)
            .map(|i| (a.get(i).unwrap_or(&0) + self.0 - b.get(i).unwrap_or(&0)) % self.0)
            .collect();
        Self::trim(&mut v);
        v
    }

    fn mul(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulm(x, y)) % self.0;
            }
        }
        Self::trim(&mut out);
        out
    }

    fn scale(&self, a: &ModPoly, c: u64) -> ModPoly {
        let mut v: ModPoly = a.iter().map(|&x| self.mulm(x, c)).collect();
        Self::trim(&mut v);
        v
    }

    fn make_monic(&self, a: &ModPoly) -> ModPoly {
        match a.last() {
            Some(&lc) => self.scale(a, self.inv(lc)),
            None => Vec::new(),
        }
    }

    fn derivative(&self, a: &ModPoly) -> ModPoly {
        let mut v: ModPoly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.mulm(c, k as u64 % self.0))
            .collect();
        Self::trim(&mut v);
        v
    }

    fn divrem(&self, a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly) {
        let db = b.len() - 1;
        if a.len() <= db {
            return (Vec::new(), a.clone());
        }
        let inv = self.inv(b[db]);
        let mut rem = a.clone();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mulm(rem[k + db], inv);
            if c != 0 {
                for (j, &bc) in b.iter().enumerate() {
                    rem[k + j] = (rem[k + j] + self.0 - self.mulm(c, bc)) % self.0;
                }
            }
            q[k] = c;
        }
        rem.truncate(db);
        Self::trim(&mut rem);
        Self::trim(&mut q);
        (q, rem)
    }

    fn rem(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        self.divrem(a, b).1
    }

    fn gcd(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.make_monic(&a)
    }

    /// `(s, t)` with `s*a + t*b = 1`, `deg s < deg b`, `deg t < deg a`, for coprime `a`, `b`.
    fn ext_gcd_cofactors(&self, a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        debug_assert_eq!(r0.len(), 1, "inputs must be coprime");
        let inv = self.inv(r0[0]);
        (self.scale(&s0, inv), self.scale(&t0, inv))
    }

    fn powmod(&self, base: &ModPoly, exp: &BigUint, modulus: &ModPoly) -> ModPoly {
        let mut acc = vec![1u64];
        let base = self.rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), modulus);
            if exp.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), modulus);
            }
        }
        acc
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    fn factor_monic_squarefree(&self, f: &ModPoly, seed: u64) -> Vec<ModPoly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, &mut rng, &mut out);
        }
        out
    }

    fn distinct_degree(&self, f: &ModPoly) -> Vec<(ModPoly, usize)> {
        let x = vec![0u64, 1];
        let p = BigUint::from(self.0);
        let mut res = Vec::new();
        let mut f = f.clone();
        let mut h = x.clone();
        let mut i = 0;
        while f.len() > 2 * (i + 1) {
            i += 1;
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                res.push((g, i));
            }
        }
        if f.len() > 1 {
            let d = f.len() - 1;
            res.push((f, d));
        }
        res
    }

    fn equal_degree(&self, g: &ModPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
        let n = g.len() - 1;
        if n == d {
            out.push(g.clone());
            return;
        }
        let e = (BigUint::from(self.0).pow(d as u32) - 1u32) / 2u32;
        loop {
            let mut a: ModPoly = (0..n).map(|_| rng.gen_range(0..self.0)).collect();
            Self::trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &e, g), &vec![1u64]);
            let h = self.gcd(g, &b);
            if h.len() > 1 && h.len() < g.len() {
                let rest = self.divrem(g, &h).0;
                self.equal_degree(&h, d, rng, out);
                self.equal_degree(&rest, d, rng, out);
                return;
            }
        }
    }
}
