//! Finite fields `F_{p^k}` in the polynomial basis over the prime field.
//!
//! Elements are coefficient vectors (constant term first). Internally every
//! element also has an integer code `sum c_i p^i`, which indexes the
//! exponential, logarithm and square-root tables built at construction.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the number of field elements.
pub const DEFAULT_CEILING: u64 = 1 << 16;

const NO_ROOT: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field order {order} exceeds ceiling {ceiling}")]
    CeilingExceeded { order: u64, ceiling: u64 },
    #[error("modulus {0:?} is not a monic irreducible polynomial")]
    BadModulus(Vec<u32>),
    #[error("element has {got} coefficients, field degree is {expected}")]
    WrongLength { got: usize, expected: usize },
}

/// A field element as its coefficient vector over the prime field.
///
/// The derived ordering is lexicographic on the coefficient vector, which is
/// the ordering used for every deterministic choice in this crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(Vec<u32>);

impl Element {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    /// An element from raw coefficients, without reference to a field.
    /// Used for labels of synthetic classifications.
    pub(crate) fn from_raw(coeffs: Vec<u32>) -> Element {
        Element(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(":"))
    }
}

/// The field `F_{p^k}` with a fixed monic irreducible modulus.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    sqrt: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Serialized form `{"p": .., "k": .., "modulus": [..]}`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `F_{p^k}` with the lexicographically least monic irreducible modulus.
pub fn make_field(p: u32, k: u32) -> Result<FieldSpec, FieldError> {
    make_field_with_ceiling(p, k, DEFAULT_CEILING)
}

pub fn make_field_with_ceiling(p: u32, k: u32, ceiling: u64) -> Result<FieldSpec, FieldError> {
    check_params(p, k, ceiling)?;
    let modulus = least_irreducible(p, k);
    FieldSpec::build(p, k, modulus)
}

fn check_params(p: u32, k: u32, ceiling: u64) -> Result<(), FieldError> {
    if !is_prime(p as u64) {
        return Err(FieldError::NotPrime(p as u64));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
    if order > ceiling {
        return Err(FieldError::CeilingExceeded { order, ceiling });
    }
    Ok(())
}

// --- polynomials over F_p, little-endian coefficient vectors ---

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo monic `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() as u64;
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = lead * c as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 || m[deg] != 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = digits(idx, p, d);
            div.push(1);
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

/// Lexicographically least monic irreducible of degree `k`, comparing the
/// little-endian coefficient vector from the constant term upwards.
fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let count = (p as u64).pow(k as u32);
    for idx in 0..count {
        // The constant term is the most significant digit of `idx`.
        let mut m = digits(idx, p, k);
        m.reverse();
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

impl FieldSpec {
    /// Builds the field for an explicit modulus, verifying irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<FieldSpec, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::BadModulus(modulus));
        }
        let k = (modulus.len() - 1) as u32;
        check_params(p, k, DEFAULT_CEILING)?;
        if modulus.iter().any(|&c| c >= p) || !is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus(modulus));
        }
        FieldSpec::build(p, k, modulus)
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<FieldSpec, FieldError> {
        let order = p.pow(k);
        let mut field = FieldSpec {
            p,
            k,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            sqrt: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = digits(a as u64, self.p, self.k as usize);
        let pb = digits(b as u64, self.p, self.k as usize);
        self.code_of(&poly_mul_mod(&pa, &pb, &self.modulus, self.p))
    }

    fn code_of(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn build_tables(&mut self) {
        let q = self.order;
        let units = q - 1;
        // Find a primitive element by brute force.
        let mut exp = Vec::new();
        for g in 1..q {
            exp.clear();
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 || exp.len() > units as usize {
                    break;
                }
            }
            if exp.len() == units as usize {
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        self.exp = exp;
        self.log = log;

        let mut sqrt = vec![NO_ROOT; q as usize];
        for y in 0..q {
            let s = self.mul_code(y, y) as usize;
            let better = sqrt[s] == NO_ROOT
                || self.decode(y) < self.decode(sqrt[s]);
            if better {
                sqrt[s] = y;
            }
        }
        self.sqrt = sqrt;
    }

    pub(crate) fn decode(&self, code: u32) -> Element {
        Element(digits(code as u64, self.p, self.k as usize))
    }

    pub(crate) fn encode(&self, e: &Element) -> u32 {
        debug_assert_eq!(e.0.len(), self.k as usize);
        self.code_of(&e.0)
    }

    fn add_code(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    fn neg_code(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place = place.wrapping_mul(self.p);
        }
        out
    }

    fn mul_code(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[e as usize]
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            k: self.k,
            modulus: self.modulus.clone(),
        }
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.k as usize])
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    /// The prime-field image of an integer.
    pub fn from_int(&self, n: i64) -> Element {
        let mut c = vec![0; self.k as usize];
        c[0] = n.rem_euclid(self.p as i64) as u32;
        Element(c)
    }

    /// Element from integer coefficients (reduced mod p), constant term first.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Element, FieldError> {
        if coeffs.len() != self.k as usize {
            return Err(FieldError::WrongLength {
                got: coeffs.len(),
                expected: self.k as usize,
            });
        }
        Ok(Element(
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(self.p as i64) as u32)
                .collect(),
        ))
    }

    /// The class of the polynomial variable `x` (the prime-field `0` if `k = 1`).
    pub fn generator(&self) -> Element {
        if self.k == 1 {
            return self.zero();
        }
        let mut c = vec![0; self.k as usize];
        c[1] = 1;
        Element(c)
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.0.len() == self.k as usize && e.0.iter().all(|&c| c < self.p)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Element> {
        let mut all: Vec<Element> = (0..self.order).map(|c| self.decode(c)).collect();
        all.sort();
        all
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        self.decode(self.add_code(self.encode(a), self.encode(b)))
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.decode(self.neg_code(self.encode(a)))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.decode(self.mul_code(self.encode(a), self.encode(b)))
    }

    pub fn inv(&self, a: &Element) -> Option<Element> {
        let c = self.encode(a);
        if c == 0 {
            return None;
        }
        let n = self.order - 1;
        let e = (n - self.log[c as usize]) % n;
        Some(self.decode(self.exp[e as usize]))
    }

    /// `a / b`; panics on division by zero.
    pub fn div(&self, a: &Element, b: &Element) -> Element {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    pub fn pow(&self, a: &Element, e: u64) -> Element {
        let c = self.encode(a);
        if e == 0 {
            return self.one();
        }
        if c == 0 {
            return self.zero();
        }
        let n = (self.order - 1) as u64;
        let l = self.log[c as usize] as u64 * (e % n) % n;
        self.decode(self.exp[l as usize])
    }

    pub fn frobenius(&self, a: &Element) -> Element {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to the prime field, `sum_i a^(p^i)`.
    pub fn trace(&self, a: &Element) -> Element {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        acc
    }

    /// The least `y` (lexicographically) with `y^2 = a`, if any.
    ///
    /// In characteristic 2 squaring is a bijection and a root always exists.
    pub fn sqrt(&self, a: &Element) -> Option<Element> {
        match self.sqrt[self.encode(a) as usize] {
            NO_ROOT => None,
            y => Some(self.decode(y)),
        }
    }

    /// All distinct roots of `y^2 + b y + c` in ascending order.
    pub fn solve_monic_quadratic(&self, b: &Element, c: &Element) -> Vec<Element> {
        let mut roots = if self.p == 2 {
            self.solve_char2(b, c)
        } else {
            let two = self.from_int(2);
            let four = self.from_int(4);
            let disc = self.sub(&self.mul(b, b), &self.mul(&four, c));
            let minus_b = self.neg(b);
            match self.sqrt(&disc) {
                None => Vec::new(),
                Some(s) if s.is_zero() => vec![self.div(&minus_b, &two)],
                Some(s) => vec![
                    self.div(&self.add(&minus_b, &s), &two),
                    self.div(&self.sub(&minus_b, &s), &two),
                ],
            }
        };
        roots.sort();
        roots.dedup();
        roots
    }

    fn solve_char2(&self, b: &Element, c: &Element) -> Vec<Element> {
        if b.is_zero() {
            // y^2 = c has exactly one root.
            return vec![self.sqrt(c).expect("squaring is bijective in characteristic 2")];
        }
        // y = b z turns the equation into z^2 + z = c / b^2.
        let t = self.div(c, &self.mul(b, b));
        if !self.trace(&t).is_zero() {
            return Vec::new();
        }
        let one = self.one();
        let z = (0..self.order)
            .map(|code| self.decode(code))
            .find(|z| self.add(&self.mul(z, z), z) == t)
            .expect("trace zero guarantees a root");
        vec![self.mul(b, &z), self.mul(b, &self.add(&z, &one))]
    }
}

/// A field homomorphism `F_q -> F_{q^2}`, tabulated on all elements.
#[derive(Clone, Debug)]
pub struct Embedding {
    images: Vec<Element>,
}

impl Embedding {
    pub fn apply(&self, source: &FieldSpec, a: &Element) -> Element {
        self.images[source.encode(a) as usize].clone()
    }

    /// Images of the source elements, indexed by internal code.
    pub fn image(&self) -> &[Element] {
        &self.images
    }
}

/// The degree-2 extension of `base` as a field over the same prime, with an
/// embedding sending the generator of `base` to the least root of its
/// modulus in the extension.
pub fn quadratic_extension(base: &FieldSpec) -> Result<(FieldSpec, Embedding), FieldError> {
    quadratic_extension_with_ceiling(base, DEFAULT_CEILING)
}

pub fn quadratic_extension_with_ceiling(
    base: &FieldSpec,
    ceiling: u64,
) -> Result<(FieldSpec, Embedding), FieldError> {
    let ext = make_field_with_ceiling(base.p, 2 * base.k, ceiling)?;
    let root = if base.k == 1 {
        ext.zero()
    } else {
        ext.elements()
            .into_iter()
            .find(|r| {
                let mut acc = ext.zero();
                for &c in base.modulus.iter().rev() {
                    acc = ext.add(&ext.mul(&acc, r), &ext.from_int(c as i64));
                }
                acc.is_zero()
            })
            .expect("the modulus splits in the quadratic extension")
    };
    let images = (0..base.order)
        .map(|code| {
            let a = base.decode(code);
            let mut acc = ext.zero();
            for &c in a.0.iter().rev() {
                acc = ext.add(&ext.mul(&acc, &root), &ext.from_int(c as i64));
            }
            acc
        })
        .collect();
    Ok((ext, Embedding { images }))
}
