//! Exact arithmetic in small finite fields `F_q`, `q = p^m`.
//!
//! Elements are stored as one-byte codes `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! over the polynomial basis `1, x, ..., x^{m-1}`. All arithmetic goes through
//! lookup tables built once per [`Field`], so element values are `Copy` and
//! carry no reference to their field.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest field order the table-backed representation supports.
pub const MAX_TABLE_ORDER: u64 = 256;

/// Default cap for exhaustive element enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 49;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("modulus must be monic of degree >= 1 with coefficients below p")]
    BadModulus,
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field of order {q} exceeds the cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("theorem hypothesis {requirement} unmet for q = {q}, p = {p}")]
    GateFailed {
        q: u64,
        p: u64,
        requirement: Requirement,
    },
}

/// Hypotheses on `k` that the rank-2 theorems assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    QGt3,
    PGt2,
    Both,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::QGt3 => "|k| > 3",
            Requirement::PGt2 => "char(k) > 2",
            Requirement::Both => "|k| > 3 and char(k) > 2",
        })
    }
}

/// Characteristic, degree and defining polynomial of `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    /// Monic modulus, coefficients from low to high degree.
    modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self {
            p,
            m: 1,
            modulus: vec![0, 1],
        })
    }

    /// The field of order `q` with the built-in modulus for that order.
    ///
    /// Orders 4, 8, 9, 16, 25, 27 and 49 use fixed moduli; any other prime
    /// power falls back to the lexicographically first monic irreducible.
    pub fn from_order(q: u64) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotAPrimePower(q))?;
        if m == 1 {
            return Self::prime(p);
        }
        if q > MAX_TABLE_ORDER {
            return Err(FieldError::FieldTooLarge {
                q,
                cap: MAX_TABLE_ORDER,
            });
        }
        let modulus = match q {
            4 => vec![1, 1, 1],
            8 => vec![1, 1, 0, 1],
            9 => vec![1, 0, 1],
            16 => vec![1, 1, 0, 0, 1],
            25 => vec![2, 0, 1],
            27 => vec![1, 2, 0, 1],
            49 => vec![1, 0, 1],
            _ => first_irreducible(p, m),
        };
        Self::with_modulus(p, modulus)
    }

    /// Explicit modulus `c0 + c1 x + ... + x^m` (low to high, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus);
        }
        let m = (modulus.len() - 1) as u32;
        if m > 1 && !is_irreducible(p, &modulus) {
            return Err(FieldError::ReducibleModulus { p });
        }
        Ok(Self { p, m, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

/// Passes exactly when the named inequality holds for `spec`.
pub fn theorem_gate(spec: &FieldSpec, requirement: Requirement) -> Result<(), FieldError> {
    let q_ok = spec.q() > 3;
    let p_ok = spec.p() > 2;
    let ok = match requirement {
        Requirement::QGt3 => q_ok,
        Requirement::PGt2 => p_ok,
        Requirement::Both => q_ok && p_ok,
    };
    if ok {
        Ok(())
    } else {
        Err(FieldError::GateFailed {
            q: spec.q(),
            p: spec.p(),
            requirement,
        })
    }
}

/// An element of some [`Field`], identified by its code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub(crate) u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);

    pub fn code(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Table-backed finite field.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.spec.p)
            .field("m", &self.spec.m)
            .field("modulus", &self.spec.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        let q64 = spec.q();
        if q64 > MAX_TABLE_ORDER {
            return Err(FieldError::FieldTooLarge {
                q: q64,
                cap: MAX_TABLE_ORDER,
            });
        }
        let q = q64 as usize;
        let p = spec.p;
        let m = spec.m as usize;
        let polys: Vec<Vec<u64>> = (0..q).map(|c| decode(c as u64, p, m)).collect();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            let pa = &polys[a];
            neg[a] = encode(&pa.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p) as u8;
            for b in 0..q {
                let pb = &polys[b];
                let s: Vec<u64> = pa.iter().zip(pb).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s, p) as u8;
                mul[a * q + b] = encode(&poly_mulmod(pa, pb, &spec.modulus, p), p) as u8;
            }
            if a != 0 {
                let i = poly_inverse(pa, &spec.modulus, p).expect("modulus is irreducible");
                inv[a] = encode(&i, p) as u8;
            }
        }
        Ok(Self {
            spec,
            q,
            add,
            mul,
            neg,
            inv,
        })
    }

    /// Shorthand for `Field::new(FieldSpec::from_order(q)?)`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        Self::new(FieldSpec::from_order(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.add[a.0 as usize * self.q + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.mul[a.0 as usize * self.q + b.0 as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(Fe(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for a possibly negative exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: Fe, e: i64) -> Result<Fe, FieldError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.spec.p as i64;
        Fe(n.rem_euclid(p) as u8)
    }

    /// Element with polynomial coefficients `c_0, c_1, ...` (low to high).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Fe {
        let p = self.spec.p;
        let m = self.spec.m as usize;
        let mut reduced = vec![0u64; m];
        for (i, &c) in coeffs.iter().enumerate().take(m) {
            reduced[i] = c % p;
        }
        Fe(encode(&reduced, p) as u8)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u64> {
        decode(a.0 as u64, self.spec.p, self.spec.m as usize)
    }

    /// All `q` elements in lexicographic order of `(c_0, c_1, ...)`.
    pub fn elements(&self) -> Vec<Fe> {
        let mut all: Vec<Fe> = (0..self.q).map(|c| Fe(c as u8)).collect();
        all.sort_by_key(|&a| self.coeffs(a));
        all
    }

    /// Like [`Field::elements`] but refuses fields above `cap`.
    pub fn enumerate_elements(&self, cap: usize) -> Result<Vec<Fe>, FieldError> {
        if self.q > cap {
            return Err(FieldError::FieldTooLarge {
                q: self.q as u64,
                cap: cap as u64,
            });
        }
        Ok(self.elements())
    }

    pub fn nonzero_elements(&self) -> Vec<Fe> {
        self.elements().into_iter().filter(|a| !a.is_zero()).collect()
    }

    /// Basis `1, x, ..., x^{m-1}` of `k` over the prime field.
    pub fn prime_basis(&self) -> Vec<Fe> {
        let p = self.spec.p;
        (0..self.spec.m).map(|i| Fe(p.pow(i) as u8)).collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut x = a;
        let mut n = 1;
        while x != self.one() {
            x = self.mul(x, a);
            n += 1;
        }
        Ok(n)
    }

    /// Integer (prime fields) or coefficient-tuple rendering.
    pub fn render(&self, a: Fe) -> serde_json::Value {
        if self.spec.m == 1 {
            serde_json::Value::from(a.0 as u64)
        } else {
            serde_json::Value::from(self.coeffs(a))
        }
    }

    pub fn render_text(&self, a: Fe) -> String {
        if self.spec.m == 1 {
            a.0.to_string()
        } else {
            let parts: Vec<String> = self.coeffs(a).iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut code: u64, p: u64, m: usize) -> Vec<u64> {
    let mut out = vec![0; m];
    for c in out.iter_mut() {
        *c = code % p;
        code /= p;
    }
    out
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Remainder and quotient of `a / b` over `F_p`; `b` nonzero.
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("nonzero divisor");
    let lead_inv = mod_inv(b[db], p);
    let mut r = a.to_vec();
    let mut quot = vec![0u64; a.len().max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let coef = r[dr] * lead_inv % p;
        let shift = dr - db;
        quot[shift] = coef;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] = (r[i + shift] + p - coef * bc % p) % p;
        }
    }
    (trim(quot), trim(r))
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect()
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let (_, r) = poly_divmod(&poly_mul(a, b, p), modulus, p);
    let mut out = vec![0; m];
    for (i, c) in r.into_iter().enumerate().take(m) {
        out[i] = c;
    }
    out
}

/// Inverse of `a` modulo `modulus` via the extended Euclidean algorithm.
fn poly_inverse(a: &[u64], modulus: &[u64], p: u64) -> Option<Vec<u64>> {
    let m = modulus.len() - 1;
    let (mut r0, mut r1) = (modulus.to_vec(), trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![0u64], vec![1u64]);
    while degree(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s = trim(poly_sub(&s0, &poly_mul(&q, &s1, p), p));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd; it must be a nonzero constant.
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = mod_inv(r0[0], p);
    let mut out = vec![0u64; m];
    let (_, s) = poly_divmod(&s0, modulus, p);
    for (i, v) in s.into_iter().enumerate().take(m) {
        out[i] = v * c % p;
    }
    Some(out)
}

/// Irreducibility by exhaustive trial division with every monic polynomial of
/// degree `1..=m/2`.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut divisor = decode(low, p, d);
            divisor.push(1);
            let (_, r) = poly_divmod(modulus, &divisor, p);
            if degree(&r).is_none() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    (0..count)
        .map(|low| {
            let mut poly = decode(low, p, m as usize);
            poly.push(1);
            poly
        })
        .find(|poly| poly[0] != 0 && is_irreducible(p, poly))
        .expect("irreducible polynomials exist in every degree")
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, m))
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
