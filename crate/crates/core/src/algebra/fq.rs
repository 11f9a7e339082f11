//! Finite fields `F_q = F_p[X]/(f)` with `f` the lexicographically least monic
//! irreducible polynomial of degree `m`.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where
//! `c_i` is the coefficient of `X^i`. Small fields additionally carry
//! exponential/logarithm tables for multiplication.

use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;

/// Default upper bound on `q`.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get log/exp tables.
const TABLE_LIMIT: u64 = 1 << 16;

/// Element of the prime field, always `< p`.
pub type FpElem = u32;

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, coefficients from `X^0` to `X^m`.
    modulus: Vec<u32>,
    /// `pow[i] = p^i` for `i <= m`.
    pow: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field of order `p^m`. Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.m)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
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

// Dense polynomials over F_p used only while searching for the modulus.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv_lead = super::inv_mod(b[db], p);
        while r.len() > db {
            let lead = r[r.len() - 1];
            let shift = r.len() - 1 - db;
            let factor = (lead as u64 * inv_lead as u64 % p as u64) as u32;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (factor as u64 * bi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        rem(&out, f, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *slot = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    /// Ben-Or irreducibility test for a monic `f` of degree `m`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut power = x.clone();
        for _ in 0..m / 2 {
            // power <- power^p mod f
            let mut acc = vec![1];
            let mut base = power.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_mod(&acc, &base, f, p);
                }
                base = mul_mod(&base, &base, f, p);
                e >>= 1;
            }
            power = acc;
            let g = gcd(f, &sub(&power, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

impl FiniteField {
    /// Builds `F_{p^m}` with the default order bound.
    pub fn new(p: u32, m: u32) -> Result<Self, AlgebraError> {
        Self::with_bound(p, m, DEFAULT_MAX_ORDER)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        Self::new(p, 1)
    }

    pub fn with_bound(p: u32, m: u32, max_order: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p as u64) {
            return Err(AlgebraError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(AlgebraError::InvalidDegree);
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= max_order);
        let q = match q {
            Some(q) => q as u32,
            None => {
                return Err(AlgebraError::FieldTooLarge {
                    p: p as u64,
                    m,
                    bound: max_order,
                })
            }
        };
        let modulus = least_irreducible(p, m);
        Ok(Self::from_parts(p, m, q, modulus))
    }

    /// Builds the field from an explicit monic modulus, checking irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self, AlgebraError> {
        if !is_prime(p as u64) {
            return Err(AlgebraError::NotPrime(p as u64));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(AlgebraError::InvalidModulus);
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(AlgebraError::ReducibleModulus);
        }
        let m = (modulus.len() - 1) as u32;
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= DEFAULT_MAX_ORDER)
            .ok_or(AlgebraError::FieldTooLarge {
                p: p as u64,
                m,
                bound: DEFAULT_MAX_ORDER,
            })? as u32;
        Ok(Self::from_parts(p, m, q, modulus))
    }

    fn from_parts(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut pow = Vec::with_capacity(m as usize + 1);
        let mut acc = 1u32;
        for _ in 0..=m {
            pow.push(acc);
            acc = acc.saturating_mul(p);
        }
        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            pow,
            tables: None,
        };
        if (q as u64) <= TABLE_LIMIT && q > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        FiniteField(Arc::new(inner))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        self.elem(0)
    }

    pub fn one(&self) -> FqElem {
        self.elem(1)
    }

    /// The class of `X`, which generates `F_q` over `F_p`.
    pub fn generator(&self) -> FqElem {
        if self.0.m == 1 {
            // X reduces to -modulus[0]
            self.elem((self.0.p - self.0.modulus[0]) % self.0.p)
        } else {
            self.elem(self.0.p)
        }
    }

    /// Wraps a raw encoding. Panics if out of range.
    pub fn elem(&self, raw: u32) -> FqElem {
        assert!(raw < self.0.q, "encoding {raw} out of range for {self}");
        FqElem {
            field: self.clone(),
            raw,
        }
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        self.elem(self.raw_from_int(n))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q).map(move |r| self.elem(r))
    }

    /// Least element (by encoding) of multiplicative order `q - 1`.
    pub fn primitive_element(&self) -> FqElem {
        if let Some(t) = &self.0.tables {
            return self.elem(t.exp[1]);
        }
        self.elem(find_primitive(&self.0))
    }

    // ---- raw arithmetic on encodings ----

    pub(crate) fn raw_from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.m == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in 0..self.0.m as usize {
            let d = (a % p + b % p) % p;
            out += d * self.0.pow[i];
            a /= p;
            b /= p;
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.m == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        for i in 0..self.0.m as usize {
            let d = a % p;
            out += ((p - d) % p) * self.0.pow[i];
            a /= p;
        }
        out
    }

    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.0.m == 1 {
            return (a as u64 * b as u64 % self.0.p as u64) as u32;
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let e = (t.log[a as usize] + t.log[b as usize]) % n;
            return t.exp[e as usize];
        }
        mul_poly_raw(&self.0, a, b)
    }

    pub(crate) fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_raw(result, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse, `None` for zero.
    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.0.m == 1 {
            return Some(inv_mod(a, self.0.p));
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let e = (n - t.log[a as usize]) % n;
            return Some(t.exp[e as usize]);
        }
        Some(self.pow_raw(a, self.0.q as u64 - 2))
    }
}

fn digits(inner: &Inner, mut a: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(inner.m as usize);
    for _ in 0..inner.m {
        out.push(a % inner.p);
        a /= inner.p;
    }
    out
}

fn undigits(inner: &Inner, d: &[u32]) -> u32 {
    d.iter().enumerate().map(|(i, &c)| c * inner.pow[i]).sum()
}

fn mul_poly_raw(inner: &Inner, a: u32, b: u32) -> u32 {
    let da = digits(inner, a);
    let db = digits(inner, b);
    let r = fp_poly::mul_mod(&da, &db, &inner.modulus, inner.p);
    let mut full = r;
    full.resize(inner.m as usize, 0);
    undigits(inner, &full)
}

fn find_primitive(inner: &Inner) -> u32 {
    let n = (inner.q - 1) as u64;
    let mut factors = Vec::new();
    let mut k = n;
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            factors.push(d);
            while k.is_multiple_of(d) {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        factors.push(k);
    }
    let pow = |a: u32, mut e: u64| {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = mul_poly_raw(inner, result, base);
            }
            base = mul_poly_raw(inner, base, base);
            e >>= 1;
        }
        result
    };
    (1..inner.q)
        .find(|&g| factors.iter().all(|&f| pow(g, n / f) != 1))
        .expect("multiplicative group of a finite field is cyclic")
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q as usize;
    let g = find_primitive(inner);
    let mut exp = vec![0u32; q - 1];
    let mut log = vec![0u32; q];
    let mut x = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = i as u32;
        x = mul_poly_raw(inner, x, g);
    }
    Tables { exp, log }
}

fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    // Enumerate lower coefficients ordered from X^{m-1} down to X^0.
    for code in 0..count {
        let mut coeffs = vec![0u32; m as usize + 1];
        coeffs[m as usize] = 1;
        let mut c = code;
        for slot in coeffs.iter_mut().take(m as usize) {
            *slot = (c % p as u64) as u32;
            c /= p as u64;
        }
        if coeffs[0] == 0 {
            continue;
        }
        if fp_poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    field: FiniteField,
    raw: u32,
}

impl std::hash::Hash for FqElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.raw.hash(state);
    }
}

impl FqElem {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Integer encoding; see the module docs.
    pub fn raw(&self) -> u32 {
        self.raw
    }

    /// Coefficients over `F_p` with respect to `1, X, ..., X^{m-1}`.
    pub fn coeffs(&self) -> Vec<u32> {
        digits(&self.field.0, self.raw)
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    pub fn is_one(&self) -> bool {
        self.raw == 1
    }

    fn with(&self, raw: u32) -> FqElem {
        FqElem {
            field: self.field.clone(),
            raw,
        }
    }

    pub fn inv(&self) -> Option<FqElem> {
        self.field.inv_raw(self.raw).map(|r| self.with(r))
    }

    pub fn pow(&self, e: u64) -> FqElem {
        self.with(self.field.pow_raw(self.raw, e))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.characteristic() as u64)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_raw(&self.field, self.raw))
    }
}

/// Renders an encoding as a polynomial in the generator `a`.
pub(crate) fn fmt_raw(field: &FiniteField, raw: u32) -> String {
    if field.degree() == 1 {
        return raw.to_string();
    }
    let d = digits(&field.0, raw);
    let mut parts = Vec::new();
    for (i, &c) in d.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("({})", parts.join(" + "))
    }
}

macro_rules! fq_binop {
    ($tr:ident, $method:ident, $raw:ident) => {
        impl std::ops::$tr for FqElem {
            type Output = FqElem;
            fn $method(self, rhs: FqElem) -> FqElem {
                debug_assert_eq!(self.field, rhs.field);
                let r = self.field.$raw(self.raw, rhs.raw);
                self.with(r)
            }
        }
        impl<'a> std::ops::$tr<&'a FqElem> for &'a FqElem {
            type Output = FqElem;
            fn $method(self, rhs: &'a FqElem) -> FqElem {
                debug_assert_eq!(self.field, rhs.field);
                self.with(self.field.$raw(self.raw, rhs.raw))
            }
        }
    };
}

fq_binop!(Add, add, add_raw);
fq_binop!(Sub, sub, sub_raw);
fq_binop!(Mul, mul, mul_raw);

impl std::ops::Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        let r = self.field.neg_raw(self.raw);
        self.with(r)
    }
}

impl std::ops::Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        self.with(self.field.neg_raw(self.raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_moduli() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FiniteField::new(4, 1),
            Err(AlgebraError::NotPrime(4))
        ));
        assert!(FiniteField::new(2, 0).is_err());
        assert!(matches!(
            FiniteField::new(2, 21),
            Err(AlgebraError::FieldTooLarge { .. })
        ));
        assert!(matches!(
            FiniteField::with_modulus(2, vec![1, 0, 1]),
            Err(AlgebraError::ReducibleModulus)
        ));
    }

    #[test]
    fn untabled_field_matches_arithmetic() {
        // 2^17 is above the table limit, so this exercises polynomial multiplication.
        let f = FiniteField::new(2, 17).unwrap();
        let a = f.elem(12345);
        let b = f.elem(99999);
        let ab = &a * &b;
        assert_eq!(&ab * &b.inv().unwrap(), a);
        assert_eq!(a.pow(f.order() as u64), a);
    }

    #[test]
    fn generator_and_primitive() {
        let f9 = FiniteField::new(3, 2).unwrap();
        let g = f9.primitive_element();
        assert_eq!(g.pow(4), -f9.one());
        assert!(f9.generator().pow(4).is_one());
        assert_eq!(
            FiniteField::prime(5).unwrap().generator(),
            FiniteField::prime(5).unwrap().zero()
        );
    }

    #[test]
    fn display() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.elem(3).to_string(), "(a + 1)");
        assert_eq!(f4.elem(2).to_string(), "a");
    }
}
