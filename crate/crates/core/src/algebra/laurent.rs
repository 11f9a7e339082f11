//! Truncated Laurent series over `F_q` with explicit absolute precision.
//!
//! A [`LaurentApprox`] stands for every series congruent to its coefficients
//! modulo `t^precision`. Exact values (finite Laurent polynomials) use the
//! [`EXACT`] sentinel precision. Arithmetic tracks precision pessimistically.

use std::fmt;

use super::fq::{fmt_raw, FiniteField, FqElem};
use super::ratfun::RatFun;
use crate::error::AlgebraError;

/// Precision of exactly known values.
pub const EXACT: i64 = i64::MAX / 4;

fn cap(x: i64) -> i64 {
    if x >= EXACT / 2 {
        EXACT
    } else {
        x
    }
}

/// Three-valued comparison outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentApprox {
    field: FiniteField,
    /// Exponent of `coeffs[0]`; meaningless when `coeffs` is empty.
    lead: i64,
    /// `coeffs[0] != 0` whenever non-empty.
    coeffs: Vec<u32>,
    precision: i64,
}

impl LaurentApprox {
    /// Zero known modulo `t^precision`.
    pub fn zero(field: &FiniteField, precision: i64) -> Self {
        LaurentApprox {
            field: field.clone(),
            lead: precision,
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn exact_zero(field: &FiniteField) -> Self {
        Self::zero(field, EXACT)
    }

    pub fn exact_one(field: &FiniteField) -> Self {
        Self::monomial(&field.one(), 0)
    }

    /// Exact `c * t^k`.
    pub fn monomial(c: &FqElem, k: i64) -> Self {
        Self::from_raw(c.field(), k, vec![c.raw()], EXACT)
    }

    /// Builds from coefficients of `t^leading_exponent, t^{leading_exponent+1}, ...`.
    pub fn new(
        field: &FiniteField,
        leading_exponent: i64,
        coeffs: &[FqElem],
        precision: i64,
    ) -> Self {
        Self::from_raw(
            field,
            leading_exponent,
            coeffs.iter().map(|c| c.raw()).collect(),
            precision,
        )
    }

    pub(crate) fn from_raw(
        field: &FiniteField,
        lead: i64,
        mut coeffs: Vec<u32>,
        precision: i64,
    ) -> Self {
        let precision = cap(precision);
        let mut lead = lead;
        let skip = coeffs.iter().position(|&c| c != 0).unwrap_or(coeffs.len());
        coeffs.drain(..skip);
        lead += skip as i64;
        if lead >= precision {
            return Self::zero(field, precision);
        }
        if precision != EXACT {
            let keep = (precision - lead).max(0) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Self::zero(field, precision);
        }
        LaurentApprox {
            field: field.clone(),
            lead,
            coeffs,
            precision,
        }
    }

    /// Expansion of a rational function modulo `t^precision`. Laurent
    /// polynomials come back exact.
    pub fn from_ratfun(r: &RatFun, precision: i64) -> Self {
        let field = r.field().clone();
        if r.is_zero() {
            return Self::exact_zero(&field);
        }
        let num = r.numerator().raw_coeffs();
        let den = r.denominator().raw_coeffs();
        let k = r.denominator().ord_t().unwrap();
        let d0 = &den[k..];
        if d0.len() == 1 {
            // denominator is t^k (monic)
            return Self::from_raw(&field, -(k as i64), num.to_vec(), EXACT);
        }
        // need coefficients of num/d0 for exponents < precision + k
        let upto = precision + k as i64;
        if upto <= 0 {
            return Self::zero(&field, precision);
        }
        let n = upto as usize;
        let inv = series_inverse(&field, d0, n);
        let mut out = vec![0u32; n];
        for (i, &a) in num.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in inv.iter().enumerate().take(n - i) {
                out[i + j] = field.add_raw(out[i + j], field.mul_raw(a, b));
            }
        }
        Self::from_raw(&field, -(k as i64), out, precision)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision == EXACT
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero_within_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation if the value is known to be nonzero; `None` if it is zero
    /// modulo the precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.lead)
    }

    /// Lower bound on the valuation.
    pub fn valuation_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.precision)
    }

    pub fn leading_exponent(&self) -> Option<i64> {
        self.valuation()
    }

    /// Coefficient of `t^k`; `None` if `k` is at or above the precision.
    pub fn coefficient(&self, k: i64) -> Option<FqElem> {
        if k >= self.precision {
            return None;
        }
        if self.coeffs.is_empty() || k < self.lead {
            return Some(self.field.zero());
        }
        let idx = (k - self.lead) as usize;
        Some(self.field.elem(self.coeffs.get(idx).copied().unwrap_or(0)))
    }

    /// Known coefficients starting at the leading exponent.
    pub fn coefficients(&self) -> Vec<FqElem> {
        self.coeffs.iter().map(|&c| self.field.elem(c)).collect()
    }

    pub fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        Self::from_raw(&self.field, self.lead, self.coeffs.clone(), precision)
    }

    /// Same coefficients, now regarded as exact.
    pub fn as_exact(&self) -> Self {
        Self::from_raw(&self.field, self.lead, self.coeffs.clone(), EXACT)
    }

    pub fn with_precision(&self, precision: i64) -> Self {
        Self::from_raw(&self.field, self.lead, self.coeffs.clone(), precision)
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        if self.coeffs.is_empty() {
            return other.truncate(precision);
        }
        if other.coeffs.is_empty() {
            return self.truncate(precision);
        }
        let lo = self.lead.min(other.lead);
        let hi = (self.lead + self.coeffs.len() as i64).max(other.lead + other.coeffs.len() as i64);
        let hi = hi.min(precision);
        if hi <= lo {
            return Self::zero(&self.field, precision);
        }
        let f = &self.field;
        let out = (lo..hi)
            .map(|k| f.add_raw(self.raw_at(k), other.raw_at(k)))
            .collect();
        Self::from_raw(f, lo, out, precision)
    }

    fn raw_at(&self, k: i64) -> u32 {
        if k < self.lead {
            return 0;
        }
        self.coeffs
            .get((k - self.lead) as usize)
            .copied()
            .unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentApprox {
            field: f.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|&c| f.neg_raw(c)).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let va = self.valuation_bound();
        let vb = other.valuation_bound();
        let precision = cap(
            cap(self.precision.saturating_add(vb)).min(cap(other.precision.saturating_add(va)))
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(&self.field, precision);
        }
        let lead = self.lead + other.lead;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if precision != EXACT {
            len = len.min((precision - lead).max(0) as usize);
        }
        let f = &self.field;
        let mut out = vec![0u32; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(a, b));
            }
        }
        Self::from_raw(f, lead, out, precision)
    }

    pub fn scale(&self, c: &FqElem) -> Self {
        if c.is_zero() {
            return Self::exact_zero(&self.field);
        }
        let f = &self.field;
        LaurentApprox {
            field: f.clone(),
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|&a| f.mul_raw(a, c.raw())).collect(),
            precision: self.precision,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentApprox {
            field: self.field.clone(),
            lead: self.lead + k,
            coeffs: self.coeffs.clone(),
            precision: cap(self.precision.saturating_add(k)),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::exact_one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a value known to be nonzero. For exact inputs the result
    /// is computed modulo `t^max_precision`.
    pub fn inv(&self, max_precision: i64) -> Result<Self, AlgebraError> {
        if self.coeffs.is_empty() {
            return Err(if self.is_exact() {
                AlgebraError::DivisionByZero
            } else {
                AlgebraError::InsufficientPrecision
            });
        }
        let v = self.lead;
        let precision = cap(self.precision.saturating_sub(2 * v)).min(max_precision);
        let n = precision + v;
        if n <= 0 {
            return Ok(Self::zero(&self.field, precision));
        }
        let inv = series_inverse(&self.field, &self.coeffs, n as usize);
        Ok(Self::from_raw(&self.field, -v, inv, precision))
    }

    pub fn div(&self, other: &Self, max_precision: i64) -> Result<Self, AlgebraError> {
        // enough precision in the inverse for the product to reach max_precision
        let extra = self.valuation_bound().min(0);
        let inv = other.inv(max_precision.saturating_sub(extra))?;
        Ok(self.mul(&inv).truncate(max_precision))
    }

    /// Three-valued equality: equal only when both sides are exact and agree.
    pub fn equals(&self, other: &Self) -> Tri {
        let d = self.sub(other);
        if !d.coeffs.is_empty() {
            Tri::False
        } else if d.is_exact() {
            Tri::True
        } else {
            Tri::Unknown
        }
    }
}

/// First `n` coefficients of `1/u` for `u[0] != 0`.
fn series_inverse(field: &FiniteField, u: &[u32], n: usize) -> Vec<u32> {
    let inv0 = field.inv_raw(u[0]).expect("unit constant term");
    let mut b = vec![0u32; n];
    if n == 0 {
        return b;
    }
    b[0] = inv0;
    for k in 1..n {
        let mut acc = 0;
        for i in 1..=k.min(u.len() - 1) {
            acc = field.add_raw(acc, field.mul_raw(u[i], b[k - i]));
        }
        b[k] = field.mul_raw(field.neg_raw(acc), inv0);
    }
    b
}

impl fmt::Debug for LaurentApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = self.lead + i as i64;
            let mono = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            let coeff = fmt_raw(&self.field, c);
            parts.push(match (c, e) {
                (_, 0) => coeff,
                (1, _) => mono,
                _ => format!("{coeff}*{mono}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))?;
        if !self.is_exact() {
            write!(f, " + O(t^{})", self.precision)?;
        }
        Ok(())
    }
}
