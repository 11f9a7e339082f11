//! The rational function field `F_q(t)` with its `t`-adic valuation.

use std::cmp::Ordering;
use std::fmt;

use super::fq::{FiniteField, FqElem};
use super::poly::Poly;
use crate::error::AlgebraError;

/// A value in `Z ∪ {+∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinity => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, _) => Ordering::Greater,
            (_, Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            let f = den.field().clone();
            return RatFun {
                num: Poly::zero(&f),
                den: Poly::one(&f),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lead_inv = den.leading().inv().unwrap();
        RatFun {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let f = p.field().clone();
        RatFun {
            num: p,
            den: Poly::one(&f),
        }
    }

    pub fn zero(field: &FiniteField) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(c: &FqElem) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(field: &FiniteField, n: i64) -> Self {
        Self::constant(&field.from_int(n))
    }

    pub fn t(field: &FiniteField) -> Self {
        Self::from_poly(Poly::t(field))
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(c: &FqElem, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero(c.field());
        }
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFun {
                num: Poly::constant(c),
                den: Poly::monomial(&c.field().one(), (-k) as usize),
            }
        }
    }

    pub fn field(&self) -> &FiniteField {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Constant in `F_q`, if this is one.
    pub fn as_constant(&self) -> Option<FqElem> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn valuation(&self) -> Valuation {
        match self.num.ord_t() {
            None => Valuation::Infinity,
            Some(n) => Valuation::Finite(n as i64 - self.den.ord_t().unwrap() as i64),
        }
    }

    /// `self ∈ F_q[t]_(t)`, the valuation ring.
    pub fn in_valuation_ring(&self) -> bool {
        self.valuation().is_nonnegative()
    }

    /// Coefficient of `t^{v}` where `v` is the valuation. `None` for zero.
    pub fn leading_coefficient(&self) -> Option<FqElem> {
        let a = self.num.ord_t()?;
        let b = self.den.ord_t().unwrap();
        let n0 = self.num.coeff(a);
        let d0 = self.den.coeff(b);
        Some(&n0 * &d0.inv().unwrap())
    }

    /// Residue of an element of the valuation ring.
    pub fn residue(&self) -> Option<FqElem> {
        match self.valuation() {
            Valuation::Infinity => Some(self.field().zero()),
            Valuation::Finite(0) => self.leading_coefficient(),
            Valuation::Finite(v) if v > 0 => Some(self.field().zero()),
            _ => None,
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Total inverse with `0^{-1} = 0`.
    pub fn inv_total(&self) -> RatFun {
        if self.is_zero() {
            return self.clone();
        }
        Self::normalized(self.den.clone(), self.num.clone())
    }

    pub fn inv(&self) -> Option<RatFun> {
        (!self.is_zero()).then(|| self.inv_total())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, AlgebraError> {
        other
            .inv()
            .map(|i| self.mul(&i))
            .ok_or(AlgebraError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> RatFun {
        let base = if e < 0 {
            self.inv_total()
        } else {
            self.clone()
        };
        let e = e.unsigned_abs();
        RatFun {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    pub fn scale(&self, c: &FqElem) -> RatFun {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Exact square root inside `F_q(t)` if one exists.
    pub fn sqrt_exact(&self) -> Option<RatFun> {
        // a/b is a square iff a*b is, and then sqrt(a/b) = sqrt(a*b)/b
        let ab = self.num.mul(&self.den);
        let r = ab.sqrt_exact()?;
        Some(Self::normalized(r, self.den.clone()))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if s.contains(' ') {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}
