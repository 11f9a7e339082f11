//! Dense univariate polynomials over `F_q` in the variable `t`.

use std::fmt;

use super::fq::{fmt_raw, FiniteField, FqElem};

/// Polynomial with coefficients stored lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FiniteField,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn zero(field: &FiniteField) -> Self {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(&field.one())
    }

    pub fn constant(c: &FqElem) -> Self {
        Self::from_raw(c.field(), vec![c.raw()])
    }

    /// `c * t^k`.
    pub fn monomial(c: &FqElem, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.raw();
        Self::from_raw(c.field(), coeffs)
    }

    pub fn t(field: &FiniteField) -> Self {
        Self::monomial(&field.one(), 1)
    }

    pub fn from_coeffs(field: &FiniteField, coeffs: &[FqElem]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|c| c.raw()).collect())
    }

    pub(crate) fn from_raw(field: &FiniteField, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub(crate) fn raw_coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.field.elem(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FqElem {
        self.field.elem(self.coeffs.last().copied().unwrap_or(0))
    }

    /// Order of vanishing at `t = 0`; `None` for zero.
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let f = &self.field;
        let c = (0..n)
            .map(|i| {
                f.add_raw(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::from_raw(f, c)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg_raw(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(a, b));
            }
        }
        Poly::from_raw(f, out)
    }

    pub fn scale(&self, c: &FqElem) -> Poly {
        let f = &self.field;
        Poly::from_raw(
            f,
            self.coeffs.iter().map(|&a| f.mul_raw(a, c.raw())).collect(),
        )
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut result = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let d = divisor.degree().expect("division by zero polynomial");
        let inv_lead = f.inv_raw(divisor.coeffs[d]).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(f), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - d];
        for k in (0..quot.len()).rev() {
            let lead = rem[k + d];
            if lead == 0 {
                continue;
            }
            let factor = f.mul_raw(lead, inv_lead);
            quot[k] = factor;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub_raw(rem[k + i], f.mul_raw(factor, c));
            }
        }
        (Poly::from_raw(f, quot), Poly::from_raw(f, rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().unwrap();
        self.scale(&inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        let f = &self.field;
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = f.add_raw(f.mul_raw(acc, x.raw()), c);
        }
        f.elem(acc)
    }

    /// Exact square root in `F_q[t]` if one exists.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        let f = &self.field;
        if self.is_zero() {
            return Some(self.clone());
        }
        let deg = self.degree().unwrap();
        if deg % 2 == 1 {
            return None;
        }
        if f.characteristic() == 2 {
            // squares are exactly the polynomials in t^2 with any coefficients
            if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0) {
                return None;
            }
            let coeffs: Vec<u32> = self
                .coeffs
                .iter()
                .step_by(2)
                .map(|&c| super::solve::sqrt_fq(&f.elem(c)).unwrap().raw())
                .collect();
            return Some(Poly::from_raw(f, coeffs));
        }
        // odd characteristic: solve from the top coefficient down
        let half = deg / 2;
        let lead_root = super::solve::sqrt_fq(&self.leading())?;
        let two_lead = f.add_raw(lead_root.raw(), lead_root.raw());
        let inv = f.inv_raw(two_lead).unwrap();
        let mut root = vec![0u32; half + 1];
        root[half] = lead_root.raw();
        for k in (0..half).rev() {
            // coefficient of t^{half + k} in root^2 must match
            let target = self.coeffs[half + k];
            let mut acc = 0;
            for i in (k + 1)..half {
                let j = half + k - i;
                if j > k && j <= half {
                    acc = f.add_raw(acc, f.mul_raw(root[i], root[j]));
                }
            }
            root[k] = f.mul_raw(f.sub_raw(target, acc), inv);
        }
        let cand = Poly::from_raw(f, root);
        if cand.mul(&cand) == *self {
            Some(cand)
        } else {
            None
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let coeff = fmt_raw(&self.field, c);
            parts.push(match (c, i) {
                (_, 0) => coeff,
                (1, _) => mono,
                _ => format!("{coeff}*{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}
