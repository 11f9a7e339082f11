//! Exact solvability of `z^2 + z = c` (characteristic 2) and `y^2 = d`
//! (odd characteristic) over `F_q((t))` for `c, d ∈ F_q(t)`, with witnesses.

use super::fq::{FiniteField, FpElem, FqElem};
use super::laurent::LaurentApprox;
use super::ratfun::{RatFun, Valuation};
use crate::error::AlgebraError;

/// Why a solvability question was answered the way it was.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateReason {
    /// Right-hand side has positive valuation; the root near 0 is simple.
    HenselSimpleRoot,
    /// Decided by the trace of the residue after clearing poles.
    ResidueTrace,
    /// Leading coefficient is a square in `F_q`.
    ResidueSquare,
    /// A pole or the valuation of the radicand has odd order.
    OddValuation,
    /// Leading coefficient is not a square in `F_q`.
    NonResidue,
    /// The equation has a finite exact root.
    ExplicitRoot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityCertificate {
    pub solvable: bool,
    pub witness: Option<LaurentApprox>,
    pub reason: CertificateReason,
}

impl SolvabilityCertificate {
    fn no(reason: CertificateReason) -> Self {
        SolvabilityCertificate {
            solvable: false,
            witness: None,
            reason,
        }
    }
}

/// Square root in `F_q`, choosing the root with the smaller encoding.
pub fn sqrt_fq(a: &FqElem) -> Option<FqElem> {
    let f = a.field();
    if a.is_zero() {
        return Some(a.clone());
    }
    let q = f.order() as u64;
    if f.characteristic() == 2 {
        // inverse Frobenius
        return Some(a.pow(q / 2));
    }
    if !a.pow((q - 1) / 2).is_one() {
        return None;
    }
    // Tonelli-Shanks in F_q^*
    let mut s = 0;
    let mut odd = q - 1;
    while odd.is_multiple_of(2) {
        odd /= 2;
        s += 1;
    }
    let z = f
        .elements()
        .find(|e| !e.is_zero() && !e.pow((q - 1) / 2).is_one())
        .expect("non-residues exist in odd characteristic");
    let mut m = s;
    let mut c = z.pow(odd);
    let mut t = a.pow(odd);
    let mut r = a.pow(odd.div_ceil(2));
    while !t.is_one() {
        let mut i = 0;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = &tt * &tt;
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = &b * &b;
        }
        m = i;
        c = &b * &b;
        t = &t * &c;
        r = &r * &b;
    }
    let other = -&r;
    Some(if other.raw() < r.raw() { other } else { r })
}

/// Absolute trace `F_q -> F_p`.
pub fn trace_to_prime(a: &FqElem) -> FpElem {
    let m = a.field().degree();
    let mut acc = a.field().zero();
    let mut x = a.clone();
    for _ in 0..m {
        acc = &acc + &x;
        x = x.frobenius();
    }
    debug_assert!(acc.raw() < a.field().characteristic());
    acc.raw()
}

/// Some `z ∈ F_q` with `z^2 + z = r`, characteristic 2.
fn artin_schreier_residue_root(r: &FqElem) -> Option<FqElem> {
    let f = r.field();
    let m = f.degree() as usize;
    // z -> z^2 + z is F_2-linear; encodings are bit vectors in the basis X^i.
    let cols: Vec<u32> = (0..m)
        .map(|i| {
            let e = f.elem(1 << i);
            (&(&e * &e) + &e).raw()
        })
        .collect();
    // Solve sum_i z_i cols[i] = r by elimination on rows (bits of the image).
    // Augmented rows: for each output bit b, a mask over input bits plus rhs bit.
    let mut rows: Vec<(u32, u32)> = (0..m)
        .map(|b| {
            let mut mask = 0u32;
            for (i, &c) in cols.iter().enumerate() {
                if c >> b & 1 == 1 {
                    mask |= 1 << i;
                }
            }
            (mask, r.raw() >> b & 1)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let Some(sel) = (rank..m).find(|&i| rows[i].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, sel);
        for i in 0..m {
            if i != rank && rows[i].0 >> col & 1 == 1 {
                rows[i].0 ^= rows[rank].0;
                rows[i].1 ^= rows[rank].1;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|&(_, rhs)| rhs == 1) {
        return None;
    }
    let mut z = 0u32;
    for (row, &col) in pivots.iter().enumerate() {
        if rows[row].1 == 1 {
            z |= 1 << col;
        }
    }
    Some(f.elem(z))
}

/// Decides `z^2 + z = c` over `F_q((t))` in characteristic 2.
///
/// Poles of even order are peeled off by subtracting `a^2 + a` for a suitable
/// monomial `a`; an odd pole makes the equation unsolvable. Once `v(c) >= 0`,
/// solvability is the vanishing of the absolute trace of the residue. The
/// witness is known modulo `t^precision`.
pub fn solve_artin_schreier(
    c: &RatFun,
    precision: i64,
) -> Result<SolvabilityCertificate, AlgebraError> {
    let field = c.field().clone();
    if field.characteristic() != 2 {
        return Err(AlgebraError::NeedsCharTwo(field.characteristic()));
    }
    let precision = precision.max(1);
    let mut rest = c.clone();
    let mut exact_part = RatFun::zero(&field);
    let mut reason = match c.valuation() {
        Valuation::Infinity => CertificateReason::ExplicitRoot,
        Valuation::Finite(v) if v > 0 => CertificateReason::HenselSimpleRoot,
        _ => CertificateReason::ResidueTrace,
    };
    loop {
        match rest.valuation() {
            Valuation::Infinity => {
                if reason != CertificateReason::HenselSimpleRoot {
                    reason = CertificateReason::ExplicitRoot;
                }
                let w = LaurentApprox::from_ratfun(&exact_part, precision);
                return Ok(SolvabilityCertificate {
                    solvable: true,
                    witness: Some(w.truncate(precision)),
                    reason,
                });
            }
            Valuation::Finite(v) if v < 0 => {
                if v % 2 != 0 {
                    return Ok(SolvabilityCertificate::no(CertificateReason::OddValuation));
                }
                let lead = rest.leading_coefficient().unwrap();
                let a = RatFun::monomial(&sqrt_fq(&lead).unwrap(), v / 2);
                rest = rest.sub(&a.mul(&a).add(&a));
                exact_part = exact_part.add(&a);
            }
            Valuation::Finite(0) => {
                let r = rest.leading_coefficient().unwrap();
                if trace_to_prime(&r) != 0 {
                    return Ok(SolvabilityCertificate::no(CertificateReason::ResidueTrace));
                }
                let z0 = artin_schreier_residue_root(&r).expect("trace zero implies a root");
                let z0r = RatFun::constant(&z0);
                rest = rest.sub(&z0r.mul(&z0r).add(&z0r));
                exact_part = exact_part.add(&z0r);
                reason = CertificateReason::ResidueTrace;
            }
            Valuation::Finite(_) => {
                // v(rest) > 0: w = rest + w^2 determines w digit by digit
                let series = LaurentApprox::from_ratfun(&rest, precision);
                let n = precision.max(0) as usize;
                let mut w = vec![0u32; n];
                for k in 1..n {
                    let mut val = series.coefficient(k as i64).map(|e| e.raw()).unwrap_or(0);
                    if k % 2 == 0 {
                        let h = w[k / 2];
                        val = field.add_raw(val, field.mul_raw(h, h));
                    }
                    w[k] = val;
                }
                let w = LaurentApprox::from_raw(&field, 0, w, precision);
                let z = LaurentApprox::from_ratfun(&exact_part, precision).add(&w);
                return Ok(SolvabilityCertificate {
                    solvable: true,
                    witness: Some(z.truncate(precision)),
                    reason,
                });
            }
        }
    }
}

/// Decides whether `d` is a square in `F_q((t))`, odd characteristic.
///
/// A nonzero `d` is a square iff `v(d)` is even and its leading coefficient is
/// a square in `F_q`. The witness `y` satisfies `v(y^2 - d) >= precision`.
pub fn solve_square(d: &RatFun, precision: i64) -> Result<SolvabilityCertificate, AlgebraError> {
    let field = d.field().clone();
    if field.characteristic() == 2 {
        return Err(AlgebraError::NeedsOddChar);
    }
    let v = match d.valuation() {
        Valuation::Infinity => {
            return Ok(SolvabilityCertificate {
                solvable: true,
                witness: Some(LaurentApprox::exact_zero(&field)),
                reason: CertificateReason::ExplicitRoot,
            })
        }
        Valuation::Finite(v) => v,
    };
    if v % 2 != 0 {
        return Ok(SolvabilityCertificate::no(CertificateReason::OddValuation));
    }
    let lead = d.leading_coefficient().unwrap();
    let Some(b) = sqrt_fq(&lead) else {
        return Ok(SolvabilityCertificate::no(CertificateReason::NonResidue));
    };
    let half = v / 2;
    // y = b t^half sqrt(u) with u = d / (lead t^v) = 1 + O(t)
    let abs_precision = precision + (-half).max(0);
    let n = (abs_precision - half).max(1) as usize;
    let u = LaurentApprox::from_ratfun(d, v + n as i64)
        .shift(-v)
        .scale(&lead.inv().unwrap());
    let inv_two = field.from_int(2).inv().unwrap();
    let mut y = vec![0u32; n];
    y[0] = 1;
    for k in 1..n {
        let mut acc = u.coefficient(k as i64).map(|e| e.raw()).unwrap_or(0);
        for i in 1..k {
            acc = field.sub_raw(acc, field.mul_raw(y[i], y[k - i]));
        }
        y[k] = field.mul_raw(acc, inv_two.raw());
    }
    let root = LaurentApprox::from_raw(&field, half, y, half + n as i64).scale(&b);
    Ok(SolvabilityCertificate {
        solvable: true,
        witness: Some(root),
        reason: CertificateReason::ResidueSquare,
    })
}

/// Convenience: the decision behind `∃z (z^2 + z = c)` in any characteristic.
pub fn artin_schreier_or_square(
    field: &FiniteField,
    c: &RatFun,
    precision: i64,
) -> Result<SolvabilityCertificate, AlgebraError> {
    if field.characteristic() == 2 {
        solve_artin_schreier(c, precision)
    } else {
        // (2z + 1)^2 = 1 + 4c
        let d = RatFun::one(field).add(&RatFun::from_int(field, 4).mul(c));
        let cert = solve_square(&d, precision)?;
        let witness = cert.witness.map(|y| {
            let half = field.from_int(2).inv().unwrap();
            y.sub(&LaurentApprox::exact_one(field)).scale(&half)
        });
        Ok(SolvabilityCertificate { witness, ..cert })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Poly;

    fn residual_as(z: &LaurentApprox, c: &RatFun, prec: i64) -> i64 {
        let z = z.as_exact();
        let lhs = z.mul(&z).add(&z);
        let rhs = LaurentApprox::from_ratfun(c, prec + 10);
        lhs.sub(&rhs).valuation_bound()
    }

    #[test]
    fn sqrt_examples() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(sqrt_fq(&f3.one()).unwrap(), f3.one());
        let f9 = FiniteField::new(3, 2).unwrap();
        assert!(sqrt_fq(&f9.primitive_element()).is_none());
        let f4 = FiniteField::new(2, 2).unwrap();
        for a in f4.elements() {
            let r = sqrt_fq(&a).unwrap();
            assert_eq!(&r * &r, a);
        }
        let f25 = FiniteField::new(5, 2).unwrap();
        for a in f25.elements() {
            if let Some(r) = sqrt_fq(&a) {
                assert_eq!(&r * &r, a);
            }
        }
    }

    #[test]
    fn traces_in_f4() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(trace_to_prime(&f4.zero()), 0);
        assert_eq!(trace_to_prime(&f4.one()), 0);
        assert_eq!(trace_to_prime(&f4.elem(2)), 1);
        assert_eq!(trace_to_prime(&f4.elem(3)), 1);
        assert_eq!(trace_to_prime(&FiniteField::new(2, 1).unwrap().one()), 1);
    }

    #[test]
    fn artin_schreier_examples() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let zero = solve_artin_schreier(&RatFun::zero(&f2), 8).unwrap();
        assert!(zero.solvable);
        assert!(zero.witness.unwrap().is_zero_within_precision());

        let t = RatFun::t(&f2);
        let cert = solve_artin_schreier(&t, 4).unwrap();
        assert!(cert.solvable);
        assert_eq!(cert.reason, CertificateReason::HenselSimpleRoot);
        let w = cert.witness.unwrap();
        let expect = LaurentApprox::new(&f2, 1, &[f2.one(), f2.one()], 4);
        assert!(w.sub(&expect).is_zero_within_precision());

        let cert = solve_artin_schreier(&RatFun::monomial(&f2.one(), -1), 8).unwrap();
        assert!(!cert.solvable);
        assert_eq!(cert.reason, CertificateReason::OddValuation);

        // residue 1 has trace 1 over F_2
        let cert = solve_artin_schreier(&RatFun::one(&f2), 8).unwrap();
        assert!(!cert.solvable);
        assert_eq!(cert.reason, CertificateReason::ResidueTrace);
    }

    #[test]
    fn artin_schreier_with_even_pole() {
        let f4 = FiniteField::new(2, 2).unwrap();
        // c = t^-2 + t^-1 + t is solvable: z = t^-1 + (root of z^2+z = t)
        let c = RatFun::monomial(&f4.one(), -2)
            .add(&RatFun::monomial(&f4.one(), -1))
            .add(&RatFun::t(&f4));
        let cert = solve_artin_schreier(&c, 32).unwrap();
        assert!(cert.solvable);
        assert!(residual_as(cert.witness.as_ref().unwrap(), &c, 32) >= 32);
        // t^-2 + a (a generator, trace 1) is not
        let c = RatFun::monomial(&f4.one(), -2).add(&RatFun::constant(&f4.elem(2)));
        assert!(!solve_artin_schreier(&c, 32).unwrap().solvable);
        assert!(solve_artin_schreier(&c, 8).is_ok());
        let f3 = FiniteField::new(3, 1).unwrap();
        assert!(matches!(
            solve_artin_schreier(&RatFun::one(&f3), 8),
            Err(AlgebraError::NeedsCharTwo(3))
        ));
    }

    #[test]
    fn square_examples() {
        let f3 = FiniteField::new(3, 1).unwrap();
        let t = RatFun::t(&f3);
        let cert = solve_square(&t.mul(&t), 8).unwrap();
        assert!(cert.solvable);
        let w = cert.witness.unwrap();
        assert_eq!(w.valuation(), Some(1));
        assert!(w
            .sub(&LaurentApprox::from_ratfun(&t, 8))
            .is_zero_within_precision());

        assert_eq!(
            solve_square(&t, 8).unwrap().reason,
            CertificateReason::OddValuation
        );

        let d = RatFun::from_poly(Poly::from_raw(&f3, vec![1, 1]));
        let cert = solve_square(&d, 3).unwrap();
        let w = cert.witness.unwrap();
        let expect = [1, 2, 1];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(w.coefficient(k as i64).unwrap().raw(), *e);
        }
        let f2 = FiniteField::new(2, 1).unwrap();
        assert!(solve_square(&RatFun::one(&f2), 4).is_err());
    }

    #[test]
    fn square_witness_residual_with_pole() {
        let f5 = FiniteField::new(5, 1).unwrap();
        // 4 t^-4 (1 + t) is a square: leading 4 = 2^2
        let d = RatFun::monomial(&f5.from_int(4), -4)
            .mul(&RatFun::from_poly(Poly::from_raw(&f5, vec![1, 1])));
        let cert = solve_square(&d, 16).unwrap();
        let y = cert.witness.unwrap().as_exact();
        let r = y.mul(&y).sub(&LaurentApprox::from_ratfun(&d, 40));
        assert!(r.valuation_bound() >= 16);
        // 2 t^0 is a non-residue mod 5
        assert_eq!(
            solve_square(&RatFun::from_int(&f5, 2), 8).unwrap().reason,
            CertificateReason::NonResidue
        );
    }
}
