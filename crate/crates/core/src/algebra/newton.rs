//! Multivariate Newton–Hensel lifting for square polynomial systems.

use super::fq::FiniteField;
use super::laurent::LaurentApprox;
use crate::error::AlgebraError;
use crate::formula::{print_term, Const, Term};

const MAX_STEPS: usize = 64;

/// Value and gradient.
struct Dual {
    value: LaurentApprox,
    grad: Vec<LaurentApprox>,
}

fn eval_dual(field: &FiniteField, t: &Term, point: &[LaurentApprox]) -> Result<Dual, AlgebraError> {
    let k = point.len();
    let constant = |value: LaurentApprox| Dual {
        value,
        grad: vec![LaurentApprox::exact_zero(field); k],
    };
    Ok(match t {
        Term::Var(i) => {
            if *i >= k {
                return Err(AlgebraError::NotPolynomial(format!(
                    "x{i} is not an unknown of the system"
                )));
            }
            let mut grad = vec![LaurentApprox::exact_zero(field); k];
            grad[*i] = LaurentApprox::exact_one(field);
            Dual {
                value: point[*i].clone(),
                grad,
            }
        }
        Term::Const(Const::Int(n)) => constant(LaurentApprox::monomial(&field.from_int(*n), 0)),
        Term::Const(Const::Uniformizer) => constant(LaurentApprox::monomial(&field.one(), 1)),
        Term::Add(a, b) | Term::Sub(a, b) => {
            let a = eval_dual(field, a, point)?;
            let b = eval_dual(field, b, point)?;
            let op = |x: &LaurentApprox, y: &LaurentApprox| {
                if matches!(t, Term::Add(..)) {
                    x.add(y)
                } else {
                    x.sub(y)
                }
            };
            Dual {
                value: op(&a.value, &b.value),
                grad: a.grad.iter().zip(&b.grad).map(|(x, y)| op(x, y)).collect(),
            }
        }
        Term::Mul(a, b) => {
            let a = eval_dual(field, a, point)?;
            let b = eval_dual(field, b, point)?;
            Dual {
                value: a.value.mul(&b.value),
                grad: a
                    .grad
                    .iter()
                    .zip(&b.grad)
                    .map(|(da, db)| da.mul(&b.value).add(&a.value.mul(db)))
                    .collect(),
            }
        }
        Term::Inv(_) => return Err(AlgebraError::NotPolynomial(print_term(t))),
    })
}

/// Solves `m x = rhs` by elimination with minimum-valuation pivots. Returns
/// the solution and `v(det m)`, or `None` when a pivot vanishes.
fn solve_linear(
    mut m: Vec<Vec<LaurentApprox>>,
    mut rhs: Vec<LaurentApprox>,
    max_precision: i64,
) -> Result<Option<(Vec<LaurentApprox>, i64)>, AlgebraError> {
    let n = rhs.len();
    let mut vdet = 0i64;
    for col in 0..n {
        let pivot = (col..n)
            .filter_map(|r| m[r][col].valuation().map(|v| (v, r)))
            .min();
        let Some((v, pr)) = pivot else {
            return Ok(None);
        };
        vdet += v;
        m.swap(col, pr);
        rhs.swap(col, pr);
        let inv = m[col][col].inv(max_precision)?;
        for r in 0..n {
            if r == col || m[r][col].valuation().is_none() {
                continue;
            }
            let factor = m[r][col].mul(&inv).truncate(max_precision);
            let pivot = m[col].clone();
            for (x, y) in m[r][col..n].iter_mut().zip(&pivot[col..n]) {
                *x = x.sub(&factor.mul(y));
            }
            let sub = factor.mul(&rhs[col]);
            rhs[r] = rhs[r].sub(&sub);
        }
    }
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        x.push(
            rhs[i]
                .mul(&m[i][i].inv(max_precision)?)
                .truncate(max_precision),
        );
    }
    Ok(Some((x, vdet)))
}

fn min_valuation(values: &[LaurentApprox]) -> i64 {
    values
        .iter()
        .map(LaurentApprox::valuation_bound)
        .min()
        .unwrap_or(super::laurent::EXACT)
}

/// Refines a root approximation of the square system `polys = 0`.
///
/// The unknowns are `x0..x{k-1}`; numerals are read mod `p` and `w` as `t`.
/// Lifting starts only when `v(F(a)) > 2 v(det J(a))`. On success every
/// component satisfies `v(F(witness)) >= prec`, and the declared precision of
/// each component bounds the distance to the true root.
pub fn newton_lift(
    field: &FiniteField,
    polys: &[Term],
    approx: &[LaurentApprox],
    prec: i64,
) -> Result<Option<Vec<LaurentApprox>>, AlgebraError> {
    if polys.len() != approx.len() {
        return Err(AlgebraError::NonSquareSystem {
            equations: polys.len(),
            unknowns: approx.len(),
        });
    }
    let mut a: Vec<LaurentApprox> = approx.iter().map(LaurentApprox::as_exact).collect();
    let mut vdet_start = None;
    for _ in 0..MAX_STEPS {
        let duals = polys
            .iter()
            .map(|p| eval_dual(field, p, &a))
            .collect::<Result<Vec<_>, _>>()?;
        let values: Vec<LaurentApprox> = duals.iter().map(|d| d.value.clone()).collect();
        let vf = min_valuation(&values);
        let jac: Vec<Vec<LaurentApprox>> = duals.into_iter().map(|d| d.grad).collect();
        let va = min_valuation(&a).min(0);
        let wp = prec.saturating_mul(2).saturating_add(16 - 2 * va);
        let Some((delta, vdet)) = solve_linear(jac, values, wp)? else {
            return Ok(None);
        };
        let vdet0 = *vdet_start.get_or_insert(vdet);
        if vf <= 2 * vdet0 {
            return Ok(None);
        }
        if vf >= prec && vf - vdet >= prec {
            let declared = vf.saturating_sub(vdet).min(super::laurent::EXACT);
            return Ok(Some(a.iter().map(|x| x.with_precision(declared)).collect()));
        }
        let cut = (2 * (vf - vdet)).min(wp) + 8;
        a = a
            .iter()
            .zip(&delta)
            .map(|(x, d)| x.sub(d).truncate(cut).as_exact())
            .collect();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RatFun;

    fn x() -> Term {
        Term::var(0)
    }

    #[test]
    fn artin_schreier_lift() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let f = Term::sub(Term::add(Term::mul(x(), x()), x()), Term::uniformizer());
        let out = newton_lift(&f2, &[f], &[LaurentApprox::exact_zero(&f2)], 4)
            .unwrap()
            .unwrap();
        let expect = LaurentApprox::new(&f2, 1, &[f2.one(), f2.one()], 4);
        assert_eq!(out[0].truncate(4), expect);
    }

    #[test]
    fn zero_derivative_fails() {
        let f3 = FiniteField::new(3, 1).unwrap();
        let f = Term::sub(Term::mul(x(), x()), Term::uniformizer());
        assert_eq!(
            newton_lift(&f3, &[f], &[LaurentApprox::exact_zero(&f3)], 8).unwrap(),
            None
        );
    }

    #[test]
    fn identity_system() {
        let f5 = FiniteField::new(5, 1).unwrap();
        // c = 2t + t^3
        let c = Term::add(
            Term::mul(Term::int(2), Term::uniformizer()),
            Term::pow(&Term::uniformizer(), 3),
        );
        let out = newton_lift(
            &f5,
            &[Term::sub(x(), c)],
            &[LaurentApprox::exact_zero(&f5)],
            20,
        )
        .unwrap()
        .unwrap();
        let t = RatFun::t(&f5);
        let expect = t.scale(&f5.from_int(2)).add(&t.pow(3));
        assert_eq!(out[0].as_exact(), LaurentApprox::from_ratfun(&expect, 40));
    }

    #[test]
    fn two_by_two_system() {
        // x0 + x1 = t, x0 * x1 = 1 + t over F_5 from (1, -1)... uses a regular start
        let f5 = FiniteField::new(5, 1).unwrap();
        let (a, b) = (Term::var(0), Term::var(1));
        let polys = [
            Term::sub(Term::add(a.clone(), b.clone()), Term::int(3)),
            Term::sub(
                Term::mul(a, b),
                Term::add(Term::int(2), Term::uniformizer()),
            ),
        ];
        // residue system x + y = 3, xy = 2 has simple roots (1, 2)
        let start = [
            LaurentApprox::monomial(&f5.from_int(1), 0),
            LaurentApprox::monomial(&f5.from_int(2), 0),
        ];
        let out = newton_lift(&f5, &polys, &start, 16).unwrap().unwrap();
        for p in &polys {
            let d = eval_dual(
                &f5,
                p,
                &out.iter().map(|v| v.as_exact()).collect::<Vec<_>>(),
            )
            .unwrap();
            assert!(d.value.valuation_bound() >= 16);
        }
    }

    #[test]
    fn non_square_rejected() {
        let f2 = FiniteField::new(2, 1).unwrap();
        assert!(matches!(
            newton_lift(&f2, &[x(), x()], &[LaurentApprox::exact_zero(&f2)], 4),
            Err(AlgebraError::NonSquareSystem {
                equations: 2,
                unknowns: 1
            })
        ));
    }
}
