//! Exact decision of `∃x φ(x)` over `F_q((t))` when all other variables are
//! fixed to points of `F_q(t)`.
//!
//! Equations are collected into `G = gcd`, whose roots are the only
//! candidates. Linear `G` has a rational root. Quadratic `G` is handled in
//! `K[x]/(G)` with `K = F_q(t)`: an element `a + b x` with `b ≠ 0` vanishes at
//! a root only if `-a/b` is a rational root, which is then detected and the
//! clause re-evaluated exactly. Memberships at irrational roots are read off
//! series approximations whose precision is doubled until the valuation is
//! determined.

use std::cell::RefCell;
use std::collections::BTreeSet;

use crate::algebra::{
    solve_artin_schreier, solve_square, FiniteField, LaurentApprox, RatFun, Valuation,
};
use crate::error::ModelError;
use crate::formula::{Const, Formula, Term};
use crate::models::{
    eval_atom, eval_term, Assignment, LaurentModel, SearchBudget, Semantics, WitnessValue,
};
use crate::normalize::{to_dnf_with_limit, DnfClause, DEFAULT_MAX_CLAUSES};

use super::candidates;

const MAX_SERIES_PRECISION: i64 = 1 << 13;

/// Outcome for one conjunction.
#[derive(Clone, Debug)]
pub(crate) enum ClauseVerdict {
    True(WitnessValue),
    False(String),
    Unknown(String),
}

/// Polynomial in the decided variable, coefficients low to high.
type UPoly = Vec<RatFun>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(RatFun::is_zero) {
        p.pop();
    }
    p
}

fn up_add(a: &UPoly, b: &UPoly, field: &FiniteField, negate_b: bool) -> UPoly {
    let n = a.len().max(b.len());
    let zero = RatFun::zero(field);
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).unwrap_or(&zero);
                let y = b.get(i).unwrap_or(&zero);
                if negate_b {
                    x.sub(y)
                } else {
                    x.add(y)
                }
            })
            .collect(),
    )
}

fn up_mul(a: &UPoly, b: &UPoly, field: &FiniteField) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFun::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

fn up_rem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    let lead_inv = b.last().unwrap().inv().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap().mul(&lead_inv);
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&factor.mul(c));
        }
        r = trim(r);
    }
    r
}

fn up_monic(a: &UPoly) -> UPoly {
    let inv = a.last().unwrap().inv().unwrap();
    a.iter().map(|c| c.mul(&inv)).collect()
}

fn up_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = up_rem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        up_monic(&x)
    }
}

/// `t` as a polynomial in `x{var}`, or `None` when `x{var}` sits under an
/// inverse.
fn to_upoly(
    t: &Term,
    var: usize,
    model: &LaurentModel,
    base: &Assignment<RatFun>,
) -> Result<Option<UPoly>, ModelError> {
    let field = &model.field;
    if !t.contains_var(var) {
        return Ok(Some(trim(vec![eval_term(model, t, base)?])));
    }
    Ok(match t {
        Term::Var(_) => Some(vec![RatFun::zero(field), RatFun::one(field)]),
        Term::Add(a, b) | Term::Sub(a, b) => {
            let (Some(pa), Some(pb)) = (
                to_upoly(a, var, model, base)?,
                to_upoly(b, var, model, base)?,
            ) else {
                return Ok(None);
            };
            Some(up_add(&pa, &pb, field, matches!(t, Term::Sub(..))))
        }
        Term::Mul(a, b) => {
            let (Some(pa), Some(pb)) = (
                to_upoly(a, var, model, base)?,
                to_upoly(b, var, model, base)?,
            ) else {
                return Ok(None);
            };
            Some(up_mul(&pa, &pb, field))
        }
        Term::Inv(_) => None,
        Term::Const(_) => unreachable!("constants do not contain variables"),
    })
}

/// `a + b x` in `K[x]/(x^2 + B x + C)`.
#[derive(Clone, Debug)]
struct QuadElem(RatFun, RatFun);

type RootApprox<'a> = &'a dyn Fn(i64) -> Result<LaurentApprox, ModelError>;

struct Quad<'a> {
    model: &'a LaurentModel,
    b: RatFun,
    c: RatFun,
    /// A rational root discovered through a zero divisor.
    found: RefCell<Option<RatFun>>,
    root: RootApprox<'a>,
}

impl Quad<'_> {
    fn is_root(&self, r: &RatFun) -> bool {
        r.mul(r).add(&self.b.mul(r)).add(&self.c).is_zero()
    }

    /// Records `-a/b` when it is a root of the modulus.
    fn check_divisor(&self, e: &QuadElem) -> bool {
        if e.1.is_zero() {
            return false;
        }
        let r = e.0.neg().div(&e.1).expect("nonzero");
        if self.is_root(&r) {
            self.found.borrow_mut().get_or_insert(r);
            true
        } else {
            false
        }
    }
}

impl Semantics for Quad<'_> {
    type Elem = QuadElem;

    fn constant(&self, c: &Const) -> Result<QuadElem, ModelError> {
        Ok(QuadElem(
            self.model.constant(c)?,
            RatFun::zero(&self.model.field),
        ))
    }

    fn add(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        QuadElem(a.0.add(&b.0), a.1.add(&b.1))
    }

    fn sub(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        QuadElem(a.0.sub(&b.0), a.1.sub(&b.1))
    }

    fn mul(&self, a: &QuadElem, b: &QuadElem) -> QuadElem {
        // x^2 = -B x - C
        let hi = a.1.mul(&b.1);
        QuadElem(
            a.0.mul(&b.0).sub(&hi.mul(&self.c)),
            a.0.mul(&b.1).add(&a.1.mul(&b.0)).sub(&hi.mul(&self.b)),
        )
    }

    fn inv(&self, a: &QuadElem) -> Result<QuadElem, ModelError> {
        let zero = RatFun::zero(&self.model.field);
        if a.1.is_zero() {
            return Ok(QuadElem(a.0.inv_total(), zero));
        }
        let norm =
            a.0.mul(&a.0)
                .sub(&a.0.mul(&a.1).mul(&self.b))
                .add(&a.1.mul(&a.1).mul(&self.c));
        if norm.is_zero() {
            self.check_divisor(a);
            return Ok(QuadElem(zero.clone(), zero));
        }
        let ninv = norm.inv().unwrap();
        Ok(QuadElem(
            a.0.sub(&a.1.mul(&self.b)).mul(&ninv),
            a.1.neg().mul(&ninv),
        ))
    }

    fn is_zero(&self, a: &QuadElem) -> Result<bool, ModelError> {
        if a.1.is_zero() {
            return Ok(a.0.is_zero());
        }
        self.check_divisor(a);
        Ok(false)
    }

    fn in_o(&self, a: &QuadElem) -> Result<bool, ModelError> {
        if a.1.is_zero() {
            return Ok(a.0.in_valuation_ring());
        }
        if self.check_divisor(a) {
            return Ok(false);
        }
        let mut p = 32;
        while p <= MAX_SERIES_PRECISION {
            let r = (self.root)(p)?;
            let extra = match a.1.valuation() {
                Valuation::Finite(v) => v.unsigned_abs() as i64,
                Valuation::Infinity => 0,
            };
            let x = LaurentApprox::from_ratfun(&a.1, p + extra)
                .mul(&r)
                .add(&LaurentApprox::from_ratfun(&a.0, p + extra));
            if let Some(v) = x.valuation() {
                return Ok(v >= 0);
            }
            if x.precision() >= 0 {
                // no digit below a nonnegative precision
                return Ok(true);
            }
            p *= 2;
        }
        Err(ModelError::Algebra(
            crate::error::AlgebraError::InsufficientPrecision,
        ))
    }
}

pub(crate) fn clause_holds<S: Semantics>(
    s: &S,
    clause: &DnfClause,
    a: &Assignment<S::Elem>,
) -> Result<bool, ModelError> {
    let zero = || Term::zero();
    for e in &clause.eqs {
        if !eval_atom(s, &Formula::eq(e.clone(), zero()), a)? {
            return Ok(false);
        }
    }
    for e in &clause.neqs {
        if eval_atom(s, &Formula::eq(e.clone(), zero()), a)? {
            return Ok(false);
        }
    }
    for e in &clause.ins {
        if !eval_atom(s, &Formula::in_o(e.clone()), a)? {
            return Ok(false);
        }
    }
    for e in &clause.outs {
        if eval_atom(s, &Formula::in_o(e.clone()), a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides one variable of a formula exactly.
pub(crate) struct Univariate<'a> {
    pub model: &'a LaurentModel,
    pub var: usize,
    pub base: &'a Assignment<RatFun>,
    pub budget: &'a SearchBudget,
}

impl Univariate<'_> {
    fn field(&self) -> &FiniteField {
        &self.model.field
    }

    fn at(&self, r: &RatFun) -> Assignment<RatFun> {
        let mut a = self.base.clone();
        a.insert(self.var, r.clone());
        a
    }

    fn holds_at(&self, clause: &DnfClause, r: &RatFun) -> Result<bool, ModelError> {
        clause_holds(self.model, clause, &self.at(r))
    }

    /// `∃x` of a quantifier-free formula; `None` as outcome means unknown.
    pub fn decide_formula(&self, f: &Formula) -> Result<ClauseVerdict, ModelError> {
        let keep: BTreeSet<usize> = [self.var].into();
        let g = crate::translate::eliminate_inverses(f);
        let g = match specialize(self.model, &g, self.base, &keep)? {
            Simplified::Const(true) => {
                return Ok(ClauseVerdict::True(WitnessValue::Exact(RatFun::zero(
                    self.field(),
                ))))
            }
            Simplified::Const(false) => {
                return Ok(ClauseVerdict::False(
                    "matrix is false at the given point".into(),
                ))
            }
            Simplified::Open(g) => g,
        };
        let clauses = match to_dnf_with_limit(&g, DEFAULT_MAX_CLAUSES) {
            Ok(c) => c,
            Err(e) => return Ok(ClauseVerdict::Unknown(e.to_string())),
        };
        let mut reasons = Vec::new();
        let mut unknown = None;
        for c in &clauses {
            match self.decide_clause(c)? {
                v @ ClauseVerdict::True(_) => return Ok(v),
                ClauseVerdict::False(r) => reasons.push(r),
                ClauseVerdict::Unknown(r) => unknown = Some(r),
            }
        }
        Ok(match unknown {
            Some(r) => ClauseVerdict::Unknown(r),
            None => ClauseVerdict::False(summarize(&reasons)),
        })
    }

    pub fn decide_clause(&self, clause: &DnfClause) -> Result<ClauseVerdict, ModelError> {
        let field = self.field().clone();
        let mut g: Option<UPoly> = None;
        for e in &clause.eqs {
            let Some(p) = to_upoly(e, self.var, self.model, self.base)? else {
                return Ok(ClauseVerdict::Unknown("equation is not polynomial".into()));
            };
            if p.is_empty() {
                continue;
            }
            g = Some(match g {
                None => up_monic(&p),
                Some(h) => up_gcd(&h, &p),
            });
        }
        let Some(g) = g else {
            return self.without_equations(clause);
        };
        match g.len() - 1 {
            0 => Ok(ClauseVerdict::False("equations have no common root".into())),
            1 => {
                let r = g[0].neg();
                if self.holds_at(clause, &r)? {
                    Ok(ClauseVerdict::True(WitnessValue::Exact(r)))
                } else {
                    Ok(ClauseVerdict::False(format!("the only root {r} fails")))
                }
            }
            2 => self.quadratic(clause, &g[1], &g[0], &field),
            d => Ok(ClauseVerdict::Unknown(format!(
                "common root set of degree {d}"
            ))),
        }
    }

    fn rational_roots(
        &self,
        clause: &DnfClause,
        roots: &[RatFun],
    ) -> Result<ClauseVerdict, ModelError> {
        for r in roots {
            if self.holds_at(clause, r)? {
                return Ok(ClauseVerdict::True(WitnessValue::Exact(r.clone())));
            }
        }
        Ok(ClauseVerdict::False("both rational roots fail".into()))
    }

    /// Roots of `x^2 + b x + c`.
    fn quadratic(
        &self,
        clause: &DnfClause,
        b: &RatFun,
        c: &RatFun,
        field: &FiniteField,
    ) -> Result<ClauseVerdict, ModelError> {
        let odd = field.characteristic() != 2;
        if odd {
            let two = RatFun::from_int(field, 2);
            let d = b.mul(b).sub(&RatFun::from_int(field, 4).mul(c));
            if let Some(s) = d.sqrt_exact() {
                let r1 = b.neg().add(&s).div(&two).unwrap();
                let r2 = b.neg().sub(&s).div(&two).unwrap();
                return self.rational_roots(clause, &[r1, r2]);
            }
            let cert = solve_square(&d, 8)?;
            if !cert.solvable {
                return Ok(ClauseVerdict::False(format!(
                    "discriminant {d} is not a square ({:?})",
                    cert.reason
                )));
            }
        } else if b.is_zero() {
            return Ok(match c.sqrt_exact() {
                Some(s) => self.rational_roots(clause, &[s])?,
                None => ClauseVerdict::False(format!("{c} is not a square")),
            });
        } else {
            let rhs = c.div(&b.mul(b)).unwrap();
            let cert = solve_artin_schreier(&rhs, 8)?;
            if !cert.solvable {
                return Ok(ClauseVerdict::False(format!(
                    "w^2 + w = {rhs} has no root ({:?})",
                    cert.reason
                )));
            }
        }
        let margin = |p: i64| {
            let vb = b.valuation().finite().unwrap_or(0).unsigned_abs() as i64;
            let vc = c.valuation().finite().unwrap_or(0).unsigned_abs() as i64;
            p + 2 * (vb + vc) + 8
        };
        for which in 0..2 {
            let root = |p: i64| -> Result<LaurentApprox, ModelError> {
                let p = margin(p);
                if odd {
                    let d = b.mul(b).sub(&RatFun::from_int(field, 4).mul(c));
                    let s = solve_square(&d, p)?.witness.expect("solvable");
                    let s = if which == 0 { s } else { s.neg() };
                    let half = field.from_int(2).inv().unwrap();
                    Ok(LaurentApprox::from_ratfun(&b.neg(), p).add(&s).scale(&half))
                } else {
                    let rhs = c.div(&b.mul(b)).unwrap();
                    let w = solve_artin_schreier(&rhs, p)?.witness.expect("solvable");
                    let w = if which == 0 {
                        w
                    } else {
                        w.add(&LaurentApprox::exact_one(field))
                    };
                    Ok(LaurentApprox::from_ratfun(b, p).mul(&w))
                }
            };
            let quad = Quad {
                model: self.model,
                b: b.clone(),
                c: c.clone(),
                found: RefCell::new(None),
                root: &root,
            };
            let mut a: Assignment<QuadElem> = self
                .base
                .iter()
                .map(|(&k, v)| (k, QuadElem(v.clone(), RatFun::zero(field))))
                .collect();
            a.insert(self.var, QuadElem(RatFun::zero(field), RatFun::one(field)));
            let holds = clause_holds(&quad, clause, &a);
            if let Some(r1) = quad.found.into_inner() {
                let r2 = b.neg().sub(&r1);
                return self.rational_roots(clause, &[r1, r2]);
            }
            let holds = match holds {
                Ok(h) => h,
                Err(ModelError::Algebra(e)) => {
                    return Ok(ClauseVerdict::Unknown(e.to_string()));
                }
                Err(e) => return Err(e),
            };
            if holds {
                return Ok(ClauseVerdict::True(WitnessValue::Series(root(64)?)));
            }
        }
        Ok(ClauseVerdict::False(
            "both roots of the quadratic fail".into(),
        ))
    }

    fn without_equations(&self, clause: &DnfClause) -> Result<ClauseVerdict, ModelError> {
        if clause.ins.is_empty() && clause.outs.is_empty() {
            let mut degree = 0usize;
            let mut polynomial = true;
            for e in &clause.neqs {
                match to_upoly(e, self.var, self.model, self.base)? {
                    Some(p) if p.is_empty() => {
                        return Ok(ClauseVerdict::False(
                            "a disequation is identically zero".into(),
                        ))
                    }
                    Some(p) => degree += p.len() - 1,
                    None => polynomial = false,
                }
            }
            if polynomial {
                // at most `degree` points are excluded
                let t = RatFun::t(self.field());
                for k in 0..=degree as i64 {
                    let r = t.pow(k);
                    if self.holds_at(clause, &r)? {
                        return Ok(ClauseVerdict::True(WitnessValue::Exact(r)));
                    }
                }
                unreachable!("a nonzero polynomial of degree d has at most d roots");
            }
        }
        let cands = candidates(self.field(), self.budget);
        for r in &cands {
            if self.holds_at(clause, r)? {
                return Ok(ClauseVerdict::True(WitnessValue::Exact(r.clone())));
            }
        }
        Ok(ClauseVerdict::Unknown(format!(
            "no witness among {} candidates",
            cands.len()
        )))
    }
}

fn summarize(reasons: &[String]) -> String {
    match reasons {
        [] => "no clause".into(),
        [r] => r.clone(),
        _ => format!("all {} clauses fail: {}", reasons.len(), reasons.join("; ")),
    }
}

/// Result of folding the atoms that only mention assigned variables.
pub(crate) enum Simplified {
    Const(bool),
    Open(Formula),
}

pub(crate) fn specialize(
    model: &LaurentModel,
    f: &Formula,
    a: &Assignment<RatFun>,
    keep: &BTreeSet<usize>,
) -> Result<Simplified, ModelError> {
    use Simplified::{Const, Open};
    Ok(match f {
        Formula::Eq(..) | Formula::InO(_) => {
            if f.free_vars().is_disjoint(keep) {
                Const(eval_atom(model, f, a)?)
            } else {
                Open(f.clone())
            }
        }
        Formula::Not(x) => match specialize(model, x, a, keep)? {
            Const(b) => Const(!b),
            Open(g) => Open(Formula::not(g)),
        },
        Formula::And(x, y) => match specialize(model, x, a, keep)? {
            Const(false) => Const(false),
            Const(true) => specialize(model, y, a, keep)?,
            Open(gx) => match specialize(model, y, a, keep)? {
                Const(false) => Const(false),
                Const(true) => Open(gx),
                Open(gy) => Open(Formula::and(gx, gy)),
            },
        },
        Formula::Or(x, y) => match specialize(model, x, a, keep)? {
            Const(true) => Const(true),
            Const(false) => specialize(model, y, a, keep)?,
            Open(gx) => match specialize(model, y, a, keep)? {
                Const(true) => Const(true),
                Const(false) => Open(gx),
                Open(gy) => Open(Formula::or(gx, gy)),
            },
        },
        Formula::Exists(..) => return Err(ModelError::NotQuantifierFree),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Language};

    fn decide(p: u32, m: u32, text: &str, base: &[(usize, RatFun)]) -> ClauseVerdict {
        decide_ast(p, m, &parse_formula(text, &Language::VAL).unwrap(), base)
    }

    fn decide_ast(p: u32, m: u32, f: &Formula, base: &[(usize, RatFun)]) -> ClauseVerdict {
        let model = LaurentModel {
            field: FiniteField::new(p, m).unwrap(),
            prec: 64,
        };
        let base: Assignment<RatFun> = base.iter().cloned().collect();
        let budget = SearchBudget::default();
        let u = Univariate {
            model: &model,
            var: 9,
            base: &base,
            budget: &budget,
        };
        u.decide_formula(f).unwrap()
    }

    fn is_true(v: &ClauseVerdict) -> bool {
        matches!(v, ClauseVerdict::True(_))
    }

    fn is_false(v: &ClauseVerdict) -> bool {
        matches!(v, ClauseVerdict::False(_))
    }

    #[test]
    fn artin_schreier_membership() {
        // x9^2 + x9 = w * x0^2 with x0 = 1 holds, with x0 = t^-1 fails
        let f2 = FiniteField::new(2, 1).unwrap();
        let t = RatFun::t(&f2);
        let text = "x9 * x9 + x9 = w * x0 * x0";
        assert!(is_true(&decide(2, 1, text, &[(0, RatFun::one(&f2))])));
        assert!(is_false(&decide(2, 1, text, &[(0, t.inv().unwrap())])));
    }

    #[test]
    fn square_roots_odd() {
        assert!(is_false(&decide(3, 1, "x9 * x9 = w", &[])));
        assert!(is_true(&decide(3, 1, "x9 * x9 = 1 + w", &[])));
        assert!(is_true(&decide(3, 1, "x9 * x9 = w * w", &[])));
    }

    #[test]
    fn linear_and_membership() {
        assert!(is_false(&decide(2, 1, "x9 * w = 1 & O(x9)", &[])));
        assert!(is_true(&decide(2, 1, "x9 * w = 1 & !O(x9)", &[])));
    }

    #[test]
    fn series_root_membership() {
        // roots of z^2 + z = t lie in tF[[t]] and 1 + tF[[t]]
        assert!(is_true(&decide(2, 1, "x9 * x9 + x9 = w & O(x9)", &[])));
        assert!(is_false(&decide(2, 1, "x9 * x9 + x9 = w & !O(x9)", &[])));
        let eq = parse_formula("x9 * x9 + x9 = w", &Language::VAL).unwrap();
        let x9 = Term::var(9);
        let inv_in_o = Formula::and(eq.clone(), Formula::in_o(Term::inv(x9.clone())));
        assert!(is_true(&decide_ast(2, 1, &inv_in_o, &[])));
        let scaled = Term::inv(Term::mul(Term::uniformizer(), x9));
        let out = Formula::and(eq, Formula::not(Formula::in_o(scaled)));
        assert!(is_true(&decide_ast(2, 1, &out, &[])));
        assert!(is_false(&decide(
            2,
            1,
            "x9 * x9 + x9 = w & x9 * x9 + x9 != w",
            &[]
        )));
    }

    #[test]
    fn hidden_rational_root() {
        // x^2 + x = t^2 + t has the rational roots t and t + 1
        assert!(is_true(&decide(
            2,
            1,
            "x9 * x9 + x9 = w * w + w & x9 = w",
            &[]
        )));
        let eq = parse_formula("x9 * x9 + x9 = w * w + w", &Language::VAL).unwrap();
        let pole = Term::inv(Term::sub(Term::var(9), Term::uniformizer()));
        let f = Formula::and(eq, Formula::eq(pole, Term::zero()));
        assert!(is_true(&decide_ast(2, 1, &f, &[])));
        assert!(is_false(&decide(
            2,
            1,
            "x9 * x9 + x9 = w * w + w & x9 = w * w",
            &[]
        )));
    }

    #[test]
    fn disequations_only() {
        assert!(is_true(&decide(2, 1, "x9 != 0 & x9 != 1", &[])));
        assert!(is_false(&decide(2, 1, "x9 - x9 != 0", &[])));
    }
}
