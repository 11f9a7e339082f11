//! Certified witness search for sentences over `F_q((t))`.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{newton_lift, FiniteField, LaurentApprox, RatFun};
use crate::error::{AlgebraError, ModelError};
use crate::formula::{Const, Formula, Term};
use crate::models::{
    eval_qf, Assignment, Evidence, LaurentModel, Outcome, SearchBudget, Semantics, Verdict,
    WitnessValue,
};
use crate::normalize::{prenex_existential, to_dnf_with_limit, DnfClause, DEFAULT_MAX_CLAUSES};
use crate::translate::eliminate_inverses;

use super::candidates;
use super::univariate::{clause_holds, ClauseVerdict, Univariate};

/// Decides `f` in `F_q((t))` where possible.
///
/// `True` always carries a witness for the leading block (or a certificate
/// for a negated refutation), `False` an exact certificate; anything else is
/// `Unknown` together with the bounds that were searched.
pub fn search_witness_laurent(
    f: &Formula,
    field: &FiniteField,
    budget: &SearchBudget,
    prec: i64,
) -> Result<Verdict, ModelError> {
    if !f.is_sentence() {
        return Err(ModelError::NotASentence);
    }
    let model = LaurentModel {
        field: field.clone(),
        prec,
    };
    decide(&model, f, budget)
}

fn decide(model: &LaurentModel, f: &Formula, budget: &SearchBudget) -> Result<Verdict, ModelError> {
    if f.is_quantifier_free() {
        let truth = eval_qf(model, f, &Assignment::new())?;
        return Ok(exact(truth, "ground evaluation"));
    }
    match f {
        Formula::Not(g) => {
            let v = decide(model, g, budget)?;
            Ok(match v.outcome {
                Outcome::True => Verdict::new(
                    Outcome::False,
                    Evidence::Certificate(format!("negated sentence holds: {}", v.evidence)),
                ),
                Outcome::False => Verdict::new(
                    Outcome::True,
                    Evidence::Certificate(format!("negated sentence fails: {}", v.evidence)),
                ),
                Outcome::Unknown => v,
            })
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let is_and = matches!(f, Formula::And(..));
            let va = decide(model, a, budget)?;
            let decisive = if is_and {
                Outcome::False
            } else {
                Outcome::True
            };
            if va.outcome == decisive {
                return Ok(va);
            }
            let vb = decide(model, b, budget)?;
            if vb.outcome == decisive {
                return Ok(vb);
            }
            if va.outcome == Outcome::Unknown || vb.outcome == Outcome::Unknown {
                return Ok(Verdict::unknown(format!(
                    "{}; {}",
                    va.evidence, vb.evidence
                )));
            }
            Ok(Verdict::new(
                va.outcome,
                Evidence::Certificate(format!("{}; {}", va.evidence, vb.evidence)),
            ))
        }
        Formula::Exists(..) => {
            let (vars, matrix) = match prenex_existential(f) {
                Ok(p) => p,
                Err(e) => return Ok(Verdict::unknown(e.to_string())),
            };
            if !matrix.is_quantifier_free() {
                return Ok(Verdict::unknown("matrix is not quantifier-free"));
            }
            decide_block(model, &vars, &matrix, budget)
        }
        Formula::Eq(..) | Formula::InO(_) => unreachable!("atoms are quantifier-free"),
    }
}

fn exact(truth: bool, why: &str) -> Verdict {
    Verdict::new(
        if truth { Outcome::True } else { Outcome::False },
        Evidence::Certificate(why.to_string()),
    )
}

fn witness_verdict(w: BTreeMap<usize, WitnessValue>) -> Verdict {
    Verdict::new(Outcome::True, Evidence::Witness(w))
}

/// `∃ vars matrix`.
fn decide_block(
    model: &LaurentModel,
    vars: &[usize],
    matrix: &Formula,
    budget: &SearchBudget,
) -> Result<Verdict, ModelError> {
    let field = &model.field;
    let base = Assignment::new();
    if let [v] = vars {
        let u = Univariate {
            model,
            var: *v,
            base: &base,
            budget,
        };
        return Ok(match u.decide_formula(matrix)? {
            ClauseVerdict::True(w) => witness_verdict([(*v, w)].into()),
            ClauseVerdict::False(r) => Verdict::new(Outcome::False, Evidence::Certificate(r)),
            ClauseVerdict::Unknown(r) => Verdict::unknown(r),
        });
    }
    let m = eliminate_inverses(matrix);
    let clauses = match to_dnf_with_limit(&m, DEFAULT_MAX_CLAUSES) {
        Ok(c) => c,
        Err(e) => return Ok(Verdict::unknown(e.to_string())),
    };
    let mut reasons = Vec::new();
    let mut unknown = Vec::new();
    for c in &clauses {
        match decide_clause(model, vars, c, budget)? {
            Ok(mut w) => {
                for v in vars {
                    w.entry(*v)
                        .or_insert_with(|| WitnessValue::Exact(RatFun::zero(field)));
                }
                return Ok(witness_verdict(w));
            }
            Err(ClauseVerdict::False(r)) => reasons.push(r),
            Err(ClauseVerdict::Unknown(r)) => unknown.push(r),
            Err(ClauseVerdict::True(_)) => unreachable!(),
        }
    }
    if unknown.is_empty() {
        Ok(Verdict::new(
            Outcome::False,
            Evidence::Certificate(format!("every clause fails: {}", reasons.join("; "))),
        ))
    } else {
        Ok(Verdict::unknown(unknown.join("; ")))
    }
}

type ClauseResult = Result<BTreeMap<usize, WitnessValue>, ClauseVerdict>;

enum Literal {
    Eq(Term),
    Neq(Term),
    In(Term),
    Out(Term),
}

impl Literal {
    fn term(&self) -> &Term {
        match self {
            Literal::Eq(t) | Literal::Neq(t) | Literal::In(t) | Literal::Out(t) => t,
        }
    }
}

fn to_clause(lits: &[&Literal]) -> DnfClause {
    let mut c = DnfClause::default();
    for l in lits {
        match l {
            Literal::Eq(t) => c.eqs.push(t.clone()),
            Literal::Neq(t) => c.neqs.push(t.clone()),
            Literal::In(t) => c.ins.push(t.clone()),
            Literal::Out(t) => c.outs.push(t.clone()),
        }
    }
    c
}

/// Splits a clause into groups of literals sharing variables; each group is
/// decided on its own.
fn decide_clause(
    model: &LaurentModel,
    vars: &[usize],
    clause: &DnfClause,
    budget: &SearchBudget,
) -> Result<ClauseResult, ModelError> {
    let lits: Vec<Literal> = clause
        .eqs
        .iter()
        .cloned()
        .map(Literal::Eq)
        .chain(clause.neqs.iter().cloned().map(Literal::Neq))
        .chain(clause.ins.iter().cloned().map(Literal::In))
        .chain(clause.outs.iter().cloned().map(Literal::Out))
        .collect();
    // connected components over shared variables
    let mut groups: Vec<(BTreeSet<usize>, Vec<&Literal>)> = Vec::new();
    for l in &lits {
        let vs = l.term().vars();
        let mut merged = (vs.clone(), vec![l]);
        groups.retain_mut(|(gv, gl)| {
            if gv.is_disjoint(&vs) {
                true
            } else {
                merged.0.extend(gv.iter().copied());
                merged.1.append(gl);
                false
            }
        });
        groups.push(merged);
    }
    let mut witness = BTreeMap::new();
    let mut unknown = None;
    for (gv, gl) in &groups {
        let sub = to_clause(gl);
        let gvars: Vec<usize> = vars.iter().copied().filter(|v| gv.contains(v)).collect();
        let outcome = match gvars.as_slice() {
            [] => {
                if clause_holds(model, &sub, &Assignment::new())? {
                    Ok(BTreeMap::new())
                } else {
                    Err(ClauseVerdict::False("ground literal fails".into()))
                }
            }
            [v] => {
                let base = Assignment::new();
                let u = Univariate {
                    model,
                    var: *v,
                    base: &base,
                    budget,
                };
                match u.decide_clause(&sub)? {
                    ClauseVerdict::True(w) => Ok([(*v, w)].into()),
                    other => Err(other),
                }
            }
            _ => search_group(model, &gvars, &sub, budget)?,
        };
        match outcome {
            Ok(w) => witness.extend(w),
            Err(ClauseVerdict::False(r)) => return Ok(Err(ClauseVerdict::False(r))),
            Err(other) => unknown = Some(other),
        }
    }
    Ok(match unknown {
        Some(u) => Err(u),
        None => Ok(witness),
    })
}

/// Several linked variables: Newton from residue starts, then enumeration of
/// all but the last variable with the last one decided exactly.
fn search_group(
    model: &LaurentModel,
    vars: &[usize],
    clause: &DnfClause,
    budget: &SearchBudget,
) -> Result<ClauseResult, ModelError> {
    if let Some(w) = newton_attempt(model, vars, clause, budget)? {
        return Ok(Ok(w));
    }
    let (last, outer) = vars.split_last().unwrap();
    let pool = candidates(&model.field, budget);
    let per_var = {
        let total = budget.max_candidates.max(1) as f64;
        (total.powf(1.0 / outer.len() as f64).floor() as usize).clamp(1, pool.len())
    };
    let pool = &pool[..per_var];
    let mut idx = vec![0usize; outer.len()];
    let mut tried = 0usize;
    loop {
        let base: Assignment<RatFun> = outer
            .iter()
            .zip(&idx)
            .map(|(&v, &i)| (v, pool[i].clone()))
            .collect();
        tried += 1;
        let u = Univariate {
            model,
            var: *last,
            base: &base,
            budget,
        };
        if let ClauseVerdict::True(w) = u.decide_clause(clause)? {
            let mut out: BTreeMap<usize, WitnessValue> = base
                .into_iter()
                .map(|(v, r)| (v, WitnessValue::Exact(r)))
                .collect();
            out.insert(*last, w);
            return Ok(Ok(out));
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < pool.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    Ok(Err(ClauseVerdict::Unknown(format!(
        "no witness among {tried} assignments of {} variables",
        outer.len()
    ))))
}

/// Precision-tracked series arithmetic; undecidable comparisons are errors.
struct SeriesModel {
    field: FiniteField,
    cap: i64,
}

impl Semantics for SeriesModel {
    type Elem = LaurentApprox;

    fn constant(&self, c: &Const) -> Result<LaurentApprox, ModelError> {
        Ok(match c {
            Const::Int(n) => LaurentApprox::monomial(&self.field.from_int(*n), 0),
            Const::Uniformizer => LaurentApprox::monomial(&self.field.one(), 1),
        })
    }

    fn add(&self, a: &LaurentApprox, b: &LaurentApprox) -> LaurentApprox {
        a.add(b)
    }

    fn sub(&self, a: &LaurentApprox, b: &LaurentApprox) -> LaurentApprox {
        a.sub(b)
    }

    fn mul(&self, a: &LaurentApprox, b: &LaurentApprox) -> LaurentApprox {
        a.mul(b)
    }

    fn inv(&self, a: &LaurentApprox) -> Result<LaurentApprox, ModelError> {
        if a.is_exact() && a.valuation().is_none() {
            return Ok(a.clone());
        }
        Ok(a.inv(self.cap)?)
    }

    fn is_zero(&self, a: &LaurentApprox) -> Result<bool, ModelError> {
        match a.valuation() {
            Some(_) => Ok(false),
            None if a.is_exact() => Ok(true),
            None => Err(AlgebraError::InsufficientPrecision.into()),
        }
    }

    fn in_o(&self, a: &LaurentApprox) -> Result<bool, ModelError> {
        match a.valuation() {
            Some(v) => Ok(v >= 0),
            None if a.precision() >= 0 => Ok(true),
            None => Err(AlgebraError::InsufficientPrecision.into()),
        }
    }
}

/// Square systems: lift residue starting points and check the remaining
/// literals on the lifted root.
fn newton_attempt(
    model: &LaurentModel,
    vars: &[usize],
    clause: &DnfClause,
    budget: &SearchBudget,
) -> Result<Option<BTreeMap<usize, WitnessValue>>, ModelError> {
    let k = vars.len();
    if clause.eqs.len() != k || clause.eqs.iter().any(Term::contains_inverse) {
        return Ok(None);
    }
    let field = &model.field;
    let q = field.order() as usize;
    let starts = q.checked_pow(k as u32).unwrap_or(usize::MAX);
    if starts > budget.max_candidates {
        return Ok(None);
    }
    let position: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let polys: Vec<Term> = clause
        .eqs
        .iter()
        .map(|t| t.map_vars(&mut |v| position.get(&v).map(|&i| Term::var(i))))
        .collect();
    let elems: Vec<_> = field.elements().collect();
    let series = SeriesModel {
        field: field.clone(),
        cap: model.prec.max(1),
    };
    for n in 0..starts {
        let mut rest = n;
        let start: Vec<LaurentApprox> = (0..k)
            .map(|_| {
                let e = &elems[rest % q];
                rest /= q;
                LaurentApprox::monomial(e, 0)
            })
            .collect();
        let Some(root) = newton_lift(field, &polys, &start, model.prec.max(1))? else {
            continue;
        };
        let a: Assignment<LaurentApprox> = vars.iter().copied().zip(root.iter().cloned()).collect();
        let others = DnfClause {
            eqs: Vec::new(),
            ..clause.clone()
        };
        if let Ok(true) = clause_holds(&series, &others, &a) {
            return Ok(Some(
                vars.iter()
                    .zip(root)
                    .map(|(&v, r)| (v, WitnessValue::Series(r)))
                    .collect(),
            ));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::EXACT;
    use crate::formula::{parse_formula, Language};

    fn run(p: u32, m: u32, text: &str) -> Verdict {
        let f = parse_formula(text, &Language::VAL).unwrap();
        let field = FiniteField::new(p, m).unwrap();
        search_witness_laurent(&f, &field, &SearchBudget::default(), 64).unwrap()
    }

    #[test]
    fn odd_valuation_square() {
        assert_eq!(run(3, 1, "E x0. x0 * x0 = w").outcome, Outcome::False);
    }

    #[test]
    fn o_def_of_one() {
        let v = run(2, 1, "E x0. x0 * x0 + x0 = w * 1 * 1");
        assert_eq!(v.outcome, Outcome::True);
        assert!(matches!(v.evidence, Evidence::Witness(_)));
    }

    #[test]
    fn linear_equation_with_membership() {
        assert_eq!(
            run(2, 1, "E x0. x0 * w = 1 & O(x0)").outcome,
            Outcome::False
        );
    }

    #[test]
    fn square_of_one_plus_t() {
        let v = run(3, 1, "E x0. x0 * x0 = 1 + w");
        assert_eq!(v.outcome, Outcome::True);
        let Evidence::Witness(w) = v.evidence else {
            panic!()
        };
        let WitnessValue::Series(s) = &w[&0] else {
            panic!()
        };
        let s = s.as_exact();
        let d = s.mul(&s).sub(&LaurentApprox::from_ratfun(
            &RatFun::one(&FiniteField::new(3, 1).unwrap())
                .add(&RatFun::t(&FiniteField::new(3, 1).unwrap())),
            EXACT,
        ));
        assert!(d.valuation_bound() >= 64);
    }

    #[test]
    fn independent_variables() {
        assert_eq!(
            run(2, 1, "E x0. E x1. x0 * x0 + x0 = w & x1 * w = 1 & O(x1)").outcome,
            Outcome::False
        );
        assert_eq!(
            run(2, 1, "E x0. E x1. x0 * x0 + x0 = w & x1 * w = 1 & !O(x1)").outcome,
            Outcome::True
        );
    }

    #[test]
    fn linked_variables() {
        assert_eq!(
            run(3, 1, "E x0. E x1. x0 * x1 = w & O(x0)").outcome,
            Outcome::True
        );
        // Newton on x0 + x1 = 1, x0 * x1 = w
        let v = run(
            5,
            1,
            "E x0. E x1. x0 + x1 = 1 & x0 * x1 = w & x0 != x1 * x1 * x1",
        );
        assert_eq!(v.outcome, Outcome::True);
    }

    #[test]
    fn negation_and_combinations() {
        assert_eq!(run(3, 1, "!(E x0. x0 * x0 = w)").outcome, Outcome::True);
        assert_eq!(
            run(3, 1, "(E x0. x0 * x0 = w) | (E x1. x1 * x1 = 1 + w)").outcome,
            Outcome::True
        );
        assert_eq!(run(3, 1, "1 = 1 & 0 = 1").outcome, Outcome::False);
    }
}
