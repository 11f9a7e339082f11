//! Negation normal form, disjunctive normal form and existential prenexing.

use std::collections::BTreeSet;

use crate::error::NormalizeError;
use crate::formula::{free_vars, substitute, Formula, Term};

/// Default bound on the number of DNF clauses.
pub const DEFAULT_MAX_CLAUSES: usize = 10_000;

/// A conjunction `⋀ f = 0 ∧ ⋀ g ≠ 0 ∧ ⋀ h ∈ O ∧ ⋀ k ∉ O`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DnfClause {
    pub eqs: Vec<Term>,
    pub neqs: Vec<Term>,
    pub ins: Vec<Term>,
    pub outs: Vec<Term>,
}

impl DnfClause {
    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty() && self.neqs.is_empty() && self.ins.is_empty() && self.outs.is_empty()
    }

    fn extend(&mut self, other: &DnfClause) {
        self.eqs.extend(other.eqs.iter().cloned());
        self.neqs.extend(other.neqs.iter().cloned());
        self.ins.extend(other.ins.iter().cloned());
        self.outs.extend(other.outs.iter().cloned());
    }

    pub fn to_formula(&self) -> Formula {
        let atoms = self
            .eqs
            .iter()
            .map(|t| Formula::eq(t.clone(), Term::zero()))
            .chain(
                self.neqs
                    .iter()
                    .map(|t| Formula::neq(t.clone(), Term::zero())),
            )
            .chain(self.ins.iter().map(|t| Formula::in_o(t.clone())))
            .chain(
                self.outs
                    .iter()
                    .map(|t| Formula::not(Formula::in_o(t.clone()))),
            );
        Formula::and_all(atoms)
    }
}

/// Disjunction of clauses as a formula; no clauses gives `0 = 1`.
pub fn dnf_to_formula(clauses: &[DnfClause]) -> Formula {
    Formula::or_all(clauses.iter().map(DnfClause::to_formula))
}

/// Pushes negations onto atoms.
pub fn to_nnf(f: &Formula) -> Result<Formula, NormalizeError> {
    if !f.is_quantifier_free() {
        return Err(NormalizeError::Quantified);
    }
    Ok(nnf(f, false))
}

fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::Eq(..) | Formula::InO(_) => {
            if negate {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(a) => nnf(a, !negate),
        Formula::And(a, b) if negate => Formula::or(nnf(a, true), nnf(b, true)),
        Formula::Or(a, b) if negate => Formula::and(nnf(a, true), nnf(b, true)),
        Formula::And(a, b) => Formula::and(nnf(a, false), nnf(b, false)),
        Formula::Or(a, b) => Formula::or(nnf(a, false), nnf(b, false)),
        Formula::Exists(..) => unreachable!("checked quantifier-free"),
    }
}

/// `a = b` becomes `a - b = 0`, dropping a literal zero side.
fn difference(a: &Term, b: &Term) -> Term {
    if b.is_zero_literal() {
        a.clone()
    } else if a.is_zero_literal() {
        b.clone()
    } else {
        Term::sub(a.clone(), b.clone())
    }
}

pub fn to_dnf(f: &Formula) -> Result<Vec<DnfClause>, NormalizeError> {
    to_dnf_with_limit(f, DEFAULT_MAX_CLAUSES)
}

pub fn to_dnf_with_limit(
    f: &Formula,
    max_clauses: usize,
) -> Result<Vec<DnfClause>, NormalizeError> {
    let n = to_nnf(f)?;
    dnf(&n, max_clauses)
}

fn dnf(f: &Formula, limit: usize) -> Result<Vec<DnfClause>, NormalizeError> {
    let single = |c: DnfClause| Ok(vec![c]);
    match f {
        Formula::Eq(a, b) => single(DnfClause {
            eqs: vec![difference(a, b)],
            ..Default::default()
        }),
        Formula::InO(a) => single(DnfClause {
            ins: vec![a.clone()],
            ..Default::default()
        }),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(a, b) => single(DnfClause {
                neqs: vec![difference(a, b)],
                ..Default::default()
            }),
            Formula::InO(a) => single(DnfClause {
                outs: vec![a.clone()],
                ..Default::default()
            }),
            _ => unreachable!("input is in negation normal form"),
        },
        Formula::Or(a, b) => {
            let mut left = dnf(a, limit)?;
            let right = dnf(b, limit)?;
            if left.len() + right.len() > limit {
                return Err(NormalizeError::TooManyClauses { limit });
            }
            left.extend(right);
            Ok(left)
        }
        Formula::And(a, b) => {
            let left = dnf(a, limit)?;
            let right = dnf(b, limit)?;
            if left.len().saturating_mul(right.len()) > limit {
                return Err(NormalizeError::TooManyClauses { limit });
            }
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r);
                    out.push(c);
                }
            }
            Ok(out)
        }
        Formula::Exists(..) => unreachable!("checked quantifier-free"),
    }
}

/// Pulls every quantifier of a positive existential formula to the front.
///
/// Bound variables that clash with a free variable or an earlier extracted
/// variable are renamed to fresh indices above every index in `f`.
pub fn prenex_existential(f: &Formula) -> Result<(Vec<usize>, Formula), NormalizeError> {
    let mut used: BTreeSet<usize> = free_vars(f);
    let mut next = f.fresh_var();
    let mut vars = Vec::new();
    let matrix = prenex_rec(f, &mut used, &mut next, &mut vars)?;
    Ok((vars, matrix))
}

fn prenex_rec(
    f: &Formula,
    used: &mut BTreeSet<usize>,
    next: &mut usize,
    vars: &mut Vec<usize>,
) -> Result<Formula, NormalizeError> {
    if f.is_quantifier_free() {
        return Ok(f.clone());
    }
    match f {
        Formula::Exists(v, body) => {
            let (v, body) = if used.contains(v) {
                let fresh = *next;
                *next += 1;
                (fresh, substitute(body, *v, &Term::Var(fresh)))
            } else {
                (*v, body.as_ref().clone())
            };
            used.insert(v);
            vars.push(v);
            prenex_rec(&body, used, next, vars)
        }
        Formula::And(a, b) => {
            let ma = prenex_rec(a, used, next, vars)?;
            let mb = prenex_rec(b, used, next, vars)?;
            Ok(Formula::and(ma, mb))
        }
        Formula::Or(a, b) => {
            let ma = prenex_rec(a, used, next, vars)?;
            let mb = prenex_rec(b, used, next, vars)?;
            Ok(Formula::or(ma, mb))
        }
        Formula::Not(_) => Err(NormalizeError::NegatedQuantifier),
        Formula::Eq(..) | Formula::InO(_) => unreachable!("atoms are quantifier-free"),
    }
}
