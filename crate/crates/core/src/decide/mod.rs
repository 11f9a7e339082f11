//! Decision procedures at desk scale and the translation fuzzer.

mod fuzz;
mod search;
mod univariate;

pub use fuzz::{
    fuzz_translation, random_formula, random_value, CaseStatus, FuzzConfig, FuzzRecord, Report,
};
pub use search::search_witness_laurent;

use crate::algebra::{FiniteField, RatFun};
use crate::error::ModelError;
use crate::formula::{Formula, Term};
use crate::models::{eval_sentence_fq, FqModel, Outcome, SearchBudget, DEFAULT_FQ_SEARCH_BOUND};

/// Truth of a ring-language sentence in `F_q` by exhaustive search.
pub fn decide_exists_fq(f: &Formula, field: &FiniteField) -> Result<bool, ModelError> {
    decide_exists_fq_with_bound(f, field, DEFAULT_FQ_SEARCH_BOUND)
}

pub fn decide_exists_fq_with_bound(
    f: &Formula,
    field: &FiniteField,
    bound: u128,
) -> Result<bool, ModelError> {
    if !f.is_sentence() {
        return Err(ModelError::NotASentence);
    }
    let model = FqModel {
        field: field.clone(),
    };
    Ok(eval_sentence_fq(&model, f, bound)?.outcome == Outcome::True)
}

/// Whether `F_{p^m}` embeds into `F_{p^n}`, i.e. whether every existential
/// one-variable sentence over `F_p` true in the first is true in the second.
pub fn embedding_exists(_p: u32, m: u32, n: u32) -> bool {
    m != 0 && n.is_multiple_of(m)
}

/// Ring sentences with at most two quantifiers and two atoms, built from a
/// fixed stock of terms in `x0, x1`.
pub fn template_suite() -> Vec<Formula> {
    let (x0, x1) = (Term::var(0), Term::var(1));
    let stock = [
        Term::zero(),
        Term::one(),
        x0.clone(),
        x1.clone(),
        Term::mul(x0.clone(), x0.clone()),
        Term::mul(x0.clone(), x1.clone()),
        Term::add(x0.clone(), x1.clone()),
        Term::add(x0.clone(), Term::one()),
        Term::add(
            Term::mul(x0.clone(), x0.clone()),
            Term::add(x0.clone(), Term::one()),
        ),
    ];
    let mut atoms = Vec::new();
    for i in 0..stock.len() {
        for j in i + 1..stock.len() {
            atoms.push(Formula::eq(stock[i].clone(), stock[j].clone()));
        }
    }
    let ex = |v: usize, f: Formula| Formula::exists(v, f);
    let not = Formula::not;
    let mut out = Vec::new();
    for a in &atoms {
        out.push(ex(0, a.clone()));
        out.push(ex(0, not(a.clone())));
        out.push(not(ex(0, a.clone())));
        out.push(ex(0, ex(1, a.clone())));
        out.push(ex(0, not(ex(1, a.clone()))));
        for b in &atoms {
            let (a, b) = (a.clone(), b.clone());
            out.push(ex(0, ex(1, Formula::and(a.clone(), b.clone()))));
            out.push(ex(0, ex(1, Formula::or(a.clone(), not(b.clone())))));
            out.push(ex(0, Formula::and(a.clone(), ex(1, b.clone()))));
            out.push(ex(0, Formula::and(a.clone(), not(ex(1, b.clone())))));
            out.push(Formula::and(ex(0, a.clone()), ex(1, b.clone())));
            out.push(Formula::or(not(ex(0, a.clone())), ex(1, not(b.clone()))));
            out.push(not(ex(0, ex(1, Formula::and(a, not(b))))));
        }
    }
    out.retain(Formula::is_sentence);
    out
}

/// Laurent polynomials with exponents in `[-low, high]` and at most
/// `support` terms, fewest terms first, at most `max_candidates` of them.
pub(crate) fn candidates(field: &FiniteField, budget: &SearchBudget) -> Vec<RatFun> {
    let mut exps: Vec<i64> = (0..=budget.high).collect();
    exps.extend((1..=budget.low).map(|k| -k));
    let nonzero: Vec<_> = field.elements().filter(|e| !e.is_zero()).collect();
    let mut out = vec![RatFun::zero(field)];
    let limit = budget.max_candidates.max(1);
    for size in 1..=budget.support.min(exps.len()) {
        let mut chosen = Vec::new();
        if !grow(
            &exps,
            0,
            size,
            &mut chosen,
            &nonzero,
            field,
            &mut out,
            limit,
        ) {
            break;
        }
    }
    out.truncate(limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn grow(
    exps: &[i64],
    start: usize,
    size: usize,
    chosen: &mut Vec<i64>,
    nonzero: &[crate::algebra::FqElem],
    field: &FiniteField,
    out: &mut Vec<RatFun>,
    limit: usize,
) -> bool {
    if chosen.len() == size {
        // every coefficient vector over the chosen exponents
        let mut idx = vec![0usize; size];
        loop {
            if out.len() >= limit {
                return false;
            }
            let mut v = RatFun::zero(field);
            for (e, &i) in chosen.iter().zip(&idx) {
                v = v.add(&RatFun::monomial(&nonzero[i], *e));
            }
            out.push(v);
            let mut k = 0;
            while k < size {
                idx[k] += 1;
                if idx[k] < nonzero.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == size {
                return true;
            }
        }
    }
    for i in start..exps.len() {
        chosen.push(exps[i]);
        let more = grow(exps, i + 1, size, chosen, nonzero, field, out, limit);
        chosen.pop();
        if !more {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Language};

    fn read(s: &str) -> Formula {
        parse_formula(s, &Language::RING).unwrap()
    }

    #[test]
    fn finite_field_examples() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let f4 = FiniteField::new(2, 2).unwrap();
        let f8 = FiniteField::new(2, 3).unwrap();
        let cubic = read("E x0. x0 * x0 + x0 + 1 = 0");
        assert!(!decide_exists_fq(&cubic, &f2).unwrap());
        assert!(decide_exists_fq(&cubic, &f4).unwrap());
        for q in [&f2, &f4, &f8] {
            assert!(decide_exists_fq(&read("E x0. x0 * x0 = 1 & x0 != 0"), q).unwrap());
        }
        let frob = read("E x0. x0 * x0 * x0 * x0 != x0");
        assert!(!decide_exists_fq(&frob, &f4).unwrap());
        assert!(decide_exists_fq(&frob, &f8).unwrap());
    }

    #[test]
    fn search_bound_enforced() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let f = read("E x0. E x1. E x2. x0 = x1 + x2");
        assert!(matches!(
            decide_exists_fq_with_bound(&f, &f4, 63),
            Err(ModelError::SearchSpaceExceeded {
                size: 64,
                bound: 63
            })
        ));
    }

    #[test]
    fn embeddings() {
        assert!(embedding_exists(2, 1, 3));
        assert!(!embedding_exists(2, 2, 3));
        assert!(embedding_exists(3, 2, 2));
    }

    #[test]
    fn candidate_order() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let c = candidates(&f2, &SearchBudget::default());
        // 0, then all subsets of 7 exponents of size 1..=4
        assert_eq!(c.len(), 1 + 7 + 21 + 35 + 35);
        assert!(c[0].is_zero() && c[1].is_one());
        let small = SearchBudget {
            max_candidates: 5,
            ..SearchBudget::default()
        };
        assert_eq!(candidates(&f2, &small).len(), 5);
    }

    #[test]
    fn templates_are_sentences() {
        let suite = template_suite();
        assert!(suite.len() > 1000);
        assert!(suite.iter().all(|f| f.quantifier_count() <= 2));
    }
}
