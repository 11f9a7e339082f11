//! Translations from the valued-field and field languages into the ring
//! language with the uniformizer `w`.

use crate::error::TranslateError;
use crate::formula::{classify_fragment, Formula, Term};
use crate::normalize::{to_dnf_with_limit, DEFAULT_MAX_CLAUSES};

/// Exponent used in the membership bundle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EtaVariant {
    /// `Σ x_i^n w^i`, which is unsound: `(0, t^-1)` passes for `n = 2`.
    PaperLiteral,
    /// `Σ x_i^(n+1) w^i`; the summand valuations are pairwise distinct.
    #[default]
    Corrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslateOptions {
    pub eta: EtaVariant,
    pub max_clauses: usize,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions {
            eta: EtaVariant::Corrected,
            max_clauses: DEFAULT_MAX_CLAUSES,
        }
    }
}

/// `z*z + z = w*t*t`.
fn o_equation(z: usize, t: &Term) -> Formula {
    let z = Term::var(z);
    Formula::eq(
        Term::add(Term::mul(z.clone(), z.clone()), z),
        Term::mul(Term::mul(Term::uniformizer(), t.clone()), t.clone()),
    )
}

/// `∃z (z^2 + z = w t^2)`, with `z` the least index above those of `t`.
pub fn o_def(t: &Term) -> Formula {
    let z = t.max_var().map_or(0, |m| m + 1);
    Formula::exists(z, o_equation(z, t))
}

/// `Σ_{i=1}^{N} terms_i^e w^i` with `e = N` or `N + 1` by variant.
pub fn bundle(terms: &[Term], variant: EtaVariant) -> Term {
    let n = terms.len() as u32;
    let e = match variant {
        EtaVariant::PaperLiteral => n,
        EtaVariant::Corrected => n + 1,
    };
    let mut acc: Option<Term> = None;
    for (i, x) in terms.iter().enumerate() {
        let summand = Term::mul(
            Term::pow(x, e),
            Term::pow(&Term::uniformizer(), i as u32 + 1),
        );
        acc = Some(match acc {
            None => summand,
            Some(a) => Term::add(a, summand),
        });
    }
    acc.unwrap_or_else(Term::zero)
}

/// Quantifier-free body of the bundled membership test with witness `x{z}`.
pub fn rho(terms: &[Term], z: usize, variant: EtaVariant) -> Formula {
    o_equation(z, &bundle(terms, variant))
}

/// `η_n` in the free variables `x1..xn`, bound witness `x{n+1}`.
pub fn eta(n: usize, variant: EtaVariant) -> Formula {
    assert!(n >= 1, "eta needs at least one variable");
    let xs: Vec<Term> = (1..=n).map(Term::var).collect();
    Formula::exists(n + 1, rho(&xs, n + 1, variant))
}

/// `O((k w)^-1) ∧ k ≠ 0`, equivalent to `¬O(k)`.
pub fn rewrite_not_in_o(k: &Term) -> Formula {
    Formula::and(
        Formula::in_o(Term::inv(Term::mul(k.clone(), Term::uniformizer()))),
        Formula::neq(k.clone(), Term::zero()),
    )
}

/// Removes every inverse from a quantifier-free field-language formula.
pub fn field_to_ring(f: &Formula) -> Result<Formula, TranslateError> {
    if !f.is_quantifier_free() {
        return Err(TranslateError::Quantified);
    }
    if f.contains_membership() {
        return Err(TranslateError::MembershipInField);
    }
    Ok(eliminate_inverses(f))
}

/// Clears inverses from equations only; membership atoms keep theirs.
pub(crate) fn eliminate_inverses(f: &Formula) -> Formula {
    let Some(target) = innermost_in_equations(f) else {
        return f.clone();
    };
    let Term::Inv(s) = &target else {
        unreachable!()
    };
    let s = s.as_ref().clone();
    let zero_case = f.map_terms(&mut |t| fold_zeros(&t.replace(&target, &Term::zero())));
    let unit_case = clear_atoms(f, &target, &s);
    Formula::or(
        Formula::and(
            Formula::eq(s.clone(), Term::zero()),
            eliminate_inverses(&zero_case),
        ),
        Formula::and(
            Formula::neq(s, Term::zero()),
            eliminate_inverses(&unit_case),
        ),
    )
}

/// Drops literal zeros: `0 * a = 0`, `a + 0 = a`, `a - 0 = a`, `inv(0) = 0`.
fn fold_zeros(t: &Term) -> Term {
    let z = |t: &Term| t.is_zero_literal();
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Inv(a) => {
            let a = fold_zeros(a);
            if z(&a) {
                a
            } else {
                Term::inv(a)
            }
        }
        Term::Mul(a, b) => {
            let (a, b) = (fold_zeros(a), fold_zeros(b));
            if z(&a) || z(&b) {
                Term::zero()
            } else {
                Term::mul(a, b)
            }
        }
        Term::Add(a, b) => match (fold_zeros(a), fold_zeros(b)) {
            (a, b) if z(&a) => b,
            (a, b) if z(&b) => a,
            (a, b) => Term::add(a, b),
        },
        Term::Sub(a, b) => match (fold_zeros(a), fold_zeros(b)) {
            (a, b) if z(&b) => a,
            (a, b) => Term::sub(a, b),
        },
    }
}

fn innermost_in_equations(f: &Formula) -> Option<Term> {
    match f {
        Formula::Eq(a, b) => innermost(a).or_else(|| innermost(b)).cloned(),
        Formula::InO(_) => None,
        Formula::Not(a) | Formula::Exists(_, a) => innermost_in_equations(a),
        Formula::And(a, b) | Formula::Or(a, b) => {
            innermost_in_equations(a).or_else(|| innermost_in_equations(b))
        }
    }
}

fn innermost(t: &Term) -> Option<&Term> {
    match t {
        Term::Inv(a) => innermost(a).or(Some(t)),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            innermost(a).or_else(|| innermost(b))
        }
        Term::Var(_) | Term::Const(_) => None,
    }
}

fn contains(t: &Term, target: &Term) -> bool {
    let mut found = false;
    t.visit(&mut |s| found |= s == target);
    found
}

fn clear_atoms(f: &Formula, target: &Term, s: &Term) -> Formula {
    match f {
        Formula::Eq(a, b) if contains(a, target) || contains(b, target) => {
            let (n1, d1) = clear(a, target, s);
            let (n2, d2) = clear(b, target, s);
            let d = d1.max(d2);
            Formula::eq(times_power(n1, s, d - d1), times_power(n2, s, d - d2))
        }
        Formula::Eq(..) | Formula::InO(_) => f.clone(),
        Formula::Not(a) => Formula::not(clear_atoms(a, target, s)),
        Formula::And(a, b) => Formula::and(clear_atoms(a, target, s), clear_atoms(b, target, s)),
        Formula::Or(a, b) => Formula::or(clear_atoms(a, target, s), clear_atoms(b, target, s)),
        Formula::Exists(v, a) => Formula::exists(*v, clear_atoms(a, target, s)),
    }
}

fn is_one_literal(t: &Term) -> bool {
    *t == Term::one()
}

/// `s^k * n`.
fn times_power(n: Term, s: &Term, k: u32) -> Term {
    if k == 0 {
        n
    } else if is_one_literal(&n) {
        Term::pow(s, k)
    } else {
        Term::mul(Term::pow(s, k), n)
    }
}

fn times(a: Term, b: Term) -> Term {
    if is_one_literal(&a) {
        b
    } else if is_one_literal(&b) {
        a
    } else {
        Term::mul(a, b)
    }
}

/// Writes `t` as `n * target^d` with `n` free of `target`, assuming `s ≠ 0`.
fn clear(t: &Term, target: &Term, s: &Term) -> (Term, u32) {
    if t == target {
        return (Term::one(), 1);
    }
    if !contains(t, target) {
        return (t.clone(), 0);
    }
    match t {
        Term::Add(a, b) | Term::Sub(a, b) => {
            let (na, da) = clear(a, target, s);
            let (nb, db) = clear(b, target, s);
            let d = da.max(db);
            let (na, nb) = (times_power(na, s, d - da), times_power(nb, s, d - db));
            let n = if matches!(t, Term::Add(..)) {
                Term::add(na, nb)
            } else {
                Term::sub(na, nb)
            };
            (n, d)
        }
        Term::Mul(a, b) => {
            let (na, da) = clear(a, target, s);
            let (nb, db) = clear(b, target, s);
            (times(na, nb), da + db)
        }
        Term::Inv(a) => {
            // (n s^-d)^-1 = s^d n^-1, also when n = 0
            let (na, da) = clear(a, target, s);
            (times_power(Term::inv(na), s, da), 0)
        }
        Term::Var(_) | Term::Const(_) => unreachable!("leaves do not contain an inverse"),
    }
}

/// Translates an `∃_n` valued-field formula into an `∃_{n+1}` ring formula.
pub fn val_to_ring(f: &Formula) -> Result<Formula, TranslateError> {
    val_to_ring_with(f, &TranslateOptions::default())
}

pub fn val_to_ring_with(
    f: &Formula,
    options: &TranslateOptions,
) -> Result<Formula, TranslateError> {
    if classify_fragment(f).en_index.is_none() {
        return Err(TranslateError::NotInFragment);
    }
    let mut prefix = Vec::new();
    let mut matrix = f;
    while let Formula::Exists(v, body) = matrix {
        prefix.push(*v);
        matrix = body;
    }
    let z = f.fresh_var();
    let clauses = to_dnf_with_limit(matrix, options.max_clauses)?;
    let disjuncts = clauses.iter().map(|c| {
        let mut members: Vec<Term> = c.ins.clone();
        members.extend(
            c.outs
                .iter()
                .map(|k| Term::inv(Term::mul(k.clone(), Term::uniformizer()))),
        );
        let mut atoms = Vec::new();
        if !members.is_empty() {
            atoms.push(rho(&members, z, options.eta));
        }
        atoms.extend(c.eqs.iter().map(|e| Formula::eq(e.clone(), Term::zero())));
        let product = c.neqs.iter().chain(&c.outs).cloned().reduce(Term::mul);
        if let Some(p) = product {
            atoms.push(Formula::neq(p, Term::zero()));
        }
        Formula::and_all(atoms)
    });
    let body = Formula::exists(z, eliminate_inverses(&Formula::or_all(disjuncts)));
    Ok(Formula::exists_many(&prefix, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{print_formula, Language};

    #[test]
    fn o_def_shape() {
        assert_eq!(
            print_formula(&o_def(&Term::var(0))),
            "E x1. x1 * x1 + x1 = w * x0 * x0"
        );
        assert_eq!(
            print_formula(&o_def(&Term::one())),
            "E x0. x0 * x0 + x0 = w * 1 * 1"
        );
    }

    #[test]
    fn eta_shapes() {
        assert_eq!(
            print_formula(&eta(2, EtaVariant::PaperLiteral)),
            "E x3. x3 * x3 + x3 = w * (x1 * x1 * w + x2 * x2 * (w * w)) * (x1 * x1 * w + x2 * x2 * (w * w))"
        );
        let c = eta(2, EtaVariant::Corrected);
        assert_eq!(c.free_vars().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(classify_fragment(&c).en_index, Some(1));
    }

    #[test]
    fn inverse_split() {
        let f = Formula::eq(Term::inv(Term::var(0)), Term::var(1));
        let g = field_to_ring(&f).unwrap();
        assert_eq!(print_formula(&g), "x0 = 0 & 0 = x1 | x0 != 0 & 1 = x0 * x1");
        let h = Formula::eq(Term::var(0), Term::var(1));
        assert_eq!(field_to_ring(&h).unwrap(), h);
        assert_eq!(
            field_to_ring(&Formula::in_o(Term::var(0))),
            Err(TranslateError::MembershipInField)
        );
    }

    #[test]
    fn nested_inverse_is_cleared() {
        let f = Formula::eq(Term::inv(Term::inv(Term::var(0))), Term::var(0));
        let g = field_to_ring(&f).unwrap();
        assert!(!g.contains_inverse());
        assert!(g.is_quantifier_free());
        assert!(Language::RING.first_violation(&g).is_none());
    }

    #[test]
    fn translation_adds_one_quantifier() {
        let f = Formula::exists(0, Formula::in_o(Term::var(0)));
        let g = val_to_ring(&f).unwrap();
        assert_eq!(classify_fragment(&g).en_index, Some(2));
        assert!(!g.contains_membership() && !g.contains_inverse());

        let h = val_to_ring(&Formula::in_o(Term::var(0))).unwrap();
        assert_eq!(classify_fragment(&h).en_index, Some(1));
        assert_eq!(h.free_vars().into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn contradiction_keeps_false_atom() {
        let f = Formula::falsity();
        let g = val_to_ring(&f).unwrap();
        assert_eq!(print_formula(&g), "E x0. 1 = 0");
    }

    #[test]
    fn negated_quantifier_rejected() {
        let f = Formula::not(Formula::exists(0, Formula::in_o(Term::var(0))));
        assert_eq!(val_to_ring(&f), Err(TranslateError::NotInFragment));
    }
}
