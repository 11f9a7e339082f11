//! Terms and existential formulas over the ring, field and valued-field
//! languages, with the uniformizer `w` as the only non-numeral constant.

mod fragment;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use fragment::{classify_fragment, FragmentClass};
pub use parse::{parse_formula, parse_term};
pub use print::{print_formula, print_term};

/// Which signature a formula is read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanguageKind {
    /// `+, -, *, 0, 1`
    Ring,
    /// ring plus the total inverse `inv`
    Field,
    /// ring plus the membership predicate `O`
    Val,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constants {
    /// numerals only
    None,
    /// numerals and the uniformizer `w`
    Uniformizer,
    /// elements of `F_p(t)`, written as ring expressions in `w`
    ParamField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Language {
    pub kind: LanguageKind,
    pub constants: Constants,
}

impl Language {
    pub const RING: Language = Language::new(LanguageKind::Ring, Constants::Uniformizer);
    pub const FIELD: Language = Language::new(LanguageKind::Field, Constants::Uniformizer);
    pub const VAL: Language = Language::new(LanguageKind::Val, Constants::Uniformizer);

    pub const fn new(kind: LanguageKind, constants: Constants) -> Self {
        Language { kind, constants }
    }

    pub fn admits_membership(&self) -> bool {
        self.kind == LanguageKind::Val
    }

    pub fn admits_inverse(&self) -> bool {
        self.kind == LanguageKind::Field
    }

    pub fn admits_uniformizer(&self) -> bool {
        self.constants != Constants::None
    }

    /// First symbol of `f` the language does not admit, if any.
    pub fn first_violation(&self, f: &Formula) -> Option<&'static str> {
        let mut bad = None;
        f.visit_terms(&mut |t| {
            t.visit(&mut |s| {
                if bad.is_some() {
                    return;
                }
                match s {
                    Term::Inv(_) if !self.admits_inverse() => bad = Some("inv"),
                    Term::Const(Const::Uniformizer) if !self.admits_uniformizer() => {
                        bad = Some("w")
                    }
                    _ => {}
                }
            })
        });
        if bad.is_none() && !self.admits_membership() && f.contains_membership() {
            bad = Some("O");
        }
        bad
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            LanguageKind::Ring => "ring",
            LanguageKind::Field => "field",
            LanguageKind::Val => "val",
        };
        write!(f, "{name}")
    }
}

/// Constant symbols. Compound constants of `F_p(t)` are built from these
/// with the ring operations; numerals stay unreduced until evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Int(i64),
    Uniformizer,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Const(Const),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Inv(Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn int(n: i64) -> Term {
        Term::Const(Const::Int(n))
    }

    pub fn zero() -> Term {
        Term::int(0)
    }

    pub fn one() -> Term {
        Term::int(1)
    }

    pub fn uniformizer() -> Term {
        Term::Const(Const::Uniformizer)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: Term) -> Term {
        Term::Inv(Box::new(a))
    }

    /// `a^n` as a left-nested product; `a^0 = 1`.
    pub fn pow(a: &Term, n: u32) -> Term {
        match n {
            0 => Term::one(),
            _ => (1..n).fold(a.clone(), |acc, _| Term::mul(acc, a.clone())),
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Term::Const(Const::Int(0)))
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        match self {
            Term::Var(_) | Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Inv(a) => a.visit(f),
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(i) = t {
                out.insert(*i);
            }
        });
        out
    }

    pub fn max_var(&self) -> Option<usize> {
        self.vars().last().copied()
    }

    pub fn contains_inverse(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= matches!(t, Term::Inv(_)));
        found
    }

    pub fn contains_var(&self, v: usize) -> bool {
        let mut found = false;
        self.visit(&mut |t| found |= *t == Term::Var(v));
        found
    }

    /// Replaces every occurrence of `v`.
    pub fn substitute(&self, v: usize, by: &Term) -> Term {
        self.map_vars(&mut |i| if i == v { Some(by.clone()) } else { None })
    }

    pub(crate) fn map_vars(&self, f: &mut impl FnMut(usize) -> Option<Term>) -> Term {
        match self {
            Term::Var(i) => f(*i).unwrap_or(Term::Var(*i)),
            Term::Const(_) => self.clone(),
            Term::Add(a, b) => Term::add(a.map_vars(f), b.map_vars(f)),
            Term::Sub(a, b) => Term::sub(a.map_vars(f), b.map_vars(f)),
            Term::Mul(a, b) => Term::mul(a.map_vars(f), b.map_vars(f)),
            Term::Inv(a) => Term::inv(a.map_vars(f)),
        }
    }

    /// Replaces every subterm structurally equal to `target`.
    pub fn replace(&self, target: &Term, by: &Term) -> Term {
        if self == target {
            return by.clone();
        }
        match self {
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Add(a, b) => Term::add(a.replace(target, by), b.replace(target, by)),
            Term::Sub(a, b) => Term::sub(a.replace(target, by), b.replace(target, by)),
            Term::Mul(a, b) => Term::mul(a.replace(target, by), b.replace(target, by)),
            Term::Inv(a) => Term::inv(a.replace(target, by)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_term(self))
    }
}

/// Existential first-order formulas. There is no universal quantifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    InO(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(usize, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::Eq(a, b))
    }

    pub fn in_o(t: Term) -> Formula {
        Formula::InO(t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: usize, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// `∃ v_1 ... v_k body` with `v_1` outermost.
    pub fn exists_many(vars: &[usize], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, &v| Formula::exists(v, acc))
    }

    /// Left-nested conjunction; the empty conjunction is `0 = 0`.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::truth)
    }

    /// Left-nested disjunction; the empty disjunction is `0 = 1`.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::falsity)
    }

    pub fn truth() -> Formula {
        Formula::Eq(Term::zero(), Term::zero())
    }

    pub fn falsity() -> Formula {
        Formula::Eq(Term::zero(), Term::one())
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::InO(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) => false,
        }
    }

    pub fn contains_membership(&self) -> bool {
        match self {
            Formula::Eq(..) => false,
            Formula::InO(_) => true,
            Formula::Not(a) | Formula::Exists(_, a) => a.contains_membership(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_membership() || b.contains_membership()
            }
        }
    }

    pub fn contains_inverse(&self) -> bool {
        let mut found = false;
        self.visit_terms(&mut |t| found |= t.contains_inverse());
        found
    }

    /// Number of `Exists` nodes.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::InO(_) => 0,
            Formula::Not(a) => a.quantifier_count(),
            Formula::And(a, b) | Formula::Or(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Exists(_, a) => 1 + a.quantifier_count(),
        }
    }

    /// Calls `f` on every top-level term of every atom.
    pub fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::InO(a) => f(a),
            Formula::Not(a) | Formula::Exists(_, a) => a.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    /// Rebuilds the formula with every atom term mapped by `f`.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::InO(a) => Formula::InO(f(a)),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Exists(v, a) => Formula::exists(*v, a.map_terms(f)),
        }
    }

    /// Every variable index occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Formula::Eq(a, b) => {
                out.extend(a.vars());
                out.extend(b.vars());
            }
            Formula::InO(a) => out.extend(a.vars()),
            Formula::Not(a) => a.collect_all_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_all_vars(out);
                b.collect_all_vars(out);
            }
            Formula::Exists(v, a) => {
                out.insert(*v);
                a.collect_all_vars(out);
            }
        }
    }

    /// Smallest index above every index occurring in the formula.
    pub fn fresh_var(&self) -> usize {
        self.all_vars().last().map_or(0, |m| m + 1)
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        free_vars(self)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn substitute(&self, v: usize, by: &Term) -> Formula {
        substitute(self, v, by)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_formula(self))
    }
}

/// Variables with a free occurrence.
pub fn free_vars(f: &Formula) -> BTreeSet<usize> {
    match f {
        Formula::Eq(a, b) => {
            let mut s = a.vars();
            s.extend(b.vars());
            s
        }
        Formula::InO(a) => a.vars(),
        Formula::Not(a) => free_vars(a),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let mut s = free_vars(a);
            s.extend(free_vars(b));
            s
        }
        Formula::Exists(v, a) => {
            let mut s = free_vars(a);
            s.remove(v);
            s
        }
    }
}

/// Capture-avoiding substitution of `by` for the free occurrences of `v`.
///
/// A bound variable that would capture a variable of `by` is renamed to the
/// smallest index above every index in `f`, `by` and `v`.
pub fn substitute(f: &Formula, v: usize, by: &Term) -> Formula {
    if !free_vars(f).contains(&v) {
        return f.clone();
    }
    let by_vars = by.vars();
    let mut next = f
        .fresh_var()
        .max(by.max_var().map_or(0, |m| m + 1))
        .max(v + 1);
    subst_rec(f, v, by, &by_vars, &mut next)
}

fn subst_rec(
    f: &Formula,
    v: usize,
    by: &Term,
    by_vars: &BTreeSet<usize>,
    next: &mut usize,
) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(a.substitute(v, by), b.substitute(v, by)),
        Formula::InO(a) => Formula::InO(a.substitute(v, by)),
        Formula::Not(a) => Formula::not(subst_rec(a, v, by, by_vars, next)),
        Formula::And(a, b) => Formula::and(
            subst_rec(a, v, by, by_vars, next),
            subst_rec(b, v, by, by_vars, next),
        ),
        Formula::Or(a, b) => Formula::or(
            subst_rec(a, v, by, by_vars, next),
            subst_rec(b, v, by, by_vars, next),
        ),
        Formula::Exists(bound, body) => {
            if *bound == v || !free_vars(body).contains(&v) {
                return f.clone();
            }
            if by_vars.contains(bound) {
                let fresh = *next;
                *next += 1;
                let renamed = subst_rec(
                    body,
                    *bound,
                    &Term::Var(fresh),
                    &BTreeSet::from([fresh]),
                    next,
                );
                Formula::exists(fresh, subst_rec(&renamed, v, by, by_vars, next))
            } else {
                Formula::exists(*bound, subst_rec(body, v, by, by_vars, next))
            }
        }
    }
}
