#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use valued_fragments::algebra::{FiniteField, FqElem, Poly, RatFun};
use valued_fragments::formula::{Const, Formula, Term};

/// Textbook evaluator over a finite field: quantifiers by enumeration,
/// inverses by search, `0^-1 = 0`. Shares nothing with the library's models
/// beyond the element arithmetic.
pub struct Naive<'a> {
    pub field: &'a FiniteField,
    elems: Vec<FqElem>,
}

impl<'a> Naive<'a> {
    pub fn new(field: &'a FiniteField) -> Self {
        Naive {
            field,
            elems: field.elements().collect(),
        }
    }

    pub fn elements(&self) -> &[FqElem] {
        &self.elems
    }

    pub fn term(&self, t: &Term, a: &BTreeMap<usize, FqElem>) -> FqElem {
        match t {
            Term::Var(i) => a[i].clone(),
            Term::Const(Const::Int(n)) => {
                let one = self.field.one();
                let mut acc = self.field.zero();
                for _ in 0..n.unsigned_abs() {
                    acc = &acc + &one;
                }
                if *n < 0 {
                    -acc
                } else {
                    acc
                }
            }
            Term::Const(Const::Uniformizer) => panic!("no uniformizer in a finite field"),
            Term::Add(x, y) => &self.term(x, a) + &self.term(y, a),
            Term::Sub(x, y) => &self.term(x, a) - &self.term(y, a),
            Term::Mul(x, y) => &self.term(x, a) * &self.term(y, a),
            Term::Inv(x) => {
                let v = self.term(x, a);
                let one = self.field.one();
                self.elems
                    .iter()
                    .find(|y| &v * *y == one)
                    .cloned()
                    .unwrap_or_else(|| self.field.zero())
            }
        }
    }

    pub fn holds(&self, f: &Formula, a: &mut BTreeMap<usize, FqElem>) -> bool {
        match f {
            Formula::Eq(x, y) => self.term(x, a) == self.term(y, a),
            Formula::InO(_) => panic!("no valuation on a finite field"),
            Formula::Not(g) => !self.holds(g, a),
            Formula::And(g, h) => self.holds(g, a) && self.holds(h, a),
            Formula::Or(g, h) => self.holds(g, a) || self.holds(h, a),
            Formula::Exists(v, g) => {
                let saved = a.get(v).cloned();
                let mut found = false;
                for e in &self.elems {
                    a.insert(*v, e.clone());
                    if self.holds(g, a) {
                        found = true;
                        break;
                    }
                }
                match saved {
                    Some(s) => a.insert(*v, s),
                    None => a.remove(v),
                };
                found
            }
        }
    }

    /// Every assignment of `vars` variables `x0..`.
    pub fn assignments(&self, vars: usize) -> Vec<BTreeMap<usize, FqElem>> {
        let mut out = vec![BTreeMap::new()];
        for v in 0..vars {
            out = out
                .into_iter()
                .flat_map(|a| {
                    self.elems.iter().map(move |e| {
                        let mut b = a.clone();
                        b.insert(v, e.clone());
                        b
                    })
                })
                .collect();
        }
        out
    }
}

pub fn fields(list: &[(u32, u32)]) -> Vec<FiniteField> {
    list.iter()
        .map(|&(p, m)| FiniteField::new(p, m).unwrap())
        .collect()
}

/// Fields of order at most 16.
pub fn small_fields() -> Vec<FiniteField> {
    fields(&[
        (2, 1),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (2, 3),
        (3, 2),
        (11, 1),
        (13, 1),
        (2, 4),
    ])
}

pub fn random_elem(rng: &mut impl Rng, field: &FiniteField) -> FqElem {
    field.elem(rng.gen_range(0..field.order()))
}

fn random_poly(rng: &mut impl Rng, field: &FiniteField, degree: usize) -> Poly {
    let coeffs: Vec<FqElem> = (0..=degree).map(|_| random_elem(rng, field)).collect();
    Poly::from_coeffs(field, &coeffs)
}

/// `t^v * u` with `u` a unit of `F_q[[t]] ∩ F_q(t)`.
pub fn random_with_valuation(rng: &mut impl Rng, field: &FiniteField, v: i64) -> RatFun {
    let unit = |rng: &mut _| loop {
        let p = random_poly(rng, field, 2);
        if !p.coeff(0).is_zero() {
            return p;
        }
    };
    let num = unit(rng);
    let den = if rng.gen_bool(0.5) {
        Poly::one(field)
    } else {
        unit(rng)
    };
    RatFun::new(num, den)
        .unwrap()
        .mul(&RatFun::monomial(&field.one(), v))
}

/// Zero with probability `1/10`, otherwise valuation uniform in `[lo, hi]`.
pub fn random_ratfun(rng: &mut impl Rng, field: &FiniteField, lo: i64, hi: i64) -> RatFun {
    if rng.gen_bool(0.1) {
        RatFun::zero(field)
    } else {
        let v = rng.gen_range(lo..=hi);
        random_with_valuation(rng, field, v)
    }
}

/// Which symbols a generated formula may use.
#[derive(Clone, Copy, Debug)]
pub struct Vocabulary {
    pub vars: usize,
    pub inverse: bool,
    pub membership: bool,
    pub uniformizer: bool,
}

pub fn term_strategy(voc: Vocabulary) -> BoxedStrategy<Term> {
    let mut leaves: Vec<BoxedStrategy<Term>> = vec![
        (0..voc.vars).prop_map(Term::var).boxed(),
        (-3i64..=3).prop_map(Term::int).boxed(),
    ];
    if voc.uniformizer {
        leaves.push(Just(Term::uniformizer()).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves);
    leaf.prop_recursive(3, 16, 2, move |inner| {
        let mut ops: Vec<BoxedStrategy<Term>> = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::add(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::sub(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::mul(a, b))
                .boxed(),
        ];
        if voc.inverse {
            ops.push(inner.prop_map(Term::inv).boxed());
        }
        proptest::strategy::Union::new(ops)
    })
    .boxed()
}

pub fn qf_strategy(voc: Vocabulary) -> BoxedStrategy<Formula> {
    let t = term_strategy(voc);
    let mut atoms: Vec<BoxedStrategy<Formula>> = vec![(t.clone(), t.clone())
        .prop_map(|(a, b)| Formula::eq(a, b))
        .boxed()];
    if voc.membership {
        atoms.push(t.prop_map(Formula::in_o).boxed());
    }
    proptest::strategy::Union::new(atoms)
        .prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
            ]
        })
        .boxed()
}

/// Arbitrary formulas, quantifiers and negations anywhere.
pub fn formula_strategy(voc: Vocabulary) -> BoxedStrategy<Formula> {
    let vars = voc.vars;
    qf_strategy(voc)
        .prop_recursive(3, 16, 2, move |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (0..vars, inner).prop_map(|(v, b)| Formula::exists(v, b)),
            ]
        })
        .boxed()
}
