//! Concrete structures: finite fields in the ring language and `F_q((t))`
//! with `w = t` and `O = {v >= 0}`, evaluated exactly on `F_q(t)`-points.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{FiniteField, FqElem, LaurentApprox, RatFun, DEFAULT_MAX_ORDER};
use crate::error::ModelError;
use crate::formula::{Const, Formula, Term};

/// Default truncation order for series witnesses.
pub const DEFAULT_PRECISION: i64 = 64;

/// Bound on `q^k` for exhaustive search over `F_q`.
pub const DEFAULT_FQ_SEARCH_BOUND: u128 = 1 << 24;

/// Arithmetic and membership of one interpretation.
pub trait Semantics {
    type Elem: Clone + fmt::Debug;

    fn constant(&self, c: &Const) -> Result<Self::Elem, ModelError>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Total inverse with `0^-1 = 0`.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, ModelError>;
    fn is_zero(&self, a: &Self::Elem) -> Result<bool, ModelError>;
    fn in_o(&self, a: &Self::Elem) -> Result<bool, ModelError>;
}

pub type Assignment<E> = BTreeMap<usize, E>;

pub fn eval_term<S: Semantics>(
    s: &S,
    t: &Term,
    a: &Assignment<S::Elem>,
) -> Result<S::Elem, ModelError> {
    Ok(match t {
        Term::Var(i) => a.get(i).cloned().ok_or(ModelError::Unassigned(*i))?,
        Term::Const(c) => s.constant(c)?,
        Term::Add(x, y) => s.add(&eval_term(s, x, a)?, &eval_term(s, y, a)?),
        Term::Sub(x, y) => s.sub(&eval_term(s, x, a)?, &eval_term(s, y, a)?),
        Term::Mul(x, y) => s.mul(&eval_term(s, x, a)?, &eval_term(s, y, a)?),
        Term::Inv(x) => s.inv(&eval_term(s, x, a)?)?,
    })
}

pub fn eval_atom<S: Semantics>(
    s: &S,
    f: &Formula,
    a: &Assignment<S::Elem>,
) -> Result<bool, ModelError> {
    match f {
        Formula::Eq(x, y) => {
            let d = s.sub(&eval_term(s, x, a)?, &eval_term(s, y, a)?);
            s.is_zero(&d)
        }
        Formula::InO(x) => s.in_o(&eval_term(s, x, a)?),
        _ => Err(ModelError::NotQuantifierFree),
    }
}

pub fn eval_qf<S: Semantics>(
    s: &S,
    f: &Formula,
    a: &Assignment<S::Elem>,
) -> Result<bool, ModelError> {
    match f {
        Formula::Eq(..) | Formula::InO(_) => eval_atom(s, f, a),
        Formula::Not(x) => Ok(!eval_qf(s, x, a)?),
        Formula::And(x, y) => Ok(eval_qf(s, x, a)? && eval_qf(s, y, a)?),
        Formula::Or(x, y) => Ok(eval_qf(s, x, a)? || eval_qf(s, y, a)?),
        Formula::Exists(..) => Err(ModelError::NotQuantifierFree),
    }
}

/// A finite field read in the ring language without constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqModel {
    pub field: FiniteField,
}

impl Semantics for FqModel {
    type Elem = FqElem;

    fn constant(&self, c: &Const) -> Result<FqElem, ModelError> {
        match c {
            Const::Int(n) => Ok(self.field.from_int(*n)),
            Const::Uniformizer => Err(ModelError::NoUniformizer(self.field.to_string())),
        }
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a + b
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a - b
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a * b
    }

    fn inv(&self, _: &FqElem) -> Result<FqElem, ModelError> {
        Err(ModelError::NotInRingLanguage("inv"))
    }

    fn is_zero(&self, a: &FqElem) -> Result<bool, ModelError> {
        Ok(a.is_zero())
    }

    fn in_o(&self, _: &FqElem) -> Result<bool, ModelError> {
        Err(ModelError::NotInRingLanguage("O"))
    }
}

/// `F_q((t))` with `w = t`, evaluated on `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentModel {
    pub field: FiniteField,
    pub prec: i64,
}

impl Semantics for LaurentModel {
    type Elem = RatFun;

    fn constant(&self, c: &Const) -> Result<RatFun, ModelError> {
        Ok(match c {
            Const::Int(n) => RatFun::from_int(&self.field, *n),
            Const::Uniformizer => RatFun::t(&self.field),
        })
    }

    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.add(b)
    }

    fn sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.sub(b)
    }

    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a.mul(b)
    }

    fn inv(&self, a: &RatFun) -> Result<RatFun, ModelError> {
        Ok(a.inv_total())
    }

    fn is_zero(&self, a: &RatFun) -> Result<bool, ModelError> {
        Ok(a.is_zero())
    }

    fn in_o(&self, a: &RatFun) -> Result<bool, ModelError> {
        Ok(a.in_valuation_ring())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Fq(FqModel),
    Laurent(LaurentModel),
}

impl Structure {
    pub fn field(&self) -> &FiniteField {
        match self {
            Structure::Fq(m) => &m.field,
            Structure::Laurent(m) => &m.field,
        }
    }

    /// Reads `fq:p=<prime>,m=<nat>` or `laurent:p=<prime>,m=<nat>,prec=<nat>`.
    pub fn parse(descriptor: &str) -> Result<Structure, ModelError> {
        let unknown = || ModelError::UnknownDescriptor(descriptor.to_string());
        let (kind, rest) = descriptor.split_once(':').ok_or_else(unknown)?;
        let mut params = BTreeMap::new();
        for item in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(unknown)?;
            let v: u64 = v.trim().parse().map_err(|_| unknown())?;
            if params.insert(k.trim(), v).is_some() {
                return Err(unknown());
            }
        }
        let p = *params.get("p").ok_or_else(unknown)?;
        let m = params.get("m").copied().unwrap_or(1);
        let allowed: &[&str] = match kind {
            "fq" => &["p", "m"],
            "laurent" => &["p", "m", "prec"],
            _ => return Err(unknown()),
        };
        if params.keys().any(|k| !allowed.contains(k)) {
            return Err(unknown());
        }
        let p = u32::try_from(p).map_err(|_| unknown())?;
        let m = u32::try_from(m).map_err(|_| unknown())?;
        let field = FiniteField::with_bound(p, m, DEFAULT_MAX_ORDER)?;
        Ok(match kind {
            "fq" => Structure::Fq(FqModel { field }),
            _ => {
                let prec = params.get("prec").map_or(DEFAULT_PRECISION, |&v| v as i64);
                Structure::Laurent(LaurentModel { field, prec })
            }
        })
    }
}

impl FromStr for Structure {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Structure::parse(s)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        let (p, m) = (field.characteristic(), field.degree());
        match self {
            Structure::Fq(_) => write!(f, "fq:p={p},m={m}"),
            Structure::Laurent(l) => write!(f, "laurent:p={p},m={m},prec={}", l.prec),
        }
    }
}

/// Candidate space for witness search over `F_q(t)`: Laurent polynomials
/// with exponents in `[-low, high]` and at most `support` nonzero terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub low: i64,
    pub high: i64,
    pub support: usize,
    pub max_candidates: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            low: 2,
            high: 4,
            support: 4,
            max_candidates: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    True,
    False,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::True => "true",
            Outcome::False => "false",
            Outcome::Unknown => "unknown",
        })
    }
}

/// A witness coordinate: exact, or a series root known to some precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessValue {
    Fq(FqElem),
    Exact(RatFun),
    Series(LaurentApprox),
}

impl fmt::Display for WitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessValue::Fq(e) => write!(f, "{e}"),
            WitnessValue::Exact(r) => write!(f, "{r}"),
            WitnessValue::Series(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Values for the leading existential block, checked against the matrix.
    Witness(BTreeMap<usize, WitnessValue>),
    /// Every assignment of a finite structure was examined.
    Exhausted { assignments: u128 },
    /// An exact solvability criterion.
    Certificate(String),
    /// What was tried before giving up.
    Bounds(String),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Witness(w) => {
                f.write_str("witness")?;
                for (v, val) in w {
                    write!(f, " x{v}={val}")?;
                }
                Ok(())
            }
            Evidence::Exhausted { assignments } => {
                write!(f, "exhausted {assignments} assignments")
            }
            Evidence::Certificate(c) => write!(f, "certificate {c}"),
            Evidence::Bounds(b) => write!(f, "bounds {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn new(outcome: Outcome, evidence: Evidence) -> Self {
        Verdict { outcome, evidence }
    }

    pub fn unknown(why: impl Into<String>) -> Self {
        Verdict::new(Outcome::Unknown, Evidence::Bounds(why.into()))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.outcome)
    }
}

/// Decides a sentence: exhaustively in a finite field, by certified search
/// in `F_q((t))`.
pub fn eval_sentence(
    s: &Structure,
    f: &Formula,
    budget: &SearchBudget,
) -> Result<Verdict, ModelError> {
    if !f.is_sentence() {
        return Err(ModelError::NotASentence);
    }
    match s {
        Structure::Fq(m) => eval_sentence_fq(m, f, DEFAULT_FQ_SEARCH_BOUND),
        Structure::Laurent(m) => crate::decide::search_witness_laurent(f, &m.field, budget, m.prec),
    }
}

/// Exhaustive evaluation over `F_q`; `bound` caps `q^(number of quantifiers)`.
pub fn eval_sentence_fq(m: &FqModel, f: &Formula, bound: u128) -> Result<Verdict, ModelError> {
    let q = m.field.order() as u128;
    let k = f.quantifier_count() as u32;
    let size = q.checked_pow(k).unwrap_or(u128::MAX);
    if size > bound {
        return Err(ModelError::SearchSpaceExceeded { size, bound });
    }
    let elems: Vec<FqElem> = m.field.elements().collect();
    let mut a = Assignment::new();
    let mut visited = 0u128;
    let truth = fq_rec(m, f, &elems, &mut a, &mut visited)?;
    if !truth {
        return Ok(Verdict::new(
            Outcome::False,
            Evidence::Exhausted {
                assignments: visited,
            },
        ));
    }
    // witness for the leading block
    let mut prefix = Vec::new();
    let mut body = f;
    while let Formula::Exists(v, inner) = body {
        prefix.push(*v);
        body = inner;
    }
    if prefix.is_empty() {
        return Ok(Verdict::new(
            Outcome::True,
            Evidence::Exhausted {
                assignments: visited,
            },
        ));
    }
    let mut a = Assignment::new();
    let found = fq_prefix_witness(m, &prefix, body, &elems, &mut a, &mut visited)?;
    debug_assert!(found);
    let w = a
        .into_iter()
        .map(|(v, e)| (v, WitnessValue::Fq(e)))
        .collect();
    Ok(Verdict::new(Outcome::True, Evidence::Witness(w)))
}

fn fq_rec(
    m: &FqModel,
    f: &Formula,
    elems: &[FqElem],
    a: &mut Assignment<FqElem>,
    visited: &mut u128,
) -> Result<bool, ModelError> {
    Ok(match f {
        Formula::Eq(..) | Formula::InO(_) => {
            *visited += 1;
            eval_atom(m, f, a)?
        }
        Formula::Not(x) => !fq_rec(m, x, elems, a, visited)?,
        Formula::And(x, y) => fq_rec(m, x, elems, a, visited)? && fq_rec(m, y, elems, a, visited)?,
        Formula::Or(x, y) => fq_rec(m, x, elems, a, visited)? || fq_rec(m, y, elems, a, visited)?,
        Formula::Exists(v, body) => {
            let saved = a.get(v).cloned();
            let mut found = false;
            for e in elems {
                a.insert(*v, e.clone());
                if fq_rec(m, body, elems, a, visited)? {
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
    })
}

fn fq_prefix_witness(
    m: &FqModel,
    prefix: &[usize],
    body: &Formula,
    elems: &[FqElem],
    a: &mut Assignment<FqElem>,
    visited: &mut u128,
) -> Result<bool, ModelError> {
    let Some((&v, rest)) = prefix.split_first() else {
        return fq_rec(m, body, elems, a, visited);
    };
    for e in elems {
        a.insert(v, e.clone());
        if fq_prefix_witness(m, rest, body, elems, a, visited)? {
            return Ok(true);
        }
    }
    a.remove(&v);
    Ok(false)
}

/// Reads a constant of `F_q(t)`: integers, `t` (or `w`), the generator `a`
/// of `F_q` over `F_p`, `+ - * / ^` and parentheses.
pub fn parse_value(text: &str, field: &FiniteField) -> Result<RatFun, ModelError> {
    let mut p = ValueParser {
        text,
        chars: text.char_indices().peekable(),
        field,
    };
    let v = p.expr()?;
    p.skip_ws();
    if let Some(&(i, c)) = p.chars.peek() {
        return Err(p.error(format!("unexpected {c:?} at {i}")));
    }
    Ok(v)
}

/// As [`parse_value`], but the result must lie in `F_q`.
pub fn parse_fq_value(text: &str, field: &FiniteField) -> Result<FqElem, ModelError> {
    parse_value(text, field)?
        .as_constant()
        .ok_or_else(|| ModelError::BadValue {
            text: text.to_string(),
            message: "not an element of the finite field".into(),
        })
}

struct ValueParser<'a> {
    text: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    field: &'a FiniteField,
}

impl ValueParser<'_> {
    fn error(&self, message: String) -> ModelError {
        ModelError::BadValue {
            text: self.text.to_string(),
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.chars.peek().is_some_and(|&(_, c)| c == want) {
            self.chars.next();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFun, ModelError> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<RatFun, ModelError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc
                    .div(&d)
                    .map_err(|_| self.error("division by zero".into()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, ModelError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let e = self.integer()?;
            let e = if negative { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(self.error("division by zero".into()));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i64, ModelError> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        digits
            .parse()
            .map_err(|_| self.error("expected an integer".into()))
    }

    fn atom(&mut self) -> Result<RatFun, ModelError> {
        self.skip_ws();
        match self.chars.peek().copied() {
            Some((_, '(')) => {
                self.chars.next();
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'".into()));
                }
                Ok(v)
            }
            Some((_, 't' | 'w')) => {
                self.chars.next();
                Ok(RatFun::t(self.field))
            }
            Some((_, 'a')) => {
                self.chars.next();
                Ok(RatFun::constant(&self.field.generator()))
            }
            Some((_, c)) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFun::from_int(self.field, n))
            }
            Some((i, c)) => Err(self.error(format!("unexpected {c:?} at {i}"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Language};

    fn laurent(p: u32) -> LaurentModel {
        LaurentModel {
            field: FiniteField::new(p, 1).unwrap(),
            prec: DEFAULT_PRECISION,
        }
    }

    #[test]
    fn term_examples() {
        let m = laurent(2);
        let a = Assignment::new();
        assert!(eval_term(&m, &Term::inv(Term::zero()), &a)
            .unwrap()
            .is_zero());
        let mut b = Assignment::new();
        b.insert(0, RatFun::t(&m.field).inv().unwrap());
        let v = eval_term(&m, &Term::mul(Term::uniformizer(), Term::var(0)), &b).unwrap();
        assert!(v.is_one());
        let fq = FqModel {
            field: m.field.clone(),
        };
        assert!(eval_term(&fq, &Term::int(2), &Assignment::new())
            .unwrap()
            .is_zero());
        assert!(matches!(
            eval_term(&fq, &Term::uniformizer(), &Assignment::new()),
            Err(ModelError::NoUniformizer(_))
        ));
    }

    #[test]
    fn qf_examples() {
        let m = laurent(3);
        let a = Assignment::new();
        let read = |s: &str| parse_formula(s, &Language::VAL).unwrap();
        assert!(eval_qf(&m, &read("O(w)"), &a).unwrap());
        let pole = Formula::in_o(Term::inv(Term::uniformizer()));
        assert!(!eval_qf(&m, &pole, &a).unwrap());
        assert!(eval_qf(&m, &read("(w + 1) * (w - 1) = w * w - 1"), &a).unwrap());
        let mut z = Assignment::new();
        z.insert(0, RatFun::zero(&m.field));
        assert!(!eval_qf(&m, &read("!O(x0)"), &z).unwrap());
    }

    #[test]
    fn finite_field_sentences() {
        let f = parse_formula("E x0. x0 * x0 + x0 + 1 = 0", &Language::RING).unwrap();
        let budget = SearchBudget::default();
        let f2 = Structure::parse("fq:p=2,m=1").unwrap();
        let f4 = Structure::parse("fq:p=2,m=2").unwrap();
        assert_eq!(
            eval_sentence(&f2, &f, &budget).unwrap().outcome,
            Outcome::False
        );
        let v = eval_sentence(&f4, &f, &budget).unwrap();
        assert_eq!(v.outcome, Outcome::True);
        assert!(matches!(v.evidence, Evidence::Witness(_)));
        let g = parse_formula("E x0. x0 = x0", &Language::RING).unwrap();
        let v = eval_sentence(&f2, &g, &budget).unwrap();
        let Evidence::Witness(w) = v.evidence else {
            panic!()
        };
        assert_eq!(
            w[&0],
            WitnessValue::Fq(FiniteField::new(2, 1).unwrap().zero())
        );
    }

    #[test]
    fn descriptors() {
        assert_eq!(
            Structure::parse("laurent:p=2,m=1,prec=64")
                .unwrap()
                .to_string(),
            "laurent:p=2,m=1,prec=64"
        );
        assert!(matches!(
            Structure::parse("padic:p=2"),
            Err(ModelError::UnknownDescriptor(_))
        ));
        assert!(matches!(
            Structure::parse("fq:p=2,m=1,prec=3"),
            Err(ModelError::UnknownDescriptor(_))
        ));
        assert!(Structure::parse("fq:p=4,m=1").is_err());
    }

    #[test]
    fn values() {
        let f = FiniteField::new(2, 1).unwrap();
        let v = parse_value("(t^2+1)/t", &f).unwrap();
        assert_eq!(v.valuation().finite(), Some(-1));
        assert_eq!(parse_value("t^-2", &f).unwrap(), RatFun::t(&f).pow(-2));
        assert!(parse_value("1/0", &f).is_err());
        assert!(parse_value("t +", &f).is_err());
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(parse_fq_value("a", &f4).unwrap(), f4.generator());
        assert!(parse_fq_value("t", &f4).is_err());
    }
}
