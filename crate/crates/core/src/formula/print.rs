use super::{Const, Formula, Term};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum FLevel {
    Formula,
    Disj,
    Conj,
    Lit,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum TLevel {
    Sum,
    Product,
    Unary,
}

/// Renders `f` so that [`parse_formula`](super::parse_formula) gives back the
/// same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, FLevel::Formula, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, TLevel::Sum, &mut out);
    out
}

fn parens(out: &mut String, wrap: bool, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}

fn write_formula(f: &Formula, level: FLevel, out: &mut String) {
    match f {
        Formula::Eq(a, b) => {
            write_term(a, TLevel::Sum, out);
            out.push_str(" = ");
            write_term(b, TLevel::Sum, out);
        }
        Formula::InO(a) => {
            out.push_str("O(");
            write_term(a, TLevel::Sum, out);
            out.push(')');
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(a, b) => {
                write_term(a, TLevel::Sum, out);
                out.push_str(" != ");
                write_term(b, TLevel::Sum, out);
            }
            other => {
                out.push('!');
                write_formula(other, FLevel::Lit, out);
            }
        },
        Formula::And(a, b) => parens(out, level > FLevel::Conj, |out| {
            write_formula(a, FLevel::Conj, out);
            out.push_str(" & ");
            write_formula(b, FLevel::Lit, out);
        }),
        Formula::Or(a, b) => parens(out, level > FLevel::Disj, |out| {
            write_formula(a, FLevel::Disj, out);
            out.push_str(" | ");
            write_formula(b, FLevel::Conj, out);
        }),
        Formula::Exists(v, body) => parens(out, level > FLevel::Formula, |out| {
            out.push_str(&format!("E x{v}. "));
            write_formula(body, FLevel::Formula, out);
        }),
    }
}

fn write_term(t: &Term, level: TLevel, out: &mut String) {
    match t {
        Term::Var(i) => out.push_str(&format!("x{i}")),
        Term::Const(Const::Int(n)) => out.push_str(&n.to_string()),
        Term::Const(Const::Uniformizer) => out.push('w'),
        Term::Add(a, b) | Term::Sub(a, b) => parens(out, level > TLevel::Sum, |out| {
            write_term(a, TLevel::Sum, out);
            out.push_str(if matches!(t, Term::Add(..)) {
                " + "
            } else {
                " - "
            });
            write_term(b, TLevel::Product, out);
        }),
        Term::Mul(a, b) => parens(out, level > TLevel::Product, |out| {
            write_term(a, TLevel::Product, out);
            out.push_str(" * ");
            write_term(b, TLevel::Unary, out);
        }),
        Term::Inv(a) => {
            out.push_str("inv(");
            write_term(a, TLevel::Sum, out);
            out.push(')');
        }
    }
}
