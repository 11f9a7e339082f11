//! The membership bundle with exponent `n` accepts `(0, 1/t)` although
//! `1/t` has negative valuation; exponent `n + 1` does not.

use valued_fragments::algebra::{artin_schreier_or_square, FiniteField, RatFun};
use valued_fragments::formula::{print_formula, Term};
use valued_fragments::models::{eval_term, Assignment, LaurentModel};
use valued_fragments::translate::{bundle, eta, EtaVariant};

fn main() {
    let field = FiniteField::new(2, 1).unwrap();
    let model = LaurentModel {
        field: field.clone(),
        prec: 64,
    };
    let point: Assignment<RatFun> = [
        (1, RatFun::zero(&field)),
        (2, RatFun::t(&field).inv().unwrap()),
    ]
    .into();
    let xs = [Term::var(1), Term::var(2)];
    for variant in [EtaVariant::PaperLiteral, EtaVariant::Corrected] {
        let s = eval_term(&model, &bundle(&xs, variant), &point).unwrap();
        // eta holds iff z^2 + z = w * s^2 has a root
        let c = RatFun::t(&field).mul(&s).mul(&s);
        let holds = artin_schreier_or_square(&field, &c, 32).unwrap().solvable;
        println!("{variant:?}: {}", print_formula(&eta(2, variant)));
        println!("  bundle at (0, 1/t) = {s}, eta holds: {holds}");
    }
    println!("O(0) & O(1/t) holds: false");
}
