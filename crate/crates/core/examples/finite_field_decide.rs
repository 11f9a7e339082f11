//! Existential sentences over small finite fields, by exhaustive search.

use valued_fragments::algebra::FiniteField;
use valued_fragments::decide::decide_exists_fq;
use valued_fragments::formula::{parse_formula, Language};

fn main() {
    let sentences = [
        "E x0. x0 * x0 + x0 + 1 = 0",
        "E x0. x0 * x0 * x0 * x0 != x0",
        "E x0. E x1. x0 * x0 + x1 * x1 + 1 = 0",
    ];
    for (p, m) in [(2, 1), (2, 2), (3, 1), (2, 3)] {
        let field = FiniteField::new(p, m).unwrap();
        for s in sentences {
            let f = parse_formula(s, &Language::RING).unwrap();
            println!(
                "{field:<6} {s:<40} {}",
                decide_exists_fq(&f, &field).unwrap()
            );
        }
    }
}
