//! Existential sentences over F_q((t)): exact certificates where available,
//! bounded witness search otherwise.

use valued_fragments::formula::{parse_formula, Language};
use valued_fragments::models::{eval_sentence, SearchBudget, Structure};

fn main() {
    let budget = SearchBudget::default();
    let cases = [
        ("laurent:p=2,m=1", "E x0. x0 * x0 + x0 = w & O(x0)"),
        ("laurent:p=2,m=1", "E x0. x0 * x0 + x0 = w & !O(x0)"),
        ("laurent:p=3,m=1", "E x0. x0 * x0 = w"),
        ("laurent:p=3,m=1", "E x0. x0 * x0 = 1 + w"),
        ("laurent:p=2,m=2", "E x0. x0 * x0 + x0 + 1 = 0"),
        (
            "laurent:p=5,m=1",
            "E x0. E x1. x0 * x1 = w & O(x0) & O(x1) & x0 != x1",
        ),
    ];
    for (model, text) in cases {
        let s = Structure::parse(model).unwrap();
        let f = parse_formula(text, &Language::VAL).unwrap();
        let v = eval_sentence(&s, &f, &budget).unwrap();
        println!("{model:<16} {text}\n    {}: {}", v.outcome, v.evidence);
    }
}
