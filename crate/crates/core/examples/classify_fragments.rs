//! Fragment indices of a few formulas, and the gate on negated quantifiers.

use valued_fragments::formula::{classify_fragment, parse_formula, Language};

fn main() {
    let samples = [
        "x0 = 0",
        "E x0. E x1. x0 * x1 = 1",
        "E x0. x0 = 0 & (E x1. x1 * x1 = x0) & (E x1. O(x1))",
        "E x0. (E x1. x0 = x1) | O(x0)",
        "!(E x0. x0 = 1)",
    ];
    for text in samples {
        let f = parse_formula(text, &Language::VAL).expect("sample parses");
        println!("{:<55} {}", text, classify_fragment(&f));
    }
}
