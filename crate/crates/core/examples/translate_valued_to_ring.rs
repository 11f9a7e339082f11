//! Valued-field formulas rewritten into the ring language with one extra
//! existential quantifier.

use valued_fragments::formula::Term;
use valued_fragments::formula::{classify_fragment, parse_formula, print_formula, Language};
use valued_fragments::translate::{o_def, val_to_ring};

fn main() {
    println!(
        "O(x0) is defined by  {}",
        print_formula(&o_def(&Term::var(0)))
    );
    for text in [
        "O(x0)",
        "!O(x0)",
        "E x0. O(x0) & x0 * x0 = w + 1",
        "E x0. E x1. O(x0) & !O(x1) | x0 = x1",
    ] {
        let f = parse_formula(text, &Language::VAL).unwrap();
        let g = val_to_ring(&f).unwrap();
        let (n, m) = (
            classify_fragment(&f).en_index,
            classify_fragment(&g).en_index,
        );
        println!();
        println!("{text}");
        println!("  -> {}", print_formula(&g));
        println!("  quantifiers {:?} -> {:?}", n.unwrap(), m.unwrap());
    }
}
