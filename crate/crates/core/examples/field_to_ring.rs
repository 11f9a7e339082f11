//! Inverse elimination, checked at every point of F_5^2 (taken as constants
//! of F_5((t)), where the total inverse is interpreted).

use valued_fragments::algebra::{FiniteField, RatFun};
use valued_fragments::formula::{parse_formula, print_formula, Language};
use valued_fragments::models::{eval_qf, Assignment, LaurentModel};
use valued_fragments::translate::field_to_ring;

fn main() {
    let model = LaurentModel {
        field: FiniteField::new(5, 1).unwrap(),
        prec: 16,
    };
    for text in [
        "inv(x0) = x1",
        "inv(inv(x0)) = x0",
        "inv(x0 + inv(x1)) != 1",
    ] {
        let f = parse_formula(text, &Language::FIELD).unwrap();
        let g = field_to_ring(&f).unwrap();
        let mut agree = 0;
        for a in model.field.elements() {
            for b in model.field.elements() {
                let point: Assignment<_> =
                    [(0, RatFun::constant(&a)), (1, RatFun::constant(&b))].into();
                if eval_qf(&model, &f, &point).unwrap() == eval_qf(&model, &g, &point).unwrap() {
                    agree += 1;
                }
            }
        }
        println!(
            "{text}\n  -> {}\n  agrees at {agree}/25 points of F_5^2",
            print_formula(&g)
        );
    }
}
