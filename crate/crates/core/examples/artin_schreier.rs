//! Solving `z^2 + z = c` over F_2((t)) and F_4((t)), and `y^2 = d` over F_3((t)).

use valued_fragments::algebra::{solve_artin_schreier, solve_square, FiniteField, RatFun};
use valued_fragments::models::parse_value;

fn main() {
    let f2 = FiniteField::new(2, 1).unwrap();
    let f4 = FiniteField::new(2, 2).unwrap();
    for (field, text) in [
        (&f2, "t"),
        (&f2, "1"),
        (&f4, "1"),
        (&f2, "1/t"),
        (&f2, "1/t^2"),
        (&f2, "t^2 + t"),
    ] {
        let c = parse_value(text, field).unwrap();
        let cert = solve_artin_schreier(&c, 16).unwrap();
        print!(
            "{field}: z^2 + z = {text:<8} solvable={} ({:?})",
            cert.solvable, cert.reason
        );
        if let Some(z) = cert.witness {
            print!("  z = {z}");
        }
        println!();
    }

    let f3 = FiniteField::new(3, 1).unwrap();
    for text in ["1 + t", "2", "t", "t^2 + 2*t + 1"] {
        let d: RatFun = parse_value(text, &f3).unwrap();
        let cert = solve_square(&d, 12).unwrap();
        println!(
            "F_3: y^2 = {text:<14} solvable={} ({:?})",
            cert.solvable, cert.reason
        );
    }
}
