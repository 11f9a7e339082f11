//! `F_{p^m}` embeds in `F_{p^n}` iff `m | n`; compared with the one-variable
//! sentences `E x. P(x) = 0` for irreducible `P` of degree `m`.

use valued_fragments::algebra::FiniteField;
use valued_fragments::decide::{decide_exists_fq, embedding_exists};
use valued_fragments::formula::{Formula, Term};

fn minimal_polynomial_sentence(p: u32, m: u32) -> Formula {
    let modulus = FiniteField::new(p, m).unwrap().modulus().to_vec();
    let x = Term::var(0);
    let mut lhs = Term::zero();
    for (k, &c) in modulus.iter().enumerate() {
        if c != 0 {
            let mono = Term::mul(Term::int(c as i64), Term::pow(&x, k as u32));
            lhs = Term::add(lhs, mono);
        }
    }
    Formula::exists(0, Formula::eq(lhs, Term::zero()))
}

fn main() {
    for p in [2, 3] {
        for m in 1..=3 {
            for n in 1..=3 {
                let big = FiniteField::new(p, n).unwrap();
                let root = decide_exists_fq(&minimal_polynomial_sentence(p, m), &big).unwrap();
                println!(
                    "p={p} m={m} n={n}: embeds={} root found={root}",
                    embedding_exists(p, m, n)
                );
            }
        }
    }
}
