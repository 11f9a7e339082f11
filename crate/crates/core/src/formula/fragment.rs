//! Syntactic membership in the existential fragments.
//!
//! * `∃_n`: `∃x_1..x_m ψ` with `m <= n` and `ψ` quantifier-free.
//! * `∃_n∃_1`: `∃x_1..x_m ψ` with `m <= n` and `ψ` a positive boolean
//!   combination of formulas `η` or `∃y η`, `η` quantifier-free.
//! * `∃^n`: `∃^0` is quantifier-free; `∃^n` is `ψ` or `∃x ψ` with `ψ` a
//!   positive boolean combination of `∃^{n-1}` formulas. The index reported
//!   is for the fragment, so positive combinations of `∃^n` formulas stay at `n`.
//!
//! Negation is only allowed inside the quantifier-free layer. No formula is
//! simplified before it is classified.

use std::fmt;

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FragmentClass {
    pub is_qf: bool,
    /// Least `n` with the formula in `∃_n`.
    pub en_index: Option<usize>,
    /// Least `n` with the formula in `∃_n∃_1`.
    pub ene1_index: Option<usize>,
    /// Least `n` with the formula in `∃^n`.
    pub eup_index: Option<usize>,
}

impl fmt::Display for FragmentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |o: Option<usize>| o.map_or("-".to_string(), |n| n.to_string());
        write!(
            f,
            "en={} ene1={} eup={} qf={}",
            show(self.en_index),
            show(self.ene1_index),
            show(self.eup_index),
            self.is_qf
        )
    }
}

pub fn classify_fragment(f: &Formula) -> FragmentClass {
    let is_qf = f.is_quantifier_free();

    let mut prefix: usize = 0;
    let mut body = f;
    while let Formula::Exists(_, inner) = body {
        prefix += 1;
        body = inner;
    }

    let en_index = body.is_quantifier_free().then_some(prefix);

    let ene1_index = if body.is_quantifier_free() {
        Some(prefix.saturating_sub(1))
    } else if in_exists_one(body) {
        Some(prefix)
    } else {
        None
    };

    FragmentClass {
        is_qf,
        en_index,
        ene1_index,
        eup_index: rank(f),
    }
}

/// Positive combination of `η` and `∃y η`.
fn in_exists_one(f: &Formula) -> bool {
    match f {
        _ if f.is_quantifier_free() => true,
        Formula::Exists(_, body) => body.is_quantifier_free(),
        Formula::And(a, b) | Formula::Or(a, b) => in_exists_one(a) && in_exists_one(b),
        _ => false,
    }
}

/// Least `n` with `f` in the `∃^n` fragment, which is closed under positive
/// combinations.
fn rank(f: &Formula) -> Option<usize> {
    if f.is_quantifier_free() {
        return Some(0);
    }
    match f {
        Formula::Exists(_, body) => rank(body).map(|k| k + 1),
        Formula::And(a, b) | Formula::Or(a, b) => Some(rank(a)?.max(rank(b)?)),
        _ => None,
    }
}
