//! Existential formulas over valued fields of Laurent series: parsing,
//! fragment classification, translations into the ring language, exact
//! arithmetic in `F_q(t)` and `F_q((t))`, and desk-scale decision procedures.

pub mod algebra;
pub mod cli;
pub mod decide;
pub mod error;
pub mod formula;
pub mod models;
pub mod normalize;
pub mod translate;
