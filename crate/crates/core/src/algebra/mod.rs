//! Finite fields, `F_q[t]`, `F_q(t)`, truncated Laurent series and the exact
//! solvers used to certify existential statements over `F_q((t))`.

mod fq;
mod laurent;
mod newton;
mod poly;
mod ratfun;
mod solve;

pub use fq::{FiniteField, FpElem, FqElem, DEFAULT_MAX_ORDER};
pub use laurent::{LaurentApprox, Tri, EXACT};
pub use newton::newton_lift;
pub use poly::Poly;
pub use ratfun::{RatFun, Valuation};
pub use solve::{
    artin_schreier_or_square, solve_artin_schreier, solve_square, sqrt_fq, trace_to_prime,
    CertificateReason, SolvabilityCertificate,
};
