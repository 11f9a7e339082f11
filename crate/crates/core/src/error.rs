use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("F_{p}^{m} exceeds the configured order bound {bound}")]
    FieldTooLarge { p: u64, m: u32, bound: u64 },
    #[error("modulus must be monic with coefficients reduced mod p")]
    InvalidModulus,
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("operation requires characteristic 2, got {0}")]
    NeedsCharTwo(u32),
    #[error("operation requires odd characteristic")]
    NeedsOddChar,
    #[error("division by zero")]
    DivisionByZero,
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NonSquareSystem { equations: usize, unknowns: usize },
    #[error("term is not polynomial: {0}")]
    NotPolynomial(String),
    #[error("value is not known to enough precision")]
    InsufficientPrecision,
}

/// Syntax or language violation while reading a formula.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("{token} at {pos} is not admitted by the {language} language")]
    NotAdmitted {
        pos: usize,
        token: String,
        language: String,
    },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::NotAdmitted { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("formula contains a quantifier")]
    Quantified,
    #[error("negation above a quantifier is outside every supported fragment")]
    NegatedQuantifier,
    #[error("disjunctive normal form exceeds {limit} clauses")]
    TooManyClauses { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("input is not an existential prenex formula with a quantifier-free matrix")]
    NotInFragment,
    #[error("formula contains a quantifier")]
    Quantified,
    #[error("membership predicate is not part of the field language")]
    MembershipInField,
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the uniformizer is not interpreted in {0}")]
    NoUniformizer(String),
    #[error("{0} is not interpreted in a finite-field model")]
    NotInRingLanguage(&'static str),
    #[error("variable x{0} is not assigned")]
    Unassigned(usize),
    #[error("unknown model descriptor {0:?}")]
    UnknownDescriptor(String),
    #[error("bad value {text:?}: {message}")]
    BadValue { text: String, message: String },
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("formula has free variables")]
    NotASentence,
    #[error("search space of {size} assignments exceeds the bound {bound}")]
    SearchSpaceExceeded { size: u128, bound: u128 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
