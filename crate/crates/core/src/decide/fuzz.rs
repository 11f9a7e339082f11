//! Random differential testing of the valued-to-ring translation.
//!
//! Each case draws a quantifier-free valued-field formula `f` and a point of
//! `F_q(t)`. The left side is `f` evaluated directly; the right side is the
//! single existential of the translation, decided exactly at that point.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{FiniteField, Poly, RatFun};
use crate::formula::{print_formula, Formula, Term};
use crate::models::{eval_qf, Assignment, LaurentModel, SearchBudget, DEFAULT_PRECISION};
use crate::translate::{val_to_ring_with, EtaVariant, TranslateOptions};

use super::univariate::{ClauseVerdict, Univariate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    /// Total random cases, dealt round-robin over `fields`.
    pub cases: usize,
    /// `(p, m)` for each `F_{p^m}`.
    pub fields: Vec<(u32, u32)>,
    pub max_depth: usize,
    pub max_vars: usize,
    pub max_atoms: usize,
    pub eta: EtaVariant,
    /// Adds the point `(0, t^-1)` for `O(x0) & O(x1)` in every field, ahead
    /// of the random cases.
    pub pin_boundary: bool,
    pub prec: i64,
    pub budget: SearchBudget,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            cases: 1000,
            fields: vec![(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)],
            max_depth: 3,
            max_vars: 4,
            max_atoms: 4,
            eta: EtaVariant::Corrected,
            pin_boundary: false,
            prec: DEFAULT_PRECISION,
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseStatus {
    Agree,
    Disagree,
    Unknown,
}

impl fmt::Display for CaseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseStatus::Agree => "agree",
            CaseStatus::Disagree => "disagree",
            CaseStatus::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzRecord {
    pub case: usize,
    pub seed: u64,
    pub field: String,
    pub formula: String,
    pub assignment: String,
    pub lhs: bool,
    /// `None` when the translated side was not decided.
    pub rhs: Option<bool>,
    pub status: CaseStatus,
    pub note: String,
}

impl FuzzRecord {
    fn fields(&self) -> [String; 8] {
        [
            self.case.to_string(),
            self.seed.to_string(),
            self.field.clone(),
            self.formula.clone(),
            self.assignment.clone(),
            self.lhs.to_string(),
            self.rhs.map_or("unknown".to_string(), |b| b.to_string()),
            self.status.to_string(),
        ]
    }

    pub fn to_line(&self) -> String {
        let [case, seed, field, formula, assignment, lhs, rhs, status] = self.fields();
        format!(
            "case={case} seed={seed} field={field} formula={formula:?} assignment={assignment:?} lhs={lhs} rhs={rhs} status={status}"
        )
    }

    pub fn to_tsv(&self) -> String {
        self.fields().join("\t")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<FuzzRecord>,
}

impl Report {
    pub fn total(&self) -> usize {
        self.records.len()
    }

    fn count(&self, s: CaseStatus) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn agree(&self) -> usize {
        self.count(CaseStatus::Agree)
    }

    pub fn disagree(&self) -> usize {
        self.count(CaseStatus::Disagree)
    }

    pub fn unknown(&self) -> usize {
        self.count(CaseStatus::Unknown)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &FuzzRecord> {
        self.records
            .iter()
            .filter(|r| r.status == CaseStatus::Disagree)
    }

    /// `"<agree>/<total> agree"`.
    pub fn summary(&self) -> String {
        format!("{}/{} agree", self.agree(), self.total())
    }

    pub const TSV_HEADER: &'static str = "case\tseed\tfield\tformula\tassignment\tlhs\trhs\tstatus";
}

fn case_seed(seed: u64, case: usize) -> u64 {
    // splitmix64
    let mut z = seed
        ^ (case as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_term(rng: &mut impl Rng, depth: usize, vars: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        let r: f64 = rng.gen();
        return if r < 0.6 {
            Term::var(rng.gen_range(0..vars))
        } else if r < 0.85 {
            Term::int(rng.gen_range(-2..=2))
        } else {
            Term::uniformizer()
        };
    }
    let r: f64 = rng.gen();
    let mut sub = || random_term(rng, depth - 1, vars);
    if r < 0.3 {
        Term::add(sub(), sub())
    } else if r < 0.5 {
        Term::sub(sub(), sub())
    } else {
        Term::mul(sub(), sub())
    }
}

fn random_atom(rng: &mut impl Rng, depth: usize, vars: usize) -> Formula {
    let r: f64 = rng.gen();
    let mut term = || random_term(rng, depth, vars);
    if r < 0.4 {
        Formula::eq(term(), term())
    } else if r < 0.6 {
        Formula::neq(term(), term())
    } else if r < 0.8 {
        Formula::in_o(term())
    } else {
        Formula::not(Formula::in_o(term()))
    }
}

/// A quantifier-free valued-field formula in `x0..x{vars-1}`: a random
/// and/or tree over `1..=max_atoms` atoms with occasional negations.
pub fn random_formula(rng: &mut impl Rng, cfg: &FuzzConfig, vars: usize) -> Formula {
    let n = rng.gen_range(1..=cfg.max_atoms.max(1));
    let mut parts: Vec<Formula> = (0..n)
        .map(|_| random_atom(rng, cfg.max_depth, vars))
        .collect();
    while parts.len() > 1 {
        let i = rng.gen_range(0..parts.len() - 1);
        let a = parts.remove(i);
        let b = parts.remove(i);
        let mut g = if rng.gen_bool(0.5) {
            Formula::and(a, b)
        } else {
            Formula::or(a, b)
        };
        if rng.gen_bool(0.1) {
            g = Formula::not(g);
        }
        parts.insert(i, g);
    }
    parts.pop().unwrap()
}

fn random_poly(rng: &mut impl Rng, field: &FiniteField, max_degree: usize) -> Poly {
    let elems: Vec<_> = field.elements().collect();
    loop {
        let d = rng.gen_range(0..=max_degree);
        let coeffs: Vec<_> = (0..=d)
            .map(|_| elems.choose(rng).unwrap().clone())
            .collect();
        let p = Poly::from_coeffs(field, &coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random element of `F_q(t)`: zero with probability 0.15, otherwise
/// `t^k n/d` with `k ∈ [-3, 3]`, `deg n <= 3`, `deg d <= 2` and `n(0) d(0) ≠ 0`
/// most of the time.
pub fn random_value(rng: &mut impl Rng, field: &FiniteField) -> RatFun {
    if rng.gen_bool(0.15) {
        return RatFun::zero(field);
    }
    let k = rng.gen_range(-3..=3);
    let num = random_poly(rng, field, 3);
    let den = if rng.gen_bool(0.5) {
        Poly::one(field)
    } else {
        random_poly(rng, field, 2)
    };
    RatFun::new(num, den)
        .unwrap()
        .mul(&RatFun::monomial(&field.one(), k))
}

fn render_assignment(a: &Assignment<RatFun>) -> String {
    a.iter()
        .map(|(v, r)| format!("x{v}={r}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Decides the translation of `f` at `a`.
fn translated_truth(
    model: &LaurentModel,
    f: &Formula,
    a: &Assignment<RatFun>,
    cfg: &FuzzConfig,
) -> Result<bool, String> {
    let options = TranslateOptions {
        eta: cfg.eta,
        ..TranslateOptions::default()
    };
    let g = val_to_ring_with(f, &options).map_err(|e| e.to_string())?;
    let Formula::Exists(z, matrix) = g else {
        return Err("translation lacks its witness quantifier".into());
    };
    let u = Univariate {
        model,
        var: z,
        base: a,
        budget: &cfg.budget,
    };
    match u.decide_formula(&matrix).map_err(|e| e.to_string())? {
        ClauseVerdict::True(_) => Ok(true),
        ClauseVerdict::False(_) => Ok(false),
        ClauseVerdict::Unknown(r) => Err(r),
    }
}

fn run_case(
    cfg: &FuzzConfig,
    case: usize,
    seed: u64,
    field: &FiniteField,
    f: &Formula,
    a: &Assignment<RatFun>,
) -> FuzzRecord {
    let model = LaurentModel {
        field: field.clone(),
        prec: cfg.prec,
    };
    let lhs = eval_qf(&model, f, a).expect("generated formulas are evaluable");
    let (rhs, note) = match translated_truth(&model, f, a, cfg) {
        Ok(b) => (Some(b), String::new()),
        Err(e) => (None, e),
    };
    let status = match rhs {
        None => CaseStatus::Unknown,
        Some(b) if b == lhs => CaseStatus::Agree,
        Some(_) => CaseStatus::Disagree,
    };
    FuzzRecord {
        case,
        seed,
        field: field.to_string(),
        formula: print_formula(f),
        assignment: render_assignment(a),
        lhs,
        rhs,
        status,
        note,
    }
}

/// Runs every case in parallel; records come back in case order.
///
/// # Panics
///
/// If a configured `(p, m)` is not a valid finite field.
pub fn fuzz_translation(cfg: &FuzzConfig) -> Report {
    let fields: Vec<FiniteField> = cfg
        .fields
        .iter()
        .map(|&(p, m)| FiniteField::new(p, m).expect("fuzz fields are valid"))
        .collect();
    if fields.is_empty() {
        return Report::default();
    }
    let pinned = if cfg.pin_boundary { fields.len() } else { 0 };
    let records = (0..pinned + cfg.cases)
        .into_par_iter()
        .map(|i| {
            if i < pinned {
                let field = &fields[i];
                let f = Formula::and(Formula::in_o(Term::var(0)), Formula::in_o(Term::var(1)));
                let a: Assignment<RatFun> = [
                    (0, RatFun::zero(field)),
                    (1, RatFun::t(field).inv().unwrap()),
                ]
                .into();
                return run_case(cfg, i, 0, field, &f, &a);
            }
            let field = &fields[(i - pinned) % fields.len()];
            let seed = case_seed(cfg.seed, i - pinned);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vars = rng.gen_range(1..=cfg.max_vars.max(1));
            let f = random_formula(&mut rng, cfg, vars);
            let a: Assignment<RatFun> = (0..vars)
                .map(|v| (v, random_value(&mut rng, field)))
                .collect();
            run_case(cfg, i, seed, field, &f, &a)
        })
        .collect();
    Report { records }
}
