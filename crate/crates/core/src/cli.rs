//! The `vfrag` command line.
//!
//! Exit codes: 0 success, 1 other failure or fuzz disagreement, 2 parse
//! error, 3 input outside the required fragment, 4 clause overflow, 5 unknown
//! model descriptor, 6 search budget exceeded.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decide::{fuzz_translation, CaseStatus, FuzzConfig, Report};
use crate::error::{ModelError, NormalizeError, TranslateError};
use crate::formula::{classify_fragment, parse_formula, print_formula, Formula, Language};
use crate::models::{
    eval_qf, eval_sentence, parse_fq_value, parse_value, Assignment, Outcome, SearchBudget,
    Structure,
};
use crate::normalize::DEFAULT_MAX_CLAUSES;
use crate::translate::{field_to_ring, val_to_ring_with, EtaVariant, TranslateOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FRAGMENT: i32 = 3;
pub const EXIT_OVERFLOW: i32 = 4;
pub const EXIT_MODEL: i32 = 5;
pub const EXIT_BUDGET: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "vfrag",
    version,
    about = "Existential fragments of valued fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Language the input is read in; defaults to val, or field for field2ring.
    #[arg(long, global = true, value_enum)]
    lang: Option<LangArg>,

    /// Structure descriptor, e.g. fq:p=2,m=2 or laurent:p=3,m=1,prec=64.
    #[arg(long, global = true)]
    model: Option<String>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Series precision; overrides the descriptor's `prec`.
    #[arg(long, global = true)]
    prec: Option<i64>,

    #[command(flatten)]
    budget: BudgetArgs,

    #[arg(long, global = true, value_enum, default_value_t = Format::Lines)]
    format: Format,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Most negative exponent of a candidate witness.
    #[arg(long = "budget-low", global = true)]
    low: Option<i64>,
    /// Largest exponent of a candidate witness.
    #[arg(long = "budget-high", global = true)]
    high: Option<i64>,
    /// Most nonzero terms of a candidate witness.
    #[arg(long = "budget-support", global = true)]
    support: Option<usize>,
    #[arg(long = "budget-max-candidates", global = true)]
    max_candidates: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            low: self.low.unwrap_or(d.low),
            high: self.high.unwrap_or(d.high),
            support: self.support.unwrap_or(d.support),
            max_candidates: self.max_candidates.unwrap_or(d.max_candidates),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LangArg {
    Ring,
    Field,
    Val,
}

impl LangArg {
    fn language(self) -> Language {
        match self {
            LangArg::Ring => Language::RING,
            LangArg::Field => Language::FIELD,
            LangArg::Val => Language::VAL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Lines,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EtaArg {
    Paper,
    Corrected,
}

impl From<EtaArg> for EtaVariant {
    fn from(e: EtaArg) -> Self {
        match e {
            EtaArg::Paper => EtaVariant::PaperLiteral,
            EtaArg::Corrected => EtaVariant::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "val2ring")]
    ValToRing,
    #[value(name = "field2ring")]
    FieldToRing,
}

#[derive(Debug, Args)]
struct Input {
    /// Formula text.
    #[arg(conflicts_with_all = ["formula", "file"])]
    text: Option<String>,
    #[arg(long, conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from a file.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fragment indices of a formula.
    Classify(Input),
    /// Translate into the ring language.
    Translate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = EtaArg::Corrected)]
        eta: EtaArg,
        #[arg(long, value_enum, default_value_t = Mode::ValToRing)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_MAX_CLAUSES)]
        max_clauses: usize,
    },
    /// Evaluate a quantifier-free formula at a point.
    Eval {
        #[command(flatten)]
        input: Input,
        /// `x<i>=<value>`, e.g. `x0=(t^2+1)/t`.
        #[arg(long = "set", value_name = "ASSIGNMENT")]
        set: Vec<String>,
    },
    /// Decide an existential sentence.
    Decide {
        #[command(flatten)]
        input: Input,
        /// Fail with exit 6 instead of answering unknown.
        #[arg(long)]
        complete: bool,
    },
    /// Compare valued semantics with the decided ring translation.
    Fuzz {
        /// Total number of random cases.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, value_enum, default_value_t = EtaArg::Corrected)]
        eta: EtaArg,
        /// `p,m` for `F_{p^m}`; repeatable. Defaults to q = 2, 3, 4, 5, 9.
        #[arg(long = "field", value_name = "P,M")]
        fields: Vec<String>,
        /// Also run the point (0, 1/t) for O(x0) & O(x1) in each field.
        #[arg(long)]
        pin_boundary: bool,
        /// Print every disagreement and unknown case.
        #[arg(long)]
        verbose: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let code = match e {
            ModelError::UnknownDescriptor(_) | ModelError::Algebra(_) => EXIT_MODEL,
            ModelError::BadValue { .. } => EXIT_PARSE,
            ModelError::SearchSpaceExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<TranslateError> for Failure {
    fn from(e: TranslateError) -> Self {
        let code = match e {
            TranslateError::Normalize(NormalizeError::TooManyClauses { .. }) => EXIT_OVERFLOW,
            _ => EXIT_FRAGMENT,
        };
        Failure::new(code, e.to_string())
    }
}

/// Runs `vfrag` with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut lines = Vec::new();
    let code = match dispatch(&cli, &mut lines) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    code
}

fn dispatch(cli: &Cli, out: &mut Vec<String>) -> Result<i32, Failure> {
    let tsv = cli.format == Format::Tsv;
    let pair = |k: &str, v: String| {
        if tsv {
            format!("{k}\t{v}")
        } else {
            format!("{k}={v}")
        }
    };
    match &cli.command {
        Command::Classify(input) => {
            let f = read_formula(input, cli.lang.map_or(Language::VAL, LangArg::language))?;
            let c = classify_fragment(&f);
            out.push(pair("en", show_index(c.en_index)));
            out.push(pair("ene1", show_index(c.ene1_index)));
            out.push(pair("eup", show_index(c.eup_index)));
            out.push(pair("qf", c.is_qf.to_string()));
            Ok(EXIT_OK)
        }
        Command::Translate {
            input,
            eta,
            mode,
            max_clauses,
        } => {
            let default = match mode {
                Mode::ValToRing => Language::VAL,
                Mode::FieldToRing => Language::FIELD,
            };
            let f = read_formula(input, cli.lang.map_or(default, LangArg::language))?;
            let g = match mode {
                Mode::ValToRing => val_to_ring_with(
                    &f,
                    &TranslateOptions {
                        eta: (*eta).into(),
                        max_clauses: *max_clauses,
                    },
                )?,
                Mode::FieldToRing => field_to_ring(&f)?,
            };
            let (n, m) = (
                classify_fragment(&f).en_index,
                classify_fragment(&g).en_index,
            );
            if tsv {
                out.push(pair("formula", print_formula(&g)));
                out.push(pair("in", show_index(n)));
                out.push(pair("out", show_index(m)));
            } else {
                out.push(print_formula(&g));
                out.push(format!("in=∃_{} out=∃_{}", show_index(n), show_index(m)));
            }
            Ok(EXIT_OK)
        }
        Command::Eval { input, set } => {
            let model = structure(cli)?;
            let f = read_formula(input, cli.lang.map_or(Language::VAL, LangArg::language))?;
            if !f.is_quantifier_free() {
                return Err(Failure::new(
                    EXIT_FAILURE,
                    "eval takes a quantifier-free formula; use decide for sentences",
                ));
            }
            let value = match &model {
                Structure::Fq(m) => {
                    let a: Assignment<_> = read_assignment(set, |s| parse_fq_value(s, &m.field))?;
                    eval_qf(m, &f, &a)?
                }
                Structure::Laurent(m) => {
                    let a: Assignment<_> = read_assignment(set, |s| parse_value(s, &m.field))?;
                    eval_qf(m, &f, &a)?
                }
            };
            out.push(if tsv {
                pair("value", value.to_string())
            } else {
                value.to_string()
            });
            Ok(EXIT_OK)
        }
        Command::Decide { input, complete } => {
            let model = structure(cli)?;
            let f = read_formula(input, cli.lang.map_or(Language::VAL, LangArg::language))?;
            let v = eval_sentence(&model, &f, &cli.budget.budget())?;
            if tsv {
                out.push(pair("outcome", v.outcome.to_string()));
                out.push(pair("evidence", v.evidence.to_string()));
            } else {
                out.push(v.outcome.to_string());
                out.push(v.evidence.to_string());
            }
            Ok(if *complete && v.outcome == Outcome::Unknown {
                EXIT_BUDGET
            } else {
                EXIT_OK
            })
        }
        Command::Fuzz {
            count,
            eta,
            fields,
            pin_boundary,
            verbose,
        } => {
            let mut cfg = FuzzConfig {
                seed: cli.seed,
                cases: *count,
                eta: (*eta).into(),
                pin_boundary: *pin_boundary,
                budget: cli.budget.budget(),
                ..FuzzConfig::default()
            };
            if let Some(p) = cli.prec {
                cfg.prec = p;
            }
            if !fields.is_empty() {
                cfg.fields = fields
                    .iter()
                    .map(|s| read_field(s))
                    .collect::<Result<_, _>>()?;
            }
            let report = fuzz_translation(&cfg);
            render_report(&report, tsv, *verbose, out);
            let failed = cfg.eta == EtaVariant::Corrected && report.disagree() > 0;
            Ok(if failed { EXIT_FAILURE } else { EXIT_OK })
        }
    }
}

fn render_report(report: &Report, tsv: bool, verbose: bool, out: &mut Vec<String>) {
    if tsv {
        out.push(Report::TSV_HEADER.to_string());
        out.extend(report.records.iter().map(|r| r.to_tsv()));
        return;
    }
    let shown = report.records.iter().filter(|r| {
        r.status == CaseStatus::Disagree || (verbose && r.status == CaseStatus::Unknown)
    });
    let limit = if verbose { usize::MAX } else { 10 };
    out.extend(shown.take(limit).map(|r| r.to_line()));
    out.push(report.summary());
    out.push(format!(
        "disagree={} unknown={}",
        report.disagree(),
        report.unknown()
    ));
}

fn show_index(n: Option<usize>) -> String {
    n.map_or("-".to_string(), |n| n.to_string())
}

fn read_formula(input: &Input, lang: Language) -> Result<Formula, Failure> {
    let text = match (&input.text, &input.formula, &input.file) {
        (Some(t), _, _) | (None, Some(t), _) => t.clone(),
        (None, None, Some(path)) => std::fs::read_to_string(path).map_err(|e| {
            Failure::new(EXIT_FAILURE, format!("cannot read {}: {e}", path.display()))
        })?,
        (None, None, None) => return Err(Failure::new(EXIT_PARSE, "no formula given")),
    };
    parse_formula(text.trim(), &lang).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))
}

fn structure(cli: &Cli) -> Result<Structure, Failure> {
    let d = cli
        .model
        .as_deref()
        .ok_or_else(|| Failure::new(EXIT_MODEL, "--model is required"))?;
    let mut s = Structure::parse(d)?;
    if let (Structure::Laurent(m), Some(p)) = (&mut s, cli.prec) {
        m.prec = p;
    }
    Ok(s)
}

fn read_assignment<E>(
    set: &[String],
    value: impl Fn(&str) -> Result<E, ModelError>,
) -> Result<Assignment<E>, Failure> {
    let mut a = Assignment::new();
    for item in set {
        let bad = || Failure::new(EXIT_PARSE, format!("bad assignment {item:?}"));
        let (var, text) = item.split_once('=').ok_or_else(bad)?;
        let v: usize = var
            .trim()
            .strip_prefix('x')
            .and_then(|s| s.parse().ok())
            .ok_or_else(bad)?;
        a.insert(v, value(text.trim())?);
    }
    Ok(a)
}

fn read_field(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::new(EXIT_MODEL, format!("bad field {s:?}; expected P,M"));
    let (p, m) = s.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let m = m.trim().parse().map_err(|_| bad())?;
    crate::algebra::FiniteField::new(p, m).map_err(|e| Failure::new(EXIT_MODEL, e.to_string()))?;
    Ok((p, m))
}
