//! Recursive-descent reader for the ASCII formula syntax:
//!
//! ```text
//! formula := "E" var "." formula | disj
//! disj    := conj { "|" conj }
//! conj    := lit { "&" lit }
//! lit     := "!" lit | "(" formula ")" | atom
//! atom    := term ("=" | "!=") term | "O(" term ")"
//! term    := term ("+" | "-") factor | factor
//! factor  := factor "*" unary | unary
//! unary   := "inv(" term ")" | "-" unary | base
//! base    := var | "w" | integer | "(" term ")"
//! var     := "x" natural
//! ```
//!
//! `a != b` reads as `!(a = b)`, `-n` for a numeral `n` is the constant `-n`,
//! and `-u` for anything else is `0 - u`. Binary operators associate left.

use super::{Const, Formula, Language, Term};
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Exists,
    Var(usize),
    Dot,
    Bar,
    Amp,
    Bang,
    LParen,
    RParen,
    Eq,
    Neq,
    Member,
    Inv,
    Plus,
    Minus,
    Star,
    W,
    Int(i64),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Exists => "E".into(),
            Tok::Var(i) => format!("x{i}"),
            Tok::Dot => ".".into(),
            Tok::Bar => "|".into(),
            Tok::Amp => "&".into(),
            Tok::Bang => "!".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eq => "=".into(),
            Tok::Neq => "!=".into(),
            Tok::Member => "O".into(),
            Tok::Inv => "inv".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::W => "w".into(),
            Tok::Int(n) => n.to_string(),
        }
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            b'.' => Some(Tok::Dot),
            b'|' => Some(Tok::Bar),
            b'&' => Some(Tok::Amp),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'=' => Some(Tok::Eq),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if c == b'!' {
            if bytes.get(i + 1) == Some(&b'=') {
                out.push((Tok::Neq, start));
                i += 2;
            } else {
                out.push((Tok::Bang, start));
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i]
                .parse::<i64>()
                .map_err(|_| syntax(start, "integer literal out of range"))?;
            out.push((Tok::Int(n), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "E" => Tok::Exists,
                "O" => Tok::Member,
                "inv" => Tok::Inv,
                "w" => Tok::W,
                _ => {
                    let digits = word
                        .strip_prefix('x')
                        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
                    match digits.and_then(|d| d.parse::<usize>().ok()) {
                        Some(idx) => Tok::Var(idx),
                        None => return Err(syntax(start, format!("unknown identifier {word:?}"))),
                    }
                }
            };
            out.push((tok, start));
            continue;
        }
        let ch = text[start..].chars().next().unwrap();
        return Err(syntax(start, format!("unexpected character {ch:?}")));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    lang: &'a Language,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, o)| o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(syntax(
                at,
                format!("expected {}, found {}", want.describe(), t.describe()),
            )),
            None => Err(syntax(
                at,
                format!("expected {}, found end of input", want.describe()),
            )),
        }
    }

    fn not_admitted(&self, at: usize, token: &str) -> ParseError {
        ParseError::NotAdmitted {
            pos: at,
            token: token.into(),
            language: self.lang.to_string(),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        if self.peek() == Some(&Tok::Exists) {
            self.bump();
            let at = self.offset();
            let v = match self.bump() {
                Some(Tok::Var(i)) => i,
                _ => return Err(syntax(at, "expected a variable after E")),
            };
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            return Ok(Formula::exists(v, body));
        }
        self.disj()
    }

    fn disj(&mut self) -> PResult<Formula> {
        let mut acc = self.conj()?;
        while self.peek() == Some(&Tok::Bar) {
            self.bump();
            acc = Formula::or(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> PResult<Formula> {
        let mut acc = self.lit()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            acc = Formula::and(acc, self.lit()?);
        }
        Ok(acc)
    }

    fn lit(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Formula::not(self.lit()?))
            }
            Some(Tok::LParen) => {
                let save = self.pos;
                match self.atom() {
                    Ok(a) => Ok(a),
                    Err(e @ ParseError::NotAdmitted { .. }) => Err(e),
                    Err(_) => {
                        self.pos = save;
                        self.bump();
                        let f = self.formula()?;
                        self.expect(Tok::RParen)?;
                        Ok(f)
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        if self.peek() == Some(&Tok::Member) {
            let at = self.offset();
            if !self.lang.admits_membership() {
                return Err(self.not_admitted(at, "O"));
            }
            self.bump();
            self.expect(Tok::LParen)?;
            let t = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::in_o(t));
        }
        let lhs = self.term()?;
        let at = self.offset();
        match self.bump() {
            Some(Tok::Eq) => Ok(Formula::eq(lhs, self.term()?)),
            Some(Tok::Neq) => Ok(Formula::neq(lhs, self.term()?)),
            Some(t) => Err(syntax(
                at,
                format!("expected = or !=, found {}", t.describe()),
            )),
            None => Err(syntax(at, "expected = or !=, found end of input")),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Term::add(acc, self.factor()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Term::sub(acc, self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> PResult<Term> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = Term::mul(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(Tok::Inv) => {
                let at = self.offset();
                if !self.lang.admits_inverse() {
                    return Err(self.not_admitted(at, "inv"));
                }
                self.bump();
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::inv(t))
            }
            Some(Tok::Minus) => {
                self.bump();
                if let Some(&Tok::Int(n)) = self.peek() {
                    self.bump();
                    return Ok(Term::int(-n));
                }
                Ok(Term::sub(Term::zero(), self.unary()?))
            }
            _ => self.base(),
        }
    }

    fn base(&mut self) -> PResult<Term> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Var(i)) => Ok(Term::Var(i)),
            Some(Tok::W) => {
                if !self.lang.admits_uniformizer() {
                    return Err(self.not_admitted(at, "w"));
                }
                Ok(Term::Const(Const::Uniformizer))
            }
            Some(Tok::Int(n)) => Ok(Term::int(n)),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(t) => Err(syntax(
                at,
                format!("expected a term, found {}", t.describe()),
            )),
            None => Err(syntax(at, "expected a term, found end of input")),
        }
    }
}

/// Reads a formula in `lang`.
pub fn parse_formula(text: &str, lang: &Language) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        lang,
    };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        let (t, at) = &p.toks[p.pos];
        return Err(syntax(
            *at,
            format!("unexpected {} after formula", t.describe()),
        ));
    }
    Ok(f)
}

/// Reads a single term in `lang`.
pub fn parse_term(text: &str, lang: &Language) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        lang,
    };
    let t = p.term()?;
    if p.pos < p.toks.len() {
        let (tok, at) = &p.toks[p.pos];
        return Err(syntax(
            *at,
            format!("unexpected {} after term", tok.describe()),
        ));
    }
    Ok(t)
}
