//! Text format for polynomial systems.
//!
//! ```text
//! # optional comment lines
//! vars: x y
//! f = x^2 - 3*x*y + 2*y^2
//! g = x^2 - 7x*y + 12 y^2
//! ```
//!
//! One polynomial per line. Coefficients are integers or `a/b`; a
//! coefficient may be followed directly by a variable, and variables may be
//! joined by `*` or whitespace. Without a `vars:` header the variable order
//! is the order of first appearance.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::koszul::format_monomial;
use crate::poly::{HPoly, Monomial, PolyMap};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

/// A syntax or semantic error with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "error",
        };
        write!(f, "line {}, column {}: {kind}: {}", self.line, self.column, self.message)?;
        if let Some(t) = &self.token {
            write!(f, " (at '{t}')")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A parsed system: named polynomials over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDocument {
    pub variables: Vec<String>,
    pub names: Vec<String>,
    pub polynomials: Vec<HPoly>,
    pub degree: u32,
}

impl SystemDocument {
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn r(&self) -> u32 {
        self.degree
    }

    /// The square map `f: C^n → C^n`; fails unless there are exactly as
    /// many polynomials as variables.
    pub fn to_map(&self) -> Result<PolyMap, Error> {
        if self.polynomials.len() != self.variables.len() {
            return Err(Error::InvalidInput(format!(
                "system is not square: {} polynomials in {} variables",
                self.polynomials.len(),
                self.variables.len()
            )));
        }
        PolyMap::new(self.polynomials.clone())
    }

    /// Canonical text: a `vars:` header, then terms in descending graded
    /// lex order. Parsing the output gives back the same document.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.variables.join(" "));
        for (name, p) in self.names.iter().zip(&self.polynomials) {
            out.push_str(name);
            out.push_str(" = ");
            out.push_str(&format_poly(p, &self.variables));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for SystemDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `x^2 - 3*x*y + 1/2*y^2`. The zero polynomial prints as `0*m` with `m`
/// the leading monomial of its degree so that the degree survives.
pub fn format_poly(p: &HPoly, names: &[String]) -> String {
    if p.is_zero() {
        let lead = format_monomial(&leading_monomial(p.nvars(), p.degree()), names);
        return if lead.is_empty() { "0".into() } else { format!("0*{lead}") };
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let mono = format_monomial(m, names);
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if mono.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{a}*{mono}"));
        }
    }
    out
}

fn leading_monomial(n: usize, degree: u32) -> Monomial {
    let mut exps = vec![0; n];
    if n > 0 {
        exps[0] = degree;
    }
    Monomial::new(exps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(BigInt),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    text: String,
    column: usize,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    tokens: Vec<Token>,
}

impl Line<'_> {
    /// Column of the last character, used for errors at end of line.
    fn end_column(&self) -> usize {
        self.text.chars().count().max(1)
    }

    fn error(&self, kind: ParseErrorKind, column: usize, message: String, token: Option<String>) -> ParseError {
        ParseError {
            kind,
            line: self.number,
            column: column.clamp(1, self.end_column()),
            message,
            token,
        }
    }
}

fn tokenize(number: usize, text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<BigInt>().expect("digits");
            tokens.push(Token { tok: Tok::Int(value), text, column });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            tokens.push(Token { tok: Tok::Name(text.clone()), text, column });
        } else if "=+-*^/:".contains(c) {
            tokens.push(Token { tok: Tok::Sym(c), text: c.to_string(), column });
            i += 1;
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                line: number,
                column,
                message: format!("unexpected character '{c}'"),
                token: Some(c.to_string()),
            });
        }
    }
    Ok(tokens)
}

/// A written term before variables are resolved.
struct RawTerm {
    coeff: Rat,
    factors: Vec<(String, u32, usize)>,
    column: usize,
}

struct RawPoly {
    line: usize,
    name: String,
    name_column: usize,
    terms: Vec<RawTerm>,
}

struct Cursor<'l, 'a> {
    line: &'l Line<'a>,
    pos: usize,
}

impl Cursor<'_, '_> {
    fn peek(&self) -> Option<&Token> {
        self.line.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.line.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn peek_name(&self) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Name(_), .. }))
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.line.error(
                ParseErrorKind::Syntax,
                t.column,
                format!("expected {expected}, found '{}'", t.text),
                Some(t.text.clone()),
            ),
            None => self.line.error(
                ParseErrorKind::Syntax,
                self.line.end_column(),
                format!("expected {expected}, found end of line"),
                None,
            ),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(BigInt, usize), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Int(v), column, .. }) => {
                let out = (v.clone(), *column);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn factor(&mut self) -> Result<(String, u32, usize), ParseError> {
        let (name, column) = match self.next() {
            Some(Token { tok: Tok::Name(n), column, .. }) => (n.clone(), *column),
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a variable"));
            }
        };
        let mut exp = 1u32;
        if self.peek_sym('^') {
            self.pos += 1;
            let (v, col) = self.expect_int("an exponent")?;
            exp = u32::try_from(v).map_err(|_| {
                self.line.error(ParseErrorKind::Syntax, col, "exponent too large".into(), None)
            })?;
        }
        Ok((name, exp, column))
    }

    fn term(&mut self, sign: bool) -> Result<RawTerm, ParseError> {
        let column = self.peek().map_or(self.line.end_column(), |t| t.column);
        let mut coeff = Rat::one();
        let mut has_coeff = false;
        if let Some(Token { tok: Tok::Int(_), .. }) = self.peek() {
            let (num, _) = self.expect_int("a coefficient")?;
            let mut value = Rat::from_integer(num);
            if self.peek_sym('/') {
                self.pos += 1;
                let (den, col) = self.expect_int("a denominator")?;
                if den.is_zero() {
                    return Err(self.line.error(
                        ParseErrorKind::Syntax,
                        col,
                        "zero denominator".into(),
                        Some("0".into()),
                    ));
                }
                value /= Rat::from_integer(den);
            }
            coeff = value;
            has_coeff = true;
        }
        let mut factors = Vec::new();
        if has_coeff {
            if self.peek_sym('*') {
                self.pos += 1;
                factors.push(self.factor()?);
            } else if self.peek_name() {
                factors.push(self.factor()?);
            }
        } else {
            factors.push(self.factor()?);
        }
        if !factors.is_empty() {
            loop {
                if self.peek_sym('*') {
                    self.pos += 1;
                    factors.push(self.factor()?);
                } else if self.peek_name() {
                    factors.push(self.factor()?);
                } else {
                    break;
                }
            }
        }
        if sign {
            coeff = -coeff;
        }
        Ok(RawTerm { coeff, factors, column })
    }

    fn expr(&mut self) -> Result<Vec<RawTerm>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek_sym('-') || self.peek_sym('+') {
            negative = self.peek_sym('-');
            self.pos += 1;
        }
        terms.push(self.term(negative)?);
        loop {
            if self.peek().is_none() {
                break;
            }
            if self.peek_sym('+') || self.peek_sym('-') {
                let negative = self.peek_sym('-');
                self.pos += 1;
                terms.push(self.term(negative)?);
            } else {
                return Err(self.unexpected("'+', '-' or end of line"));
            }
        }
        Ok(terms)
    }
}

fn parse_header(line: &Line<'_>) -> Result<Option<Vec<(String, usize)>>, ParseError> {
    let is_header = matches!(
        line.tokens.as_slice(),
        [Token { tok: Tok::Name(v), .. }, Token { tok: Tok::Sym(':'), .. }, ..] if v == "vars"
    );
    if !is_header {
        return Ok(None);
    }
    let mut names: Vec<(String, usize)> = Vec::new();
    for t in &line.tokens[2..] {
        match &t.tok {
            Tok::Name(n) => {
                if names.iter().any(|(m, _)| m == n) {
                    return Err(line.error(
                        ParseErrorKind::Semantic,
                        t.column,
                        format!("variable '{n}' declared twice"),
                        Some(n.clone()),
                    ));
                }
                names.push((n.clone(), t.column));
            }
            _ => {
                return Err(line.error(
                    ParseErrorKind::Syntax,
                    t.column,
                    format!("expected a variable name, found '{}'", t.text),
                    Some(t.text.clone()),
                ))
            }
        }
    }
    if names.is_empty() {
        return Err(line.error(
            ParseErrorKind::Syntax,
            line.end_column(),
            "expected at least one variable after 'vars:'".into(),
            None,
        ));
    }
    Ok(Some(names))
}

fn parse_poly_line(line: &Line<'_>) -> Result<RawPoly, ParseError> {
    let mut cur = Cursor { line, pos: 0 };
    let (name, name_column) = match cur.next() {
        Some(Token { tok: Tok::Name(n), column, .. }) => (n.clone(), *column),
        _ => {
            cur.pos = 0;
            return Err(cur.unexpected("a polynomial name"));
        }
    };
    if !cur.peek_sym('=') {
        return Err(cur.unexpected("'='"));
    }
    cur.pos += 1;
    let terms = cur.expr()?;
    Ok(RawPoly {
        line: line.number,
        name,
        name_column,
        terms,
    })
}

/// Parses a system. Every polynomial must be homogeneous and all must share
/// one degree; squareness is checked by [`SystemDocument::to_map`].
pub fn parse_system(text: &str) -> Result<SystemDocument, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let tokens = tokenize(i + 1, raw)?;
        if !tokens.is_empty() {
            lines.push(Line {
                number: i + 1,
                text: raw,
                tokens,
            });
        }
    }
    let Some(first) = lines.first() else {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            line: 1,
            column: 1,
            message: "no polynomials found".into(),
            token: None,
        });
    };
    let header = parse_header(first)?;
    let body = if header.is_some() { &lines[1..] } else { &lines[..] };
    if body.is_empty() {
        return Err(first.error(
            ParseErrorKind::Syntax,
            first.end_column(),
            "no polynomials found after the header".into(),
            None,
        ));
    }
    let mut raws = Vec::with_capacity(body.len());
    for line in body {
        if parse_header(line)?.is_some() {
            return Err(line.error(
                ParseErrorKind::Syntax,
                1,
                "'vars:' header must be the first line".into(),
                Some("vars".into()),
            ));
        }
        raws.push(parse_poly_line(line)?);
    }
    let line_of = |number: usize| lines.iter().find(|l| l.number == number).expect("line exists");

    let explicit = header.is_some();
    let mut variables: Vec<String> = header
        .map(|h| h.into_iter().map(|(n, _)| n).collect())
        .unwrap_or_default();
    let mut index: HashMap<String, usize> =
        variables.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    for raw in &raws {
        for term in &raw.terms {
            for (name, _, column) in &term.factors {
                if !index.contains_key(name) {
                    if explicit {
                        return Err(line_of(raw.line).error(
                            ParseErrorKind::Semantic,
                            *column,
                            format!("unknown variable '{name}'"),
                            Some(name.clone()),
                        ));
                    }
                    index.insert(name.clone(), variables.len());
                    variables.push(name.clone());
                }
            }
        }
    }
    let n = variables.len();

    let mut names: Vec<String> = Vec::new();
    let mut degrees: Vec<Option<(u32, usize)>> = Vec::new();
    for raw in &raws {
        let line = line_of(raw.line);
        if names.contains(&raw.name) {
            return Err(line.error(
                ParseErrorKind::Semantic,
                raw.name_column,
                format!("polynomial '{}' defined twice", raw.name),
                Some(raw.name.clone()),
            ));
        }
        if index.contains_key(&raw.name) {
            return Err(line.error(
                ParseErrorKind::Semantic,
                raw.name_column,
                format!("'{}' is both a polynomial and a variable", raw.name),
                Some(raw.name.clone()),
            ));
        }
        names.push(raw.name.clone());
        let mut degree: Option<(u32, usize)> = None;
        for term in &raw.terms {
            // a bare zero constant carries no degree information
            if term.factors.is_empty() && term.coeff.is_zero() {
                continue;
            }
            let d: u32 = term.factors.iter().map(|(_, e, _)| *e).sum();
            match degree {
                None => degree = Some((d, term.column)),
                Some((d0, _)) if d0 != d => {
                    return Err(line.error(
                        ParseErrorKind::Semantic,
                        term.column,
                        format!(
                            "inhomogeneous polynomial '{}' on line {}: terms of degree {d0} and {d}",
                            raw.name, raw.line
                        ),
                        None,
                    ));
                }
                _ => {}
            }
        }
        degrees.push(degree);
    }

    let mut common: Option<(u32, usize)> = None;
    for (raw, d) in raws.iter().zip(&degrees) {
        if let Some((d, _)) = d {
            match common {
                None => common = Some((*d, raw.line)),
                Some((c, first_line)) if c != *d => {
                    return Err(line_of(raw.line).error(
                        ParseErrorKind::Semantic,
                        raw.name_column,
                        format!(
                            "polynomial '{}' has degree {d} but line {first_line} has degree {c}",
                            raw.name
                        ),
                        Some(raw.name.clone()),
                    ));
                }
                _ => {}
            }
        }
    }
    let degree = common.map_or(0, |(d, _)| d);

    let mut polynomials = Vec::with_capacity(raws.len());
    for raw in &raws {
        let terms = raw.terms.iter().filter(|t| !t.factors.is_empty() || !t.coeff.is_zero()).map(|t| {
            let mut exps = vec![0u32; n];
            for (name, e, _) in &t.factors {
                exps[index[name]] += e;
            }
            (Monomial::new(exps), t.coeff.clone())
        });
        let p = HPoly::new(n, degree, terms).map_err(|e| {
            line_of(raw.line).error(ParseErrorKind::Semantic, raw.name_column, e.to_string(), None)
        })?;
        polynomials.push(p);
    }
    Ok(SystemDocument {
        variables,
        names,
        polynomials,
        degree,
    })
}
