use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Monomial, Polynomial, Rational};

/// Names of the variables, lowest first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableOrder {
    names: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl VariableOrder {
    pub fn new(names: Vec<String>) -> Result<Self, ParseError> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ParseError {
                    line: 0,
                    message: format!("duplicate variable `{n}` in order"),
                });
            }
            if !is_identifier(n) {
                return Err(ParseError {
                    line: 0,
                    message: format!("invalid variable name `{n}`"),
                });
            }
        }
        Ok(VariableOrder { names })
    }

    /// `x1 < x2 < ... < xn`.
    pub fn standard(n: usize) -> Self {
        VariableOrder {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Order implied by the identifiers in `text`: `x1..xN` for the largest
    /// index N seen, then `y`, `z`, `w` when they occur.
    pub fn infer(text: &str) -> Self {
        let mut max_x = 0usize;
        let mut aux = [false; 3];
        for line in text.lines() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            let bytes: Vec<char> = line.chars().collect();
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i].is_ascii_alphabetic() {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                        i += 1;
                    }
                    let ident: String = bytes[start..i].iter().collect();
                    match ident.as_str() {
                        "y" => aux[0] = true,
                        "z" => aux[1] = true,
                        "w" => aux[2] = true,
                        s => {
                            if let Some(k) = s.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                                max_x = max_x.max(k);
                            }
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut names: Vec<String> = (1..=max_x).map(|i| format!("x{i}")).collect();
        for (flag, name) in aux.iter().zip(["y", "z", "w"]) {
            if *flag {
                names.push(name.to_string());
            }
        }
        VariableOrder { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Display name of variable `i`; indices past the end get `x{i+1}`.
    pub fn name(&self, i: usize) -> String {
        self.names
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("x{}", i + 1))
    }

    /// The order obtained by listing the variables `perm[0], perm[1], ...`.
    pub fn reordered(&self, perm: &[usize]) -> VariableOrder {
        VariableOrder {
            names: perm.iter().map(|&i| self.name(i)).collect(),
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                write!(out, "{abs}").unwrap();
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                write!(out, "{abs}*{mono}").unwrap();
            }
        }
        out
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.name(i)),
                _ => parts.push(format!("{}^{}", self.name(i), e)),
            }
        }
        parts.join("*")
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses one polynomial. Parentheses are accepted in addition to the
/// canonical `+ - * ^` grammar.
pub fn parse_polynomial(text: &str, order: &VariableOrder) -> Result<Polynomial, ParseError> {
    parse_line(text, order, 1)
}

/// Parses one polynomial per non-empty line; lines starting with `#` are
/// comments.
pub fn parse_polynomial_lines(
    text: &str,
    order: &VariableOrder,
) -> Result<Vec<Polynomial>, ParseError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_line(t, order, k + 1)?);
    }
    Ok(out)
}

fn parse_line(text: &str, order: &VariableOrder, line: usize) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text).map_err(|message| ParseError { line, message })?;
    let mut p = Parser {
        tokens,
        pos: 0,
        order,
    };
    let poly = p.expr().map_err(|message| ParseError { line, message })?;
    if p.pos != p.tokens.len() {
        return Err(ParseError {
            line,
            message: format!("unexpected {}", p.tokens[p.pos]),
        });
    }
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(n) => write!(f, "`{n}`"),
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Plus => f.write_str("`+`"),
            Token::Minus => f.write_str("`-`"),
            Token::Star => f.write_str("`*`"),
            Token::Slash => f.write_str("`/`"),
            Token::Caret => f.write_str("`^`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
        }
    }
}

fn describe(t: Option<Token>) -> String {
    t.map_or_else(|| "end of line".to_string(), |t| t.to_string())
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::LParen);
                i += 1
            }
            ')' => {
                out.push(Token::RParen);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Int(s.parse().map_err(|_| format!("bad integer `{s}`"))?));
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}` at column {}", i + 1)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    order: &'a VariableOrder,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, String> {
        let mut acc = self.unary()?;
        while let Some(Token::Star) = self.peek() {
            self.pos += 1;
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, String> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, String> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Token::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| "exponent too large".to_string())?;
                    Ok(base.pow(e))
                }
                other => Err(format!("expected exponent, found {other:?}")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, String> {
        match self.next() {
            Some(Token::Int(n)) => {
                if let (Some(Token::Slash), Some(Token::Int(_))) =
                    (self.tokens.get(self.pos), self.tokens.get(self.pos + 1))
                {
                    self.pos += 1;
                    let Some(Token::Int(d)) = self.next() else { unreachable!() };
                    if d.is_zero() {
                        return Err("zero denominator".into());
                    }
                    return Ok(Polynomial::constant(Rational::new(n, d)));
                }
                Ok(Polynomial::constant(Rational::from_integer(n)))
            }
            Some(Token::Ident(name)) => match self.order.index_of(&name) {
                Some(i) => Ok(Polynomial::var(i)),
                None => Err(format!("unknown variable `{name}`")),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    other => Err(format!("expected `)`, found {}", describe(other))),
                }
            }
            other => Err(format!("unexpected {}", describe(other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn infers_order() {
        let o = VariableOrder::infer("x3*y + 1\n# x9 is a comment\nw");
        assert_eq!(o.names(), ["x1", "x2", "x3", "y", "w"]);
    }

    #[test]
    fn parses_rationals_and_parens() {
        let o = VariableOrder::standard(2);
        let p = parse_polynomial("3/4*x1 - (x2 - 1)^2", &o).unwrap();
        assert_eq!(o.format(&p), "-x2^2 + 2*x2 + 3/4*x1 - 1");
    }

    #[test]
    fn reports_line_numbers() {
        let o = VariableOrder::standard(2);
        let err = parse_polynomial_lines("# header\nx1 + x2\nx1 + * 3\n", &o).unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_polynomial_lines("x7", &o).unwrap_err();
        assert!(err.message.contains("unknown variable"));
    }

    #[test]
    fn rejects_duplicate_names() {
        assert!(VariableOrder::new(vec!["x1".into(), "x1".into()]).is_err());
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -9i64..=9, 1i64..4), 0..6).prop_map(
            |terms| {
                Polynomial::from_terms(terms.into_iter().map(|(e, n, d)| {
                    (Monomial::from_exponents(e), Rational::new(n.into(), d.into()))
                }))
            },
        )
    }

    proptest! {
        #[test]
        fn text_round_trip(p in small_poly()) {
            let o = VariableOrder::standard(3);
            let s = o.format(&p);
            prop_assert_eq!(parse_polynomial(&s, &o).unwrap(), p);
        }
    }
}
