//! Small infix polynomial syntax for command-line flags: `X^2*Y - 3/2*X + 1`.
//!
//! Grammar: sums and differences of products; factors are integers,
//! rationals `a/b` written as two integer factors, variables, parenthesized
//! expressions, each optionally raised to a non-negative integer power.
//! Negative exponents are accepted only by [`parse_laurent`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

use super::{LaurentPoly, MultiPoly, Ring};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Token::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

/// Identifiers in order of first appearance.
/// Accepts a single polynomial or a bracketed, comma-separated list.
pub fn identifiers(s: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    let flat: String = s.chars().map(|c| if matches!(c, '[' | ']' | ',') { ' ' } else { c }).collect();
    for t in tokenize(&flat)? {
        if let Token::Ident(name) = t {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ring: &'a Arc<Ring>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                -&self.product()?
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Token::Op('/')) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = d
                        .constant_value()
                        .and_then(|c| c.inv())
                        .ok_or_else(|| self.err("division only by nonzero constants"))?;
                    acc = acc.scale(&c);
                }
                // implicit multiplication: `2X`, `X Y`, `(X+1)(X-1)`
                Some(Token::Num(_) | Token::Ident(_) | Token::Op('(')) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                let c = self.ring.field().parse_scalar(&n)?;
                Ok(MultiPoly::constant(self.ring, c))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .ring
                    .vars()
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} in {:?}", self.src)))?;
                Ok(MultiPoly::var(self.ring, i))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Parses an infix polynomial over `ring`.
pub fn parse_poly(src: &str, ring: &Arc<Ring>) -> Result<MultiPoly> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { tokens, pos: 0, ring, src };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses `[p1, p2, ...]` (brackets optional) into a list of polynomials.
pub fn parse_poly_list(src: &str, ring: &Arc<Ring>) -> Result<Vec<MultiPoly>> {
    let inner = src.trim();
    let inner = inner.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(inner);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner).iter().map(|p| parse_poly(p, ring)).collect()
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out
}

/// Parses a Laurent polynomial in one variable, e.g. `3*X^2 + X^-1`.
pub fn parse_laurent(src: &str, field: Field, var: &str) -> Result<LaurentPoly> {
    // Rewrite `X^-k` as a fresh variable power so the ordinary parser can
    // handle it, then fold the two variables back together.
    let inv = format!("{var}_inv_");
    let mut rewritten = String::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let rest: String = chars[i..].iter().collect();
        let pattern = format!("{var}^-");
        let pattern_alt = format!("{var}^\u{2212}");
        if (rest.starts_with(&pattern) || rest.starts_with(&pattern_alt))
            && (i == 0 || !(chars[i - 1].is_alphanumeric() || chars[i - 1] == '_'))
        {
            let skip = if rest.starts_with(&pattern) { pattern.chars().count() } else { pattern_alt.chars().count() };
            rewritten.push_str(&inv);
            rewritten.push('^');
            i += skip;
        } else {
            rewritten.push(chars[i]);
            i += 1;
        }
    }
    let ring = Ring::new(field, [var.to_string(), inv]);
    let p = parse_poly(&rewritten, &ring)?;
    Ok(LaurentPoly::new(
        field,
        var,
        p.terms().iter().map(|(m, c)| (m.exps()[0] as i64 - m.exps()[1] as i64, c.clone())),
    ))
}

/// Parses a scalar in the given field.
pub fn parse_scalar(src: &str, field: Field) -> Result<Scalar> {
    let ring = Ring::new(field, Vec::<String>::new());
    parse_poly(src, &ring)?.constant_value().ok_or_else(|| Error::Parse(format!("{src:?} is not a constant")))
}
