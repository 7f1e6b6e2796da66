//! Parsing and formatting of exponential-polynomial expressions.
//!
//! Grammar (hand-rolled recursive descent, `^` binds tighter than `*`,
//! unary minus allowed before any factor):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*        // '/' needs a constant divisor
//! factor := '-' factor | atom ('^' posint)?
//! atom   := number ['i'] | 'i' | 'pi' | 'z'
//!         | 'e' '^' '(' expr ')' | 'exp' '(' expr ')'
//!         | 'sqrt' '(' expr ')' | 'ln' '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! `exp(...)` and `e^(...)` are synonyms; exponent arguments must be
//! polynomials in `z`. `sqrt`, `ln` and `/` take constant arguments and fold
//! immediately (principal branches). Formatting always uses `exp`, joins
//! terms with `" + "`, and prints each term as `(<poly>)*exp(<poly>)` with
//! complex literals in `a+bi` form using the shortest digit strings that
//! round-trip exactly through `f64`.

use thiserror::Error;

use crate::expalg::{ExpError, ExpPoly};
use crate::poly::Poly;
use crate::scalar::{c, re, scalar_is_zero, Scalar};

/// Parse failure with the byte offset of the offending input.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{message} (at byte {offset})")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

impl ParseError {
    fn new(message: impl Into<String>, offset: usize) -> Self {
        ParseError {
            message: message.into(),
            offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let Some(&b) = lx.src.get(lx.pos) else { break };
            let tok = match b {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => lx.number(start)?,
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => lx.ident(start),
                _ => {
                    return Err(ParseError::new(
                        format!("unexpected character {:?}", b as char),
                        start,
                    ))
                }
            };
            out.push((tok, start));
        }
        Ok(out)
    }

    fn skip_ws(&mut self) {
        while matches!(self.src.get(self.pos), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
        }
        // Scientific exponent only when 'e' is definitely not the Euler
        // constant of an `e^(...)` factor, i.e. it is followed by a digit or
        // a signed digit.
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mut probe = self.pos + 1;
            if matches!(self.src.get(probe), Some(b'+' | b'-')) {
                probe += 1;
            }
            if matches!(self.src.get(probe), Some(b'0'..=b'9')) {
                self.pos = probe;
                while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>()
            .map(Tok::Num)
            .map_err(|_| ParseError::new(format!("invalid number {text:?}"), start))
    }

    fn ident(&mut self, start: usize) -> Tok {
        while matches!(
            self.src.get(self.pos),
            Some(b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_')
        ) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
        Tok::Ident(text.to_string())
    }
}

const MAX_DEPTH: usize = 200;

struct Parser {
    tokens: Vec<(Tok, usize)>,
    index: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.index)
            .map(|&(_, o)| o)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.tokens.get(self.index).map(|(t, _)| t.clone());
        if tok.is_some() {
            self.index += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(ref t) if *t == want => Ok(()),
            Some(t) => Err(ParseError::new(
                format!("expected {what}, found {t:?}"),
                off,
            )),
            None => Err(ParseError::new(format!("expected {what}, found end of input"), off)),
        }
    }

    fn algebra(&self, r: Result<ExpPoly, ExpError>, off: usize) -> Result<ExpPoly, ParseError> {
        r.map_err(|e| ParseError::new(e.to_string(), off))
    }

    fn expr(&mut self) -> Result<ExpPoly, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new("expression nests too deeply", self.offset()));
        }
        let result = self.expr_inner();
        self.depth -= 1;
        result
    }

    fn expr_inner(&mut self) -> Result<ExpPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            let off = self.offset();
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.algebra(acc.add(&rhs), off)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.algebra(acc.sub(&rhs), off)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExpPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let off = self.offset();
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = self.algebra(acc.mul(&rhs), off)?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs_off = self.offset();
                    let rhs = self.factor()?;
                    let divisor = rhs.as_constant().ok_or_else(|| {
                        ParseError::new("divisor must be a constant expression", rhs_off)
                    })?;
                    if scalar_is_zero(divisor) {
                        return Err(ParseError::new("division by zero constant", rhs_off));
                    }
                    acc = acc.scale(divisor.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExpPoly, ParseError> {
        let mut negate = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = !negate;
        }
        let value = self.positive_factor()?;
        Ok(if negate { value.neg() } else { value })
    }

    fn positive_factor(&mut self) -> Result<ExpPoly, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            let off = self.offset();
            self.bump();
            let n = self.positive_exponent()?;
            return self.algebra(base.pow(n), off);
        }
        Ok(base)
    }

    fn positive_exponent(&mut self) -> Result<u32, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(x)) if x.fract() == 0.0 && (0.0..=64.0).contains(&x) => Ok(x as u32),
            Some(t) => Err(ParseError::new(
                format!("exponent must be an integer in 0..=64, found {t:?}"),
                off,
            )),
            None => Err(ParseError::new("expected exponent, found end of input", off)),
        }
    }

    fn paren_expr(&mut self) -> Result<ExpPoly, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let inner = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(inner)
    }

    /// Argument of `exp` / `e^`: must denote a polynomial in `z`.
    fn polynomial_argument(&mut self) -> Result<Poly, ParseError> {
        let off = self.offset();
        let inner = self.paren_expr()?;
        inner.as_polynomial().ok_or_else(|| {
            ParseError::new("unsupported exponent: argument of exp must be a polynomial in z", off)
        })
    }

    fn constant_argument(&mut self, what: &str) -> Result<Scalar, ParseError> {
        let off = self.offset();
        let inner = self.paren_expr()?;
        inner
            .as_constant()
            .ok_or_else(|| ParseError::new(format!("argument of {what} must be constant"), off))
    }

    fn atom(&mut self) -> Result<ExpPoly, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(x)) => {
                // `a+bi` literals: a number directly followed by `i`.
                if matches!(self.peek(), Some(Tok::Ident(id)) if id == "i") {
                    self.bump();
                    return Ok(ExpPoly::constant(c(0.0, x)));
                }
                Ok(ExpPoly::constant(re(x)))
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "i" => Ok(ExpPoly::constant(c(0.0, 1.0))),
                "pi" => Ok(ExpPoly::constant(re(std::f64::consts::PI))),
                "z" => Ok(ExpPoly::polynomial(&Poly::z())),
                "e" => {
                    self.expect(Tok::Caret, "'^' after e")?;
                    let q = self.polynomial_argument()?;
                    self.algebra(ExpPoly::exponential(&q), off)
                }
                "exp" => {
                    let q = self.polynomial_argument()?;
                    self.algebra(ExpPoly::exponential(&q), off)
                }
                "sqrt" => {
                    let v = self.constant_argument("sqrt")?;
                    Ok(ExpPoly::constant(v.sqrt()))
                }
                "ln" => {
                    let arg_off = self.offset();
                    let v = self.constant_argument("ln")?;
                    if scalar_is_zero(v) {
                        return Err(ParseError::new("logarithm of zero", arg_off));
                    }
                    Ok(ExpPoly::constant(v.ln()))
                }
                other => Err(ParseError::new(format!("unknown identifier {other:?}"), off)),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(ParseError::new(format!("unexpected token {t:?}"), off)),
            None => Err(ParseError::new("unexpected end of input", off)),
        }
    }
}

/// Parse an expression into canonical form.
pub fn parse_expr(input: &str) -> Result<ExpPoly, ParseError> {
    let tokens = Lexer::tokenize(input)?;
    let mut parser = Parser {
        tokens,
        index: 0,
        end: input.len(),
        depth: 0,
    };
    let value = parser.expr()?;
    if parser.index != parser.tokens.len() {
        return Err(ParseError::new("trailing input after expression", parser.offset()));
    }
    Ok(value)
}

/// Parse a constant expression into a complex scalar.
pub fn parse_complex(input: &str) -> Result<Scalar, ParseError> {
    let value = parse_expr(input)?;
    value
        .as_constant()
        .ok_or_else(|| ParseError::new("expected a constant expression", 0))
}

/// Parse an expression that must denote a polynomial in `z`.
pub fn parse_poly(input: &str) -> Result<Poly, ParseError> {
    let value = parse_expr(input)?;
    value
        .as_polynomial()
        .ok_or_else(|| ParseError::new("expected a polynomial in z", 0))
}

fn fmt_f64(x: f64) -> String {
    // Shortest decimal string that round-trips exactly; normalize -0.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

/// Bare complex literal in `a+bi` form (no enclosing parentheses).
pub fn format_complex(s: Scalar) -> String {
    if s.im == 0.0 {
        fmt_f64(s.re)
    } else if s.re == 0.0 {
        format!("{}i", fmt_f64(s.im))
    } else if s.im < 0.0 {
        format!("{}-{}i", fmt_f64(s.re), fmt_f64(-s.im))
    } else {
        format!("{}+{}i", fmt_f64(s.re), fmt_f64(s.im))
    }
}

/// Complex literal safe to embed as a factor of a product: mixed
/// real/imaginary literals are parenthesized.
fn complex_atom(s: Scalar) -> String {
    if s.im == 0.0 || s.re == 0.0 {
        format_complex(s)
    } else {
        format!("({})", format_complex(s))
    }
}

/// Polynomial in `c0 + c1*z + c2*z^2` shape, skipping zero coefficients.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut pieces = Vec::new();
    for (k, &coef) in p.coeffs().iter().enumerate() {
        if coef.re == 0.0 && coef.im == 0.0 {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{k}"),
        };
        let piece = if var.is_empty() {
            complex_atom(coef)
        } else if coef == re(1.0) {
            var
        } else {
            format!("{}*{}", complex_atom(coef), var)
        };
        pieces.push(piece);
    }
    if pieces.is_empty() {
        "0".to_string()
    } else {
        pieces.join(" + ")
    }
}

/// Canonical text form: terms joined by `" + "`, each `(<poly>)*exp(<poly>)`.
/// Inverse of [`parse_expr`] up to tolerance equality.
pub fn format_expr(x: &ExpPoly) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.terms()
        .iter()
        .map(|t| format!("({})*exp({})", format_poly(t.coeff()), format_poly(t.freq())))
        .collect::<Vec<_>>()
        .join(" + ")
}
