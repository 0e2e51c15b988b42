//! Text input: germs, polynomials, operators and polynomials in `s`.
//!
//! Grammar (all inputs):
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" integer)?
//! atom  := integer | identifier | "(" expr ")"
//! ```
//!
//! Germ variables are either `x, y` or `x1 .. xn`, never mixed. Operators
//! additionally accept `s` and derivative symbols `dx, dy` or `d1 .. dn`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{MPoly, Rat, SPoly};
use crate::dmodule::DiffOperator;

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 256;

/// A syntax or semantic error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push(Token {
                    tok: Tok::Num(n),
                    offset: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    offset: start,
                });
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::new(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push(Token { tok, offset: start });
        i += 1;
    }
    Ok(out)
}

/// Value domain the recursive-descent parser evaluates into.
trait Domain {
    type V: Clone;
    fn number(&self, n: BigInt) -> Self::V;
    fn ident(&self, name: &str, offset: usize) -> Result<Self::V, ParseError>;
    fn add(&self, a: Self::V, b: Self::V) -> Self::V;
    fn neg(&self, a: Self::V) -> Self::V;
    fn mul(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V, ParseError>;
    fn div(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V, ParseError>;
    fn pow(&self, a: Self::V, e: u32, offset: usize) -> Result<Self::V, ParseError> {
        let mut acc = a.clone();
        for _ in 1..e {
            acc = self.mul(acc, a.clone(), offset)?;
        }
        Ok(acc)
    }
    fn one(&self) -> Self::V;
}

struct Parser<'a, D: Domain> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
    domain: &'a D,
    depth: usize,
}

impl<'a, D: Domain> Parser<'a, D> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn parse_all(mut self) -> Result<D::V, ParseError> {
        if self.toks.is_empty() {
            return Err(ParseError::new(0, "empty input"));
        }
        let v = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(ParseError::new(self.offset(), "unexpected token"));
        }
        Ok(v)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.offset(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<D::V, ParseError> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.domain.add(acc, t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.domain.add(acc, self.domain.neg(t));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<D::V, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let off = self.offset();
                    self.pos += 1;
                    let u = self.unary()?;
                    acc = self.domain.mul(acc, u, off)?;
                }
                Some(Tok::Slash) => {
                    let off = self.offset();
                    self.pos += 1;
                    let u = self.unary()?;
                    acc = self.domain.div(acc, u, off)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<D::V, ParseError> {
        self.enter()?;
        let v = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let u = self.unary()?;
                self.domain.neg(u)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()?
            }
            _ => self.power()?,
        };
        self.depth -= 1;
        Ok(v)
    }

    fn power(&mut self) -> Result<D::V, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let off = self.offset();
        self.pos += 1;
        let e_off = self.offset();
        let e = match self.peek() {
            Some(Tok::Num(n)) => n.clone(),
            _ => return Err(ParseError::new(e_off, "expected a non-negative integer exponent")),
        };
        self.pos += 1;
        let e = e
            .to_u32()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::new(e_off, format!("exponent larger than {MAX_EXPONENT}")))?;
        if e == 0 {
            return Ok(self.domain.one());
        }
        self.domain.pow(base, e, off)
    }

    fn atom(&mut self) -> Result<D::V, ParseError> {
        let off = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.domain.number(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.domain.ident(&name, off)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(ParseError::new(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(_) => Err(ParseError::new(off, "expected a number, variable or `(`")),
            None => Err(ParseError::new(off, "unexpected end of input")),
        }
    }
}

fn run<D: Domain>(text: &str, toks: &[Token], domain: &D) -> Result<D::V, ParseError> {
    Parser {
        toks,
        pos: 0,
        end: text.len(),
        domain,
        depth: 0,
    }
    .parse_all()
}

/// Rational functions `num/den` in a fixed list of variables.
struct RatFuncs {
    names: Vec<String>,
}

impl Domain for RatFuncs {
    type V = (MPoly, MPoly);

    fn number(&self, n: BigInt) -> Self::V {
        let k = self.names.len();
        (MPoly::constant(k, Rat::from(n)), MPoly::one(k))
    }

    fn ident(&self, name: &str, offset: usize) -> Result<Self::V, ParseError> {
        let k = self.names.len();
        match self.names.iter().position(|n| n == name) {
            Some(i) => Ok((MPoly::var(k, i), MPoly::one(k))),
            None => Err(ParseError::new(offset, format!("unknown identifier `{name}`"))),
        }
    }

    fn add(&self, a: Self::V, b: Self::V) -> Self::V {
        if a.1 == b.1 {
            return (a.0 + b.0, a.1);
        }
        (&a.0 * &b.1 + &b.0 * &a.1, &a.1 * &b.1)
    }

    fn neg(&self, a: Self::V) -> Self::V {
        (-a.0, a.1)
    }

    fn mul(&self, a: Self::V, b: Self::V, _offset: usize) -> Result<Self::V, ParseError> {
        Ok((&a.0 * &b.0, &a.1 * &b.1))
    }

    fn div(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V, ParseError> {
        if b.0.is_zero() {
            return Err(ParseError::new(offset, "division by zero"));
        }
        Ok((&a.0 * &b.1, &a.1 * &b.0))
    }

    fn one(&self) -> Self::V {
        let k = self.names.len();
        (MPoly::one(k), MPoly::one(k))
    }
}

/// Operators: derivative-multi-index to coefficient in `Q[x, s]`.
struct Operators {
    names: Vec<String>,
    dnames: Vec<String>,
}

impl Operators {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn constant_value(&self, v: &DiffOperator) -> Option<Rat> {
        if !v.is_multiplication() {
            return None;
        }
        let mut it = v.terms();
        match (it.next(), it.next()) {
            (None, _) => Some(Rat::zero()),
            (Some((_, c)), None) if c.is_constant() => Some(c.constant_term()),
            _ => None,
        }
    }
}

impl Domain for Operators {
    type V = DiffOperator;

    fn number(&self, n: BigInt) -> DiffOperator {
        DiffOperator::coefficient(MPoly::constant(self.n() + 1, Rat::from(n)))
    }

    fn ident(&self, name: &str, offset: usize) -> Result<DiffOperator, ParseError> {
        let k = self.n();
        if name == "s" {
            return Ok(DiffOperator::coefficient(MPoly::var(k + 1, k)));
        }
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(DiffOperator::coefficient(MPoly::var(k + 1, i)));
        }
        if let Some(i) = self.dnames.iter().position(|n| n == name) {
            return Ok(DiffOperator::partial(k, i));
        }
        if looks_like_derivative(name) {
            return Err(ParseError::new(
                offset,
                format!("derivative `{name}` refers to an undeclared variable"),
            ));
        }
        Err(ParseError::new(offset, format!("unknown identifier `{name}`")))
    }

    fn add(&self, a: DiffOperator, b: DiffOperator) -> DiffOperator {
        a.add(&b)
    }

    fn neg(&self, a: DiffOperator) -> DiffOperator {
        a.scale(&Rat::from(-1))
    }

    fn mul(&self, a: DiffOperator, b: DiffOperator, offset: usize) -> Result<DiffOperator, ParseError> {
        a.compose_ordered(&b).ok_or_else(|| {
            ParseError::new(
                offset,
                "derivative symbols must stand to the right of polynomial coefficients",
            )
        })
    }

    fn div(&self, a: DiffOperator, b: DiffOperator, offset: usize) -> Result<DiffOperator, ParseError> {
        match self.constant_value(&b) {
            Some(c) if !c.is_zero() => Ok(a.scale(&c.recip())),
            Some(_) => Err(ParseError::new(offset, "division by zero")),
            None => Err(ParseError::new(offset, "operators may only be divided by rational constants")),
        }
    }

    fn one(&self) -> DiffOperator {
        DiffOperator::identity(self.n())
    }
}

fn looks_like_derivative(name: &str) -> bool {
    let rest = match name.strip_prefix('d') {
        Some(r) => r,
        None => return false,
    };
    !rest.is_empty() && (rest.chars().all(|c| c.is_ascii_digit()) || rest.chars().all(|c| c.is_ascii_alphabetic()))
}

fn indexed_var(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&k: &usize| k <= 64)
}

/// The derivative symbol paired with a germ variable name.
pub fn derivative_name(var: &str) -> String {
    match indexed_var(var) {
        Some(k) => format!("d{k}"),
        None => format!("d{var}"),
    }
}

/// Infer the variable list from identifiers: `x, y` (plane mode, also the
/// default when no variable occurs) or `x1 .. xn` (indexed mode).
fn infer_vars(token_lists: &[&[Token]]) -> Result<Vec<String>, ParseError> {
    let mut plane = None;
    let mut indexed = None;
    let mut max_index = 0;
    for toks in token_lists {
        for t in toks.iter() {
            let Tok::Ident(name) = &t.tok else { continue };
            if name == "x" || name == "y" {
                if indexed.is_some() {
                    return Err(ParseError::new(t.offset, "cannot mix `x, y` with indexed variables"));
                }
                plane.get_or_insert(t.offset);
            } else if let Some(k) = indexed_var(name) {
                if plane.is_some() {
                    return Err(ParseError::new(t.offset, "cannot mix indexed variables with `x, y`"));
                }
                indexed.get_or_insert(t.offset);
                max_index = max_index.max(k);
            } else {
                return Err(ParseError::new(t.offset, format!("unknown identifier `{name}`")));
            }
        }
    }
    if indexed.is_some() {
        Ok((1..=max_index).map(|k| format!("x{k}")).collect())
    } else {
        Ok(vec!["x".to_string(), "y".to_string()])
    }
}

/// Parse a germ as a rational function; the result is not yet reduced.
pub(crate) fn parse_fraction(text: &str) -> Result<(MPoly, MPoly, Vec<String>), ParseError> {
    let toks = lex(text)?;
    let names = infer_vars(&[&toks])?;
    let dom = RatFuncs { names: names.clone() };
    let (num, den) = run(text, &toks, &dom)?;
    Ok((num, den, names))
}

/// Parse several polynomials over one jointly inferred variable list.
pub fn parse_polynomials(texts: &[&str]) -> Result<(Vec<MPoly>, Vec<String>), (usize, ParseError)> {
    let lexed: Vec<Vec<Token>> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| lex(t).map_err(|e| (i, e)))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&[Token]> = lexed.iter().map(Vec::as_slice).collect();
    let names = infer_vars(&refs).map_err(|e| {
        // Attribute the error to the first input containing the offset.
        let idx = lexed
            .iter()
            .position(|toks| toks.iter().any(|t| t.offset == e.offset))
            .unwrap_or(0);
        (idx, e)
    })?;
    let mut out = Vec::new();
    for (i, (text, toks)) in texts.iter().zip(&lexed).enumerate() {
        out.push(parse_polynomial_tokens(text, toks, &names).map_err(|e| (i, e))?);
    }
    Ok((out, names))
}

/// Parse a polynomial over the given variables.
pub fn parse_polynomial_in(text: &str, names: &[String]) -> Result<MPoly, ParseError> {
    let toks = lex(text)?;
    parse_polynomial_tokens(text, &toks, names)
}

fn parse_polynomial_tokens(text: &str, toks: &[Token], names: &[String]) -> Result<MPoly, ParseError> {
    let dom = RatFuncs { names: names.to_vec() };
    let (num, den) = run(text, toks, &dom)?;
    if den.is_constant() {
        return Ok(num.scale(&den.constant_term().recip()));
    }
    num.div_exact(&den)
        .ok_or_else(|| ParseError::new(0, "expected a polynomial, found a proper fraction"))
}

/// Parse a polynomial in the single variable `s`.
pub fn parse_spoly(text: &str) -> Result<SPoly, ParseError> {
    let toks = lex(text)?;
    let p = parse_polynomial_tokens(text, &toks, &["s".to_string()])?;
    Ok(p.to_upoly(0).expect("single variable"))
}

/// Parse a rational constant such as `-8/12`.
pub fn parse_rat(text: &str) -> Result<Rat, ParseError> {
    let toks = lex(text)?;
    let p = parse_polynomial_tokens(text, &toks, &[])?;
    Ok(p.constant_term())
}

/// Parse a differential operator over the given germ variables.
///
/// Terms are taken as already normally ordered: a derivative symbol may
/// only be followed (multiplicatively) by factors free of the variables.
pub fn parse_operator(text: &str, names: &[String]) -> Result<DiffOperator, ParseError> {
    let toks = lex(text)?;
    let dom = Operators {
        names: names.to_vec(),
        dnames: names.iter().map(|n| derivative_name(n)).collect(),
    };
    run(text, &toks, &dom)
}

/// Canonical text for an operator over the given germ variables.
pub fn print_operator(op: &DiffOperator, names: &[String]) -> String {
    let n: Vec<&str> = names.iter().map(String::as_str).collect();
    let d: Vec<String> = names.iter().map(|x| derivative_name(x)).collect();
    let dr: Vec<&str> = d.iter().map(String::as_str).collect();
    op.display(&n, &dr).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn lexer_positions() {
        let err = parse_fraction("x + $").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = parse_fraction("(x + y").unwrap_err();
        assert_eq!(err.offset, 6);
        let err = parse_fraction("x/0").unwrap_err();
        assert_eq!(err.offset, 1);
        let err = parse_fraction("x + x1").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn variables_inferred() {
        let (_, _, names) = parse_fraction("x3^2").unwrap();
        assert_eq!(names, vec!["x1", "x2", "x3"]);
        let (_, _, names) = parse_fraction("7").unwrap();
        assert_eq!(names, xy());
    }

    #[test]
    fn operators() {
        let op = parse_operator("(1/4)*dx^2", &xy()).unwrap();
        assert_eq!(print_operator(&op, &xy()), "1/4*dx^2");
        let op = parse_operator("s*x*dx + 1", &xy()).unwrap();
        assert_eq!(print_operator(&op, &xy()), "1 + x*s*dx");
        assert!(parse_operator("dx*x", &xy()).is_err());
        assert!(parse_operator("dz", &xy()).is_err());
        assert!(parse_operator("d3", &["x1".into(), "x2".into()]).is_err());
        let op = parse_operator("dx*(s+1)*dy", &xy()).unwrap();
        assert_eq!(print_operator(&op, &xy()), "(s + 1)*dx*dy");
    }

    #[test]
    fn spoly() {
        let b = parse_spoly("(s+1)*(s+1/2)").unwrap();
        assert_eq!(b.to_string(), "s^2 + 3/2*s + 1/2");
        assert!(parse_spoly("x").is_err());
        assert_eq!(parse_rat("-8/12").unwrap(), crate::algebra::q(-2, 3));
    }
}
