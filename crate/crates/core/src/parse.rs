//! Text grammar for field elements, polynomials, rational functions and field
//! specifications, plus the matching renderers.
//!
//! Expressions use `+ - * / ^`, parentheses, unsigned integers and the
//! variables `t` (the function field variable), `s` (generator of F_q over
//! F_p) and `u1, u2, …` (tower radicals). A coefficient may be juxtaposed with
//! a variable or a parenthesized group, so `2t^2` and `(1+s)t` are accepted.
//! Exponents are unsigned integers.

use crate::error::{Error, ParseError, Result};
use crate::ffield::{Fe, Field};
use crate::polyring::{Polynomial, RationalFunction};

/// Maximum nesting depth of parentheses and unary operators.
pub const MAX_DEPTH: usize = 128;
/// Maximum degree of any intermediate polynomial while evaluating.
pub const MAX_DEGREE: i64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Var {
    T,
    S,
    U(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Expr {
    Int(u64),
    Var(Var, usize),
    /// Terms with a negation flag. Chains are flat so that tree depth is
    /// bounded by the nesting depth alone.
    Sum(Vec<(bool, Expr)>),
    /// Factors with a division flag and the operator offset.
    Product(Vec<(bool, Expr, usize)>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u64, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&(_, d)) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as u64))
                        .ok_or_else(|| ParseError::new(pos, "integer literal too large"))?;
                    chars.next();
                }
                out.push((Tok::Int(n), pos));
                continue;
            }
            't' => Tok::Var(Var::T),
            's' => Tok::Var(Var::S),
            'u' => {
                chars.next();
                let mut idx: usize = 0;
                let mut seen = false;
                while let Some(&(_, d)) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    idx = idx
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as usize))
                        .ok_or_else(|| ParseError::new(pos, "radical index too large"))?;
                    seen = true;
                    chars.next();
                }
                if !seen || idx == 0 {
                    return Err(ParseError::new(pos, "expected radical index after 'u'"));
                }
                out.push((Tok::Var(Var::U(idx)), pos));
                continue;
            }
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("unexpected character '{other}'"),
                ))
            }
        };
        chars.next();
        out.push((tok, pos));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::new(self.offset(), msg)
    }

    fn enter(&mut self) -> std::result::Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        Ok(())
    }

    fn sum(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut terms = vec![(false, self.product()?)];
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
            terms.push((negate, self.product()?));
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap().1
        } else {
            Expr::Sum(terms)
        })
    }

    fn product(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut factors = vec![(false, self.unary()?, 0)];
        loop {
            let at = self.offset();
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push((false, self.unary()?, at));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    factors.push((true, self.unary()?, at));
                }
                // Juxtaposition: `2t`, `3(t+1)`, `(1+s)t`.
                Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    factors.push((false, self.power()?, at));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap().1
        } else {
            Expr::Product(factors)
        })
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(Expr::Neg(Box::new(inner)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(inner)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        self.pos += 1;
        match self.peek() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), k, at))
            }
            _ => Err(self.err("expected unsigned integer exponent")),
        }
    }

    fn atom(&mut self) -> std::result::Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Expr::Var(v, at))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                self.enter()?;
                let inner = self.sum()?;
                self.depth -= 1;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.err("expected a number, variable or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub(crate) fn parse_expr(src: &str) -> std::result::Result<Expr, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: src.len(),
        depth: 0,
    };
    let expr = parser.sum()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(expr)
}

/// Target of expression evaluation.
pub(crate) trait Algebra {
    type V;
    fn int(&self, n: u64) -> Self::V;
    fn var(&self, v: Var, offset: usize) -> Result<Self::V>;
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn div(&self, a: Self::V, b: Self::V, offset: usize) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Result<Self::V>;
    fn pow(&self, a: Self::V, k: u64, offset: usize) -> Result<Self::V>;
}

pub(crate) fn eval<A: Algebra>(alg: &A, expr: &Expr) -> Result<A::V> {
    Ok(match expr {
        Expr::Int(n) => alg.int(*n),
        Expr::Var(v, at) => alg.var(*v, *at)?,
        Expr::Sum(terms) => {
            let mut acc = eval(alg, &terms[0].1)?;
            if terms[0].0 {
                acc = alg.neg(acc)?;
            }
            for (negate, term) in &terms[1..] {
                let v = eval(alg, term)?;
                acc = if *negate {
                    alg.sub(acc, v)?
                } else {
                    alg.add(acc, v)?
                };
            }
            acc
        }
        Expr::Product(factors) => {
            let mut acc = eval(alg, &factors[0].1)?;
            for (divide, factor, at) in &factors[1..] {
                let v = eval(alg, factor)?;
                acc = if *divide {
                    alg.div(acc, v, *at)?
                } else {
                    alg.mul(acc, v)?
                };
            }
            acc
        }
        Expr::Neg(a) => alg.neg(eval(alg, a)?)?,
        Expr::Pow(a, k, at) => alg.pow(eval(alg, a)?, *k, *at)?,
    })
}

/// F_q(t) with a chosen name for the polynomial variable.
pub(crate) struct RationalAlgebra<'a> {
    pub field: &'a Field,
    /// Name of the transcendental variable: `t`, or `s` for moduli over F_p.
    pub variable: Var,
}

pub(crate) fn degree_guard(deg: i64, offset: usize) -> Result<()> {
    if deg > MAX_DEGREE {
        return Err(ParseError::new(offset, format!("degree exceeds {MAX_DEGREE}")).into());
    }
    Ok(())
}

fn height(r: &RationalFunction) -> i64 {
    r.num().deg().max(r.den().deg())
}

fn sum_guard(a: &RationalFunction, b: &RationalFunction) -> Result<()> {
    if a.den() == b.den() {
        return Ok(());
    }
    degree_guard(height(a).max(height(b)) + a.den().deg() + b.den().deg(), 0)
}

impl Algebra for RationalAlgebra<'_> {
    type V = RationalFunction;

    fn int(&self, n: u64) -> RationalFunction {
        let p = self.field.characteristic() as u64;
        RationalFunction::from_int(self.field, (n % p) as i64)
    }

    fn var(&self, v: Var, offset: usize) -> Result<RationalFunction> {
        if v == self.variable {
            return Ok(RationalFunction::t(self.field));
        }
        match v {
            Var::S if self.field.degree() > 1 => Ok(RationalFunction::constant(
                self.field,
                self.field.from_digits(&[0, 1]),
            )),
            Var::S => {
                Err(ParseError::new(offset, "'s' is only defined over F_q with e > 1").into())
            }
            Var::T => Err(ParseError::new(offset, "'t' is not allowed here").into()),
            Var::U(_) => Err(ParseError::new(offset, "tower radicals are not allowed here").into()),
        }
    }

    fn add(&self, a: RationalFunction, b: RationalFunction) -> Result<RationalFunction> {
        sum_guard(&a, &b)?;
        Ok(&a + &b)
    }

    fn sub(&self, a: RationalFunction, b: RationalFunction) -> Result<RationalFunction> {
        sum_guard(&a, &b)?;
        Ok(&a - &b)
    }

    fn mul(&self, a: RationalFunction, b: RationalFunction) -> Result<RationalFunction> {
        degree_guard(height(&a) + height(&b), 0)?;
        Ok(&a * &b)
    }

    fn div(
        &self,
        a: RationalFunction,
        b: RationalFunction,
        offset: usize,
    ) -> Result<RationalFunction> {
        degree_guard(height(&a) + height(&b), offset)?;
        a.div(&b)
    }

    fn neg(&self, a: RationalFunction) -> Result<RationalFunction> {
        Ok(-&a)
    }

    fn pow(&self, a: RationalFunction, k: u64, offset: usize) -> Result<RationalFunction> {
        let h = height(&a).max(0) as u64;
        if h > 0 && h.saturating_mul(k) > MAX_DEGREE as u64 {
            return Err(ParseError::new(offset, format!("degree exceeds {MAX_DEGREE}")).into());
        }
        if let Some(c) = a.as_constant() {
            return Ok(RationalFunction::constant(self.field, self.field.pow(c, k)));
        }
        a.pow(k as i64)
    }
}

/// Parses an element of F_q(t).
pub fn parse_ratfunc(field: &Field, src: &str) -> Result<RationalFunction> {
    let expr = parse_expr(src)?;
    eval(
        &RationalAlgebra {
            field,
            variable: Var::T,
        },
        &expr,
    )
}

/// Parses an element of F_q[t]; quotients are allowed when they cancel.
pub fn parse_poly(field: &Field, src: &str) -> Result<Polynomial> {
    let r = parse_ratfunc(field, src)?;
    match r.as_polynomial() {
        Some(p) => Ok(p.clone()),
        None => Err(ParseError::new(0, format!("{r} is not a polynomial")).into()),
    }
}

/// Parses an element of F_q such as `3` or `(1+2*s)`.
pub fn parse_field_elem(field: &Field, src: &str) -> Result<Fe> {
    let r = parse_ratfunc(field, src)?;
    match r.as_constant() {
        Some(c) => Ok(c),
        None => Err(ParseError::new(0, format!("{r} is not a constant")).into()),
    }
}

/// Parses `p=5` or `p=3,e=2,mod=s^2+1`. Without `mod` the first monic
/// irreducible of degree e in canonical order is used.
pub fn parse_field_spec(src: &str) -> Result<Field> {
    let mut p = None;
    let mut e = None;
    let mut modulus = None;
    let mut offset = 0;
    for part in src.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            return Err(ParseError::new(offset, "expected key=value").into());
        };
        let value_offset = offset + key.len() + 1;
        let slot_err =
            |what: &str| -> Error { ParseError::new(offset, format!("duplicate {what}")).into() };
        match key.trim() {
            "p" => {
                if p.is_some() {
                    return Err(slot_err("p"));
                }
                p = Some(parse_uint(value, value_offset)?);
            }
            "e" => {
                if e.is_some() {
                    return Err(slot_err("e"));
                }
                e = Some(parse_uint(value, value_offset)?);
            }
            "mod" => {
                if modulus.is_some() {
                    return Err(slot_err("mod"));
                }
                modulus = Some((value.to_string(), value_offset));
            }
            other => {
                return Err(ParseError::new(offset, format!("unknown key '{}'", other)).into());
            }
        }
        offset += part.len() + 1;
    }
    let p = p.ok_or_else(|| ParseError::new(0, "missing p"))?;
    let e = e.unwrap_or(1);
    let p32 = u32::try_from(p).map_err(|_| Error::precondition("p out of range"))?;
    let e32 = u32::try_from(e).map_err(|_| Error::precondition("e out of range"))?;
    // Validate p before using it to evaluate the modulus.
    let prime = Field::prime(p32)?;
    let digits = match modulus {
        None => None,
        Some((text, at)) => {
            let expr = parse_expr(&text).map_err(|mut err| {
                err.offset += at;
                err
            })?;
            let m = eval(
                &RationalAlgebra {
                    field: &prime,
                    variable: Var::S,
                },
                &expr,
            )?;
            let m = m
                .as_polynomial()
                .ok_or_else(|| ParseError::new(at, "modulus must be a polynomial in s"))?;
            Some(m.coeffs().iter().map(|c| c.code()).collect())
        }
    };
    Field::new(p32, e32, digits)
}

fn parse_uint(value: &str, offset: usize) -> Result<u64> {
    value.trim().parse::<u64>().map_err(|_| {
        ParseError::new(
            offset,
            format!("expected unsigned integer, got '{}'", value.trim()),
        )
        .into()
    })
}

/// Renders a polynomial in descending degree with no spaces.
pub(crate) fn render_poly(p: &Polynomial, var: char) -> String {
    let field = p.field();
    let mut out = String::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        let coeff = field.render(c);
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            i => format!("{var}^{i}"),
        };
        match (i, c == Fe::ONE) {
            (0, _) => out.push_str(&coeff),
            (_, true) => out.push_str(&mono),
            _ => {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn is_single_term(p: &Polynomial) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
}

/// Renders `num` alone for polynomials, otherwise `num/(den)` with the
/// numerator parenthesized when it has several terms.
pub(crate) fn render_ratfunc(r: &RationalFunction) -> String {
    let num = render_poly(r.num(), 't');
    if r.is_polynomial() {
        return num;
    }
    let den = render_poly(r.den(), 't');
    if is_single_term(r.num()) {
        format!("{num}/({den})")
    } else {
        format!("({num})/({den})")
    }
}
