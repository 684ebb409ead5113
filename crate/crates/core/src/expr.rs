//! Input language for differential forms.
//!
//! Expressions are built from integer literals, `sqrt(c)` for a rational
//! constant `c`, the imaginary unit `i` and the cube root of unity
//! `j = (-1+sqrt(-3))/2` (unless used as chart variables), chart
//! variables, differentials `d<var>`, and the operators `+ - * / ^` with
//! integer exponents. Juxtaposition multiplies, so
//! `1/z dz` reads as `(1/z)·dz`. The result is `P·d(var₀) + Q·d(var₁)`
//! with rational-function coefficients.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{BiPoly, BiRat, QuadNumber, Rational};
use crate::error::{Error, Result};

/// Conventional coordinate pairs, tried before falling back to alphabetical order.
const PAIRS: [(&str, &str); 4] = [("x", "y"), ("z", "w"), ("u", "v"), ("s", "t")];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
enum Expr {
    Num(BigInt),
    Ident(String, usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
    Sqrt(Box<Expr>, usize),
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().map(|&(_, c)| c).collect();
            if k < chars.len() && chars[k].1 == '.' {
                return Err(syntax(chars[k].0, "decimal literals are not exact; write p/q"));
            }
            out.push((Tok::Num(s.parse().expect("digits")), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().map(|&(_, c)| c).collect()), pos));
        } else {
            let t = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(pos, format!("unexpected character '{c}'"))),
            };
            out.push((t, pos));
            k += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    k: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map_or(self.end, |&(_, p)| p)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            let p = self.pos();
            self.k += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(c, Box::new(lhs), Box::new(rhs), p);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let p = self.pos();
            let op = match self.peek() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    let c = *c;
                    self.k += 1;
                    c
                }
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen) => '*',
                _ => break,
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs), p);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.k += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.k += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            let p = self.pos();
            self.k += 1;
            let neg = if let Some(Tok::Op('-')) = self.peek() {
                self.k += 1;
                true
            } else {
                false
            };
            let e = match self.toks.get(self.k) {
                Some((Tok::Num(n), _)) => n.to_i64().ok_or_else(|| syntax(p, "exponent too large"))?,
                _ => return Err(syntax(self.pos(), "expected an integer exponent")),
            };
            self.k += 1;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, p));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let p = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.k += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.k += 1;
                if name == "sqrt" {
                    if self.peek() != Some(&Tok::LParen) {
                        return Err(syntax(self.pos(), "expected '(' after sqrt"));
                    }
                    self.k += 1;
                    let arg = self.expr()?;
                    self.close()?;
                    return Ok(Expr::Sqrt(Box::new(arg), p));
                }
                Ok(Expr::Ident(name, p))
            }
            Some(Tok::LParen) => {
                self.k += 1;
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Some(t) => Err(syntax(p, format!("unexpected token {t:?}"))),
            None => Err(syntax(p, "unexpected end of input")),
        }
    }

    fn close(&mut self) -> Result<()> {
        if self.peek() != Some(&Tok::RParen) {
            return Err(syntax(self.pos(), "expected ')'"));
        }
        self.k += 1;
        Ok(())
    }
}

fn parse(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        k: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.k < p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(e)
}

fn collect_idents(e: &Expr, out: &mut BTreeSet<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Ident(n, _) => {
            out.insert(n.clone());
        }
        Expr::Neg(a) | Expr::Pow(a, _, _) | Expr::Sqrt(a, _) => collect_idents(a, out),
        Expr::Bin(_, a, b, _) => {
            collect_idents(a, out);
            collect_idents(b, out);
        }
    }
}

fn differential_of(name: &str) -> Option<&str> {
    name.strip_prefix('d').filter(|r| !r.is_empty())
}

/// Orders two variable names by the conventional pairs, else alphabetically.
fn order_vars(found: &BTreeSet<String>) -> Option<(String, String)> {
    let v: Vec<&String> = found.iter().collect();
    match v.len() {
        0 => Some(("x".into(), "y".into())),
        1 => {
            for (a, b) in PAIRS {
                if v[0] == a || v[0] == b {
                    return Some((a.into(), b.into()));
                }
            }
            None
        }
        2 => {
            for (a, b) in PAIRS {
                if (v[0] == a && v[1] == b) || (v[0] == b && v[1] == a) {
                    return Some((a.into(), b.into()));
                }
            }
            Some((v[0].clone(), v[1].clone()))
        }
        _ => None,
    }
}

/// A parsed form `p·d(var₀) + q·d(var₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedForm {
    pub vars: (String, String),
    pub p: BiRat,
    pub q: BiRat,
}

#[derive(Clone, Debug)]
enum Val {
    Scalar(BiRat),
    Form(BiRat, BiRat),
}

struct Eval<'a> {
    vars: (&'a str, &'a str),
}

fn join(a: &BiRat, b: &BiRat) -> Result<()> {
    QuadNumber::join_tower(a.tower()?, b.tower()?).map(|_| ())
}

fn join_val(a: &Val, b: &Val) -> Result<()> {
    let parts = |v: &Val| match v {
        Val::Scalar(s) => vec![s.clone()],
        Val::Form(p, q) => vec![p.clone(), q.clone()],
    };
    for x in parts(a) {
        for y in parts(b) {
            join(&x, &y)?;
        }
    }
    Ok(())
}

impl Eval<'_> {
    fn eval(&self, e: &Expr) -> Result<Val> {
        Ok(match e {
            Expr::Num(n) => Val::Scalar(BiRat::constant(QuadNumber::from_rational(Rational::from_integer(n.clone())))),
            Expr::Ident(name, pos) => {
                if name == self.vars.0 {
                    Val::Scalar(BiRat::from_poly(BiPoly::x()))
                } else if name == self.vars.1 {
                    Val::Scalar(BiRat::from_poly(BiPoly::y()))
                } else if let Some(v) = differential_of(name) {
                    if v == self.vars.0 {
                        Val::Form(BiRat::one(), BiRat::zero())
                    } else if v == self.vars.1 {
                        Val::Form(BiRat::zero(), BiRat::one())
                    } else {
                        return Err(syntax(*pos, format!("differential of unknown variable '{v}'")));
                    }
                } else if name == "i" {
                    Val::Scalar(BiRat::constant(QuadNumber::i()))
                } else if name == "j" {
                    Val::Scalar(BiRat::constant(QuadNumber::j()))
                } else {
                    return Err(syntax(*pos, format!("unknown identifier '{name}'")));
                }
            }
            Expr::Neg(a) => match self.eval(a)? {
                Val::Scalar(s) => Val::Scalar(s.neg()),
                Val::Form(p, q) => Val::Form(p.neg(), q.neg()),
            },
            Expr::Sqrt(arg, pos) => {
                let v = match self.eval(arg)? {
                    Val::Scalar(s) => s.as_constant(),
                    Val::Form(..) => None,
                };
                let r = v
                    .and_then(|c| c.as_rational().cloned())
                    .ok_or_else(|| syntax(*pos, "sqrt takes a rational constant"))?;
                Val::Scalar(BiRat::constant(QuadNumber::sqrt_rational(&r)?))
            }
            Expr::Pow(base, k, pos) => match self.eval(base)? {
                Val::Scalar(s) => Val::Scalar(s.pow(*k)?),
                Val::Form(..) => return Err(syntax(*pos, "cannot raise a differential to a power")),
            },
            Expr::Bin(op, a, b, pos) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                join_val(&x, &y)?;
                match (op, x, y) {
                    ('+', Val::Scalar(s), Val::Scalar(t)) => Val::Scalar(s.add(&t)),
                    ('-', Val::Scalar(s), Val::Scalar(t)) => Val::Scalar(s.sub(&t)),
                    ('+', Val::Form(p, q), Val::Form(r, s)) => Val::Form(p.add(&r), q.add(&s)),
                    ('-', Val::Form(p, q), Val::Form(r, s)) => Val::Form(p.sub(&r), q.sub(&s)),
                    ('+' | '-', Val::Scalar(s), f @ Val::Form(..)) if s.is_zero() => {
                        if *op == '-' {
                            self.eval(&Expr::Neg(b.clone()))?
                        } else {
                            f
                        }
                    }
                    ('+' | '-', f @ Val::Form(..), Val::Scalar(s)) if s.is_zero() => f,
                    ('+' | '-', ..) => {
                        return Err(syntax(*pos, "cannot add a function to a differential form"))
                    }
                    ('*', Val::Scalar(s), Val::Scalar(t)) => Val::Scalar(s.mul(&t)),
                    ('*', Val::Scalar(s), Val::Form(p, q)) | ('*', Val::Form(p, q), Val::Scalar(s)) => {
                        Val::Form(s.mul(&p), s.mul(&q))
                    }
                    ('*', ..) => return Err(syntax(*pos, "product of two differentials")),
                    ('/', num, Val::Scalar(t)) => {
                        if t.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        match num {
                            Val::Scalar(s) => Val::Scalar(s.div(&t)?),
                            Val::Form(p, q) => Val::Form(p.div(&t)?, q.div(&t)?),
                        }
                    }
                    ('/', ..) => return Err(syntax(*pos, "division by a differential")),
                    _ => unreachable!("operator set is closed"),
                }
            }
        })
    }
}

/// Parses a 1-form; variables are inferred unless given.
pub fn parse_form(text: &str, vars: Option<(&str, &str)>) -> Result<ParsedForm> {
    let e = parse(text)?;
    let vars = match vars {
        Some((a, b)) => (a.to_string(), b.to_string()),
        None => {
            let mut ids = BTreeSet::new();
            collect_idents(&e, &mut ids);
            let mut found = BTreeSet::new();
            for id in &ids {
                if let Some(v) = differential_of(id) {
                    found.insert(v.to_string());
                }
            }
            for id in &ids {
                if differential_of(id).is_some() || ((id == "i" || id == "j") && !found.contains(id.as_str())) {
                    continue;
                }
                found.insert(id.clone());
            }
            order_vars(&found).ok_or_else(|| {
                syntax(
                    0,
                    format!(
                        "cannot infer a coordinate pair from {:?}",
                        found.iter().collect::<Vec<_>>()
                    ),
                )
            })?
        }
    };
    let ev = Eval {
        vars: (&vars.0, &vars.1),
    };
    let (p, q) = match ev.eval(&e)? {
        Val::Form(p, q) => (p, q),
        Val::Scalar(s) if s.is_zero() => (BiRat::zero(), BiRat::zero()),
        Val::Scalar(_) => return Err(syntax(0, "expression has no differential")),
    };
    Ok(ParsedForm { vars, p, q })
}

/// Parses a constant such as `1+sqrt(2)`, `2/3` or `i`.
pub fn parse_constant(text: &str) -> Result<QuadNumber> {
    let e = parse(text)?;
    let ev = Eval { vars: ("", "") };
    match ev.eval(&e)? {
        Val::Scalar(s) => s
            .as_constant()
            .ok_or_else(|| syntax(0, "expected a constant")),
        Val::Form(..) => Err(syntax(0, "expected a constant, found a differential")),
    }
}

impl ParsedForm {
    /// True when both coefficients are polynomials.
    pub fn is_polynomial(&self) -> bool {
        self.p.is_polynomial() && self.q.is_polynomial()
    }
}
