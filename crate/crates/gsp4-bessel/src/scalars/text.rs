//! Canonical text form of scalars and rational functions, and its parser.
//!
//! Roots of unity print as `z[a/b]` (meaning `exp(2 pi i a/b)`), the
//! indeterminates as `at`, `bt`, `omg`, `lam`, and the rational-function
//! variable as `X`.  Printing a canonical value and parsing it back gives
//! the same value, so printed strings compare exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::cyc::{Cyc, UnitRootExp, Q};
use super::mpoly::{MPoly, Mono, Var, NVARS, VAR_NAMES};
use super::ratfun::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

fn format_mono(m: &Mono) -> String {
    let mut parts = Vec::new();
    for i in 0..NVARS {
        match m[i] {
            0 => {}
            1 => parts.push(VAR_NAMES[i].to_string()),
            e => parts.push(format!("{}^{}", VAR_NAMES[i], e)),
        }
    }
    parts.join("*")
}

fn is_compound(s: &str) -> bool {
    s.contains(' ')
}

fn with_factor(coeff: String, factor: &str) -> String {
    if factor.is_empty() {
        return coeff;
    }
    match coeff.as_str() {
        "1" => factor.to_string(),
        "-1" => format!("-{}", factor),
        _ if is_compound(&coeff) => format!("({})*{}", coeff, factor),
        _ => format!("{}*{}", coeff, factor),
    }
}

pub fn format_cyc(c: &Cyc) -> String {
    c.to_string()
}

pub fn format_mpoly(p: &MPoly) -> String {
    let terms: Vec<String> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let cs = format_cyc(c);
            let ms = format_mono(m);
            if ms.is_empty() && is_compound(&cs) && p.num_terms() > 1 {
                format!("({})", cs)
            } else {
                with_factor(cs, &ms)
            }
        })
        .collect();
    join_terms(terms)
}

fn format_fraction(num: String, den: String) -> String {
    if den == "1" {
        return num;
    }
    let n = if is_compound(&num) { format!("({})", num) } else { num };
    let d = if is_compound(&den) || den.contains('*') || den.contains('/') {
        format!("({})", den)
    } else {
        den
    };
    format!("{}/{}", n, d)
}

pub fn format_scalar(s: &Scalar) -> String {
    format_fraction(format_mpoly(s.num()), format_mpoly(s.den()))
}

fn format_xpoly(p: &[Scalar]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let cs = format_scalar(c);
            let xs = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{}", k),
            };
            if xs.is_empty() && is_compound(&cs) && p.iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({})", cs)
            } else {
                with_factor(cs, &xs)
            }
        })
        .collect();
    join_terms(terms)
}

pub fn format_ratfun(f: &RationalFunction) -> String {
    format_fraction(format_xpoly(f.num()), format_xpoly(f.den()))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Root(i64, u64),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    while i < b.len() {
        let ch = b[i] as char;
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Int(s[st..i].parse().map_err(|_| err(st, "bad integer"))?)));
        } else if ch.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                i += 1;
            }
            let id = &s[st..i];
            if id == "z" && i < b.len() && b[i] == b'[' {
                let close = s[i..].find(']').ok_or_else(|| err(i, "unterminated z["))? + i;
                let inner = &s[i + 1..close];
                let (n, d) = inner.split_once('/').ok_or_else(|| err(i, "expected a/b in z[]"))?;
                let n: i64 = n.trim().parse().map_err(|_| err(i, "bad root numerator"))?;
                let d: u64 = d.trim().parse().map_err(|_| err(i, "bad root denominator"))?;
                if d == 0 {
                    return Err(err(i, "zero root denominator"));
                }
                out.push((st, Tok::Root(n, d)));
                i = close + 1;
            } else {
                out.push((st, Tok::Ident(id.to_string())));
            }
        } else if "+-*/^()".contains(ch) {
            out.push((i, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(err(i, &format!("unexpected character {:?}", ch)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.here(), msg: msg.to_string() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.factor()?);
            } else if self.eat('/') {
                let pos = self.here();
                let d = self.factor()?;
                acc = acc.div(&d).map_err(|_| Error::Parse { pos, msg: "division by zero".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Int(n)) => {
                    let n: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    n
                }
                _ => return Err(self.err("expected integer exponent")),
            };
            let mut acc = RationalFunction::one();
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            if neg {
                acc = acc.inv().map_err(|_| self.err("zero to a negative power"))?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RationalFunction> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(RationalFunction::constant(Scalar::from_q(Q::from_integer(n)))),
            Tok::Root(n, d) => Ok(RationalFunction::constant(Scalar::root(UnitRootExp::new(n, d)))),
            Tok::Ident(id) if id == "X" => Ok(RationalFunction::x()),
            Tok::Ident(id) => match Var::from_name(&id) {
                Some(v) => Ok(RationalFunction::constant(Scalar::var(v))),
                None => {
                    self.pos -= 1;
                    Err(self.err(&format!("unknown identifier {}", id)))
                }
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected )"));
                }
                Ok(e)
            }
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(&format!("unexpected {:?}", c)))
            }
        }
    }
}

pub fn parse_ratfun(s: &str) -> Result<RationalFunction> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let f = parse_ratfun(s)?;
    if f.den().len() != 1 || f.num().len() > 1 {
        return Err(Error::Parse { pos: 0, msg: "expression depends on X".into() });
    }
    let c = f.num().first().cloned().unwrap_or_else(Scalar::zero);
    c.checked_div(&f.den()[0])
}

/// Rational number in plain `a/b` form, used in report headers.
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        format_scalar(&parse_scalar(s).unwrap())
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(rt("1/27"), "1/27");
        assert_eq!(rt("z[1/4]*z[1/4]"), "-1");
        assert_eq!(rt("(at^2 - bt^2)/(at - bt)"), "at + bt");
        assert_eq!(rt("-(5 - 1)/(1 - lam^-1)"), "-4*lam/(lam - 1)");
        assert_eq!(rt("1/(at*lam)"), "1/(at*lam)");
    }

    #[test]
    fn round_trip_exact() {
        for s in [
            "3/2*z[1/5] - z[2/5] + 7",
            "(1 + z[1/3])*at^2*lam - omg/(lam + 1)",
            "1/(at*bt + z[1/8])",
            "-at^3",
        ] {
            let v = parse_scalar(s).unwrap();
            let printed = format_scalar(&v);
            assert_eq!(parse_scalar(&printed).unwrap(), v, "{s} -> {printed}");
            assert_eq!(format_scalar(&parse_scalar(&printed).unwrap()), printed);
        }
        let f = parse_ratfun("(1/4 + at*X^3)/(1 - omg*X^3)").unwrap();
        let printed = format_ratfun(&f);
        assert_eq!(parse_ratfun(&printed).unwrap(), f);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("at +").is_err());
        assert!(parse_scalar("foo").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("X").is_err());
    }
}
