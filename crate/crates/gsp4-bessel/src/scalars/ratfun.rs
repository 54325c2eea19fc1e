//! Univariate rational functions in `X` (standing for `q^-s`) over [`Scalar`].

use std::fmt;

use super::mpoly::Var;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense polynomial in `X`, lowest degree first, no trailing zeros.
pub type XPoly = Vec<Scalar>;

fn trim(p: &mut XPoly) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

pub fn padd(a: &[Scalar], b: &[Scalar]) -> XPoly {
    let n = a.len().max(b.len());
    let mut out: XPoly = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(&mut out);
    out
}

pub fn pneg(a: &[Scalar]) -> XPoly {
    a.iter().map(|c| -c).collect()
}

pub fn pmul(a: &[Scalar], b: &[Scalar]) -> XPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(&mut out);
    out
}

fn pscale(a: &[Scalar], c: &Scalar) -> XPoly {
    let mut out: XPoly = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

fn pdivrem(a: &[Scalar], b: &[Scalar]) -> (XPoly, XPoly) {
    let mut r: XPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inv().expect("nonzero leading coefficient");
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Scalar::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let t = &r[dr] * &inv;
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] = &r[dr - db + i] - &(&t * bc);
        }
        q[dr - db] = t;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn pgcd(a: &[Scalar], b: &[Scalar]) -> XPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = pdivrem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        a = pscale(&a, &l.inv().expect("nonzero"));
    }
    a
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: XPoly,
    den: XPoly,
}

impl RationalFunction {
    pub fn from_parts(num: XPoly, den: XPoly) -> Result<RationalFunction> {
        let mut num = num;
        let mut den = den;
        trim(&mut num);
        trim(&mut den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(RationalFunction::zero());
        }
        let g = pgcd(&num, &den);
        if g.len() > 1 {
            num = pdivrem(&num, &g).0;
            den = pdivrem(&den, &g).0;
        }
        // Normalize den(0) = 1 when possible, otherwise make den monic.
        let lead = if !den[0].is_zero() { den[0].clone() } else { den.last().unwrap().clone() };
        let inv = lead.inv()?;
        Ok(RationalFunction { num: pscale(&num, &inv), den: pscale(&den, &inv) })
    }

    pub fn zero() -> RationalFunction {
        RationalFunction { num: Vec::new(), den: vec![Scalar::one()] }
    }

    pub fn constant(c: Scalar) -> RationalFunction {
        let mut num = vec![c];
        trim(&mut num);
        RationalFunction { num, den: vec![Scalar::one()] }
    }

    pub fn one() -> RationalFunction {
        RationalFunction::constant(Scalar::one())
    }

    pub fn x() -> RationalFunction {
        RationalFunction::monomial(Scalar::one(), 1)
    }

    /// `c * X^k`.
    pub fn monomial(c: Scalar, k: usize) -> RationalFunction {
        let mut num = vec![Scalar::zero(); k];
        num.push(c);
        trim(&mut num);
        RationalFunction { num, den: vec![Scalar::one()] }
    }

    pub fn polynomial(coeffs: XPoly) -> RationalFunction {
        RationalFunction::from_parts(coeffs, vec![Scalar::one()]).expect("nonzero denominator")
    }

    pub fn num(&self) -> &[Scalar] {
        &self.num
    }

    pub fn den(&self) -> &[Scalar] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::from_parts(padd(&self.num, &o.num), self.den.clone()).unwrap();
        }
        RationalFunction::from_parts(
            padd(&pmul(&self.num, &o.den), &pmul(&o.num, &self.den)),
            pmul(&self.den, &o.den),
        )
        .unwrap()
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: pneg(&self.num), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::from_parts(pmul(&self.num, &o.num), pmul(&self.den, &o.den)).unwrap()
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::from_parts(pmul(&self.num, &o.den), pmul(&self.den, &o.num))
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        RationalFunction::one().div(self)
    }

    /// Equality by cross multiplication, independent of normal forms.
    pub fn cross_eq(&self, o: &RationalFunction) -> bool {
        padd(&pmul(&self.num, &o.den), &pneg(&pmul(&o.num, &self.den))).is_empty()
    }

    /// Power series coefficients of degrees `0..n`; needs `den(0) != 0`.
    pub fn series(&self, n: usize) -> Result<Vec<Scalar>> {
        let d0 = self.den.first().cloned().unwrap_or_else(Scalar::zero);
        if d0.is_zero() {
            return Err(Error::Degenerate("denominator vanishes at X = 0".into()));
        }
        let inv = d0.inv()?;
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(Scalar::zero);
            for j in 1..self.den.len().min(k + 1) {
                acc = &acc - &(&self.den[j] * &out[k - j]);
            }
            out.push(&acc * &inv);
        }
        Ok(out)
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let ev = |p: &[Scalar]| p.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c);
        ev(&self.num).checked_div(&ev(&self.den))
    }

    pub fn substitute(&self, v: Var, val: &Scalar) -> Result<RationalFunction> {
        let s = |p: &[Scalar]| p.iter().map(|c| c.substitute(v, val)).collect::<Result<XPoly>>();
        RationalFunction::from_parts(s(&self.num)?, s(&self.den)?)
    }
}

/// `c0 / (1 - r X^k)`, the closed form of `sum_l c0 r^l X^(kl)`.
pub fn geometric_closed_form(c0: &Scalar, r: &Scalar, k: usize) -> Result<RationalFunction> {
    if k == 0 {
        return Err(Error::ParamDomain("geometric series step k must be >= 1".into()));
    }
    let mut den = vec![Scalar::zero(); k + 1];
    den[0] = Scalar::one();
    den[k] = -r;
    RationalFunction::from_parts(vec![c0.clone()], den)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::format_ratfun(self))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
