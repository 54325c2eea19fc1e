//! Sparse multivariate polynomials over [`Cyc`] in the fixed variables
//! `at, bt, omg, lam`.

use std::collections::BTreeMap;
use std::fmt;

use super::cyc::{Cyc, Q};

pub const NVARS: usize = 4;
pub const VAR_NAMES: [&str; NVARS] = ["at", "bt", "omg", "lam"];

/// Exponent vector; `BTreeMap` order on it is lex with `at` most
/// significant, so the leading term is the last entry.
pub type Mono = [u32; NVARS];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    At = 0,
    Bt = 1,
    Omg = 2,
    Lam = 3,
}

impl Var {
    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "at" => Some(Var::At),
            "bt" => Some(Var::Bt),
            "omg" => Some(Var::Omg),
            "lam" => Some(Var::Lam),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        VAR_NAMES[self as usize]
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Cyc>,
}

const ONE_MONO: Mono = [0; NVARS];

fn mono_add(a: &Mono, b: &Mono) -> Mono {
    let mut m = *a;
    for i in 0..NVARS {
        m[i] += b[i];
    }
    m
}

fn mono_divides(a: &Mono, b: &Mono) -> bool {
    (0..NVARS).all(|i| a[i] <= b[i])
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(Cyc::one())
    }

    pub fn constant(c: Cyc) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ONE_MONO, c);
        }
        MPoly { terms }
    }

    pub fn var(v: Var) -> MPoly {
        let mut m = ONE_MONO;
        m[v as usize] = 1;
        MPoly::monomial(m, Cyc::one())
    }

    pub fn monomial(m: Mono, c: Cyc) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Cyc)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Cyc> {
        match self.terms.len() {
            0 => Some(Cyc::zero()),
            1 => self.terms.get(&ONE_MONO).cloned(),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn single_term(&self) -> Option<(Mono, Cyc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c.clone()))
        } else {
            None
        }
    }

    pub fn lead(&self) -> Option<(&Mono, &Cyc)> {
        self.terms.iter().next_back()
    }

    pub fn lead_coeff(&self) -> Cyc {
        self.lead().map(|(_, c)| c.clone()).unwrap_or_else(Cyc::zero)
    }

    fn add_term(&mut self, m: Mono, c: Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &Cyc) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        MPoly { terms: self.terms.iter().map(|(m, v)| (*m, v.mul(c))).collect() }
    }

    pub fn scale_q(&self, c: &Q) -> MPoly {
        self.scale(&Cyc::from_q(c.clone()))
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        if let Some(c) = self.constant_value() {
            return o.scale(&c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(&c);
        }
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(mono_add(m1, m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&Cyc) -> Cyc) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    pub fn deg(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m[v]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m[v] > 0)
    }

    pub fn is_free_of_vars(&self) -> bool {
        (0..NVARS).all(|v| !self.uses_var(v))
    }

    /// Coefficients of `self` as a polynomial in variable `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.deg(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut mm = *m;
            let k = mm[v] as usize;
            mm[v] = 0;
            out[k].add_term(mm, c.clone());
        }
        out
    }

    pub fn from_coeffs(v: usize, cs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero();
        for (k, p) in cs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut mm = *m;
                mm[v] += k as u32;
                out.add_term(mm, c.clone());
            }
        }
        out
    }

    /// `self / b` when `b` divides `self` exactly.
    pub fn div_exact(&self, b: &MPoly) -> Option<MPoly> {
        let (lm_b, lc_b) = b.lead()?;
        let lm_b = *lm_b;
        if let Some(c) = b.constant_value() {
            return Some(self.scale(&c.inv().ok()?));
        }
        let inv = lc_b.inv().ok()?;
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((m, c)) = r.lead() {
            if !mono_divides(&lm_b, m) {
                return None;
            }
            let mut tm = *m;
            for i in 0..NVARS {
                tm[i] -= lm_b[i];
            }
            let t = MPoly::monomial(tm, c.mul(&inv));
            r = r.sub(&t.mul(b));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is 1; returns the removed factor.
    pub fn monic(&self) -> (MPoly, Cyc) {
        let lc = self.lead_coeff();
        if lc.is_zero() || lc.is_one() {
            return (self.clone(), Cyc::one());
        }
        let inv = lc.inv().expect("nonzero leading coefficient");
        (self.scale(&inv), lc)
    }

    pub fn gcd(&self, o: &MPoly) -> MPoly {
        if self.is_zero() {
            return o.monic().0;
        }
        if o.is_zero() {
            return self.monic().0;
        }
        if self.is_const() || o.is_const() {
            return MPoly::one();
        }
        if let (Some((ma, _)), Some((mb, _))) = (self.single_term(), o.single_term()) {
            let mut m = ONE_MONO;
            for i in 0..NVARS {
                m[i] = ma[i].min(mb[i]);
            }
            return MPoly::monomial(m, Cyc::one());
        }
        let v = (0..NVARS)
            .rev()
            .find(|&i| self.uses_var(i) || o.uses_var(i))
            .expect("non-constant polynomial uses a variable");
        if !self.uses_var(v) {
            return self.gcd(&o.content(v));
        }
        if !o.uses_var(v) {
            return self.content(v).gcd(o);
        }
        let ca = self.content(v);
        let cb = o.content(v);
        let pa = self.div_exact(&ca).expect("content divides");
        let pb = o.div_exact(&cb).expect("content divides");
        let c = ca.gcd(&cb);
        let g = prs_gcd(pa, pb, v);
        c.mul(&g).monic().0
    }

    /// Gcd of the coefficients in variable `v`.
    pub fn content(&self, v: usize) -> MPoly {
        let cs = self.coeffs_in(v);
        let mut g = MPoly::zero();
        for c in cs.iter().filter(|c| !c.is_zero()) {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self, v: usize) -> MPoly {
        let c = self.content(v);
        self.div_exact(&c).expect("content divides").monic().0
    }

    pub fn to_complex(&self, vals: &[(f64, f64); NVARS]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, c) in &self.terms {
            let (mut tr, mut ti) = c.to_complex();
            for i in 0..NVARS {
                for _ in 0..m[i] {
                    let (vr, vi) = vals[i];
                    (tr, ti) = (tr * vr - ti * vi, tr * vi + ti * vr);
                }
            }
            re += tr;
            im += ti;
        }
        (re, im)
    }
}

fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r: Vec<MPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<MPoly> = r.iter().map(|c| c.mul(lb)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&bc.mul(&lr));
        }
        while next.last().map(|c| c.is_zero()).unwrap_or(false) {
            next.pop();
        }
        r = next;
    }
    r
}

fn prs_gcd(a: MPoly, b: MPoly, v: usize) -> MPoly {
    let (mut a, mut b) = (a, b);
    if a.deg(v) < b.deg(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = prem(&a.coeffs_in(v), &b.coeffs_in(v));
        if r.is_empty() {
            return b.primitive_part(v);
        }
        if r.len() == 1 {
            return MPoly::one();
        }
        let r = MPoly::from_coeffs(v, &r).primitive_part(v);
        a = b;
        b = r;
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::format_mpoly(self))
    }
}
