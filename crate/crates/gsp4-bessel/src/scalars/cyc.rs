//! Cyclotomic numbers in a level-free canonical basis.
//!
//! Every element of `Q(zeta_n)` (any `n`) is stored as a finite sum
//! `sum c_r * zeta^r` with `r` in `Q/Z`.  The basis roots are those `r` whose
//! `l`-primary component lies in `[0, (l-1)/l)` for every prime `l`.  Since
//! the basis of a subfield is a subset of the basis of any larger cyclotomic
//! field, coordinates do not depend on the ambient level and equality is
//! plain map equality.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// An element of `Q/Z`, kept as a reduced fraction `num/den` with
/// `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UnitRootExp {
    num: u64,
    den: u64,
}

impl UnitRootExp {
    pub const ZERO: UnitRootExp = UnitRootExp { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> UnitRootExp {
        assert!(den > 0, "zero denominator in root exponent");
        let n = num.rem_euclid(den as i64) as u64;
        let g = n.gcd(&den);
        UnitRootExp { num: n / g, den: den / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn add(self, other: UnitRootExp) -> UnitRootExp {
        let l = self.den.lcm(&other.den);
        let n = (self.num as u128 * (l / self.den) as u128 + other.num as u128 * (l / other.den) as u128)
            % l as u128;
        UnitRootExp::new(n as i64, l)
    }

    pub fn neg(self) -> UnitRootExp {
        UnitRootExp::new(-(self.num as i64), self.den)
    }

    pub fn scale(self, k: i64) -> UnitRootExp {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        UnitRootExp::new(n as i64, self.den)
    }

    /// Multiplicative order of the root, i.e. the reduced denominator.
    pub fn order(&self) -> u64 {
        self.den
    }
}

impl fmt::Display for UnitRootExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inv(a: u64, m: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, (a % m) as i128);
    while nr != 0 {
        let qq = r / nr;
        (t, nt) = (nt, t - qq * nt);
        (r, nr) = (nr, r - qq * nr);
    }
    t.rem_euclid(m as i128) as u64
}

/// Primary components `(l, l^k, J)` with `r = sum J/l^k mod 1`.
fn primary_parts(r: UnitRootExp) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    if r.num == 0 {
        return out;
    }
    for (l, k) in factor(r.den) {
        let lk = l.pow(k);
        let co = r.den / lk;
        let j = if lk == 1 { 0 } else { (r.num % lk) * mod_inv(co % lk, lk) % lk };
        out.push((l, lk, j));
    }
    out
}

thread_local! {
    static EXPAND_CACHE: RefCell<HashMap<UnitRootExp, Vec<(UnitRootExp, i32)>>> = RefCell::new(HashMap::new());
}

/// Writes `zeta^r` in the canonical basis as a signed sum of basis roots.
pub fn expand_root(r: UnitRootExp) -> Vec<(UnitRootExp, i32)> {
    if let Some(v) = EXPAND_CACHE.with(|c| c.borrow().get(&r).cloned()) {
        return v;
    }
    let mut acc: Vec<(UnitRootExp, i32)> = vec![(UnitRootExp::ZERO, 1)];
    for (l, lk, j) in primary_parts(r) {
        let step = lk / l;
        let options: Vec<(UnitRootExp, i32)> = if j < (l - 1) * step {
            vec![(UnitRootExp::new(j as i64, lk), 1)]
        } else {
            (0..l - 1)
                .map(|i| (UnitRootExp::new((j - (l - 1 - i) * step) as i64, lk), -1))
                .collect()
        };
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for (a, sa) in &acc {
            for (b, sb) in &options {
                next.push((a.add(*b), sa * sb));
            }
        }
        acc = next;
    }
    EXPAND_CACHE.with(|c| c.borrow_mut().insert(r, acc.clone()));
    acc
}

/// True when `r` is one of the canonical basis roots.
pub fn is_basis_root(r: UnitRootExp) -> bool {
    primary_parts(r).iter().all(|&(l, lk, j)| j < (l - 1) * (lk / l))
}

/// The canonical basis of `Q(zeta_n)`.
pub fn basis(n: u64) -> Vec<UnitRootExp> {
    (0..n)
        .map(|j| UnitRootExp::new(j as i64, n))
        .filter(|r| is_basis_root(*r))
        .collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyc {
    terms: BTreeMap<UnitRootExp, Q>,
}

impl Cyc {
    pub fn zero() -> Cyc {
        Cyc::default()
    }

    pub fn one() -> Cyc {
        Cyc::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Cyc {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(UnitRootExp::ZERO, c);
        }
        Cyc { terms }
    }

    pub fn from_int(n: i64) -> Cyc {
        Cyc::from_q(q_int(n))
    }

    pub fn root(r: UnitRootExp) -> Cyc {
        let mut out = Cyc::zero();
        for (b, s) in expand_root(r) {
            out.add_term(b, q_int(s as i64));
        }
        out
    }

    /// `zeta_n^(n e)`, checked against a declared cyclotomic order `n`.
    pub fn root_checked(e: UnitRootExp, n: u64) -> Result<Cyc> {
        if n % e.den != 0 {
            return Err(Error::OrderMismatch { den: e.den, order: n });
        }
        Ok(Cyc::root(e))
    }

    fn add_term(&mut self, r: UnitRootExp, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(r).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UnitRootExp, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|q| q.is_one()).unwrap_or(false)
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&UnitRootExp::ZERO).cloned(),
            _ => None,
        }
    }

    /// Least `n` with the element in `Q(zeta_n)`.
    pub fn level(&self) -> u64 {
        self.terms.keys().fold(1u64, |acc, r| acc.lcm(&r.den))
    }

    pub fn scale(&self, c: &Q) -> Cyc {
        if c.is_zero() {
            return Cyc::zero();
        }
        Cyc { terms: self.terms.iter().map(|(r, v)| (*r, v * c)).collect() }
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        let mut out = self.clone();
        for (r, c) in &o.terms {
            out.add_term(*r, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        let mut out = self.clone();
        for (r, c) in &o.terms {
            out.add_term(*r, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Cyc {
        Cyc { terms: self.terms.iter().map(|(r, v)| (*r, -v.clone())).collect() }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        if let Some(c) = self.as_rational() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_rational() {
            return self.scale(&c);
        }
        let mut out = Cyc::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &o.terms {
                let c = c1 * c2;
                for (b, s) in expand_root(r1.add(*r2)) {
                    out.add_term(b, if s > 0 { c.clone() } else { -c.clone() });
                }
            }
        }
        out
    }

    /// Image under `zeta -> zeta^k` for `k` prime to the level.
    pub fn galois(&self, k: i64) -> Cyc {
        let mut out = Cyc::zero();
        for (r, c) in &self.terms {
            for (b, s) in expand_root(r.scale(k)) {
                out.add_term(b, if s > 0 { c.clone() } else { -c.clone() });
            }
        }
        out
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Cyc {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.terms.len() == 1 {
            let (r, c) = self.terms.iter().next().unwrap();
            return Ok(Cyc::root(r.neg()).scale(&c.recip()));
        }
        // Solve a * x = 1 in the basis of the element's own level.
        let n = self.level();
        let b = basis(n);
        let idx: HashMap<UnitRootExp, usize> = b.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        let dim = b.len();
        let mut m = vec![vec![Q::zero(); dim + 1]; dim];
        for (j, r) in b.iter().enumerate() {
            let col = self.mul(&Cyc::root(*r));
            for (t, c) in col.terms() {
                m[idx[t]][j] = c.clone();
            }
        }
        m[idx[&UnitRootExp::ZERO]][dim] = Q::one();
        let sol = solve_dense(m).ok_or(Error::DivisionByZero)?;
        let mut out = Cyc::zero();
        for (j, r) in b.iter().enumerate() {
            out.add_term(*r, sol[j].clone());
        }
        Ok(out)
    }

    pub fn div(&self, o: &Cyc) -> Result<Cyc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: u32) -> Cyc {
        let mut acc = Cyc::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (r, c) in &self.terms {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * r.num as f64 / r.den as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Sign of the leading coefficient, used for pretty printing.
    pub fn leading_is_negative(&self) -> bool {
        self.terms.values().next().map(|c| c.is_negative()).unwrap_or(false)
    }
}

fn solve_dense(mut m: Vec<Vec<Q>>) -> Option<Vec<Q>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for k in col..=n {
            m[col][k] = &m[col][k] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for k in col..=n {
                    let t = &m[col][k] * &f;
                    m[r][k] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn legendre(x: i64, p: u64) -> i64 {
    let x = x.rem_euclid(p as i64) as u64;
    if x == 0 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = x;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// The positive real square root of a prime `p`, realized inside a
/// cyclotomic field through a quadratic Gauss sum.
pub fn sqrt_prime(p: u64) -> Cyc {
    if p == 2 {
        return Cyc::root(UnitRootExp::new(1, 8)).add(&Cyc::root(UnitRootExp::new(7, 8)));
    }
    let mut g = Cyc::zero();
    for x in 1..p {
        let s = legendre(x as i64, p);
        g.add_term_pub(UnitRootExp::new(x as i64, p), s);
    }
    if p % 4 == 1 {
        g
    } else {
        g.mul(&Cyc::root(UnitRootExp::new(3, 4)))
    }
}

impl Cyc {
    fn add_term_pub(&mut self, r: UnitRootExp, s: i64) {
        for (b, t) in expand_root(r) {
            self.add_term(b, q_int(s * t as i64));
        }
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if r.num == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "z[{}]", r)?;
            } else {
                write!(f, "{}*z[{}]", a, r)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64, d: u64) -> Cyc {
        Cyc::root(UnitRootExp::new(n, d))
    }

    #[test]
    fn basis_sizes_are_euler_phi() {
        for (n, phi) in [(1, 1), (2, 1), (4, 2), (5, 4), (8, 4), (9, 6), (12, 4), (20, 8), (25, 20), (60, 16)] {
            assert_eq!(basis(n).len(), phi, "n = {n}");
        }
    }

    #[test]
    fn roots_multiply() {
        assert_eq!(z(1, 2), Cyc::from_int(-1));
        assert_eq!(z(1, 4).mul(&z(1, 4)), Cyc::from_int(-1));
        assert_eq!(z(1, 5).pow(5), Cyc::one());
        assert_eq!(z(2, 15).mul(&z(1, 3)), z(7, 15));
        let s: Cyc = (0..7).fold(Cyc::zero(), |acc, k| acc.add(&z(k, 7)));
        assert!(s.is_zero());
    }

    #[test]
    fn conj_flips_exponents() {
        assert_eq!(z(1, 4).conj(), z(3, 4));
        let a = z(1, 12).add(&Cyc::from_int(3)).mul(&z(2, 5));
        assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn sqrt_of_small_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let s = sqrt_prime(p);
            assert_eq!(s.mul(&s), Cyc::from_int(p as i64), "p = {p}");
            let (re, im) = s.to_complex();
            assert!((re - (p as f64).sqrt()).abs() < 1e-9 && im.abs() < 1e-9);
            assert_eq!(s.conj(), s);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Cyc::one().add(&z(1, 4));
        assert_eq!(a.mul(&a.inv().unwrap()), Cyc::one());
        let b = sqrt_prime(3).add(&z(1, 5)).add(&Cyc::from_int(2));
        assert_eq!(b.mul(&b.inv().unwrap()), Cyc::one());
        assert!(Cyc::zero().inv().is_err());
    }
}
