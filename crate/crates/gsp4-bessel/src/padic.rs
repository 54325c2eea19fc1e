//! `F = Q` with the `p`-adic valuation, and the quadratic algebra `L`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::cyc::{legendre, Q};

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn big_val(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        k += 1;
    }
    k
}

/// `v_p(x)`, with `None` standing for `+infinity` at `x = 0`.
pub fn fval(x: &Q, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(big_val(x.numer(), p) - big_val(x.denom(), p))
}

pub fn is_integral(x: &Q, p: u64) -> bool {
    fval(x, p).map(|v| v >= 0).unwrap_or(true)
}

pub fn is_unit(x: &Q, p: u64) -> bool {
    fval(x, p) == Some(0)
}

pub fn in_p_pow(x: &Q, p: u64, n: i64) -> bool {
    fval(x, p).map(|v| v >= n).unwrap_or(true)
}

/// Residue of an integral `x` modulo `m` (a power of `p`), in `0..m`.
pub fn residue_mod(x: &Q, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let n = x.numer().mod_floor(&mb);
    let d = x.denom().mod_floor(&mb);
    let dinv = d.modinv(&mb).expect("integral rational has unit denominator");
    ((n * dinv).mod_floor(&mb)).to_u64().unwrap()
}

pub fn residue(x: &Q, p: u64) -> u64 {
    residue_mod(x, p)
}

/// The `p`-fractional part of `x`: `(j, k)` with `x - j/p^k` in `Z_(p)`,
/// `0 <= j < p^k`, and `k` minimal.
pub fn p_fractional_part(x: &Q, p: u64) -> (u64, u32) {
    let v = fval(x, p).unwrap_or(0);
    if v >= 0 {
        return (0, 0);
    }
    let k = (-v) as u32;
    let pk = p.pow(k);
    let y = x * Q::from_integer(BigInt::from(pk));
    (residue_mod(&y, pk), k)
}

pub fn ppow(p: u64, k: i64) -> Q {
    let b = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Q::from_integer(b)
    } else {
        Q::new(BigInt::one(), b)
    }
}

/// Splits a nonzero `x` as `p^v * u` with `u` a unit.
pub fn split_val(x: &Q, p: u64) -> (i64, Q) {
    let v = fval(x, p).expect("nonzero");
    (v, x * ppow(p, -v))
}

fn is_rational_square(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == n)
}

fn is_padic_square_unit(u: i64, p: u64) -> bool {
    if p == 2 {
        u.rem_euclid(8) == 1
    } else {
        legendre(u, p) == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    Inert,
    Ramified,
    Split,
}

impl Case {
    pub fn sym(self) -> i64 {
        match self {
            Case::Inert => -1,
            Case::Ramified => 0,
            Case::Split => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Inert => "inert",
            Case::Ramified => "ramified",
            Case::Split => "split",
        }
    }
}

/// Arithmetic descriptor of `L`: `F(sqrt d)` or `F + F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alg {
    pub d: i64,
    pub split: bool,
}

/// An element of `L`: `x + y sqrt(d)` in the field case, the pair `(x, y)`
/// in the split case.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LElem {
    pub alg: Alg,
    pub x: Q,
    pub y: Q,
}

impl LElem {
    pub fn new(alg: Alg, x: Q, y: Q) -> LElem {
        LElem { alg, x, y }
    }

    pub fn from_f(alg: Alg, x: Q) -> LElem {
        let y = if alg.split { x.clone() } else { Q::zero() };
        LElem { alg, x, y }
    }

    pub fn zero_in(alg: Alg) -> LElem {
        LElem::from_f(alg, Q::zero())
    }

    pub fn one_in(alg: Alg) -> LElem {
        LElem::from_f(alg, Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// The element as a member of `F`, if it lies in the diagonal copy.
    pub fn as_f(&self) -> Option<Q> {
        if self.alg.split {
            (self.x == self.y).then(|| self.x.clone())
        } else {
            self.y.is_zero().then(|| self.x.clone())
        }
    }

    pub fn add(&self, o: &LElem) -> LElem {
        LElem::new(self.alg, &self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &LElem) -> LElem {
        LElem::new(self.alg, &self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> LElem {
        LElem::new(self.alg, -&self.x, -&self.y)
    }

    pub fn mul(&self, o: &LElem) -> LElem {
        if self.alg.split {
            LElem::new(self.alg, &self.x * &o.x, &self.y * &o.y)
        } else {
            let d = qi(self.alg.d);
            LElem::new(
                self.alg,
                &self.x * &o.x + &d * &self.y * &o.y,
                &self.x * &o.y + &self.y * &o.x,
            )
        }
    }

    pub fn scale(&self, c: &Q) -> LElem {
        LElem::new(self.alg, &self.x * c, &self.y * c)
    }

    pub fn conj(&self) -> LElem {
        if self.alg.split {
            LElem::new(self.alg, self.y.clone(), self.x.clone())
        } else {
            LElem::new(self.alg, self.x.clone(), -&self.y)
        }
    }

    pub fn norm(&self) -> Q {
        let n = self.mul(&self.conj());
        n.x
    }

    pub fn trace(&self) -> Q {
        self.add(&self.conj()).x
    }

    pub fn inv(&self) -> Result<LElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn pow(&self, k: i64) -> Result<LElem> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = LElem::one_in(self.alg);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl fmt::Debug for LElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alg.split {
            write!(f, "({}, {})", self.x, self.y)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.alg.d)
        }
    }
}

/// Membership flags of [`FieldData::l_class`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LClass {
    pub in_ol: bool,
    pub in_pn: bool,
    pub in_ol_units: bool,
    pub in_ounits_plus_pn: bool,
}

/// The local datum `(p, a, b, c)` and everything derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldData {
    pub p: u64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub case: Case,
    /// Positive rational square root of `d` (split case only).
    pub sqrt_d: Option<i64>,
    /// Residue `w0` with `alpha + w0` in `p_L` (ramified case).
    pub w0: Option<u64>,
    /// Residues of `(-b + sqrt d)/(2c)` and `(-b - sqrt d)/(2c)` (split case).
    pub split_roots: Option<(u64, u64)>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

pub fn build_field_data(p: u64, a: i64, b: i64, c: i64) -> Result<FieldData> {
    let viol = |clause: &'static str, detail: String| Error::Assumption { clause, detail };
    if !is_prime(p) {
        return Err(Error::ParamDomain(format!("p = {} is not prime", p)));
    }
    if c.rem_euclid(p as i64) == 0 {
        return Err(viol("A1", format!("c = {} is not a unit at p = {}", c, p)));
    }
    let d = b * b - 4 * a * c;
    if d == 0 {
        return Err(viol("d=0", "b^2 - 4ac vanishes".into()));
    }
    let v = big_val(&BigInt::from(d), p);
    let u = d / (p as i64).pow(v as u32);
    let padic_square = v % 2 == 0 && is_padic_square_unit(u, p);
    let (case, sqrt_d) = if padic_square {
        if v != 0 {
            return Err(viol("A2", format!("d = {} is a square but not a unit", d)));
        }
        match is_rational_square(d) {
            Some(s) => (Case::Split, Some(s)),
            None => {
                return Err(viol(
                    "A2",
                    format!("d = {} is a {}-adic square but not a rational square; split data needs sqrt(d) in Q", d, p),
                ))
            }
        }
    } else if v == 0 {
        if p == 2 && u.rem_euclid(8) != 5 {
            return Err(viol("A2", format!("d = {} is not a discriminant generator at 2", d)));
        }
        (Case::Inert, None)
    } else if v == 1 {
        if p == 2 {
            return Err(viol("A2", "ramified data requires odd p".into()));
        }
        (Case::Ramified, None)
    } else {
        return Err(viol("A2", format!("v_p(d) = {} is too large for a discriminant generator", v)));
    };
    let mut fd = FieldData { p, a, b, c, d, case, sqrt_d, w0: None, split_roots: None };
    match case {
        Case::Ramified => {
            fd.w0 = Some(residue(&qf(-b, 2 * c), p));
        }
        Case::Split => {
            let s = sqrt_d.unwrap();
            let wp = residue(&qf(-b + s, 2 * c), p);
            let wm = residue(&qf(-b - s, 2 * c), p);
            if wp == wm {
                return Err(viol("A2", "split roots coincide mod p".into()));
            }
            fd.split_roots = Some((wp, wm));
        }
        Case::Inert => {}
    }
    Ok(fd)
}

impl FieldData {
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn alg(&self) -> Alg {
        Alg { d: self.d, split: self.case == Case::Split }
    }

    pub fn case_sym(&self) -> i64 {
        self.case.sym()
    }

    pub fn qa(&self) -> Q {
        qi(self.a)
    }

    pub fn qb(&self) -> Q {
        qi(self.b)
    }

    pub fn qc(&self) -> Q {
        qi(self.c)
    }

    pub fn f(&self, x: Q) -> LElem {
        LElem::from_f(self.alg(), x)
    }

    pub fn lzero(&self) -> LElem {
        LElem::zero_in(self.alg())
    }

    pub fn lone(&self) -> LElem {
        LElem::one_in(self.alg())
    }

    /// `alpha = (b + sqrt d)/(2c)`, or the pair of both roots when split.
    pub fn alpha(&self) -> LElem {
        self.from_basis(Q::zero(), Q::one())
    }

    /// The element `X + Y alpha`.
    pub fn from_basis(&self, x: Q, y: Q) -> LElem {
        let two_c = qi(2 * self.c);
        match self.case {
            Case::Split => {
                let s = qi(self.sqrt_d.unwrap());
                let a1 = (qi(self.b) + &s) / &two_c;
                let a2 = (qi(self.b) - &s) / &two_c;
                LElem::new(self.alg(), &x + &y * a1, &x + &y * a2)
            }
            _ => LElem::new(self.alg(), &x + &y * qi(self.b) / &two_c, &y / &two_c),
        }
    }

    /// Coordinates `(X, Y)` of `z = X + Y alpha`.
    pub fn to_basis(&self, z: &LElem) -> (Q, Q) {
        match self.case {
            Case::Split => {
                let s = qi(self.sqrt_d.unwrap());
                let y = (&z.x - &z.y) * qi(self.c) / &s;
                let a1 = (qi(self.b) + &s) / qi(2 * self.c);
                (&z.x - &y * a1, y)
            }
            _ => {
                let y = &z.y * qi(2 * self.c);
                (&z.x - &z.y * qi(self.b), y)
            }
        }
    }

    /// The element `x + y sqrt(d)/2` attached to the torus matrix with
    /// parameters `(x, y)`.
    pub fn from_torus(&self, x: &Q, y: &Q) -> LElem {
        match self.case {
            Case::Split => {
                let h = y * qi(self.sqrt_d.unwrap()) / qi(2);
                LElem::new(self.alg(), x + &h, x - &h)
            }
            _ => LElem::new(self.alg(), x.clone(), y / qi(2)),
        }
    }

    /// Inverse of [`FieldData::from_torus`].
    pub fn to_torus(&self, z: &LElem) -> (Q, Q) {
        match self.case {
            Case::Split => {
                let s = qi(self.sqrt_d.unwrap());
                ((&z.x + &z.y) / qi(2), (&z.x - &z.y) / s)
            }
            _ => (z.x.clone(), &z.y * qi(2)),
        }
    }

    pub fn l_class(&self, z: &LElem, n: u32) -> LClass {
        let p = self.p;
        let (x, y) = self.to_basis(z);
        let in_ol = is_integral(&x, p) && is_integral(&y, p);
        let in_pn = in_p_pow(&x, p, n as i64) && in_p_pow(&y, p, n as i64);
        let in_ol_units = in_ol && is_unit(&z.norm(), p);
        let in_ounits_plus_pn = if n == 0 {
            in_ol
        } else {
            is_unit(&x, p) && in_p_pow(&y, p, n as i64)
        };
        LClass { in_ol, in_pn, in_ol_units, in_ounits_plus_pn }
    }

    /// Largest `n` with `z` in `P^n` (`None` for `z = 0`).  In the split
    /// case `P^n = p^n + p^n`, so this is the smaller coordinate valuation.
    pub fn lval(&self, z: &LElem) -> Option<i64> {
        match self.case {
            Case::Split => match (fval(&z.x, self.p), fval(&z.y, self.p)) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
            Case::Inert => fval(&z.norm(), self.p).map(|v| v / 2),
            Case::Ramified => fval(&z.norm(), self.p),
        }
    }

    pub fn norm_trace_conj(&self, z: &LElem) -> (Q, Q, LElem) {
        (z.norm(), z.trace(), z.conj())
    }

    /// `beta_w^m = a p^(2m) + b p^m w + c w^2` and whether it is a unit.
    pub fn beta_wm(&self, w: &Q, m: u32) -> (Q, bool) {
        let pm = ppow(self.p, m as i64);
        let v = qi(self.a) * &pm * &pm + qi(self.b) * &pm * w + qi(self.c) * w * w;
        let u = is_unit(&v, self.p);
        (v, u)
    }

    /// Residues `w` in `0..p` allowed at `m = 1` (those with `alpha + w` a unit).
    pub fn unit_residues(&self) -> Vec<u64> {
        (0..self.p)
            .filter(|w| match self.case {
                Case::Inert => true,
                Case::Ramified => Some(*w) != self.w0,
                Case::Split => {
                    let (a, b) = self.split_roots.unwrap();
                    *w != a && *w != b
                }
            })
            .collect()
    }

    pub fn unit_coset_reps(&self, m: u32) -> Result<Vec<LElem>> {
        if m == 0 {
            return Err(Error::ParamDomain("unit_coset_reps needs m >= 1".into()));
        }
        let mut out = Vec::new();
        if m >= 2 {
            let pm = ppow(self.p, m as i64 - 1);
            for w in 1..self.p {
                out.push(self.from_basis(qi(w as i64), pm.clone()));
            }
        } else {
            for w in self.unit_residues() {
                out.push(self.from_basis(qi(w as i64), Q::one()));
            }
        }
        out.push(self.lone());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(fval(&qi(50), 5), Some(2));
        assert_eq!(fval(&qi(-4), 3), Some(0));
        assert_eq!(fval(&qi(0), 7), None);
        assert_eq!(fval(&qf(3, 50), 5), Some(-2));
        assert_eq!(p_fractional_part(&qf(7, 25), 5), (7, 2));
        assert_eq!(p_fractional_part(&qf(1, 3), 5), (0, 0));
    }

    #[test]
    fn builds_three_cases() {
        let fd = build_field_data(3, 1, 0, 1).unwrap();
        assert_eq!(fd.case_sym(), -1);
        let a = fd.alpha();
        assert_eq!(a.mul(&a), fd.f(qi(-1)));
        let fd = build_field_data(5, 5, 0, 1).unwrap();
        assert_eq!((fd.case_sym(), fd.d, fd.w0), (0, -20, Some(0)));
        let fd = build_field_data(5, 0, 1, 1).unwrap();
        assert_eq!(fd.case_sym(), 1);
        assert_eq!(fd.alpha(), LElem::new(fd.alg(), qi(1), qi(0)));
        assert_eq!(fd.split_roots, Some((0, 4)));
        let fd = build_field_data(2, 1, 1, 1).unwrap();
        assert_eq!(fd.case, Case::Inert);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(matches!(build_field_data(5, 1, 0, 5), Err(Error::Assumption { clause: "A1", .. })));
        assert!(matches!(build_field_data(5, 1, 2, 1), Err(Error::Assumption { clause: "d=0", .. })));
        assert!(matches!(build_field_data(5, 25, 0, 1), Err(Error::Assumption { clause: "A2", .. })));
        assert_eq!(build_field_data(3, -1, 0, 1).unwrap().sqrt_d, Some(2));
        assert!(build_field_data(5, -5, 1, 1).is_err());
        assert!(build_field_data(2, 1, 0, 1).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        for (p, a, b, c) in [(3, 1, 0, 1), (5, 5, 0, 1), (5, 0, 1, 1), (7, 2, 3, 2)] {
            let fd = build_field_data(p, a, b, c).unwrap();
            let z = fd.from_basis(qf(3, 7), qf(-2, 5));
            assert_eq!(fd.to_basis(&z), (qf(3, 7), qf(-2, 5)));
            let t = fd.from_torus(&qf(1, 2), &qi(3));
            assert_eq!(fd.to_torus(&t), (qf(1, 2), qi(3)));
        }
    }
}
