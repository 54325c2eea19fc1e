use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cyc::{sqrt_prime, Cyc, UnitRootExp, Q};
use super::mpoly::{MPoly, Var, NVARS};
use crate::error::{Error, Result};

/// A reduced fraction of polynomials over the cyclotomic numbers.
///
/// Invariant: `gcd(num, den) = 1`, `den` has leading coefficient 1, and
/// zero is stored as `0/1`.  Two equal values therefore have identical
/// representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: MPoly,
    den: MPoly,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_cyc(Cyc::from_int(n))
    }

    pub fn from_q(q: Q) -> Scalar {
        Scalar::from_cyc(Cyc::from_q(q))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::from_q(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_cyc(c: Cyc) -> Scalar {
        Scalar { num: MPoly::constant(c), den: MPoly::one() }
    }

    pub fn from_poly(p: MPoly) -> Scalar {
        Scalar { num: p, den: MPoly::one() }
    }

    pub fn var(v: Var) -> Scalar {
        Scalar::from_poly(MPoly::var(v))
    }

    pub fn root(e: UnitRootExp) -> Scalar {
        Scalar::from_cyc(Cyc::root(e))
    }

    /// `sqrt(p)^k` for any integer `k`.
    pub fn sqrt_p_pow(p: u64, k: i64) -> Scalar {
        let half = k.div_euclid(2);
        let base = Scalar::p_pow(p, half);
        if k.rem_euclid(2) == 1 {
            base * Scalar::from_cyc(sqrt_prime(p))
        } else {
            base
        }
    }

    /// `p^k` as a rational.
    pub fn p_pow(p: u64, k: i64) -> Scalar {
        let b = BigInt::from(p).pow(k.unsigned_abs() as u32);
        let q = if k >= 0 { Q::from_integer(b) } else { Q::new(BigInt::one(), b) };
        Scalar::from_q(q)
    }

    pub fn from_parts(num: MPoly, den: MPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(num, den))
    }

    fn normalize(num: MPoly, den: MPoly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return Scalar { num: num.scale(&inv), den: MPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (den, lc) = den.monic();
        let num = if lc.is_one() { num } else { num.scale(&lc.inv().expect("nonzero")) };
        Scalar { num, den }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_cyc(&self) -> Option<Cyc> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.as_cyc().and_then(|c| c.as_rational())
    }

    pub fn is_free_of_vars(&self) -> bool {
        self.num.is_free_of_vars() && self.den.is_free_of_vars()
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Scalar> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(Scalar { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn powi(&self, k: i64) -> Scalar {
        self.pow(k).expect("power of zero with negative exponent")
    }

    pub fn conj(&self) -> Result<Scalar> {
        if !self.is_free_of_vars() {
            return Err(Error::ParamDomain("conj of an expression with indeterminates".into()));
        }
        let n = self.num.constant_value().expect("free of variables");
        let d = self.den.constant_value().expect("free of variables");
        Ok(Scalar::from_cyc(n.conj().div(&d.conj())?))
    }

    /// Replaces the indeterminate `v` by `val`.
    pub fn substitute(&self, v: Var, val: &Scalar) -> Result<Scalar> {
        let n = subst_poly(&self.num, v, val);
        let d = subst_poly(&self.den, v, val);
        n.checked_div(&d)
    }

    pub fn to_complex(&self, vals: &[(f64, f64); NVARS]) -> (f64, f64) {
        let (a, b) = self.num.to_complex(vals);
        let (c, d) = self.den.to_complex(vals);
        let n = c * c + d * d;
        ((a * c + b * d) / n, (b * c - a * d) / n)
    }

    pub fn scale_q(&self, c: &Q) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale_q(c), den: self.den.clone() }
    }
}

fn subst_poly(p: &MPoly, v: Var, val: &Scalar) -> Scalar {
    let cs = p.coeffs_in(v as usize);
    let mut acc = Scalar::zero();
    for c in cs.iter().rev() {
        acc = &(&acc * val) + &Scalar::from_poly(c.clone());
    }
    acc
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Scalar { num: self.num.add(&o.num), den: MPoly::one() };
            }
            return Scalar::normalize(self.num.add(&o.num), self.den.clone());
        }
        Scalar::normalize(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: MPoly::one() };
        }
        if let Some(c) = self.as_cyc() {
            return Scalar { num: o.num.scale(&c), den: o.den.clone() };
        }
        if let Some(c) = o.as_cyc() {
            return Scalar { num: self.num.scale(&c), den: self.den.clone() };
        }
        Scalar::normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like `BigRational`.
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Scalar {
        Scalar::from_q(q)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::format_scalar(self))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_q_squares_to_q() {
        for p in [2u64, 3, 5, 7] {
            let s = Scalar::sqrt_p_pow(p, 1);
            assert_eq!(&s * &s, Scalar::from_int(p as i64));
            assert_eq!(Scalar::sqrt_p_pow(p, -3) * Scalar::sqrt_p_pow(p, 3), Scalar::one());
        }
    }

    #[test]
    fn fraction_reduces() {
        let at = Scalar::var(Var::At);
        let bt = Scalar::var(Var::Bt);
        let x = (&at * &at - &bt * &bt) / (&at - &bt);
        assert_eq!(x, &at + &bt);
        let y = Scalar::one() / (Scalar::one() + &at) + &at / (Scalar::one() + &at);
        assert_eq!(y, Scalar::one());
    }

    #[test]
    fn conj_of_i() {
        let i = Scalar::root(UnitRootExp::new(1, 4));
        assert_eq!(i.conj().unwrap(), Scalar::root(UnitRootExp::new(3, 4)));
        assert!(Scalar::var(Var::Lam).conj().is_err());
        assert!(Scalar::one().checked_div(&Scalar::zero()).is_err());
    }

    #[test]
    fn substitution() {
        let lam = Scalar::var(Var::Lam);
        let e = Scalar::one() / (Scalar::one() + &lam);
        assert_eq!(e.substitute(Var::Lam, &Scalar::from_int(3)).unwrap(), Scalar::frac(1, 4));
        assert!(e.substitute(Var::Lam, &Scalar::from_int(-1)).is_err());
    }
}
