//! The characters `theta` of `U(F)` and `Lambda` of `T(F) = L^x`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grp::M2;
use crate::padic::{
    fval, is_unit, p_fractional_part, ppow, qi, residue_mod, Case, FieldData, LElem,
};
use crate::scalars::{Scalar, UnitRootExp, Var, Q};

/// Largest `k` for which `psi` of an element of `p^-k o` is evaluated.
pub const PSI_DEPTH: u32 = 4;

/// `psi(x) = exp(2 pi i frac_p(x))`, conductor `o`.
pub fn psi(x: &Q, p: u64) -> Result<Scalar> {
    let (j, k) = p_fractional_part(x, p);
    if k == 0 {
        return Ok(Scalar::one());
    }
    if k > PSI_DEPTH {
        return Err(Error::CyclotomicOverflow { depth: k, max: PSI_DEPTH });
    }
    Ok(Scalar::root(UnitRootExp::new(j as i64, p.pow(k))))
}

/// `theta(n(X)) = psi(tr(S X))` with `S = [[a, b/2], [b/2, c]]`.
pub fn theta_eval(fd: &FieldData, x: &M2) -> Result<Scalar> {
    if x[0][1] != x[1][0] {
        return Err(Error::ParamDomain("theta needs symmetric X".into()));
    }
    psi(&theta_arg(fd, x), fd.p)
}

pub fn theta_arg(fd: &FieldData, x: &M2) -> Q {
    fd.qa() * &x[0][0] + fd.qb() * &x[0][1] + fd.qc() * &x[1][1]
}

/// Class of a unit `X + Y alpha` in `o_L^x / o^x (1 + P^m0)`: `A(Y/X)` when
/// `X` is a unit, `B(X/Y)` otherwise, both mod `p^m0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    A(u64),
    B(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSpec {
    pub m0: u32,
    pub selector: usize,
    /// `Lambda(varpi_L)` for fields (`1` inert, `+-1` ramified); `lam =
    /// Lambda((1, varpi))` when split.
    pub unif: Scalar,
    keys: Vec<ClassKey>,
    /// Exponents `e` with `chi(key) = exp(2 pi i e)`, aligned with `keys`.
    exps: Vec<Q>,
}

fn key_of(fd: &FieldData, u: &LElem, m0: u32) -> ClassKey {
    if m0 == 0 {
        return ClassKey::A(0);
    }
    let pm = fd.p.pow(m0);
    let (x, y) = fd.to_basis(u);
    if is_unit(&x, fd.p) {
        ClassKey::A(residue_mod(&(&y / &x), pm))
    } else {
        ClassKey::B(residue_mod(&(&x / &y), pm))
    }
}

fn key_rep(fd: &FieldData, k: ClassKey) -> LElem {
    match k {
        ClassKey::A(t) => fd.from_basis(Q::one(), qi(t as i64)),
        ClassKey::B(s) => fd.from_basis(qi(s as i64), Q::one()),
    }
}

fn frac01(x: Q) -> Q {
    let f = x.floor();
    x - f
}

/// All class keys of the quotient, sorted.
pub fn quotient_keys(fd: &FieldData, m0: u32) -> Vec<ClassKey> {
    if m0 == 0 {
        return vec![ClassKey::A(0)];
    }
    let pm = fd.p.pow(m0);
    let mut seen = std::collections::BTreeSet::new();
    for x in 0..pm {
        for y in 0..pm {
            let z = fd.from_basis(qi(x as i64), qi(y as i64));
            if is_unit(&z.norm(), fd.p) {
                seen.insert(key_of(fd, &z, m0));
            }
        }
    }
    seen.into_iter().collect()
}

/// Every character of the finite quotient, as exponent vectors over the
/// sorted keys.  Built by extending from subgroup to subgroup one element
/// at a time.
fn all_characters(fd: &FieldData, m0: u32) -> (Vec<ClassKey>, Vec<Vec<Q>>) {
    let keys = quotient_keys(fd, m0);
    let idx: BTreeMap<ClassKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let n = keys.len();
    let reps: Vec<LElem> = keys.iter().map(|k| key_rep(fd, *k)).collect();
    let mul = |i: usize, j: usize| idx[&key_of(fd, &reps[i].mul(&reps[j]), m0)];
    let one = idx[&key_of(fd, &fd.lone(), m0)];

    // Subgroup as a map element -> (character values on it are derived
    // from generator exponents): track each member's expression.
    let mut members: Vec<usize> = vec![one];
    let mut chars: Vec<Vec<Option<Q>>> = vec![{
        let mut v = vec![None; n];
        v[one] = Some(Q::zero());
        v
    }];
    for g in 0..n {
        if members.contains(&g) {
            continue;
        }
        // Smallest k with g^k in the current subgroup.
        let mut powers = vec![one, g];
        while !members.contains(powers.last().unwrap()) {
            let nx = mul(*powers.last().unwrap(), g);
            powers.push(nx);
        }
        let k = powers.len() - 1;
        let gk = powers[k];
        let mut next_members = Vec::new();
        for &h in &members {
            for pw in powers.iter().take(k) {
                next_members.push(mul(h, *pw));
            }
        }
        let mut next_chars = Vec::new();
        for ch in &chars {
            let base = ch[gk].clone().expect("defined on subgroup");
            for t in 0..k {
                let eg = (&base + qi(t as i64)) / qi(k as i64);
                let mut v = ch.clone();
                for &h in &members {
                    let eh = ch[h].clone().unwrap();
                    for (j, pw) in powers.iter().take(k).enumerate() {
                        v[mul(h, *pw)] = Some(frac01(&eh + &eg * qi(j as i64)));
                    }
                }
                next_chars.push(v);
            }
        }
        members = next_members;
        chars = next_chars;
    }
    let mut out: Vec<Vec<Q>> = chars.into_iter().map(|v| v.into_iter().map(|e| e.unwrap()).collect()).collect();
    out.sort();
    (keys, out)
}

fn is_primitive(keys: &[ClassKey], exps: &[Q], p: u64, m0: u32) -> bool {
    if m0 == 0 {
        return true;
    }
    let step = p.pow(m0 - 1);
    keys.iter().zip(exps).any(|(k, e)| {
        let in_sub = match k {
            ClassKey::A(t) => t % step == 0,
            ClassKey::B(_) => m0 == 1,
        };
        in_sub && !e.is_zero()
    })
}

/// The characters of conductor exactly `m0`, in the order the selector indexes.
pub fn primitive_characters(fd: &FieldData, m0: u32) -> (Vec<ClassKey>, Vec<Vec<Q>>) {
    let (keys, chars) = all_characters(fd, m0);
    let prim = chars.into_iter().filter(|c| is_primitive(&keys, c, fd.p, m0)).collect();
    (keys, prim)
}

impl LambdaSpec {
    /// `unif` is required for the ramified and split cases (`None` in the
    /// split case means the indeterminate `lam`).
    pub fn new(fd: &FieldData, m0: u32, selector: usize, unif: Option<Scalar>) -> Result<LambdaSpec> {
        if m0 > 3 || fd.p.pow(2 * m0) > 10_000 {
            return Err(Error::Resource(format!("m0 = {} too large for enumeration at p = {}", m0, fd.p)));
        }
        let (keys, chars) = primitive_characters(fd, m0);
        let exps = chars.get(selector).cloned().ok_or_else(|| {
            Error::ParamDomain(format!(
                "no character of conductor {} with selector {} ({} available)",
                m0,
                selector,
                chars.len()
            ))
        })?;
        let unif = match fd.case {
            Case::Inert => match unif {
                Some(u) if !u.is_one() => {
                    return Err(Error::ParamDomain("inert case: Lambda(p) = 1 is forced".into()))
                }
                _ => Scalar::one(),
            },
            Case::Ramified => {
                let u = unif.unwrap_or_else(Scalar::one);
                if u != Scalar::one() && u != Scalar::from_int(-1) {
                    return Err(Error::ParamDomain("ramified case: Lambda(sqrt d) must be +1 or -1".into()));
                }
                u
            }
            Case::Split => {
                let u = unif.unwrap_or_else(|| Scalar::var(Var::Lam));
                if u.is_zero() {
                    return Err(Error::ParamDomain("lam must be nonzero".into()));
                }
                u
            }
        };
        Ok(LambdaSpec { m0, selector, unif, keys, exps })
    }

    pub fn order_of_quotient(&self) -> usize {
        self.keys.len()
    }

    pub fn is_symbolic(&self) -> bool {
        !self.unif.is_free_of_vars()
    }

    pub fn class_key(&self, fd: &FieldData, u: &LElem) -> ClassKey {
        key_of(fd, u, self.m0)
    }

    /// `Lambda` on a unit of `o_L`.
    pub fn chi(&self, fd: &FieldData, u: &LElem) -> Result<Scalar> {
        if !is_unit(&u.norm(), fd.p) || fd.lval(u) != Some(0) {
            return Err(Error::ParamDomain(format!("{:?} is not a unit of o_L", u)));
        }
        let k = self.class_key(fd, u);
        let i = self.keys.binary_search(&k).map_err(|_| Error::NotFound(format!("class {:?}", k)))?;
        let e = &self.exps[i];
        let num: i64 = e.numer().try_into().expect("small exponent");
        let den: u64 = e.denom().try_into().expect("small exponent");
        Ok(Scalar::root(UnitRootExp::new(num, den)))
    }

    /// `Lambda((1, varpi))` in the split case.
    pub fn lambda_one_varpi(&self) -> Scalar {
        self.unif.clone()
    }

    /// `Lambda((varpi, 1)) = lam^-1` in the split case.
    pub fn lambda_varpi_one(&self) -> Scalar {
        self.unif.inv().expect("lam is nonzero")
    }

    pub fn eval(&self, fd: &FieldData, z: &LElem) -> Result<Scalar> {
        if z.norm().is_zero() {
            return Err(Error::ParamDomain("Lambda needs an invertible argument".into()));
        }
        let p = fd.p;
        match fd.case {
            Case::Inert => {
                let k = fd.lval(z).unwrap();
                self.chi(fd, &z.scale(&ppow(p, -k)))
            }
            Case::Ramified => {
                let k = fd.lval(z).unwrap();
                let pi = LElem::new(fd.alg(), Q::zero(), Q::one());
                let u = z.mul(&pi.pow(-k)?);
                Ok(self.unif.powi(k) * self.chi(fd, &u)?)
            }
            Case::Split => {
                let r = &z.y / &z.x;
                let k = fval(&r, p).unwrap();
                let u = LElem::new(fd.alg(), Q::one(), &r * ppow(p, -k));
                Ok(self.unif.powi(k) * self.chi(fd, &u)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{build_field_data, qf};

    #[test]
    fn psi_values() {
        assert_eq!(psi(&qi(3), 5).unwrap(), Scalar::one());
        assert_eq!(psi(&qf(1, 5), 5).unwrap(), Scalar::root(UnitRootExp::new(1, 5)));
        assert!(matches!(psi(&qf(1, 3125), 5), Err(Error::CyclotomicOverflow { .. })));
        let fd = build_field_data(5, 0, 1, 1).unwrap();
        let x: M2 = [[qf(1, 5), qi(0)], [qi(0), qi(0)]];
        assert_eq!(theta_eval(&fd, &x).unwrap(), Scalar::one());
        let x: M2 = [[qi(0), qi(0)], [qi(0), qf(1, 5)]];
        assert_eq!(theta_eval(&fd, &x).unwrap(), Scalar::root(UnitRootExp::new(1, 5)));
    }

    #[test]
    fn quotient_orders() {
        for (p, a, b, c, want) in [(3, 1, 0, 1, [1, 4, 12]), (5, 5, 0, 1, [1, 5, 25]), (5, -2, 1, 1, [1, 4, 20])] {
            let fd = build_field_data(p, a, b, c).unwrap();
            for m0 in 0..3 {
                assert_eq!(quotient_keys(&fd, m0).len(), want[m0 as usize], "p={p} m0={m0}");
                let (_, all) = all_characters(&fd, m0);
                assert_eq!(all.len(), want[m0 as usize]);
            }
        }
    }

    #[test]
    fn inert_conductor_one() {
        let fd = build_field_data(3, 1, 0, 1).unwrap();
        let (_, prim) = primitive_characters(&fd, 1);
        assert_eq!(prim.len(), 3);
        let i4 = Scalar::root(UnitRootExp::new(1, 4));
        let found = (0..3).any(|s| {
            let l = LambdaSpec::new(&fd, 1, s, None).unwrap();
            l.eval(&fd, &fd.from_basis(qi(1), qi(1))).unwrap() == i4
        });
        assert!(found);
        for s in 0..3 {
            let l = LambdaSpec::new(&fd, 1, s, None).unwrap();
            // alpha^2 = -1 lies in F, so Lambda(alpha) = +-1.
            let v = l.eval(&fd, &fd.alpha()).unwrap();
            assert!(v == Scalar::one() || v == Scalar::from_int(-1));
            assert_eq!(l.eval(&fd, &fd.f(qf(7, 3))).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn split_uniformizer() {
        let fd = build_field_data(5, 0, 1, 1).unwrap();
        let l = LambdaSpec::new(&fd, 0, 0, None).unwrap();
        let z = LElem::new(fd.alg(), qi(1), qi(5));
        assert_eq!(l.eval(&fd, &z).unwrap(), Scalar::var(Var::Lam));
        assert!(LambdaSpec::new(&fd, 0, 1, None).is_err());
    }

    #[test]
    fn multiplicative() {
        for (p, a, b, c, m0) in [(3, 1, 0, 1, 2), (5, 5, 0, 1, 1), (5, -2, 1, 1, 2)] {
            let fd = build_field_data(p, a, b, c).unwrap();
            let u = if fd.case == Case::Inert { None } else { Some(Scalar::from_int(-1)) };
            let l = LambdaSpec::new(&fd, m0, 0, u).unwrap();
            let zs = [fd.from_basis(qi(2), qi(1)), fd.from_basis(qf(1, 5), qi(3)), fd.from_basis(qi(7), qf(2, 3))];
            for z1 in &zs {
                for z2 in &zs {
                    let lhs = l.eval(&fd, &z1.mul(z2)).unwrap();
                    assert_eq!(lhs, l.eval(&fd, z1).unwrap() * l.eval(&fd, z2).unwrap());
                }
            }
        }
    }
}
