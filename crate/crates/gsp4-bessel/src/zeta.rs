//! The local zeta integral `Z(s)` pairing the Bessel function with the
//! section `W^#`, the `GL(2)` newform values it needs, and the L-factors of
//! `pi x tau~`.
//!
//! Everything is a rational function in `X = q^-s` whose coefficients may
//! involve `sqrt(q)` and the indeterminates `at = alpha(varpi)`,
//! `bt = beta(varpi)`, `omg = Omega'(varpi)`.

use std::fmt;

use crate::bessel::{b_table, BesselCtx, CosetAddress, TestVector, WTag};
use crate::error::{Error, Result};
use crate::grp::{h_lm, Weyl};
use crate::padic::{residue, FieldData};
use crate::scalars::{geometric_closed_form, RationalFunction, Scalar, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TauClass {
    /// `alpha x beta`, both unramified.
    UnramPs,
    /// `alpha x beta`, `alpha` unramified, `beta` ramified.
    UnramRamPs,
    /// `alpha x beta`, both ramified.
    RamRamPs,
    /// Supercuspidal or a ramified twist of Steinberg.
    ScOrRamSt,
    /// `Omega' St` with `Omega'` unramified.
    UnramSt,
}

impl TauClass {
    pub const ALL: [TauClass; 5] =
        [TauClass::UnramPs, TauClass::UnramRamPs, TauClass::RamRamPs, TauClass::ScOrRamSt, TauClass::UnramSt];

    pub fn name(self) -> &'static str {
        match self {
            TauClass::UnramPs => "unram_ps",
            TauClass::UnramRamPs => "unram_ram_ps",
            TauClass::RamRamPs => "ram_ram_ps",
            TauClass::ScOrRamSt => "supercuspidal_or_ramSt",
            TauClass::UnramSt => "unramSt",
        }
    }

    pub fn from_name(s: &str) -> Option<TauClass> {
        TauClass::ALL.into_iter().find(|c| c.name() == s)
    }

    fn default_conductor(self) -> u32 {
        match self {
            TauClass::UnramPs => 0,
            TauClass::UnramRamPs | TauClass::UnramSt => 1,
            TauClass::RamRamPs | TauClass::ScOrRamSt => 2,
        }
    }
}

impl fmt::Display for TauClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A generic irreducible representation of `GL(2)`, described by the
/// values its characters take at `varpi`.  Unused parameters are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSpec {
    pub class: TauClass,
    pub at: Scalar,
    pub bt: Scalar,
    pub omg: Scalar,
    /// Conductor exponent.
    pub n: u32,
}

impl TauSpec {
    pub fn symbolic(class: TauClass) -> TauSpec {
        TauSpec {
            class,
            at: Scalar::var(Var::At),
            bt: Scalar::var(Var::Bt),
            omg: Scalar::var(Var::Omg),
            n: class.default_conductor(),
        }
    }

    /// Replaces the indeterminates by the given values.
    pub fn numeric(class: TauClass, at: Scalar, bt: Scalar, omg: Scalar) -> TauSpec {
        TauSpec { class, at, bt, omg, n: class.default_conductor() }
    }

    pub fn with_conductor(mut self, n: u32) -> Result<TauSpec> {
        let ok = match self.class {
            TauClass::UnramPs => n == 0,
            TauClass::UnramSt => n == 1,
            TauClass::UnramRamPs => n >= 1,
            TauClass::RamRamPs | TauClass::ScOrRamSt => n >= 2,
        };
        if !ok {
            return Err(Error::ParamDomain(format!("conductor {} impossible for {}", n, self.class)));
        }
        self.n = n;
        Ok(self)
    }

    /// `omega_tau(varpi)`.
    pub fn central(&self) -> Scalar {
        match self.class {
            TauClass::UnramSt => &self.omg * &self.omg,
            _ => &self.at * &self.bt,
        }
    }

    /// The principal series must not be reducible: `at/bt` is not `q^{+-1}`.
    pub fn check(&self, q: u64) -> Result<()> {
        let reducible = |a: &Scalar, b: &Scalar| *a == Scalar::from_int(q as i64) * b;
        let bad = match self.class {
            TauClass::UnramPs => reducible(&self.at, &self.bt) || reducible(&self.bt, &self.at) || self.at == self.bt,
            _ => false,
        };
        if bad {
            return Err(Error::Degenerate(format!("{} with at = {}, bt = {}", self.class, self.at, self.bt)));
        }
        for (name, v) in [("at", &self.at), ("bt", &self.bt), ("omg", &self.omg)] {
            if v.is_zero() {
                return Err(Error::ParamDomain(format!("{} must be nonzero", name)));
            }
        }
        Ok(())
    }
}

/// `W^(1)(diag(varpi^l, 1))` for the newform normalized by `W^(1)(1) = 1`.
pub fn whittaker_newform(tau: &TauSpec, q: u64, l: u32) -> Result<Scalar> {
    let l = l as i64;
    let half = Scalar::sqrt_p_pow(q, -l);
    Ok(match tau.class {
        TauClass::UnramPs => {
            let n = tau.at.powi(l + 1) - tau.bt.powi(l + 1);
            half * n.checked_div(&(&tau.at - &tau.bt))?
        }
        TauClass::UnramRamPs => tau.central().powi(l) * tau.at.inv()?.powi(l) * half,
        TauClass::RamRamPs | TauClass::ScOrRamSt => {
            if l == 0 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }
        TauClass::UnramSt => tau.omg.powi(l) * Scalar::p_pow(q, -l),
    })
}

/// `o_L / p o_L` elements `x + y alpha` with `alpha^2 = (b alpha - a)/c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Kl {
    x: u64,
    y: u64,
}

/// Whether `eta_m t` lies in `M N eta I Gamma(P)` where `t` is the Weyl
/// part of `addr` and `P = p o_L`.
///
/// Membership forces `(eta_m t)^-1 e1` to be moved into `o_L eta^-1 e1` by
/// some element of `I` mod `P`, since the parabolic `MN` is the stabilizer
/// of the line through `e1`.  That is decided by running over the image of
/// `I` in `GSp(4, F_q)`.  A `false` is conclusive.  A `true` is backed by
/// the witness `eta` itself only for `(m, t) = (0, 1)`.
pub fn wsharp_support(fd: &FieldData, addr: &CosetAddress) -> Result<bool> {
    let p = fd.p;
    let pi = p as i64;
    let c_inv = crate::padic::residue(&(crate::padic::qi(1) / fd.qc()), p);
    if residue(&fd.qc(), p) == 0 {
        return Err(Error::ParamDomain("c must be a unit".into()));
    }
    let a = residue(&fd.qa(), p);
    let b = residue(&fd.qb(), p);
    let t = h_lm(p, addr.l, addr.m)?.inverse()?.mul(&addr.frame(fd)?);
    let ti = t.inverse()?;
    // v = t^-1 (e1 - varpi^m alpha e2)
    let pm = if addr.m == 0 { 1 } else { 0 };
    let v: Vec<Kl> = (0..4)
        .map(|i| Kl { x: residue(&ti.e[i][0], p), y: (p - residue(&ti.e[i][1], p) * pm % p) % p })
        .collect();
    let md = |x: i64| x.rem_euclid(pi) as u64;
    for t2 in 1..p {
        for mu in 1..p {
            for ea in 0..p {
                for x11 in 0..p {
                    for x12 in 0..p {
                        for x22 in 0..p {
                            // b = diag(1, t2, mu, mu/t2) m(A) n(X), A = [[1,0],[ea,1]]
                            let bm = iwahori_residue(p, t2, mu, ea, [x11, x12, x22]);
                            let mut w = [Kl { x: 0, y: 0 }; 4];
                            for (i, wi) in w.iter_mut().enumerate() {
                                let (mut sx, mut sy) = (0i64, 0i64);
                                for (j, vj) in v.iter().enumerate() {
                                    sx += bm[i][j] as i64 * vj.x as i64;
                                    sy += bm[i][j] as i64 * vj.y as i64;
                                }
                                *wi = Kl { x: md(sx), y: md(sy) };
                            }
                            // w1 = -alpha w0, w2 = w3 = 0
                            let want_x = md((a * c_inv % p * w[0].y) as i64);
                            let want_y = md(-(w[0].x as i64) - (b * c_inv % p * w[0].y) as i64);
                            let zero = Kl { x: 0, y: 0 };
                            if w[1] == (Kl { x: want_x, y: want_y }) && w[2] == zero && w[3] == zero {
                                return Ok(true);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

fn iwahori_residue(p: u64, t2: u64, mu: u64, ea: u64, x: [u64; 3]) -> [[u64; 4]; 4] {
    let inv = |v: u64| (1..p).find(|w| v * w % p == 1).unwrap_or(0);
    let d = [1, t2, mu, mu * inv(t2) % p];
    // m(A) = [[A, 0], [0, tA^-1]], tA^-1 = [[1, -ea], [0, 1]]
    let ne = (p - ea) % p;
    let ma = [[1, 0, 0, 0], [ea, 1, 0, 0], [0, 0, 1, ne], [0, 0, 0, 1]];
    let nx = [[1, 0, x[0], x[1]], [0, 1, x[1], x[2]], [0, 0, 1, 0], [0, 0, 0, 1]];
    let mut out = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0;
            for k in 0..4 {
                s += ma[i][k] * nx[k][j];
            }
            out[i][j] = d[i] * (s % p) % p;
        }
    }
    out
}

/// A Bessel context with `c(Lambda) <= 1` whose Iwahori vector is a test
/// vector, together with `tau`.
#[derive(Clone, Debug)]
pub struct ZetaContext {
    pub bessel: BesselCtx,
    pub tau: TauSpec,
}

impl ZetaContext {
    pub fn new(bessel: BesselCtx, tau: TauSpec) -> Result<ZetaContext> {
        let (dim, tv) = bessel.dim_and_testvector();
        let ok = dim == 1
            && match tv {
                TestVector::Yes => true,
                TestVector::No => false,
                TestVector::UnlessLamIs(_) => bessel.lambda.is_symbolic(),
            };
        if !ok || bessel.lambda.m0 > 1 {
            return Err(Error::ParamDomain("W^# needs c(Lambda) <= 1 and a test vector".into()));
        }
        tau.check(bessel.q())?;
        Ok(ZetaContext { bessel, tau })
    }

    pub fn q(&self) -> u64 {
        self.bessel.q()
    }

    /// `(1 - (L/p) q^-1) q / ((1+q)^2 (1+q^2))`.
    pub fn c_const(&self) -> Scalar {
        let q = self.q() as i64;
        let sym = self.bessel.fd.case_sym();
        Scalar::frac(q - sym, (1 + q) * (1 + q) * (1 + q * q))
    }
}

/// `vol(R \ R h(l,0) I)` for `vol(K^H) = 1`.
pub fn volume_v(z: &ZetaContext, l: u32) -> Scalar {
    z.c_const() * Scalar::p_pow(z.q(), 3 * l as i64)
}

/// `W^#(eta h(l,0), s) = coefficient * X^(3l)`.
pub fn wsharp_at_frame(z: &ZetaContext, l: u32) -> Result<(Scalar, usize)> {
    let q = z.q();
    let li = l as i64;
    let c = Scalar::sqrt_p_pow(q, -3 * li) * z.tau.central().inv()?.powi(li) * whittaker_newform(&z.tau, q, l)?;
    Ok((c, 3 * l as usize))
}

/// `Z(s)` in closed form, summing the geometric series of
/// `C sum_l (-omega)^l q^(-3l/2) omega_tau^-l W^(1)(l) X^(3l)`.
pub fn zeta_closed(z: &ZetaContext) -> Result<RationalFunction> {
    let q = z.q();
    let c = z.c_const();
    let w = z.bessel.omega_s();
    let t = &z.tau;
    let geo = |r: Scalar| geometric_closed_form(&Scalar::one(), &r, 3);
    let q2 = Scalar::p_pow(q, -2);
    let cc = RationalFunction::constant(c);
    Ok(match t.class {
        TauClass::UnramPs => {
            // (a^(l+1) - b^(l+1)) / (ab)^l = a b^-l - b a^-l
            let d = &t.at - &t.bt;
            let ga = geo(-(&w * &t.bt.inv()? * &q2))?;
            let gb = geo(-(&w * &t.at.inv()? * &q2))?;
            let s = ga
                .mul(&RationalFunction::constant(t.at.checked_div(&d)?))
                .sub(&gb.mul(&RationalFunction::constant(t.bt.checked_div(&d)?)));
            cc.mul(&s)
        }
        TauClass::UnramRamPs => cc.mul(&geo(-(&w * &t.at.inv()? * &q2))?),
        TauClass::RamRamPs | TauClass::ScOrRamSt => cc,
        TauClass::UnramSt => cc.mul(&geo(-(&w * &t.omg.inv()? * Scalar::sqrt_p_pow(q, -5)))?),
    })
}

/// `1 + c X^3`.
fn one_plus_x3(c: Scalar) -> RationalFunction {
    RationalFunction::polynomial(vec![Scalar::one(), Scalar::zero(), Scalar::zero(), c])
}

/// `L(3s + 1/2, pi x tau~)` with `pi = Omega St`, `Omega(varpi) = -omega`.
pub fn l_factor(z: &ZetaContext) -> Result<RationalFunction> {
    let q = z.q();
    let w = z.bessel.omega_s();
    let t = &z.tau;
    // 1 - Omega(varpi) x q^-k q^-(3s+1/2) = 1 + omega x q^(-k-1/2) X^3
    let f = |x: &Scalar, k2: i64| -> Result<RationalFunction> {
        one_plus_x3(&w * &x.inv()? * Scalar::sqrt_p_pow(q, -k2 - 1)).inv()
    };
    Ok(match t.class {
        TauClass::UnramPs => f(&t.at, 3)?.mul(&f(&t.bt, 3)?),
        TauClass::UnramRamPs => f(&t.at, 3)?,
        TauClass::UnramSt => f(&t.omg, 2)?.mul(&f(&t.omg, 4)?),
        TauClass::RamRamPs | TauClass::ScOrRamSt => RationalFunction::one(),
    })
}

/// `Y'(s)`: `C (1 + omega omg^-1 q^(-3s-3/2))` for unramified twists of
/// Steinberg, `C` otherwise.
pub fn y_prime(z: &ZetaContext) -> Result<RationalFunction> {
    let c = RationalFunction::constant(z.c_const());
    Ok(match z.tau.class {
        TauClass::UnramSt => {
            let k = z.bessel.omega_s() * z.tau.omg.inv()? * Scalar::sqrt_p_pow(z.q(), -3);
            c.mul(&one_plus_x3(k))
        }
        _ => c,
    })
}

/// Both sides of `Z(s) = Y'(s) L(3s + 1/2, pi x tau~)` and the series check.
#[derive(Clone, Debug)]
pub struct TheoremCheck {
    pub zeta: RationalFunction,
    pub rhs: RationalFunction,
    pub difference: RationalFunction,
    /// Coefficients of `X^0 .. X^36` of the direct sum agree with `zeta`.
    pub series_ok: bool,
}

impl TheoremCheck {
    pub fn holds(&self) -> bool {
        self.difference.is_zero() && self.series_ok
    }
}

pub const SERIES_TERMS: u32 = 13;

/// `sum_{l < SERIES_TERMS} W^#(eta h(l,0)) B(h(l,0)) V_1^{l,0} X^(3l)` with
/// `B` read off the Bessel table.
pub fn zeta_truncated(z: &ZetaContext) -> Result<Vec<Scalar>> {
    let mut out = vec![Scalar::zero(); 3 * SERIES_TERMS as usize - 2];
    for l in 0..SERIES_TERMS {
        let (c, k) = wsharp_at_frame(z, l)?;
        let b = b_table(&z.bessel, &CosetAddress::plain(l as i64, 0, Weyl::E))?;
        out[k] = c * b * volume_v(z, l);
    }
    Ok(out)
}

pub fn verify_integral_theorem(z: &ZetaContext) -> Result<TheoremCheck> {
    let zeta = zeta_closed(z)?;
    let rhs = y_prime(z)?.mul(&l_factor(z)?);
    let difference = zeta.sub(&rhs);
    let direct = zeta_truncated(z)?;
    let series_ok = zeta.series(direct.len())? == direct;
    Ok(TheoremCheck { zeta, rhs, difference, series_ok })
}

/// Frames `h(0,m) t` for the support lemma: every tag at `m <= mmax`.
pub fn support_frames(fd: &FieldData, mmax: i64) -> Vec<CosetAddress> {
    CosetAddress::sweep(fd, 0..=0, mmax)
}

/// Whether `addr` is `h(l,0)` with `t = 1`.
pub fn is_identity_tag(addr: &CosetAddress) -> bool {
    addr.m == 0 && addr.wtag == WTag::None && addr.stag == Weyl::E
}
