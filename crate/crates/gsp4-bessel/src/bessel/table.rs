//! The value of the normalized Iwahori-fixed Bessel function on every
//! double coset representative.

use super::address::{CosetAddress, WTag};
use super::BesselCtx;
use crate::error::Result;
use crate::grp::Weyl;
use crate::padic::Case;
use crate::scalars::Scalar;

/// `A_{l,m}`.
pub fn a_lm(ctx: &BesselCtx, l: i64, m: i64) -> Scalar {
    let q = ctx.q();
    let m0 = ctx.lambda.m0 as i64;
    let shift = if m0 >= 1 { m - m0 + 1 } else { m };
    let base = Scalar::from_int(-ctx.omega) * Scalar::p_pow(q, -3);
    Scalar::p_pow(q, -4 * shift) * base.powi(l)
}

/// `C_{m0}`, fixed to 1 except where it is forced to vanish.
pub fn c_m0(ctx: &BesselCtx) -> Scalar {
    if ctx.is_dim_zero() || ctx.is_split_degenerate() {
        Scalar::zero()
    } else {
        Scalar::one()
    }
}

pub fn b_table(ctx: &BesselCtx, addr: &CosetAddress) -> Result<Scalar> {
    addr.validate(&ctx.fd)?;
    Ok(match addr.wtag {
        WTag::None => plain(ctx, addr.l, addr.m, addr.stag),
        WTag::W0 => w0_row(ctx, addr.l, addr.stag),
        WTag::Plus => wplus_row(ctx, addr.l, addr.stag),
        WTag::Minus => {
            // omega Lambda((varpi, 1)) on every row
            wplus_row(ctx, addr.l, addr.stag) * ctx.omega_s() * ctx.lambda.lambda_varpi_one()
        }
    })
}

fn plain(ctx: &BesselCtx, l: i64, m: i64, s: Weyl) -> Scalar {
    let q = ctx.q();
    let m0 = ctx.lambda.m0 as i64;
    let c = c_m0(ctx);
    let w = ctx.omega_s();
    let qs = |k: i64| Scalar::p_pow(q, k);
    let a = || a_lm(ctx, l, m);
    let a0 = || a_lm(ctx, 0, m);
    let v = match s {
        Weyl::E | Weyl::S2 | Weyl::S2S1 | Weyl::S2S1S2 => {
            let lmin = if s == Weyl::S2S1S2 { -1 } else { 0 };
            if l < lmin || m <= m0 - 2 {
                return Scalar::zero();
            }
            match s {
                Weyl::E => a(),
                Weyl::S2 => -qs(-1) * a(),
                Weyl::S2S1 => qs(-2) * a(),
                _ if l == -1 => &w * a0(),
                _ => -qs(-3) * a(),
            }
        }
        _ => {
            let lmin = if s == Weyl::S1 { 0 } else { -1 };
            if l < lmin || m <= m0 - 1 {
                return Scalar::zero();
            }
            match (s, l == -1) {
                (Weyl::S1, _) => -qs(1) * a(),
                (Weyl::S1S2, true) => -(&w * qs(3) * a0()),
                (Weyl::S1S2, false) => a(),
                (Weyl::S1S2S1, true) => &w * qs(2) * a0(),
                (Weyl::S1S2S1, false) => -qs(-1) * a(),
                (_, true) => -(&w * qs(1) * a0()),
                (_, false) => qs(-2) * a(),
            }
        }
    };
    v * c
}

fn w0_row(ctx: &BesselCtx, l: i64, s: Weyl) -> Scalar {
    if ctx.lambda.m0 >= 1 {
        return Scalar::zero();
    }
    let q = ctx.q();
    let c = c_m0(ctx);
    let w = ctx.omega_s();
    let qs = |k: i64| Scalar::p_pow(q, k);
    let v = match s {
        Weyl::E if l <= -1 => return Scalar::zero(),
        Weyl::E => -qs(1) * a_lm(ctx, l, 0),
        _ if l <= -2 => return Scalar::zero(),
        Weyl::S2 if l == -1 => -(&w * qs(3)),
        Weyl::S2 => a_lm(ctx, l, 0),
        Weyl::S2S1 => &w * qs(2) * a_lm(ctx, l + 1, 0),
        _ => -(&w * qs(1) * a_lm(ctx, l + 1, 0)),
    };
    v * c
}

fn wplus_row(ctx: &BesselCtx, l: i64, s: Weyl) -> Scalar {
    debug_assert_eq!(ctx.fd.case, Case::Split);
    if ctx.lambda.m0 >= 1 {
        return Scalar::zero();
    }
    let q = ctx.q();
    let w = ctx.omega_s();
    let qs = |k: i64| Scalar::p_pow(q, k);
    let lmin = if s == Weyl::E || s == Weyl::S2 { 0 } else { -1 };
    if l < lmin {
        return Scalar::zero();
    }
    if ctx.is_split_degenerate() {
        // normalized by B(W_+ s1) = 1
        return match s {
            Weyl::E => a_lm(ctx, l, 0),
            Weyl::S2 => -qs(-1) * a_lm(ctx, l, 0),
            Weyl::S2S1 => -(&w * qs(1) * a_lm(ctx, l + 1, 0)),
            _ => &w * a_lm(ctx, l + 1, 0),
        };
    }
    let den = Scalar::one() + &w * ctx.lambda.lambda_varpi_one();
    let qm1 = Scalar::from_int(q as i64 - 1);
    let f = &qm1 / &den;
    let v = match s {
        Weyl::E => -(&f * a_lm(ctx, l, 0)),
        Weyl::S2 => qs(-1) * &f * a_lm(ctx, l, 0),
        Weyl::S2S1 => &w * qs(1) * &f * a_lm(ctx, l + 1, 0),
        _ => -(&w * &f * a_lm(ctx, l + 1, 0)),
    };
    v * c_m0(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::LambdaSpec;
    use crate::padic::build_field_data;
    use crate::scalars::parse_scalar;

    fn ctx(p: u64, abc: (i64, i64, i64), m0: u32, unif: Option<Scalar>, omega: i64) -> BesselCtx {
        let fd = build_field_data(p, abc.0, abc.1, abc.2).unwrap();
        let l = LambdaSpec::new(&fd, m0, 0, unif).unwrap();
        BesselCtx::new(fd, l, omega).unwrap()
    }

    #[test]
    fn listed_values() {
        let c = ctx(5, (5, 0, 1), 0, Some(Scalar::from_int(-1)), -1);
        let t = |l, m, s| b_table(&c, &CosetAddress::plain(l, m, s)).unwrap();
        assert_eq!(t(1, 0, Weyl::E), Scalar::frac(1, 125));
        assert_eq!(t(0, 0, Weyl::S2), Scalar::frac(-1, 5));
        // -omega q^3 q^-4
        assert_eq!(t(-1, 1, Weyl::S1S2), Scalar::frac(1, 5));
        let s = ctx(5, (0, 1, 1), 0, None, -1);
        let v = b_table(&s, &CosetAddress::tagged(0, WTag::Plus, Weyl::E)).unwrap();
        assert_eq!(v, parse_scalar("-4/(1 - lam^-1)").unwrap());
    }

    #[test]
    fn recursions() {
        let c = ctx(3, (1, 0, 1), 2, None, 1);
        let q = Scalar::from_int(3);
        for m in 1..4 {
            for l in 0..3 {
                let b = |l, m| b_table(&c, &CosetAddress::plain(l, m, Weyl::E)).unwrap();
                assert_eq!(b(l + 1, m), Scalar::from_int(-1) / q.powi(3) * b(l, m));
                assert_eq!(b(l, m + 1), q.powi(-4) * b(l, m));
            }
        }
        assert!(b_table(&c, &CosetAddress::plain(0, 0, Weyl::E)).unwrap().is_zero());
    }

    #[test]
    fn dim_zero_is_identically_zero() {
        let c = ctx(3, (1, 0, 1), 0, None, 1);
        for a in CosetAddress::sweep(&c.fd, -2..=2, 2) {
            assert!(b_table(&c, &a).unwrap().is_zero());
        }
    }
}
