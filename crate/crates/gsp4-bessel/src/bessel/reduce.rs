//! Writes `h` in `H(F)` as `r * frame * k` with `r` in `R(F) = T(F) U(F)`,
//! `frame` a double coset representative and `k` in the Iwahori subgroup.
//!
//! Steps: Iwasawa decomposition `h = n(X) m(A, mu) k0`; the lattice
//! `A o^2` is matched with `zeta O_m` inside `L`, which gives `t_zeta` and
//! `(l, m)`; the remaining element of `K^H` is located in its Bruhat cell;
//! the cell's unipotent part is moved left into `U(F)`, and `W_w s1` is
//! collapsed into `T(F)` when the two cosets coincide.

use num_traits::{One, Zero};

use super::address::{CosetAddress, WTag};
use super::lambda::theta_eval;
use super::table::b_table;
use super::BesselCtx;
use crate::error::{Error, Result};
use crate::grp::{
    bruhat_cell, cell_unipotent, h_raw, in_iwahori, in_kh, m2_det, m2_inv, m2_mul, m2_transpose,
    n_sym, t_embed, torus_m2, FMat, M2,
};
use crate::padic::{fval, is_unit, ppow, qi, split_val, FieldData, LElem};
use crate::scalars::{Scalar, Q};

/// A verified factorization `h = n(x) t_zeta frame(addr) k`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub addr: CosetAddress,
    pub zeta: LElem,
    pub x: M2,
    pub k: FMat,
}

impl Reduction {
    /// `(Lambda (x) theta)(r)`.
    pub fn rvalue(&self, ctx: &BesselCtx) -> Result<Scalar> {
        Ok(ctx.lambda_eval(&self.zeta)? * theta_eval(&ctx.fd, &self.x)?)
    }

    pub fn r_matrix(&self, fd: &FieldData) -> Result<FMat> {
        Ok(n_sym(&self.x[0][0], &self.x[0][1], &self.x[1][1]).mul(&t_of(fd, &self.zeta)?))
    }
}

fn t_of(fd: &FieldData, z: &LElem) -> Result<FMat> {
    let (x, y) = fd.to_torus(z);
    t_embed(&torus_m2(fd, &x, &y))
}

fn minval<'a>(xs: impl Iterator<Item = &'a Q>, p: u64) -> Option<i64> {
    xs.filter_map(|x| fval(x, p)).min()
}

/// `<u, v> = u J tv`.
fn pair(u: &[Q; 4], v: &[Q; 4]) -> Q {
    &u[0] * &v[2] + &u[1] * &v[3] - &u[2] * &v[0] - &u[3] * &v[1]
}

/// `h = p k0` with `p` in the Siegel parabolic and `k0` in `Sp_4(o)`.
fn iwasawa(h: &FMat, p: u64) -> Result<(FMat, FMat)> {
    let fail = || Error::NotFound("Iwasawa decomposition".into());
    let mut rows = [h.e[2].clone(), h.e[3].clone()];
    let (mut bi, mut bj, mut bv) = (0, 0, i64::MAX);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            if let Some(v) = fval(x, p) {
                if v < bv {
                    (bi, bj, bv) = (i, j, v);
                }
            }
        }
    }
    if bv == i64::MAX {
        return Err(fail());
    }
    rows.swap(0, bi);
    let piv = rows[0][bj].clone();
    let v1: [Q; 4] = std::array::from_fn(|a| &rows[0][a] / &piv);
    let f = rows[1][bj].clone();
    let r: [Q; 4] = std::array::from_fn(|a| &rows[1][a] - &f * &v1[a]);
    let mv = minval(r.iter(), p).ok_or_else(fail)?;
    let s = ppow(p, -mv);
    let v2: [Q; 4] = std::array::from_fn(|a| &r[a] * &s);

    // Columns J tv1, J tv2; u with <u, v1> = t1, <u, v2> = t2 is found on
    // two coordinates where the minor is a unit.
    let jv = |v: &[Q; 4]| -> [Q; 4] { [v[2].clone(), v[3].clone(), -&v[0], -&v[1]] };
    let (n1, n2) = (jv(&v1), jv(&v2));
    let mut pick = None;
    'outer: for i1 in 0..4 {
        for i2 in i1 + 1..4 {
            let det = &n1[i1] * &n2[i2] - &n1[i2] * &n2[i1];
            if is_unit(&det, p) {
                pick = Some((i1, i2, det));
                break 'outer;
            }
        }
    }
    let (i1, i2, det) = pick.ok_or_else(fail)?;
    let solve = |t1: Q, t2: Q| -> [Q; 4] {
        // [u_i1 u_i2] [[n1_i1, n2_i1], [n1_i2, n2_i2]] = [t1 t2]
        let a = (&t1 * &n2[i2] - &t2 * &n1[i2]) / &det;
        let b = (&t2 * &n1[i1] - &t1 * &n2[i1]) / &det;
        let mut u: [Q; 4] = std::array::from_fn(|_| Q::zero());
        u[i1] = a;
        u[i2] = b;
        u
    };
    let u1 = solve(Q::one(), Q::zero());
    let u2p = solve(Q::zero(), Q::one());
    let c = pair(&u1, &u2p);
    let u2: [Q; 4] = std::array::from_fn(|a| &u2p[a] - &c * &v1[a]);
    let k0 = FMat { e: [u1, u2, v1, v2] };
    if k0.similitude() != Some(Q::one()) || !in_kh(&k0, p) {
        return Err(Error::InvalidFactorization("Iwasawa: k0 not in Sp4(o)".into()));
    }
    let pm = h.mul(&k0.inverse()?);
    if (2..4).any(|i| (0..2).any(|j| !pm.e[i][j].is_zero())) {
        return Err(Error::InvalidFactorization("Iwasawa: p not in the Siegel parabolic".into()));
    }
    Ok((pm, k0))
}

fn w_tag(fd: &FieldData, x: u64) -> WTag {
    if fd.w0 == Some(x) {
        WTag::W0
    } else if fd.split_roots.map(|r| r.0) == Some(x) {
        WTag::Plus
    } else {
        WTag::Minus
    }
}

pub fn reduce(ctx: &BesselCtx, h: &FMat) -> Result<Reduction> {
    let fd = &ctx.fd;
    let p = fd.p;
    let mu = h.similitude().ok_or_else(|| Error::ParamDomain("reduce needs an element of H(F)".into()))?;
    let (pm, _) = iwasawa(h, p)?;
    let a = pm.block(0, 0);
    let b = pm.block(0, 1);
    let x0 = m2_mul(&b, &m2_transpose(&a)).map(|r| r.map(|v| v / &mu));

    // Lattice A o^2 against O_m = o + p^m o_L, via phi(v) = v1 alpha + v2.
    let galpha: M2 = [[fd.qb() / fd.qc(), Q::one()], [-fd.qa() / fd.qc(), Q::zero()]];
    let ainv = m2_inv(&a)?;
    let conj = m2_mul(&m2_mul(&ainv, &galpha), &a);
    let m = (-minval(conj.iter().flatten(), p).unwrap_or(0)).max(0);
    let pmq = ppow(p, m);
    let deta = m2_det(&a);
    let mut gen = None;
    'search: for i in 0..p as i64 {
        for j in 0..p as i64 {
            if i == 0 && j == 0 {
                continue;
            }
            let v = [&a[0][0] * qi(i) + &a[0][1] * qi(j), &a[1][0] * qi(i) + &a[1][1] * qi(j)];
            let w = [
                (&galpha[0][0] * &v[0] + &galpha[0][1] * &v[1]) * &pmq,
                (&galpha[1][0] * &v[0] + &galpha[1][1] * &v[1]) * &pmq,
            ];
            let d = &v[0] * &w[1] - &v[1] * &w[0];
            if is_unit(&(d / &deta), p) {
                gen = Some(v);
                break 'search;
            }
        }
    }
    let v = gen.ok_or_else(|| Error::NotFound("no generator of the lattice".into()))?;
    let zeta = fd.from_basis(v[1].clone(), v[0].clone());
    let (e, _) = split_val(&(&mu / zeta.norm()), p);
    let l = -e;
    let zeta = zeta.scale(&ppow(p, e - m));

    let t = t_of(fd, &zeta)?;
    let hlm = h_raw(p, l, m);
    let nx0 = n_sym(&x0[0][0], &x0[0][1], &x0[1][1]);
    let k1 = hlm.inverse()?.mul(&t.inverse()?).mul(&nx0.inverse()?).mul(h);
    let (rep, _) = bruhat_cell(&k1, p)?;

    // Unipotent of the cell moved left through h(l,m) and t_zeta.
    let params: Vec<Q> = rep.params.iter().map(|&x| qi(x as i64)).collect();
    let unip = cell_unipotent(rep.word, &params);
    let kappa: M2 = unip.block(0, 0);
    let nyp = FMat { e: unip.e.clone() };
    let ny = crate::grp::m_block(&kappa, &Q::one())?.inverse()?.mul(&nyp);
    let y = ny.block(0, 1);
    let dg: M2 = [[ppow(p, 2 * m + l), Q::zero()], [Q::zero(), ppow(p, m + l)]];
    let mu_h = ppow(p, 2 * m + l);
    let conj2 = |g: &M2, y: &M2, s: &Q| m2_mul(&m2_mul(g, y), &m2_transpose(g)).map(|r| r.map(|v| v / s));
    let y2 = conj2(&m2_mul(&dg, &kappa), &y, &mu_h);
    let (tx, ty) = fd.to_torus(&zeta);
    let y3 = conj2(&torus_m2(fd, &tx, &ty), &y2, &zeta.norm());
    let xt: M2 = std::array::from_fn(|i| std::array::from_fn(|j| &x0[i][j] + &y3[i][j]));

    let (addr, zc) = if rep.word.in_w1() {
        (CosetAddress::plain(l, m, rep.word), None)
    } else {
        let sp = rep.word.strip_s1().expect("s1 word");
        let x = rep.params[0];
        let xq = qi(x as i64);
        if m > 0 && x == 0 {
            (CosetAddress::plain(l, m, rep.word), None)
        } else if fd.beta_wm(&xq, m as u32).1 {
            let zc = fd.from_basis(&fd.qc() * &xq, fd.qc() * &pmq);
            (CosetAddress::plain(l, m, sp), Some(zc))
        } else {
            (CosetAddress::tagged(l, w_tag(fd, x), sp), None)
        }
    };
    let zeta = match zc {
        Some(z) => zeta.mul(&z),
        None => zeta,
    };
    let red = Reduction { addr, zeta, x: xt, k: FMat::identity() };
    let frame = addr.frame(fd)?;
    let k = frame.inverse()?.mul(&red.r_matrix(fd)?.inverse()?).mul(h);
    if !in_iwahori(&k, p) {
        return Err(Error::InvalidFactorization(format!("witness for {} is not in I", addr)));
    }
    Ok(Reduction { k, ..red })
}

/// Checks a supplied factorization `h = n(x) t_zeta frame k` exactly.
pub fn verify_factored(ctx: &BesselCtx, h: &FMat, red: &Reduction) -> Result<()> {
    let fd = &ctx.fd;
    let lhs = red.r_matrix(fd)?.mul(&red.addr.frame(fd)?).mul(&red.k);
    if &lhs != h || !in_iwahori(&red.k, fd.p) {
        return Err(Error::InvalidFactorization(format!("{} does not reproduce h", red.addr)));
    }
    Ok(())
}

pub fn b_eval(ctx: &BesselCtx, h: &FMat) -> Result<Scalar> {
    let red = reduce(ctx, h)?;
    let v = b_table(ctx, &red.addr)?;
    if v.is_zero() {
        return Ok(v);
    }
    Ok(red.rvalue(ctx)? * v)
}
