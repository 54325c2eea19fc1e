//! 4x4 matrices over `F` and `L`, similitudes, compact subgroups, the named
//! matrices, and the Bruhat cells of `K^H` modulo the Iwahori subgroup.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::padic::{fval, is_integral, is_unit, ppow, qi, residue, FieldData, LElem};
use crate::report::Row;
use crate::scalars::Q;

/// Ring operations needed by [`Mat`].
pub trait Entry: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn eadd(&self, o: &Self) -> Self;
    fn esub(&self, o: &Self) -> Self;
    fn emul(&self, o: &Self) -> Self;
    fn eneg(&self) -> Self;
    fn eis_zero(&self) -> bool;
    /// Galois conjugation; the identity on `F`.
    fn bar(&self) -> Self;
}

impl Entry for Q {
    fn zero_like(&self) -> Q {
        Q::zero()
    }
    fn one_like(&self) -> Q {
        Q::one()
    }
    fn eadd(&self, o: &Q) -> Q {
        self + o
    }
    fn esub(&self, o: &Q) -> Q {
        self - o
    }
    fn emul(&self, o: &Q) -> Q {
        self * o
    }
    fn eneg(&self) -> Q {
        -self
    }
    fn eis_zero(&self) -> bool {
        self.is_zero()
    }
    fn bar(&self) -> Q {
        self.clone()
    }
}

impl Entry for LElem {
    fn zero_like(&self) -> LElem {
        LElem::zero_in(self.alg)
    }
    fn one_like(&self) -> LElem {
        LElem::one_in(self.alg)
    }
    fn eadd(&self, o: &LElem) -> LElem {
        self.add(o)
    }
    fn esub(&self, o: &LElem) -> LElem {
        self.sub(o)
    }
    fn emul(&self, o: &LElem) -> LElem {
        self.mul(o)
    }
    fn eneg(&self) -> LElem {
        self.neg()
    }
    fn eis_zero(&self) -> bool {
        self.is_zero()
    }
    fn bar(&self) -> LElem {
        self.conj()
    }
}

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    pub e: [[T; 4]; 4],
}

pub type FMat = Mat<Q>;
pub type LMat = Mat<LElem>;

impl<T: Entry> Mat<T> {
    pub fn from_fn(f: impl Fn(usize, usize) -> T) -> Mat<T> {
        Mat { e: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))) }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.e[i][j]
    }

    pub fn mul(&self, o: &Mat<T>) -> Mat<T> {
        Mat::from_fn(|i, j| {
            let mut acc = self.e[0][0].zero_like();
            for k in 0..4 {
                if !self.e[i][k].eis_zero() && !o.e[k][j].eis_zero() {
                    acc = acc.eadd(&self.e[i][k].emul(&o.e[k][j]));
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(|i, j| self.e[j][i].clone())
    }

    pub fn bar(&self) -> Mat<T> {
        Mat::from_fn(|i, j| self.e[i][j].bar())
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        Mat::from_fn(|i, j| self.e[i][j].emul(c))
    }

    pub fn identity_like(&self) -> Mat<T> {
        let z = self.e[0][0].zero_like();
        let one = z.one_like();
        Mat::from_fn(|i, j| if i == j { one.clone() } else { z.clone() })
    }

    pub fn is_identity(&self) -> bool {
        *self == self.identity_like()
    }

    fn j_like(&self) -> Mat<T> {
        let z = self.e[0][0].zero_like();
        let one = z.one_like();
        Mat::from_fn(|i, j| {
            if j == i + 2 {
                one.clone()
            } else if i == j + 2 {
                one.eneg()
            } else {
                z.clone()
            }
        })
    }

    /// `mu` with `tbar(g) J g = mu J`, if it exists.  The conjugation is
    /// trivial for matrices over `F`, which gives the `H` form.
    pub fn similitude_raw(&self) -> Option<T> {
        let j = self.j_like();
        let m = self.bar().transpose().mul(&j).mul(self);
        let mu = m.e[0][2].clone();
        if mu.eis_zero() || m != j.scale(&mu) {
            return None;
        }
        Some(mu)
    }

    /// Inverse of a similitude: `g^-1 = mu^-1 J^-1 tbar(g) J`.
    pub fn sim_inverse_with(&self, mu_inv: &T) -> Mat<T> {
        let j = self.j_like();
        let jinv = Mat::from_fn(|a, b| j.e[a][b].eneg());
        jinv.mul(&self.bar().transpose()).mul(&j).scale(mu_inv)
    }
}

impl<T: Entry> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.e {
            writeln!(f, "{:?}", row)?;
        }
        Ok(())
    }
}

impl fmt::Display for FMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .e
            .iter()
            .map(|r| r.iter().map(crate::scalars::text::format_q).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl FMat {
    pub fn from_rows(r: [[i64; 4]; 4]) -> FMat {
        Mat::from_fn(|i, j| qi(r[i][j]))
    }

    pub fn identity() -> FMat {
        FMat::from_rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    pub fn diag(d: [Q; 4]) -> FMat {
        Mat::from_fn(|i, j| if i == j { d[i].clone() } else { Q::zero() })
    }

    pub fn diag_i(d: [i64; 4]) -> FMat {
        FMat::diag(d.map(qi))
    }

    pub fn j() -> FMat {
        FMat::identity().j_like()
    }

    pub fn similitude(&self) -> Option<Q> {
        self.similitude_raw()
    }

    pub fn inverse(&self) -> Result<FMat> {
        let mu = self
            .similitude()
            .ok_or_else(|| Error::ParamDomain("inverse of a non-similitude".into()))?;
        Ok(self.sim_inverse_with(&mu.recip()))
    }

    pub fn lift(&self, fd: &FieldData) -> LMat {
        Mat::from_fn(|i, j| fd.f(self.e[i][j].clone()))
    }

    pub fn is_integral(&self, p: u64) -> bool {
        self.e.iter().flatten().all(|x| is_integral(x, p))
    }

    /// Entries reduced mod `p`; requires integral entries.
    pub fn residues(&self, p: u64) -> [[u64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| residue(&self.e[i][j], p)))
    }

    pub fn upper_left(&self) -> [[Q; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].clone()))
    }

    pub fn block(&self, bi: usize, bj: usize) -> [[Q; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.e[2 * bi + i][2 * bj + j].clone()))
    }
}

impl LMat {
    pub fn identity_in(fd: &FieldData) -> LMat {
        FMat::identity().lift(fd)
    }

    /// `mu_2` for the unitary form, required to lie in `F`.
    pub fn similitude_g(&self) -> Option<Q> {
        self.similitude_raw().and_then(|m| m.as_f())
    }

    /// The matrix over `F`, if every entry lies in `F`.
    pub fn as_f(&self) -> Option<FMat> {
        let mut out = FMat::identity();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = self.e[i][j].as_f()?;
            }
        }
        Some(out)
    }
}

/// 2x2 helpers.
pub type M2 = [[Q; 2]; 2];

pub fn m2_det(g: &M2) -> Q {
    &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0]
}

pub fn m2_mul(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

pub fn m2_transpose(a: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

pub fn m2_inv(g: &M2) -> Result<M2> {
    let d = m2_det(g);
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = d.recip();
    Ok([[&g[1][1] * &r, -&g[0][1] * &r], [-&g[1][0] * &r, &g[0][0] * &r]])
}

pub fn m2_is_gl2o(g: &M2, p: u64) -> bool {
    g.iter().flatten().all(|x| is_integral(x, p)) && is_unit(&m2_det(g), p)
}

// ---------------------------------------------------------------------------
// Subgroups

pub fn in_kh(g: &FMat, p: u64) -> bool {
    g.is_integral(p) && g.similitude().map(|mu| is_unit(&mu, p)).unwrap_or(false)
}

pub(crate) const IWAHORI_ZEROS: [(usize, usize); 6] = [(0, 1), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];

pub fn in_iwahori(g: &FMat, p: u64) -> bool {
    in_kh(g, p) && IWAHORI_ZEROS.iter().all(|&(i, j)| fval(&g.e[i][j], p).map(|v| v >= 1).unwrap_or(true))
}

pub fn in_kg(g: &LMat, fd: &FieldData) -> bool {
    g.e.iter().flatten().all(|z| fd.lval(z).map(|v| v >= 0).unwrap_or(true))
        && g.similitude_g().map(|mu| is_unit(&mu, fd.p)).unwrap_or(false)
}

/// The principal congruence subgroup `Gamma(P^n)` of `K^G`.
pub fn in_gamma_pn(g: &LMat, fd: &FieldData, n: i64) -> bool {
    if !in_kg(g, fd) {
        return false;
    }
    let one = fd.lone();
    (0..4).all(|i| {
        (0..4).all(|j| {
            let z = if i == j { g.e[i][j].sub(&one) } else { g.e[i][j].clone() };
            fd.lval(&z).map(|v| v >= n).unwrap_or(true)
        })
    })
}

fn in_p_n(x: &Q, p: u64, n: i64) -> bool {
    fval(x, p).map(|v| v >= n).unwrap_or(true)
}

/// `Gamma_0(p^n)`: `GL_2(o)` with lower-left entry in `p^n`.
pub fn in_k0_gl2(g: &M2, p: u64, n: i64) -> bool {
    m2_is_gl2o(g, p) && in_p_n(&g[1][0], p, n)
}

/// `K^(0)(p^n) = GL_2(o) cap [[1 + p^n, o], [p^n, o^x]]`, and `GL_2(o)` for `n = 0`.
pub fn in_k1_gl2(g: &M2, p: u64, n: i64) -> bool {
    if !m2_is_gl2o(g, p) {
        return false;
    }
    n == 0
        || (in_p_n(&(&g[0][0] - Q::one()), p, n) && in_p_n(&g[1][0], p, n) && is_unit(&g[1][1], p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    I,
    KH,
    KG,
    GammaPn(i64),
}

/// Membership for an `L`-matrix; the `H`-side tests require entries in `F`.
pub fn subgroup_test(g: &LMat, fd: &FieldData, which: Subgroup) -> bool {
    match which {
        Subgroup::I => g.as_f().map(|f| in_iwahori(&f, fd.p)).unwrap_or(false),
        Subgroup::KH => g.as_f().map(|f| in_kh(&f, fd.p)).unwrap_or(false),
        Subgroup::KG => in_kg(g, fd),
        Subgroup::GammaPn(n) => in_gamma_pn(g, fd, n),
    }
}

// ---------------------------------------------------------------------------
// Named matrices

pub fn s1() -> FMat {
    FMat::from_rows([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
}

pub fn s2() -> FMat {
    FMat::from_rows([[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]])
}

pub fn eta0(p: u64) -> FMat {
    let w = p as i64;
    FMat::from_rows([[0, 0, 0, 1], [0, 0, 1, 0], [0, w, 0, 0], [w, 0, 0, 0]])
}

/// `h(l,m) = diag(p^(2m+l), p^(m+l), 1, p^m)`, defined for `m >= 0`.
pub fn h_lm(p: u64, l: i64, m: i64) -> Result<FMat> {
    if m < 0 {
        return Err(Error::ParamDomain(format!("h(l,m) needs m >= 0, got m = {}", m)));
    }
    Ok(h_raw(p, l, m))
}

pub(crate) fn h_raw(p: u64, l: i64, m: i64) -> FMat {
    FMat::diag([ppow(p, 2 * m + l), ppow(p, m + l), Q::one(), ppow(p, m)])
}

/// `W_w`: lower unipotent in the Levi of the Siegel parabolic.
pub fn w_mat(w: &Q) -> FMat {
    let mut g = FMat::identity();
    g.e[1][0] = w.clone();
    g.e[2][3] = -w;
    g
}

/// The unipotent in the first Hecke operator.
pub fn u1(w: &Q) -> FMat {
    let mut g = FMat::identity();
    g.e[0][1] = w.clone();
    g.e[3][2] = -w;
    g
}

/// The unipotent in the second Hecke operator (entry `y` at row 3, column 1).
pub fn u2(y: &Q) -> FMat {
    let mut g = FMat::identity();
    g.e[2][0] = y.clone();
    g
}

/// `n(X) = [[1, X], [0, 1]]` for symmetric `X`.
pub fn u_x(x: &M2) -> Result<FMat> {
    if x[0][1] != x[1][0] {
        return Err(Error::ParamDomain("U_X needs symmetric X".into()));
    }
    Ok(n_sym(&x[0][0], &x[0][1], &x[1][1]))
}

pub fn n_sym(x11: &Q, x12: &Q, x22: &Q) -> FMat {
    let mut g = FMat::identity();
    g.e[0][2] = x11.clone();
    g.e[0][3] = x12.clone();
    g.e[1][2] = x12.clone();
    g.e[1][3] = x22.clone();
    g
}

/// `m(A, mu) = diag(A, mu tA^-1)`.
pub fn m_block(a: &M2, mu: &Q) -> Result<FMat> {
    let ai = m2_transpose(&m2_inv(a)?);
    let mut g = FMat::identity();
    for i in 0..2 {
        for j in 0..2 {
            g.e[i][j] = a[i][j].clone();
            g.e[2 + i][2 + j] = mu * &ai[i][j];
        }
    }
    Ok(g)
}

/// `g -> diag(g, det(g) tg^-1)`.
pub fn t_embed(g: &M2) -> Result<FMat> {
    m_block(g, &m2_det(g))
}

/// The torus matrix `[[x + by/2, cy], [-ay, x - by/2]]`.
pub fn torus_m2(fd: &FieldData, x: &Q, y: &Q) -> M2 {
    let hb = fd.qb() * y / qi(2);
    [[x + &hb, fd.qc() * y], [-(fd.qa() * y), x - &hb]]
}

pub fn t_zeta(fd: &FieldData, z: &LElem) -> Result<FMat> {
    if z.norm().is_zero() {
        return Err(Error::ParamDomain("T_zeta needs an invertible zeta".into()));
    }
    let (x, y) = fd.to_torus(z);
    t_embed(&torus_m2(fd, &x, &y))
}

pub fn center(z: &Q) -> Result<FMat> {
    if z.is_zero() {
        return Err(Error::ParamDomain("center needs z != 0".into()));
    }
    Ok(FMat::diag([z.clone(), z.clone(), z.clone(), z.clone()]))
}

/// `eta_m`; `eta = eta_0` in this indexing (not the Atkin-Lehner `eta0`).
pub fn eta_m(fd: &FieldData, m: i64) -> LMat {
    let a = fd.alpha().scale(&ppow(fd.p, m));
    let mut g = LMat::identity_in(fd);
    g.e[1][0] = a.clone();
    g.e[2][3] = a.conj().neg();
    g
}

pub fn eta(fd: &FieldData) -> LMat {
    eta_m(fd, 0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Named {
    S1,
    S2,
    Eta0,
    Eta,
    EtaM(i64),
    Hlm(i64, i64),
    Ww(Q),
    Ux(M2),
    Tzeta(LElem),
    Center(Q),
}

pub fn named(fd: &FieldData, tag: &Named) -> Result<LMat> {
    let p = fd.p;
    Ok(match tag {
        Named::S1 => s1().lift(fd),
        Named::S2 => s2().lift(fd),
        Named::Eta0 => eta0(p).lift(fd),
        Named::Eta => eta(fd),
        Named::EtaM(m) => {
            if *m < 0 {
                return Err(Error::ParamDomain("eta_m needs m >= 0".into()));
            }
            eta_m(fd, *m)
        }
        Named::Hlm(l, m) => h_lm(p, *l, *m)?.lift(fd),
        Named::Ww(w) => w_mat(w).lift(fd),
        Named::Ux(x) => u_x(x)?.lift(fd),
        Named::Tzeta(z) => t_zeta(fd, z)?.lift(fd),
        Named::Center(z) => center(z)?.lift(fd),
    })
}

// ---------------------------------------------------------------------------
// Weyl group

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weyl {
    E,
    S1,
    S2,
    S1S2,
    S2S1,
    S1S2S1,
    S2S1S2,
    S1S2S1S2,
}

impl Weyl {
    pub const ALL: [Weyl; 8] =
        [Weyl::E, Weyl::S1, Weyl::S2, Weyl::S1S2, Weyl::S2S1, Weyl::S1S2S1, Weyl::S2S1S2, Weyl::S1S2S1S2];

    /// `W^(1)`, representatives of `{1, s1} \ W`.
    pub const W1: [Weyl; 4] = [Weyl::E, Weyl::S2, Weyl::S2S1, Weyl::S2S1S2];

    pub fn letters(self) -> &'static [u8] {
        match self {
            Weyl::E => &[],
            Weyl::S1 => &[1],
            Weyl::S2 => &[2],
            Weyl::S1S2 => &[1, 2],
            Weyl::S2S1 => &[2, 1],
            Weyl::S1S2S1 => &[1, 2, 1],
            Weyl::S2S1S2 => &[2, 1, 2],
            Weyl::S1S2S1S2 => &[1, 2, 1, 2],
        }
    }

    pub fn len(self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(self) -> bool {
        self == Weyl::E
    }

    pub fn matrix(self) -> FMat {
        self.letters()
            .iter()
            .fold(FMat::identity(), |acc, &l| acc.mul(&if l == 1 { s1() } else { s2() }))
    }

    pub fn name(self) -> &'static str {
        match self {
            Weyl::E => "1",
            Weyl::S1 => "s1",
            Weyl::S2 => "s2",
            Weyl::S1S2 => "s1s2",
            Weyl::S2S1 => "s2s1",
            Weyl::S1S2S1 => "s1s2s1",
            Weyl::S2S1S2 => "s2s1s2",
            Weyl::S1S2S1S2 => "s1s2s1s2",
        }
    }

    pub fn parse(s: &str) -> Option<Weyl> {
        let s = s.trim();
        Weyl::ALL.into_iter().find(|w| w.name() == s)
    }

    pub fn in_w1(self) -> bool {
        Weyl::W1.contains(&self)
    }

    /// `s1 * s` for `s` in `W^(1)`.
    pub fn s1_times(self) -> Option<Weyl> {
        Some(match self {
            Weyl::E => Weyl::S1,
            Weyl::S2 => Weyl::S1S2,
            Weyl::S2S1 => Weyl::S1S2S1,
            Weyl::S2S1S2 => Weyl::S1S2S1S2,
            _ => return None,
        })
    }

    /// Inverse of [`Weyl::s1_times`].
    pub fn strip_s1(self) -> Option<Weyl> {
        Weyl::W1.into_iter().find(|w| w.s1_times() == Some(self))
    }
}

// ---------------------------------------------------------------------------
// Bruhat cells of K^H / I

/// A cell representative `W_x n(Y) s` with parameters in `0..p`.  For words
/// starting with `s1` the first parameter is `x` of `W_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellRep {
    pub word: Weyl,
    pub params: Vec<u64>,
}

/// The unipotent part of a cell representative.
pub fn cell_unipotent(word: Weyl, params: &[Q]) -> FMat {
    let z = Q::zero();
    let (w, ys): (Option<&Q>, &[Q]) = match word {
        Weyl::S1 | Weyl::S1S2 | Weyl::S1S2S1 | Weyl::S1S2S1S2 => (Some(&params[0]), &params[1..]),
        _ => (None, params),
    };
    let n = match word {
        Weyl::E | Weyl::S1 => FMat::identity(),
        Weyl::S2 => n_sym(&ys[0], &z, &z),
        Weyl::S1S2 => n_sym(&z, &z, &ys[0]),
        Weyl::S2S1 => n_sym(&ys[0], &ys[1], &z),
        Weyl::S1S2S1 => n_sym(&z, &ys[0], &ys[1]),
        Weyl::S2S1S2 | Weyl::S1S2S1S2 => n_sym(&ys[0], &ys[1], &ys[2]),
    };
    match w {
        Some(w) => w_mat(w).mul(&n),
        None => n,
    }
}

impl CellRep {
    pub fn matrix(&self) -> FMat {
        let ps: Vec<Q> = self.params.iter().map(|&v| qi(v as i64)).collect();
        cell_unipotent(self.word, &ps).mul(&self.word.matrix())
    }
}

type Sig = ([u64; 4], [[u64; 4]; 2]);

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut e, mut b) = (1u64, p - 2, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn normalize_line(v: [u64; 4], p: u64) -> [u64; 4] {
    let lead = v.iter().copied().find(|&x| x != 0).expect("nonzero column");
    let s = inv_mod(lead, p);
    v.map(|x| x * s % p)
}

fn rref2(a: [u64; 4], b: [u64; 4], p: u64) -> [[u64; 4]; 2] {
    let a = normalize_line(a, p);
    let piv = a.iter().position(|&x| x != 0).unwrap();
    let f = b[piv];
    let b: [u64; 4] = std::array::from_fn(|i| (b[i] + p * p - f * a[i] % p) % p);
    let b = normalize_line(b, p);
    let piv_b = b.iter().position(|&x| x != 0).unwrap();
    let g = a[piv_b];
    let a: [u64; 4] = std::array::from_fn(|i| (a[i] + p * p - g * b[i] % p) % p);
    if piv < piv_b {
        [a, b]
    } else {
        [b, a]
    }
}

/// The isotropic flag `<col 2> in <col 1, col 2>`, which determines `k I`.
fn signature(m: &[[u64; 4]; 4], p: u64) -> Sig {
    let c1: [u64; 4] = std::array::from_fn(|i| m[i][0]);
    let c2: [u64; 4] = std::array::from_fn(|i| m[i][1]);
    (normalize_line(c2, p), rref2(c1, c2, p))
}

type CellTable = HashMap<Sig, CellRep>;

fn build_table(p: u64) -> CellTable {
    let mut t = HashMap::new();
    for word in Weyl::ALL {
        let n = word.len() as u32;
        for idx in 0..p.pow(n) {
            let params: Vec<u64> = (0..n).map(|k| idx / p.pow(k) % p).collect();
            let rep = CellRep { word, params };
            let sig = signature(&rep.matrix().residues(p), p);
            let prev = t.insert(sig, rep);
            debug_assert!(prev.is_none(), "Bruhat cells overlap");
        }
    }
    t
}

fn cell_table(p: u64) -> Arc<CellTable> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<CellTable>>>> = OnceLock::new();
    let m = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut g = m.lock().expect("cell table lock");
    g.entry(p).or_insert_with(|| Arc::new(build_table(p))).clone()
}

/// Number of distinct cells `K^H / I` found by enumerating representatives.
pub fn cell_count(p: u64) -> usize {
    cell_table(p).len()
}

/// The cell of `k` in `K^H` and the Iwahori element `i` with `k = rep * i`.
pub fn bruhat_cell(k: &FMat, p: u64) -> Result<(CellRep, FMat)> {
    if !in_kh(k, p) {
        return Err(Error::ParamDomain("bruhat_cell needs an element of K^H".into()));
    }
    let sig = signature(&k.residues(p), p);
    let rep = cell_table(p)
        .get(&sig)
        .cloned()
        .ok_or_else(|| Error::NotFound("no Bruhat cell matches".into()))?;
    let i = rep.matrix().inverse()?.mul(k);
    if !in_iwahori(&i, p) {
        return Err(Error::InvalidFactorization(format!("{:?} is not in its cell", k)));
    }
    Ok((rep, i))
}

// ---------------------------------------------------------------------------
// Matrix identities

fn fmt_mat(m: &FMat) -> String {
    let rows: Vec<String> = m
        .e
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn fmt_lmat(m: &LMat) -> String {
    format!("{:?}", m.e)
}

fn mat_row(check: &str, params: serde_json::Value, lhs: &FMat, rhs: &FMat) -> Row {
    if lhs == rhs {
        Row::new(check, params, "equal".into(), "equal".into())
    } else {
        Row::new(check, params, fmt_mat(lhs), fmt_mat(rhs))
    }
}

fn rand_int<R: Rng>(p: u64, rng: &mut R) -> Q {
    qi(rng.gen_range(-((p * p) as i64)..(p * p) as i64))
}

fn rand_unit<R: Rng>(p: u64, rng: &mut R) -> Q {
    let r = rng.gen_range(1..p) as i64;
    qi(r + p as i64 * rng.gen_range(-2..3))
}

/// A random element `m(A, u) n(X) tn(pY)` of the Iwahori subgroup.
pub fn random_iwahori<R: Rng>(p: u64, rng: &mut R) -> FMat {
    let pq = qi(p as i64);
    let a: M2 = [[rand_unit(p, rng), &pq * rand_int(p, rng)], [rand_int(p, rng), rand_unit(p, rng)]];
    let m = m_block(&a, &rand_unit(p, rng)).expect("unit determinant");
    let n = n_sym(&rand_int(p, rng), &rand_int(p, rng), &rand_int(p, rng));
    let lo = n_sym(&(&pq * rand_int(p, rng)), &(&pq * rand_int(p, rng)), &(&pq * rand_int(p, rng))).transpose();
    m.mul(&n).mul(&lo)
}

/// A random `(zeta, X)` describing `n(X) t_zeta` in `R(F)`.
pub fn random_r<R: Rng>(fd: &FieldData, rng: &mut R) -> (LElem, M2) {
    let p = fd.p;
    let zeta = loop {
        let z = fd.from_basis(rand_int(p, rng), rand_int(p, rng)).scale(&ppow(p, rng.gen_range(-2..3)));
        if !z.norm().is_zero() {
            break z;
        }
    };
    let mut x = || rand_int(p, rng) * ppow(p, rng.gen_range(-2..3));
    let (x11, x12, x22) = (x(), x(), x());
    (zeta, [[x11, x12.clone()], [x12, x22]])
}

/// The collapse witness `(r, k)` with `r h(l,m) = h(l,m) W_w s1 k`.
pub fn collapse_witness(fd: &FieldData, m: i64, w: &Q) -> Result<(FMat, FMat)> {
    let pm = ppow(fd.p, m);
    let y = pm.clone();
    let x = &pm * fd.qb() / qi(2) + fd.qc() * w;
    let r = t_embed(&torus_m2(fd, &x, &y))?;
    let beta = fd.beta_wm(w, m as u32).0;
    let e = fd.qb() * &pm + fd.qc() * w;
    let mut k = FMat::diag([-&beta, fd.qc(), -fd.qc(), beta]);
    k.e[1][0] = e.clone();
    k.e[2][3] = e;
    Ok((r, k))
}

/// Checks the coset identities by exact multiplication.
pub fn matrix_identity_suite(fd: &FieldData) -> Vec<Row> {
    let p = fd.p;
    let mut rows = Vec::new();
    for w in 1..p as i64 {
        let wq = qi(w);
        let wi = wq.recip();
        let lhs = w_mat(&wq);
        // Diagonal factor with the signs that make
        // the product come out to W_w.
        let rhs = u1(&wi).mul(&s1()).mul(&FMat::diag([wq.clone(), -&wi, wi.clone(), -&wq])).mul(&u1(&wi));
        rows.push(mat_row("identity.w", json!({"w": w}), &lhs, &rhs));

        let up = {
            let mut g = FMat::identity();
            g.e[0][2] = wi.clone();
            g
        };
        let lhs = u2(&wq);
        let rhs = up.mul(&s2()).mul(&FMat::diag([-&wq, Q::one(), -&wi, Q::one()])).mul(&up);
        rows.push(mat_row("identity.y", json!({"y": w}), &lhs, &rhs));
    }
    let e0 = eta0(p);
    for l in -2..=3i64 {
        for m in 0..=3i64 {
            let h = h_raw(p, l, m);
            let lhs = h.mul(&Weyl::S2S1.matrix()).mul(&e0);
            let rhs =
                h_raw(p, l - 1, m + 1).mul(&Weyl::S1S2S1.matrix()).mul(&FMat::diag_i([1, -1, -1, 1]));
            rows.push(mat_row("identity.eta0.s2s1", json!({"l": l, "m": m}), &lhs, &rhs));

            let lhs = h.mul(&Weyl::S2S1S2.matrix()).mul(&e0);
            let rhs = h_raw(p, l + 1, m).mul(&FMat::diag_i([1, 1, -1, -1]));
            rows.push(mat_row("identity.eta0.s2s1s2", json!({"l": l, "m": m}), &lhs, &rhs));

            for w in 0..p as i64 {
                let ww = w_mat(&qi(w));
                let lhs = h.mul(&ww).mul(&Weyl::S1S2S1S2.matrix()).mul(&e0);
                let rhs = h_raw(p, l + 1, m).mul(&ww).mul(&s1()).mul(&FMat::diag_i([1, 1, -1, -1]));
                rows.push(mat_row("identity.eta0.Ws1s2s1s2", json!({"l": l, "m": m, "w": w}), &lhs, &rhs));
            }

            let lhs = eta(fd).mul(&h.lift(fd));
            let rhs = h.lift(fd).mul(&eta_m(fd, m));
            let ok = lhs == rhs;
            rows.push(if ok {
                Row::new("identity.eta_m", json!({"l": l, "m": m}), "equal".into(), "equal".into())
            } else {
                Row::new("identity.eta_m", json!({"l": l, "m": m}), fmt_lmat(&lhs), fmt_lmat(&rhs))
            });

            for w in 0..p as i64 {
                let wq = qi(w);
                if !fd.beta_wm(&wq, m as u32).1 {
                    continue;
                }
                let params = json!({"l": l, "m": m, "w": w});
                let (r, k) = collapse_witness(fd, m, &wq).expect("torus element is invertible");
                let lhs = r.mul(&h);
                let rhs = h.mul(&w_mat(&wq)).mul(&s1()).mul(&k);
                rows.push(mat_row("identity.collapse", params.clone(), &lhs, &rhs));
                let conj_ok = in_iwahori(&k, p)
                    && Weyl::W1.iter().all(|s| {
                        let sm = s.matrix();
                        in_iwahori(&sm.inverse().unwrap().mul(&k).mul(&sm), p)
                    });
                rows.push(Row::flag("identity.collapse.k_in_I", params, conj_ok));
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::build_field_data;

    #[test]
    fn similitudes() {
        assert_eq!(FMat::j().similitude(), Some(Q::one()));
        assert_eq!(h_raw(5, 1, 2).similitude(), Some(ppow(5, 5)));
        assert_eq!(eta0(3).similitude(), Some(qi(-3)));
        let e2 = eta0(3).mul(&eta0(3));
        assert_eq!(e2, center(&qi(3)).unwrap());
        assert_eq!(s1().mul(&s1()), FMat::identity());
        assert_eq!(s2().mul(&s2()).similitude(), Some(Q::one()));
        let fd = build_field_data(5, 2, 1, 3).unwrap();
        let g = torus_m2(&fd, &qi(2), &qi(7));
        assert_eq!(t_embed(&g).unwrap().similitude(), Some(m2_det(&g)));
    }

    #[test]
    fn subgroups() {
        let p = 3;
        assert!(in_iwahori(&FMat::identity(), p));
        assert!(!in_iwahori(&s1(), p));
        assert!(in_kh(&s2(), p));
        assert!(!in_kh(&eta0(p), p));
        let fd = build_field_data(3, 1, 0, 1).unwrap();
        assert!(subgroup_test(&eta(&fd), &fd, Subgroup::KG));
        assert!(!subgroup_test(&eta(&fd), &fd, Subgroup::GammaPn(1)));
        assert!(subgroup_test(&eta_m(&fd, 2), &fd, Subgroup::GammaPn(2)));
        assert!(!subgroup_test(&eta(&fd), &fd, Subgroup::KH));
        let g: M2 = [[qi(4), qi(1)], [qi(3), qi(2)]];
        assert!(in_k1_gl2(&g, 3, 1));
        assert!(!in_k1_gl2(&g, 3, 2));
        assert!(in_k0_gl2(&g, 3, 1));
    }

    #[test]
    fn torus_embedding_is_multiplicative() {
        for (p, a, b, c) in [(3, 1, 0, 1), (5, 5, 0, 1), (5, -2, 1, 1)] {
            let fd = build_field_data(p, a, b, c).unwrap();
            let z1 = fd.from_basis(qi(2), qi(1));
            let z2 = fd.from_basis(qi(-1), qi(3));
            let lhs = t_zeta(&fd, &z1).unwrap().mul(&t_zeta(&fd, &z2).unwrap());
            assert_eq!(lhs, t_zeta(&fd, &z1.mul(&z2)).unwrap());
            // alpha corresponds to [[b/c, 1], [-a/c, 0]].
            let t = t_zeta(&fd, &fd.alpha()).unwrap();
            assert_eq!(t.upper_left(), [[qi(b) / qi(c), qi(1)], [-qi(a) / qi(c), qi(0)]]);
        }
    }

    #[test]
    fn named_matches_constructors() {
        let fd = build_field_data(5, 5, 0, 1).unwrap();
        assert!(named(&fd, &Named::Hlm(0, 0)).unwrap().is_identity());
        assert!(named(&fd, &Named::Hlm(0, -1)).is_err());
        let x: M2 = [[qi(1), qi(2)], [qi(3), qi(4)]];
        assert!(named(&fd, &Named::Ux(x)).is_err());
    }

    #[test]
    fn cell_counts() {
        assert_eq!(cell_count(2), 45);
        assert_eq!(cell_count(3), 160);
        assert_eq!(cell_count(5), 936);
    }

    #[test]
    fn weyl_words() {
        for w in Weyl::W1 {
            assert_eq!(w.s1_times().unwrap().strip_s1(), Some(w));
            assert_eq!(w.s1_times().unwrap().matrix(), s1().mul(&w.matrix()));
        }
        assert_eq!(Weyl::parse("s2s1s2"), Some(Weyl::S2S1S2));
    }

    #[test]
    fn identity_suite_passes() {
        for (p, a, b, c) in [(3, 1, 0, 1), (5, 5, 0, 1), (5, 0, 1, 1), (2, -1, 1, 1)] {
            let fd = build_field_data(p, a, b, c).unwrap();
            let rows = matrix_identity_suite(&fd);
            let bad: Vec<_> = rows.iter().filter(|r| !r.passed()).collect();
            assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
        }
    }
}
