//! Acceptance criteria 1-12.  Each criterion prints one PASS/FAIL line.
//! Expected values are written out here from closed formulas
//! rather than read back from the library.

use std::io::Write;
use std::time::{Duration, Instant};

use gsp4_bessel::bessel::{b_table, BesselCtx, CosetAddress, LambdaSpec, TestVector, WTag};
use gsp4_bessel::grp::{matrix_identity_suite, Weyl};
use gsp4_bessel::hecke::{
    char_sum, flag_index, frames_in, norm_check, norm_closed_form, norm_sums, reduce_roundtrip, verify_beta_units,
    verify_hecke, welldef_check,
};
use gsp4_bessel::padic::{build_field_data, qi, Case, FieldData};
use gsp4_bessel::report::{Row, Status};
use gsp4_bessel::scalars::{Scalar, UnitRootExp, Var};
use gsp4_bessel::zeta::{
    verify_integral_theorem, whittaker_newform, wsharp_support, TauClass, TauSpec, ZetaContext,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INERT3: (u64, (i64, i64, i64)) = (3, (1, 0, 1));
const INERT2: (u64, (i64, i64, i64)) = (2, (-1, 1, 1));
const RAM5: (u64, (i64, i64, i64)) = (5, (5, 0, 1));
const SPLIT5: (u64, (i64, i64, i64)) = (5, (0, 1, 1));

fn fd(data: (u64, (i64, i64, i64))) -> FieldData {
    let (p, (a, b, c)) = data;
    build_field_data(p, a, b, c).unwrap()
}

/// `big_omega = Omega(varpi)`; the context stores `-Omega(varpi)`.
fn ctx(data: (u64, (i64, i64, i64)), m0: u32, lam: Option<Scalar>, big_omega: i64) -> BesselCtx {
    let f = fd(data);
    let l = LambdaSpec::new(&f, m0, 0, lam).unwrap();
    BesselCtx::new(f, l, -big_omega).unwrap()
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Printed outside the test harness's capture so the lines always show.
fn say(s: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", s).unwrap();
    out.flush().unwrap();
}

struct Tally {
    failed: Vec<u32>,
}

impl Tally {
    fn report(&mut self, n: u32, ok: bool, took: Duration, detail: &str) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        say(&format!("criterion {:2} {} ({:.1}s) {}", n, verdict, took.as_secs_f64(), detail));
        if !ok {
            self.failed.push(n);
        }
    }
}

fn first_failure(rows: &[Row]) -> Option<String> {
    rows.iter().find(|r| r.status == Status::Fail).map(|r| format!("{} {} : {} != {}", r.check, r.params, r.lhs, r.rhs))
}

fn rows_detail(rows: &[Row]) -> (bool, String) {
    match first_failure(rows) {
        None => (true, format!("{} rows", rows.len())),
        Some(f) => (false, f),
    }
}

fn criterion_1(t: &mut Tally) {
    let start = Instant::now();
    let mut rows = Vec::new();
    for data in [INERT2, INERT3, RAM5, SPLIT5] {
        rows.extend(matrix_identity_suite(&fd(data)));
    }
    let took = start.elapsed();
    let (ok, detail) = rows_detail(&rows);
    t.report(1, ok && took < Duration::from_secs(10), took, &detail);
}

fn hecke_configs() -> Vec<(&'static str, BesselCtx)> {
    let mut out = Vec::new();
    for om in [1, -1] {
        for m0 in [0, 1] {
            out.push(("inert p=3", ctx(INERT3, m0, None, om)));
            out.push(("inert p=2", ctx(INERT2, m0, None, om)));
            out.push(("split p=5", ctx(SPLIT5, m0, None, om)));
            for lam in [1, -1] {
                out.push(("ramified p=5", ctx(RAM5, m0, Some(int(lam)), om)));
            }
        }
    }
    out
}

fn criterion_2(t: &mut Tally) {
    let start = Instant::now();
    let mut worst = Duration::ZERO;
    let mut total = 0;
    let mut bad = None;
    for (name, c) in hecke_configs() {
        let s = Instant::now();
        let rows = verify_hecke(&c, -2..=4, 0..=4);
        worst = worst.max(s.elapsed());
        total += rows.len();
        if bad.is_none() {
            bad = first_failure(&rows).map(|f| format!("{}: {}", name, f));
        }
    }
    let ok = bad.is_none() && worst < Duration::from_secs(60);
    let detail = bad.unwrap_or(format!("{} rows over 20 configurations, slowest {:.1}s", total, worst.as_secs_f64()));
    t.report(2, ok, start.elapsed(), &detail);
}

/// Expected sums: `q+1 / q / q-1` at `m = 0` for an unramified
/// character (inert / ramified / split), `0` at `m = 0` otherwise, and `q`
/// for `m >= max(1, m0)`.
fn criterion_3(t: &mut Tally) {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = None;
    for (data, m0s) in [(INERT3, [0, 1]), (RAM5, [0, 1]), (SPLIT5, [0, 1])] {
        for m0 in m0s {
            let lam = if data == SPLIT5 { Some(Scalar::root(UnitRootExp::new(1, 3))) } else { None };
            let c = ctx(data, m0, lam, 1);
            let q = data.0 as i64;
            for m in 0..=2u32 {
                let want = match (m, m0) {
                    (0, 0) => match c.fd.case {
                        Case::Inert => q + 1,
                        Case::Ramified => q,
                        Case::Split => q - 1,
                    },
                    (0, _) => 0,
                    _ => q,
                };
                let (got, _) = char_sum(&c, m).unwrap();
                checked += 1;
                if got != int(want) && bad.is_none() {
                    bad = Some(format!("{} m0={} m={}: {} != {}", c.fd.case.name(), m0, m, got, want));
                }
            }
        }
    }
    t.report(3, bad.is_none(), start.elapsed(), &bad.unwrap_or(format!("{} sums", checked)));
}

fn criterion_4(t: &mut Tally) {
    let start = Instant::now();
    let mut rows = Vec::new();
    for data in [INERT3, RAM5, SPLIT5] {
        rows.extend(verify_beta_units(&fd(data), 2));
    }
    let split = fd(SPLIT5);
    let nonunits: Vec<u64> = (0..5).filter(|w| !split.beta_wm(&qi(*w as i64), 0).1).collect();
    let (mut ok, mut detail) = rows_detail(&rows);
    if nonunits != vec![0, 4] {
        ok = false;
        detail = format!("split non-units at m=0: {:?}", nonunits);
    }
    t.report(4, ok, start.elapsed(), &detail);
}

fn criterion_5(t: &mut Tally) {
    use TestVector::*;
    let start = Instant::now();
    let lam = |x: i64| Some(int(x));
    // (label, context, expected dim, expected test-vector answer)
    let mut table: Vec<(String, BesselCtx, u32, TestVector)> = Vec::new();
    for om in [1, -1] {
        table.push((format!("inert m0=0 O={}", om), ctx(INERT3, 0, None, om), 0, No));
        table.push((format!("inert m0=1 O={}", om), ctx(INERT3, 1, None, om), 1, Yes));
        for l in [1, -1] {
            // dimension 0 exactly when Lambda = Omega o N
            let (d, tv) = if l == om { (0, No) } else { (1, Yes) };
            table.push((format!("ramified m0=0 lam={} O={}", l, om), ctx(RAM5, 0, lam(l), om), d, tv));
        }
        table.push((format!("ramified m0=1 O={}", om), ctx(RAM5, 1, lam(1), om), 1, Yes));
        table.push((format!("split m0=0 symbolic O={}", om), ctx(SPLIT5, 0, None, om), 1, UnlessLamIs(int(om))));
        table.push((format!("split m0=0 lam=O={}", om), ctx(SPLIT5, 0, lam(om), om), 1, No));
    }
    table.push(("inert m0=2".into(), ctx(INERT3, 2, None, 1), 1, No));
    table.push(("ramified m0=2".into(), ctx(RAM5, 2, lam(1), 1), 1, No));
    table.push(("split m0=0 lam=-O".into(), ctx(SPLIT5, 0, lam(-1), 1), 1, Yes));
    table.push(("split m0=0 lam=2".into(), ctx(SPLIT5, 0, lam(2), -1), 1, Yes));
    table.push(("split m0=1".into(), ctx(SPLIT5, 1, None, 1), 1, Yes));
    table.push(("split m0=2".into(), ctx(SPLIT5, 2, None, -1), 1, No));
    let mut bad = None;
    for (label, c, d, tv) in &table {
        let got = c.dim_and_testvector();
        if got != (*d, tv.clone()) && bad.is_none() {
            bad = Some(format!("{}: got {:?}", label, got));
        }
    }
    let ok = bad.is_none() && table.len() == 20;
    t.report(5, ok, start.elapsed(), &bad.unwrap_or(format!("{} configurations", table.len())));
}

fn criterion_6(t: &mut Tally) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut rows = Vec::new();
    for c in [ctx(INERT3, 1, None, 1), ctx(RAM5, 0, Some(int(-1)), 1), ctx(SPLIT5, 0, None, -1), ctx(SPLIT5, 1, None, 1)] {
        let addrs = frames_in(&c.fd, -2..=3, 0..=3);
        rows.push(reduce_roundtrip(&c, &addrs, 1000, &mut rng).unwrap());
    }
    let (ok, detail) = rows_detail(&rows);
    t.report(6, ok, start.elapsed(), &format!("{} x 1000 elements; {}", rows.len(), detail));
}

fn criterion_7(t: &mut Tally) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rows = Vec::new();
    // h(-1,0) W_w0 s1 s2
    let special = CosetAddress::tagged(-1, WTag::W0, Weyl::S2);
    let mut saw_special = false;
    for c in [ctx(INERT3, 1, None, 1), ctx(RAM5, 0, Some(int(-1)), 1), ctx(RAM5, 1, Some(int(1)), -1), ctx(SPLIT5, 0, None, -1)] {
        for a in frames_in(&c.fd, -2..=2, 0..=3) {
            saw_special |= c.fd.case == Case::Ramified && a == special;
            rows.push(welldef_check(&c, &a, 500, &mut rng).unwrap());
        }
    }
    let (ok, detail) = rows_detail(&rows);
    t.report(7, ok && saw_special, start.elapsed(), &format!("{} classes x 500 samples; {}", rows.len(), detail));
}

fn theorem_contexts() -> Vec<BesselCtx> {
    let mut out = Vec::new();
    for om in [1, -1] {
        out.push(ctx(INERT3, 1, None, om));
        out.push(ctx(RAM5, 0, Some(int(-om)), om));
        out.push(ctx(SPLIT5, 0, None, om));
    }
    out
}

fn criterion_8(t: &mut Tally) {
    let start = Instant::now();
    let mut n = 0;
    let mut bad = None;
    let mut check = |b: &BesselCtx, tau: TauSpec, bad: &mut Option<String>| {
        let label = format!("{} omega={} {}", b.fd.case.name(), b.omega, tau.class);
        let z = ZetaContext::new(b.clone(), tau).unwrap();
        let r = verify_integral_theorem(&z).unwrap();
        n += 1;
        if !r.holds() && bad.is_none() {
            *bad = Some(format!("{}: difference {} series {}", label, r.difference, r.series_ok));
        }
    };
    for b in theorem_contexts() {
        for class in TauClass::ALL {
            check(&b, TauSpec::symbolic(class), &mut bad);
        }
    }
    let root = |a: i64, d: u64| Scalar::root(UnitRootExp::new(a, d));
    let numeric = [
        (TauClass::UnramPs, root(1, 4), root(1, 3), int(1)),
        (TauClass::UnramPs, int(2), Scalar::frac(1, 3), int(1)),
        (TauClass::UnramPs, root(1, 5), root(-2, 5), int(1)),
        (TauClass::UnramRamPs, root(1, 6), root(1, 8), int(1)),
        (TauClass::UnramRamPs, int(-1), int(3), int(1)),
        (TauClass::RamRamPs, root(1, 3), root(1, 4), int(1)),
        (TauClass::ScOrRamSt, int(1), int(1), int(1)),
        (TauClass::UnramSt, int(1), int(1), int(-1)),
        (TauClass::UnramSt, int(1), int(1), root(1, 12)),
        (TauClass::UnramSt, int(1), int(1), Scalar::frac(2, 7)),
    ];
    let split = ctx(SPLIT5, 0, Some(root(1, 3)), 1);
    for (class, a, b, o) in numeric {
        check(&split, TauSpec::numeric(class, a, b, o), &mut bad);
    }
    let took = start.elapsed();
    let ok = bad.is_none() && took < Duration::from_secs(30);
    t.report(8, ok, took, &bad.unwrap_or(format!("{} identities, series through X^36", n)));
}

fn criterion_9(t: &mut Tally) {
    let start = Instant::now();
    let q = 7u64;
    let (at, bt, omg) = (Scalar::var(Var::At), Scalar::var(Var::Bt), Scalar::var(Var::Omg));
    let mut bad = None;
    for l in 0..=5i64 {
        let half = Scalar::sqrt_p_pow(q, -l);
        let ps = &half * &(at.powi(l + 1) - bt.powi(l + 1)) * (&at - &bt).inv().unwrap();
        let central = &at * &bt;
        let mixed = &half * &central.powi(l) * at.powi(-l);
        let ramified = if l == 0 { int(1) } else { int(0) };
        let st = omg.powi(l) * Scalar::p_pow(q, -l);
        for (class, want) in [
            (TauClass::UnramPs, ps),
            (TauClass::UnramRamPs, mixed),
            (TauClass::RamRamPs, ramified.clone()),
            (TauClass::ScOrRamSt, ramified),
            (TauClass::UnramSt, st),
        ] {
            let got = whittaker_newform(&TauSpec::symbolic(class), q, l as u32).unwrap();
            if got != want && bad.is_none() {
                bad = Some(format!("{} l={}: {} != {}", class, l, got, want));
            }
        }
    }
    t.report(9, bad.is_none(), start.elapsed(), &bad.unwrap_or("30 values".into()));
}

fn criterion_10(t: &mut Tally) {
    let start = Instant::now();
    let mut n = 0;
    let mut bad = None;
    for data in [INERT2, INERT3, RAM5, SPLIT5] {
        let f = fd(data);
        for a in CosetAddress::sweep(&f, 0..=0, 3) {
            let want = a.m == 0 && a.wtag == WTag::None && a.stag == Weyl::E;
            n += 1;
            if wsharp_support(&f, &a).unwrap() != want && bad.is_none() {
                bad = Some(format!("{} {}: expected {}", f.case.name(), a, want));
            }
        }
    }
    t.report(10, bad.is_none(), start.elapsed(), &bad.unwrap_or(format!("{} frames", n)));
}

fn criterion_11(t: &mut Tally) {
    let start = Instant::now();
    let formula = |q: u64| (1 + q) * (1 + q) * (1 + q * q);
    let got = (flag_index(2).unwrap(), flag_index(3).unwrap());
    let took = start.elapsed();
    let ok = got == (45, 160) && got == (formula(2), formula(3)) && took < Duration::from_secs(60);
    t.report(11, ok, took, &format!("flag_index(2) = {}, flag_index(3) = {}", got.0, got.1));
}

/// Stretch.  Returns whether the ramified `m0 = 0` part agrees with the
/// built-in closed form; the other parts are asserted.
fn criterion_12(t: &mut Tally) -> bool {
    let start = Instant::now();
    let mut parts = Vec::new();

    let inert = ctx(INERT3, 1, None, 1);
    let rows = norm_check(&inert, 4, 4).unwrap();
    parts.push(("inert q=3 m0=1", first_failure(&rows).is_none()));

    // zero rows: with Lambda = Omega o N the closed form and the whole table
    // vanish; in the split case omega lam = -1 kills the m = 0 rows (C_0 = 0)
    let dim_zero = [ctx(INERT3, 0, None, 1), ctx(RAM5, 0, Some(int(1)), 1), ctx(RAM5, 0, Some(int(-1)), -1)];
    let mut zero_ok = dim_zero.iter().all(|c| {
        norm_closed_form(c).unwrap().is_zero()
            && frames_in(&c.fd, -2..=4, 0..=4).iter().all(|a| b_table(c, a).unwrap().is_zero())
    });
    for om in [1, -1] {
        let c = ctx(SPLIT5, 0, Some(int(om)), om);
        let (plain, tagged): (Vec<CosetAddress>, Vec<CosetAddress>) =
            frames_in(&c.fd, -2..=4, 0..=0).into_iter().partition(|a| a.wtag == WTag::None);
        zero_ok &= plain.iter().all(|a| b_table(&c, a).unwrap().is_zero());
        zero_ok &= tagged.iter().any(|a| !b_table(&c, a).unwrap().is_zero());
    }
    parts.push(("zero rows", zero_ok));

    // The m0 = 0 ramified sum converges to (q^4 + q^2) vol(I) / ((1-q^-3)(1-q^-1)),
    // which is not what norm_closed_form gives.
    let ram = ctx(RAM5, 0, Some(int(-1)), 1);
    let sums = norm_sums(&ram, 4, 4).unwrap();
    let q = 5i64;
    let vol_i = Scalar::frac(1, (1 + q) * (1 + q) * (1 + q * q));
    let derived = Scalar::frac(q * q * q * q + q * q, 1) * vol_i
        * (int(1) - Scalar::frac(1, q * q * q)).inv().unwrap()
        * (int(1) - Scalar::frac(1, q)).inv().unwrap();
    let closed = norm_closed_form(&ram).unwrap();
    assert_eq!(sums.completed, derived, "ramified m0=0 norm moved away from the derived value");
    let ram_ok = sums.completed == closed;
    parts.push(("ramified q=5 m0=0", ram_ok));

    let ok = parts.iter().all(|p| p.1);
    let mut detail = parts.iter().map(|(n, ok)| format!("{}: {}", n, if *ok { "ok" } else { "mismatch" })).collect::<Vec<_>>().join(", ");
    if !ram_ok {
        detail.push_str(&format!(
            " [stretch; known disagreement with norm_closed_form: summed {} vs closed {}]",
            sums.completed, closed
        ));
    }
    t.report(12, ok, start.elapsed(), &detail);
    assert!(parts[0].1 && parts[1].1, "criterion 12 parts that are expected to hold failed");
    ram_ok
}

#[test]
fn acceptance_criteria() {
    let mut t = Tally { failed: Vec::new() };
    criterion_1(&mut t);
    criterion_2(&mut t);
    criterion_3(&mut t);
    criterion_4(&mut t);
    criterion_5(&mut t);
    criterion_6(&mut t);
    criterion_7(&mut t);
    criterion_8(&mut t);
    criterion_9(&mut t);
    criterion_10(&mut t);
    criterion_11(&mut t);
    criterion_12(&mut t);
    let hard: Vec<u32> = t.failed.iter().copied().filter(|n| *n != 12).collect();
    say(&format!("acceptance: {} of 12 criteria pass", 12 - t.failed.len()));
    assert!(hard.is_empty(), "failed criteria: {:?}", hard);
}
