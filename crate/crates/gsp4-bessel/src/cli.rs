//! Run configuration, command dispatch and the JSON-lines report.
//!
//! A config file is flat `key = value` text (`#` starts a comment).  The
//! keys are the long flag names without dashes; flags override the file.
//! `omega` is `Omega(varpi)`; the library works with `-Omega(varpi)`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::bessel::{b_eval, b_table, parse_address, BesselCtx, LambdaSpec, TestVector};
use crate::error::{Error, Result};
use crate::grp::matrix_identity_suite;
use crate::hecke::{
    frames_in, norm_check, reduce_roundtrip, verify_beta_units, verify_charsum, verify_hecke, verify_welldef,
};
use crate::padic::build_field_data;
use crate::report::{emit_report, Row};
use crate::scalars::mpoly::NVARS;
use crate::scalars::text::parse_scalar;
use crate::scalars::{RationalFunction, Scalar};
use crate::zeta::{verify_integral_theorem, zeta_closed, zeta_truncated, TauClass, TauSpec, ZetaContext};

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "gsp4-bessel", version, about = "Exact checks for Iwahori-fixed Bessel functions on GSp(4)")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(clap::Args, Debug, Default, Clone)]
pub struct Flags {
    /// flat key = value file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// coefficients of the quadratic form, "a,b,c"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub abc: Option<String>,
    /// Omega(varpi), +1 or -1
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// conductor exponent of Lambda
    #[arg(long, global = true)]
    pub m0: Option<u32>,
    /// which primitive character of conductor m0 (0-based)
    #[arg(long, global = true)]
    pub selector: Option<usize>,
    /// Lambda(varpi_L) (ramified, +-1) or Lambda((1,varpi)) (split), or "symbolic"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lam: Option<String>,
    /// unram_ps | unram_ram_ps | ram_ram_ps | supercuspidal_or_ramSt | unramSt
    #[arg(long, global = true)]
    pub tau: Option<String>,
    /// exact Satake values "at,bt,omg" replacing the indeterminates
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau_params: Option<String>,
    /// "lo..hi" or "lo,hi"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lrange: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mrange: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// add a floating-point spot check of the zeta identity
    #[arg(long, global = true)]
    pub numeric: bool,
    /// coset address for bvalue, e.g. "h(1,0)" or "h(0,1)·s1s2"
    #[arg(long, global = true)]
    pub addr: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// field data, character and dimension summary
    Info,
    /// dimension of the Iwahori-fixed space and the test-vector answer
    Dim,
    /// B at one coset address
    Bvalue,
    VerifyHecke,
    VerifyWelldef,
    VerifyCharsum,
    /// matrix identities, beta units and reduce round trips
    VerifyIdentities,
    Norm,
    Zeta,
    VerifyTheorem,
    All,
}

/// Everything one run depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub p: u64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    /// `Omega(varpi)`.
    pub omega_sign: i64,
    pub m0: u32,
    pub selector: usize,
    /// `None` is the indeterminate (split) or the default `+1` (ramified).
    pub lam: Option<Scalar>,
    pub tau: TauClass,
    pub tau_params: Option<(Scalar, Scalar, Scalar)>,
    pub lmin: i64,
    pub lmax: i64,
    pub mmin: i64,
    pub mmax: i64,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub numeric: bool,
    pub addr: Option<String>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            p: 3,
            a: 1,
            b: 0,
            c: 1,
            omega_sign: 1,
            m0: 1,
            selector: 0,
            lam: None,
            tau: TauClass::UnramSt,
            tau_params: None,
            lmin: -2,
            lmax: 4,
            mmin: 0,
            mmax: 4,
            samples: 500,
            seed: 0,
            out: None,
            numeric: false,
            addr: None,
        }
    }
}

const KEYS: [&str; 16] = [
    "p", "abc", "omega", "m0", "selector", "lam", "tau", "tau_params", "lrange", "mrange", "samples", "seed", "out",
    "numeric", "addr", "config",
];

fn config_err(at: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse { pos: 0, msg: format!("{}: {}", at, msg) }
}

/// `key -> (value, where it came from)`.
type Raw = BTreeMap<String, (String, String)>;

pub fn parse_config_text(text: &str, path: &str) -> Result<Raw> {
    let mut raw = Raw::new();
    for (i, line) in text.lines().enumerate() {
        let at = format!("{} line {}", path, i + 1);
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| config_err(&at, "expected key = value"))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) || k == "config" {
            return Err(config_err(&at, format!("unknown key {:?}", k)));
        }
        raw.insert(k, (v.trim().to_string(), at));
    }
    Ok(raw)
}

fn overlay(raw: &mut Raw, f: &Flags) {
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            raw.insert(k.to_string(), (v, format!("--{}", k.replace('_', "-"))));
        }
    };
    put("p", f.p.map(|x| x.to_string()));
    put("abc", f.abc.clone());
    put("omega", f.omega.clone());
    put("m0", f.m0.map(|x| x.to_string()));
    put("selector", f.selector.map(|x| x.to_string()));
    put("lam", f.lam.clone());
    put("tau", f.tau.clone());
    put("tau_params", f.tau_params.clone());
    put("lrange", f.lrange.clone());
    put("mrange", f.mrange.clone());
    put("samples", f.samples.map(|x| x.to_string()));
    put("seed", f.seed.map(|x| x.to_string()));
    put("out", f.out.as_ref().map(|x| x.display().to_string()));
    put("numeric", f.numeric.then(|| "true".to_string()));
    put("addr", f.addr.clone());
}

fn parse_num<T: std::str::FromStr>(v: &str, at: &str) -> Result<T> {
    v.trim().parse().map_err(|_| config_err(at, format!("cannot parse {:?}", v)))
}

fn parse_range(v: &str, at: &str) -> Result<(i64, i64)> {
    let (lo, hi) = v.split_once("..").or_else(|| v.split_once(',')).ok_or_else(|| config_err(at, "expected lo..hi"))?;
    let (lo, hi) = (parse_num(lo, at)?, parse_num(hi.trim_start_matches('='), at)?);
    if lo > hi {
        return Err(config_err(at, "empty range"));
    }
    Ok((lo, hi))
}

fn parse_scalar_at(v: &str, at: &str) -> Result<Scalar> {
    parse_scalar(v).map_err(|e| config_err(at, e))
}

impl RunConfig {
    pub fn from_raw(raw: &Raw) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        for (k, (v, at)) in raw {
            let at = at.as_str();
            match k.as_str() {
                "p" => c.p = parse_num(v, at)?,
                "abc" => {
                    let xs: Vec<&str> = v.split(',').collect();
                    if xs.len() != 3 {
                        return Err(config_err(at, "expected \"a,b,c\""));
                    }
                    c.a = parse_num(xs[0], at)?;
                    c.b = parse_num(xs[1], at)?;
                    c.c = parse_num(xs[2], at)?;
                }
                "omega" => {
                    c.omega_sign = parse_num(v, at)?;
                    if c.omega_sign.abs() != 1 {
                        return Err(config_err(at, "omega must be +1 or -1"));
                    }
                }
                "m0" => c.m0 = parse_num(v, at)?,
                "selector" => c.selector = parse_num(v, at)?,
                "lam" => c.lam = if v == "symbolic" { None } else { Some(parse_scalar_at(v, at)?) },
                "tau" => c.tau = TauClass::from_name(v).ok_or_else(|| config_err(at, format!("unknown tau class {:?}", v)))?,
                "tau_params" => {
                    let xs = v.split(',').map(|s| parse_scalar_at(s, at)).collect::<Result<Vec<_>>>()?;
                    if xs.len() != 3 {
                        return Err(config_err(at, "expected \"at,bt,omg\""));
                    }
                    c.tau_params = Some((xs[0].clone(), xs[1].clone(), xs[2].clone()));
                }
                "lrange" => (c.lmin, c.lmax) = parse_range(v, at)?,
                "mrange" => {
                    (c.mmin, c.mmax) = parse_range(v, at)?;
                    if c.mmin < 0 {
                        return Err(config_err(at, "m must be nonnegative"));
                    }
                }
                "samples" => c.samples = parse_num(v, at)?,
                "seed" => c.seed = parse_num(v, at)?,
                "out" => c.out = Some(PathBuf::from(v)),
                "numeric" => c.numeric = parse_num(v, at)?,
                "addr" => c.addr = Some(v.clone()),
                _ => return Err(config_err(at, format!("unknown key {:?}", k))),
            }
        }
        Ok(c)
    }

    pub fn bessel(&self) -> Result<BesselCtx> {
        let fd = build_field_data(self.p, self.a, self.b, self.c)?;
        let lambda = LambdaSpec::new(&fd, self.m0, self.selector, self.lam.clone())?;
        BesselCtx::new(fd, lambda, -self.omega_sign)
    }

    pub fn tau_spec(&self) -> Result<TauSpec> {
        Ok(match &self.tau_params {
            None => TauSpec::symbolic(self.tau),
            Some((a, b, o)) => TauSpec::numeric(self.tau, a.clone(), b.clone(), o.clone()),
        })
    }

    pub fn header(&self, ctx: &BesselCtx) -> Value {
        let fd = &ctx.fd;
        json!({"config": {
            "p": fd.p, "a": fd.a, "b": fd.b, "c": fd.c, "d": fd.d, "case": fd.case.name(),
            "w0": fd.w0, "split_roots": fd.split_roots,
            "omega_sign": self.omega_sign, "m0": self.m0, "selector": self.selector,
            "lam": ctx.lambda.unif.to_string(), "tau": self.tau.name(),
            "tau_params": self.tau_params.as_ref().map(|(a, b, o)| vec![a.to_string(), b.to_string(), o.to_string()]),
            "lrange": [self.lmin, self.lmax], "mrange": [self.mmin, self.mmax],
            "samples": self.samples, "seed": self.seed,
        }})
    }
}

/// Parses the config file (if any) and the flags.
pub fn resolve(flags: &Flags) -> Result<RunConfig> {
    let mut raw = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
            parse_config_text(&text, &path.display().to_string())?
        }
        None => Raw::new(),
    };
    overlay(&mut raw, flags);
    RunConfig::from_raw(&raw)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_CONFIG,
    }
}

/// What a command produces: free-form lines (after the header) and rows.
#[derive(Default)]
pub struct Output {
    pub lines: Vec<Value>,
    pub rows: Vec<Row>,
}

fn theorem_rows(cfg: &RunConfig, z: &ZetaContext, out: &mut Output) -> Result<()> {
    let t = verify_integral_theorem(z)?;
    let params = json!({"tau": z.tau.class.name(), "case": z.bessel.fd.case.name(), "omega": cfg.omega_sign});
    out.lines.push(json!({"zeta": t.zeta.to_string(), "rhs": t.rhs.to_string(), "difference": t.difference.to_string()}));
    out.rows.push(Row::new("theorem", params.clone(), t.difference.to_string(), "0".into()));
    out.rows.push(Row::flag("theorem.series", params.clone(), t.series_ok));
    if cfg.numeric {
        out.rows.push(float_spot_check(&t.zeta, &t.rhs, params));
    }
    Ok(())
}

/// Fixed unitary values for the indeterminates `at, bt, omg, lam`.
const SPOT_VALUES: [f64; NVARS] = [0.7, -1.9, 0.4, 1.1];
const SPOT_X: (f64, f64) = (0.21, 0.13);

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn eval_poly(cs: &[Scalar], vals: &[(f64, f64); NVARS]) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for c in cs.iter().rev() {
        let v = c.to_complex(vals);
        acc = cmul(acc, SPOT_X);
        acc = (acc.0 + v.0, acc.1 + v.1);
    }
    acc
}

fn eval_complex(f: &RationalFunction) -> (f64, f64) {
    let vals = SPOT_VALUES.map(|t| (t.cos(), t.sin()));
    let n = eval_poly(f.num(), &vals);
    let d = eval_poly(f.den(), &vals);
    let dd = d.0 * d.0 + d.1 * d.1;
    cmul(n, (d.0 / dd, -d.1 / dd))
}

fn float_spot_check(lhs: &RationalFunction, rhs: &RationalFunction, params: Value) -> Row {
    let (a, b) = (eval_complex(lhs), eval_complex(rhs));
    let err = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
    let scale = 1.0 + (a.0 * a.0 + a.1 * a.1).sqrt();
    let mut row = Row::flag("theorem.float", params, err <= 1e-9 * scale);
    row.lhs = format!("{:.12e}{:+.12e}i vs {:.12e}{:+.12e}i", a.0, a.1, b.0, b.1);
    if row.passed() {
        row.rhs = row.lhs.clone();
    }
    row
}

fn zeta_context(cfg: &RunConfig, ctx: &BesselCtx) -> Result<ZetaContext> {
    ZetaContext::new(ctx.clone(), cfg.tau_spec()?)
}

fn skip_or<T>(r: Result<T>, check: &str, out: &mut Output) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            out.rows.push(Row::skipped(check, json!({}), &e.to_string()));
            None
        }
    }
}

fn dim_line(ctx: &BesselCtx) -> Value {
    let (dim, tv) = ctx.dim_and_testvector();
    let tv = match tv {
        TestVector::Yes => json!(true),
        TestVector::No => json!(false),
        TestVector::UnlessLamIs(v) => json!(format!("unless lam = {}", v)),
    };
    json!({"dim": dim, "testvector": tv})
}

/// Runs one command against a resolved configuration.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<(Value, Output)> {
    let ctx = cfg.bessel()?;
    let header = cfg.header(&ctx);
    let mut out = Output::default();
    let lr = cfg.lmin..=cfg.lmax;
    let mr = cfg.mmin..=cfg.mmax;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mmax = cfg.mmax as u32;
    match cmd {
        Command::Info => {
            let fd = &ctx.fd;
            out.lines.push(json!({"q": fd.q(), "case_sym": fd.case_sym(),
                "unit_residues": fd.unit_residues(), "quotient_order": ctx.lambda.order_of_quotient()}));
            out.lines.push(dim_line(&ctx));
        }
        Command::Dim => out.lines.push(dim_line(&ctx)),
        Command::Bvalue => {
            let text = cfg.addr.as_deref().ok_or_else(|| config_err("--addr", "bvalue needs an address"))?;
            let a = parse_address(text)?;
            a.validate(&ctx.fd)?;
            let v = b_table(&ctx, &a)?;
            out.lines.push(json!({"addr": a.to_string(), "value": v.to_string()}));
            let direct = b_eval(&ctx, &a.frame(&ctx.fd)?)?;
            out.rows.push(Row::new("bvalue", json!({"addr": a.to_string()}), direct.to_string(), v.to_string()));
        }
        Command::VerifyHecke => out.rows = verify_hecke(&ctx, lr, mr),
        Command::VerifyWelldef => out.rows = verify_welldef(&ctx, lr, mr, cfg.samples, &mut rng)?,
        Command::VerifyCharsum => out.rows = verify_charsum(&ctx, mmax),
        Command::VerifyIdentities => identities(cfg, &ctx, &mut rng, &mut out)?,
        Command::Norm => out.rows = norm_check(&ctx, cfg.lmax, cfg.mmax)?,
        Command::Zeta => {
            let z = zeta_context(cfg, &ctx)?;
            let closed = zeta_closed(&z)?;
            let direct = zeta_truncated(&z)?;
            out.lines.push(json!({"zeta": closed.to_string(),
                "series": direct.iter().map(|s| s.to_string()).collect::<Vec<_>>()}));
            let ok = closed.series(direct.len())? == direct;
            out.rows.push(Row::flag("zeta.series", json!({"tau": z.tau.class.name(), "terms": direct.len()}), ok));
        }
        Command::VerifyTheorem => theorem_rows(cfg, &zeta_context(cfg, &ctx)?, &mut out)?,
        Command::All => {
            identities(cfg, &ctx, &mut rng, &mut out)?;
            out.rows.extend(verify_charsum(&ctx, mmax));
            out.rows.extend(verify_hecke(&ctx, lr.clone(), mr.clone()));
            out.rows.extend(verify_welldef(&ctx, lr, mr, cfg.samples, &mut rng)?);
            out.lines.push(dim_line(&ctx));
            if let Some(z) = skip_or(zeta_context(cfg, &ctx), "theorem", &mut out) {
                theorem_rows(cfg, &z, &mut out)?;
            }
            if ctx.lambda.is_symbolic() {
                out.rows.push(Row::skipped("norm", json!({}), "lam is symbolic"));
            } else if let Some(rows) = skip_or(norm_check(&ctx, cfg.lmax.max(3), cfg.mmax.max(ctx.lambda.m0 as i64 + 2)), "norm", &mut out) {
                out.rows.extend(rows);
            }
        }
    }
    Ok((header, out))
}

fn identities(cfg: &RunConfig, ctx: &BesselCtx, rng: &mut ChaCha8Rng, out: &mut Output) -> Result<()> {
    out.rows.extend(matrix_identity_suite(&ctx.fd));
    out.rows.extend(verify_beta_units(&ctx.fd, 2));
    let addrs = frames_in(&ctx.fd, cfg.lmin..=cfg.lmax, cfg.mmin..=cfg.mmax);
    out.rows.push(reduce_roundtrip(ctx, &addrs, cfg.samples, rng)?);
    Ok(())
}

fn write_all(header: &Value, out: &Output, w: &mut dyn Write) -> Result<bool> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(w, "{}", header).map_err(io)?;
    for l in &out.lines {
        writeln!(w, "{}", l).map_err(io)?;
    }
    let s = emit_report(&out.rows, w)?;
    w.flush().map_err(io)?;
    Ok(s.fail == 0)
}

/// Parses `argv`, runs the command, writes the report, and returns the exit status.
pub fn run_command<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = resolve(&args.flags).and_then(|cfg| {
        let (header, out) = execute(args.command, &cfg)?;
        match &cfg.out {
            Some(path) => {
                let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
                write_all(&header, &out, &mut std::io::BufWriter::new(f))
            }
            None => write_all(&header, &out, stdout),
        }
    });
    match result {
        Ok(true) => 0,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e);
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run_command(std::iter::once("gsp4-bessel").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap() + &String::from_utf8(e).unwrap())
    }

    #[test]
    fn config_text() {
        let raw = parse_config_text("p = 5\nabc = 5,0,1 # ramified\n\nm0=0\n", "c.txt").unwrap();
        let c = RunConfig::from_raw(&raw).unwrap();
        assert_eq!((c.p, c.a, c.b, c.c, c.m0), (5, 5, 0, 1, 0));
        let e = parse_config_text("p = 5\nbogus = 1\n", "c.txt").unwrap_err();
        assert!(e.to_string().contains("c.txt line 2"), "{}", e);
        let bad = parse_config_text("lrange = 3..1", "c.txt").unwrap();
        assert!(RunConfig::from_raw(&bad).is_err());
    }

    #[test]
    fn dim_example() {
        let (code, text) = run(&["dim", "--p", "3", "--abc", "1,0,1", "--m0", "0"]);
        assert_eq!(code, 0);
        assert!(text.lines().any(|l| l == "{\"dim\":0,\"testvector\":false}"), "{}", text);
        assert!(text.ends_with("{\"pass\":0,\"fail\":0}\n"));
    }

    #[test]
    fn bvalue_example() {
        let (code, text) = run(&["bvalue", "--p", "5", "--abc", "0,1,1", "--m0", "0", "--omega", "1", "--addr", "h(1,0)"]);
        assert_eq!(code, 0, "{}", text);
        assert!(text.contains("\"value\":\"1/125\""), "{}", text);
        // Lambda = Omega o N: the whole space vanishes
        let (_, text) = run(&["bvalue", "--p", "5", "--abc", "5,0,1", "--m0", "0", "--lam", "1", "--addr", "h(1,0)"]);
        assert!(text.contains("\"value\":\"0\""), "{}", text);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&["dim", "--p", "4"]).0, EXIT_CONFIG);
        assert_eq!(run(&["dim", "--abc", "1,0"]).0, EXIT_CONFIG);
        assert_eq!(run(&["dim", "--config", "/nonexistent/x.cfg"]).0, EXIT_IO);
        assert_eq!(run(&["dim", "--m0", "3", "--p", "5", "--abc", "2,0,1"]).0, EXIT_RESOURCE);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn theorem_command() {
        let (code, text) = run(&["verify-theorem", "--tau", "unramSt", "--numeric"]);
        assert_eq!(code, 0, "{}", text);
        assert!(text.contains("\"difference\":\"0\""), "{}", text);
        assert!(text.contains("theorem.float"));
    }

    #[test]
    fn deterministic() {
        let args = ["verify-welldef", "--lrange", "-1..1", "--mrange", "0..1", "--samples", "5", "--seed", "9"];
        let a = run(&args);
        assert_eq!(a.0, 0, "{}", a.1);
        assert_eq!(a, run(&args));
    }
}
