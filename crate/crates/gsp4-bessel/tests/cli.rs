use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsp4-bessel"))
}

fn run(args: &[&str]) -> (i32, String) {
    let o = bin().args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn dim_on_inert_unramified() {
    let (code, out) = run(&["dim", "--p", "3", "--abc", "1,0,1", "--m0", "0"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("{\"config\":"));
    assert_eq!(lines[1], "{\"dim\":0,\"testvector\":false}");
    assert_eq!(lines[2], "{\"pass\":0,\"fail\":0}");
}

#[test]
fn theorem_for_unramified_steinberg() {
    let (code, out) = run(&["verify-theorem", "--tau", "unramSt", "--p", "5", "--abc", "0,1,1", "--m0", "0"]);
    assert_eq!(code, 0, "{}", out);
    let info: serde_json::Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    assert_eq!(info["difference"], "0");
    assert!(info["zeta"].as_str().unwrap().contains("omg"));
}

#[test]
fn report_to_file_and_config_file() {
    let dir = std::env::temp_dir().join(format!("gsp4-bessel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# ramified, Lambda(varpi_L) = -1\np = 5\nabc = 5,0,1\nm0 = 0\nlam = -1\nomega = 1\nmrange = 0..2\n").unwrap();
    let out = dir.join("report.jsonl");
    let (code, stdout) = run(&["verify-charsum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<_> = text.lines().skip(1).filter(|l| l.starts_with("{\"check\"")).map(|l| gsp4_bessel::report::parse_row(l).unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.passed()));
    assert!(text.ends_with("{\"pass\":3,\"fail\":0}\n"));

    // a flag overrides the file
    let (code, _) = run(&["dim", "--config", cfg.to_str().unwrap(), "--p", "4"]);
    assert_eq!(code, 3);
    std::fs::write(&cfg, "p = 5\nbogus\n").unwrap();
    let o = bin().args(["dim", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["dim", "--samples", "many"]).0, 2);
    assert_eq!(run(&["dim", "--out", "/nonexistent-dir/x.jsonl"]).0, 5);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["verify-identities", "--p", "5", "--abc", "0,1,1", "--samples", "20", "--seed", "4", "--lrange", "-1..1", "--mrange", "0..1"];
    let a = run(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a, run(&args));
}
