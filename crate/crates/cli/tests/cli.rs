use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hierapprox"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Writes a fixture into a fresh temp file and returns its path.
fn fixture(tag: &str, args: &[&str]) -> PathBuf {
    let o = run(&[&["fixtures"], args].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    write(tag, &stdout(&o))
}

fn write(tag: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hierapprox-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(tag);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_chain() {
    let f = fixture("chain3.hgs", &["chain", "-k", "3"]);
    let o = run(&["validate", p(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok\n");
}

#[test]
fn invalid_input_is_a_domain_error() {
    let f = write("bad.hgs", "hgs 1\ncell A\nvertex x\nedge x y\nend\n");
    let o = run(&["validate", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "), "{}", stderr(&o));
}

#[test]
fn not_simple_without_flag() {
    let f = fixture("pinpair.hgs", &["pinpair"]);
    let o = run(&["vc", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: not-simple:"));
    let o = run(&["vc", "--simplify", p(&f)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    let f = fixture("chain3u.hgs", &["chain", "-k", "3"]);
    assert_eq!(run(&["stats", "--limit-vertices", "0", p(&f)]).status.code(), Some(2));
    assert_eq!(run(&["vc", "--format", "hlp", p(&f)]).status.code(), Some(2));
    assert_eq!(run(&["stats", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn tower25_stats_without_expansion() {
    let f = fixture("tower25.hgs", &["tower", "-k", "25"]);
    let o = run(&["stats", p(&f)]);
    assert!(o.status.success());
    let out = stdout(&o);
    // each cell has a, b and two calls: 2 (2^25 - 1) vertices
    assert!(out.contains("expansion_vertices 67108862\n"), "{out}");
    let o = run(&["expand", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: limit-exceeded:"));
}

#[test]
fn scalars_lead_the_output() {
    let f = fixture("tower8.hgs", &["tower", "-k", "8"]);
    for cmd in ["vc", "maxcut", "mis"] {
        let o = run(&[cmd, p(&f)]);
        assert!(o.status.success());
        let out = stdout(&o);
        let mut lines = out.lines();
        assert!(lines.next().unwrap().parse::<u64>().is_ok());
        assert_eq!(lines.next(), Some("hsol 1"));
    }
    let o = run(&["vc", p(&f)]);
    assert_eq!(stdout(&o).lines().next(), Some("510"));
}

#[test]
fn solution_query_and_emit() {
    let f = fixture("chain3q.hgs", &["chain", "-k", "3"]);
    let o = run(&["mis", p(&f)]);
    let out = stdout(&o);
    let sol = write("chain3.hsol", out.split_once('\n').unwrap().1);
    let emitted = stdout(&run(&["emit", p(&sol)]));
    let flat = stdout(&run(&["mis", "--format", "flat", p(&f)]));
    let mut a: Vec<&str> = emitted.lines().collect();
    a.sort();
    let mut b: Vec<&str> = flat.lines().skip(1).collect();
    b.sort();
    assert_eq!(a, b);
    for v in ["u", "v", "c/u", "c/v", "c/c/u", "c/c/v", "c/p"] {
        let o = run(&["query", p(&f), "--solution", p(&sol), "--vertex", v]);
        assert!(o.status.success(), "{}", stderr(&o));
        let canonical = if v == "c/p" { "v" } else { v };
        let expect = b.contains(&canonical);
        assert_eq!(stdout(&o), format!("{expect}\n"), "{v}");
    }
    let o = run(&["query", p(&f), "--solution", p(&sol), "--vertex", "c/zz"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn maxsat_on_nested_formula() {
    let f = fixture("nested.h3f", &["nested-formula"]);
    let o = run(&["expand", p(&f)]);
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = run(&["maxsat", p(&f)]);
    let heu: u64 = stdout(&o).lines().next().unwrap().parse().unwrap();
    assert!((4..=7).contains(&heu));
}

#[test]
fn circuit_generators() {
    let f = fixture("two_call.hcirc", &["two-call-circuit"]);
    let o = run(&["expand", p(&f)]);
    assert_eq!(stdout(&o), "output 0\ntrue_gates 0\ngates 5\n");
    let o = run(&["gen-mtg", p(&f)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = write("mtg.hcirc", &stdout(&o));
    assert!(run(&["validate", p(&d)]).status.success());
    let o = run(&["gen-lp", p(&f)]);
    assert!(stdout(&o).starts_with("hlp 1\nlp D1 ( x_x1 x_x2 x_x3 x_x4 )\n"));
    let o = run(&["gen-lp", "--format", "flat", p(&f)]);
    assert!(stdout(&o).starts_with("maximize "));
    let o = run(&["gen-mtg-flat", "--epsilon", "1/2", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: malformed:"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["fixtures", "random-spec", "--seed", "7"]);
    let b = run(&["fixtures", "random-spec", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let f = write("r7.hgs", &stdout(&a));
    for cmd in ["vc", "maxcut", "mis", "mmm"] {
        assert_eq!(run(&[cmd, p(&f)]).stdout, run(&[cmd, p(&f)]).stdout);
    }
}
