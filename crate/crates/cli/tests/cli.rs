use std::path::PathBuf;
use std::process::{Command, Output};

fn elimgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elimgen")).args(args).output().unwrap()
}

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("elimgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// `(x, y)` of every accepted real root in a roots document.
fn real_roots(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .filter(|l| l.starts_with("root real "))
        .map(|l| {
            let w: Vec<&str> = l.split_whitespace().collect();
            let at = w.iter().position(|&t| t == "point").unwrap();
            (w[at + 1].parse().unwrap(), w[at + 3].parse().unwrap())
        })
        .collect()
}

#[test]
fn generate_then_solve_the_toy() {
    let tpl = scratch("toy.tpl");
    let o = elimgen(&["generate", &corpus("toy.problem"), "-o", &tpl]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = elimgen(&["solve", &tpl, &corpus("toy.instance")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let roots = real_roots(&stdout(&o));
    assert_eq!(roots.len(), 3);
    for (x, y) in [(1.0, 1.0), (-1.0, 2.0), (2.0, -1.0)] {
        assert!(roots.iter().any(|r| (r.0 - x).abs() < 1e-8 && (r.1 - y).abs() < 1e-8), "{roots:?}");
    }
}

#[test]
fn reduce_keeps_the_roots() {
    let tpl = scratch("toy-best.tpl");
    let red = scratch("toy-red.tpl");
    assert!(elimgen(&["generate", "toy", "--mode", "best", "-o", &tpl]).status.success());
    let o = elimgen(&["reduce", &tpl, "toy", "-o", &red]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = elimgen(&["solve", &red, &corpus("toy.instance")]);
    assert_eq!(real_roots(&stdout(&o)).len(), 3);
}

#[test]
fn generation_is_deterministic() {
    let a = scratch("det-a.tpl");
    let b = scratch("det-b.tpl");
    assert!(elimgen(&["generate", "toy", "-o", &a]).status.success());
    assert!(elimgen(&["generate", "toy", "-o", &b]).status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn usage_errors_exit_2() {
    let o = elimgen(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = elimgen(&["generate"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = scratch("bad.problem");
    std::fs::write(&bad, "elimgen-problem 1\nname b\nvars x\npolys 1\nterm 0 q 1\nend\n").unwrap();
    let o = elimgen(&["generate", &bad, "-o", &scratch("bad.tpl")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 5, column 8"), "{}", stderr(&o));

    let o = elimgen(&["generate", "toy", "-p", "65520", "-o", &scratch("p.tpl")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mismatched_instance_is_rejected() {
    let tpl = scratch("mm.tpl");
    assert!(elimgen(&["generate", "toy", "-o", &tpl]).status.success());
    let inst = scratch("mm.instance");
    std::fs::write(&inst, "elimgen-instance 1\nvars x y\npolys 2\ncoef 0 x 1\ncoef 0 1 -1\ncoef 1 y 1\ncoef 1 1 -2\nend\n").unwrap();
    assert_eq!(elimgen(&["solve", &tpl, &inst]).status.code(), Some(2));
}

#[test]
fn verify_small_suite() {
    let o = elimgen(&["verify", "--seeds", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("found 4/4, checks passed 4/4"));
}

#[test]
fn bench_toy_writes_csv() {
    let o = elimgen(&["bench", "toy", "--trials", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("trial,aggregate,placement,online_ms,fill_ms"));
    assert_eq!(lines.count(), 8);
}
