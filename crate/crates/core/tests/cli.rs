use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pauliconj"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pauliconj-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn empty_circuit_is_identity() {
    let c = scratch("empty.txt", "qubits 1\n");
    let o = run(&["decide", "enic", path(&c)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("no-instance\n"), "{out}");
    assert!(out.contains("method clifford-exact"));
    let o = run(&["decide", "enic", path(&c), "--exit-status"]);
    assert_eq!(o.status.code(), Some(1));
    let s = scratch("s.txt", "qubits 1\nS 1\n");
    let o = run(&["decide", "enic", path(&s), "--exit-status"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("yes-instance"));
}

#[test]
fn t_conjugates_x_into_two_terms() {
    let c = scratch("t.txt", "qubits 1\nT 1\n");
    let o = run(&["conjugate", path(&c), "--pauli", "X"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2, "{out}");
    assert!(lines[0].starts_with("X "));
    assert!(lines[1].starts_with("Y "));
    let o = run(&["decide", "support", path(&c), "--pauli", "X"]);
    assert!(stdout(&o).starts_with("yes-instance"));
    let o = run(&["decide", "commute", path(&c), "--pauli", "Z", "--exit-status"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["decide", "commute", path(&c), "--pauli", "X", "--exit-status"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stats_report() {
    let c = scratch("stats.txt", "qubits 2\nH 1\nT 1\nT 2\nCZ 1 2\nT 1\n");
    let out = stdout(&run(&["stats", path(&c)]));
    assert_eq!(out, "qubits 2\ngates 5\nt-count 3\nt-depth 2\n");
}

#[test]
fn encode_decode_roundtrip() {
    let c = scratch("rt.txt", "qubits 2\nH 1\nT 1\nCZ 1 2\nT 2\nH 2\nT 2\n");
    let pres = scratch("rt.pres", "");
    let dec = scratch("rt.dec", "");
    let o = run(&["encode", path(&c), "--pauli", "XZ", "-o", path(&pres)]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["decode", path(&pres), "--pauli", "ZZ", "-o", path(&dec)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let a = stdout(&run(&["conjugate", path(&c), "--pauli", "XZ"]));
    let b = stdout(&run(&["conjugate", path(&dec), "--pauli", "ZZ"]));
    assert_eq!(a, b);
    let o = run(&["verify", path(&c), "--pauli", "XZ"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn binary_weight_rep9() {
    let code = scratch("rep9.txt", "111111111\n");
    let out = stdout(&run(&["code", "distribution", path(&code)]));
    assert_eq!(out.trim(), "1 0 0 0 0 0 0 0 0 1");
    let circ = scratch("bw.txt", "");
    let o = run(&["reduce", "binary-weight", path(&code), "--t", "5", "-o", path(&circ)]);
    assert_eq!(o.status.code(), Some(0));
    let cert = stdout(&o);
    assert!(cert.contains("predicted 0 0 0"), "{cert}");
    let o = run(&["reduce", "binary-weight", path(&code), "--t", "9", "-o", path(&circ)]);
    let cert = stdout(&o);
    assert!(cert.starts_with("certificate binary-weight"));
    assert!(!cert.contains("predicted 0 0 0"), "{cert}");
}

#[test]
fn reductions_emit_circuits() {
    let c = scratch("h.txt", "qubits 1\nH 1\n");
    let o = run(&["reduce", "support-to-enic", path(&c), "--pauli", "X"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("qubits "));
    assert!(out.contains("certificate support-to-enic"));
    let code = scratch("one.txt", "1\n");
    let o = run(&["reduce", "code-embed", path(&code)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certificate code-embedding"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["stats", "/nonexistent/circuit"]).status.code(), Some(2));
    let bad = scratch("bad.txt", "qubits 1\nT 2\n");
    assert_eq!(run(&["stats", path(&bad)]).status.code(), Some(2));
    let t = scratch("t2.txt", "qubits 1\nT 1\n");
    assert_eq!(run(&["conjugate", path(&t), "--pauli", "XX"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let deep = scratch(
        "deep.txt",
        "qubits 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\n",
    );
    assert_eq!(run(&["--max-chains", "2", "conjugate", path(&deep), "--pauli", "XI"]).status.code(), Some(3));
    assert_eq!(run(&["--max-qubits-oracle", "1", "verify", path(&deep), "--pauli", "XI"]).status.code(), Some(3));
}
