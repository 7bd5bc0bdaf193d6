use std::path::Path;
use std::process::{Command, Output};

fn pecr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pecr")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn bundled_corpora_check() {
    for app in ["nat", "pecr"] {
        let o = pecr(&["check", app]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn clist_mutation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = pecr::apps::corpus_file("nat", "thm2.proof").unwrap().replace("bx4a [7 6 1]", "bx4a [7 6 2]");
    let proof = write(dir.path(), "thm2.proof", &text);
    write(dir.path(), "thm2.thm", pecr::apps::corpus_file("nat", "thm2.thm").unwrap());
    let o = pecr(&["check", "nat", "thm1.proof", &proof]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 12:"), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let proof = write(dir.path(), "bad.proof", "1 lt [a b]\n2 nonsense\n");
    assert_eq!(pecr(&["check", "nat", &proof]).status.code(), Some(2));
    assert_eq!(pecr(&["check", "nat", "/no/such/file.proof"]).status.code(), Some(2));
    assert_eq!(pecr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pecr(&["--mlst", "1,2", "check", "nat"]).status.code(), Some(2));
}

#[test]
fn prover_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.thm", "-----\nlt [a a] []\n");
    assert_eq!(pecr(&["prove", "nat", &bad]).status.code(), Some(1));
    let o = pecr(&["prove", "nat", "thm1.thm", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn emitted_proof_checks_in_fresh_process() {
    let dir = tempfile::tempdir().unwrap();
    let a = pecr(&["prove", "pecr", "thm6.thm", "--corpus-lemmas", "--seed", "5"]);
    let b = pecr(&["prove", "pecr", "thm6.thm", "--corpus-lemmas", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let proof = write(dir.path(), "thm6.proof", &stdout(&a));
    write(dir.path(), "thm6.thm", pecr::apps::corpus_file("pecr", "thm6.thm").unwrap());
    let lemmas: Vec<String> = (1..6).map(|n| format!("thm{n}.proof")).collect();
    let mut args = vec!["check", "pecr"];
    args.extend(lemmas.iter().map(String::as_str));
    args.push(&proof);
    let o = pecr(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn reduce_prints_trace() {
    let o = pecr(&["reduce", "nat", "thm2.proof"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 16);
    assert_eq!(lines[0], "[6 8 9 11 16 17]");
    assert_eq!(lines[15], "[1 2]");
}

#[test]
fn encode_program_and_proof() {
    let dir = tempfile::tempdir().unwrap();
    let prog = write(dir.path(), "derivation.prog", "ext [q c] []\nsub [q p] []\nconc [p c] [s]\n");
    assert_eq!(stdout(&pecr(&["encode", "pecr", &prog])), "6 17 3 0\n4 17 16 0\n8 16 3 19\n");
    let out = stdout(&pecr(&["encode", "nat", "thm2.proof", "--proof"]));
    assert_eq!(out.lines().count(), 18);
    assert_eq!(out.lines().last().unwrap(), "18 13 16 18 0 27 8 6 16 11 9 17");
}

#[test]
fn decompose_and_ioeq() {
    let dir = tempfile::tempdir().unwrap();
    let axc = write(dir.path(), "axc.prog", "bndf [p] [q]\nsubbx [q p] []\neltbx [u p] []\nle [0 n] []\nitf [u n] [w]\n");
    let out = stdout(&pecr(&["decompose", "nat", &axc]));
    assert_eq!(out.matches(" binding").count(), 5);
    assert_eq!(out.matches("non-binding").count(), 1);
    let cc = write(dir.path(), "cc.prog", "eqn [c c] []\n");
    let ab = write(dir.path(), "ab.prog", "eqn [a b] []\n");
    assert_eq!(pecr(&["ioeq", "nat", &cc, &ab]).status.code(), Some(0));
    assert_eq!(pecr(&["ioeq", "nat", &ab, &cc]).status.code(), Some(1));
}

#[test]
fn run_reports_computability() {
    let dir = tempfile::tempdir().unwrap();
    let prog = write(dir.path(), "p.prog", "lt [a b] []\nlbx [p] [c]\nitf [c n] [w]\n");
    let good = write(dir.path(), "good.va", "a = 1\nb = 2\np = [[1 2] [3 4]]\nn = 5\n");
    let bad = write(dir.path(), "bad.va", "a = 2\nb = 2\np = [[1 2] [3 4]]\nn = 5\n");
    let o = pecr(&["run", "nat", &prog, &good, "--map", "tent", "--N", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w = [0 0]"), "{}", stdout(&o));
    assert_eq!(pecr(&["run", "nat", &prog, &bad, "--map", "tent", "--N", "8"]).status.code(), Some(1));
    let o = pecr(&["run", "nat", &prog, &good, "--map", "tent", "--N", "8", "--budget", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dynamical_systems() {
    assert_eq!(stdout(&pecr(&["dyn", "cycle", "tent", "--N", "8", "--u0", "3"])), "tcyc=4 pcyc=1\n");
    assert_eq!(stdout(&pecr(&["dyn", "cycle", "involution", "--N", "8", "--u0", "1"])), "tcyc=0 pcyc=2\n");
    let trace = stdout(&pecr(&["dyn", "iterate", "tent", "--N", "8", "--u0", "3", "--steps", "5", "--every", "1"]));
    assert_eq!(trace, "0 [3]\n1 [6]\n2 [4]\n3 [8]\n4 [0]\n5 [0]\n");
    assert_eq!(stdout(&pecr(&["dyn", "bound", "tent", "--N", "8", "--lo", "0", "--hi", "3"])), "[0] [6]\n");
    assert_eq!(pecr(&["dyn", "certify", "tent", "--N", "1024"]).status.code(), Some(0));
    assert_eq!(pecr(&["dyn", "certify", "tent", "--N", "8", "--lo", "0", "--hi", "4"]).status.code(), Some(1));
    assert_eq!(pecr(&["dyn", "iterate", "shift", "--param", "5", "--u0", "1", "--steps", "3", "--mach", "128,4096,10"]).status.code(), Some(1));
}
