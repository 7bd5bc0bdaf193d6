//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p pecr-cli --test acceptance -- --nocapture` to see them.

#[path = "../../pecr/tests/common/mod.rs"]
mod common;

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pecr::apps;
use pecr::dynsys::{certify_axc, detect_cycle, iterate, BoxRegion, Tent};
use pecr::lists::{cap_lists, concat_lists, minus_lists, sublst, unique_list};
use pecr::matrix::{
    arity_bounds, decode_program, decompose_io_matrix, encode_program, gate, ioeq_check, BinaryMatrix, GateMode, LabelMap,
};
use pecr::model::{validate_program_list, AtomicProgram, Label, ProgramList, Violation};
use pecr::proofio::{export_proof_matrix, parse_program, parse_rule_ids, reduce_connection_lists, ExportLayout};
use pecr::runtime::{Evaluator, Sampler};
use pecr::{check_proof, parse_proof, AppSignature};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SECS: f64 = 5.0;
const MIN_MUTATIONS_PER_PROOF: usize = 4;
const IOEQ_PAIRS: usize = 1000;
const IOEQ_ASYMMETRIC: usize = 50;
const IOEQ_SECS: f64 = 10.0;
const PROVER_SECS: f64 = 60.0;
const PROBE_TRIALS: u64 = 100;
const SCALAR_MAX: u64 = 10;
const DYN_SECS: f64 = 10.0;
const DYN_ITERATIONS: u64 = 10_000;
const DYN_STARTS: usize = 100;
const PROP_CASES: u32 = 2_500;
const PROP_SECS: f64 = 30.0;
const MNAT: u64 = 2_147_483_647;

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = pecr_cli::run(std::iter::once("pecr").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn corpus_check() -> Verdict {
    let start = Instant::now();
    for app in ["nat", "pecr"] {
        let (code, out) = cli(&["check", app]);
        ensure(code == 0, format!("check {app} exited {code}:\n{out}"))?;
        ensure(out.lines().count() == apps::theorem_count(app), format!("check {app}: {out}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < CORPUS_SECS, format!("corpus took {secs:.2}s"))?;
    let mut rejected = 0;
    for app in ["nat", "pecr"] {
        let (sig, mut store) = apps::by_name(app).unwrap();
        for n in 1..=apps::theorem_count(app) {
            let e = apps::corpus_entry(app, n, &sig).unwrap();
            let muts = common::mutations(&e.proof, &sig);
            ensure(muts.len() >= MIN_MUTATIONS_PER_PROOF, format!("{app} thm{n}: {} mutations", muts.len()))?;
            for (kind, doc) in muts {
                ensure(check_proof(&doc, &store, &sig).is_err(), format!("{app} thm{n}: {kind} accepted"))?;
                rejected += 1;
            }
            let iep = pecr::check_theorem(&e.statement, &e.proof, &store, &sig).unwrap();
            store.insert(iep, &sig).unwrap();
        }
    }
    Ok(format!("32 proofs in {secs:.2}s, {rejected} mutations rejected"))
}

fn derivation_encoding() -> Verdict {
    let (sig, _) = apps::pecr();
    let p = parse_program("ext [q c] []\nsub [q p] []\nconc [p c] [s]", &sig).unwrap();
    let m = encode_program(&p, LabelMap::new(26), 2, 1).unwrap();
    let want = vec![vec![6, 17, 3, 0], vec![4, 17, 16, 0], vec![8, 16, 3, 19]];
    ensure(m.rows == want, format!("{:?}", m.rows))?;
    Ok(format!("{:?}", m.rows))
}

fn axc_decomposition() -> Verdict {
    let (_, store) = apps::nat();
    let axc = store.get("axc").unwrap();
    let p = axc.premise.concat(&axc.conclusion);
    let map = LabelMap::new(26);
    let mio = encode_program(&p, map, 2, 1).unwrap().io();
    let c = 27;
    ensure(mio.rows == vec![vec![16, 0, 17], vec![17, 16, 0], vec![21, 16, 0], vec![c, 14, 0], vec![21, 14, 23]], format!("mio {:?}", mio.rows))?;
    let d = decompose_io_matrix(&mio, map);
    ensure(d.len() == 6, format!("{} matrices", d.len()))?;
    let cells: [&[(usize, usize)]; 6] =
        [&[(0, 0), (1, 1), (2, 1)], &[(0, 2), (1, 0)], &[(2, 0), (4, 0)], &[(3, 0)], &[(3, 1), (4, 1)], &[(4, 2)]];
    let labels = [16, 17, 21, c, 14, 23];
    for (k, u) in d.iter().enumerate() {
        let mut want = vec![vec![0u64; 3]; 5];
        for &(i, j) in cells[k] {
            want[i][j] = labels[k];
        }
        ensure(u.label == labels[k] && u.matrix == want, format!("matrix {}: {:?}", k + 1, u.matrix))?;
        ensure(u.binding == (k < 5), format!("matrix {} binding={}", k + 1, u.binding))?;
    }
    let mut sum = vec![vec![0u64; 3]; 5];
    for u in &d {
        for (i, r) in u.matrix.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                sum[i][j] += v;
            }
        }
    }
    ensure(sum == mio.rows, "sum differs")?;
    Ok("6 matrices, 5 binding, sum exact".into())
}

fn bin(rows: &[&[u8]]) -> BinaryMatrix {
    BinaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn gate_examples() -> Verdict {
    let cases = [
        (
            bin(&[&[1, 1, 0], &[0, 1, 0], &[1, 0, 0]]),
            bin(&[&[0, 1, 0], &[1, 1, 0], &[1, 0, 1]]),
            bin(&[&[0, 1, 0], &[0, 1, 0], &[1, 0, 0]]),
            bin(&[&[1, 1, 0], &[1, 1, 0], &[1, 0, 1]]),
        ),
        (
            bin(&[&[1, 1, 1, 0], &[1, 0, 0, 1], &[0, 1, 0, 1]]),
            bin(&[&[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]]),
            bin(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1]]),
            bin(&[&[1, 1, 1, 0], &[1, 1, 1, 1], &[0, 1, 0, 1]]),
        ),
    ];
    for (k, (u, v, and, or)) in cases.iter().enumerate() {
        ensure(gate(u, v, GateMode::And).unwrap() == *and, format!("example {} and", k + 1))?;
        ensure(gate(u, v, GateMode::Or).unwrap() == *or, format!("example {} or", k + 1))?;
    }
    Ok("3x3 and 3x4 examples exact".into())
}

const THM2_MATRIX: [[u64; 12]; 18] = [
    [1, 13, 16, 17, 0, 0, 0, 0, 0, 0, 0, 0],
    [2, 13, 17, 18, 0, 0, 0, 0, 0, 0, 0, 0],
    [3, 10, 16, 0, 0, 38, 1, 0, 0, 0, 0, 0],
    [4, 10, 17, 0, 0, 38, 1, 0, 0, 0, 0, 0],
    [5, 10, 18, 0, 0, 38, 2, 0, 0, 0, 0, 0],
    [6, 14, 16, 0, 1, 18, 3, 0, 0, 0, 0, 0],
    [7, 14, 17, 0, 2, 18, 4, 0, 0, 0, 0, 0],
    [8, 14, 18, 0, 3, 18, 5, 0, 0, 0, 0, 0],
    [9, 15, 16, 0, 4, 19, 3, 0, 0, 0, 0, 0],
    [10, 15, 17, 0, 5, 19, 4, 0, 0, 0, 0, 0],
    [11, 15, 18, 0, 6, 19, 5, 0, 0, 0, 0, 0],
    [12, 9, 2, 1, 0, 25, 7, 6, 1, 0, 0, 0],
    [13, 9, 3, 2, 0, 25, 8, 7, 2, 0, 0, 0],
    [14, 9, 4, 5, 0, 26, 10, 9, 1, 0, 0, 0],
    [15, 9, 5, 6, 0, 26, 11, 10, 2, 0, 0, 0],
    [16, 9, 3, 1, 0, 15, 13, 12, 0, 0, 0, 0],
    [17, 9, 4, 6, 0, 15, 14, 15, 0, 0, 0, 0],
    [18, 13, 16, 18, 0, 27, 8, 6, 16, 11, 9, 17],
];

fn thm2() -> (AppSignature, pecr::ProofDocument) {
    let (sig, store) = apps::nat();
    let e = apps::corpus_entry("nat", 2, &sig).unwrap();
    let mut store = store;
    let t1 = apps::corpus_entry("nat", 1, &sig).unwrap();
    store.insert(pecr::check_theorem(&t1.statement, &t1.proof, &store, &sig).unwrap(), &sig).unwrap();
    pecr::check_theorem(&e.statement, &e.proof, &store, &sig).unwrap();
    (sig, e.proof)
}

fn proof_matrix() -> Verdict {
    let (_, doc) = thm2();
    let ids = parse_rule_ids(apps::corpus_file("nat", "ruleids.txt").unwrap()).unwrap();
    let rows = export_proof_matrix(&doc, &ids, ExportLayout { nx: 2, ny: 1, nclist: 6 }, LabelMap::new(26)).unwrap();
    ensure(rows.len() == 18, format!("{} rows", rows.len()))?;
    for (i, (got, want)) in rows.iter().zip(THM2_MATRIX.iter()).enumerate() {
        ensure(got[..] == want[..], format!("row {}: {got:?}", i + 1))?;
    }
    Ok("18x12 exact".into())
}

const THM2_TRACE: [&[usize]; 16] = [
    &[6, 8, 9, 11, 16, 17],
    &[6, 8, 9, 11, 14, 15, 16],
    &[6, 8, 9, 11, 12, 13, 14, 15],
    &[2, 6, 8, 9, 10, 11, 12, 13, 14],
    &[1, 2, 6, 8, 9, 10, 11, 12, 13],
    &[1, 2, 6, 7, 8, 9, 10, 11, 12],
    &[1, 2, 6, 7, 8, 9, 10, 11],
    &[1, 2, 5, 6, 7, 8, 9, 10],
    &[1, 2, 4, 5, 6, 7, 8, 9],
    &[1, 2, 3, 4, 5, 6, 7, 8],
    &[1, 2, 3, 4, 5, 6, 7],
    &[1, 2, 3, 4, 5, 6],
    &[1, 2, 3, 4, 5],
    &[1, 2, 3, 4],
    &[1, 2, 3],
    &[1, 2],
];

fn reduction_trace() -> Verdict {
    let (_, doc) = thm2();
    let t = reduce_connection_lists(&doc);
    ensure(t.steps.len() == 16, format!("{} steps", t.steps.len()))?;
    for (k, (got, want)) in t.steps.iter().zip(THM2_TRACE.iter()).enumerate() {
        ensure(got[..] == want[..], format!("step {}: {got:?}", k + 1))?;
    }
    ensure(t.redundant.is_empty(), format!("redundant {:?}", t.redundant))?;
    Ok("16 steps, [6 8 9 11 16 17] .. [1 2]".into())
}

fn ioeq_oracle() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut pairs, mut asym) = (0, 0);
    while pairs < IOEQ_PAIRS {
        let p = common::random_program(&mut rng);
        let q = match pairs % 4 {
            0 => common::relabel(&p, &mut rng),
            1 => match common::coarsen(&p, &mut rng) {
                Some(q) => q,
                None => continue,
            },
            2 => common::redraw(&p, &mut rng),
            _ => common::random_program(&mut rng),
        };
        let nx = arity_bounds([&p, &q]).0;
        ensure(p.len() <= 6 && nx <= 3, "generator out of range")?;
        for (a, b) in [(&q, &p), (&p, &q)] {
            ensure(ioeq_check(a, b).is_some() == common::ioeq_oracle(a, b), format!("disagree on q={a:?} p={b:?}"))?;
        }
        asym += (common::ioeq_oracle(&q, &p) != common::ioeq_oracle(&p, &q)) as usize;
        pairs += 1;
    }
    ensure(asym >= IOEQ_ASYMMETRIC, format!("{asym} asymmetric pairs"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < IOEQ_SECS, format!("{secs:.2}s"))?;
    Ok(format!("{pairs} pairs, {asym} asymmetric, {secs:.2}s"))
}

fn prover() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut report = String::new();
    for (app, n) in [("pecr", 1), ("pecr", 2), ("pecr", 5), ("pecr", 6), ("nat", 1), ("nat", 5), ("nat", 6)] {
        let start = Instant::now();
        let (code, proof) = cli(&["prove", app, &format!("thm{n}.thm"), "--corpus-lemmas"]);
        let secs = start.elapsed().as_secs_f64();
        ensure(code == 0, format!("{app} thm{n}: prove exited {code}"))?;
        ensure(secs < PROVER_SECS, format!("{app} thm{n}: {secs:.1}s"))?;
        let sub = dir.path().join(app);
        std::fs::create_dir_all(&sub).unwrap();
        let proof_path = sub.join(format!("thm{n}.proof"));
        std::fs::write(&proof_path, &proof).unwrap();
        std::fs::write(sub.join(format!("thm{n}.thm")), apps::corpus_file(app, &format!("thm{n}.thm")).unwrap()).unwrap();
        let mut args: Vec<String> = vec!["check".into(), app.into()];
        args.extend((1..n).map(|k| format!("thm{k}.proof")));
        args.push(proof_path.to_string_lossy().into_owned());
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = cli(&refs);
        ensure(code == 0, format!("{app} thm{n}: emitted proof rejected: {out}"))?;
        let (sig, _) = apps::by_name(app).unwrap();
        let doc = parse_proof(&proof, "p", &sig).unwrap();
        let t = reduce_connection_lists(&doc);
        let premise: Vec<usize> = (1..=doc.m).collect();
        ensure(t.redundant.is_empty() && t.final_list() == premise, format!("{app} thm{n}: reduction {:?}", t.steps.last()))?;
        write!(report, "{app}/thm{n} {}l {secs:.2}s; ", doc.lines.len()).unwrap();
    }
    Ok(report.trim_end_matches("; ").to_string())
}

fn soundness() -> Verdict {
    let (sig, mut store) = apps::nat();
    apps::check_corpus("nat", &sig, &mut store).unwrap();
    let tent = Tent { n: 8u64 };
    let ev = Evaluator::new(&sig).with_map(&tent);
    let rules = [
        "ord1", "axa2", "axa3a", "axa3b", "axa3c", "axa3d", "bx3a", "bx3b", "bx3c", "bx4a", "bx4b", "bx4c", "thm1", "thm2",
        "thm3", "thm4", "thm5", "thm6",
    ];
    let (mut trials, mut exhaustive) = (0, 0);
    for (k, name) in rules.iter().enumerate() {
        let rule = store.get(name).unwrap();
        let s = ev.soundness_probe(rule, PROBE_TRIALS, k as u64 + 1, &Sampler::default()).map_err(|e| e.to_string())?;
        ensure(s.trials >= PROBE_TRIALS && s.violations == 0, format!("{name}: {s}"))?;
        trials += s.trials;
        if let Some(x) = ev.exhaustive_probe(rule, SCALAR_MAX).map_err(|e| e.to_string())? {
            ensure(x.violations == 0, format!("{name} exhaustive: {x}"))?;
            exhaustive += x.trials;
        }
    }
    Ok(format!("{} rules, {trials} random and {exhaustive} exhaustive assignments, 0 violations", rules.len()))
}

fn dynamics() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in [8u64, 64, 1024] {
        let f = Tent { n };
        let p = BoxRegion::interval(0, n).unwrap();
        certify_axc(&f, &p, MNAT).map_err(|e| format!("N={n}: {e:?}"))?;
        for _ in 0..DYN_STARTS {
            let u = rng.gen_range(0..=n);
            iterate(&f, &[u], DYN_ITERATIONS, None, MNAT).map_err(|e| format!("N={n} u={u}: {e}"))?;
            let c = detect_cycle(&f, &[u], 10 * (n + 1), MNAT).unwrap().ok_or(format!("N={n} u={u}: no cycle"))?;
            ensure(c.tcyc <= n + 1 && c.pcyc <= n + 1, format!("N={n} u={u}: {c}"))?;
        }
    }
    for u in 0..=8 {
        let c = detect_cycle(&Tent { n: 8u64 }, &[u], 100, MNAT).unwrap().unwrap();
        ensure((c.tcyc, c.pcyc) == common::naive_cycle(8, u), format!("N=8 u={u}: {c}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < DYN_SECS, format!("{secs:.2}s"))?;
    Ok(format!("N in {{8, 64, 1024}} certified, N=8 table matches, {secs:.2}s"))
}

fn nat_program(sig: &AppSignature, seed: u64, len: usize, names: &[&str]) -> ProgramList {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next_out = 30;
    let items = (0..len)
        .map(|_| {
            let pn = sig.pn(names[rng.gen_range(0..names.len())]).unwrap();
            let d = sig.program(pn).unwrap();
            let x = d.inputs.iter().map(|_| Label::Var(rng.gen_range(1..=4))).collect();
            let y = d
                .outputs
                .iter()
                .map(|_| {
                    next_out += 1;
                    Label::Var(next_out)
                })
                .collect();
            AtomicProgram::new(pn, x, y)
        })
        .collect();
    ProgramList::new(items)
}

fn properties() -> Verdict {
    let start = Instant::now();
    let (sig, store) = apps::nat();
    let mut cases = 0u32;
    let runner = || TestRunner::new(Config { cases: PROP_CASES, failure_persistence: None, ..Config::default() });
    let small = || prop::collection::vec(0u8..6, 0..10);

    runner()
        .run(&(small(), small()), |(u, v)| {
            let c = cap_lists(&u, &v);
            let m = minus_lists(&u, &v);
            prop_assert_eq!(unique_list(&unique_list(&u)), unique_list(&u));
            prop_assert_eq!(minus_lists(&u, &[]), u.clone());
            prop_assert!(minus_lists(&u, &u).is_empty());
            prop_assert!(sublst(&c, &u) && sublst(&c, &v));
            prop_assert!(u.iter().all(|e| c.contains(e) != m.contains(e)));
            prop_assert_eq!(concat_lists(&u, &v, None).unwrap().len(), u.len() + v.len());
            Ok(())
        })
        .map_err(|e| format!("list laws: {e}"))?;
    cases += PROP_CASES;

    let names: Vec<&str> = sig.programs.iter().map(|d| d.name.as_str()).collect();
    runner()
        .run(&(any::<u64>(), 1usize..10), |(seed, len)| {
            let p = nat_program(&sig, seed, len, &names);
            prop_assert_eq!(validate_program_list(&p, &sig), Ok(()));
            let map = LabelMap::covering([&p]);
            let (nx, ny) = arity_bounds([&p]);
            let m = encode_program(&p, map, nx, ny).unwrap();
            prop_assert_eq!(decode_program(&m, map, &sig).unwrap(), p);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;
    cases += PROP_CASES;

    runner()
        .run(&(any::<u64>(), 1usize..7), |(seed, len)| {
            let proof = nat_program(&sig, seed, len, &["lt", "lea", "lta", "eqa"]);
            for label in ["ord1", "axa2", "axa3c"] {
                let rule = store.get(label).unwrap();
                let a = pecr::kernel::match_premise(&proof, rule, &sig);
                prop_assert_eq!(&a, &pecr::kernel::match_premise(&proof, rule, &sig));
                prop_assert!(a.windows(2).all(|w| w[0].clist < w[1].clist));
            }
            Ok(())
        })
        .map_err(|e| format!("match determinism: {e}"))?;
    cases += PROP_CASES;

    runner()
        .run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = common::random_program(&mut rng);
            let q = common::redraw(&p, &mut rng);
            prop_assert_eq!(ioeq_check(&q, &p).is_some(), common::ioeq_oracle(&q, &p));
            Ok(())
        })
        .map_err(|e| format!("ioeq: {e}"))?;
    cases += PROP_CASES;

    // one failing fixture per structural condition
    let v = |text: &str| validate_program_list(&parse_program(text, &sig).unwrap(), &sig);
    let raw = |ap: AtomicProgram| validate_program_list(&ProgramList::new(vec![ap]), &sig);
    let lt = sig.pn("lt").unwrap();
    let lbx = sig.pn("lbx").unwrap();
    let fixtures: Vec<(&str, bool)> = vec![
        ("unknown program", matches!(raw(AtomicProgram::new(999, vec![], vec![])), Err(Violation::UnknownProgram { .. }))),
        ("declared arity", matches!(raw(AtomicProgram::new(lt, vec![Label::Var(1)], vec![])), Err(Violation::Arity { .. }))),
        ("arity bound", matches!(raw(AtomicProgram::new(lt, vec![Label::Var(1); 4], vec![])), Err(Violation::ArityBound { .. }))),
        ("input label kind", matches!(raw(AtomicProgram::new(lt, vec![Label::Var(1), Label::Null], vec![])), Err(Violation::BadInput { .. }))),
        (
            "output label kind",
            matches!(raw(AtomicProgram::new(lbx, vec![Label::Var(1)], vec![sig.constant("0").unwrap()])), Err(Violation::OutputNotVariable { .. })),
        ),
        ("constant type", matches!(v("lea [0 a] []"), Err(Violation::ConstantType { .. }))),
        ("cap[x y] empty", matches!(v("lbx [a] [a]"), Err(Violation::InputIsOutput { .. }))),
        ("y unique", matches!(v("bnds [q] [a a]"), Err(Violation::OutputRepeated { .. }))),
        ("outputs distinct", matches!(v("lbx [p] [a]\nubx [q] [a]"), Err(Violation::DuplicateOutput { .. }))),
        ("no later output as input", matches!(v("lea [a b] []\nlbx [p] [a]"), Err(Violation::InputFromLater { .. }))),
        ("length bound", matches!(v(&vec!["lt [a b] []"; 65].join("\n")), Err(Violation::TooLong { .. }))),
    ];
    for (name, ok) in &fixtures {
        ensure(*ok, format!("fixture {name}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(cases >= 10_000, format!("{cases} cases"))?;
    ensure(secs < PROP_SECS, format!("{secs:.2}s"))?;
    Ok(format!("{cases} cases and {} fixtures in {secs:.2}s", fixtures.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("corpus check and mutation suite", corpus_check),
        ("derivation program encoding", derivation_encoding),
        ("axc I/O matrix decomposition", axc_decomposition),
        ("AND/OR gate examples", gate_examples),
        ("thm2 proof matrix", proof_matrix),
        ("thm2 connection list reduction", reduction_trace),
        ("ioeq against condition oracle", ioeq_oracle),
        ("prover rederivations", prover),
        ("soundness probes", soundness),
        ("tent map certification and cycles", dynamics),
        ("structural property suite", properties),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = Duration::as_secs_f64(&start.elapsed());
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", k + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
