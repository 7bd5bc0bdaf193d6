use std::time::Instant;

use pecr::apps;
use pecr::proofio::{check_theorem, reduce_connection_lists};
use pecr::prover::{prove, ProverConfig};

/// Axioms plus the corpus theorems numbered below `n`.
fn store_below(app: &str, n: usize) -> (pecr::AppSignature, pecr::Store) {
    let (sig, mut store) = apps::by_name(app).unwrap();
    for k in 1..n {
        let e = apps::corpus_entry(app, k, &sig).unwrap();
        let iep = check_theorem(&e.statement, &e.proof, &store, &sig).unwrap();
        store.insert(iep, &sig).unwrap();
    }
    (sig, store)
}

fn rederive(app: &str, n: usize) {
    let (sig, store) = store_below(app, n);
    let target = apps::corpus_entry(app, n, &sig).unwrap().statement;
    let t = Instant::now();
    let got = prove(&target, &store, &sig, &ProverConfig::default()).unwrap_or_else(|e| panic!("{app} thm{n}: {e}"));
    let secs = t.elapsed().as_secs_f64();
    println!("{app} thm{n}: {} lines, {} rounds, {} facts, {secs:.2}s", got.proof.lines.len(), got.stats.rounds, got.stats.facts);
    print!("{}", pecr::proofio::print_proof(&got.proof, &sig));
    assert!(secs < 60.0);
    check_theorem(&target, &got.proof, &store, &sig).unwrap();
    let trace = reduce_connection_lists(&got.proof);
    assert!(trace.redundant.is_empty());
    assert!(trace.final_list().iter().all(|&i| i <= got.proof.m));
}

#[test]
fn pecr_thm1() { rederive("pecr", 1) }
#[test]
fn pecr_thm2() { rederive("pecr", 2) }
#[test]
fn pecr_thm5() { rederive("pecr", 5) }
#[test]
fn pecr_thm6() { rederive("pecr", 6) }
#[test]
fn nat_thm1() { rederive("nat", 1) }
#[test]
fn nat_thm5() { rederive("nat", 5) }
#[test]
fn nat_thm6() { rederive("nat", 6) }
