//! The two bundled applications and their theorem corpora.

use thiserror::Error;

use crate::kernel::{Iep, Store, StoreError};
use crate::model::AppSignature;
use crate::proofio::{check_theorem, parse_application, parse_proof, parse_theorem, CheckError, ParseError, ProofDocument, TheoremStatement};

macro_rules! corpus {
    ($app:literal: $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $app, "/", $name)))),*]
    };
}

const NAT: &[(&str, &str)] = corpus!("nat":
    "nat.app", "ruleids.txt",
    "thm1.thm", "thm1.proof", "thm2.thm", "thm2.proof", "thm3.thm", "thm3.proof",
    "thm4.thm", "thm4.proof", "thm5.thm", "thm5.proof", "thm6.thm", "thm6.proof",
);

const PECR: &[(&str, &str)] = corpus!("pecr":
    "pecr.app",
    "thm1.thm", "thm1.proof", "thm2.thm", "thm2.proof", "thm3.thm", "thm3.proof",
    "thm4.thm", "thm4.proof", "thm5.thm", "thm5.proof", "thm6.thm", "thm6.proof",
    "thm7.thm", "thm7.proof", "thm8.thm", "thm8.proof", "thm9.thm", "thm9.proof",
    "thm10.thm", "thm10.proof", "thm11.thm", "thm11.proof", "thm12.thm", "thm12.proof",
    "thm13.thm", "thm13.proof", "thm14.thm", "thm14.proof", "thm15.thm", "thm15.proof",
    "thm16.thm", "thm16.proof", "thm17.thm", "thm17.proof", "thm18.thm", "thm18.proof",
    "thm19.thm", "thm19.proof", "thm20.thm", "thm20.proof", "thm21.thm", "thm21.proof",
    "thm22.thm", "thm22.proof", "thm23.thm", "thm23.proof", "thm24.thm", "thm24.proof",
    "thm25.thm", "thm25.proof", "thm26.thm", "thm26.proof",
);

/// Bundled file text, e.g. `corpus_file("nat", "thm2.proof")`.
pub fn corpus_file(app: &str, name: &str) -> Option<&'static str> {
    let table = match app {
        "nat" => NAT,
        "pecr" => PECR,
        _ => return None,
    };
    table.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn theorem_count(app: &str) -> usize {
    match app {
        "nat" => 6,
        "pecr" => 26,
        _ => 0,
    }
}

fn load(app: &str) -> (AppSignature, Store) {
    let text = corpus_file(app, &format!("{app}.app")).expect("bundled application");
    parse_application(text).expect("bundled application parses")
}

/// Natural numbers, arrays, boxes and iterated maps.
pub fn nat() -> (AppSignature, Store) {
    load("nat")
}

/// The logic applied to its own programs.
pub fn pecr() -> (AppSignature, Store) {
    load("pecr")
}

pub fn by_name(app: &str) -> Option<(AppSignature, Store)> {
    matches!(app, "nat" | "pecr").then(|| load(app))
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{label}: {err}")]
    Parse { label: String, err: ParseError },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub statement: TheoremStatement,
    pub proof: ProofDocument,
}

/// Parse theorem `thmN` of a bundled corpus.
pub fn corpus_entry(app: &str, n: usize, sig: &AppSignature) -> Result<CorpusEntry, CorpusError> {
    let label = format!("thm{n}");
    let perr = |err| CorpusError::Parse { label: label.clone(), err };
    let thm = corpus_file(app, &format!("{label}.thm")).unwrap_or_default();
    let proof = corpus_file(app, &format!("{label}.proof")).unwrap_or_default();
    Ok(CorpusEntry {
        statement: parse_theorem(thm, &label, sig).map_err(perr)?,
        proof: parse_proof(proof, &label, sig).map_err(perr)?,
    })
}

/// Check every theorem in order, adding each one to the store so later
/// proofs can cite it. Returns the accepted theorems.
pub fn check_corpus(app: &str, sig: &AppSignature, store: &mut Store) -> Result<Vec<Iep>, CorpusError> {
    let mut out = Vec::new();
    for n in 1..=theorem_count(app) {
        let e = corpus_entry(app, n, sig)?;
        let iep = check_theorem(&e.statement, &e.proof, store, sig)?;
        store.insert(iep.clone(), sig)?;
        out.push(iep);
    }
    Ok(out)
}
