//! Bounded forward-chaining search for proofs.
//!
//! The proof program starts as the theorem premise. Each round applies every
//! stored rule to matches that use at least one line added in the previous
//! round, plus the iot and substitution schemas on the new lines. A
//! statement is added once per program and input list; the one exception is a
//! second copy of a statement with outputs produced by an identity sr1 step,
//! which is what lets sr2 equate two output labels. The search stops when the
//! target appears, when a round adds nothing, or when a budget runs out.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{apply_iep, Iep, iot_instances, match_premise, sr1_rewrites, substitution_instances, FreshLabelAllocator, Store, IOT, SR1, SR2};
use crate::model::{binding_profile, validate_program_list, AppSignature, AtomicProgram, Label, ProgramList, Violation};
use crate::proofio::{check_theorem, prune_proof, CheckError, Justification, ProofDocument, ProofLine, TheoremStatement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverConfig {
    /// search rounds
    pub depth: usize,
    /// derived statements
    pub facts: usize,
    pub time: Duration,
    /// 0 tries rules in store order; any other value shuffles that order
    pub seed: u64,
}

impl Default for ProverConfig {
    fn default() -> Self {
        Self { depth: 12, facts: 5000, time: Duration::from_secs(60), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Budget {
    Depth,
    Facts,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    pub rounds: usize,
    pub facts: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Error)]
pub enum ProveError {
    #[error("premise is not a valid program list: {0}")]
    Premise(Violation),
    #[error("search saturated after {} rounds and {} facts without reaching the target", .0.rounds, .0.facts)]
    Saturated(SearchStats),
    #[error("{budget:?} budget exhausted after {} rounds and {} facts", .stats.rounds, .stats.facts)]
    Exhausted { budget: Budget, stats: SearchStats },
    #[error("emitted proof failed its own check: {0}")]
    Recheck(CheckError),
}

#[derive(Debug, Clone)]
pub struct Proved {
    pub proof: ProofDocument,
    pub stats: SearchStats,
}

struct Search<'a> {
    sig: &'a AppSignature,
    target: &'a TheoremStatement,
    /// target inputs that must match exactly; the rest bind to anything
    fixed: HashSet<Label>,
    lines: Vec<ProofLine>,
    proof: ProgramList,
    seen: HashMap<(u32, Vec<Label>), u8>,
    alloc: FreshLabelAllocator,
    equality_pns: HashSet<u32>,
    rules: Vec<&'a Iep>,
    rule_order: Vec<usize>,
}

impl<'a> Search<'a> {
    fn hits_target(&self, stmt: &AtomicProgram) -> bool {
        let t = &self.target.conclusion;
        if stmt.pn != t.pn || stmt.x.len() != t.x.len() || stmt.y.len() != t.y.len() {
            return false;
        }
        let mut wild: HashMap<Label, Label> = HashMap::new();
        t.x.iter().zip(&stmt.x).all(|(&want, &got)| {
            if want.is_const() || self.fixed.contains(&want) {
                want == got
            } else {
                *wild.entry(want).or_insert(got) == got
            }
        })
    }

    /// Add a line unless it repeats an earlier one. Returns true if added.
    fn push(&mut self, stmt: AtomicProgram, just: Justification, identity_copy: bool) -> bool {
        let key = (stmt.pn, stmt.x.clone());
        let count = self.seen.get(&key).copied().unwrap_or(0);
        let allowed = match count {
            0 => true,
            1 => identity_copy && !stmt.y.is_empty(),
            _ => false,
        };
        if !allowed {
            return false;
        }
        self.seen.insert(key, count + 1);
        self.alloc.reserve_all(&stmt);
        self.proof.items.push(stmt.clone());
        self.lines.push(ProofLine { stmt, just: Some(just) });
        true
    }

    fn is_equality(&self, ap: &AtomicProgram) -> bool {
        self.equality_pns.contains(&ap.pn) && ap.x.len() == 2 && ap.y.is_empty()
    }

    /// Candidate lines for one round, built from the proof as it stood at the
    /// start of the round. `new_from` is the first 0-based index added last round.
    fn round(&mut self, new_from: usize) -> Vec<(AtomicProgram, Justification, bool)> {
        let mut out = Vec::new();
        let snapshot = self.proof.clone();
        let mut alloc = self.alloc.clone();
        let n = snapshot.len();
        for &r in &self.rule_order {
            let rule = self.rules[r];
            if new_from > 0 && rule.premise.is_empty() {
                continue;
            }
            for m in match_premise(&snapshot, rule, self.sig) {
                if !rule.premise.is_empty() && m.clist.iter().all(|&c| c <= new_from) {
                    continue;
                }
                if let Ok(stmt) = apply_iep(&snapshot, rule, &m, &mut alloc, self.sig) {
                    out.push((stmt, Justification { rule: rule.label.clone(), clist: m.clist }, false));
                }
            }
        }
        for i in new_from..n {
            for stmt in iot_instances(&snapshot.items[i], self.sig) {
                out.push((stmt, Justification { rule: IOT.into(), clist: vec![i + 1] }, false));
            }
        }
        for o in 0..n {
            for e in 0..n {
                if (o < new_from && e < new_from) || !self.is_equality(&snapshot.items[e]) {
                    continue;
                }
                self.substitutions(&snapshot, o, e, &mut alloc, &mut out);
            }
        }
        // sr2 for sr1 copies made in the previous round
        for s in new_from..n {
            let Some(j) = self.lines[s].just.as_ref() else { continue };
            if j.rule == SR1 && !snapshot.items[s].y.is_empty() {
                let (o, e) = (j.clist[0] - 1, j.clist[1] - 1);
                self.sr2(&snapshot, o, e, s, &mut alloc, &mut out);
            }
        }
        out
    }

    fn substitutions(
        &self,
        snap: &ProgramList,
        o: usize,
        e: usize,
        alloc: &mut FreshLabelAllocator,
        out: &mut Vec<(AtomicProgram, Justification, bool)>,
    ) {
        let (orig, eq) = (&snap.items[o], &snap.items[e]);
        let rewrites = sr1_rewrites(orig, eq, self.sig);
        if rewrites.is_empty() {
            return;
        }
        if orig.y.is_empty() {
            for x in rewrites {
                let stmt = AtomicProgram::new(orig.pn, x, vec![]);
                out.push((stmt, Justification { rule: SR1.into(), clist: vec![o + 1, e + 1] }, false));
            }
            return;
        }
        // with outputs: relate to an existing copy by sr2, else make one by sr1
        for x in rewrites {
            let existing: Vec<usize> =
                (0..snap.len()).filter(|&s| s != o && snap.items[s].pn == orig.pn && snap.items[s].x == x).collect();
            if existing.is_empty() {
                if let Ok(mut v) = substitution_instances(orig, eq, None, self.sig, alloc) {
                    if let Some(pos) = v.iter().position(|s| s.x == x) {
                        let stmt = v.swap_remove(pos);
                        out.push((stmt, Justification { rule: SR1.into(), clist: vec![o + 1, e + 1] }, x == orig.x));
                    }
                }
            }
            for s in existing {
                self.sr2(snap, o, e, s, alloc, out);
            }
        }
    }

    fn sr2(
        &self,
        snap: &ProgramList,
        o: usize,
        e: usize,
        s: usize,
        alloc: &mut FreshLabelAllocator,
        out: &mut Vec<(AtomicProgram, Justification, bool)>,
    ) {
        let Ok(v) = substitution_instances(&snap.items[o], &snap.items[e], Some(&snap.items[s]), self.sig, alloc) else {
            return;
        };
        for stmt in v {
            out.push((stmt, Justification { rule: SR2.into(), clist: vec![o + 1, e + 1, s + 1] }, false));
        }
    }
}

/// Search for a proof of `target` from the rules in `store`.
pub fn prove(target: &TheoremStatement, store: &Store, sig: &AppSignature, cfg: &ProverConfig) -> Result<Proved, ProveError> {
    let start = Instant::now();
    validate_program_list(&target.premise, sig).map_err(ProveError::Premise)?;
    let profile = binding_profile(&target.premise);
    // the search program may outgrow npmax; only the pruned proof must fit
    let mut wide = sig.clone();
    wide.mach.mlst.npmax = usize::MAX;
    let mut s = Search {
        sig: &wide,
        target,
        fixed: profile.lio.iter().copied().collect(),
        lines: target.premise.items.iter().map(|ap| ProofLine { stmt: ap.clone(), just: None }).collect(),
        proof: target.premise.clone(),
        seen: HashMap::new(),
        alloc: FreshLabelAllocator::for_program(&target.premise),
        equality_pns: sig.types.iter().filter_map(|t| t.eq.map(|e| e.0)).collect(),
        rules: store.iter().collect(),
        rule_order: (0..store.len()).collect(),
    };
    if cfg.seed != 0 {
        s.rule_order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    }
    for ap in &target.premise.items {
        s.seen.insert((ap.pn, ap.x.clone()), 1);
    }
    s.alloc.reserve_all(&target.conclusion);
    let stats = |s: &Search, rounds| SearchStats { rounds, facts: s.lines.len() - target.premise.len(), elapsed: start.elapsed() };
    let m = target.premise.len();
    let mut new_from = 0;
    for round in 1..=cfg.depth {
        if start.elapsed() > cfg.time {
            return Err(ProveError::Exhausted { budget: Budget::Time, stats: stats(&s, round - 1) });
        }
        let before = s.lines.len();
        let cands = s.round(new_from);
        for (stmt, just, identity) in cands {
            if s.lines.len() - m >= cfg.facts {
                return Err(ProveError::Exhausted { budget: Budget::Facts, stats: stats(&s, round) });
            }
            let hit = s.hits_target(&stmt);
            if s.push(stmt, just, identity) && hit {
                let st = stats(&s, round);
                return emit(&s, target, store, sig).map(|proof| Proved { proof, stats: st });
            }
            if start.elapsed() > cfg.time {
                return Err(ProveError::Exhausted { budget: Budget::Time, stats: stats(&s, round) });
            }
        }
        if s.lines.len() == before {
            return Err(ProveError::Saturated(stats(&s, round)));
        }
        new_from = before;
    }
    Err(ProveError::Exhausted { budget: Budget::Depth, stats: stats(&s, cfg.depth) })
}

fn emit(s: &Search, target: &TheoremStatement, store: &Store, sig: &AppSignature) -> Result<ProofDocument, ProveError> {
    let doc = ProofDocument { label: target.label.clone(), m: target.premise.len(), lines: s.lines.clone() };
    let doc = relabel(&prune_proof(&doc), target);
    check_theorem(target, &doc, store, sig).map_err(ProveError::Recheck)?;
    Ok(doc)
}

/// Rename derived outputs to the smallest free ids in line order, and give
/// the conclusion the target's output labels when they are free.
fn relabel(doc: &ProofDocument, target: &TheoremStatement) -> ProofDocument {
    let premise = doc.premise();
    let mut alloc = FreshLabelAllocator::for_program(&premise);
    let last = doc.lines.len() - 1;
    for &l in &target.conclusion.y {
        alloc.reserve(l);
    }
    let mut map: HashMap<Label, Label> = HashMap::new();
    let mut lines = Vec::with_capacity(doc.lines.len());
    for (k, line) in doc.lines.iter().enumerate() {
        let mut stmt = line.stmt.clone();
        if line.just.is_some() {
            for l in stmt.x.iter_mut() {
                *l = map.get(l).copied().unwrap_or(*l);
            }
            for (j, l) in stmt.y.iter_mut().enumerate() {
                let new = if k == last { target.conclusion.y[j] } else { alloc.fresh() };
                map.insert(*l, new);
                *l = new;
            }
        }
        lines.push(ProofLine { stmt, just: line.just.clone() });
    }
    ProofDocument { label: doc.label.clone(), m: doc.m, lines }
}
