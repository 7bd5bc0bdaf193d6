//! The inference core: IEP store, premise matching, rule application with
//! fresh outputs, structural extension checks, the IOT and substitution
//! schemas, and construction of disjunction/conjunction descriptors.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::lists::equivlst;
use crate::matrix::ioeq_check;
use crate::model::{
    binding_profile, validate_program_list_bounded, AppSignature, ApKind, AtomicProgram, Compound, EqKind, Label,
    ProgramDecl, ProgramList, Violation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Axiom,
    Theorem,
    Schema,
}

/// Irreducible extended program: a premise list and an atomic conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iep {
    pub label: String,
    pub premise: ProgramList,
    pub conclusion: AtomicProgram,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("input {0} not in premise I/O or constants")]
    FreshInput(String),
    #[error("output {0} clashes with a premise label")]
    OutputClash(String),
    #[error("premise longer than nprem={0}")]
    PremiseTooLong(usize),
    #[error("extended program invalid: {0}")]
    Invalid(Violation),
}

/// Structural conditions for `c` to extend `p`: the concatenation is a valid
/// program list and every input of `c` is an I/O label of `p` or a constant.
pub fn check_extension_structure(p: &ProgramList, c: &AtomicProgram, sig: &AppSignature) -> Result<(), ExtensionError> {
    let mut avail: HashSet<Label> = p.inp().into_iter().collect();
    avail.extend(p.outp());
    for &l in &c.x {
        if !l.is_const() && !avail.contains(&l) {
            return Err(ExtensionError::FreshInput(sig.label_text(l)));
        }
    }
    for &l in &c.y {
        if avail.contains(&l) {
            return Err(ExtensionError::OutputClash(sig.label_text(l)));
        }
    }
    validate_program_list_bounded(&p.concat(c), sig, None).map_err(ExtensionError::Invalid)
}

/// Axioms and checked theorems, in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Store {
    entries: Vec<Iep>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("duplicate rule label {0}")]
    Duplicate(String),
    #[error("rule {label}: {err}")]
    Structure { label: String, err: ExtensionError },
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, iep: Iep, sig: &AppSignature) -> Result<(), StoreError> {
        if self.index.contains_key(&iep.label) || SCHEMAS.contains(&iep.label.as_str()) {
            return Err(StoreError::Duplicate(iep.label));
        }
        if iep.premise.len() > sig.mach.mlst.nprem {
            return Err(StoreError::Structure {
                label: iep.label,
                err: ExtensionError::PremiseTooLong(sig.mach.mlst.nprem),
            });
        }
        check_extension_structure(&iep.premise, &iep.conclusion, sig)
            .map_err(|err| StoreError::Structure { label: iep.label.clone(), err })?;
        self.index.insert(iep.label.clone(), self.entries.len());
        self.entries.push(iep);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Iep> {
        self.index.get(label).map(|&i| &self.entries[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Iep> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub const IOT: &str = "iot";
pub const SR1: &str = "sr1";
pub const SR2: &str = "sr2";
pub const SCHEMAS: [&str; 3] = [IOT, SR1, SR2];

/// Map from stored-rule labels to proof labels. Constants map to themselves.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    pub map: HashMap<Label, Label>,
}

impl Substitution {
    pub fn apply(&self, l: Label) -> Option<Label> {
        match l {
            Label::Const(_) => Some(l),
            _ => self.map.get(&l).copied(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    /// 1-based proof line indices, one per premise item
    pub clist: Vec<usize>,
    pub subst: Substitution,
}

/// Hands out the smallest variable ids not used anywhere in the proof.
#[derive(Debug, Clone, Default)]
pub struct FreshLabelAllocator {
    used: HashSet<u32>,
    next: u32,
}

impl FreshLabelAllocator {
    pub fn for_program(p: &ProgramList) -> Self {
        let mut a = Self { used: HashSet::new(), next: 1 };
        for ap in &p.items {
            a.reserve_all(ap);
        }
        a
    }

    pub fn reserve(&mut self, l: Label) {
        if let Label::Var(id) = l {
            self.used.insert(id);
        }
    }

    pub fn reserve_all(&mut self, ap: &AtomicProgram) {
        for l in ap.labels() {
            self.reserve(l);
        }
    }

    pub fn fresh(&mut self) -> Label {
        while self.used.contains(&self.next) {
            self.next += 1;
        }
        self.used.insert(self.next);
        Label::Var(self.next)
    }
}

/// Extend a partial premise→proof label map with one item pairing.
/// Returns the labels newly bound so the caller can undo.
pub(crate) fn bind_item(pat: &AtomicProgram, fact: &AtomicProgram, map: &mut HashMap<Label, Label>) -> Option<Vec<Label>> {
    if pat.pn != fact.pn || pat.x.len() != fact.x.len() || pat.y.len() != fact.y.len() {
        return None;
    }
    let mut added = Vec::new();
    for (pl, fl) in pat.labels().zip(fact.labels()) {
        let ok = match pl {
            Label::Const(_) => pl == fl,
            _ => match map.get(&pl) {
                Some(&bound) => bound == fl,
                None => {
                    map.insert(pl, fl);
                    added.push(pl);
                    true
                }
            },
        };
        if !ok {
            for l in added {
                map.remove(&l);
            }
            return None;
        }
    }
    Some(added)
}

/// Every clist (lexicographic order) whose extracted sublist of `proof` is a
/// valid program list I/O-equivalent to the premise of `iep`.
pub fn match_premise(proof: &ProgramList, iep: &Iep, sig: &AppSignature) -> Vec<MatchResult> {
    let mut out = Vec::new();
    let mut clist = Vec::new();
    let mut map = HashMap::new();
    search(proof, &iep.premise, sig, &mut clist, &mut map, &mut out);
    out
}

fn search(
    proof: &ProgramList,
    premise: &ProgramList,
    sig: &AppSignature,
    clist: &mut Vec<usize>,
    map: &mut HashMap<Label, Label>,
    out: &mut Vec<MatchResult>,
) {
    let t = clist.len();
    if t == premise.len() {
        let q = extract(proof, clist);
        if validate_program_list_bounded(&q, sig, None).is_ok() && ioeq_check(&q, premise).is_some() {
            out.push(MatchResult { clist: clist.clone(), subst: Substitution { map: map.clone() } });
        }
        return;
    }
    let pat = &premise.items[t];
    for (i, fact) in proof.items.iter().enumerate() {
        if !fact.y.is_empty() && clist.contains(&(i + 1)) {
            continue;
        }
        if let Some(added) = bind_item(pat, fact, map) {
            clist.push(i + 1);
            search(proof, premise, sig, clist, map, out);
            clist.pop();
            for l in added {
                map.remove(&l);
            }
        }
    }
}

/// Proof lines named by a 1-based clist, in clist order.
pub fn extract(proof: &ProgramList, clist: &[usize]) -> ProgramList {
    ProgramList::new(clist.iter().map(|&i| proof.items[i - 1].clone()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("conclusion input {0} is unbound by the match")]
    Unbound(String),
    #[error("proof would exceed npmax={0}")]
    Capacity(usize),
}

pub fn apply_iep(
    proof: &ProgramList,
    iep: &Iep,
    m: &MatchResult,
    alloc: &mut FreshLabelAllocator,
    sig: &AppSignature,
) -> Result<AtomicProgram, ApplyError> {
    if proof.len() + 1 > sig.mach.mlst.npmax {
        return Err(ApplyError::Capacity(sig.mach.mlst.npmax));
    }
    let x = iep
        .conclusion
        .x
        .iter()
        .map(|&l| m.subst.apply(l).ok_or_else(|| ApplyError::Unbound(sig.label_text(l))))
        .collect::<Result<Vec<_>, _>>()?;
    let y = iep.conclusion.y.iter().map(|_| alloc.fresh()).collect();
    Ok(AtomicProgram::new(iep.conclusion.pn, x, y))
}

/// Type-checking statements for each I/O element of `stmt`, first occurrence
/// order, duplicates dropped. Slots whose type has no checker are skipped.
pub fn iot_instances(stmt: &AtomicProgram, sig: &AppSignature) -> Vec<AtomicProgram> {
    let mut out: Vec<AtomicProgram> = Vec::new();
    for (slot, l) in stmt.labels().enumerate() {
        let Some(ty) = sig.slot_type(stmt.pn, slot) else { continue };
        let Some(check) = sig.types[ty].check else { continue };
        let inst = AtomicProgram::new(check, vec![l], vec![]);
        if !out.contains(&inst) {
            out.push(inst);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("{0} is not substitution-eligible")]
    Ineligible(String),
    #[error("program names differ")]
    NameMismatch,
    #[error("more than one input slot differs")]
    SeveralSlots,
    #[error("equality line is not the registered equality for the slot type")]
    WrongEquality,
    #[error("equality does not relate the old and new labels")]
    Unrelated,
    #[error("output arity differs")]
    Outputs,
    #[error("equality and equivalence cannot be mixed")]
    MixedKinds,
    #[error("conclusion does not equate corresponding outputs")]
    BadConclusion,
}

fn eq_for_input(sig: &AppSignature, pn: u32, k: usize) -> Option<(u32, EqKind)> {
    sig.types[sig.slot_type(pn, k)?].eq
}

fn eq_for_output(sig: &AppSignature, pn: u32, j: usize) -> Option<(u32, EqKind)> {
    let d = sig.program(pn)?;
    sig.types[*d.outputs.get(j)?].eq
}

/// Kind of the equality used when `derived` follows from `original` by
/// rewriting at most one input slot under `equality`.
pub fn check_sr1(
    original: &AtomicProgram,
    equality: &AtomicProgram,
    derived: &AtomicProgram,
    sig: &AppSignature,
) -> Result<EqKind, SubstError> {
    let decl = sig.program(original.pn).ok_or(SubstError::NameMismatch)?;
    if !decl.subst {
        return Err(SubstError::Ineligible(decl.name.clone()));
    }
    if derived.pn != original.pn || derived.x.len() != original.x.len() {
        return Err(SubstError::NameMismatch);
    }
    if derived.y.len() != original.y.len() {
        return Err(SubstError::Outputs);
    }
    if equality.x.len() != 2 || !equality.y.is_empty() {
        return Err(SubstError::WrongEquality);
    }
    let diff: Vec<usize> = (0..original.x.len()).filter(|&k| original.x[k] != derived.x[k]).collect();
    let (u, v) = (equality.x[0], equality.x[1]);
    match diff.as_slice() {
        [] => {
            if u != v {
                return Err(SubstError::Unrelated);
            }
            let mut seen_slot = false;
            for k in 0..original.x.len() {
                if original.x[k] == u {
                    seen_slot = true;
                    if let Some((pn, kind)) = eq_for_input(sig, original.pn, k) {
                        if pn == equality.pn {
                            return Ok(kind);
                        }
                    }
                }
            }
            Err(if seen_slot { SubstError::WrongEquality } else { SubstError::Unrelated })
        }
        [k] => {
            let (pn, kind) = eq_for_input(sig, original.pn, *k).ok_or(SubstError::WrongEquality)?;
            if pn != equality.pn {
                return Err(SubstError::WrongEquality);
            }
            let (old, new) = (original.x[*k], derived.x[*k]);
            if (u == old && v == new) || (u == new && v == old) {
                Ok(kind)
            } else {
                Err(SubstError::Unrelated)
            }
        }
        _ => Err(SubstError::SeveralSlots),
    }
}

/// `derived` equates an output of `substituted` with the matching output of `original`.
pub fn check_sr2(
    original: &AtomicProgram,
    equality: &AtomicProgram,
    substituted: &AtomicProgram,
    derived: &AtomicProgram,
    sig: &AppSignature,
) -> Result<(), SubstError> {
    let kind = check_sr1(original, equality, substituted, sig)?;
    if !derived.y.is_empty() || derived.x.len() != 2 {
        return Err(SubstError::BadConclusion);
    }
    for j in 0..original.y.len() {
        if derived.x[0] == substituted.y[j] && derived.x[1] == original.y[j] {
            let (pn, out_kind) = eq_for_output(sig, original.pn, j).ok_or(SubstError::WrongEquality)?;
            if pn != derived.pn {
                return Err(SubstError::WrongEquality);
            }
            if out_kind != kind {
                return Err(SubstError::MixedKinds);
            }
            return Ok(());
        }
    }
    Err(SubstError::BadConclusion)
}

/// All input lists obtainable from `original` by one sr1 step under `equality`,
/// lowest slot first. The identity rewrite appears when the equality is reflexive.
pub fn sr1_rewrites(original: &AtomicProgram, equality: &AtomicProgram, sig: &AppSignature) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = Vec::new();
    let Some(decl) = sig.program(original.pn) else { return out };
    if !decl.subst || equality.x.len() != 2 || !equality.y.is_empty() {
        return out;
    }
    let (u, v) = (equality.x[0], equality.x[1]);
    for k in 0..original.x.len() {
        let Some((pn, _)) = eq_for_input(sig, original.pn, k) else { continue };
        if pn != equality.pn {
            continue;
        }
        let old = original.x[k];
        let new = if old == u {
            v
        } else if old == v {
            u
        } else {
            continue;
        };
        let mut x = original.x.clone();
        x[k] = new;
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// sr1 (no `substituted`) gives the lowest-slot rewrite with fresh outputs;
/// sr2 gives the equality of the first output pair.
pub fn substitution_instance(
    original: &AtomicProgram,
    equality: &AtomicProgram,
    substituted: Option<&AtomicProgram>,
    sig: &AppSignature,
    alloc: &mut FreshLabelAllocator,
) -> Result<AtomicProgram, SubstError> {
    substitution_instances(original, equality, substituted, sig, alloc)?
        .into_iter()
        .next()
        .ok_or(SubstError::Unrelated)
}

pub fn substitution_instances(
    original: &AtomicProgram,
    equality: &AtomicProgram,
    substituted: Option<&AtomicProgram>,
    sig: &AppSignature,
    alloc: &mut FreshLabelAllocator,
) -> Result<Vec<AtomicProgram>, SubstError> {
    match substituted {
        None => {
            let decl = sig.program(original.pn).ok_or(SubstError::NameMismatch)?;
            if !decl.subst {
                return Err(SubstError::Ineligible(decl.name.clone()));
            }
            let rewrites = sr1_rewrites(original, equality, sig);
            if rewrites.is_empty() {
                return Err(SubstError::Unrelated);
            }
            Ok(rewrites
                .into_iter()
                .map(|x| AtomicProgram::new(original.pn, x, original.y.iter().map(|_| alloc.fresh()).collect()))
                .collect())
        }
        Some(s) => {
            let kind = check_sr1(original, equality, s, sig)?;
            let mut out = Vec::new();
            for j in 0..original.y.len() {
                let (pn, out_kind) = eq_for_output(sig, original.pn, j).ok_or(SubstError::WrongEquality)?;
                if out_kind != kind {
                    return Err(SubstError::MixedKinds);
                }
                out.push(AtomicProgram::new(pn, vec![s.y[j], original.y[j]], vec![]));
            }
            if out.is_empty() {
                return Err(SubstError::BadConclusion);
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompoundError {
    #[error("operands have different free variable lists")]
    FreeMismatch,
    #[error("operands have different primary output lists")]
    OutputMismatch,
    #[error("concatenation invalid: {0}")]
    Invalid(Violation),
    #[error("label {0} has no slot type")]
    Untyped(String),
}

fn slot_types_of(labels: &[Label], within: &ProgramList, sig: &AppSignature) -> Result<Vec<usize>, CompoundError> {
    labels
        .iter()
        .map(|&l| {
            for ap in &within.items {
                if let Some(slot) = ap.labels().position(|m| m == l) {
                    if let Some(t) = sig.slot_type(ap.pn, slot) {
                        return Ok(t);
                    }
                }
            }
            Err(CompoundError::Untyped(sig.label_text(l)))
        })
        .collect()
}

/// Descriptor for the disjunction of two programs with matching free and
/// primary output lists. The first operand fixes the label order.
pub fn build_disjunction(
    a: &ProgramList,
    b: &ProgramList,
    name: &str,
    sig: &AppSignature,
) -> Result<ProgramDecl, CompoundError> {
    let pa = binding_profile(a);
    let pb = binding_profile(b);
    if !equivlst(&pa.free, &pb.free) {
        return Err(CompoundError::FreeMismatch);
    }
    if !equivlst(&pa.pol, &pb.pol) {
        return Err(CompoundError::OutputMismatch);
    }
    let inputs = slot_types_of(&pa.free, a, sig)?;
    let outputs = slot_types_of(&pa.pol, a, sig)?;
    let mut operands = a.items.clone();
    operands.extend(b.items.iter().cloned());
    Ok(ProgramDecl {
        name: name.into(),
        inputs,
        outputs,
        kind: ApKind::Dsj,
        subst: true,
        body: Some(Compound { head: AtomicProgram::new(0, pa.free, pa.pol), operands }),
    })
}

/// Descriptor for the conjunction of two atomic programs: inputs are the free
/// variables of the concatenation, outputs its primary outputs.
pub fn build_conjunction(
    a: &AtomicProgram,
    b: &AtomicProgram,
    name: &str,
    sig: &AppSignature,
) -> Result<ProgramDecl, CompoundError> {
    let s = ProgramList::new(vec![a.clone(), b.clone()]);
    validate_program_list_bounded(&s, sig, None).map_err(CompoundError::Invalid)?;
    let prof = binding_profile(&s);
    let inputs = slot_types_of(&prof.free, &s, sig)?;
    let outputs = slot_types_of(&prof.pol, &s, sig)?;
    Ok(ProgramDecl {
        name: name.into(),
        inputs,
        outputs,
        kind: ApKind::Cnj,
        subst: true,
        body: Some(Compound { head: AtomicProgram::new(0, prof.free, prof.pol), operands: s.items }),
    })
}

/// Default premise length up to which irreducibility is searched.
pub const IRREDUCIBILITY_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// a strict premise sublist (1-based positions) yields the conclusion by one step of `rule`
    Reducible { sublist: Vec<usize>, rule: String },
    /// premise longer than the bound; not searched
    Skipped { len: usize, bound: usize },
}

/// Look for a strict, order-preserving premise sublist from which another
/// stored rule derives the conclusion's program and inputs in one step.
/// Subsets are enumerated exhaustively, so long premises are skipped.
pub fn irreducibility(iep: &Iep, store: &Store, sig: &AppSignature, bound: usize) -> Irreducibility {
    let n = iep.premise.len();
    if n > bound {
        return Irreducibility::Skipped { len: n, bound };
    }
    let c = &iep.conclusion;
    for mask in 0u32..(1 << n) - 1 {
        let keep: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let sub = extract(&iep.premise, &keep);
        if validate_program_list_bounded(&sub, sig, None).is_err() {
            continue;
        }
        for rule in store.iter().filter(|r| r.label != iep.label && r.conclusion.pn == c.pn) {
            for m in match_premise(&sub, rule, sig) {
                let x: Option<Vec<Label>> = rule.conclusion.x.iter().map(|&l| m.subst.apply(l)).collect();
                if x.as_deref() == Some(&c.x[..]) {
                    return Irreducibility::Reducible { sublist: keep, rule: rule.label.clone() };
                }
            }
        }
    }
    Irreducibility::Irreducible
}
