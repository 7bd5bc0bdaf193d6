//! Text formats (application, theorem, proof and program files), proof
//! checking, connection-list reduction and proof-matrix export.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::kernel::{
    check_extension_structure, check_sr1, check_sr2, extract, ExtensionError, Iep, Provenance, Store, StoreError,
    SubstError, IOT, SR1, SR2,
};
use crate::matrix::{encode_row, ioeq_check, LabelMap};
use crate::model::{
    validate_program_list, validate_program_list_bounded, AppSignature, ApKind, AtomicProgram, Compound, EqKind,
    ListLimits, MachineParams, ProgramDecl, ProgramList, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn perr(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c == '[' || c == ']' || c.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Tokens of a bracketed list starting at `pos`; returns the tokens and the
/// position after the closing bracket.
fn bracket(tokens: &[String], pos: usize) -> Result<(Vec<String>, usize), String> {
    if tokens.get(pos).map(String::as_str) != Some("[") {
        return Err(format!("expected '[' at token {}", pos + 1));
    }
    let mut items = Vec::new();
    let mut i = pos + 1;
    loop {
        match tokens.get(i).map(String::as_str) {
            None => return Err("unclosed '['".into()),
            Some("]") => return Ok((items, i + 1)),
            Some("[") => return Err("nested list in statement".into()),
            Some(t) => items.push(t.to_string()),
        }
        i += 1;
    }
}

/// Parse `name [x...] [y...]` from `tokens[pos..]`.
fn statement_at(tokens: &[String], pos: usize, sig: &AppSignature) -> Result<(AtomicProgram, usize), String> {
    let name = tokens.get(pos).ok_or("missing program name")?;
    let pn = sig.pn(name).ok_or_else(|| format!("unknown program {name}"))?;
    let (xs, next) = bracket(tokens, pos + 1)?;
    let (ys, next) = bracket(tokens, next)?;
    let label = |t: &String| sig.parse_label(t).ok_or_else(|| format!("bad label {t}"));
    let x = xs.iter().map(label).collect::<Result<Vec<_>, _>>()?;
    let y = ys.iter().map(label).collect::<Result<Vec<_>, _>>()?;
    Ok((AtomicProgram::new(pn, x, y), next))
}

pub fn parse_statement(text: &str, sig: &AppSignature) -> Result<AtomicProgram, ParseError> {
    let tokens = tokenize(text);
    let (ap, next) = statement_at(&tokens, 0, sig).map_err(|m| perr(1, m))?;
    if next != tokens.len() {
        return Err(perr(1, "trailing tokens after statement"));
    }
    Ok(ap)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// One statement per line; blank lines and `#` comments ignored.
pub fn parse_program(text: &str, sig: &AppSignature) -> Result<ProgramList, ParseError> {
    let mut items = Vec::new();
    for (n, line) in content_lines(text) {
        items.push(parse_statement(line, sig).map_err(|e| perr(n, e.msg))?);
    }
    Ok(ProgramList::new(items))
}

pub fn print_program(p: &ProgramList, sig: &AppSignature) -> String {
    p.items.iter().map(|ap| sig.show(ap) + "\n").collect()
}

/// Premise lines, a dashed separator, and one conclusion line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremStatement {
    pub label: String,
    pub premise: ProgramList,
    pub conclusion: AtomicProgram,
}

fn is_separator(line: &str) -> bool {
    line.len() >= 3 && line.chars().all(|c| c == '-')
}

fn split_rule(lines: &[(usize, &str)], sig: &AppSignature) -> Result<(ProgramList, Option<AtomicProgram>), ParseError> {
    let sep = lines.iter().position(|(_, l)| is_separator(l));
    let Some(sep) = sep else {
        let at = lines.first().map_or(0, |(n, _)| *n);
        return Err(perr(at, "missing ----- separator"));
    };
    let mut items = Vec::new();
    for &(n, l) in &lines[..sep] {
        items.push(parse_statement(l, sig).map_err(|e| perr(n, e.msg))?);
    }
    let rest = &lines[sep + 1..];
    let conclusion = match rest {
        [] => return Err(perr(lines[sep].0, "missing conclusion")),
        [(_, "false")] => None,
        [(n, l)] => Some(parse_statement(l, sig).map_err(|e| perr(*n, e.msg))?),
        [_, (n, _), ..] => return Err(perr(*n, "more than one conclusion line")),
    };
    Ok((ProgramList::new(items), conclusion))
}

pub fn parse_theorem(text: &str, label: &str, sig: &AppSignature) -> Result<TheoremStatement, ParseError> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let (premise, conclusion) = split_rule(&lines, sig)?;
    let conclusion = conclusion.ok_or_else(|| perr(0, "theorem conclusion cannot be false"))?;
    Ok(TheoremStatement { label: label.into(), premise, conclusion })
}

pub fn print_theorem(t: &TheoremStatement, sig: &AppSignature) -> String {
    format!("{}-----\n{}\n", print_program(&t.premise, sig), sig.show(&t.conclusion))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Justification {
    pub rule: String,
    /// 1-based line indices
    pub clist: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub stmt: AtomicProgram,
    pub just: Option<Justification>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDocument {
    pub label: String,
    /// number of premise lines
    pub m: usize,
    pub lines: Vec<ProofLine>,
}

impl ProofDocument {
    pub fn program(&self) -> ProgramList {
        ProgramList::new(self.lines.iter().map(|l| l.stmt.clone()).collect())
    }

    pub fn premise(&self) -> ProgramList {
        ProgramList::new(self.lines[..self.m].iter().map(|l| l.stmt.clone()).collect())
    }

    pub fn conclusion(&self) -> Option<&AtomicProgram> {
        self.lines.last().map(|l| &l.stmt)
    }
}

pub fn parse_proof(text: &str, label: &str, sig: &AppSignature) -> Result<ProofDocument, ParseError> {
    let mut lines = Vec::new();
    let mut m = 0;
    for (n, line) in content_lines(text) {
        let tokens = tokenize(line);
        let idx: usize = tokens[0].parse().map_err(|_| perr(n, format!("bad line number {}", tokens[0])))?;
        if idx != lines.len() + 1 {
            return Err(perr(n, format!("expected line number {}, found {idx}", lines.len() + 1)));
        }
        let (stmt, next) = statement_at(&tokens, 1, sig).map_err(|e| perr(n, e))?;
        let just = if next == tokens.len() {
            None
        } else {
            let rule = tokens[next].clone();
            let (cl, end) = if next + 1 == tokens.len() {
                (Vec::new(), next + 1)
            } else {
                bracket(&tokens, next + 1).map_err(|e| perr(n, e))?
            };
            if end != tokens.len() {
                return Err(perr(n, "trailing tokens after connection list"));
            }
            let clist = cl
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| perr(n, format!("bad line reference {t}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&bad) = clist.iter().find(|&&c| c == 0 || c >= idx) {
                return Err(perr(n, format!("clist references line {bad} ≥ current")));
            }
            Some(Justification { rule, clist })
        };
        match (&just, lines.len() == m) {
            (None, true) => m += 1,
            (None, false) => return Err(perr(n, "premise line after a derived line")),
            _ => {}
        }
        lines.push(ProofLine { stmt, just });
    }
    if lines.is_empty() {
        return Err(perr(0, "empty proof"));
    }
    Ok(ProofDocument { label: label.into(), m, lines })
}

pub fn print_proof(doc: &ProofDocument, sig: &AppSignature) -> String {
    let mut out = String::new();
    for (i, l) in doc.lines.iter().enumerate() {
        write!(out, "{} {}", i + 1, sig.show(&l.stmt)).unwrap();
        if let Some(j) = &l.just {
            let cl: Vec<String> = j.clist.iter().map(usize::to_string).collect();
            write!(out, " {} [{}]", j.rule, cl.join(" ")).unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error("proof program invalid: {0}")]
    Program(Violation),
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("clist length {got} does not match premise length {want}")]
    ClistLength { got: usize, want: usize },
    #[error("clist entry {0} out of range")]
    ClistRange(usize),
    #[error("extracted sublist invalid: {0}")]
    Extract(Violation),
    #[error("extracted sublist is not I/O equivalent to the premise of {0}")]
    NotIoeq(String),
    #[error("statement does not match the conclusion of {rule}; expected {expected}")]
    Conclusion { rule: String, expected: String },
    #[error("iot: statement is not a type check of an I/O element of the cited line")]
    Iot,
    #[error("{0}")]
    Subst(SubstError),
    #[error("theorem structure: {0}")]
    Extension(ExtensionError),
    #[error("premise differs from the theorem statement")]
    PremiseMismatch,
    #[error("last line does not match the theorem conclusion")]
    ConclusionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{label} line {line}: {kind}")]
pub struct CheckError {
    pub label: String,
    pub line: usize,
    pub kind: CheckErrorKind,
}

fn expected_conclusion(q: &ProgramList, rule: &Iep) -> Option<Vec<crate::model::Label>> {
    let w = ioeq_check(q, &rule.premise)?;
    rule.conclusion
        .x
        .iter()
        .map(|&l| if l.is_const() { Some(l) } else { w.get(&l).copied() })
        .collect()
}

/// Check one derived line against its justification.
pub fn check_line(
    proof: &ProgramList,
    i: usize,
    just: &Justification,
    store: &Store,
    sig: &AppSignature,
) -> Result<(), CheckErrorKind> {
    let stmt = &proof.items[i - 1];
    if let Some(&bad) = just.clist.iter().find(|&&c| c == 0 || c >= i) {
        return Err(CheckErrorKind::ClistRange(bad));
    }
    let line = |k: usize| &proof.items[just.clist[k] - 1];
    let arity = |want: usize| {
        if just.clist.len() == want {
            Ok(())
        } else {
            Err(CheckErrorKind::ClistLength { got: just.clist.len(), want })
        }
    };
    match just.rule.as_str() {
        IOT => {
            arity(1)?;
            let ok = crate::kernel::iot_instances(line(0), sig).contains(stmt);
            if ok {
                Ok(())
            } else {
                Err(CheckErrorKind::Iot)
            }
        }
        SR1 => {
            arity(2)?;
            check_sr1(line(0), line(1), stmt, sig).map(|_| ()).map_err(CheckErrorKind::Subst)
        }
        SR2 => {
            arity(3)?;
            check_sr2(line(0), line(1), line(2), stmt, sig).map_err(CheckErrorKind::Subst)
        }
        name => {
            let rule = store.get(name).ok_or_else(|| CheckErrorKind::UnknownRule(name.into()))?;
            arity(rule.premise.len())?;
            let q = extract(proof, &just.clist);
            validate_program_list_bounded(&q, sig, None).map_err(CheckErrorKind::Extract)?;
            let x = expected_conclusion(&q, rule).ok_or_else(|| CheckErrorKind::NotIoeq(name.into()))?;
            if stmt.pn == rule.conclusion.pn && stmt.x == x && stmt.y.len() == rule.conclusion.y.len() {
                Ok(())
            } else {
                let shown = AtomicProgram::new(rule.conclusion.pn, x, stmt.y.clone());
                Err(CheckErrorKind::Conclusion { rule: name.into(), expected: sig.show(&shown) })
            }
        }
    }
}

/// Accept the proof and return its premise→conclusion rule.
pub fn check_proof(doc: &ProofDocument, store: &Store, sig: &AppSignature) -> Result<Iep, CheckError> {
    let err = |line: usize, kind| CheckError { label: doc.label.clone(), line, kind };
    let proof = doc.program();
    if let Err(v) = validate_program_list(&proof, sig) {
        let line = match &v {
            Violation::DuplicateOutput { item, .. } | Violation::InputFromLater { item, .. } => *item,
            _ => 0,
        };
        return Err(err(line, CheckErrorKind::Program(v)));
    }
    for (k, l) in doc.lines.iter().enumerate() {
        if let Some(j) = &l.just {
            check_line(&proof, k + 1, j, store, sig).map_err(|e| err(k + 1, e))?;
        }
    }
    let premise = doc.premise();
    let conclusion = doc.conclusion().expect("non-empty proof").clone();
    check_extension_structure(&premise, &conclusion, sig).map_err(|e| err(doc.lines.len(), CheckErrorKind::Extension(e)))?;
    Ok(Iep { label: doc.label.clone(), premise, conclusion, provenance: Provenance::Theorem })
}

/// Check a proof against its theorem statement. Conclusion outputs may be renamed.
pub fn check_theorem(
    thm: &TheoremStatement,
    doc: &ProofDocument,
    store: &Store,
    sig: &AppSignature,
) -> Result<Iep, CheckError> {
    let iep = check_proof(doc, store, sig)?;
    let err = |line, kind| CheckError { label: doc.label.clone(), line, kind };
    if iep.premise != thm.premise {
        return Err(err(doc.m, CheckErrorKind::PremiseMismatch));
    }
    let c = &iep.conclusion;
    if c.pn != thm.conclusion.pn || c.x != thm.conclusion.x || c.y.len() != thm.conclusion.y.len() {
        return Err(err(doc.lines.len(), CheckErrorKind::ConclusionMismatch));
    }
    Ok(Iep { conclusion: thm.conclusion.clone(), ..iep })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionTrace {
    pub steps: Vec<Vec<usize>>,
    /// derived lines never absorbed and premise lines missing from the final list
    pub redundant: Vec<usize>,
}

impl ReductionTrace {
    pub fn final_list(&self) -> &[usize] {
        self.steps.last().map_or(&[], Vec::as_slice)
    }
}

/// Trace the conclusion's connection list back to the premise.
pub fn reduce_connection_lists(doc: &ProofDocument) -> ReductionTrace {
    let n = doc.lines.len();
    let mut redundant = Vec::new();
    let Some(last) = doc.lines[n - 1].just.as_ref() else {
        return ReductionTrace { steps: vec![vec![n]], redundant: (1..n).collect() };
    };
    let mut b: BTreeSet<usize> = last.clist.iter().copied().collect();
    let mut steps = vec![b.iter().copied().collect::<Vec<_>>()];
    for i in (doc.m + 1..n).rev() {
        if b.remove(&i) {
            let j = doc.lines[i - 1].just.as_ref().expect("derived line");
            b.extend(j.clist.iter().copied());
            steps.push(b.iter().copied().collect());
        } else {
            redundant.push(i);
        }
    }
    redundant.extend((1..=doc.m).filter(|i| !b.contains(i)));
    redundant.sort_unstable();
    ReductionTrace { steps, redundant }
}

/// Drop redundant derived lines and renumber. Premise lines are kept.
pub fn prune_proof(doc: &ProofDocument) -> ProofDocument {
    let trace = reduce_connection_lists(doc);
    let drop: BTreeSet<usize> = trace.redundant.iter().copied().filter(|&i| i > doc.m).collect();
    let mut renum = HashMap::new();
    let mut lines = Vec::new();
    for (k, l) in doc.lines.iter().enumerate() {
        if drop.contains(&(k + 1)) {
            continue;
        }
        renum.insert(k + 1, lines.len() + 1);
        let just = l.just.as_ref().map(|j| Justification {
            rule: j.rule.clone(),
            clist: j.clist.iter().map(|c| renum[c]).collect(),
        });
        lines.push(ProofLine { stmt: l.stmt.clone(), just });
    }
    ProofDocument { label: doc.label.clone(), m: doc.m, lines }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExportLayout {
    pub nx: usize,
    pub ny: usize,
    pub nclist: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("no rule id for {0}")]
    MissingRule(String),
    #[error("line {0} does not fit the layout")]
    Layout(usize),
}

/// Rows `[i, pn, x.., y.., atl, clist..]`; premise rows carry rule id 0.
pub fn export_proof_matrix(
    doc: &ProofDocument,
    rule_ids: &HashMap<String, u64>,
    layout: ExportLayout,
    map: LabelMap,
) -> Result<Vec<Vec<u64>>, ExportError> {
    let mut rows = Vec::with_capacity(doc.lines.len());
    for (k, l) in doc.lines.iter().enumerate() {
        let mut row = vec![k as u64 + 1];
        row.extend(encode_row(&l.stmt, map, layout.nx, layout.ny).ok_or(ExportError::Layout(k + 1))?);
        match &l.just {
            None => row.push(0),
            Some(j) => {
                row.push(*rule_ids.get(&j.rule).ok_or_else(|| ExportError::MissingRule(j.rule.clone()))?);
                if j.clist.len() > layout.nclist {
                    return Err(ExportError::Layout(k + 1));
                }
                row.extend(j.clist.iter().map(|&c| c as u64));
            }
        }
        row.resize(2 + layout.nx + layout.ny + 1 + layout.nclist, 0);
        rows.push(row);
    }
    Ok(rows)
}

/// `label id` per line.
pub fn parse_rule_ids(text: &str) -> Result<HashMap<String, u64>, ParseError> {
    let mut out = HashMap::new();
    for (n, line) in content_lines(text) {
        let mut it = line.split_whitespace();
        let (Some(label), Some(id), None) = (it.next(), it.next(), it.next()) else {
            return Err(perr(n, "expected `label id`"));
        };
        let id = id.parse().map_err(|_| perr(n, format!("bad id {id}")))?;
        if out.insert(label.to_string(), id).is_some() {
            return Err(perr(n, format!("duplicate label {label}")));
        }
    }
    Ok(out)
}

/// Rule ids in store order: axioms (falsity included) from 1, then the schemas.
pub fn default_rule_ids(sig: &AppSignature) -> HashMap<String, u64> {
    let schemas = crate::kernel::SCHEMAS.iter().map(|s| s.to_string());
    sig.axiom_labels.iter().cloned().chain(schemas).enumerate().map(|(i, l)| (l, i as u64 + 1)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Signature { line: usize, msg: String },
    #[error(transparent)]
    Store(#[from] StoreError),
}

const SECTIONS: [&str; 10] =
    ["NAME", "MACH", "TYPES", "CONSTANTS", "PROGRAMS", "EQUALITY", "TYPECHECK", "COMPOUND", "AXIOM", "FALSE"];

fn parse_slot_types(spec: &str, sig: &AppSignature, n: usize) -> Result<(Vec<usize>, Vec<usize>), ParseError> {
    let (ins, outs) = spec.split_once(';').ok_or_else(|| perr(n, "slot list needs `;`"))?;
    let conv = |s: &str| -> Result<Vec<usize>, ParseError> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| sig.type_id(t).ok_or_else(|| perr(n, format!("unknown slot type {t}"))))
            .collect()
    };
    Ok((conv(ins)?, conv(outs)?))
}

fn parse_program_decl(line: &str, sig: &AppSignature, n: usize) -> Result<ProgramDecl, ParseError> {
    let open = line.find('(').ok_or_else(|| perr(n, "expected name(in;out)"))?;
    let close = line.find(')').ok_or_else(|| perr(n, "missing ')'"))?;
    let name = line[..open].trim();
    let (inputs, outputs) = parse_slot_types(&line[open + 1..close], sig, n)?;
    let mut rest = line[close + 1..].split_whitespace();
    let kind = match rest.next() {
        Some("fatm") => ApKind::Fatm,
        Some("dsj") => ApKind::Dsj,
        Some("cnj") => ApKind::Cnj,
        other => return Err(perr(n, format!("bad program kind {other:?}"))),
    };
    let subst = match rest.next() {
        Some("subst") => true,
        Some("nosubst") => false,
        other => return Err(perr(n, format!("bad substitution flag {other:?}"))),
    };
    Ok(ProgramDecl { name: name.into(), inputs, outputs, kind, subst, body: None })
}

fn parse_compound(line: &str, sig: &mut AppSignature, n: usize) -> Result<(), ParseError> {
    let (head, body) = line.split_once('=').ok_or_else(|| perr(n, "expected `head = operand | operand`"))?;
    let head = parse_statement(head, sig).map_err(|e| perr(n, e.msg))?;
    let (sep, kind) = if body.contains('|') { ('|', ApKind::Dsj) } else { ('&', ApKind::Cnj) };
    let ops = body
        .split(sep)
        .map(|s| parse_statement(s, sig).map_err(|e| perr(n, e.msg)))
        .collect::<Result<Vec<_>, _>>()?;
    if ops.len() != 2 {
        return Err(perr(n, "compound programs take exactly two operands"));
    }
    let decl = sig.program(head.pn).expect("parsed head");
    if decl.kind != kind {
        return Err(perr(n, format!("{} is not declared {:?}", decl.name, kind)));
    }
    let name = decl.name.clone();
    let built = match kind {
        ApKind::Dsj => crate::kernel::build_disjunction(
            &ProgramList::new(vec![ops[0].clone()]),
            &ProgramList::new(vec![ops[1].clone()]),
            &name,
            sig,
        ),
        _ => crate::kernel::build_conjunction(&ops[0], &ops[1], &name, sig),
    }
    .map_err(|e| perr(n, e.to_string()))?;
    let b = built.body.expect("built compound has a body");
    if !crate::lists::equivlst(&b.head.x, &head.x) || !crate::lists::equivlst(&b.head.y, &head.y) {
        return Err(perr(n, "head labels differ from the operands' free and output lists"));
    }
    let pn = head.pn;
    sig.programs[pn as usize - 1].body = Some(Compound { head, operands: b.operands });
    Ok(())
}

/// Parse an application file into its signature and axiom store.
pub fn parse_application(text: &str) -> Result<(AppSignature, Store), AppError> {
    let mut sig = AppSignature::new("", MachineParams::default());
    let mut store = Store::new();
    let mut section = "";
    let mut block: Option<(usize, String, bool, Vec<(usize, String)>)> = None;
    let sigerr = |line: usize, e: crate::model::SignatureError| AppError::Signature { line, msg: e.to_string() };

    fn flush(
        block: &mut Option<(usize, String, bool, Vec<(usize, String)>)>,
        sig: &mut AppSignature,
        store: &mut Store,
    ) -> Result<(), AppError> {
        let Some((n, label, is_false, lines)) = block.take() else { return Ok(()) };
        if sig.axiom_labels.contains(&label) {
            return Err(AppError::Signature { line: n, msg: format!("duplicate axiom {label}") });
        }
        if is_false {
            let mut items = Vec::new();
            for (k, l) in &lines {
                items.push(parse_statement(l, sig).map_err(|e| perr(*k, e.msg))?);
            }
            let p = ProgramList::new(items);
            validate_program_list(&p, sig).map_err(|e| AppError::Signature { line: n, msg: e.to_string() })?;
            sig.axiom_labels.push(label.clone());
            sig.false_programs.push((label, p));
            return Ok(());
        }
        let refs: Vec<(usize, &str)> = lines.iter().map(|(k, l)| (*k, l.as_str())).collect();
        let (premise, conclusion) = split_rule(&refs, sig)?;
        match conclusion {
            Some(c) => {
                store.insert(Iep { label: label.clone(), premise, conclusion: c, provenance: Provenance::Axiom }, sig)?;
            }
            None => sig.false_programs.push((label.clone(), premise)),
        }
        sig.axiom_labels.push(label);
        Ok(())
    }

    for (n, line) in content_lines(text) {
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or("");
        if SECTIONS.contains(&head) {
            flush(&mut block, &mut sig, &mut store)?;
            section = SECTIONS.iter().find(|s| **s == head).copied().unwrap();
            let args: Vec<&str> = words.collect();
            match head {
                "NAME" => sig.name = args.join(" "),
                "MACH" => {
                    let v = args
                        .iter()
                        .map(|a| a.parse::<u64>().map_err(|_| perr(n, format!("bad MACH value {a}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    if v.len() != 7 {
                        return Err(perr(n, "MACH takes msym mstr mnat nprem npmax nx ny").into());
                    }
                    sig.mach = MachineParams {
                        msym: v[0],
                        mstr: v[1],
                        mnat: v[2],
                        mlst: ListLimits { nprem: v[3] as usize, npmax: v[4] as usize, nx: v[5] as usize, ny: v[6] as usize },
                    };
                    sig.mach.check().map_err(|m| perr(n, m))?;
                }
                "AXIOM" | "FALSE" => {
                    let [label] = args.as_slice() else {
                        return Err(perr(n, format!("{head} takes one label")).into());
                    };
                    block = Some((n, label.to_string(), head == "FALSE", Vec::new()));
                }
                _ if !args.is_empty() => return Err(perr(n, format!("{head} takes no arguments")).into()),
                _ => {}
            }
            continue;
        }
        match section {
            "TYPES" => {
                let (name, parent) = match line.split_once('<') {
                    Some((a, b)) => (a.trim(), Some(b.trim())),
                    None => (line, None),
                };
                sig.add_type(name, parent).map_err(|e| sigerr(n, e))?;
            }
            "CONSTANTS" => {
                let (name, rest) = line.split_once('=').ok_or_else(|| perr(n, "expected name=value:type"))?;
                let (value, ty) = rest.split_once(':').ok_or_else(|| perr(n, "expected name=value:type"))?;
                sig.add_constant(name.trim(), value.trim(), ty.trim()).map_err(|e| sigerr(n, e))?;
            }
            "PROGRAMS" => {
                let decl = parse_program_decl(line, &sig, n)?;
                sig.add_program(decl).map_err(|e| sigerr(n, e))?;
            }
            "EQUALITY" => {
                let parts: Vec<&str> = line.split_whitespace().filter(|w| *w != "->").collect();
                let [ty, prog, kind] = parts.as_slice() else {
                    return Err(perr(n, "expected `type -> eqX equality|equivalence`").into());
                };
                let kind = match *kind {
                    "equality" => EqKind::Equality,
                    "equivalence" => EqKind::Equivalence,
                    k => return Err(perr(n, format!("bad kind {k}")).into()),
                };
                sig.set_equality(ty, prog, kind).map_err(|e| sigerr(n, e))?;
            }
            "TYPECHECK" => {
                let parts: Vec<&str> = line.split_whitespace().filter(|w| *w != "->").collect();
                let [ty, prog] = parts.as_slice() else {
                    return Err(perr(n, "expected `type -> typeX`").into());
                };
                sig.set_typecheck(ty, prog).map_err(|e| sigerr(n, e))?;
            }
            "COMPOUND" => parse_compound(line, &mut sig, n)?,
            "AXIOM" | "FALSE" => {
                if let Some(b) = block.as_mut() {
                    b.3.push((n, line.to_string()));
                }
            }
            _ => return Err(perr(n, "content outside of a section").into()),
        }
    }
    flush(&mut block, &mut sig, &mut store)?;
    sig.check().map_err(|e| sigerr(0, e))?;
    Ok((sig, store))
}

/// Serialize a signature and store back to application-file text.
pub fn print_application(sig: &AppSignature, store: &Store) -> String {
    let mut out = String::new();
    let m = &sig.mach;
    writeln!(out, "NAME {}", sig.name).unwrap();
    writeln!(
        out,
        "MACH {} {} {} {} {} {} {}",
        m.msym, m.mstr, m.mnat, m.mlst.nprem, m.mlst.npmax, m.mlst.nx, m.mlst.ny
    )
    .unwrap();
    out.push_str("TYPES\n");
    for t in &sig.types {
        match t.parent {
            Some(p) => writeln!(out, "{} < {}", t.name, sig.types[p].name).unwrap(),
            None => writeln!(out, "{}", t.name).unwrap(),
        }
    }
    out.push_str("CONSTANTS\n");
    for c in &sig.constants {
        writeln!(out, "{}={}:{}", c.name, c.value, sig.types[c.ty].name).unwrap();
    }
    out.push_str("PROGRAMS\n");
    let names = |ts: &[usize]| ts.iter().map(|&t| sig.types[t].name.clone()).collect::<Vec<_>>().join(",");
    for d in &sig.programs {
        let kind = match d.kind {
            ApKind::Fatm => "fatm",
            ApKind::Dsj => "dsj",
            ApKind::Cnj => "cnj",
        };
        let flag = if d.subst { "subst" } else { "nosubst" };
        writeln!(out, "{}({};{}) {kind} {flag}", d.name, names(&d.inputs), names(&d.outputs)).unwrap();
    }
    out.push_str("EQUALITY\n");
    for t in &sig.types {
        if let Some((pn, kind)) = t.eq {
            let k = if kind == EqKind::Equality { "equality" } else { "equivalence" };
            writeln!(out, "{} -> {} {k}", t.name, sig.programs[pn as usize - 1].name).unwrap();
        }
    }
    out.push_str("TYPECHECK\n");
    for t in &sig.types {
        if let Some(pn) = t.check {
            writeln!(out, "{} -> {}", t.name, sig.programs[pn as usize - 1].name).unwrap();
        }
    }
    out.push_str("COMPOUND\n");
    for d in &sig.programs {
        if let Some(b) = &d.body {
            let sep = if d.kind == ApKind::Dsj { " | " } else { " & " };
            let ops: Vec<String> = b.operands.iter().map(|o| sig.show(o)).collect();
            writeln!(out, "{} = {}", sig.show(&b.head), ops.join(sep)).unwrap();
        }
    }
    for label in &sig.axiom_labels {
        if let Some(iep) = store.get(label) {
            writeln!(out, "AXIOM {label}").unwrap();
            out.push_str(&print_program(&iep.premise, sig));
            writeln!(out, "-----\n{}", sig.show(&iep.conclusion)).unwrap();
        } else if let Some((_, p)) = sig.false_programs.iter().find(|(l, _)| l == label) {
            writeln!(out, "FALSE {label}").unwrap();
            out.push_str(&print_program(p, sig));
        }
    }
    out
}
