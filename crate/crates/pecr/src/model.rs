//! Labels, atomic programs, program lists, application signatures and the
//! structural checks on them.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::lists::{cap_lists, minus_lists, unique_list};

/// An I/O element label. Variables carry ids from 1; constants carry the
/// 1-based index of their declaration in the application signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Null,
    Var(u32),
    Const(u32),
}

impl Label {
    pub fn is_var(self) -> bool {
        matches!(self, Label::Var(_))
    }

    pub fn is_const(self) -> bool {
        matches!(self, Label::Const(_))
    }
}

/// Alphanumeric rendering of a variable id: a..z, a1..z1, a2..z2, ...
pub fn var_text(id: u32) -> String {
    assert!(id >= 1, "variable ids start at 1");
    let letter = (b'a' + ((id - 1) % 26) as u8) as char;
    let round = (id - 1) / 26;
    if round == 0 {
        letter.to_string()
    } else {
        format!("{letter}{round}")
    }
}

/// Inverse of [`var_text`].
pub fn parse_var(text: &str) -> Option<u32> {
    let mut chars = text.chars();
    let letter = chars.next()?;
    if !letter.is_ascii_lowercase() {
        return None;
    }
    let rest = chars.as_str();
    let round = if rest.is_empty() {
        0
    } else {
        if !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
            return None;
        }
        rest.parse::<u32>().ok()?
    };
    Some(round.checked_mul(26)?.checked_add(letter as u32 - 'a' as u32 + 1)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomicProgram {
    /// 1-based index into the signature's program table
    pub pn: u32,
    pub x: Vec<Label>,
    pub y: Vec<Label>,
}

impl AtomicProgram {
    pub fn new(pn: u32, x: Vec<Label>, y: Vec<Label>) -> Self {
        Self { pn, x, y }
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.x.iter().chain(self.y.iter()).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProgramList {
    pub items: Vec<AtomicProgram>,
}

impl ProgramList {
    pub fn new(items: Vec<AtomicProgram>) -> Self {
        Self { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// All input labels in item order (the unit-rank chain of inputs).
    pub fn inp(&self) -> Vec<Label> {
        self.items.iter().flat_map(|ap| ap.x.iter().copied()).collect()
    }

    pub fn outp(&self) -> Vec<Label> {
        self.items.iter().flat_map(|ap| ap.y.iter().copied()).collect()
    }

    pub fn concat(&self, c: &AtomicProgram) -> ProgramList {
        let mut items = self.items.clone();
        items.push(c.clone());
        ProgramList { items }
    }
}

impl From<Vec<AtomicProgram>> for ProgramList {
    fn from(items: Vec<AtomicProgram>) -> Self {
        Self { items }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListLimits {
    pub nprem: usize,
    pub npmax: usize,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineParams {
    pub msym: u64,
    pub mstr: u64,
    pub mnat: u64,
    pub mlst: ListLimits,
}

impl Default for MachineParams {
    fn default() -> Self {
        Self {
            msym: 128,
            mstr: 4096,
            mnat: 2_147_483_647,
            mlst: ListLimits { nprem: 9, npmax: 64, nx: 3, ny: 1 },
        }
    }
}

impl MachineParams {
    pub fn check(&self) -> Result<(), String> {
        let l = &self.mlst;
        if self.msym == 0 || self.mstr == 0 || self.mnat == 0 || l.nprem == 0 || l.npmax == 0 || l.nx == 0 || l.ny == 0 {
            return Err("machine parameters must all be at least 1".into());
        }
        if l.nprem > l.npmax {
            return Err(format!("nprem {} exceeds npmax {}", l.nprem, l.npmax));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqKind {
    Equality,
    Equivalence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApKind {
    Fatm,
    Dsj,
    Cnj,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub parent: Option<usize>,
    /// type-checking program
    pub check: Option<u32>,
    /// equality or equivalence program and its kind
    pub eq: Option<(u32, EqKind)>,
}

/// The defining operands of a disjunction or conjunction, written with the
/// head's own formal labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compound {
    pub head: AtomicProgram,
    pub operands: Vec<AtomicProgram>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramDecl {
    pub name: String,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub kind: ApKind,
    pub subst: bool,
    pub body: Option<Compound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: String,
    pub value: String,
    pub ty: usize,
}

/// Programs that may never be rewritten by the substitution rule.
pub const SUBST_INELIGIBLE: [&str; 5] = ["ext", "aext", "flse", "aflse", "ioeq"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppSignature {
    pub name: String,
    pub mach: MachineParams,
    pub types: Vec<TypeDecl>,
    pub constants: Vec<ConstDecl>,
    pub programs: Vec<ProgramDecl>,
    /// every axiom label in declaration order, falsity axioms included
    pub axiom_labels: Vec<String>,
    /// axioms of falsity: premise programs with no computable assignment
    pub false_programs: Vec<(String, ProgramList)>,
    by_name: HashMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate name {0}")]
    Duplicate(String),
    #[error("unknown type {0}")]
    UnknownType(String),
    #[error("unknown program {0}")]
    UnknownProgram(String),
    #[error("{0} cannot be substitution-eligible")]
    IneligibleSubst(String),
    #[error("{0}")]
    Machine(String),
}

impl AppSignature {
    pub fn new(name: impl Into<String>, mach: MachineParams) -> Self {
        Self {
            name: name.into(),
            mach,
            types: Vec::new(),
            constants: Vec::new(),
            programs: Vec::new(),
            axiom_labels: Vec::new(),
            false_programs: Vec::new(),
            by_name: HashMap::new(),
        }
    }

    pub fn add_type(&mut self, name: &str, parent: Option<&str>) -> Result<usize, SignatureError> {
        if self.type_id(name).is_some() {
            return Err(SignatureError::Duplicate(name.into()));
        }
        let parent = match parent {
            Some(p) => Some(self.type_id(p).ok_or_else(|| SignatureError::UnknownType(p.into()))?),
            None => None,
        };
        self.types.push(TypeDecl { name: name.into(), parent, check: None, eq: None });
        Ok(self.types.len() - 1)
    }

    pub fn add_constant(&mut self, name: &str, value: &str, ty: &str) -> Result<Label, SignatureError> {
        if self.constant(name).is_some() {
            return Err(SignatureError::Duplicate(name.into()));
        }
        let ty = self.type_id(ty).ok_or_else(|| SignatureError::UnknownType(ty.into()))?;
        self.constants.push(ConstDecl { name: name.into(), value: value.into(), ty });
        Ok(Label::Const(self.constants.len() as u32))
    }

    pub fn add_program(&mut self, decl: ProgramDecl) -> Result<u32, SignatureError> {
        if self.by_name.contains_key(&decl.name) {
            return Err(SignatureError::Duplicate(decl.name));
        }
        if decl.subst && SUBST_INELIGIBLE.contains(&decl.name.as_str()) {
            return Err(SignatureError::IneligibleSubst(decl.name));
        }
        self.programs.push(decl);
        let pn = self.programs.len() as u32;
        self.by_name.insert(self.programs[pn as usize - 1].name.clone(), pn);
        Ok(pn)
    }

    pub fn set_equality(&mut self, ty: &str, program: &str, kind: EqKind) -> Result<(), SignatureError> {
        let t = self.type_id(ty).ok_or_else(|| SignatureError::UnknownType(ty.into()))?;
        let pn = self.pn(program).ok_or_else(|| SignatureError::UnknownProgram(program.into()))?;
        self.types[t].eq = Some((pn, kind));
        Ok(())
    }

    pub fn set_typecheck(&mut self, ty: &str, program: &str) -> Result<(), SignatureError> {
        let t = self.type_id(ty).ok_or_else(|| SignatureError::UnknownType(ty.into()))?;
        let pn = self.pn(program).ok_or_else(|| SignatureError::UnknownProgram(program.into()))?;
        self.types[t].check = Some(pn);
        Ok(())
    }

    pub fn type_id(&self, name: &str) -> Option<usize> {
        self.types.iter().position(|t| t.name == name)
    }

    pub fn pn(&self, name: &str) -> Option<u32> {
        self.by_name.get(name).copied()
    }

    pub fn program(&self, pn: u32) -> Option<&ProgramDecl> {
        (pn as usize).checked_sub(1).and_then(|i| self.programs.get(i))
    }

    pub fn constant(&self, name: &str) -> Option<Label> {
        self.constants.iter().position(|c| c.name == name).map(|i| Label::Const(i as u32 + 1))
    }

    pub fn const_decl(&self, label: Label) -> Option<&ConstDecl> {
        match label {
            Label::Const(m) => (m as usize).checked_sub(1).and_then(|i| self.constants.get(i)),
            _ => None,
        }
    }

    /// `sub` equals `sup` or lies below it in the type hierarchy.
    pub fn is_subtype(&self, sub: usize, sup: usize) -> bool {
        let mut t = Some(sub);
        while let Some(cur) = t {
            if cur == sup {
                return true;
            }
            t = self.types[cur].parent;
        }
        false
    }

    /// Type of the i-th I/O slot (inputs first, then outputs).
    pub fn slot_type(&self, pn: u32, slot: usize) -> Option<usize> {
        let d = self.program(pn)?;
        if slot < d.inputs.len() {
            Some(d.inputs[slot])
        } else {
            d.outputs.get(slot - d.inputs.len()).copied()
        }
    }

    pub fn label_text(&self, label: Label) -> String {
        match label {
            Label::Null => "0".into(),
            Label::Var(id) => var_text(id),
            Label::Const(_) => self.const_decl(label).map(|c| c.name.clone()).unwrap_or_else(|| "?".into()),
        }
    }

    /// Constant names take precedence over the variable letter convention.
    pub fn parse_label(&self, token: &str) -> Option<Label> {
        self.constant(token).or_else(|| parse_var(token).map(Label::Var))
    }

    pub fn show(&self, ap: &AtomicProgram) -> String {
        let name = self.program(ap.pn).map(|d| d.name.as_str()).unwrap_or("?");
        let x: Vec<String> = ap.x.iter().map(|&l| self.label_text(l)).collect();
        let y: Vec<String> = ap.y.iter().map(|&l| self.label_text(l)).collect();
        format!("{name} [{}] [{}]", x.join(" "), y.join(" "))
    }

    pub fn check(&self) -> Result<(), SignatureError> {
        self.mach.check().map_err(SignatureError::Machine)?;
        for d in &self.programs {
            if d.subst && SUBST_INELIGIBLE.contains(&d.name.as_str()) {
                return Err(SignatureError::IneligibleSubst(d.name.clone()));
            }
        }
        for t in &self.types {
            for pn in t.check.iter().chain(t.eq.as_ref().map(|e| &e.0)) {
                if self.program(*pn).is_none() {
                    return Err(SignatureError::UnknownProgram(format!("#{pn}")));
                }
            }
        }
        Ok(())
    }
}

/// A violated structural condition. Item indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("item {item}: unknown program id {pn}")]
    UnknownProgram { item: usize, pn: u32 },
    #[error("item {item}: arity [{got_x} {got_y}] does not match declared [{want_x} {want_y}]")]
    Arity { item: usize, got_x: usize, got_y: usize, want_x: usize, want_y: usize },
    #[error("item {item}: arity exceeds nx={nx} ny={ny}")]
    ArityBound { item: usize, nx: usize, ny: usize },
    #[error("item {item}: input is neither a variable nor a constant")]
    BadInput { item: usize },
    #[error("item {item}: output is not a variable")]
    OutputNotVariable { item: usize },
    #[error("item {item}: cap[x y] nonempty")]
    InputIsOutput { item: usize },
    #[error("item {item}: y not unique")]
    OutputRepeated { item: usize },
    #[error("item {item}: constant of type {found} in slot of type {slot}")]
    ConstantType { item: usize, found: String, slot: String },
    #[error("item {item}: duplicate output label {label} (first at item {first})")]
    DuplicateOutput { item: usize, first: usize, label: String },
    #[error("item {item}: input {label} equals later output of item {later}")]
    InputFromLater { item: usize, later: usize, label: String },
    #[error("program length {len} exceeds npmax {npmax}")]
    TooLong { len: usize, npmax: usize },
}

pub fn validate_atomic(ap: &AtomicProgram, sig: &AppSignature) -> Result<(), Violation> {
    validate_atomic_at(ap, sig, 1)
}

fn validate_atomic_at(ap: &AtomicProgram, sig: &AppSignature, item: usize) -> Result<(), Violation> {
    let decl = sig.program(ap.pn).ok_or(Violation::UnknownProgram { item, pn: ap.pn })?;
    let lim = sig.mach.mlst;
    if ap.x.len() > lim.nx || ap.y.len() > lim.ny {
        return Err(Violation::ArityBound { item, nx: lim.nx, ny: lim.ny });
    }
    if ap.x.len() != decl.inputs.len() || ap.y.len() != decl.outputs.len() {
        return Err(Violation::Arity {
            item,
            got_x: ap.x.len(),
            got_y: ap.y.len(),
            want_x: decl.inputs.len(),
            want_y: decl.outputs.len(),
        });
    }
    for (i, &l) in ap.x.iter().enumerate() {
        match l {
            Label::Null => return Err(Violation::BadInput { item }),
            Label::Const(_) => {
                let c = sig.const_decl(l).ok_or(Violation::BadInput { item })?;
                if !sig.is_subtype(c.ty, decl.inputs[i]) {
                    return Err(Violation::ConstantType {
                        item,
                        found: sig.types[c.ty].name.clone(),
                        slot: sig.types[decl.inputs[i]].name.clone(),
                    });
                }
            }
            Label::Var(_) => {}
        }
    }
    if ap.y.iter().any(|l| !l.is_var()) {
        return Err(Violation::OutputNotVariable { item });
    }
    if !cap_lists(&ap.x, &ap.y).is_empty() {
        return Err(Violation::InputIsOutput { item });
    }
    if unique_list(&ap.y).len() != ap.y.len() {
        return Err(Violation::OutputRepeated { item });
    }
    Ok(())
}

pub fn validate_program_list(p: &ProgramList, sig: &AppSignature) -> Result<(), Violation> {
    validate_program_list_bounded(p, sig, Some(sig.mach.mlst.npmax))
}

/// As [`validate_program_list`] with an explicit length bound (`None` disables it).
pub fn validate_program_list_bounded(
    p: &ProgramList,
    sig: &AppSignature,
    npmax: Option<usize>,
) -> Result<(), Violation> {
    if let Some(npmax) = npmax {
        if p.len() > npmax {
            return Err(Violation::TooLong { len: p.len(), npmax });
        }
    }
    let mut first_out: HashMap<Label, usize> = HashMap::new();
    for (m, ap) in p.items.iter().enumerate() {
        validate_atomic_at(ap, sig, m + 1)?;
        for &l in &ap.y {
            if let Some(&first) = first_out.get(&l) {
                return Err(Violation::DuplicateOutput { item: m + 1, first, label: sig.label_text(l) });
            }
            first_out.insert(l, m + 1);
        }
    }
    for (m, ap) in p.items.iter().enumerate() {
        for &l in &ap.x {
            if let Some(&k) = first_out.get(&l) {
                if k >= m + 1 {
                    return Err(Violation::InputFromLater { item: m + 1, later: k, label: sig.label_text(l) });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BindingProfile {
    pub inp: Vec<Label>,
    pub outp: Vec<Label>,
    pub lio: Vec<Label>,
    pub pil: Vec<Label>,
    pub free: Vec<Label>,
    pub pol: Vec<Label>,
}

pub fn binding_profile(p: &ProgramList) -> BindingProfile {
    let inp = p.inp();
    let outp = p.outp();
    let mut all = inp.clone();
    all.extend_from_slice(&outp);
    let lio = unique_list(&all);
    let pil = unique_list(&minus_lists(&inp, &outp));
    let free: Vec<Label> = pil.iter().copied().filter(|l| !l.is_const()).collect();
    let pol = minus_lists(&outp, &inp);
    BindingProfile { inp, outp, lio, pil, free, pol }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Null => write!(f, "0"),
            Label::Var(id) => write!(f, "{}", var_text(*id)),
            Label::Const(m) => write!(f, "{m}*"),
        }
    }
}
