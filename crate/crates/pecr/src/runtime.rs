//! Concrete execution of zero-order program lists and randomized soundness
//! probes built on it.
//!
//! A program list runs item by item. Each atomic program checks the types of
//! its inputs, then either checks its relation or computes its outputs. The
//! first failure stops the run. Disjunctions succeed through the first
//! operand that succeeds; conjunctions run their operands in order.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynsys::{bound_range, step, BoxRegion, MapSpec};
use crate::kernel::Iep;
use crate::lists::sublst;
use crate::matrix::ioeq_check;
use crate::model::{binding_profile, validate_program_list_bounded, ApKind, AppSignature, AtomicProgram, Label, ProgramList};
use crate::proofio::parse_program;

/// A rectangular array of machine numbers stored in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Array {
    pub dims: Vec<usize>,
    pub cells: Vec<u64>,
}

impl Array {
    pub fn vector(cells: Vec<u64>) -> Self {
        Self { dims: vec![cells.len()], cells }
    }

    fn cellwise(&self, other: &Array, rel: impl Fn(u64, u64) -> bool) -> bool {
        self.dims == other.dims && self.cells.iter().zip(&other.cells).all(|(&x, &y)| rel(x, y))
    }

    pub fn eqa(&self, other: &Array) -> bool {
        self.cellwise(other, |x, y| x == y)
    }

    pub fn lta(&self, other: &Array) -> bool {
        self.cellwise(other, |x, y| x < y)
    }

    pub fn lea(&self, other: &Array) -> bool {
        self.cellwise(other, |x, y| x <= y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Nat(u64),
    Arr(Array),
    /// lower and upper bound of the same shape
    Box(Array, Array),
    Prog(ProgramList),
}

pub type ValueAssignment = BTreeMap<Label, Value>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Computable,
    Error { item: usize, cause: String },
    BudgetExhausted { item: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionOutcome {
    pub status: Status,
    /// values of the primary outputs; empty unless computable
    pub outputs: ValueAssignment,
    pub steps: u64,
}

impl ExecutionOutcome {
    pub fn computable(&self) -> bool {
        self.status == Status::Computable
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("no value for free label {0}")]
    Missing(String),
    #[error("value given for {0}, which is not a free label")]
    Extra(String),
    #[error("{0} has no decision procedure")]
    NotExecutable(String),
    #[error("{0} needs a map for f")]
    NoMap(String),
    #[error("program values need an object application")]
    NoObject,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// What a failing item reports; turned into [`Status`] by the caller.
enum Fail {
    Error(String),
    Budget,
}

type Run<T> = Result<T, Fail>;

fn fail<T>(msg: impl Into<String>) -> Run<T> {
    Err(Fail::Error(msg.into()))
}

pub struct Evaluator<'a> {
    pub sig: &'a AppSignature,
    /// the map behind `f`, `itf` and `bndf`
    pub map: Option<&'a dyn MapSpec<u64>>,
    /// the application whose programs are the values of `prgm` labels
    pub object: Option<&'a AppSignature>,
    pub budget: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(sig: &'a AppSignature) -> Self {
        Self { sig, map: None, object: None, budget: DEFAULT_BUDGET }
    }

    pub fn with_map(mut self, map: &'a dyn MapSpec<u64>) -> Self {
        self.map = Some(map);
        self
    }

    pub fn with_object(mut self, object: &'a AppSignature) -> Self {
        self.object = Some(object);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn name(&self, pn: u32) -> &str {
        self.sig.program(pn).map_or("?", |d| d.name.as_str())
    }

    /// Programs that cannot run at all under this evaluator.
    pub fn executable(&self, p: &ProgramList) -> Result<(), RuntimeError> {
        for ap in &p.items {
            self.executable_ap(ap)?;
        }
        Ok(())
    }

    fn executable_ap(&self, ap: &AtomicProgram) -> Result<(), RuntimeError> {
        let name = self.name(ap.pn);
        let decl = self.sig.program(ap.pn).ok_or_else(|| RuntimeError::NotExecutable(name.into()))?;
        if let Some(body) = &decl.body {
            return body.operands.iter().try_for_each(|op| self.executable_ap(op));
        }
        match name {
            "ext" | "aext" | "flse" | "aflse" | "disj" | "conj" => Err(RuntimeError::NotExecutable(name.into())),
            "f" | "itf" | "bndf" if self.map.is_none() => Err(RuntimeError::NoMap(name.into())),
            "typep" | "typeap" | "sub" | "equiv" | "conc" | "ioeq" if self.object.is_none() => Err(RuntimeError::NoObject),
            n if BUILTIN.contains(&n) => Ok(()),
            _ => Err(RuntimeError::NotExecutable(name.into())),
        }
    }

    /// Run `p` on a value assignment of exactly its free labels.
    pub fn execute(&self, p: &ProgramList, va: &ValueAssignment) -> Result<ExecutionOutcome, RuntimeError> {
        self.executable(p)?;
        let profile = binding_profile(p);
        for l in &profile.free {
            if !va.contains_key(l) {
                return Err(RuntimeError::Missing(self.sig.label_text(*l)));
            }
        }
        if let Some(l) = va.keys().find(|l| !profile.free.contains(l)) {
            return Err(RuntimeError::Extra(self.sig.label_text(*l)));
        }
        let mut env = va.clone();
        let mut steps = 0;
        for (i, ap) in p.items.iter().enumerate() {
            if let Err(f) = self.run_ap(ap, &mut env, &mut steps) {
                let status = match f {
                    Fail::Error(cause) => Status::Error { item: i + 1, cause },
                    Fail::Budget => Status::BudgetExhausted { item: i + 1 },
                };
                return Ok(ExecutionOutcome { status, outputs: ValueAssignment::new(), steps });
            }
        }
        let outputs = profile.pol.iter().filter_map(|l| env.get(l).map(|v| (*l, v.clone()))).collect();
        Ok(ExecutionOutcome { status: Status::Computable, outputs, steps })
    }

    fn tick(&self, steps: &mut u64) -> Run<()> {
        if *steps >= self.budget {
            return Err(Fail::Budget);
        }
        *steps += 1;
        Ok(())
    }

    fn constant(&self, l: Label) -> Run<Value> {
        let Some(c) = self.sig.const_decl(l) else {
            return fail("unknown constant");
        };
        let ty = self.sig.types[c.ty].name.as_str();
        match (ty, c.value.as_str()) {
            (_, "mnat") => Ok(Value::Nat(self.sig.mach.mnat)),
            ("prgm" | "atm", text) => {
                let obj = self.object.ok_or(Fail::Error("no object application".into()))?;
                let text = text.trim_start_matches('[').trim_end_matches(']');
                parse_program(&text.replace(';', "\n"), obj).map(Value::Prog).or_else(|e| fail(e.to_string()))
            }
            (_, text) => text.parse().map(Value::Nat).or_else(|_| fail(format!("constant {} has no value", c.name))),
        }
    }

    fn input(&self, l: Label, env: &ValueAssignment) -> Run<Value> {
        if l.is_const() {
            return self.constant(l);
        }
        env.get(&l).cloned().ok_or_else(|| Fail::Error(format!("{} unassigned", self.sig.label_text(l))))
    }

    fn type_ok(&self, ty: usize, v: &Value) -> bool {
        let mnat = self.sig.mach.mnat;
        match (self.sig.types[ty].name.as_str(), v) {
            ("nat", Value::Nat(n)) => *n <= mnat,
            ("arr", Value::Arr(a)) => a.cells.iter().all(|&c| c <= mnat),
            ("box", Value::Box(a, b)) => a.lea(b) && b.cells.iter().all(|&c| c <= mnat),
            ("prgm", Value::Prog(p)) => self.valid_program(p),
            ("atm", Value::Prog(p)) => p.len() == 1 && self.valid_program(p),
            _ => false,
        }
    }

    fn valid_program(&self, p: &ProgramList) -> bool {
        self.object.is_some_and(|o| validate_program_list_bounded(p, o, Some(o.mach.mlst.npmax)).is_ok())
    }

    fn run_ap(&self, ap: &AtomicProgram, env: &mut ValueAssignment, steps: &mut u64) -> Run<()> {
        self.tick(steps)?;
        let decl = self.sig.program(ap.pn).expect("validated program");
        let mut xs = Vec::with_capacity(ap.x.len());
        for (slot, &l) in ap.x.iter().enumerate() {
            let v = self.input(l, env)?;
            if !self.type_ok(decl.inputs[slot], &v) {
                return fail(format!("{} is not of type {}", self.sig.label_text(l), self.sig.types[decl.inputs[slot]].name));
            }
            xs.push(v);
        }
        let ys = match (&decl.body, decl.kind) {
            (Some(body), ApKind::Dsj) => self.run_disjunction(body, &xs, steps)?,
            (Some(body), _) => self.run_conjunction(&body.operands, &body.head, &xs, steps)?,
            (None, _) => self.run_builtin(&decl.name, &xs, steps)?,
        };
        if ys.len() != ap.y.len() {
            return fail(format!("{} produced {} outputs", decl.name, ys.len()));
        }
        for (&l, v) in ap.y.iter().zip(ys) {
            env.insert(l, v);
        }
        Ok(())
    }

    fn bind_head(head: &AtomicProgram, xs: &[Value]) -> ValueAssignment {
        head.x.iter().copied().filter(|l| !l.is_const()).zip(xs.iter().cloned()).collect()
    }

    fn head_outputs(&self, head: &AtomicProgram, local: &ValueAssignment) -> Run<Vec<Value>> {
        head.y
            .iter()
            .map(|l| local.get(l).cloned().ok_or_else(|| Fail::Error(format!("{} not produced", self.sig.label_text(*l)))))
            .collect()
    }

    fn run_conjunction(&self, ops: &[AtomicProgram], head: &AtomicProgram, xs: &[Value], steps: &mut u64) -> Run<Vec<Value>> {
        let mut local = Self::bind_head(head, xs);
        for op in ops {
            self.run_ap(op, &mut local, steps)?;
        }
        self.head_outputs(head, &local)
    }

    fn run_disjunction(&self, body: &crate::model::Compound, xs: &[Value], steps: &mut u64) -> Run<Vec<Value>> {
        let mut causes = Vec::new();
        for op in &body.operands {
            match self.run_conjunction(std::slice::from_ref(op), &body.head, xs, steps) {
                Ok(ys) => return Ok(ys),
                Err(Fail::Budget) => return Err(Fail::Budget),
                Err(Fail::Error(c)) => causes.push(c),
            }
        }
        fail(format!("no operand computable ({})", causes.join("; ")))
    }

    fn check(&self, ok: bool, what: &str) -> Run<Vec<Value>> {
        if ok {
            Ok(Vec::new())
        } else {
            fail(format!("{what} does not hold"))
        }
    }

    fn mapped(&self, u: &Array, t: u64) -> Run<Array> {
        let map = self.map.ok_or(Fail::Error("no map".into()))?;
        let cells = step(map, &u.cells, self.sig.mach.mnat, t).or_else(|e| fail(e.to_string()))?;
        Ok(Array { dims: u.dims.clone(), cells })
    }

    fn run_builtin(&self, name: &str, xs: &[Value], steps: &mut u64) -> Run<Vec<Value>> {
        use Value::*;
        match (name, xs) {
            ("typen" | "typea" | "typebx" | "typep" | "typeap", [_]) => Ok(Vec::new()),
            ("eqn", [Nat(a), Nat(b)]) => self.check(a == b, "eqn"),
            ("lt", [Nat(a), Nat(b)]) => self.check(a < b, "lt"),
            ("eqa", [Arr(a), Arr(b)]) => self.check(a.eqa(b), "eqa"),
            ("lta", [Arr(a), Arr(b)]) => self.check(a.lta(b), "lta"),
            ("lea", [Arr(a), Arr(b)]) => self.check(a.lea(b), "lea"),
            ("eqbx", [Box(a, b), Box(c, d)]) => self.check(a.eqa(c) && b.eqa(d), "eqbx"),
            ("eltbx", [Arr(u), Box(a, b)]) => self.check(a.lea(u) && u.lea(b), "eltbx"),
            ("subbx", [Box(qa, qb), Box(pa, pb)]) => self.check(pa.lea(qa) && qb.lea(pb), "subbx"),
            ("lbx", [Box(a, _)]) => Ok(vec![Arr(a.clone())]),
            ("ubx", [Box(_, b)]) => Ok(vec![Arr(b.clone())]),
            ("box", [Arr(a), Arr(b)]) => {
                if a.lea(b) {
                    Ok(vec![Box(a.clone(), b.clone())])
                } else {
                    fail("box bounds are not ordered")
                }
            }
            ("f", [Arr(u)]) => Ok(vec![Arr(self.mapped(u, 1)?)]),
            ("itf", [Arr(u), Nat(n)]) => {
                let mut w = u.clone();
                for t in 1..=*n {
                    self.tick(steps)?;
                    w = self.mapped(&w, t)?;
                }
                Ok(vec![Arr(w)])
            }
            ("bndf", [Box(a, b)]) => {
                let map = self.map.ok_or(Fail::Error("no map".into()))?;
                let p = BoxRegion { a: a.cells.clone(), b: b.cells.clone() };
                let q = bound_range(map, &p, self.sig.mach.mnat).or_else(|e| fail(e.to_string()))?;
                let shape = |cells| Array { dims: a.dims.clone(), cells };
                Ok(vec![Box(shape(q.a), shape(q.b))])
            }
            ("sub", [Prog(a), Prog(b)]) => self.check(sublst(&a.items, &b.items), "sub"),
            ("equiv", [Prog(a), Prog(b)]) => {
                self.check(sublst(&a.items, &b.items) && sublst(&b.items, &a.items), "equiv")
            }
            ("conc", [Prog(a), Prog(b)]) => {
                let c = ProgramList::new(a.items.iter().chain(&b.items).cloned().collect());
                if self.valid_program(&c) {
                    Ok(vec![Prog(c)])
                } else {
                    fail("concatenation is not a valid program list")
                }
            }
            ("ioeq", [Prog(a), Prog(b)]) => self.check(ioeq_check(a, b).is_some(), "ioeq"),
            _ => fail(format!("{name}: unexpected input values")),
        }
    }
}

const BUILTIN: [&str; 23] = [
    "typen", "eqn", "lt", "typea", "eqa", "lta", "lea", "typebx", "eqbx", "eltbx", "subbx", "lbx", "ubx", "box",
    "f", "itf", "bndf", "typep", "typeap", "sub", "equiv", "conc", "ioeq",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct VaParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Nested {
    Num(u64),
    List(Vec<Nested>),
}

fn parse_nested(text: &str) -> Result<Nested, String> {
    let mut stack: Vec<Vec<Nested>> = Vec::new();
    let mut done: Option<Nested> = None;
    let spaced = text.replace('[', " [ ").replace(']', " ] ");
    for tok in spaced.split_whitespace() {
        if done.is_some() {
            return Err("trailing tokens".into());
        }
        let item = match tok {
            "[" => {
                stack.push(Vec::new());
                continue;
            }
            "]" => Nested::List(stack.pop().ok_or("unbalanced ]")?),
            n => Nested::Num(n.parse().map_err(|_| format!("bad number {n}"))?),
        };
        match stack.last_mut() {
            Some(top) => top.push(item),
            None => done = Some(item),
        }
    }
    if !stack.is_empty() {
        return Err("unclosed [".into());
    }
    done.ok_or_else(|| "empty value".into())
}

fn to_array(n: &Nested) -> Result<Array, String> {
    match n {
        Nested::Num(_) => Err("expected a bracketed array".into()),
        Nested::List(items) => {
            if items.iter().all(|i| matches!(i, Nested::Num(_))) {
                let cells = items.iter().map(|i| if let Nested::Num(v) = i { *v } else { 0 }).collect();
                return Ok(Array::vector(cells));
            }
            let subs = items.iter().map(to_array).collect::<Result<Vec<_>, _>>()?;
            let dims = subs.first().map(|s| s.dims.clone()).unwrap_or_default();
            if subs.iter().any(|s| s.dims != dims) {
                return Err("ragged array".into());
            }
            let mut out = Array { dims: vec![subs.len()], cells: Vec::new() };
            out.dims.extend(dims);
            for s in subs {
                out.cells.extend(s.cells);
            }
            Ok(out)
        }
    }
}

/// Parse a value of the named type.
pub fn parse_value(text: &str, ty: &str, object: Option<&AppSignature>) -> Result<Value, String> {
    match ty {
        "nat" => text.trim().parse().map(Value::Nat).map_err(|_| format!("bad number {text}")),
        "arr" => to_array(&parse_nested(text)?).map(Value::Arr),
        "box" => match parse_nested(text)? {
            Nested::List(v) if v.len() == 2 => Ok(Value::Box(to_array(&v[0])?, to_array(&v[1])?)),
            _ => Err("a box is written [lower upper]".into()),
        },
        "prgm" | "atm" => {
            let obj = object.ok_or("program values need an object application")?;
            let inner = text.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or("programs are written {ap; ap}")?;
            parse_program(&inner.replace(';', "\n"), obj).map(Value::Prog).map_err(|e| e.to_string())
        }
        _ => Err(format!("type {ty} has no value syntax")),
    }
}

fn format_array(a: &Array) -> String {
    fn rec(dims: &[usize], cells: &[u64]) -> String {
        match dims {
            [] | [_] => format!("[{}]", cells.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            [n, rest @ ..] => {
                let stride = cells.len() / n.max(&1);
                let parts: Vec<String> = (0..*n).map(|i| rec(rest, &cells[i * stride..(i + 1) * stride])).collect();
                format!("[{}]", parts.join(" "))
            }
        }
    }
    rec(&a.dims, &a.cells)
}

pub fn format_value(v: &Value, object: Option<&AppSignature>) -> String {
    match v {
        Value::Nat(n) => n.to_string(),
        Value::Arr(a) => format_array(a),
        Value::Box(a, b) => format!("[{} {}]", format_array(a), format_array(b)),
        Value::Prog(p) => {
            let items: Vec<String> = match object {
                Some(o) => p.items.iter().map(|ap| o.show(ap)).collect(),
                None => p.items.iter().map(|ap| format!("{ap:?}")).collect(),
            };
            format!("{{{}}}", items.join("; "))
        }
    }
}

/// Type of the first slot where `l` appears in `p`.
pub fn label_type(p: &ProgramList, l: Label, sig: &AppSignature) -> Option<usize> {
    p.items.iter().find_map(|ap| ap.labels().position(|m| m == l).and_then(|slot| sig.slot_type(ap.pn, slot)))
}

/// `label = value` lines for the free labels of `p`; `#` starts a comment.
pub fn parse_va(
    text: &str,
    p: &ProgramList,
    sig: &AppSignature,
    object: Option<&AppSignature>,
) -> Result<ValueAssignment, VaParseError> {
    let mut va = ValueAssignment::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |msg: String| VaParseError { line: i + 1, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, value) = line.split_once('=').ok_or_else(|| err("expected `label = value`".into()))?;
        let name = name.trim();
        let l = sig.parse_label(name).ok_or_else(|| err(format!("bad label {name}")))?;
        let ty = label_type(p, l, sig).ok_or_else(|| err(format!("{name} does not occur in the program")))?;
        let v = parse_value(value, &sig.types[ty].name, object).map_err(err)?;
        if va.insert(l, v).is_some() {
            return Err(err(format!("{name} assigned twice")));
        }
    }
    Ok(va)
}

pub fn format_va(va: &ValueAssignment, sig: &AppSignature, object: Option<&AppSignature>) -> String {
    va.iter().map(|(l, v)| format!("{} = {}\n", sig.label_text(*l), format_value(v, object))).collect()
}

/// How random values are drawn.
#[derive(Debug, Clone)]
pub struct Sampler {
    /// scalars are drawn from `0..=max_nat`
    pub max_nat: u64,
    /// array cells are drawn from `0..=max_cell`
    pub max_cell: u64,
    /// one shape is picked per assignment and shared by every array and box
    pub shapes: Vec<Vec<usize>>,
}

impl Default for Sampler {
    fn default() -> Self {
        Self { max_nat: 10, max_cell: 4, shapes: vec![vec![1], vec![2], vec![2, 2]] }
    }
}

impl Sampler {
    fn array(&self, dims: &[usize], rng: &mut impl Rng) -> Array {
        let n = dims.iter().product();
        Array { dims: dims.to_vec(), cells: (0..n).map(|_| rng.gen_range(0..=self.max_cell)).collect() }
    }

    pub fn value(&self, ty: &str, dims: &[usize], rng: &mut impl Rng) -> Option<Value> {
        Some(match ty {
            "nat" => Value::Nat(rng.gen_range(0..=self.max_nat)),
            "arr" => Value::Arr(self.array(dims, rng)),
            "box" => {
                let a = self.array(dims, rng);
                let b = Array {
                    dims: a.dims.clone(),
                    cells: a.cells.iter().map(|&x| rng.gen_range(x..=self.max_cell.max(x))).collect(),
                };
                Value::Box(a, b)
            }
            _ => return None,
        })
    }

    /// A random assignment of the free labels of `p`.
    pub fn assignment(&self, p: &ProgramList, sig: &AppSignature, rng: &mut impl Rng) -> Option<ValueAssignment> {
        let dims = self.shapes.choose(rng).cloned().unwrap_or_else(|| vec![1]);
        binding_profile(p)
            .free
            .iter()
            .map(|&l| {
                let ty = label_type(p, l, sig)?;
                Some((l, self.value(&sig.types[ty].name, &dims, rng)?))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProbeStats {
    pub trials: u64,
    pub premise_ok: u64,
    pub both_ok: u64,
    pub violations: u64,
}

impl fmt::Display for ProbeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trials={} premise_ok={} both_ok={} violations={}", self.trials, self.premise_ok, self.both_ok, self.violations)
    }
}

impl ProbeStats {
    fn record(&mut self, premise: bool, both: bool) {
        self.trials += 1;
        self.premise_ok += premise as u64;
        self.both_ok += both as u64;
        self.violations += (premise && !both) as u64;
    }
}

impl Evaluator<'_> {
    /// Run the premise and premise+conclusion on one assignment.
    pub fn probe_once(&self, rule: &Iep, va: &ValueAssignment) -> Result<(bool, bool), RuntimeError> {
        let premise_ok = self.execute(&rule.premise, va)?.computable();
        // the conclusion only reads premise labels, so both lists share free labels
        let both_ok = self.execute(&rule.premise.concat(&rule.conclusion), va)?.computable();
        Ok((premise_ok, both_ok))
    }

    /// Random-assignment soundness check: a computable premise must stay
    /// computable once the conclusion is appended.
    pub fn soundness_probe(&self, rule: &Iep, trials: u64, seed: u64, sampler: &Sampler) -> Result<ProbeStats, RuntimeError> {
        self.executable(&rule.premise.concat(&rule.conclusion))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stats = ProbeStats::default();
        for _ in 0..trials {
            let va = sampler
                .assignment(&rule.premise, self.sig, &mut rng)
                .ok_or_else(|| RuntimeError::NotExecutable("a free label type".into()))?;
            let (p, b) = self.probe_once(rule, &va)?;
            stats.record(p, b);
        }
        Ok(stats)
    }

    /// Every assignment of `0..=max` to the free labels, when all of them are
    /// scalars. `None` if some free label is not a scalar.
    pub fn exhaustive_probe(&self, rule: &Iep, max: u64) -> Result<Option<ProbeStats>, RuntimeError> {
        self.executable(&rule.premise.concat(&rule.conclusion))?;
        let free = binding_profile(&rule.premise).free;
        let nat = self.sig.type_id("nat");
        if free.iter().any(|&l| label_type(&rule.premise, l, self.sig) != nat || nat.is_none()) {
            return Ok(None);
        }
        let mut stats = ProbeStats::default();
        let mut digits = vec![0u64; free.len()];
        loop {
            let va = free.iter().zip(&digits).map(|(&l, &d)| (l, Value::Nat(d))).collect();
            let (p, b) = self.probe_once(rule, &va)?;
            stats.record(p, b);
            let Some(i) = digits.iter().rposition(|&d| d < max) else {
                return Ok(Some(stats));
            };
            digits[i] += 1;
            digits[i + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
}
