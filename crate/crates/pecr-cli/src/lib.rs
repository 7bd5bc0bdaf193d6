//! Command implementations behind the `pecr` binary.
//!
//! Each command writes its report to `out` and returns the process exit
//! code. Input files are read from disk; a bare corpus file name such as
//! `thm2.proof` falls back to the copy bundled with the `nat` or `pecr`
//! application.

use std::collections::HashMap;
use std::fmt::Display;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pecr::apps;
use pecr::dynsys::{bound_range, certify_axc, detect_cycle, iterate, AxcRefusal, BoxRegion, MapRegistry, MapSpec};
use pecr::kernel::{irreducibility, Irreducibility, IRREDUCIBILITY_BOUND};
use pecr::matrix::{arity_bounds, decompose_io_matrix, encode_program, format_matrix, ioeq_check, LabelMap};
use pecr::proofio::{
    default_rule_ids, export_proof_matrix, parse_application, parse_program, parse_rule_ids, print_proof,
    reduce_connection_lists, ExportLayout,
};
use pecr::prover::{prove, ProveError, ProverConfig};
use pecr::runtime::{format_va, parse_va, Evaluator, Status, DEFAULT_BUDGET};
use pecr::{check_proof, check_theorem, parse_proof, parse_theorem, AppSignature, Store};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// A failure that ends the command with `code`.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl Failure {
    fn parse(msg: impl Display) -> Self {
        Self { code: EXIT_PARSE, msg: msg.to_string() }
    }
}

pub type CmdResult = Result<i32, Failure>;

#[derive(Parser, Debug)]
#[command(name = "pecr", version, about = "Check, search and run programs of the program-extension logic")]
pub struct Cli {
    /// override machine limits: msym,mstr,mnat
    #[arg(long, global = true, value_name = "MSYM,MSTR,MNAT")]
    pub mach: Option<String>,
    /// override list limits: nprem,npmax,nx,ny
    #[arg(long, global = true, value_name = "NPREM,NPMAX,NX,NY")]
    pub mlst: Option<String>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check proofs in order; each accepted theorem can be cited by later ones.
    /// With no files, checks the bundled corpus of the application.
    Check {
        app: String,
        files: Vec<String>,
    },
    /// Search for a proof of a theorem statement.
    Prove {
        app: String,
        thm: String,
        /// checked proofs to add to the store first (statement read from the sibling .thm)
        #[arg(long = "lemma")]
        lemmas: Vec<String>,
        /// add the bundled corpus theorems numbered below the target
        #[arg(long)]
        corpus_lemmas: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the connection-list reduction trace of a proof.
    Reduce { app: String, proof: String },
    /// Print the integer matrix of a program, or of a proof with --proof.
    Encode {
        app: String,
        file: String,
        #[arg(long)]
        proof: bool,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
        /// clist columns of a proof matrix
        #[arg(long, default_value_t = 6)]
        nclist: usize,
        /// `label id` lines for the proof matrix rule column
        #[arg(long)]
        rule_ids: Option<String>,
    },
    /// Split the I/O matrix of a program into one matrix per label.
    Decompose { app: String, file: String },
    /// Decide ioeq[q p]: q preserves every binding of p.
    Ioeq { app: String, q: String, p: String },
    /// Execute a program on a value assignment.
    Run {
        app: String,
        program: String,
        va: String,
        /// application whose programs are the values of prgm labels
        #[arg(long)]
        object: Option<String>,
        /// map behind f, itf and bndf: tent, identity, constant, involution, shift
        #[arg(long = "map")]
        map_name: Option<String>,
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Fully discrete dynamical systems.
    Dyn {
        #[arg(value_enum)]
        action: DynAction,
        /// tent, identity, constant, involution, shift
        #[arg(default_value = "tent")]
        map_name: String,
        #[command(flatten)]
        map: MapArgs,
        /// initial state, comma separated
        #[arg(long, value_name = "U")]
        u0: Option<String>,
        #[arg(long, default_value_t = 1)]
        steps: u64,
        /// print a `t value...` line every k steps
        #[arg(long)]
        every: Option<u64>,
        /// box lower corner, comma separated
        #[arg(long)]
        lo: Option<String>,
        /// box upper corner, comma separated
        #[arg(long)]
        hi: Option<String>,
        /// steps to look ahead for a cycle
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// search rounds
    #[arg(long, default_value_t = ProverConfig::default().depth)]
    pub depth: usize,
    /// derived statements
    #[arg(long, default_value_t = ProverConfig::default().facts)]
    pub facts: usize,
    /// seconds
    #[arg(long, default_value_t = ProverConfig::default().time.as_secs_f64())]
    pub time: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SearchArgs {
    pub fn config(&self) -> ProverConfig {
        ProverConfig { depth: self.depth, facts: self.facts, time: Duration::from_secs_f64(self.time), seed: self.seed }
    }
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// the size parameter of tent and involution
    #[arg(long = "N")]
    pub n: Option<u64>,
    /// further map parameters
    #[arg(long = "param")]
    pub params: Vec<u64>,
}

impl MapArgs {
    fn make(&self, name: &str) -> Result<Box<dyn MapSpec<u64>>, Failure> {
        let params: Vec<u64> = self.n.iter().chain(&self.params).copied().collect();
        MapRegistry::with_shipped().make(name, &params).map_err(Failure::parse)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynAction {
    Iterate,
    Bound,
    Certify,
    Cycle,
}

/// Parse arguments and run, writing the report to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return EXIT_PARSE;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let mnat_override = cli.mach.as_deref().map(|m| numbers(m, 3)).transpose()?.map(|v| v[2]);
    match &cli.cmd {
        Command::Dyn { action, map_name, map, u0, steps, every, lo, hi, limit } => {
            let mnat = mnat_override.unwrap_or(pecr::MachineParams::default().mnat);
            let f = map.make(map_name)?;
            cmd_dyn(*action, f.as_ref(), map.n, u0.as_deref(), *steps, *every, lo.as_deref(), hi.as_deref(), *limit, mnat, out)
        }
        cmd => {
            let app = match cmd {
                Command::Check { app, .. }
                | Command::Prove { app, .. }
                | Command::Reduce { app, .. }
                | Command::Encode { app, .. }
                | Command::Decompose { app, .. }
                | Command::Ioeq { app, .. }
                | Command::Run { app, .. } => app,
                Command::Dyn { .. } => unreachable!(),
            };
            let mut ctx = Ctx::load(app)?;
            ctx.override_machine(cli.mach.as_deref(), cli.mlst.as_deref())?;
            match cmd {
                Command::Check { files, .. } => cmd_check(&mut ctx, files, out),
                Command::Prove { thm, lemmas, corpus_lemmas, search, .. } => {
                    cmd_prove(&mut ctx, thm, lemmas, *corpus_lemmas, &search.config(), out)
                }
                Command::Reduce { proof, .. } => cmd_reduce(&ctx, proof, out),
                Command::Encode { file, proof, nx, ny, nclist, rule_ids, .. } => {
                    cmd_encode(&ctx, file, *proof, *nx, *ny, *nclist, rule_ids.as_deref(), out)
                }
                Command::Decompose { file, .. } => cmd_decompose(&ctx, file, out),
                Command::Ioeq { q, p, .. } => cmd_ioeq(&ctx, q, p, out),
                Command::Run { program, va, object, map_name, map, budget, .. } => {
                    let f = map_name.as_deref().map(|n| map.make(n)).transpose()?;
                    cmd_run(&ctx, program, va, object.as_deref(), f.as_deref(), *budget, out)
                }
                Command::Dyn { .. } => unreachable!(),
            }
        }
    }
}

/// A loaded application and the rules available to proofs.
pub struct Ctx {
    pub sig: AppSignature,
    pub store: Store,
    /// set for the bundled applications
    pub bundled: Option<&'static str>,
}

impl Ctx {
    pub fn load(app: &str) -> Result<Self, Failure> {
        for name in ["nat", "pecr"] {
            if app == name {
                let (sig, store) = apps::by_name(name).expect("bundled application");
                return Ok(Self { sig, store, bundled: Some(name) });
            }
        }
        let text = std::fs::read_to_string(app).map_err(|e| Failure::parse(format!("{app}: {e}")))?;
        let (sig, store) = parse_application(&text).map_err(|e| Failure::parse(format!("{app}: {e}")))?;
        Ok(Self { sig, store, bundled: None })
    }

    fn override_machine(&mut self, mach: Option<&str>, mlst: Option<&str>) -> Result<(), Failure> {
        if let Some(m) = mach {
            let v = numbers(m, 3)?;
            (self.sig.mach.msym, self.sig.mach.mstr, self.sig.mach.mnat) = (v[0], v[1], v[2]);
        }
        if let Some(m) = mlst {
            let v = numbers(m, 4)?;
            let l = &mut self.sig.mach.mlst;
            (l.nprem, l.npmax, l.nx, l.ny) = (v[0] as usize, v[1] as usize, v[2] as usize, v[3] as usize);
        }
        self.sig.mach.check().map_err(Failure::parse)
    }

    /// File text from disk, else the bundled corpus file with that name.
    pub fn read(&self, path: &str) -> Result<String, Failure> {
        match std::fs::read_to_string(path) {
            Ok(t) => Ok(t),
            Err(e) => {
                let name = Path::new(path).file_name().and_then(|n| n.to_str()).unwrap_or(path);
                self.bundled
                    .and_then(|app| apps::corpus_file(app, name))
                    .map(str::to_string)
                    .ok_or_else(|| Failure::parse(format!("{path}: {e}")))
            }
        }
    }

    fn exists(&self, path: &str) -> bool {
        Path::new(path).exists()
            || Path::new(path)
                .file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| self.bundled.and_then(|app| apps::corpus_file(app, n)).is_some())
    }
}

fn numbers(text: &str, n: usize) -> Result<Vec<u64>, Failure> {
    let v: Vec<u64> = text
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::parse(format!("expected {n} comma-separated numbers, got {text}")))?;
    if v.len() != n {
        return Err(Failure::parse(format!("expected {n} comma-separated numbers, got {text}")));
    }
    Ok(v)
}

fn stem(path: &str) -> String {
    Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or(path).to_string()
}

fn with_ext(path: &str, ext: &str) -> String {
    Path::new(path).with_extension(ext).to_string_lossy().into_owned()
}

/// Check one proof; the statement comes from the sibling .thm when present.
/// Accepted theorems join the store under the file stem.
fn check_one(ctx: &mut Ctx, proof_path: &str, out: &mut dyn Write) -> CmdResult {
    let label = stem(proof_path);
    let doc = parse_proof(&ctx.read(proof_path)?, &label, &ctx.sig).map_err(|e| Failure::parse(format!("{proof_path}: {e}")))?;
    let thm_path = with_ext(proof_path, "thm");
    let result = if ctx.exists(&thm_path) {
        let thm = parse_theorem(&ctx.read(&thm_path)?, &label, &ctx.sig).map_err(|e| Failure::parse(format!("{thm_path}: {e}")))?;
        check_theorem(&thm, &doc, &ctx.store, &ctx.sig)
    } else {
        check_proof(&doc, &ctx.store, &ctx.sig)
    };
    let iep = match result {
        Ok(iep) => iep,
        Err(e) => {
            writeln!(out, "{label}: rejected: {e}").ok();
            return Ok(EXIT_REJECTED);
        }
    };
    match irreducibility(&iep, &ctx.store, &ctx.sig, IRREDUCIBILITY_BOUND) {
        Irreducibility::Irreducible => {}
        Irreducibility::Skipped { len, bound } => {
            eprintln!("warning: {label}: premise has {len} lines, irreducibility not searched beyond {bound}");
        }
        Irreducibility::Reducible { sublist, rule } => {
            eprintln!("warning: {label}: premise lines {sublist:?} already give the conclusion by {rule}");
        }
    }
    ctx.store.insert(iep, &ctx.sig).map_err(|e| Failure { code: EXIT_REJECTED, msg: e.to_string() })?;
    writeln!(out, "{label}: accepted ({} lines)", doc.lines.len()).ok();
    Ok(EXIT_OK)
}

pub fn cmd_check(ctx: &mut Ctx, files: &[String], out: &mut dyn Write) -> CmdResult {
    let proofs: Vec<String> = if files.is_empty() {
        let app = ctx.bundled.ok_or_else(|| Failure::parse("no proof files given"))?;
        (1..=apps::theorem_count(app)).map(|n| format!("thm{n}.proof")).collect()
    } else {
        files.iter().filter(|f| !f.ends_with(".thm")).cloned().collect()
    };
    for p in &proofs {
        let code = check_one(ctx, p, out)?;
        if code != EXIT_OK {
            return Ok(code);
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_prove(
    ctx: &mut Ctx,
    thm_path: &str,
    lemmas: &[String],
    corpus_lemmas: bool,
    cfg: &ProverConfig,
    out: &mut dyn Write,
) -> CmdResult {
    let label = stem(thm_path);
    if corpus_lemmas {
        let app = ctx.bundled.ok_or_else(|| Failure::parse("--corpus-lemmas needs a bundled application"))?;
        let below = label.strip_prefix("thm").and_then(|n| n.parse::<usize>().ok()).unwrap_or(usize::MAX);
        for n in 1..below.min(apps::theorem_count(app) + 1) {
            if check_one(ctx, &format!("thm{n}.proof"), &mut std::io::sink())? != EXIT_OK {
                return Err(Failure { code: EXIT_REJECTED, msg: format!("corpus lemma thm{n} rejected") });
            }
        }
    }
    for l in lemmas {
        if check_one(ctx, l, &mut std::io::sink())? != EXIT_OK {
            return Err(Failure { code: EXIT_REJECTED, msg: format!("lemma {l} rejected") });
        }
    }
    let thm = parse_theorem(&ctx.read(thm_path)?, &label, &ctx.sig).map_err(|e| Failure::parse(format!("{thm_path}: {e}")))?;
    match prove(&thm, &ctx.store, &ctx.sig, cfg) {
        Ok(p) => {
            write!(out, "{}", print_proof(&p.proof, &ctx.sig)).ok();
            eprintln!("{label}: proved in {} rounds, {} facts, {:.3}s", p.stats.rounds, p.stats.facts, p.stats.elapsed.as_secs_f64());
            Ok(EXIT_OK)
        }
        Err(e @ ProveError::Exhausted { .. }) => Err(Failure { code: EXIT_BUDGET, msg: format!("{label}: {e}") }),
        Err(e @ ProveError::Premise(_)) => Err(Failure::parse(format!("{label}: {e}"))),
        Err(e) => Err(Failure { code: EXIT_REJECTED, msg: format!("{label}: {e}") }),
    }
}

fn list(v: &[impl Display]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

pub fn cmd_reduce(ctx: &Ctx, path: &str, out: &mut dyn Write) -> CmdResult {
    let doc = parse_proof(&ctx.read(path)?, &stem(path), &ctx.sig).map_err(|e| Failure::parse(format!("{path}: {e}")))?;
    let trace = reduce_connection_lists(&doc);
    for s in &trace.steps {
        writeln!(out, "{}", list(s)).ok();
    }
    if !trace.redundant.is_empty() {
        writeln!(out, "redundant {}", list(&trace.redundant)).ok();
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_encode(
    ctx: &Ctx,
    path: &str,
    proof: bool,
    nx: Option<usize>,
    ny: Option<usize>,
    nclist: usize,
    rule_ids: Option<&str>,
    out: &mut dyn Write,
) -> CmdResult {
    let text = ctx.read(path)?;
    if proof {
        let doc = parse_proof(&text, &stem(path), &ctx.sig).map_err(|e| Failure::parse(format!("{path}: {e}")))?;
        let ids = match rule_ids {
            Some(f) => parse_rule_ids(&ctx.read(f)?).map_err(|e| Failure::parse(format!("{f}: {e}")))?,
            None => rule_ids_for(ctx),
        };
        let layout = ExportLayout { nx: nx.unwrap_or(2), ny: ny.unwrap_or(1), nclist };
        let map = LabelMap::covering([&doc.program()]);
        let rows = export_proof_matrix(&doc, &ids, layout, map).map_err(|e| Failure { code: EXIT_REJECTED, msg: e.to_string() })?;
        write!(out, "{}", format_matrix(&rows, None)).ok();
    } else {
        let p = parse_program(&text, &ctx.sig).map_err(|e| Failure::parse(format!("{path}: {e}")))?;
        let (bx, by) = arity_bounds([&p]);
        let m = encode_program(&p, LabelMap::covering([&p]), nx.unwrap_or(bx), ny.unwrap_or(by))
            .map_err(|e| Failure { code: EXIT_REJECTED, msg: e.to_string() })?;
        write!(out, "{}", format_matrix(&m.rows, None)).ok();
    }
    Ok(EXIT_OK)
}

pub fn cmd_decompose(ctx: &Ctx, path: &str, out: &mut dyn Write) -> CmdResult {
    let p = parse_program(&ctx.read(path)?, &ctx.sig).map_err(|e| Failure::parse(format!("{path}: {e}")))?;
    let map = LabelMap::covering([&p]);
    let (nx, ny) = arity_bounds([&p]);
    let m = encode_program(&p, map, nx, ny).map_err(|e| Failure { code: EXIT_REJECTED, msg: e.to_string() })?;
    for (k, d) in decompose_io_matrix(&m.io(), map).iter().enumerate() {
        let kind = if d.binding { "binding" } else { "non-binding" };
        writeln!(out, "dmio {} label {} {kind}", k + 1, d.label).ok();
        write!(out, "{}", format_matrix(&d.matrix, None)).ok();
    }
    Ok(EXIT_OK)
}

pub fn cmd_ioeq(ctx: &Ctx, q: &str, p: &str, out: &mut dyn Write) -> CmdResult {
    let qp = parse_program(&ctx.read(q)?, &ctx.sig).map_err(|e| Failure::parse(format!("{q}: {e}")))?;
    let pp = parse_program(&ctx.read(p)?, &ctx.sig).map_err(|e| Failure::parse(format!("{p}: {e}")))?;
    match ioeq_check(&qp, &pp) {
        Some(w) => {
            writeln!(out, "ioeq true").ok();
            let mut pairs: Vec<_> = w.into_iter().collect();
            pairs.sort();
            for (from, to) in pairs {
                writeln!(out, "{} -> {}", ctx.sig.label_text(from), ctx.sig.label_text(to)).ok();
            }
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "ioeq false").ok();
            Ok(EXIT_REJECTED)
        }
    }
}

pub fn cmd_run(
    ctx: &Ctx,
    program: &str,
    va: &str,
    object: Option<&str>,
    f: Option<&dyn MapSpec<u64>>,
    budget: u64,
    out: &mut dyn Write,
) -> CmdResult {
    let p = parse_program(&ctx.read(program)?, &ctx.sig).map_err(|e| Failure::parse(format!("{program}: {e}")))?;
    let object = object.map(Ctx::load).transpose()?;
    let obj_sig = object.as_ref().map(|c| &c.sig);
    let values = parse_va(&ctx.read(va)?, &p, &ctx.sig, obj_sig).map_err(|e| Failure::parse(format!("{va}: {e}")))?;
    let mut ev = Evaluator::new(&ctx.sig).with_budget(budget);
    if let Some(f) = f {
        ev = ev.with_map(f);
    }
    if let Some(o) = obj_sig {
        ev = ev.with_object(o);
    }
    let outcome = ev.execute(&p, &values).map_err(|e| Failure::parse(e.to_string()))?;
    match &outcome.status {
        Status::Computable => {
            writeln!(out, "computable ({} steps)", outcome.steps).ok();
            write!(out, "{}", format_va(&outcome.outputs, &ctx.sig, obj_sig)).ok();
            Ok(EXIT_OK)
        }
        Status::Error { item, cause } => {
            writeln!(out, "not computable: item {item}: {cause}").ok();
            Ok(EXIT_REJECTED)
        }
        Status::BudgetExhausted { item } => {
            writeln!(out, "budget exhausted at item {item} after {} steps", outcome.steps).ok();
            Ok(EXIT_BUDGET)
        }
    }
}

fn state(text: Option<&str>, what: &str) -> Result<Vec<u64>, Failure> {
    let text = text.ok_or_else(|| Failure::parse(format!("--{what} is required")))?;
    text.split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::parse(format!("--{what}: expected comma-separated numbers")))
}

fn region(n: Option<u64>, lo: Option<&str>, hi: Option<&str>) -> Result<BoxRegion<u64>, Failure> {
    // maps sized by N default to the domain [0, N]
    let (a, b) = match (lo, hi, n) {
        (None, None, Some(n)) => (vec![0], vec![n]),
        _ => (state(lo, "lo")?, state(hi, "hi")?),
    };
    BoxRegion::new(a, b).map_err(Failure::parse)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_dyn(
    action: DynAction,
    f: &dyn MapSpec<u64>,
    n: Option<u64>,
    u0: Option<&str>,
    steps: u64,
    every: Option<u64>,
    lo: Option<&str>,
    hi: Option<&str>,
    limit: u64,
    mnat: u64,
    out: &mut dyn Write,
) -> CmdResult {
    let dyn_fail = |e: pecr::dynsys::DynError| Failure { code: EXIT_REJECTED, msg: e.to_string() };
    match action {
        DynAction::Iterate => {
            let u = state(u0, "u0")?;
            let it = iterate(f, &u, steps, every, mnat).map_err(dyn_fail)?;
            if it.snapshots.is_empty() {
                writeln!(out, "{steps} {}", list(&it.last)).ok();
            }
            for (t, s) in &it.snapshots {
                writeln!(out, "{t} {}", list(s)).ok();
            }
        }
        DynAction::Bound => {
            let p = region(n, lo, hi)?;
            let q = bound_range(f, &p, mnat).map_err(dyn_fail)?;
            writeln!(out, "{} {}", list(&q.a), list(&q.b)).ok();
        }
        DynAction::Certify => {
            let p = region(n, lo, hi)?;
            match certify_axc(f, &p, mnat) {
                Ok(c) => {
                    writeln!(out, "certified: range {} {} within {} {}", list(&c.q.a), list(&c.q.b), list(&c.p.a), list(&c.p.b)).ok();
                }
                Err(AxcRefusal::NotInside { p, q }) => {
                    writeln!(out, "refused: range {} {} leaves {} {}", list(&q.a), list(&q.b), list(&p.a), list(&p.b)).ok();
                    return Ok(EXIT_REJECTED);
                }
                Err(e) => {
                    writeln!(out, "refused: {e:?}").ok();
                    return Ok(EXIT_REJECTED);
                }
            }
        }
        DynAction::Cycle => {
            let u = state(u0, "u0")?;
            match detect_cycle(f, &u, limit, mnat).map_err(dyn_fail)? {
                Some(c) => {
                    writeln!(out, "{c}").ok();
                }
                None => {
                    writeln!(out, "no cycle within {limit} steps").ok();
                    return Ok(EXIT_BUDGET);
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Proof-matrix rule ids: the bundled fixture when present, else store order.
pub fn rule_ids_for(ctx: &Ctx) -> HashMap<String, u64> {
    ctx.bundled
        .and_then(|app| apps::corpus_file(app, "ruleids.txt"))
        .and_then(|t| parse_rule_ids(t).ok())
        .unwrap_or_else(|| default_rule_ids(&ctx.sig))
}
