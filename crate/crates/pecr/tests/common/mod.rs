//! Oracles shared by the integration tests and the CLI acceptance suite.
#![allow(dead_code)]

use std::collections::HashMap;

use pecr::model::{AtomicProgram, Label, ProgramList};
use pecr::proofio::{Justification, ProofDocument, ProofLine};
use pecr::AppSignature;
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------- ioeq

/// Direct condition check of `ioeq[q p]` (q must preserve p's bindings),
/// written cell by cell without the matrix machinery.
pub fn ioeq_oracle(q: &ProgramList, p: &ProgramList) -> bool {
    let n = p.len();
    if q.len() != n {
        return false;
    }
    for (a, b) in q.items.iter().zip(&p.items) {
        if a.pn != b.pn || a.x.len() != b.x.len() || a.y.len() != b.y.len() {
            return false;
        }
    }
    for m in 0..n {
        for i in 0..p.items[m].x.len() {
            let xp = p.items[m].x[i];
            let xq = q.items[m].x[i];
            if xp.is_const() && xq != xp {
                return false;
            }
            for k in 0..n {
                for j in 0..p.items[k].x.len() {
                    if p.items[k].x[j] == xp && q.items[k].x[j] != xq {
                        return false;
                    }
                }
            }
            for k in 0..m {
                for j in 0..p.items[k].y.len() {
                    if p.items[k].y[j] == xp && q.items[k].y[j] != xq {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// (nx, ny) per synthetic program id.
pub const SHAPES: [(usize, usize); 6] = [(2, 0), (1, 1), (3, 1), (2, 1), (3, 0), (1, 0)];

/// A valid program of length 1..=6: inputs come from a small variable pool,
/// earlier outputs and two constants; outputs are always fresh.
pub fn random_program(rng: &mut impl Rng) -> ProgramList {
    let n = rng.gen_range(1..=6);
    let pns: Vec<u32> = (0..n).map(|_| rng.gen_range(0..SHAPES.len() as u32)).collect();
    fill_program(&pns, rng)
}

pub fn fill_program(pns: &[u32], rng: &mut impl Rng) -> ProgramList {
    let mut outputs: Vec<Label> = Vec::new();
    let mut next_out = 20;
    let mut items = Vec::new();
    for &pn in pns {
        let (nx, ny) = SHAPES[pn as usize];
        let x = (0..nx)
            .map(|_| match rng.gen_range(0..10) {
                0 => Label::Const(rng.gen_range(1..=2)),
                1..=3 if !outputs.is_empty() => *outputs.choose(rng).unwrap(),
                _ => Label::Var(rng.gen_range(1..=5)),
            })
            .collect();
        let y: Vec<Label> = (0..ny)
            .map(|_| {
                next_out += 1;
                Label::Var(next_out)
            })
            .collect();
        outputs.extend(&y);
        items.push(AtomicProgram::new(pn, x, y));
    }
    ProgramList::new(items)
}

/// Rename every variable by a random injection.
pub fn relabel(p: &ProgramList, rng: &mut impl Rng) -> ProgramList {
    let mut ids: Vec<u32> = (1..=60).collect();
    ids.shuffle(rng);
    let mut map: HashMap<Label, Label> = HashMap::new();
    let mut f = |l: Label| match l {
        Label::Var(_) => {
            let k = map.len();
            *map.entry(l).or_insert(Label::Var(ids[k]))
        }
        other => other,
    };
    let items = p
        .items
        .iter()
        .map(|ap| {
            let x = ap.x.iter().map(|&l| f(l)).collect();
            let y = ap.y.iter().map(|&l| f(l)).collect();
            AtomicProgram::new(ap.pn, x, y)
        })
        .collect();
    ProgramList::new(items)
}

/// Replace one singly-used input variable with another label already bound
/// at that point, adding a binding p does not have.
pub fn coarsen(p: &ProgramList, rng: &mut impl Rng) -> Option<ProgramList> {
    let mut count: HashMap<Label, usize> = HashMap::new();
    for ap in &p.items {
        for l in ap.labels() {
            *count.entry(l).or_default() += 1;
        }
    }
    let mut sites = Vec::new();
    for (m, ap) in p.items.iter().enumerate() {
        for (i, &l) in ap.x.iter().enumerate() {
            if l.is_var() && count[&l] == 1 {
                sites.push((m, i));
            }
        }
    }
    let &(m, i) = sites.choose(rng)?;
    let old = p.items[m].x[i];
    let mut pool: Vec<Label> = p.items[..=m].iter().flat_map(|ap| ap.x.iter().copied()).filter(|l| l.is_var()).collect();
    pool.extend(p.items[..m].iter().flat_map(|ap| ap.y.iter().copied()));
    pool.retain(|&l| l != old);
    pool.dedup();
    let new = *pool.choose(rng)?;
    let mut q = p.clone();
    q.items[m].x[i] = new;
    Some(q)
}

/// Same program names, inputs redrawn.
pub fn redraw(p: &ProgramList, rng: &mut impl Rng) -> ProgramList {
    let pns: Vec<u32> = p.items.iter().map(|ap| ap.pn).collect();
    fill_program(&pns, rng)
}

// ----------------------------------------------------------- mutations

/// Four mutated copies of a proof. Each one should be rejected by the checker.
pub fn mutations(doc: &ProofDocument, sig: &AppSignature) -> Vec<(&'static str, ProofDocument)> {
    let mut out = Vec::new();
    if let Some(d) = swap_clist(doc) {
        out.push(("swap-clist", d));
    }
    out.push(("output-clash", output_clash(doc)));
    out.push(("change-pn", change_pn(doc, sig)));
    out.push(("drop-premise", drop_premise(doc)));
    out
}

/// Swap two clist entries that cite lines with different program names, or
/// failing that, point one entry at an earlier line with another name.
fn swap_clist(doc: &ProofDocument) -> Option<ProofDocument> {
    let pn = |k: usize| doc.lines[k - 1].stmt.pn;
    for (idx, line) in doc.lines.iter().enumerate().rev() {
        let Some(j) = &line.just else { continue };
        for a in 0..j.clist.len() {
            for b in a + 1..j.clist.len() {
                if pn(j.clist[a]) != pn(j.clist[b]) {
                    let mut d = doc.clone();
                    d.lines[idx].just.as_mut().unwrap().clist.swap(a, b);
                    return Some(d);
                }
            }
        }
    }
    for (idx, line) in doc.lines.iter().enumerate().rev() {
        let Some(j) = &line.just else { continue };
        let Some(&c) = j.clist.first() else { continue };
        if let Some(other) = (1..=idx).find(|&k| pn(k) != pn(c)) {
            let mut d = doc.clone();
            d.lines[idx].just.as_mut().unwrap().clist[0] = other;
            return Some(d);
        }
    }
    None
}

/// Give a derived line an output label that is already in use; proofs with
/// no derived outputs get a foreign input in their last line instead.
fn output_clash(doc: &ProofDocument) -> ProofDocument {
    let mut d = doc.clone();
    let first_label = doc.lines.iter().flat_map(|l| l.stmt.x.iter().copied()).find(|l| l.is_var());
    for line in d.lines.iter_mut().skip(doc.m) {
        if !line.stmt.y.is_empty() {
            line.stmt.y[0] = first_label.expect("proof mentions a variable");
            return d;
        }
    }
    let last = d.lines.last_mut().unwrap();
    last.stmt.x[0] = Label::Var(999);
    d
}

/// Rename the program of the last line.
fn change_pn(doc: &ProofDocument, sig: &AppSignature) -> ProofDocument {
    let mut d = doc.clone();
    let last = d.lines.last_mut().unwrap();
    let old = sig.program(last.stmt.pn).unwrap();
    let shape = (old.inputs.clone(), old.outputs.clone());
    let count = sig.programs.len() as u32;
    let same = (1..=count)
        .filter(|&pn| pn != last.stmt.pn)
        .find(|&pn| {
            let p = sig.program(pn).unwrap();
            (p.inputs.clone(), p.outputs.clone()) == shape
        });
    last.stmt.pn = same.unwrap_or(last.stmt.pn % count + 1);
    d
}

/// Delete the first premise line. Later citations shift down by one, so
/// citations of the deleted line now point at its successor.
fn drop_premise(doc: &ProofDocument) -> ProofDocument {
    let mut lines: Vec<ProofLine> = doc.lines[1..].to_vec();
    for line in &mut lines {
        if let Some(Justification { clist, .. }) = &mut line.just {
            for c in clist.iter_mut() {
                *c = c.saturating_sub(1).max(1);
            }
        }
    }
    ProofDocument { label: doc.label.clone(), m: doc.m - 1, lines }
}

// ------------------------------------------------------------- orbits

pub fn tent(n: u64, x: u64) -> u64 {
    if 2 * x <= n {
        2 * x
    } else {
        2 * (n - x)
    }
}

/// (transient length, period) by storing the whole orbit.
pub fn naive_cycle(n: u64, u: u64) -> (u64, u64) {
    let mut seen: Vec<u64> = vec![u];
    loop {
        let next = tent(n, *seen.last().unwrap());
        if let Some(j) = seen.iter().position(|&s| s == next) {
            return (j as u64, (seen.len() - j) as u64);
        }
        seen.push(next);
    }
}
