//! Integer-matrix encoding of programs, I/O-matrix decomposition into
//! per-label binding matrices, AND/OR gates and the template form of I/O
//! equivalence.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{AppSignature, AtomicProgram, Label, ProgramList};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("row {row}: arity exceeds nx={nx} ny={ny}")]
    Arity { row: usize, nx: usize, ny: usize },
    #[error("row {row}: unknown program id {pn}")]
    UnknownProgram { row: usize, pn: u64 },
    #[error("row {row}: output where {name} declares none")]
    ExtraOutput { row: usize, name: String },
    #[error("row {row}: input where {name} declares none")]
    ExtraInput { row: usize, name: String },
    #[error("row {row}: missing entry for {name}")]
    Missing { row: usize, name: String },
    #[error("row {row}: entry {value} is not a known label")]
    BadEntry { row: usize, value: u64 },
    #[error("row {row}: expected {want} columns, found {got}")]
    Width { row: usize, want: usize, got: usize },
    #[error("bad matrix text: {0}")]
    Text(String),
}

/// Integer labeling: variables keep their ids, the m-th constant becomes
/// `nvar + m`, null is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelMap {
    pub nvar: u32,
}

impl LabelMap {
    pub fn new(nvar: u32) -> Self {
        Self { nvar }
    }

    /// Smallest multiple of 26 (at least 26) covering every variable id used.
    pub fn covering<'a>(programs: impl IntoIterator<Item = &'a ProgramList>) -> Self {
        let mut max = 0;
        for p in programs {
            for ap in &p.items {
                for l in ap.labels() {
                    if let Label::Var(id) = l {
                        max = max.max(id);
                    }
                }
            }
        }
        Self { nvar: max.div_ceil(26).max(1) * 26 }
    }

    pub fn encode(&self, label: Label) -> u64 {
        match label {
            Label::Null => 0,
            Label::Var(id) => id as u64,
            Label::Const(m) => self.nvar as u64 + m as u64,
        }
    }

    pub fn decode(&self, value: u64) -> Label {
        if value == 0 {
            Label::Null
        } else if value <= self.nvar as u64 {
            Label::Var(value as u32)
        } else {
            Label::Const((value - self.nvar as u64) as u32)
        }
    }

    pub fn is_const(&self, value: u64) -> bool {
        value > self.nvar as u64
    }
}

/// Rows of `[pn, x padded to nx, y padded to ny]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramMatrix {
    pub nx: usize,
    pub ny: usize,
    pub rows: Vec<Vec<u64>>,
}

impl ProgramMatrix {
    /// Drop the program-name column.
    pub fn io(&self) -> IoMatrix {
        IoMatrix { rows: self.rows.iter().map(|r| r[1..].to_vec()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoMatrix {
    pub rows: Vec<Vec<u64>>,
}

pub fn encode_row(ap: &AtomicProgram, map: LabelMap, nx: usize, ny: usize) -> Option<Vec<u64>> {
    if ap.x.len() > nx || ap.y.len() > ny {
        return None;
    }
    let mut row = Vec::with_capacity(1 + nx + ny);
    row.push(ap.pn as u64);
    row.extend(ap.x.iter().map(|&l| map.encode(l)));
    row.resize(1 + nx, 0);
    row.extend(ap.y.iter().map(|&l| map.encode(l)));
    row.resize(1 + nx + ny, 0);
    Some(row)
}

pub fn encode_program(p: &ProgramList, map: LabelMap, nx: usize, ny: usize) -> Result<ProgramMatrix, CodecError> {
    let rows = p
        .items
        .iter()
        .enumerate()
        .map(|(i, ap)| encode_row(ap, map, nx, ny).ok_or(CodecError::Arity { row: i + 1, nx, ny }))
        .collect::<Result<_, _>>()?;
    Ok(ProgramMatrix { nx, ny, rows })
}

pub fn decode_program(m: &ProgramMatrix, map: LabelMap, sig: &AppSignature) -> Result<ProgramList, CodecError> {
    let width = 1 + m.nx + m.ny;
    let mut items = Vec::with_capacity(m.rows.len());
    for (i, r) in m.rows.iter().enumerate() {
        let row = i + 1;
        if r.len() != width {
            return Err(CodecError::Width { row, want: width, got: r.len() });
        }
        let pn = u32::try_from(r[0]).map_err(|_| CodecError::UnknownProgram { row, pn: r[0] })?;
        let decl = sig.program(pn).ok_or(CodecError::UnknownProgram { row, pn: r[0] })?;
        let (nxd, nyd) = (decl.inputs.len(), decl.outputs.len());
        if nxd > m.nx || nyd > m.ny {
            return Err(CodecError::Arity { row, nx: m.nx, ny: m.ny });
        }
        let xs = &r[1..1 + m.nx];
        let ys = &r[1 + m.nx..];
        if xs[nxd..].iter().any(|&v| v != 0) {
            return Err(CodecError::ExtraInput { row, name: decl.name.clone() });
        }
        if ys[nyd..].iter().any(|&v| v != 0) {
            return Err(CodecError::ExtraOutput { row, name: decl.name.clone() });
        }
        let decode_slice = |cells: &[u64]| -> Result<Vec<Label>, CodecError> {
            cells
                .iter()
                .map(|&v| {
                    let l = map.decode(v);
                    match l {
                        Label::Null => Err(CodecError::Missing { row, name: decl.name.clone() }),
                        Label::Const(_) if sig.const_decl(l).is_none() => Err(CodecError::BadEntry { row, value: v }),
                        _ => Ok(l),
                    }
                })
                .collect()
        };
        let x = decode_slice(&xs[..nxd])?;
        let y = decode_slice(&ys[..nyd])?;
        items.push(AtomicProgram::new(pn, x, y));
    }
    Ok(ProgramList::new(items))
}

/// Decimal rows, one per line. Constants optionally written `m*`.
pub fn format_matrix(rows: &[Vec<u64>], star_constants: Option<LabelMap>) -> String {
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .map(|&v| match star_constants {
                Some(map) if map.is_const(v) => format!("{}*", v - map.nvar as u64),
                _ => v.to_string(),
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Inverse of [`format_matrix`]; brackets and commas are ignored, `m*` needs `map`.
pub fn parse_matrix(text: &str, map: Option<LabelMap>) -> Result<Vec<Vec<u64>>, CodecError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let cleaned: String = line.chars().map(|c| if matches!(c, '[' | ']' | ',') { ' ' } else { c }).collect();
        let cells: Vec<&str> = cleaned.split_whitespace().collect();
        if cells.is_empty() {
            continue;
        }
        let row = cells
            .iter()
            .map(|c| {
                if let Some(m) = c.strip_suffix('*') {
                    let map = map.ok_or_else(|| CodecError::Text(format!("{c} needs nvar")))?;
                    let m: u64 = m.parse().map_err(|_| CodecError::Text(c.to_string()))?;
                    Ok(map.nvar as u64 + m)
                } else {
                    c.parse::<u64>().map_err(|_| CodecError::Text(c.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, cells: vec![false; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged binary matrix");
        Self { rows: rows.len(), cols, cells: rows.iter().flatten().map(|&c| c != 0).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.cells.chunks(self.cols.max(1)).take(self.rows).map(|r| r.iter().map(|&c| c as u8).collect()).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cells[r * self.cols + c]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Every set cell of `other` is set here.
    pub fn dominates(&self, other: &BinaryMatrix) -> bool {
        self.cells.len() == other.cells.len() && self.cells.iter().zip(&other.cells).all(|(&a, &b)| a || !b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateMode {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("shape mismatch: {0}x{1} vs {2}x{3}")]
pub struct ShapeError(pub usize, pub usize, pub usize, pub usize);

pub fn gate(u: &BinaryMatrix, v: &BinaryMatrix, mode: GateMode) -> Result<BinaryMatrix, ShapeError> {
    if u.rows != v.rows || u.cols != v.cols {
        return Err(ShapeError(u.rows, u.cols, v.rows, v.cols));
    }
    let cells = u
        .cells
        .iter()
        .zip(&v.cells)
        .map(|(&a, &b)| match mode {
            GateMode::And => a && b,
            GateMode::Or => a || b,
        })
        .collect();
    Ok(BinaryMatrix { rows: u.rows, cols: u.cols, cells })
}

/// One matrix of the decomposition: the cells holding a single label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dmio {
    pub label: u64,
    pub is_const: bool,
    pub matrix: Vec<Vec<u64>>,
    pub template: BinaryMatrix,
    pub binding: bool,
}

/// One matrix per distinct nonzero label, in row-major first-occurrence order.
pub fn decompose_io_matrix(mio: &IoMatrix, map: LabelMap) -> Vec<Dmio> {
    let rows = mio.rows.len();
    let cols = mio.rows.first().map_or(0, Vec::len);
    let mut order: Vec<u64> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    for r in &mio.rows {
        for &v in r {
            if v != 0 && !index.contains_key(&v) {
                index.insert(v, order.len());
                order.push(v);
            }
        }
    }
    let mut out: Vec<Dmio> = order
        .iter()
        .map(|&label| Dmio {
            label,
            is_const: map.is_const(label),
            matrix: vec![vec![0; cols]; rows],
            template: BinaryMatrix::zeros(rows, cols),
            binding: false,
        })
        .collect();
    for (i, r) in mio.rows.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            if v != 0 {
                let d = &mut out[index[&v]];
                d.matrix[i][j] = v;
                d.template.cells[i * cols + j] = true;
            }
        }
    }
    for d in &mut out {
        d.binding = d.is_const || d.template.count() >= 2;
    }
    out
}

/// Maximum input and output arities over the given programs.
pub fn arity_bounds<'a>(programs: impl IntoIterator<Item = &'a ProgramList>) -> (usize, usize) {
    let mut nx = 0;
    let mut ny = 0;
    for p in programs {
        for ap in &p.items {
            nx = nx.max(ap.x.len());
            ny = ny.max(ap.y.len());
        }
    }
    (nx, ny)
}

/// `ioeq[q p]`: q has p's program-name sequence and preserves every binding
/// template of p. On success returns the label map from p to q.
pub fn ioeq_check(q: &ProgramList, p: &ProgramList) -> Option<HashMap<Label, Label>> {
    if q.len() != p.len() {
        return None;
    }
    if q.items.iter().zip(&p.items).any(|(a, b)| a.pn != b.pn || a.x.len() != b.x.len() || a.y.len() != b.y.len()) {
        return None;
    }
    let map = LabelMap::covering([q, p]);
    let (nx, ny) = arity_bounds([q, p]);
    let mq = encode_program(q, map, nx, ny).ok()?.io();
    let mp = encode_program(p, map, nx, ny).ok()?.io();
    let dq = decompose_io_matrix(&mq, map);
    let dp = decompose_io_matrix(&mp, map);
    let mut witness = HashMap::new();
    for b in &dp {
        let plabel = map.decode(b.label);
        if b.binding {
            let dominating = dq
                .iter()
                .filter(|a| !b.is_const || a.label == b.label)
                .filter(|a| gate(&a.template, &b.template, GateMode::And).ok().as_ref() == Some(&b.template))
                .map(|a| a.label)
                .min()?;
            witness.insert(plabel, map.decode(dominating));
        } else {
            let (i, j) = first_cell(&b.template);
            witness.insert(plabel, map.decode(mq.rows[i][j]));
        }
    }
    Some(witness)
}

fn first_cell(m: &BinaryMatrix) -> (usize, usize) {
    let k = m.cells.iter().position(|&c| c).expect("decomposition matrices are never empty");
    (k / m.cols, k % m.cols)
}
