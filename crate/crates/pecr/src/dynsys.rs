//! Fully discrete dynamical systems `u[t+1] = f[u[t]]` over arrays of
//! machine numbers: iteration, range bounding, the `axc` certificate,
//! state counting and cycle detection.
//!
//! Everything is generic over the unsigned word used for array cells.
//! Arrays are flat cell vectors; their shape does not matter here.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_traits::{PrimInt, Unsigned};
use thiserror::Error;

pub trait Word: PrimInt + Unsigned + Hash + Debug + Display + Send + Sync + 'static {}
impl<T: PrimInt + Unsigned + Hash + Debug + Display + Send + Sync + 'static> Word for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("step {step}: cell {cell} leaves [0, mnat]")]
    Escape { step: u64, cell: usize },
    #[error("step {step}: {map} is undefined at cell {cell}")]
    Domain { step: u64, map: String, cell: usize },
    #[error("array has {got} cells, expected {want}")]
    Shape { got: usize, want: usize },
    #[error("box bounds are not ordered at cell {0}")]
    Unordered(usize),
    #[error("{0} declares no range bound for this box")]
    Unbounded(String),
    #[error("unknown map {0}")]
    UnknownMap(String),
    #[error("map {name}: {msg}")]
    Params { name: String, msg: String },
}

/// Discrete box `[a b]` with `a <= b` cellwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxRegion<W> {
    pub a: Vec<W>,
    pub b: Vec<W>,
}

impl<W: Word> BoxRegion<W> {
    pub fn new(a: Vec<W>, b: Vec<W>) -> Result<Self, DynError> {
        if a.len() != b.len() {
            return Err(DynError::Shape { got: b.len(), want: a.len() });
        }
        if let Some(i) = a.iter().zip(&b).position(|(x, y)| x > y) {
            return Err(DynError::Unordered(i));
        }
        Ok(Self { a, b })
    }

    /// Single-cell box `[lo, hi]`.
    pub fn interval(lo: W, hi: W) -> Result<Self, DynError> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn cells(&self) -> usize {
        self.a.len()
    }

    pub fn contains(&self, u: &[W]) -> bool {
        u.len() == self.a.len() && u.iter().zip(&self.a).zip(&self.b).all(|((x, lo), hi)| lo <= x && x <= hi)
    }

    /// `self` lies inside `outer`.
    pub fn within(&self, outer: &BoxRegion<W>) -> bool {
        self.cells() == outer.cells()
            && (0..self.cells()).all(|i| outer.a[i] <= self.a[i] && self.b[i] <= outer.b[i])
    }

    /// Every state of the box in lexicographic order (last cell fastest).
    pub fn states(&self) -> impl Iterator<Item = Vec<W>> + '_ {
        let mut cur = Some(self.a.clone());
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut i = next.len();
            cur = loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if next[i] < self.b[i] {
                    next[i] = next[i] + W::one();
                    break Some(next);
                }
                next[i] = self.a[i];
            };
            Some(out)
        })
    }
}

impl<W: Display> Display for BoxRegion<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[W]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "[[{}] [{}]]", show(&self.a), show(&self.b))
    }
}

/// A map on arrays. `apply` returns the index of the offending cell when the
/// map is undefined there; range checks against `mnat` happen in the callers.
pub trait MapSpec<W: Word>: Send + Sync {
    fn name(&self) -> &str;

    fn apply(&self, u: &[W]) -> Result<Vec<W>, usize>;

    /// A box containing the image of `p`, if the map knows one in closed form.
    fn analytic_bound(&self, p: &BoxRegion<W>) -> Option<BoxRegion<W>>;
}

fn cellwise<W: Word>(u: &[W], f: impl Fn(W) -> Option<W>) -> Result<Vec<W>, usize> {
    u.iter().enumerate().map(|(i, &x)| f(x).ok_or(i)).collect()
}

fn two<W: Word>() -> W {
    W::one() + W::one()
}

/// `T(x) = min(2x, 2(N - x))` on `[0, N]`.
#[derive(Debug, Clone, Copy)]
pub struct Tent<W> {
    pub n: W,
}

impl<W: Word> Tent<W> {
    fn cell(&self, x: W) -> Option<W> {
        x.min(self.n.checked_sub(&x)?).checked_mul(&two())
    }
}

impl<W: Word> MapSpec<W> for Tent<W> {
    fn name(&self) -> &str {
        "tent"
    }

    fn apply(&self, u: &[W]) -> Result<Vec<W>, usize> {
        cellwise(u, |x| self.cell(x))
    }

    fn analytic_bound(&self, p: &BoxRegion<W>) -> Option<BoxRegion<W>> {
        // T rises to the apex then falls, so the extremes sit at the
        // interval ends or at the apex cells floor(N/2), ceil(N/2).
        let half = self.n / two();
        let apex = [half, self.n - half];
        let mut lo = Vec::with_capacity(p.cells());
        let mut hi = Vec::with_capacity(p.cells());
        for i in 0..p.cells() {
            let (a, b) = (p.a[i], p.b[i]);
            let ends = [self.cell(a)?, self.cell(b)?];
            let mut top = ends[0].max(ends[1]);
            for &c in &apex {
                if a <= c && c <= b {
                    top = top.max(self.cell(c)?);
                }
            }
            lo.push(ends[0].min(ends[1]));
            hi.push(top);
        }
        Some(BoxRegion { a: lo, b: hi })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl<W: Word> MapSpec<W> for Identity {
    fn name(&self) -> &str {
        "identity"
    }

    fn apply(&self, u: &[W]) -> Result<Vec<W>, usize> {
        Ok(u.to_vec())
    }

    fn analytic_bound(&self, p: &BoxRegion<W>) -> Option<BoxRegion<W>> {
        Some(p.clone())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Constant<W> {
    pub c: W,
}

impl<W: Word> MapSpec<W> for Constant<W> {
    fn name(&self) -> &str {
        "constant"
    }

    fn apply(&self, u: &[W]) -> Result<Vec<W>, usize> {
        Ok(vec![self.c; u.len()])
    }

    fn analytic_bound(&self, p: &BoxRegion<W>) -> Option<BoxRegion<W>> {
        Some(BoxRegion { a: vec![self.c; p.cells()], b: vec![self.c; p.cells()] })
    }
}

/// `u -> N - u`, undefined above `N`.
#[derive(Debug, Clone, Copy)]
pub struct Involution<W> {
    pub n: W,
}

impl<W: Word> MapSpec<W> for Involution<W> {
    fn name(&self) -> &str {
        "involution"
    }

    fn apply(&self, u: &[W]) -> Result<Vec<W>, usize> {
        cellwise(u, |x| self.n.checked_sub(&x))
    }

    fn analytic_bound(&self, p: &BoxRegion<W>) -> Option<BoxRegion<W>> {
        let a = p.b.iter().map(|&x| self.n.checked_sub(&x)).collect::<Option<Vec<_>>>()?;
        let b = p.a.iter().map(|&x| self.n.checked_sub(&x)).collect::<Option<Vec<_>>>()?;
        Some(BoxRegion { a, b })
    }
}

/// `u -> u + k`.
#[derive(Debug, Clone, Copy)]
pub struct Shift<W> {
    pub k: W,
}

impl<W: Word> MapSpec<W> for Shift<W> {
    fn name(&self) -> &str {
        "shift"
    }

    fn apply(&self, u: &[W]) -> Result<Vec<W>, usize> {
        cellwise(u, |x| x.checked_add(&self.k))
    }

    fn analytic_bound(&self, p: &BoxRegion<W>) -> Option<BoxRegion<W>> {
        let a = p.a.iter().map(|&x| x.checked_add(&self.k)).collect::<Option<Vec<_>>>()?;
        let b = p.b.iter().map(|&x| x.checked_add(&self.k)).collect::<Option<Vec<_>>>()?;
        Some(BoxRegion { a, b })
    }
}

pub type MapMaker<W> = fn(&[W]) -> Result<Box<dyn MapSpec<W>>, DynError>;

/// Named map constructors taking a parameter list.
pub struct MapRegistry<W: Word> {
    makers: BTreeMap<String, (usize, MapMaker<W>)>,
}

impl<W: Word> Default for MapRegistry<W> {
    fn default() -> Self {
        Self::with_shipped()
    }
}

impl<W: Word> MapRegistry<W> {
    pub fn empty() -> Self {
        Self { makers: BTreeMap::new() }
    }

    /// tent N, identity, constant c, involution N, shift k.
    pub fn with_shipped() -> Self {
        let mut r = Self::empty();
        r.register("tent", 1, |p| Ok(Box::new(Tent { n: p[0] })));
        r.register("identity", 0, |_| Ok(Box::new(Identity)));
        r.register("constant", 1, |p| Ok(Box::new(Constant { c: p[0] })));
        r.register("involution", 1, |p| Ok(Box::new(Involution { n: p[0] })));
        r.register("shift", 1, |p| Ok(Box::new(Shift { k: p[0] })));
        r
    }

    pub fn register(&mut self, name: &str, nparams: usize, maker: MapMaker<W>) {
        self.makers.insert(name.to_string(), (nparams, maker));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.makers.keys().map(String::as_str)
    }

    pub fn make(&self, name: &str, params: &[W]) -> Result<Box<dyn MapSpec<W>>, DynError> {
        let (n, maker) = self.makers.get(name).ok_or_else(|| DynError::UnknownMap(name.into()))?;
        if params.len() != *n {
            return Err(DynError::Params { name: name.into(), msg: format!("expects {n} parameter(s), got {}", params.len()) });
        }
        maker(params)
    }
}

/// One application of `f` with the machine bound enforced.
pub fn step<W: Word>(f: &dyn MapSpec<W>, u: &[W], mnat: W, t: u64) -> Result<Vec<W>, DynError> {
    let v = f.apply(u).map_err(|cell| DynError::Domain { step: t, map: f.name().into(), cell })?;
    if v.len() != u.len() {
        return Err(DynError::Shape { got: v.len(), want: u.len() });
    }
    if let Some(cell) = v.iter().position(|&x| x > mnat) {
        return Err(DynError::Escape { step: t, cell });
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iteration<W> {
    pub last: Vec<W>,
    /// `(t, state)` at every multiple of the snapshot interval, `t = 0` included
    pub snapshots: Vec<(u64, Vec<W>)>,
}

/// `n`-fold application of `f` to `u`. `n = 0` returns `u` unchanged.
pub fn iterate<W: Word>(
    f: &dyn MapSpec<W>,
    u: &[W],
    n: u64,
    snapshot_every: Option<u64>,
    mnat: W,
) -> Result<Iteration<W>, DynError> {
    if let Some(cell) = u.iter().position(|&x| x > mnat) {
        return Err(DynError::Escape { step: 0, cell });
    }
    let mut cur = u.to_vec();
    let mut snapshots = Vec::new();
    let every = snapshot_every.filter(|&k| k > 0);
    if every.is_some() {
        snapshots.push((0, cur.clone()));
    }
    for t in 1..=n {
        cur = step(f, &cur, mnat, t)?;
        if every.is_some_and(|k| t % k == 0) {
            snapshots.push((t, cur.clone()));
        }
    }
    Ok(Iteration { last: cur, snapshots })
}

/// Exhaustive evaluation is used up to this many states.
pub const EXHAUSTIVE_STATES: u64 = 1_000_000;

/// A box containing `f(u)` for every `u` in `p`. Exact when the box has at
/// most [`EXHAUSTIVE_STATES`] states; otherwise the map's analytic bound.
pub fn bound_range<W: Word>(f: &dyn MapSpec<W>, p: &BoxRegion<W>, mnat: W) -> Result<BoxRegion<W>, DynError> {
    match state_count(p, W::from(EXHAUSTIVE_STATES).unwrap_or(W::max_value())) {
        StateCount::Exact(_) => {
            let mut lo: Option<Vec<W>> = None;
            let mut hi: Option<Vec<W>> = None;
            for u in p.states() {
                let v = step(f, &u, mnat, 1)?;
                match (&mut lo, &mut hi) {
                    (Some(lo), Some(hi)) => {
                        for i in 0..v.len() {
                            lo[i] = lo[i].min(v[i]);
                            hi[i] = hi[i].max(v[i]);
                        }
                    }
                    _ => {
                        lo = Some(v.clone());
                        hi = Some(v);
                    }
                }
            }
            Ok(BoxRegion { a: lo.unwrap_or_default(), b: hi.unwrap_or_default() })
        }
        StateCount::Saturated => {
            let q = f.analytic_bound(p).ok_or_else(|| DynError::Unbounded(f.name().into()))?;
            if let Some(cell) = q.b.iter().position(|&x| x > mnat) {
                return Err(DynError::Escape { step: 1, cell });
            }
            Ok(q)
        }
    }
}

/// Evidence that `bndf [p] [q]` and `subbx [q p]` hold, so `itf [u n] [w]`
/// is computable for every `u` in `p` and every `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxcCertificate<W> {
    pub p: BoxRegion<W>,
    pub q: BoxRegion<W>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxcRefusal<W: Debug + Display> {
    #[error("range bound {q} is not inside {p}")]
    NotInside { p: BoxRegion<W>, q: BoxRegion<W> },
    #[error(transparent)]
    Bound(#[from] DynError),
}

pub fn certify_axc<W: Word>(f: &dyn MapSpec<W>, p: &BoxRegion<W>, mnat: W) -> Result<AxcCertificate<W>, AxcRefusal<W>> {
    let q = bound_range(f, p, mnat)?;
    if q.within(p) {
        Ok(AxcCertificate { p: p.clone(), q })
    } else {
        Err(AxcRefusal::NotInside { p: p.clone(), q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateCount<W> {
    Exact(W),
    /// the product exceeds the cap
    Saturated,
}

/// Number of distinct arrays in `p`, or `Saturated` above `cap`.
pub fn state_count<W: Word>(p: &BoxRegion<W>, cap: W) -> StateCount<W> {
    let mut total = W::one();
    for (&a, &b) in p.a.iter().zip(&p.b) {
        let side = match (b - a).checked_add(&W::one()) {
            Some(s) => s,
            None => return StateCount::Saturated,
        };
        total = match total.checked_mul(&side) {
            Some(t) if t <= cap => t,
            _ => return StateCount::Saturated,
        };
    }
    StateCount::Exact(total)
}

/// `iterate(u0, tcyc + pcyc) = iterate(u0, tcyc)` with both minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport<W> {
    pub tcyc: u64,
    pub pcyc: u64,
    /// the state at time `tcyc`
    pub witness: Vec<W>,
}

impl<W> CycleReport<W> {
    pub fn is_fixed_point(&self) -> bool {
        self.pcyc == 1
    }
}

impl<W> Display for CycleReport<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tcyc={} pcyc={}", self.tcyc, self.pcyc)
    }
}

/// States remembered before switching to Brent's algorithm.
pub const HASH_CAP: usize = 1 << 20;

/// Find the cycle the orbit of `u0` enters, looking at most `limit` steps
/// ahead. `Ok(None)` means the limit was reached first.
pub fn detect_cycle<W: Word>(
    f: &dyn MapSpec<W>,
    u0: &[W],
    limit: u64,
    mnat: W,
) -> Result<Option<CycleReport<W>>, DynError> {
    detect_cycle_with_cap(f, u0, limit, mnat, HASH_CAP)
}

pub fn detect_cycle_with_cap<W: Word>(
    f: &dyn MapSpec<W>,
    u0: &[W],
    limit: u64,
    mnat: W,
    cap: usize,
) -> Result<Option<CycleReport<W>>, DynError> {
    let mut seen: HashMap<Vec<W>, u64> = HashMap::new();
    let mut cur = u0.to_vec();
    let mut t = 0u64;
    while seen.len() < cap {
        if let Some(&first) = seen.get(&cur) {
            return Ok(Some(CycleReport { tcyc: first, pcyc: t - first, witness: cur }));
        }
        if t == limit {
            return Ok(None);
        }
        seen.insert(cur.clone(), t);
        t += 1;
        cur = step(f, &cur, mnat, t)?;
    }
    drop(seen);
    brent(f, u0, limit, mnat)
}

fn brent<W: Word>(f: &dyn MapSpec<W>, u0: &[W], limit: u64, mnat: W) -> Result<Option<CycleReport<W>>, DynError> {
    let next = |u: &[W], t: u64| step(f, u, mnat, t);
    // period
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = u0.to_vec();
    let mut hare = next(u0, 1)?;
    let mut steps = 1u64;
    while tortoise != hare {
        if steps >= limit {
            return Ok(None);
        }
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        steps += 1;
        hare = next(&hare, steps)?;
        lam += 1;
    }
    // entry time
    let mut tortoise = u0.to_vec();
    let mut hare = u0.to_vec();
    for t in 1..=lam {
        hare = next(&hare, t)?;
    }
    let mut mu = 0u64;
    while tortoise != hare {
        mu += 1;
        tortoise = next(&tortoise, mu)?;
        hare = next(&hare, mu + lam)?;
    }
    Ok(Some(CycleReport { tcyc: mu, pcyc: lam, witness: tortoise }))
}
