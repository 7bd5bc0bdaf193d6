//! List algebra over ordered sequences: concatenation, chains, intersection,
//! difference, duplicate removal and the sublist relations.
//!
//! Membership is decided by `PartialEq`, so every operation works on labels,
//! integers or nested lists alike.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("list of length {len} exceeds capacity {cap}")]
pub struct CapacityError {
    pub len: usize,
    pub cap: usize,
}

/// `u` followed by `v`. Fails when the result would be longer than `cap`.
pub fn concat_lists<T: Clone>(u: &[T], v: &[T], cap: Option<usize>) -> Result<Vec<T>, CapacityError> {
    let len = u.len() + v.len();
    if let Some(cap) = cap {
        if len > cap {
            return Err(CapacityError { len, cap });
        }
    }
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(u);
    out.extend_from_slice(v);
    Ok(out)
}

/// Variadic concatenation, folded pairwise from the left.
pub fn chain<T: Clone>(parts: &[&[T]], cap: Option<usize>) -> Result<Vec<T>, CapacityError> {
    parts.iter().try_fold(Vec::new(), |acc, part| concat_lists(&acc, part, cap))
}

/// Elements of `u` that also occur in `v`, in first-occurrence order of `u`, without repeats.
pub fn cap_lists<T: Clone + PartialEq>(u: &[T], v: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for e in u {
        if v.contains(e) && !out.contains(e) {
            out.push(e.clone());
        }
    }
    out
}

/// Elements of `u` not in `v`, keeping order and multiplicity.
pub fn minus_lists<T: Clone + PartialEq>(u: &[T], v: &[T]) -> Vec<T> {
    u.iter().filter(|e| !v.contains(e)).cloned().collect()
}

/// First occurrence of every element, in order.
pub fn unique_list<T: Clone + PartialEq>(u: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(u.len());
    for e in u {
        if !out.contains(e) {
            out.push(e.clone());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SublistFlags {
    /// every element of `u` occurs in `v`
    pub sublst: bool,
    /// sublist in both directions
    pub equivlst: bool,
    /// identical sequences
    pub eqlst: bool,
}

pub fn sublist_check<T: PartialEq>(u: &[T], v: &[T]) -> SublistFlags {
    let sublst = u.iter().all(|e| v.contains(e));
    let back = v.iter().all(|e| u.contains(e));
    SublistFlags { sublst, equivlst: sublst && back, eqlst: u == v }
}

pub fn sublst<T: PartialEq>(u: &[T], v: &[T]) -> bool {
    u.iter().all(|e| v.contains(e))
}

pub fn equivlst<T: PartialEq>(u: &[T], v: &[T]) -> bool {
    sublist_check(u, v).equivlst
}
