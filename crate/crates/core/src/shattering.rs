//! Shattering and strong shattering.
//!
//! `S` shatters `Y` when every pattern on `Y` extends to a member (∀f ∃g);
//! it strongly shatters `Y` when one fixed extension works for all patterns
//! (∃g ∀f), i.e. `S` contains a whole `Y`-cube.
//!
//! The families `str(S)` and `sstr(S)` are computed two ways. The reference
//! path evaluates the quantifiers directly for every `Y`. The default path
//! walks the subset lattice once, carrying the projection
//! `⋒_Y(S)` (resp. `⊎_{X−Y}(S)`) from parent to child, for a total cost of
//! `3^n` table cells.

use serde::Serialize;

use crate::bits::{submasks, Table};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::system::{DimSet, System};

pub fn shatters(s: &System, y: DimSet) -> Result<bool> {
    s.check_subset(y)?;
    Ok(shatters_unchecked(s.table(), y.0))
}

pub fn strongly_shatters(s: &System, y: DimSet) -> Result<bool> {
    s.check_subset(y)?;
    Ok(strongly_shatters_unchecked(s.table(), y.0))
}

pub(crate) fn shatters_unchecked(t: &Table, y: u32) -> bool {
    let rest = t.full_mask() & !y;
    submasks(y).all(|f| submasks(rest).any(|g| t.get(f | g)))
}

pub(crate) fn strongly_shatters_unchecked(t: &Table, y: u32) -> bool {
    let rest = t.full_mask() & !y;
    submasks(rest).any(|g| submasks(y).all(|f| t.get(f | g)))
}

/// `str(S)` by evaluating [`shatters`] on every subset.
pub fn str_family_reference(s: &System) -> Family {
    let t = s.table();
    let sets = submasks(t.full_mask())
        .filter(|&y| shatters_unchecked(t, y))
        .collect();
    Family::from_masks_unchecked(s.dims_arc().clone(), sets)
}

/// `sstr(S)` by evaluating [`strongly_shatters`] on every subset.
pub fn sstr_family_reference(s: &System) -> Family {
    let t = s.table();
    let sets = submasks(t.full_mask())
        .filter(|&y| strongly_shatters_unchecked(t, y))
        .collect();
    Family::from_masks_unchecked(s.dims_arc().clone(), sets)
}

/// Position of original axis `a` once the axes in `removed` are compressed out.
#[inline]
fn compressed_axis(a: usize, removed: u32) -> usize {
    a - (removed & ((1u32 << a) - 1)).count_ones() as usize
}

fn sstr_walk(t: &Table, y: u32, from: usize, n: usize, out: &mut Vec<u32>) {
    out.push(y);
    for a in from..n {
        let child = t.project_inter(1 << compressed_axis(a, y));
        // sstr is downward closed: an empty ⋒_Y kills every superset of Y.
        if !child.is_empty() {
            sstr_walk(&child, y | 1 << a, a + 1, n, out);
        }
    }
}

fn str_walk(t: &Table, z: u32, from: usize, n: usize, out: &mut Vec<u32>) {
    if t.is_full() {
        out.push(((1u64 << n) - 1) as u32 & !z);
    }
    for a in from..n {
        let child = t.project_union(1 << compressed_axis(a, z));
        if !child.is_empty() {
            str_walk(&child, z | 1 << a, a + 1, n, out);
        }
    }
}

/// `str(S)`: every shattered subset of `dim(S)`.
pub fn str_family(s: &System) -> Family {
    warn_if_large(s);
    let mut out = Vec::new();
    if !s.is_empty() {
        str_walk(s.table(), 0, 0, s.n(), &mut out);
    }
    Family::from_masks_unchecked(s.dims_arc().clone(), out)
}

/// `sstr(S)`: every strongly shattered subset of `dim(S)`.
pub fn sstr_family(s: &System) -> Family {
    warn_if_large(s);
    let mut out = Vec::new();
    if !s.is_empty() {
        sstr_walk(s.table(), 0, 0, s.n(), &mut out);
    }
    Family::from_masks_unchecked(s.dims_arc().clone(), out)
}

fn warn_if_large(s: &System) {
    if s.n() > 16 {
        log::warn!(
            "computing a shattering family over {} dimensions costs about 3^{} steps",
            s.n(),
            s.n()
        );
    }
}

/// VC dimension; `-1` for the empty system.
pub fn vc_dim(s: &System) -> i32 {
    str_family(s).max_size().map_or(-1, |k| k as i32)
}

/// Dual VC dimension (largest strongly shattered set); `-1` for the empty system.
pub fn dual_vc_dim(s: &System) -> i32 {
    sstr_family(s).max_size().map_or(-1, |k| k as i32)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Sandwich {
    /// `|sstr(S)|`
    pub lo: usize,
    /// `|S|`
    pub mid: usize,
    /// `|str(S)|`
    pub hi: usize,
}

/// `(|sstr(S)|, |S|, |str(S)|)`, with the ordering `lo <= mid <= hi` enforced.
pub fn sandwich(s: &System) -> Result<Sandwich> {
    let triple = Sandwich {
        lo: sstr_family(s).len(),
        mid: s.len(),
        hi: str_family(s).len(),
    };
    if triple.lo <= triple.mid && triple.mid <= triple.hi {
        Ok(triple)
    } else {
        Err(Error::violation(
            format!("sandwich ordering broken: {triple:?}"),
            Some(s),
        ))
    }
}

/// `A ⊕_x B = A ∪ B ∪ { c ∪ {x} : c ∈ A ∩ B }`, over the ground extended by `x`.
pub fn oplus(a: &Family, b: &Family, x: &str) -> Result<Family> {
    if a.ground() != b.ground() {
        return Err(Error::DimMismatch("⊕ operands have different grounds".into()));
    }
    if a.ground().iter().any(|g| g == x) {
        return Err(Error::InvalidInput(format!("`{x}` already belongs to the ground")));
    }
    let xbit = 1u32 << a.ground().len();
    let mut ground = a.ground().to_vec();
    ground.push(x.to_string());
    let both = a.intersection(b)?;
    let sets = a
        .sets()
        .chain(b.sets())
        .map(|s| s.0)
        .chain(both.sets().map(|s| s.0 | xbit));
    Family::new(ground, sets)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Sauer's bound `Σ_{i=0}^{vc} C(n, i)`; zero for the empty system.
pub fn sauer_bound(s: &System) -> u64 {
    let vc = vc_dim(s);
    if vc < 0 {
        return 0;
    }
    (0..=vc as u64).map(|i| binomial(s.n() as u64, i)).sum()
}

/// Meets Sauer's bound with equality.
pub fn is_maximum(s: &System) -> bool {
    s.len() as u64 == sauer_bound(s)
}
