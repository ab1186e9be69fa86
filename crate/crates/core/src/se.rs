//! Shattering-extremality verdicts.
//!
//! Each [`SeMethod`] decides SE through a different characterization. They
//! are computed independently of one another so that comparing them is a
//! meaningful check rather than a tautology.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::bits::{submasks, Table};
use crate::error::{Error, Result};
use crate::operators::{commutes_on, shift_axes, Op, OpSequence, MAX_SHIFT_DIMS};
use crate::shattering::{
    dual_vc_dim, is_maximum, oplus, sandwich, sauer_bound, shatters_unchecked, sstr_family,
    str_family, strongly_shatters_unchecked, vc_dim, Sandwich,
};
use crate::system::{Cube, DimSet, System};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeMethod {
    /// `sstr(S) = str(S)`
    ByDefinition,
    /// `|S| = |str(S)|`
    CardUpper,
    /// `|sstr(S)| = |S|`
    CardLower,
    Lopsided,
    DualLopsided,
    /// Recursion through the two restrictions at `dims[0]`.
    RecursiveRestrictions,
    /// Recursion through the two derivatives at `dims[0]`.
    RecursiveDerivatives,
    /// `⋒_{Y'}` and `⊎_{Y''}` commute for all disjoint `Y'`, `Y''`.
    BoolCommutation,
    /// All full down-shift sequences give the same system.
    ShiftConfluence,
}

impl SeMethod {
    pub const ALL: [SeMethod; 9] = [
        SeMethod::ByDefinition,
        SeMethod::CardUpper,
        SeMethod::CardLower,
        SeMethod::Lopsided,
        SeMethod::DualLopsided,
        SeMethod::RecursiveRestrictions,
        SeMethod::RecursiveDerivatives,
        SeMethod::BoolCommutation,
        SeMethod::ShiftConfluence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeMethod::ByDefinition => "by_definition",
            SeMethod::CardUpper => "card_upper",
            SeMethod::CardLower => "card_lower",
            SeMethod::Lopsided => "lopsided",
            SeMethod::DualLopsided => "dual_lopsided",
            SeMethod::RecursiveRestrictions => "recursive_restrictions",
            SeMethod::RecursiveDerivatives => "recursive_derivatives",
            SeMethod::BoolCommutation => "bool_commutation",
            SeMethod::ShiftConfluence => "shift_confluence",
        }
    }

    /// Whether the method can run on an `n`-dimensional system.
    pub fn supports(self, n: usize) -> bool {
        self != SeMethod::ShiftConfluence || n <= MAX_SHIFT_DIMS
    }
}

impl fmt::Display for SeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown SE method `{s}`")))
    }
}

pub fn is_se(s: &System, method: SeMethod) -> Result<bool> {
    Ok(match method {
        SeMethod::ByDefinition => se_by_definition(s),
        SeMethod::CardUpper => s.len() == str_family(s).len(),
        SeMethod::CardLower => sstr_family(s).len() == s.len(),
        SeMethod::Lopsided => lopsided(s),
        SeMethod::DualLopsided => dual_lopsided(s),
        SeMethod::RecursiveRestrictions => recursive_restrictions(s),
        SeMethod::RecursiveDerivatives => recursive_derivatives(s),
        SeMethod::BoolCommutation => bool_commutation(s),
        SeMethod::ShiftConfluence => shift_confluence(s)?,
    })
}

fn se_by_definition(s: &System) -> bool {
    str_family(s) == sstr_family(s)
}

/// For every split `{X', X''}` exactly one of: `S` contains an `X'`-cube,
/// `¬S` contains an `X''`-cube.
fn lopsided(s: &System) -> bool {
    let t = s.table();
    let c = t.complement();
    let all = t.full_mask();
    submasks(all).all(|a| {
        strongly_shatters_unchecked(t, a) != strongly_shatters_unchecked(&c, all & !a)
    })
}

/// For every split `{X', X''}` exactly one of: `S` shatters `X'`, `¬S` shatters `X''`.
fn dual_lopsided(s: &System) -> bool {
    let t = s.table();
    let c = t.complement();
    let all = t.full_mask();
    submasks(all).all(|a| shatters_unchecked(t, a) != shatters_unchecked(&c, all & !a))
}

fn recursive_with(s: &System, pivot: &str, split: SplitKind) -> Result<bool> {
    let (a, b) = match split {
        SplitKind::Restrictions => s.restrictions(pivot)?,
        SplitKind::Derivatives => crate::operators::derivatives(s, pivot)?,
    };
    let sub = |t: &System| {
        t.dims()
            .first()
            .cloned()
            .map_or(Ok(true), |p| recursive_with(t, &p, split))
    };
    if !sub(&a)? || !sub(&b)? {
        return Ok(false);
    }
    let combined = oplus(&str_family(&a), &str_family(&b), pivot)?;
    Ok(combined.same_sets(&str_family(s)))
}

#[derive(Clone, Copy)]
enum SplitKind {
    Restrictions,
    Derivatives,
}

fn recursive_restrictions(s: &System) -> bool {
    match s.dims().first() {
        None => true,
        Some(p) => recursive_with(s, &p.clone(), SplitKind::Restrictions)
            .expect("pivot taken from the system's own dims"),
    }
}

fn recursive_derivatives(s: &System) -> bool {
    match s.dims().first() {
        None => true,
        Some(p) => recursive_with(s, &p.clone(), SplitKind::Derivatives)
            .expect("pivot taken from the system's own dims"),
    }
}

/// The restriction-recursive criterion with an explicit top-level pivot.
pub fn is_se_recursive_at(s: &System, pivot: &str) -> Result<bool> {
    recursive_with(s, pivot, SplitKind::Restrictions)
}

/// The derivative-recursive criterion with an explicit top-level pivot.
pub fn is_se_recursive_derivatives_at(s: &System, pivot: &str) -> Result<bool> {
    recursive_with(s, pivot, SplitKind::Derivatives)
}

/// Re-expresses `mask` in the coordinates left after compressing out `removed`.
#[inline]
fn squeeze(mask: u32, removed: u32) -> u32 {
    let mut out = 0u32;
    let mut pos = 0;
    let mut i = 0;
    let mut rest = !removed;
    while rest != 0 && i < 32 {
        if rest & 1 == 1 {
            if mask >> i & 1 == 1 {
                out |= 1 << pos;
            }
            pos += 1;
        }
        rest >>= 1;
        i += 1;
    }
    out
}

/// `⋒_{Y'} ∘ ⊎_{Y''}` versus `⊎_{Y''} ∘ ⋒_{Y'}` on a table.
fn inter_union_commute(t: &Table, inter: u32, union: u32) -> bool {
    let a = t.project_union(union).project_inter(squeeze(inter, union));
    let b = t.project_inter(inter).project_union(squeeze(union, inter));
    a == b
}

fn bool_commutation_within(t: &Table, max_size: usize) -> bool {
    let all = t.full_mask();
    submasks(all).all(|inter| {
        let room = max_size.saturating_sub(inter.count_ones() as usize);
        inter == 0
            || submasks(all & !inter).all(|union| {
                union == 0
                    || union.count_ones() as usize > room
                    || inter_union_commute(t, inter, union)
            })
    })
}

fn bool_commutation(s: &System) -> bool {
    bool_commutation_within(s.table(), s.n())
}

fn shift_confluence(s: &System) -> Result<bool> {
    if s.n() > MAX_SHIFT_DIMS {
        return Err(Error::Capacity(format!(
            "shift confluence enumerates {}! sequences; limit is {MAX_SHIFT_DIMS} dimensions",
            s.n()
        )));
    }
    Ok(shifts_confluent_on(s.table(), DimSet::full(s.n())))
}

fn shifts_confluent_on(t: &Table, y: DimSet) -> bool {
    let axes: Vec<usize> = y.iter().collect();
    let mut orders = axes.iter().copied().permutations(axes.len());
    let first = match orders.next() {
        Some(o) => shift_axes(t, &o),
        None => return true,
    };
    orders.all(|o| shift_axes(t, &o) == first)
}

/// Every restriction to a cube with at most `k` free dimensions is SE.
pub fn is_k_se(s: &System, k: usize) -> bool {
    if k >= s.n() {
        return se_by_definition(s);
    }
    s.all_dims()
        .subsets()
        .filter(|y| y.len() <= k)
        .all(|y| {
            Cube::all_with_free(s, y).all(|c| {
                let r = s.restrict(&c).expect("cube built from the system");
                se_by_definition(&r)
            })
        })
}

/// Largest `k <= n` such that `S` is `k`-SE.
pub fn max_k_se(s: &System) -> usize {
    (0..=s.n())
        .take_while(|&k| is_k_se(s, k))
        .last()
        .unwrap_or(0)
}

/// `⋒_{Y'}` and `⊎_{Y''}` commute on `S` for all disjoint `Y'`, `Y''` with
/// `|Y' ∪ Y''| <= k`.
pub fn refined_bool_commutation(s: &System, k: usize) -> bool {
    bool_commutation_within(s.table(), k)
}

/// Every meaningful sequence of single-dimension Boolean operators `Q` with
/// `|dim(Q)| <= k` commutes on `S`.
///
/// Sequences of wider operators reduce to these through
/// `α_Y ∘ α_{Y'} = α_{Y ∪ Y'}`.
pub fn refined_bool_sequences(s: &System, k: usize) -> Result<bool> {
    for z in s.all_dims().subsets().filter(|z| z.len() <= k && z.len() >= 2) {
        let labels = s.labels_of(z);
        for kinds in DimSet::full(labels.len()).subsets() {
            let q: OpSequence = labels
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    if kinds.contains(i) {
                        Op::inter(&[l])
                    } else {
                        Op::union(&[l])
                    }
                })
                .collect();
            if !commutes_on(s, &q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// For every `Y` with `|Y| <= k`, all down-shift sequences of `Y` agree on `S`.
pub fn refined_shift_confluence(s: &System, k: usize) -> Result<bool> {
    if k.min(s.n()) > MAX_SHIFT_DIMS {
        return Err(Error::Capacity(format!(
            "refined shift confluence beyond {MAX_SHIFT_DIMS} dimensions"
        )));
    }
    Ok(s
        .all_dims()
        .subsets()
        .filter(|y| y.len() <= k && y.len() >= 2)
        .all(|y| shifts_confluent_on(s.table(), y)))
}

#[derive(Clone, Debug, Serialize)]
pub struct MethodVerdict {
    pub method: SeMethod,
    /// `None` when the method is out of its capacity range for this system.
    pub verdict: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeReport {
    pub dims: Vec<String>,
    pub size: usize,
    pub se: bool,
    pub methods: Vec<MethodVerdict>,
    pub sandwich: Sandwich,
    pub vc: i32,
    pub dvc: i32,
    pub max_k_se: usize,
    pub sauer_bound: u64,
    pub maximum: bool,
}

/// Runs every method plus the numeric invariants. Any disagreement between
/// methods is reported as a theorem violation carrying the system.
pub fn se_report(s: &System) -> Result<SeReport> {
    let mut methods = Vec::with_capacity(SeMethod::ALL.len());
    for m in SeMethod::ALL {
        let verdict = if m.supports(s.n()) {
            Some(is_se(s, m)?)
        } else {
            None
        };
        methods.push(MethodVerdict { method: m, verdict });
    }
    let verdicts: Vec<bool> = methods.iter().filter_map(|m| m.verdict).collect();
    let se = verdicts[0];
    if verdicts.iter().any(|&v| v != se) {
        let detail = methods
            .iter()
            .filter_map(|m| m.verdict.map(|v| format!("{}={v}", m.method)))
            .join(" ");
        return Err(Error::violation(format!("SE methods disagree: {detail}"), Some(s)));
    }
    let max_k = max_k_se(s);
    if se != (max_k == s.n()) {
        return Err(Error::violation("k-SE at k = n disagrees with SE", Some(s)));
    }
    Ok(SeReport {
        dims: s.dims().to_vec(),
        size: s.len(),
        se,
        methods,
        sandwich: sandwich(s)?,
        vc: vc_dim(s),
        dvc: dual_vc_dim(s),
        max_k_se: max_k,
        sauer_bound: sauer_bound(s),
        maximum: is_maximum(s),
    })
}

impl fmt::Display for SeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dims: {}", self.dims.join(" "))?;
        writeln!(f, "size: {}", self.size)?;
        writeln!(f, "SE: {}", self.se)?;
        for m in &self.methods {
            match m.verdict {
                Some(v) => writeln!(f, "method.{}: {v}", m.method)?,
                None => writeln!(f, "method.{}: skipped", m.method)?,
            }
        }
        writeln!(
            f,
            "sandwich: {} {} {}",
            self.sandwich.lo, self.sandwich.mid, self.sandwich.hi
        )?;
        writeln!(f, "vc: {}", self.vc)?;
        writeln!(f, "dvc: {}", self.dvc)?;
        writeln!(f, "max_k_SE: {}", self.max_k_se)?;
        writeln!(f, "sauer_bound: {}", self.sauer_bound)?;
        writeln!(f, "maximum: {}", self.maximum)
    }
}
