//! Boolean operators `⊎_Y`/`⋒_Y`, derivatives, down-shifts and operator
//! sequences.
//!
//! `⊎_Y(S)` keeps a vertex `g` of `{0,1}^{X−Y}` when some completion on `Y`
//! lies in `S`; `⋒_Y(S)` keeps it when every completion does. Both drop the
//! dimensions in `Y` and keep the remaining ones in their original order.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::bits::Table;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::system::{DimSet, System};

/// Permutation budget for [`commutes_on`].
pub const MAX_PERMUTATIONS: usize = 10_000;

/// Largest dimension count for which all `n!` full shift sequences are enumerated.
pub const MAX_SHIFT_DIMS: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BoolKind {
    Union,
    Inter,
}

fn project(s: &System, y: DimSet, kind: BoolKind) -> Result<System> {
    s.check_subset(y)?;
    let table = match kind {
        BoolKind::Union => s.table().project_union(y.0),
        BoolKind::Inter => s.table().project_inter(y.0),
    };
    let dims: Vec<String> = s.labels_of(s.all_dims().minus(y));
    Ok(System::from_parts(dims.into(), table))
}

/// `⊎_Y(S)`.
pub fn bool_union(s: &System, y: DimSet) -> Result<System> {
    project(s, y, BoolKind::Union)
}

/// `⋒_Y(S)`.
pub fn bool_inter(s: &System, y: DimSet) -> Result<System> {
    project(s, y, BoolKind::Inter)
}

/// The derivatives `(⊎_{x}(S), ⋒_{x}(S))`.
pub fn derivatives(s: &System, x: &str) -> Result<(System, System)> {
    let y = DimSet::single(s.dim_index(x)?);
    Ok((bool_union(s, y)?, bool_inter(s, y)?))
}

/// Down-shift on `x`: every `x`-edge is sorted so that a lone member moves
/// to the endpoint with `x = 0`.
pub fn down_shift(s: &System, x: &str) -> Result<System> {
    let i = s.dim_index(x)?;
    Ok(System::from_parts(
        s.dims_arc().clone(),
        s.table().shift_down(i),
    ))
}

/// Applies down-shifts along the given axes, left to right.
pub(crate) fn shift_axes(t: &Table, order: &[usize]) -> Table {
    let mut cur = t.clone();
    for &a in order {
        cur = cur.shift_down(a);
    }
    cur
}

/// A single operator, addressed by dimension labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Op {
    Union(Vec<String>),
    Inter(Vec<String>),
    Shift(String),
}

impl Op {
    pub fn union<S: AsRef<str>>(labels: &[S]) -> Op {
        Op::Union(labels.iter().map(|l| l.as_ref().to_string()).collect())
    }

    pub fn inter<S: AsRef<str>>(labels: &[S]) -> Op {
        Op::Inter(labels.iter().map(|l| l.as_ref().to_string()).collect())
    }

    pub fn shift(label: &str) -> Op {
        Op::Shift(label.to_string())
    }

    pub fn is_boolean(&self) -> bool {
        !matches!(self, Op::Shift(_))
    }

    /// `dim(q)`.
    pub fn dims(&self) -> &[String] {
        match self {
            Op::Union(d) | Op::Inter(d) => d,
            Op::Shift(x) => std::slice::from_ref(x),
        }
    }

    pub fn apply(&self, s: &System) -> Result<System> {
        match self {
            Op::Union(d) => bool_union(s, s.dim_set(d)?),
            Op::Inter(d) => bool_inter(s, s.dim_set(d)?),
            Op::Shift(x) => down_shift(s, x),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Union(d) => write!(f, "u:{}", d.join(",")),
            Op::Inter(d) => write!(f, "i:{}", d.join(",")),
            Op::Shift(x) => write!(f, "d:{x}"),
        }
    }
}

/// An ordered list of operators, applied left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct OpSequence {
    ops: Vec<Op>,
}

impl OpSequence {
    pub fn new(ops: Vec<Op>) -> Self {
        OpSequence { ops }
    }

    /// Down-shifts along `labels`, in that order.
    pub fn shifts<S: AsRef<str>>(labels: &[S]) -> Self {
        OpSequence::new(labels.iter().map(|l| Op::shift(l.as_ref())).collect())
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Boolean operators have pairwise disjoint dimensions (repeats within
    /// one operator also count as overlap).
    pub fn is_meaningful(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.ops
            .iter()
            .filter(|op| op.is_boolean())
            .flat_map(|op| op.dims())
            .all(|d| seen.insert(d.as_str()))
    }

    /// `dim(Q)`: the union of the operators' dimensions.
    pub fn dims(&self) -> BTreeSet<String> {
        self.ops.iter().flat_map(|op| op.dims().iter().cloned()).collect()
    }

    /// Parses `u:x,y` / `i:x` / `d:x` operators chained by commas, e.g.
    /// `i:x,u:y,z,d:w` is `⋒_{x}`, then `⊎_{y,z}`, then the shift on `w`.
    /// A bare label continues the label list of the preceding `u:`/`i:`.
    pub fn parse(text: &str) -> Result<OpSequence> {
        let mut ops: Vec<Op> = Vec::new();
        let text = text.trim();
        if text.is_empty() {
            return Ok(OpSequence::default());
        }
        for token in text.split(',').map(str::trim) {
            let bad = || Error::InvalidInput(format!("bad operator token `{token}`"));
            match token.split_once(':') {
                Some((kind, label)) => {
                    let labels: Vec<String> = if label.is_empty() {
                        Vec::new()
                    } else {
                        vec![label.to_string()]
                    };
                    ops.push(match kind {
                        "u" => Op::Union(labels),
                        "i" => Op::Inter(labels),
                        "d" if !label.is_empty() => Op::Shift(label.to_string()),
                        _ => return Err(bad()),
                    });
                }
                None if !token.is_empty() => match ops.last_mut() {
                    Some(Op::Union(d)) | Some(Op::Inter(d)) => d.push(token.to_string()),
                    _ => return Err(bad()),
                },
                None => return Err(bad()),
            }
        }
        Ok(OpSequence { ops })
    }
}

impl fmt::Display for OpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ops.iter().join(","))
    }
}

impl FromIterator<Op> for OpSequence {
    fn from_iter<I: IntoIterator<Item = Op>>(iter: I) -> Self {
        OpSequence::new(iter.into_iter().collect())
    }
}

/// `Q(S)`: the operators applied one after the other.
///
/// A Boolean sequence that is not meaningful, or any step whose target
/// dimension is no longer present, yields [`Error::NowhereDefined`].
pub fn apply_sequence(s: &System, q: &OpSequence) -> Result<System> {
    if !q.is_meaningful() {
        return Err(Error::NowhereDefined(format!(
            "Boolean operators in `{q}` share dimensions"
        )));
    }
    let mut cur = s.clone();
    for op in q.ops() {
        cur = op.apply(&cur).map_err(|e| match e {
            Error::UnknownDim(d) => {
                Error::NowhereDefined(format!("`{op}` needs dimension `{d}`"))
            }
            other => other,
        })?;
    }
    Ok(cur)
}

/// `S` shatters `Y` iff `⋒_Y ∘ ⊎_{X−Y}(S) = K1`.
pub fn shatters_via_ops(s: &System, y: DimSet) -> Result<bool> {
    s.check_subset(y)?;
    let rest = s.all_dims().minus(y);
    let projected = bool_union(s, rest)?;
    let y_now = DimSet::full(projected.n());
    Ok(bool_inter(&projected, y_now)? == System::k1())
}

/// `S` strongly shatters `Y` iff `⊎_{X−Y} ∘ ⋒_Y(S) = K1`.
pub fn sshatters_via_ops(s: &System, y: DimSet) -> Result<bool> {
    s.check_subset(y)?;
    let projected = bool_inter(s, y)?;
    let rest_now = DimSet::full(projected.n());
    Ok(bool_union(&projected, rest_now)? == System::k1())
}

fn check_shift_capacity(s: &System) -> Result<()> {
    if s.n() > MAX_SHIFT_DIMS {
        Err(Error::Capacity(format!(
            "{}! full shift sequences exceeds the {MAX_SHIFT_DIMS}-dimension limit",
            s.n()
        )))
    } else {
        Ok(())
    }
}

/// `set(⊎ { Q(S) : Q a full shift sequence })`, which equals `str(S)`.
pub fn str_via_shifts(s: &System) -> Result<Family> {
    check_shift_capacity(s)?;
    let n = s.n();
    let mut acc = Table::empty(n);
    for order in (0..n).permutations(n) {
        acc = acc.union(&shift_axes(s.table(), &order));
        if acc.is_full() {
            break;
        }
    }
    Ok(System::from_parts(s.dims_arc().clone(), acc).as_sets())
}

/// `set(⋒ { Q(S) : Q a full shift sequence })`, which equals `sstr(S)`.
pub fn sstr_via_shifts(s: &System) -> Result<Family> {
    check_shift_capacity(s)?;
    let n = s.n();
    let mut acc = Table::full(n);
    for order in (0..n).permutations(n) {
        acc = acc.intersection(&shift_axes(s.table(), &order));
        if acc.is_empty() {
            break;
        }
    }
    Ok(System::from_parts(s.dims_arc().clone(), acc).as_sets())
}

/// True iff every permutation of `q` yields the same result on `S`, where
/// two nowhere-defined results count as equal.
pub fn commutes_on(s: &System, q: &OpSequence) -> Result<bool> {
    let k = q.len();
    let perms: u128 = (1..=k as u128).product();
    if perms > MAX_PERMUTATIONS as u128 {
        return Err(Error::Capacity(format!(
            "{k}! permutations exceeds the budget of {MAX_PERMUTATIONS}"
        )));
    }
    let outcome = |ops: Vec<&Op>| -> Result<Option<System>> {
        let seq: OpSequence = ops.into_iter().cloned().collect();
        match apply_sequence(s, &seq) {
            Ok(r) => Ok(Some(r)),
            Err(Error::NowhereDefined(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let first = outcome(q.ops().iter().collect())?;
    for perm in q.ops().iter().permutations(k).skip(1) {
        if outcome(perm)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(dims: &[&str], members: &[&str]) -> System {
        System::from_bitstrings(dims.iter().copied(), members).unwrap()
    }

    fn f1() -> System {
        sys(&["x", "y"], &["00", "01", "10"])
    }

    fn f2() -> System {
        sys(&["x", "y"], &["00", "11"])
    }

    #[test]
    fn boolean_operator_examples() {
        let x = DimSet(0b01);
        assert_eq!(bool_union(&f2(), x).unwrap(), sys(&["y"], &["0", "1"]));
        assert_eq!(bool_inter(&f2(), x).unwrap(), sys(&["y"], &[]));
        assert_eq!(bool_union(&f2(), DimSet::EMPTY).unwrap(), f2());
        assert_eq!(bool_inter(&f2(), DimSet::EMPTY).unwrap(), f2());
        assert_eq!(bool_union(&f1(), DimSet(0b11)).unwrap(), System::k1());
        assert_eq!(bool_inter(&f1(), DimSet(0b11)).unwrap(), System::k0());
        assert!(bool_union(&f1(), DimSet(0b100)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let (u, i) = derivatives(&f2(), "x").unwrap();
        assert_eq!((u, i), (sys(&["y"], &["0", "1"]), sys(&["y"], &[])));
        let cube = System::full(["x", "y"]).unwrap();
        let line = System::full(["y"]).unwrap();
        assert_eq!(derivatives(&cube, "x").unwrap(), (line.clone(), line));
        let (u, i) = derivatives(&f1(), "x").unwrap();
        assert_eq!((u, i), (sys(&["y"], &["0", "1"]), sys(&["y"], &["0"])));
        assert!(derivatives(&f1(), "z").is_err());
    }

    #[test]
    fn down_shift_examples() {
        assert_eq!(down_shift(&f2(), "x").unwrap(), sys(&["x", "y"], &["00", "01"]));
        assert_eq!(down_shift(&f2(), "y").unwrap(), sys(&["x", "y"], &["00", "10"]));
        assert_eq!(down_shift(&f1(), "x").unwrap(), f1());
        assert!(down_shift(&f1(), "z").is_err());
    }

    #[test]
    fn shifted_restrictions_are_the_derivatives() {
        let s = sys(&["a", "b", "c"], &["001", "010", "111", "100"]);
        for x in ["a", "b", "c"] {
            let shifted = down_shift(&s, x).unwrap();
            let (r0, r1) = shifted.restrictions(x).unwrap();
            assert_eq!((r0, r1), derivatives(&s, x).unwrap());
        }
    }

    #[test]
    fn sequence_examples() {
        let yx = OpSequence::shifts(&["y", "x"]);
        let xy = OpSequence::shifts(&["x", "y"]);
        assert_eq!(apply_sequence(&f2(), &yx).unwrap(), sys(&["x", "y"], &["00", "10"]));
        assert_eq!(apply_sequence(&f2(), &xy).unwrap(), sys(&["x", "y"], &["00", "01"]));
        assert_eq!(apply_sequence(&f2(), &OpSequence::default()).unwrap(), f2());
        assert_eq!(apply_sequence(&f1(), &xy).unwrap(), f1());
    }

    #[test]
    fn undefined_sequences() {
        let q = OpSequence::parse("i:x,u:x").unwrap();
        assert!(!q.is_meaningful());
        assert!(matches!(apply_sequence(&f2(), &q), Err(Error::NowhereDefined(_))));
        let q = OpSequence::parse("u:x,d:x").unwrap();
        assert!(q.is_meaningful());
        assert!(matches!(apply_sequence(&f2(), &q), Err(Error::NowhereDefined(_))));
    }

    #[test]
    fn parse_and_display() {
        let q = OpSequence::parse("u:x,y,i:z,d:w").unwrap();
        assert_eq!(
            q.ops(),
            &[Op::union(&["x", "y"]), Op::inter(&["z"]), Op::shift("w")]
        );
        assert_eq!(q.to_string(), "u:x,y,i:z,d:w");
        assert!(OpSequence::parse("").unwrap().is_empty());
        assert!(OpSequence::parse("d:x,y").is_err());
        assert!(OpSequence::parse("q:x").is_err());
        assert!(OpSequence::parse("x").is_err());
        assert_eq!(OpSequence::parse("u:").unwrap().ops(), &[Op::Union(vec![])]);
    }

    #[test]
    fn operator_characterizations_examples() {
        let x = DimSet(0b01);
        assert!(shatters_via_ops(&f2(), x).unwrap());
        assert!(!sshatters_via_ops(&f2(), x).unwrap());
        assert!(shatters_via_ops(&System::k1(), DimSet::EMPTY).unwrap());
        assert!(!shatters_via_ops(&System::k0(), DimSet::EMPTY).unwrap());
    }

    #[test]
    fn shift_characterization_examples() {
        let small = Family::from_labels(&["x", "y"], &[&[], &["x"], &["y"]]).unwrap();
        assert_eq!(str_via_shifts(&f2()).unwrap(), small);
        assert_eq!(
            sstr_via_shifts(&f2()).unwrap(),
            Family::from_labels(&["x", "y"], &[&[]]).unwrap()
        );
        assert_eq!(str_via_shifts(&f1()).unwrap(), small);
        assert_eq!(sstr_via_shifts(&f1()).unwrap(), small);
        let k1_sets = str_via_shifts(&System::k1()).unwrap();
        assert_eq!(k1_sets.render_sets(), vec!["-"]);
        assert_eq!(sstr_via_shifts(&System::k1()).unwrap(), k1_sets);
        let big = System::empty(crate::system::canonical_dims(7)).unwrap();
        assert!(matches!(str_via_shifts(&big), Err(Error::Capacity(_))));
    }

    #[test]
    fn commutation_examples() {
        assert!(!commutes_on(&f2(), &OpSequence::shifts(&["x", "y"])).unwrap());
        let q = OpSequence::new(vec![Op::inter(&["x"]), Op::union(&["y"])]);
        assert!(commutes_on(&f1(), &q).unwrap());
        assert!(commutes_on(&f2(), &OpSequence::shifts(&["x"])).unwrap());
        // both orders nowhere defined
        assert!(commutes_on(&f2(), &OpSequence::parse("i:x,u:x").unwrap()).unwrap());
        let long = OpSequence::shifts(&["x"; 8]);
        assert!(matches!(commutes_on(&f2(), &long), Err(Error::Capacity(_))));
    }
}
