//! Systems `S ⊆ {0,1}^X` and the elementary operations on them.
//!
//! Vertex encoding: a vertex `f` has index `Σ f(dims[i]) · 2^i`, so `dims[0]`
//! is the least significant bit. Every module and file format relies on this.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::bits::Table;
use crate::error::{Error, ParseErrorKind, Result};
use crate::family::Family;

/// Largest supported dimension count (2^20 membership bits).
pub const MAX_DIMS: usize = 20;

/// A subset of a system's dimensions, as a bitmask over dimension positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct DimSet(pub u32);

impl DimSet {
    pub const EMPTY: DimSet = DimSet(0);

    pub fn full(n: usize) -> DimSet {
        DimSet(((1u64 << n) - 1) as u32)
    }

    pub fn single(i: usize) -> DimSet {
        DimSet(1 << i)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: DimSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: DimSet) -> DimSet {
        DimSet(self.0 | other.0)
    }

    pub fn minus(self, other: DimSet) -> DimSet {
        DimSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: DimSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Positions in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// All subsets, in increasing numeric order.
    pub fn subsets(self) -> impl Iterator<Item = DimSet> {
        crate::bits::submasks(self.0).map(DimSet)
    }
}

pub(crate) fn check_labels(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || l.chars().any(char::is_whitespace) {
            return Err(Error::InvalidInput(format!(
                "label {l:?} must be non-empty and free of whitespace"
            )));
        }
        if labels[..i].contains(l) {
            return Err(Error::InvalidInput(format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

/// A set of vertices of `{0,1}^dims`, with the dimension order significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct System {
    dims: Arc<[String]>,
    table: Table,
}

impl System {
    /// Builds a system from vertex indices. Duplicate indices are tolerated.
    pub fn new<S, I>(dims: impl IntoIterator<Item = S>, members: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = u32>,
    {
        let dims: Vec<String> = dims.into_iter().map(Into::into).collect();
        let mut sys = System::empty(dims)?;
        let limit = sys.table.vertex_count() as u64;
        for v in members {
            if v as u64 >= limit {
                return Err(Error::InvalidInput(format!(
                    "vertex index {v} outside a cube of {limit} vertices"
                )));
            }
            sys.table.set(v, true);
        }
        Ok(sys)
    }

    pub fn empty<S: Into<String>>(dims: impl IntoIterator<Item = S>) -> Result<Self> {
        let dims: Vec<String> = dims.into_iter().map(Into::into).collect();
        check_labels(&dims)?;
        if dims.len() > MAX_DIMS {
            return Err(Error::Capacity(format!(
                "{} dimensions exceeds the cap of {MAX_DIMS}",
                dims.len()
            )));
        }
        let n = dims.len();
        Ok(System {
            dims: dims.into(),
            table: Table::empty(n),
        })
    }

    pub fn full<S: Into<String>>(dims: impl IntoIterator<Item = S>) -> Result<Self> {
        Ok(System::empty(dims)?.complement())
    }

    /// Members given as bitstrings, character `i` giving the value on `dims[i]`.
    pub fn from_bitstrings<S: Into<String>>(
        dims: impl IntoIterator<Item = S>,
        members: &[&str],
    ) -> Result<Self> {
        let mut sys = System::empty(dims)?;
        for m in members {
            let v = sys.parse_vertex(m).map_err(|kind| Error::parse(0, kind))?;
            sys.table.set(v, true);
        }
        Ok(sys)
    }

    /// Members decided by `pred` on every vertex index.
    pub fn from_fn<S: Into<String>>(
        dims: impl IntoIterator<Item = S>,
        mut pred: impl FnMut(u32) -> bool,
    ) -> Result<Self> {
        let mut sys = System::empty(dims)?;
        for v in 0..sys.table.vertex_count() as u32 {
            if pred(v) {
                sys.table.set(v, true);
            }
        }
        Ok(sys)
    }

    /// The empty 0-dimensional system.
    pub fn k0() -> Self {
        System {
            dims: Arc::from(Vec::new()),
            table: Table::empty(0),
        }
    }

    /// The 0-dimensional system holding its single vertex.
    pub fn k1() -> Self {
        System {
            dims: Arc::from(Vec::new()),
            table: Table::full(0),
        }
    }

    pub(crate) fn from_parts(dims: Arc<[String]>, table: Table) -> Self {
        debug_assert_eq!(dims.len(), table.n());
        System { dims, table }
    }

    /// For `n <= 6`: the system whose membership word is `word`.
    pub(crate) fn from_word(dims: Arc<[String]>, word: u64) -> Self {
        let n = dims.len();
        System {
            dims,
            table: Table::from_word(n, word),
        }
    }

    pub(crate) fn table(&self) -> &Table {
        &self.table
    }

    pub fn dims(&self) -> &[String] {
        &self.dims
    }

    pub(crate) fn dims_arc(&self) -> &Arc<[String]> {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    /// Number of members, `|S|`.
    pub fn len(&self) -> usize {
        self.table.count()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.table.is_full()
    }

    pub fn contains(&self, v: u32) -> bool {
        (v as usize) < self.table.vertex_count() && self.table.get(v)
    }

    /// Member vertex indices in increasing order.
    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.table.ones()
    }

    /// For `n <= 6`, the whole membership table as one word.
    pub fn as_word(&self) -> Option<u64> {
        (self.n() <= 6).then(|| self.table.first_word())
    }

    pub fn dim_index(&self, label: &str) -> Result<usize> {
        self.dims
            .iter()
            .position(|d| d == label)
            .ok_or_else(|| Error::UnknownDim(label.to_string()))
    }

    pub fn dim_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<DimSet> {
        let mut mask = 0u32;
        for l in labels {
            mask |= 1 << self.dim_index(l.as_ref())?;
        }
        Ok(DimSet(mask))
    }

    pub fn all_dims(&self) -> DimSet {
        DimSet::full(self.n())
    }

    pub fn labels_of(&self, y: DimSet) -> Vec<String> {
        y.iter().map(|i| self.dims[i].clone()).collect()
    }

    pub(crate) fn check_subset(&self, y: DimSet) -> Result<()> {
        if y.is_subset(self.all_dims()) {
            Ok(())
        } else {
            Err(Error::DimMismatch(format!(
                "dimension set {:#b} is not a subset of a {}-dimensional system",
                y.0,
                self.n()
            )))
        }
    }

    pub fn complement(&self) -> System {
        System {
            dims: self.dims.clone(),
            table: self.table.complement(),
        }
    }

    /// Restriction to a cube of `C(self)`, normalized onto the cube's free dimensions.
    pub fn restrict(&self, cube: &Cube) -> Result<System> {
        if cube.ambient[..] != self.dims[..] {
            return Err(Error::DimMismatch(
                "cube ambient differs from system dimensions".into(),
            ));
        }
        Ok(self.restrict_masks(cube.fixed_mask, cube.fixed_vals))
    }

    pub(crate) fn restrict_masks(&self, fixed_mask: u32, fixed_vals: u32) -> System {
        let dims: Vec<String> = DimSet(self.table.full_mask() & !fixed_mask)
            .iter()
            .map(|i| self.dims[i].clone())
            .collect();
        System {
            dims: dims.into(),
            table: self.table.restrict(fixed_mask, fixed_vals),
        }
    }

    /// `S|_{x=i}`.
    pub fn restrict_axis(&self, x: &str, value: bool) -> Result<System> {
        let i = self.dim_index(x)?;
        Ok(self.restrict_masks(1 << i, (value as u32) << i))
    }

    /// The pair `(S|_{x=0}, S|_{x=1})`.
    pub fn restrictions(&self, x: &str) -> Result<(System, System)> {
        Ok((self.restrict_axis(x, false)?, self.restrict_axis(x, true)?))
    }

    /// `set(S)`: each member as the set of dimensions it maps to 1.
    pub fn as_sets(&self) -> Family {
        Family::from_masks_unchecked(self.dims.clone(), self.members().collect())
    }

    pub fn is_x_sorted(&self, x: &str) -> Result<bool> {
        let i = self.dim_index(x)?;
        Ok(self.table.is_axis_sorted(i))
    }

    /// Every edge sorted, i.e. `set(S)` is closed under taking subsets.
    pub fn is_edge_sorted(&self) -> bool {
        (0..self.n()).all(|i| self.table.is_axis_sorted(i))
    }

    /// Member-set union `A ⊎ B`; defined only when the dimension sequences agree.
    pub fn union(&self, other: &System) -> Result<System> {
        self.same_dims(other)?;
        Ok(System {
            dims: self.dims.clone(),
            table: self.table.union(&other.table),
        })
    }

    /// Member-set intersection `A ⋒ B`; defined only when the dimension sequences agree.
    pub fn intersection(&self, other: &System) -> Result<System> {
        self.same_dims(other)?;
        Ok(System {
            dims: self.dims.clone(),
            table: self.table.intersection(&other.table),
        })
    }

    /// Member containment; both systems must share their dimension sequence.
    pub fn is_subsystem(&self, other: &System) -> Result<bool> {
        self.same_dims(other)?;
        Ok(self.table.is_subset(&other.table))
    }

    fn same_dims(&self, other: &System) -> Result<()> {
        if self.dims[..] == other.dims[..] {
            Ok(())
        } else {
            Err(Error::DimMismatch(format!(
                "[{}] vs [{}]",
                self.dims.join(" "),
                other.dims.join(" ")
            )))
        }
    }

    /// Renders a vertex as a bitstring, character `i` for `dims[i]`.
    /// The empty vertex of a 0-dimensional cube is written `-`.
    pub fn vertex_string(&self, v: u32) -> String {
        if self.n() == 0 {
            return "-".into();
        }
        (0..self.n())
            .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    fn parse_vertex(&self, text: &str) -> std::result::Result<u32, ParseErrorKind> {
        if self.n() == 0 && text == "-" {
            return Ok(0);
        }
        let found = text.chars().count();
        if found != self.n() {
            return Err(ParseErrorKind::LengthMismatch {
                expected: self.n(),
                found,
            });
        }
        let mut v = 0u32;
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v |= 1 << i,
                other => return Err(ParseErrorKind::BadChar(other)),
            }
        }
        Ok(v)
    }

    /// Parses the system file format:
    ///
    /// ```text
    /// dims: x y
    /// # comment
    /// 00
    /// 01
    /// 10
    /// ```
    ///
    /// Blank lines and `#` comments are ignored. The single vertex of a
    /// 0-dimensional cube is written `-`.
    pub fn parse(text: &str) -> Result<System> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or(Error::parse(1, ParseErrorKind::MissingHeader("dims:")))?;
        let rest = header
            .strip_prefix("dims:")
            .ok_or(Error::parse(hline, ParseErrorKind::MissingHeader("dims:")))?;
        let dims: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        for (i, d) in dims.iter().enumerate() {
            if dims[..i].contains(d) {
                return Err(Error::parse(hline, ParseErrorKind::DuplicateLabel(d.clone())));
            }
        }
        let mut sys = System::empty(dims)?;
        for (lineno, line) in lines {
            let v = sys
                .parse_vertex(line)
                .map_err(|kind| Error::parse(lineno, kind))?;
            if sys.table.get(v) {
                return Err(Error::parse(
                    lineno,
                    ParseErrorKind::DuplicateMember(line.to_string()),
                ));
            }
            sys.table.set(v, true);
        }
        Ok(sys)
    }

    /// Serializes in the format read by [`System::parse`], members in
    /// increasing vertex-index order.
    pub fn serialize(&self) -> String {
        let mut out = String::from("dims:");
        for d in self.dims.iter() {
            out.push(' ');
            out.push_str(d);
        }
        out.push('\n');
        for v in self.members() {
            out.push_str(&self.vertex_string(v));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members().map(|v| self.vertex_string(v)).collect();
        write!(f, "System[{}]{{{}}}", self.dims.join(","), members.join(","))
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// A subcube of `{0,1}^ambient`: the vertices agreeing with `fixed`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cube {
    ambient: Arc<[String]>,
    fixed_mask: u32,
    fixed_vals: u32,
}

impl Cube {
    pub fn new<S: AsRef<str>>(ambient: &[String], fixed: &[(S, bool)]) -> Result<Cube> {
        let mut fixed_mask = 0u32;
        let mut fixed_vals = 0u32;
        for (label, value) in fixed {
            let i = ambient
                .iter()
                .position(|d| d == label.as_ref())
                .ok_or_else(|| Error::UnknownDim(label.as_ref().to_string()))?;
            if fixed_mask >> i & 1 == 1 && (fixed_vals >> i & 1 == 1) != *value {
                return Err(Error::InvalidInput(format!(
                    "dimension `{}` fixed to both values",
                    label.as_ref()
                )));
            }
            fixed_mask |= 1 << i;
            fixed_vals |= (*value as u32) << i;
        }
        Ok(Cube {
            ambient: ambient.to_vec().into(),
            fixed_mask,
            fixed_vals,
        })
    }

    /// The whole cube `C(s)`.
    pub fn whole(s: &System) -> Cube {
        Cube {
            ambient: s.dims.clone(),
            fixed_mask: 0,
            fixed_vals: 0,
        }
    }

    pub(crate) fn from_masks(s: &System, fixed_mask: u32, fixed_vals: u32) -> Cube {
        Cube {
            ambient: s.dims.clone(),
            fixed_mask,
            fixed_vals: fixed_vals & fixed_mask,
        }
    }

    pub fn ambient(&self) -> &[String] {
        &self.ambient
    }

    pub fn fixed(&self) -> BTreeMap<String, bool> {
        DimSet(self.fixed_mask)
            .iter()
            .map(|i| (self.ambient[i].clone(), self.fixed_vals >> i & 1 == 1))
            .collect()
    }

    /// `dim(C)`: the free dimensions.
    pub fn free_dims(&self) -> DimSet {
        DimSet::full(self.ambient.len()).minus(DimSet(self.fixed_mask))
    }

    pub fn dim(&self) -> usize {
        self.free_dims().len()
    }

    /// All cubes of `C(s)` with exactly the free dimensions `y`.
    pub fn all_with_free(s: &System, y: DimSet) -> impl Iterator<Item = Cube> + '_ {
        let fixed = s.all_dims().minus(y);
        fixed.subsets().map(move |vals| Cube::from_masks(s, fixed.0, vals.0))
    }
}

/// Every system over `dims` (2^(2^n) of them), for `n <= 4`.
pub fn all_systems(dims: &[String]) -> Result<impl Iterator<Item = System>> {
    let n = dims.len();
    if n > 4 {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration over {n} dimensions means 2^{} systems",
            1u64 << n
        )));
    }
    check_labels(dims)?;
    let dims: Arc<[String]> = dims.to_vec().into();
    let count = 1u64 << (1u64 << n);
    Ok((0..count).map(move |w| System::from_word(dims.clone(), w)))
}

/// Labels `x1 .. xn`, the dimension names used by sweeps.
pub fn canonical_dims(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> System {
        System::from_bitstrings(["x", "y"], &["00", "01", "10"]).unwrap()
    }

    fn f2() -> System {
        System::from_bitstrings(["x", "y"], &["00", "11"]).unwrap()
    }

    fn sys(dims: &[&str], members: &[&str]) -> System {
        System::from_bitstrings(dims.iter().copied(), members).unwrap()
    }

    #[test]
    fn complement_examples() {
        assert_eq!(f1().complement(), sys(&["x", "y"], &["11"]));
        assert_eq!(f2().complement(), sys(&["x", "y"], &["01", "10"]));
        assert_eq!(System::k0().complement(), System::k1());
        assert_eq!(System::k1().complement(), System::k0());
    }

    #[test]
    fn restrict_examples() {
        let f2 = f2();
        let c = Cube::new(f2.dims(), &[("x", false)]).unwrap();
        assert_eq!(f2.restrict(&c).unwrap(), sys(&["y"], &["0"]));
        assert_eq!(f1().restrict(&Cube::whole(&f1())).unwrap(), f1());
        let corner = Cube::new(f1().dims(), &[("x", true), ("y", true)]).unwrap();
        assert_eq!(f1().restrict(&corner).unwrap(), System::k0());
    }

    #[test]
    fn restrict_rejects_foreign_cube() {
        let c = Cube::new(&["y".to_string(), "x".to_string()], &[("x", true)]).unwrap();
        assert!(matches!(f1().restrict(&c), Err(Error::DimMismatch(_))));
        assert!(Cube::new(f1().dims(), &[("z", true)]).is_err());
    }

    #[test]
    fn restrict_axis_examples() {
        assert_eq!(f2().restrict_axis("x", true).unwrap(), sys(&["y"], &["1"]));
        assert_eq!(f1().restrict_axis("y", false).unwrap(), sys(&["x"], &["0", "1"]));
        let line = sys(&["x"], &["0", "1"]);
        assert_eq!(line.restrict_axis("x", false).unwrap(), System::k1());
        assert!(matches!(f1().restrict_axis("z", false), Err(Error::UnknownDim(_))));
    }

    #[test]
    fn as_sets_examples() {
        let fam = f1().as_sets();
        assert_eq!(fam.render_sets(), vec!["-", "x", "y"]);
        assert_eq!(System::k1().as_sets().render_sets(), vec!["-"]);
        assert_eq!(f2().as_sets().render_sets(), vec!["-", "x,y"]);
        assert_eq!(f2().as_sets().len(), f2().len());
    }

    #[test]
    fn sortedness_examples() {
        assert!(f1().is_edge_sorted());
        assert!(!f2().is_edge_sorted());
        assert!(!f2().is_x_sorted("x").unwrap());
        assert!(sys(&["x", "y"], &["00", "01"]).is_x_sorted("x").unwrap());
        assert!(f1().is_x_sorted("q").is_err());
    }

    #[test]
    fn edge_sorted_iff_sets_downward_closed() {
        for s in all_systems(&canonical_dims(3)).unwrap() {
            assert_eq!(s.is_edge_sorted(), s.as_sets().is_downward_closed(), "{s:?}");
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(System::parse("dims: x y\n00\n01\n10\n").unwrap(), f1());
        assert_eq!(System::parse("dims:\n\n").unwrap(), System::k0());
        assert_eq!(System::parse("dims:\n-\n").unwrap(), System::k1());
        let err = System::parse("dims: x y\n00\n00\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse { line: 3, kind: ParseErrorKind::DuplicateMember(_) }
        ));
    }

    #[test]
    fn parse_errors_are_distinct() {
        let kind = |t: &str| match System::parse(t) {
            Err(Error::Parse { kind, .. }) => kind,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(kind("dims: x x\n"), ParseErrorKind::DuplicateLabel("x".into()));
        assert_eq!(
            kind("dims: x y\n001\n"),
            ParseErrorKind::LengthMismatch { expected: 2, found: 3 }
        );
        assert_eq!(kind("dims: x y\n0a\n"), ParseErrorKind::BadChar('a'));
        assert_eq!(kind("x y\n00\n"), ParseErrorKind::MissingHeader("dims:"));
    }

    #[test]
    fn parse_skips_comments() {
        let s = System::parse("# leading\ndims: a b c\n# note\n101\n\n011\n").unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(0b101));
        assert!(s.contains(0b110));
    }

    #[test]
    fn serialize_orders_by_vertex_index() {
        assert_eq!(f1().serialize(), "dims: x y\n00\n10\n01\n");
        assert_eq!(System::k0().serialize(), "dims:\n");
        assert_eq!(System::k1().serialize(), "dims:\n-\n");
    }

    #[test]
    fn equality_requires_same_dim_order() {
        let a = sys(&["x", "y"], &["01"]);
        let b = sys(&["y", "x"], &["10"]);
        assert_ne!(a, b);
    }

    #[test]
    fn cap_is_enforced() {
        let dims = canonical_dims(MAX_DIMS + 1);
        assert!(matches!(System::empty(dims), Err(Error::Capacity(_))));
        assert!(System::empty(canonical_dims(MAX_DIMS)).is_ok());
    }

    #[test]
    fn member_set_operations_need_equal_dims() {
        let a = f1();
        let b = f2();
        assert_eq!(a.union(&b).unwrap(), System::full(["x", "y"]).unwrap());
        assert_eq!(a.intersection(&b).unwrap(), sys(&["x", "y"], &["00"]));
        assert!(a.union(&sys(&["y", "x"], &[])).is_err());
    }

    #[test]
    fn cubes_partition_the_system() {
        let s = sys(&["a", "b", "c"], &["000", "110", "011", "111", "100"]);
        for y in s.all_dims().subsets() {
            let total: usize = Cube::all_with_free(&s, y)
                .map(|c| s.restrict(&c).unwrap().len())
                .sum();
            assert_eq!(total, s.len());
        }
    }
}
