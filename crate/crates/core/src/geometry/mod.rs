//! Sign systems of hyperplane arrangements.
//!
//! A hyperplane `e` is `{x : n·x = r}` with positive side `n·x > r`. Every
//! cell of the arrangement contributes the vertex whose bit for `e` is 1
//! exactly when the cell lies on the positive side of `e`.

mod fm;
mod linalg;

use std::fmt;

use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, ParseErrorKind, Result};
use crate::family::Family;
use crate::shattering::{shatters, sstr_family, str_family, strongly_shatters};
use crate::system::{check_labels, DimSet, System};

pub use fm::{feasible_strict, solve, Constraint, Relation};
pub use linalg::{in_span, rank};

/// Largest arrangement accepted by the cell enumerators.
pub const MAX_HYPERPLANES: usize = 12;
/// Largest ambient dimension accepted by the cell enumerators.
pub const MAX_AMBIENT_DIM: usize = 4;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hyperplane {
    pub label: String,
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Hyperplane {
    pub fn new(label: impl Into<String>, normal: Vec<BigRational>, offset: BigRational) -> Result<Self> {
        let label = label.into();
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput(format!("hyperplane `{label}` has a zero normal")));
        }
        Ok(Hyperplane { label, normal, offset })
    }

    /// Integer coefficients, handy in tests and fixtures.
    pub fn int(label: &str, normal: &[i64], offset: i64) -> Result<Self> {
        Hyperplane::new(label, normal.iter().map(|&a| int(a)).collect(), int(offset))
    }

    /// `n·x > r`
    pub fn positive_side(&self) -> Constraint {
        Constraint::greater(self.normal.clone(), self.offset.clone())
    }

    /// `n·x < r`
    pub fn negative_side(&self) -> Constraint {
        self.positive_side().flipped()
    }

    /// `n·x = r`
    pub fn equation(&self) -> Constraint {
        Constraint::equal(self.normal.clone(), self.offset.clone())
    }

    fn side(&self, positive: bool) -> Constraint {
        if positive {
            self.positive_side()
        } else {
            self.negative_side()
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrangement {
    dim: usize,
    planes: Vec<Hyperplane>,
}

/// An open polyhedron: the points satisfying every `n·x > r`.
/// No constraints means all of ℝ^d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvexBody {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl ConvexBody {
    pub fn whole(dim: usize) -> Self {
        ConvexBody { dim, constraints: Vec::new() }
    }

    pub fn new(dim: usize, halfspaces: Vec<(Vec<BigRational>, BigRational)>) -> Result<Self> {
        if halfspaces.iter().any(|(a, _)| a.len() != dim) {
            return Err(Error::DimMismatch(format!("convex body constraints must have length {dim}")));
        }
        let constraints = halfspaces
            .into_iter()
            .map(|(a, r)| Constraint::greater(a, r))
            .collect();
        Ok(ConvexBody { dim, constraints })
    }

    pub fn int(dim: usize, halfspaces: &[(&[i64], i64)]) -> Result<Self> {
        ConvexBody::new(
            dim,
            halfspaces
                .iter()
                .map(|(a, r)| (a.iter().map(|&v| int(v)).collect(), int(*r)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_whole_space(&self) -> bool {
        self.constraints.is_empty()
    }
}

impl Arrangement {
    pub fn new(dim: usize, planes: Vec<Hyperplane>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("arrangement dimension must be at least 1".into()));
        }
        if let Some(h) = planes.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::DimMismatch(format!(
                "hyperplane `{}` has {} coefficients in dimension {dim}",
                h.label,
                h.normal.len()
            )));
        }
        let labels: Vec<String> = planes.iter().map(|h| h.label.clone()).collect();
        check_labels(&labels)?;
        Ok(Arrangement { dim, planes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.planes.iter().map(|h| h.label.clone()).collect()
    }

    pub fn label_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<DimSet> {
        let mut m = 0u32;
        for l in labels {
            let i = self
                .planes
                .iter()
                .position(|h| h.label == l.as_ref())
                .ok_or_else(|| Error::UnknownDim(l.as_ref().to_string()))?;
            m |= 1 << i;
        }
        Ok(DimSet(m))
    }

    fn check_capacity(&self) -> Result<()> {
        if self.planes.len() > MAX_HYPERPLANES || self.dim > MAX_AMBIENT_DIM {
            return Err(Error::Capacity(format!(
                "cell enumeration handles at most {MAX_HYPERPLANES} hyperplanes in dimension \
                 {MAX_AMBIENT_DIM}; got {} in dimension {}",
                self.planes.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Parses the arrangement format: a `d: <int>` header, then
    /// `label a1 .. ad r` per hyperplane and `K a1 .. ad r` per half-space of
    /// the convex body. Coefficients are integers or `p/q`.
    pub fn parse(text: &str) -> Result<(Arrangement, ConvexBody)> {
        let mut dim: Option<usize> = None;
        let mut planes = Vec::new();
        let mut body = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |msg: String| Error::parse(line_no, ParseErrorKind::Malformed(msg));
            let Some(d) = dim else {
                let rest = line
                    .strip_prefix("d:")
                    .ok_or_else(|| Error::parse(line_no, ParseErrorKind::MissingHeader("d:")))?;
                let d: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| malformed(format!("bad dimension `{}`", rest.trim())))?;
                if d == 0 {
                    return Err(malformed("dimension must be at least 1".into()));
                }
                dim = Some(d);
                continue;
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != d + 2 {
                return Err(malformed(format!(
                    "expected a label, {d} coefficients and an offset; found {} fields",
                    tokens.len()
                )));
            }
            let mut nums = Vec::with_capacity(d + 1);
            for t in &tokens[1..] {
                nums.push(
                    t.parse::<BigRational>()
                        .map_err(|_| malformed(format!("bad rational `{t}`")))?,
                );
            }
            let offset = nums.pop().expect("d + 1 numbers");
            if tokens[0] == "K" {
                body.push((nums, offset));
            } else {
                if planes.iter().any(|h: &Hyperplane| h.label == tokens[0]) {
                    return Err(Error::parse(
                        line_no,
                        ParseErrorKind::DuplicateLabel(tokens[0].to_string()),
                    ));
                }
                let h = Hyperplane::new(tokens[0], nums, offset)
                    .map_err(|e| malformed(e.to_string()))?;
                planes.push(h);
            }
        }
        let d = dim.ok_or_else(|| Error::parse(0, ParseErrorKind::MissingHeader("d:")))?;
        Ok((Arrangement::new(d, planes)?, ConvexBody::new(d, body)?))
    }

    /// The file form of the arrangement together with `k`.
    pub fn to_text(&self, k: &ConvexBody) -> String {
        let mut out = format!("d: {}\n", self.dim);
        let row = |label: &str, a: &[BigRational], r: &BigRational| {
            let mut s = label.to_string();
            for c in a.iter().chain(std::iter::once(r)) {
                s.push(' ');
                s.push_str(&c.to_string());
            }
            s.push('\n');
            s
        };
        for h in &self.planes {
            out.push_str(&row(&h.label, &h.normal, &h.offset));
        }
        for c in &k.constraints {
            out.push_str(&row("K", &c.coeffs, &c.rhs));
        }
        out
    }

    fn normals(&self, y: DimSet) -> Vec<Vec<BigRational>> {
        y.iter().map(|i| self.planes[i].normal.clone()).collect()
    }

    /// A point of the flat `⋂Y`, with `⋂∅ = ℝ^d`.
    pub fn flat_point(&self, y: DimSet) -> Option<Vec<BigRational>> {
        let eqs: Vec<Constraint> = y.iter().map(|i| self.planes[i].equation()).collect();
        if eqs.is_empty() {
            return Some(vec![BigRational::zero(); self.dim]);
        }
        solve(&eqs)
    }

    /// The normals of `Y` are linearly independent.
    pub fn is_independent(&self, y: DimSet) -> bool {
        rank(&self.normals(y)) == y.len()
    }

    /// `Y` is exactly the set of hyperplanes containing `⋂Y`.
    pub fn is_regular(&self, y: DimSet) -> bool {
        let all = DimSet::full(self.planes.len());
        let Some(p) = self.flat_point(y) else {
            // every hyperplane contains the empty flat
            return y == all;
        };
        let normals = self.normals(y);
        all.minus(y).iter().all(|i| {
            let e = &self.planes[i];
            !(in_span(&normals, &e.normal) && fm::dot(&e.normal, &p) == e.offset)
        })
    }

    /// `⋂Y` meets the convex body.
    pub fn flat_meets(&self, y: DimSet, k: &ConvexBody) -> bool {
        let mut cs: Vec<Constraint> = y.iter().map(|i| self.planes[i].equation()).collect();
        cs.extend(k.constraints.iter().cloned());
        if cs.is_empty() {
            return true;
        }
        feasible_strict(&cs)
    }

    pub fn independent_family(&self) -> Family {
        self.family_where(|y| self.is_independent(y))
    }

    pub fn independent_regular_family(&self) -> Family {
        self.family_where(|y| self.is_independent(y) && self.is_regular(y))
    }

    fn family_where(&self, pred: impl Fn(DimSet) -> bool) -> Family {
        let sets = DimSet::full(self.planes.len())
            .subsets()
            .filter(|&y| pred(y))
            .map(|y| y.0);
        Family::new(self.labels(), sets).expect("labels checked at construction")
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&ConvexBody::whole(self.dim)))
    }
}

fn collect_cells(
    planes: &[Hyperplane],
    i: usize,
    constraints: &mut Vec<Constraint>,
    vertex: u32,
    out: &mut Vec<u32>,
) {
    if i == planes.len() {
        out.push(vertex);
        return;
    }
    for positive in [false, true] {
        constraints.push(planes[i].side(positive));
        // a partial sign vector with no region cannot extend to a cell
        if constraints.is_empty() || feasible_strict(constraints) {
            collect_cells(planes, i + 1, constraints, vertex | (positive as u32) << i, out);
        }
        constraints.pop();
    }
}

/// The sign system `S_H`: one vertex per cell, `+` mapped to 1.
pub fn cell_system(h: &Arrangement) -> Result<System> {
    cell_system_convex(h, &ConvexBody::whole(h.dim))
}

/// `S_{H,K}`: the sign vectors of the cells meeting `K`.
pub fn cell_system_convex(h: &Arrangement, k: &ConvexBody) -> Result<System> {
    h.check_capacity()?;
    if k.dim != h.dim {
        return Err(Error::DimMismatch(format!(
            "convex body in dimension {} for an arrangement in dimension {}",
            k.dim, h.dim
        )));
    }
    let mut constraints = k.constraints.clone();
    let mut out = Vec::new();
    if constraints.is_empty() || feasible_strict(&constraints) {
        collect_cells(&h.planes, 0, &mut constraints, 0, &mut out);
    }
    System::new(h.labels(), out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometricReport {
    pub cells: usize,
    #[serde(serialize_with = "ser_family")]
    pub str_family: Family,
    #[serde(serialize_with = "ser_family")]
    pub sstr_family: Family,
    #[serde(serialize_with = "ser_family")]
    pub independent: Family,
    #[serde(serialize_with = "ser_family")]
    pub independent_regular: Family,
    pub se: bool,
}

pub(crate) fn ser_family<S: serde::Serializer>(f: &Family, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(f.render_sets())
}

/// Builds `S_H` and checks `str(S_H)` against the independent subsets and
/// `sstr(S_H)` against the independent regular subsets.
pub fn verify_geometric_str(h: &Arrangement) -> Result<GeometricReport> {
    let s = cell_system(h)?;
    let report = GeometricReport {
        cells: s.len(),
        str_family: str_family(&s),
        sstr_family: sstr_family(&s),
        independent: h.independent_family(),
        independent_regular: h.independent_regular_family(),
        se: false,
    };
    if report.str_family != report.independent {
        return Err(Error::violation(
            format!(
                "str(S_H) {:?} differs from the independent family {:?}",
                report.str_family, report.independent
            ),
            Some(&s),
        ));
    }
    if report.sstr_family != report.independent_regular {
        return Err(Error::violation(
            format!(
                "sstr(S_H) {:?} differs from the independent regular family {:?}",
                report.sstr_family, report.independent_regular
            ),
            Some(&s),
        ));
    }
    let se = report.str_family == report.sstr_family;
    Ok(GeometricReport { se, ..report })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CellCount {
    pub cells: usize,
    pub independent: usize,
    /// Every subset is independent exactly when its flat is nonempty.
    pub premise: bool,
}

/// Number of cells next to the number of independent subsets. The two agree
/// whenever the premise holds; a disagreement under the premise is a
/// theorem violation.
pub fn count_cells_formula(h: &Arrangement) -> Result<CellCount> {
    let s = cell_system(h)?;
    let all = DimSet::full(h.len());
    let premise = all
        .subsets()
        .all(|y| h.is_independent(y) == h.flat_point(y).is_some());
    let count = CellCount {
        cells: s.len(),
        independent: h.independent_family().len(),
        premise,
    };
    if premise && count.cells != count.independent {
        return Err(Error::violation(
            format!("cell count {} differs from {} independent subsets", count.cells, count.independent),
            Some(&s),
        ));
    }
    Ok(count)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexFlags {
    pub set: Vec<String>,
    pub shattered: bool,
    pub strongly_shattered: bool,
    pub independent: bool,
    pub regular: bool,
    pub meets_body: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexReport {
    pub cells: usize,
    pub rows: Vec<ConvexFlags>,
}

/// Empirical shattering of `S_{H,K}` next to the geometric flags of every
/// subset. Nothing is asserted about how they relate.
pub fn convex_report(h: &Arrangement, k: &ConvexBody) -> Result<ConvexReport> {
    let s = cell_system_convex(h, k)?;
    let rows = DimSet::full(h.len())
        .subsets()
        .map(|y| -> Result<ConvexFlags> {
            Ok(ConvexFlags {
                set: s.labels_of(y),
                shattered: shatters(&s, y)?,
                strongly_shattered: strongly_shatters(&s, y)?,
                independent: h.is_independent(y),
                regular: h.is_regular(y),
                meets_body: h.flat_meets(y, k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvexReport { cells: s.len(), rows })
}

impl fmt::Display for ConvexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cells: {}", self.cells)?;
        writeln!(f, "set shattered strongly independent regular meets_K")?;
        for r in &self.rows {
            let name = if r.set.is_empty() { "-".to_string() } else { r.set.join(",") };
            writeln!(
                f,
                "{name} {} {} {} {} {}",
                r.shattered as u8,
                r.strongly_shattered as u8,
                r.independent as u8,
                r.regular as u8,
                r.meets_body as u8
            )?;
        }
        Ok(())
    }
}

/// Whether a family satisfies the matroid independence axioms: nonempty,
/// downward closed, and with the augmentation property.
pub fn is_matroid(f: &Family) -> bool {
    if f.is_empty() || !f.is_downward_closed() {
        return false;
    }
    let sets: Vec<DimSet> = f.sets().collect();
    sets.iter().all(|a| {
        sets.iter().all(|b| {
            b.len() <= a.len() || b.minus(*a).iter().any(|x| f.contains(a.union(DimSet::single(x))))
        })
    })
}

/// Tries random small-integer arrangements in dimension `d`, each paired with
/// a random open polyhedron of at most two half-spaces, looking for one whose
/// `S_{H,K}` equals `target` (same dims order). Returns the first hit.
pub fn search_convex_realization(
    target: &System,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<(Arrangement, ConvexBody)>> {
    if target.n() > MAX_HYPERPLANES || d == 0 || d > MAX_AMBIENT_DIM {
        return Err(Error::Capacity(format!(
            "realization search needs at most {MAX_HYPERPLANES} dims and 1 <= d <= {MAX_AMBIENT_DIM}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vector = |rng: &mut ChaCha8Rng| loop {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    };
    for _ in 0..trials {
        let mut planes = Vec::with_capacity(target.n());
        for label in target.dims() {
            let normal = vector(&mut rng);
            planes.push(Hyperplane::int(label, &normal, rng.gen_range(-2..=2))?);
        }
        let h = Arrangement::new(d, planes)?;
        let halfspaces: Vec<(Vec<i64>, i64)> = (0..rng.gen_range(0..=2))
            .map(|_| (vector(&mut rng), rng.gen_range(-2..=2)))
            .collect();
        let refs: Vec<(&[i64], i64)> = halfspaces.iter().map(|(a, r)| (a.as_slice(), *r)).collect();
        let k = ConvexBody::int(d, &refs)?;
        if cell_system_convex(&h, &k)? == *target {
            return Ok(Some((h, k)));
        }
    }
    Ok(None)
}
