//! Orientation systems of undirected graphs.
//!
//! Each edge carries a reference orientation `tail -> head`. An orientation
//! is a bitmask over the edges: bit `i` set means edge `i` points as in the
//! reference, clear means reversed.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, ParseErrorKind, Result};
use crate::shattering::{dual_vc_dim, vc_dim};
use crate::system::{check_labels, System};

pub const MAX_EDGES: usize = 16;
/// Edge limit for the exhaustive graph oracles.
pub const MAX_ORACLE_EDGES: usize = 12;
const MAX_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Graph {
    /// `edges` lists `(label, tail, head)` by vertex name.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S, S)]) -> Result<Graph> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        check_labels(&vertices)?;
        if vertices.len() > MAX_VERTICES {
            return Err(Error::Capacity(format!("at most {MAX_VERTICES} vertices")));
        }
        let mut g = Graph { vertices, edges: Vec::new() };
        for (label, tail, head) in edges {
            let tail = g.vertex(tail.as_ref())?;
            let head = g.vertex(head.as_ref())?;
            g.push_edge(label.as_ref(), tail, head)?;
        }
        Ok(g)
    }

    fn push_edge(&mut self, label: &str, tail: usize, head: usize) -> Result<()> {
        if tail == head {
            return Err(Error::InvalidInput(format!("edge `{label}` is a loop")));
        }
        if self.edges.iter().any(|e| e.label == label) {
            return Err(Error::InvalidInput(format!("duplicate edge label `{label}`")));
        }
        if self
            .edges
            .iter()
            .any(|e| (e.tail, e.head) == (tail, head) || (e.tail, e.head) == (head, tail))
        {
            return Err(Error::InvalidInput(format!("edge `{label}` is parallel to another edge")));
        }
        self.edges.push(Edge { label: label.to_string(), tail, head });
        Ok(())
    }

    /// Parses `vertices: a b c` followed by `edge <label> <tail> <head>` lines.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |msg: String| Error::parse(line_no, ParseErrorKind::Malformed(msg));
            let Some(g) = graph.as_mut() else {
                let rest = line
                    .strip_prefix("vertices:")
                    .ok_or_else(|| Error::parse(line_no, ParseErrorKind::MissingHeader("vertices:")))?;
                let names: Vec<&str> = rest.split_whitespace().collect();
                if let Some(dup) = names.iter().enumerate().find(|(i, v)| names[..*i].contains(v)) {
                    return Err(Error::parse(line_no, ParseErrorKind::DuplicateLabel(dup.1.to_string())));
                }
                graph = Some(Graph::new::<&str>(&names, &[]).map_err(|e| malformed(e.to_string()))?);
                continue;
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["edge", label, tail, head] => {
                    let t = g.vertex(tail).map_err(|e| malformed(e.to_string()))?;
                    let h = g.vertex(head).map_err(|e| malformed(e.to_string()))?;
                    if g.edges.iter().any(|e| e.label == *label) {
                        return Err(Error::parse(line_no, ParseErrorKind::DuplicateLabel(label.to_string())));
                    }
                    g.push_edge(label, t, h).map_err(|e| malformed(e.to_string()))?;
                }
                _ => return Err(malformed(format!("expected `edge <label> <tail> <head>`, found `{line}`"))),
            }
        }
        graph.ok_or_else(|| Error::parse(0, ParseErrorKind::MissingHeader("vertices:")))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex `{name}`")))
    }

    fn vertex_mask<S: AsRef<str>>(&self, names: &[S]) -> Result<u64> {
        names
            .iter()
            .try_fold(0u64, |acc, n| Ok(acc | 1 << self.vertex(n.as_ref())?))
    }

    fn check_edges(&self, limit: usize) -> Result<()> {
        if self.m() > limit {
            return Err(Error::Capacity(format!(
                "{} edges; this computation handles at most {limit}",
                self.m()
            )));
        }
        Ok(())
    }

    fn arcs(&self, d: u32) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().enumerate().map(move |(i, e)| {
            if d >> i & 1 == 1 {
                (e.tail, e.head)
            } else {
                (e.head, e.tail)
            }
        })
    }

    fn directed_cycle(&self, d: u32) -> bool {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in self.arcs(d) {
            indeg[b] += 1;
            out[a].push(b);
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        removed < n
    }

    fn reachable_from(&self, d: u32, s: usize) -> u64 {
        let mut seen = 1u64 << s;
        loop {
            let next = self
                .arcs(d)
                .filter(|&(a, _)| seen >> a & 1 == 1)
                .fold(seen, |acc, (_, b)| acc | 1 << b);
            if next == seen {
                return seen;
            }
            seen = next;
        }
    }

    /// Vertices connected to `s` through the edges in `x`.
    fn component_of(&self, x: u32, s: usize) -> u64 {
        let mut seen = 1u64 << s;
        loop {
            let next = self
                .edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| x >> i & 1 == 1)
                .fold(seen, |acc, (_, e)| {
                    if seen >> e.tail & 1 == 1 || seen >> e.head & 1 == 1 {
                        acc | 1 << e.tail | 1 << e.head
                    } else {
                        acc
                    }
                });
            if next == seen {
                return seen;
            }
            seen = next;
        }
    }

    /// The subgraph on the edges in `x` has a cycle.
    fn has_cycle(&self, x: u32) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        for (i, e) in self.edges.iter().enumerate() {
            if x >> i & 1 == 0 {
                continue;
            }
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a == b {
                return true;
            }
            parent[a] = b;
        }
        false
    }

    /// All of `w` lies in one component of the subgraph on `x`.
    fn joins(&self, x: u32, w: u64) -> bool {
        if w == 0 {
            return true;
        }
        let first = w.trailing_zeros() as usize;
        self.component_of(x, first) & w == w
    }

    fn all_edges(&self) -> u32 {
        ((1u64 << self.m()) - 1) as u32
    }

    fn subgraphs(&self) -> impl Iterator<Item = u32> {
        0..=self.all_edges()
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.component_of(self.all_edges(), 0).count_ones() as usize == self.vertices.len()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices.join(" "))?;
        for e in &self.edges {
            writeln!(f, "edge {} {} {}", e.label, self.vertices[e.tail], self.vertices[e.head])?;
        }
        Ok(())
    }
}

fn check_orientation(g: &Graph, d: u32) -> Result<()> {
    if g.m() < 32 && d >> g.m() != 0 {
        return Err(Error::InvalidInput(format!("orientation {d:#b} has bits beyond {} edges", g.m())));
    }
    Ok(())
}

/// The orientation `d` has a directed cycle.
pub fn has_directed_cycle(g: &Graph, d: u32) -> Result<bool> {
    check_orientation(g, d)?;
    Ok(g.directed_cycle(d))
}

/// Every vertex of `w` is reachable from `s` in the orientation `d`.
pub fn reaches_all<S: AsRef<str>>(g: &Graph, d: u32, s: &str, w: &[S]) -> Result<bool> {
    check_orientation(g, d)?;
    let s = g.vertex(s)?;
    let w = g.vertex_mask(w)?;
    Ok(g.reachable_from(d, s) & w == w)
}

/// Orientations with a directed cycle, over the edge labels.
pub fn cyclic_system(g: &Graph) -> Result<System> {
    g.check_edges(MAX_EDGES)?;
    System::from_fn(g.edge_labels(), |d| g.directed_cycle(d))
}

/// Orientations in which every vertex of `w` is reachable from `s`.
pub fn reachability_system<S: AsRef<str>>(g: &Graph, s: &str, w: &[S]) -> Result<System> {
    g.check_edges(MAX_EDGES)?;
    let s = g.vertex(s)?;
    let w = g.vertex_mask(w)?;
    System::from_fn(g.edge_labels(), |d| g.reachable_from(d, s) & w == w)
}

/// `S_{s,v}` for every vertex `v != s`.
pub fn reachability_class(g: &Graph, s: &str) -> Result<Vec<System>> {
    g.vertices
        .iter()
        .filter(|v| *v != s)
        .map(|v| reachability_system(g, s, &[v.as_str()]))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCounts {
    pub cyclic_orientations: u64,
    pub cyclic_subgraphs: u64,
    pub acyclic_orientations: u64,
    pub forests: u64,
}

/// Orientations with a directed cycle against edge subsets containing a
/// cycle, and the dual pair: acyclic orientations against forests.
pub fn verify_cycle_inequality(g: &Graph) -> Result<CycleCounts> {
    g.check_edges(MAX_EDGES)?;
    let total = 1u64 << g.m();
    let cyclic_orientations = g.subgraphs().filter(|&d| g.directed_cycle(d)).count() as u64;
    let cyclic_subgraphs = g.subgraphs().filter(|&x| g.has_cycle(x)).count() as u64;
    let c = CycleCounts {
        cyclic_orientations,
        cyclic_subgraphs,
        acyclic_orientations: total - cyclic_orientations,
        forests: total - cyclic_subgraphs,
    };
    if c.cyclic_orientations < c.cyclic_subgraphs || c.acyclic_orientations > c.forests {
        return Err(Error::violation(format!("cycle counting inequality fails: {c:?}"), None));
    }
    Ok(c)
}

/// Orientations reaching `w` from `s` against edge subsets joining
/// `w ∪ {s}`; the two counts are equal.
pub fn verify_reachability_equality<S: AsRef<str>>(g: &Graph, s: &str, w: &[S]) -> Result<(u64, u64)> {
    let sys = reachability_system(g, s, w)?;
    let joined = g.vertex_mask(w)? | 1 << g.vertex(s)?;
    let subgraphs = g.subgraphs().filter(|&x| g.joins(x, joined)).count() as u64;
    let orientations = sys.len() as u64;
    if orientations != subgraphs {
        return Err(Error::violation(
            format!("{orientations} reaching orientations against {subgraphs} joining subgraphs"),
            Some(&sys),
        ));
    }
    Ok((orientations, subgraphs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VcOracleReport {
    pub m: usize,
    /// Largest edge set spanning a forest.
    pub max_subforest: usize,
    /// Shortest cycle length, if any.
    pub girth: Option<usize>,
    /// Fewest edges joining `w ∪ {s}`, if possible at all.
    pub steiner: Option<usize>,
    /// Fewest edges whose removal separates some vertex of `w ∪ {s}` from the rest.
    pub min_cut: Option<usize>,
    pub vc_acyclic: i32,
    pub dvc_cyclic: i32,
    pub vc_reach: i32,
    pub vc_unreach: i32,
}

fn expected(opt: Option<usize>, m: usize) -> i32 {
    opt.map_or(-1, |v| (m - v) as i32)
}

/// Exhaustive graph quantities next to the VC dimensions they predict.
/// Any mismatch is a theorem violation.
pub fn graph_vc_oracles<S: AsRef<str>>(g: &Graph, s: &str, w: &[S]) -> Result<VcOracleReport> {
    g.check_edges(MAX_ORACLE_EDGES)?;
    let m = g.m();
    let joined = g.vertex_mask(w)? | 1 << g.vertex(s)?;
    let size = |x: &u32| x.count_ones() as usize;
    let max_subforest = g.subgraphs().filter(|&x| !g.has_cycle(x)).map(|x| size(&x)).max().unwrap_or(0);
    let girth = g.subgraphs().filter(|&x| g.has_cycle(x)).map(|x| size(&x)).min();
    let steiner = g.subgraphs().filter(|&x| g.joins(x, joined)).map(|x| size(&x)).min();
    let all = g.all_edges();
    let min_cut = g
        .subgraphs()
        .filter(|&cut| !g.joins(all & !cut, joined))
        .map(|x| size(&x))
        .min();

    let cyclic = cyclic_system(g)?;
    let reach = reachability_system(g, s, w)?;
    let report = VcOracleReport {
        m,
        max_subforest,
        girth,
        steiner,
        min_cut,
        vc_acyclic: vc_dim(&cyclic.complement()),
        dvc_cyclic: dual_vc_dim(&cyclic),
        vc_reach: vc_dim(&reach),
        vc_unreach: vc_dim(&reach.complement()),
    };
    let checks = [
        ("vc of acyclic orientations", report.vc_acyclic, max_subforest as i32),
        ("dual vc of cyclic orientations", report.dvc_cyclic, expected(girth, m)),
        ("vc of reaching orientations", report.vc_reach, expected(steiner, m)),
        ("vc of non-reaching orientations", report.vc_unreach, expected(min_cut, m)),
    ];
    for (what, got, want) in checks {
        if got != want {
            return Err(Error::violation(format!("{what}: {got}, oracle predicts {want}"), None));
        }
    }
    Ok(report)
}

/// Every connected graph on vertices `v1 .. vn` for `1 <= n <= max_vertices`,
/// labelled (not up to isomorphism). Edge `eij` points from `vi` to `vj`, `i < j`.
pub fn connected_graph_corpus(max_vertices: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(String, String, String)> = pairs
                .iter()
                .enumerate()
                .filter(|&(k, _)| mask >> k & 1 == 1)
                .map(|(_, &(i, j))| (format!("e{}{}", i + 1, j + 1), names[i].clone(), names[j].clone()))
                .collect();
            let g = Graph::new(&names, &edges).expect("simple by construction");
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}
