use std::collections::VecDeque;

use shatter_core::graphs::{
    connected_graph_corpus, cyclic_system, has_directed_cycle, reachability_class,
    reachability_system, reaches_all, verify_cycle_inequality, Graph,
};
use shatter_core::shattering::{sstr_family, str_family, strongly_shatters};
use shatter_core::{is_se, DimSet, SeMethod};

fn arcs(g: &Graph, d: u32) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| if d >> i & 1 == 1 { (e.tail, e.head) } else { (e.head, e.tail) })
        .collect()
}

/// Directed cycle by three-colour depth-first search.
fn dfs_cycle(g: &Graph, d: u32) -> bool {
    let n = g.vertices().len();
    let arcs = arcs(g, d);
    fn visit(v: usize, arcs: &[(usize, usize)], colour: &mut [u8]) -> bool {
        colour[v] = 1;
        for &(a, b) in arcs {
            if a != v {
                continue;
            }
            if colour[b] == 1 || (colour[b] == 0 && visit(b, arcs, colour)) {
                return true;
            }
        }
        colour[v] = 2;
        false
    }
    let mut colour = vec![0u8; n];
    (0..n).any(|v| colour[v] == 0 && visit(v, &arcs, &mut colour))
}

fn bfs_reach(g: &Graph, d: u32, s: usize) -> Vec<bool> {
    let arcs = arcs(g, d);
    let mut seen = vec![false; g.vertices().len()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &(a, b) in &arcs {
            if a == v && !seen[b] {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Undirected cycle in the edges of `x`: some component has as many edges as vertices.
fn subgraph_has_cycle(g: &Graph, x: u32) -> bool {
    let n = g.vertices().len();
    let mut comp: Vec<usize> = (0..n).collect();
    let chosen: Vec<_> = g.edges().iter().enumerate().filter(|(i, _)| x >> i & 1 == 1).map(|(_, e)| e).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for e in &chosen {
            let m = comp[e.tail].min(comp[e.head]);
            if comp[e.tail] != m || comp[e.head] != m {
                comp[e.tail] = m;
                comp[e.head] = m;
                changed = true;
            }
        }
    }
    (0..n).any(|c| {
        let vs = (0..n).filter(|&v| comp[v] == c).count();
        let es = chosen.iter().filter(|e| comp[e.tail] == c).count();
        vs > 0 && es >= vs
    })
}

fn named(vertices: &[&str], edges: &[(&str, &str)]) -> Graph {
    let e: Vec<(String, String, String)> = edges
        .iter()
        .map(|(a, b)| (format!("{a}{b}"), a.to_string(), b.to_string()))
        .collect();
    let v: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
    Graph::new(&v, &e).unwrap()
}

fn test_graphs() -> Vec<Graph> {
    let mut gs = connected_graph_corpus(4);
    gs.push(named(&["a", "b", "c", "d", "e"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]));
    gs.push(named(
        &["a", "b", "x", "y", "z"],
        &[("a", "x"), ("a", "y"), ("a", "z"), ("b", "x"), ("b", "y"), ("b", "z")],
    ));
    // wheel with four spokes
    gs.push(named(
        &["h", "a", "b", "c", "d"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("h", "a"), ("h", "b"), ("h", "c"), ("h", "d")],
    ));
    gs
}

#[test]
fn cycle_and_reach_match_independent_search() {
    for g in test_graphs() {
        let m = g.m();
        for d in 0u32..1 << m {
            assert_eq!(has_directed_cycle(&g, d).unwrap(), dfs_cycle(&g, d));
            let from0 = bfs_reach(&g, d, 0);
            for (t, &hit) in from0.iter().enumerate() {
                let name = g.vertices()[t].as_str();
                assert_eq!(reaches_all(&g, d, &g.vertices()[0], &[name]).unwrap(), hit);
            }
        }
    }
}

#[test]
fn strongly_shattered_sets_of_cyclic_systems() {
    for g in test_graphs() {
        let s = cyclic_system(&g).unwrap();
        let all = DimSet::full(g.m());
        for x in all.subsets() {
            let want = subgraph_has_cycle(&g, all.minus(x).bits());
            assert_eq!(strongly_shatters(&s, x).unwrap(), want, "{g}X={x:?}");
        }
    }
}

#[test]
fn cycle_counts_and_complement_duality() {
    for g in test_graphs() {
        let c = verify_cycle_inequality(&g).unwrap();
        let total = 1u64 << g.m();
        assert_eq!(c.cyclic_orientations + c.acyclic_orientations, total);
        let dfs = (0u32..1 << g.m()).filter(|&d| dfs_cycle(&g, d)).count() as u64;
        assert_eq!(c.cyclic_orientations, dfs);
        let cyc = (0u32..1 << g.m()).filter(|&x| subgraph_has_cycle(&g, x)).count() as u64;
        assert_eq!(c.cyclic_subgraphs, cyc);
        assert!(c.cyclic_subgraphs <= c.cyclic_orientations);
        assert!(c.acyclic_orientations <= c.forests);
        assert_eq!(c.cyclic_subgraphs + c.forests, total);
    }
}

#[test]
fn reachability_families_are_joining_sets() {
    for g in test_graphs() {
        let s0 = g.vertices()[0].clone();
        let last = g.vertices().last().unwrap().clone();
        let sys = reachability_system(&g, &s0, &[s0.as_str(), last.as_str()]).unwrap();
        assert_eq!(str_family(&sys), sstr_family(&sys));
        let all = DimSet::full(g.m());
        for x in str_family(&sys).sets() {
            // E − X keeps s and the target connected: some orientation of it reaches
            let keep = all.minus(x).bits();
            let joined = (0u32..1 << g.m()).any(|d| {
                let only: Vec<(usize, usize)> = arcs(&g, d)
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| keep >> i & 1 == 1)
                    .map(|(_, a)| a)
                    .collect();
                let mut seen = vec![false; g.vertices().len()];
                seen[0] = true;
                for _ in 0..g.vertices().len() {
                    for &(a, b) in &only {
                        if seen[a] {
                            seen[b] = true;
                        }
                    }
                }
                seen[g.vertices().len() - 1]
            });
            assert!(joined, "{g}{x:?}");
        }
    }
}

#[test]
fn reachability_class_is_closed_under_member_set_operations() {
    for g in connected_graph_corpus(4) {
        for s in g.vertices() {
            let class = reachability_class(&g, s).unwrap();
            for a in &class {
                for b in &class {
                    let u = a.union(b).unwrap();
                    let i = a.intersection(b).unwrap();
                    assert!(is_se(&u, SeMethod::ByDefinition).unwrap(), "{g}");
                    assert!(is_se(&i, SeMethod::ByDefinition).unwrap(), "{g}");
                }
            }
        }
    }
}
