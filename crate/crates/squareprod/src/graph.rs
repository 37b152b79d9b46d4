//! Simple undirected graphs over arbitrary vertex ids.
//!
//! The vertex type is generic so that product graphs can keep their
//! coordinate pairs as first-class vertices instead of being flattened to
//! integers. Almost all callers use the default `Graph<usize>`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Debug;

use thiserror::Error;

/// A finite simple undirected graph. No loops, no parallel edges.
///
/// Iteration order over vertices and neighbours is always ascending, which
/// keeps every algorithm in this crate deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph<V: Ord + Copy = usize> {
    adj: BTreeMap<V, BTreeSet<V>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl<V: Ord + Copy> Graph<V> {
    pub fn new() -> Self {
        Graph { adj: BTreeMap::new() }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (V, V)>) -> Self {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: V) {
        self.adj.entry(v).or_default();
    }

    /// Inserts an edge, adding missing endpoints. Loops are rejected.
    pub fn add_edge(&mut self, u: V, v: V) {
        assert!(u != v, "loops are not allowed");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn remove_vertex(&mut self, v: V) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for w in nbrs {
                self.adj.get_mut(&w).map(|s| s.remove(&v));
            }
        }
    }

    pub fn has_vertex(&self, v: V) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: V, v: V) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.adj.keys().copied()
    }

    /// Edges as ordered pairs with the smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = (V, V)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().copied().filter(move |&w| u < w).map(move |w| (u, w)))
    }

    pub fn neighbours(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: V) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn induced_subgraph(&self, keep: &BTreeSet<V>) -> Graph<V> {
        let mut g = Graph::new();
        for &v in keep {
            if self.has_vertex(v) {
                g.add_vertex(v);
            }
        }
        for (u, w) in self.edges() {
            if keep.contains(&u) && keep.contains(&w) {
                g.add_edge(u, w);
            }
        }
        g
    }

    /// BFS distances from `root` within the component of `root`.
    pub fn bfs_distances(&self, root: V) -> BTreeMap<V, usize> {
        let mut dist = BTreeMap::new();
        if !self.has_vertex(root) {
            return dist;
        }
        dist.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            for w in self.neighbours(u) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        match self.adj.keys().next() {
            None => true,
            Some(&v) => self.bfs_distances(v).len() == self.vertex_count(),
        }
    }

    /// Connected components, each sorted, in order of smallest member.
    pub fn components(&self) -> Vec<BTreeSet<V>> {
        let mut seen: BTreeSet<V> = BTreeSet::new();
        let mut comps = Vec::new();
        for v in self.vertices() {
            if !seen.contains(&v) {
                let comp: BTreeSet<V> = self.bfs_distances(v).into_keys().collect();
                seen.extend(comp.iter().copied());
                comps.push(comp);
            }
        }
        comps
    }

    /// True if `keep` induces a connected non-empty subgraph.
    pub fn is_connected_subset(&self, keep: &BTreeSet<V>) -> bool {
        let Some(&start) = keep.iter().next() else { return false };
        if !keep.iter().all(|&v| self.has_vertex(v)) {
            return false;
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbours(u) {
                if keep.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == keep.len()
    }

    /// True if some edge joins `a` and `b`.
    pub fn sets_adjacent(&self, a: &BTreeSet<V>, b: &BTreeSet<V>) -> bool {
        a.iter().any(|&u| self.neighbours(u).any(|w| b.contains(&w)))
    }
}

impl Graph<usize> {
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0);
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
            for u in 0..v {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::new();
        for v in 0..a + b {
            g.add_vertex(v);
        }
        for u in 0..a {
            for w in a..a + b {
                g.add_edge(u, w);
            }
        }
        g
    }

    /// Complete join: `left` and `right` relabelled to disjoint id ranges,
    /// plus all edges between them. Returns (join, left size).
    pub fn join(left: &Graph<usize>, right: &Graph<usize>) -> Graph<usize> {
        let left_ids: BTreeMap<usize, usize> =
            left.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let offset = left_ids.len();
        let right_ids: BTreeMap<usize, usize> =
            right.vertices().enumerate().map(|(i, v)| (v, offset + i)).collect();
        let mut g = Graph::new();
        for &i in left_ids.values().chain(right_ids.values()) {
            g.add_vertex(i);
        }
        for (u, v) in left.edges() {
            g.add_edge(left_ids[&u], left_ids[&v]);
        }
        for (u, v) in right.edges() {
            g.add_edge(right_ids[&u], right_ids[&v]);
        }
        for &u in left_ids.values() {
            for &v in right_ids.values() {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Parses the `.graph` edge-list format: a `V <n>` header declaring
    /// vertices `0..n`, then one `u v` pair per line. `#` starts a comment.
    pub fn parse_graph(text: &str) -> Result<Graph<usize>, GraphError> {
        let mut g = Graph::new();
        let mut declared: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let first = tokens.next().unwrap();
            if first == "V" {
                if declared.is_some() {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: "duplicate V header".into(),
                    });
                }
                let n: usize = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| GraphError::Parse {
                        line: line_no,
                        msg: "expected `V <n>`".into(),
                    })?;
                for v in 0..n {
                    g.add_vertex(v);
                }
                declared = Some(n);
                continue;
            }
            let n = declared.ok_or_else(|| GraphError::Parse {
                line: line_no,
                msg: "edge line before V header".into(),
            })?;
            let u: usize = first.parse().map_err(|_| GraphError::Parse {
                line: line_no,
                msg: format!("bad vertex id `{first}`"),
            })?;
            let v: usize = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse {
                    line: line_no,
                    msg: "expected `u v`".into(),
                })?;
            if tokens.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "trailing tokens after edge".into(),
                });
            }
            if u >= n || v >= n {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: format!("vertex out of range 0..{n}"),
                });
            }
            if u == v {
                return Err(GraphError::Parse { line: line_no, msg: "loop edge".into() });
            }
            g.add_edge(u, v);
        }
        if declared.is_none() {
            return Err(GraphError::Parse { line: 1, msg: "missing V header".into() });
        }
        Ok(g)
    }

    pub fn serialize_graph(&self) -> String {
        // Requires contiguous 0-based ids, which every generator here emits.
        let n = self.vertex_count();
        debug_assert!(self.vertices().all(|v| v < n));
        let mut out = format!("V {n}\n");
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_basics() {
        let g = Graph::from_edges([(0usize, 1), (1, 2)]);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.neighbours(1).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn components_and_connectivity() {
        let mut g = Graph::from_edges([(0usize, 1), (2, 3)]);
        g.add_vertex(9);
        assert!(!g.is_connected());
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[2], BTreeSet::from([9]));
        assert!(Graph::<usize>::new().is_connected());
    }

    #[test]
    fn bfs_distances_on_cycle() {
        let g = Graph::cycle(6);
        let d = g.bfs_distances(0);
        assert_eq!(d[&3], 3);
        assert_eq!(d[&5], 1);
    }

    #[test]
    fn join_builds_wheel() {
        // C5 + K1 is the wheel W5: hub adjacent to a 5-cycle.
        let w = Graph::join(&Graph::cycle(5), &Graph::complete(1));
        assert_eq!(w.vertex_count(), 6);
        assert_eq!(w.edge_count(), 10);
        assert_eq!(w.degree(5), 5);
    }

    #[test]
    fn graph_format_round_trip() {
        let g = Graph::from_edges([(0usize, 1), (1, 2), (2, 0)]);
        let text = g.serialize_graph();
        let back = Graph::parse_graph(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn graph_format_errors() {
        assert!(matches!(
            Graph::parse_graph("0 1\n"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse_graph("V 2\n0 5\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse_graph("V 2\n1 1\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn isolated_vertices_survive_format() {
        let mut g = Graph::new();
        for v in 0..4 {
            g.add_vertex(v);
        }
        g.add_edge(0, 2);
        let back = Graph::parse_graph(&g.serialize_graph()).unwrap();
        assert_eq!(back.vertex_count(), 4);
        assert_eq!(back.edge_count(), 1);
    }
}
