//! Plane graphs as rotation systems.
//!
//! A combinatorial embedding is stored as a cyclic neighbour order per
//! vertex (clockwise as drawn) plus one directed reference edge whose
//! left face is the outer face. Faces are recovered by the trace rule:
//! after a directed edge (u,v) the walk continues with (v,w) where w
//! immediately precedes u in the rotation at v. Every directed edge then
//! lies on exactly one face walk and each face keeps its interior on the
//! left of its walk.
//!
//! Construction validates the whole structure: adjacency symmetry, no
//! loops or repeated neighbours, the per-component Euler identity
//! n - m + f = 2 (which rules out rotation systems of positive genus),
//! and that the outer reference is an existing directed edge.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Graph;

/// Vertex ids are arbitrary non-negative integers chosen by the input;
/// all operations preserve them.
pub type VertexId = usize;

/// A directed edge (tail, head).
pub type Dart = (VertexId, VertexId);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    rotation: BTreeMap<VertexId, Vec<VertexId>>,
    /// `None` only for edgeless graphs, where every vertex is trivially
    /// on the single (outer) face.
    outer_ref: Option<Dart>,
}

/// One closed face walk: consecutive directed edges chain head-to-tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceWalk {
    pub boundary: Vec<Dart>,
    pub is_outer: bool,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Vertices visited by the walk, deduplicated.
    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.boundary.iter().map(|&(u, _)| u).collect()
    }

    /// True when the walk is a cycle on exactly `n` distinct vertices.
    pub fn is_simple_cycle(&self, n: usize) -> bool {
        self.boundary.len() == n && self.vertex_set().len() == n
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlaneGraphError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("vertex {v} lists unknown neighbour {w}")]
    UnknownNeighbour { v: VertexId, w: VertexId },
    #[error("asymmetric adjacency: {v} lists {w} but {w} does not list {v}")]
    AsymmetricAdjacency { v: VertexId, w: VertexId },
    #[error("vertex {v} lists neighbour {w} more than once")]
    RepeatedNeighbour { v: VertexId, w: VertexId },
    #[error("vertex {v} lists itself as a neighbour")]
    LoopEdge { v: VertexId },
    #[error("duplicate rotation line for vertex {v}")]
    DuplicateVertex { v: VertexId },
    #[error("declared {declared} vertices but found {found} rotation lines")]
    VertexCountMismatch { declared: usize, found: usize },
    #[error(
        "rotation system is not planar: component of vertex {component_rep} \
         has n={n}, m={m}, f={f} (expected n - m + f = 2)"
    )]
    EulerCheckFailed { component_rep: VertexId, n: usize, m: usize, f: usize },
    #[error("OUTER names ({u},{v}) which is not a directed edge of the graph")]
    DanglingOuterRef { u: VertexId, v: VertexId },
    #[error("graph has edges but no OUTER line")]
    MissingOuterRef,
    #[error("OUTER line given for an edgeless graph")]
    UnexpectedOuterRef,
}

impl PlaneGraph {
    /// Builds and validates a plane graph from rotation lists.
    pub fn new(
        rotation: BTreeMap<VertexId, Vec<VertexId>>,
        outer_ref: Option<Dart>,
    ) -> Result<Self, PlaneGraphError> {
        for (&v, nbrs) in &rotation {
            let mut seen = BTreeSet::new();
            for &w in nbrs {
                if w == v {
                    return Err(PlaneGraphError::LoopEdge { v });
                }
                if !rotation.contains_key(&w) {
                    return Err(PlaneGraphError::UnknownNeighbour { v, w });
                }
                if !seen.insert(w) {
                    return Err(PlaneGraphError::RepeatedNeighbour { v, w });
                }
                if !rotation[&w].contains(&v) {
                    return Err(PlaneGraphError::AsymmetricAdjacency { v, w });
                }
            }
        }
        let g = PlaneGraph { rotation, outer_ref };
        match (g.edge_count(), outer_ref) {
            (0, Some((u, v))) => {
                let _ = (u, v);
                return Err(PlaneGraphError::UnexpectedOuterRef);
            }
            (0, None) => {}
            (_, None) => return Err(PlaneGraphError::MissingOuterRef),
            (_, Some((u, v))) => {
                if !g.rotation.get(&u).is_some_and(|r| r.contains(&v)) {
                    return Err(PlaneGraphError::DanglingOuterRef { u, v });
                }
            }
        }
        g.euler_check()?;
        Ok(g)
    }

    /// Per-component Euler identity n - m + f = 2, counting each
    /// component's face walks separately (edgeless components have the
    /// one trivial face).
    fn euler_check(&self) -> Result<(), PlaneGraphError> {
        let walks = self.trace_walks();
        for comp in self.underlying().components() {
            let rep = *comp.iter().next().unwrap();
            let n = comp.len();
            let m: usize =
                comp.iter().map(|v| self.rotation[v].len()).sum::<usize>() / 2;
            let f = if m == 0 {
                1
            } else {
                walks.iter().filter(|w| comp.contains(&w.boundary[0].0)).count()
            };
            if n + f != m + 2 {
                return Err(PlaneGraphError::EulerCheckFailed {
                    component_rep: rep,
                    n,
                    m,
                    f,
                });
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.values().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation.keys().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.rotation.contains_key(&v)
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[&v]
    }

    pub fn outer_ref(&self) -> Option<Dart> {
        self.outer_ref
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation.get(&v).map_or(0, |r| r.len())
    }

    /// The abstract graph under the embedding.
    pub fn underlying(&self) -> Graph<usize> {
        let mut g = Graph::new();
        for (&v, nbrs) in &self.rotation {
            g.add_vertex(v);
            for &w in nbrs {
                g.add_edge(v, w);
            }
        }
        g
    }

    /// Neighbour immediately preceding `w` in the cyclic rotation at `v`.
    fn rotation_pred(&self, v: VertexId, w: VertexId) -> VertexId {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == w).expect("neighbour in rotation");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Successor dart of (u,v) on the face left of (u,v).
    pub fn face_successor(&self, (u, v): Dart) -> Dart {
        (v, self.rotation_pred(v, u))
    }

    /// The face walk through `start`, rotated so its smallest dart is first.
    pub fn face_walk_of(&self, start: Dart) -> Vec<Dart> {
        let mut walk = vec![start];
        let mut cur = self.face_successor(start);
        while cur != start {
            walk.push(cur);
            cur = self.face_successor(cur);
        }
        let min_pos = walk
            .iter()
            .enumerate()
            .min_by_key(|&(_, d)| d)
            .map(|(i, _)| i)
            .unwrap();
        walk.rotate_left(min_pos);
        walk
    }

    fn trace_walks(&self) -> Vec<FaceWalk> {
        let mut walks = Vec::new();
        let mut used: BTreeSet<Dart> = BTreeSet::new();
        for (&v, nbrs) in &self.rotation {
            for &w in nbrs {
                if used.contains(&(v, w)) {
                    continue;
                }
                let boundary = self.face_walk_of((v, w));
                used.extend(boundary.iter().copied());
                walks.push(FaceWalk { boundary, is_outer: false });
            }
        }
        walks
    }

    /// All face walks. Exactly the walk containing the outer reference is
    /// flagged outer; for edgeless graphs there are no walks at all.
    pub fn trace_faces(&self) -> Vec<FaceWalk> {
        let mut walks = self.trace_walks();
        if let Some(outer) = self.outer_ref {
            for w in &mut walks {
                w.is_outer = w.boundary.contains(&outer);
            }
        }
        walks
    }

    /// Boundary walk of each connected component. The component holding
    /// the outer reference uses its designated walk; any other component
    /// (a disconnected input drawn alongside) takes its longest walk,
    /// ties broken by smallest leading dart. Edgeless components have an
    /// empty boundary, meaning all their vertices are outer.
    pub fn component_boundaries(&self) -> Vec<(BTreeSet<VertexId>, Vec<Dart>)> {
        let walks = self.trace_walks();
        self.underlying()
            .components()
            .into_iter()
            .map(|comp| {
                let rep = comp.iter().next().copied();
                let mut candidates: Vec<&FaceWalk> = walks
                    .iter()
                    .filter(|w| rep.is_some_and(|_| comp.contains(&w.boundary[0].0)))
                    .collect();
                let chosen = match self.outer_ref {
                    Some(outer) if comp.contains(&outer.0) => candidates
                        .iter()
                        .find(|w| w.boundary.contains(&outer))
                        .copied(),
                    _ => {
                        candidates.sort_by_key(|w| {
                            (std::cmp::Reverse(w.len()), w.boundary[0])
                        });
                        candidates.first().copied()
                    }
                };
                (comp, chosen.map_or_else(Vec::new, |w| w.boundary.clone()))
            })
            .collect()
    }

    /// Vertices on the outer face. For disconnected inputs this is the
    /// union of all component boundaries.
    pub fn outer_vertices(&self) -> BTreeSet<VertexId> {
        let mut outer = BTreeSet::new();
        for (comp, boundary) in self.component_boundaries() {
            if boundary.is_empty() {
                outer.extend(comp);
            } else {
                outer.extend(boundary.iter().map(|&(u, _)| u));
            }
        }
        outer
    }

    /// Vertices not on the outer face.
    pub fn inner_vertices(&self) -> BTreeSet<VertexId> {
        let outer = self.outer_vertices();
        self.vertices().filter(|v| !outer.contains(v)).collect()
    }

    /// Parses the `.spg` format:
    ///
    /// ```text
    /// # comment
    /// V <n>
    /// <id>: <neighbour ids in clockwise rotation order>
    /// OUTER <u> <v>
    /// ```
    pub fn parse(text: &str) -> Result<Self, PlaneGraphError> {
        let mut declared: Option<usize> = None;
        let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        let mut outer_ref: Option<Dart> = None;

        let syntax = |line: usize, col: usize, msg: &str| PlaneGraphError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end();
            let trimmed = line.trim_start();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let col_of = |token: &str| raw.find(token).map_or(1, |p| p + 1);

            if let Some(rest) = trimmed.strip_prefix("OUTER") {
                if outer_ref.is_some() {
                    return Err(syntax(line_no, 1, "duplicate OUTER line"));
                }
                let mut it = rest.split_whitespace();
                let (u, v) = match (it.next(), it.next(), it.next()) {
                    (Some(a), Some(b), None) => {
                        let u = a.parse().map_err(|_| {
                            syntax(line_no, col_of(a), "OUTER expects two vertex ids")
                        })?;
                        let v = b.parse().map_err(|_| {
                            syntax(line_no, col_of(b), "OUTER expects two vertex ids")
                        })?;
                        (u, v)
                    }
                    _ => return Err(syntax(line_no, 1, "expected `OUTER <u> <v>`")),
                };
                outer_ref = Some((u, v));
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('V') {
                if declared.is_none() && rest.starts_with(char::is_whitespace) {
                    let tok = rest.trim();
                    let n = tok.parse().map_err(|_| {
                        syntax(line_no, col_of(tok), "expected `V <n>`")
                    })?;
                    declared = Some(n);
                    continue;
                }
            }
            if declared.is_none() {
                return Err(syntax(line_no, 1, "expected `V <n>` header first"));
            }
            let Some((id_part, nbr_part)) = trimmed.split_once(':') else {
                return Err(syntax(line_no, 1, "expected `<id>: <neighbours>`"));
            };
            let id_tok = id_part.trim();
            let v: VertexId = id_tok.parse().map_err(|_| {
                syntax(line_no, col_of(id_tok), "bad vertex id before `:`")
            })?;
            if rotation.contains_key(&v) {
                return Err(PlaneGraphError::DuplicateVertex { v });
            }
            let mut nbrs = Vec::new();
            for tok in nbr_part.split_whitespace() {
                let w: VertexId = tok.parse().map_err(|_| {
                    syntax(line_no, col_of(tok), "bad neighbour id")
                })?;
                nbrs.push(w);
            }
            rotation.insert(v, nbrs);
        }

        let declared = declared
            .ok_or_else(|| syntax(text.lines().count().max(1), 1, "missing `V <n>` header"))?;
        if rotation.len() != declared {
            return Err(PlaneGraphError::VertexCountMismatch {
                declared,
                found: rotation.len(),
            });
        }
        PlaneGraph::new(rotation, outer_ref)
    }

    /// Serialises back to `.spg`. Round-trips exactly: rotations keep the
    /// stored starting point, so `parse(serialize(g)) == g`.
    pub fn serialize(&self) -> String {
        let mut out = format!("V {}\n", self.vertex_count());
        for (v, nbrs) in &self.rotation {
            let list: Vec<String> = nbrs.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!("{v}: {}\n", list.join(" ")));
        }
        if let Some((u, v)) = self.outer_ref {
            out.push_str(&format!("OUTER {u} {v}\n"));
        }
        out
    }

    /// Equality of embeddings up to rotating each rotation list.
    pub fn same_embedding(&self, other: &PlaneGraph) -> bool {
        if self.outer_ref != other.outer_ref
            || self.rotation.len() != other.rotation.len()
        {
            return false;
        }
        self.rotation.iter().all(|(v, rot)| {
            other.rotation.get(v).is_some_and(|rot2| {
                rot.len() == rot2.len()
                    && (rot.is_empty()
                        || rot2.iter().position(|&x| x == rot[0]).is_some_and(|i| {
                            (0..rot.len()).all(|k| rot[k] == rot2[(i + k) % rot2.len()])
                        }))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn four_cycle() -> PlaneGraph {
        PlaneGraph::parse("V 4\n1: 2 4\n2: 3 1\n3: 4 2\n4: 1 3\nOUTER 1 2\n").unwrap()
    }

    /// 3x3 grid graph (ids 1..=9 row by row), rotations stored clockwise
    /// so the designated outer walk is the 8-step boundary.
    pub(crate) fn grid3x3() -> PlaneGraph {
        PlaneGraph::parse(concat!(
            "V 9\n",
            "1: 4 2\n",
            "2: 1 5 3\n",
            "3: 2 6\n",
            "4: 7 5 1\n",
            "5: 4 8 6 2\n",
            "6: 5 9 3\n",
            "7: 8 4\n",
            "8: 7 9 5\n",
            "9: 8 6\n",
            "OUTER 1 2\n",
        ))
        .unwrap()
    }

    #[test]
    fn parse_four_cycle() {
        let g = four_cycle();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        // A single cycle has exactly two faces.
        assert_eq!(g.trace_faces().len(), 2);
    }

    #[test]
    fn parse_single_edge() {
        let g = PlaneGraph::parse("V 2\n1: 2\n2: 1\nOUTER 1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.trace_faces().len(), 1);
    }

    #[test]
    fn crossing_k4_fails_euler_check() {
        // Same K4 as below but with the centre rotated the wrong way,
        // which encodes a toroidal embedding: tracing gives f = 2, not 4.
        let err = PlaneGraph::parse(
            "V 4\n1: 2 4 3\n2: 3 4 1\n3: 1 4 2\n4: 1 3 2\nOUTER 1 3\n",
        )
        .unwrap_err();
        assert!(matches!(err, PlaneGraphError::EulerCheckFailed { f: 2, .. }));
    }

    #[test]
    fn planar_k4_passes() {
        let g = PlaneGraph::parse(
            "V 4\n1: 2 4 3\n2: 3 4 1\n3: 1 4 2\n4: 1 2 3\nOUTER 1 3\n",
        )
        .unwrap();
        assert_eq!(g.trace_faces().len(), 4);
        let outer: Vec<_> =
            g.trace_faces().into_iter().filter(|w| w.is_outer).collect();
        assert_eq!(outer.len(), 1);
        assert_eq!(outer[0].len(), 3);
    }

    #[test]
    fn four_cycle_faces_both_length_four() {
        let faces = four_cycle().trace_faces();
        assert!(faces.iter().all(|f| f.len() == 4));
        assert_eq!(faces.iter().filter(|f| f.is_outer).count(), 1);
    }

    #[test]
    fn path_has_one_face_of_double_length() {
        let g = PlaneGraph::parse("V 3\n1: 2\n2: 1 3\n3: 2\nOUTER 1 2\n").unwrap();
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 4);
        assert!(faces[0].is_outer);
    }

    #[test]
    fn grid_faces_hand_traced() {
        // Hand trace of the rotation system: four inner 4-cycles and one
        // outer 8-walk.
        let faces = grid3x3().trace_faces();
        assert_eq!(faces.len(), 5);
        let mut lens: Vec<usize> = faces.iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![4, 4, 4, 4, 8]);
        let outer = faces.iter().find(|f| f.is_outer).unwrap();
        assert_eq!(outer.len(), 8);
        assert_eq!(
            outer.vertex_set(),
            BTreeSet::from([1, 2, 3, 4, 6, 7, 8, 9])
        );
    }

    #[test]
    fn inner_vertices_examples() {
        assert_eq!(grid3x3().inner_vertices(), BTreeSet::from([5]));
        assert!(four_cycle().inner_vertices().is_empty());
        let tree =
            PlaneGraph::parse("V 4\n0: 1 2 3\n1: 0\n2: 0\n3: 0\nOUTER 0 1\n").unwrap();
        assert!(tree.inner_vertices().is_empty());
    }

    #[test]
    fn walk_lengths_sum_to_twice_edges() {
        for g in [four_cycle(), grid3x3()] {
            let total: usize = g.trace_faces().iter().map(|f| f.len()).sum();
            assert_eq!(total, 2 * g.edge_count());
        }
    }

    #[test]
    fn round_trips() {
        for g in [
            four_cycle(),
            grid3x3(),
            PlaneGraph::parse("V 1\n7:\n").unwrap(),
        ] {
            let back = PlaneGraph::parse(&g.serialize()).unwrap();
            assert_eq!(g, back);
            assert!(g.same_embedding(&back));
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            PlaneGraph::parse("V 2\n1: 2\n2:\nOUTER 1 2\n"),
            Err(PlaneGraphError::AsymmetricAdjacency { v: 1, w: 2 })
        ));
        assert!(matches!(
            PlaneGraph::parse("V 2\n1: 2\n2: 1\nOUTER 2 3\n"),
            Err(PlaneGraphError::DanglingOuterRef { u: 2, v: 3 })
        ));
        assert!(matches!(
            PlaneGraph::parse("V 2\n1: 2\n2: 1\n"),
            Err(PlaneGraphError::MissingOuterRef)
        ));
        assert!(matches!(
            PlaneGraph::parse("V 1\n1:\nOUTER 1 1\n"),
            Err(PlaneGraphError::UnexpectedOuterRef)
        ));
        assert!(matches!(
            PlaneGraph::parse("V 1\n1: 1\nOUTER 1 1\n"),
            Err(PlaneGraphError::LoopEdge { v: 1 })
        ));
        let err = PlaneGraph::parse("V 2\n1: x\n2: 1\nOUTER 1 2\n").unwrap_err();
        assert!(matches!(err, PlaneGraphError::Syntax { line: 2, .. }));
    }

    #[test]
    fn disconnected_two_squares() {
        let g = PlaneGraph::parse(concat!(
            "V 8\n",
            "1: 2 4\n2: 3 1\n3: 4 2\n4: 1 3\n",
            "5: 6 8\n6: 7 5\n7: 8 6\n8: 5 7\n",
            "OUTER 1 2\n",
        ))
        .unwrap();
        assert_eq!(g.trace_faces().len(), 4);
        // Both components' boundaries count as outer.
        assert!(g.inner_vertices().is_empty());
        let bounds = g.component_boundaries();
        assert_eq!(bounds.len(), 2);
        assert!(bounds.iter().all(|(_, walk)| walk.len() == 4));
    }
}
