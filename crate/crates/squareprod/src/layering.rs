//! BFS layerings and leveled plane embeddings.
//!
//! `leveled_embedding` realises a connected squaregraph as a leveled
//! plane drawing over the BFS layering from an outer root: every vertex
//! gets a (level, rank) coordinate and every edge joins consecutive
//! levels. The in-level order is built by scanning the previous level
//! left to right and appending each vertex's unranked down-neighbours in
//! clockwise rotation order, starting immediately after the edge to its
//! leftmost ranked up-neighbour (at the root: after the outer boundary
//! edge leaving it). The construction is not trusted: the non-crossing
//! order condition is verified exhaustively before an embedding is
//! returned, and any violation is a hard error.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Graph;
use crate::planegraph::{PlaneGraph, VertexId};
use crate::recognize::{is_squaregraph, SquaregraphWitness};

/// An ordered partition of the vertex set where every edge spans at most
/// one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    layers: Vec<BTreeSet<VertexId>>,
}

impl Layering {
    pub fn new(layers: Vec<BTreeSet<VertexId>>) -> Self {
        Layering { layers }
    }

    pub fn layers(&self) -> &[BTreeSet<VertexId>] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layer_of(&self, v: VertexId) -> Option<usize> {
        self.layers.iter().position(|l| l.contains(&v))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayeringError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("root {0} is not in the graph")]
    UnknownRoot(VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("input is not a squaregraph: {0}")]
    NotSquaregraph(SquaregraphWitness),
    #[error("root {0} is not on the outer face")]
    RootNotOuter(VertexId),
    #[error(
        "order crossing between edges ({u1},{v1}) and ({u2},{v2}); \
         the input embedding or the construction is invalid"
    )]
    OrderCrossing { u1: VertexId, v1: VertexId, u2: VertexId, v2: VertexId },
    #[error("vertex {0} has up-degree above 2")]
    UpDegreeViolation(VertexId),
    #[error("invalid leveled data: {0}")]
    InvalidLevels(String),
}

/// BFS layering: layer index equals the distance to `root`.
pub fn bfs_layering(g: &Graph<usize>, root: usize) -> Result<Layering, LayeringError> {
    if !g.has_vertex(root) {
        return Err(LayeringError::UnknownRoot(root));
    }
    if !g.is_connected() {
        return Err(LayeringError::Disconnected);
    }
    let dist = g.bfs_distances(root);
    let depth = dist.values().copied().max().unwrap_or(0);
    let mut layers = vec![BTreeSet::new(); depth + 1];
    for (v, d) in dist {
        layers[d].insert(v);
    }
    Ok(Layering::new(layers))
}

/// Checks the layering conditions: non-empty layers partitioning the
/// vertex set, and |i - j| <= 1 for every edge.
pub fn is_layering(g: &Graph<usize>, candidate: &Layering) -> bool {
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, layer) in candidate.layers().iter().enumerate() {
        if layer.is_empty() {
            return false;
        }
        for &v in layer {
            if !g.has_vertex(v) || index.insert(v, i).is_some() {
                return false;
            }
        }
    }
    if index.len() != g.vertex_count() {
        return false;
    }
    g.edges().all(|(u, v)| index[&u].abs_diff(index[&v]) <= 1)
}

/// True iff no edge of `g` has both endpoints in `layer`.
pub fn is_independent_layer(g: &Graph<usize>, layer: &BTreeSet<usize>) -> bool {
    g.edges().all(|(u, v)| !(layer.contains(&u) && layer.contains(&v)))
}

/// A plane graph with per-vertex (level, rank) coordinates realising a
/// (weakly) leveled drawing.
#[derive(Debug, Clone)]
pub struct LeveledEmbedding {
    base: PlaneGraph,
    level: BTreeMap<VertexId, usize>,
    rank: BTreeMap<VertexId, usize>,
    /// Vertices of each level in rank order.
    by_level: Vec<Vec<VertexId>>,
    weak: bool,
}

impl LeveledEmbedding {
    pub fn base(&self) -> &PlaneGraph {
        &self.base
    }

    pub fn level_of(&self, v: VertexId) -> Option<usize> {
        self.level.get(&v).copied()
    }

    pub fn rank_of(&self, v: VertexId) -> Option<usize> {
        self.rank.get(&v).copied()
    }

    pub fn level_count(&self) -> usize {
        self.by_level.len()
    }

    /// Vertices of level `i` in rank order.
    pub fn level_vertices(&self, i: usize) -> &[VertexId] {
        &self.by_level[i]
    }

    pub fn is_weak(&self) -> bool {
        self.weak
    }

    pub fn layering(&self) -> Layering {
        Layering::new(
            self.by_level.iter().map(|l| l.iter().copied().collect()).collect(),
        )
    }

    /// Validating constructor for hand-built (possibly weakly) leveled
    /// embeddings. Checks that levels form a layering, ranks are total
    /// per level, same-level edges appear only in weak embeddings and
    /// only between rank-consecutive vertices, and no two edges cross.
    pub fn from_parts(
        base: PlaneGraph,
        level: BTreeMap<VertexId, usize>,
        rank: BTreeMap<VertexId, usize>,
        weak: bool,
    ) -> Result<Self, LayeringError> {
        let g = base.underlying();
        let bad = |msg: &str| LayeringError::InvalidLevels(msg.to_string());
        if g.vertices().any(|v| !level.contains_key(&v) || !rank.contains_key(&v)) {
            return Err(bad("level/rank must be total on the vertex set"));
        }
        let depth = level.values().copied().max().unwrap_or(0);
        let mut by_level: Vec<Vec<VertexId>> = vec![Vec::new(); depth + 1];
        for (&v, &l) in &level {
            by_level[l].push(v);
        }
        for lvl in &mut by_level {
            lvl.sort_by_key(|v| rank[v]);
            if lvl.is_empty() {
                return Err(bad("empty level"));
            }
            for (expect, v) in lvl.iter().enumerate() {
                if rank[v] != expect {
                    return Err(bad("ranks must be 0..len without gaps"));
                }
            }
        }
        for (u, v) in g.edges() {
            let (lu, lv) = (level[&u], level[&v]);
            if lu == lv {
                if !weak {
                    return Err(bad("same-level edge in a strictly leveled embedding"));
                }
                if rank[&u].abs_diff(rank[&v]) != 1 {
                    return Err(bad("same-level edge between non-consecutive ranks"));
                }
            } else if lu.abs_diff(lv) > 1 {
                return Err(bad("edge spanning more than one level"));
            }
        }
        let emb = LeveledEmbedding { base, level, rank, by_level, weak };
        emb.check_non_crossing()?;
        Ok(emb)
    }

    /// Rejects any pair of consecutive-level edges whose endpoint order
    /// inverts between the levels.
    fn check_non_crossing(&self) -> Result<(), LayeringError> {
        let g = self.base.underlying();
        for i in 1..self.by_level.len() {
            let mut edges: Vec<(usize, usize, VertexId, VertexId)> = Vec::new();
            for &v in &self.by_level[i] {
                for u in g.neighbours(v) {
                    if self.level[&u] + 1 == i {
                        edges.push((self.rank[&u], self.rank[&v], u, v));
                    }
                }
            }
            edges.sort();
            for a in 0..edges.len() {
                for b in a + 1..edges.len() {
                    let (ru1, rv1, u1, v1) = edges[a];
                    let (ru2, rv2, u2, v2) = edges[b];
                    if ru1 < ru2 && rv1 > rv2 {
                        return Err(LayeringError::OrderCrossing { u1, v1, u2, v2 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Neighbours of `v` one level up (towards the root).
    pub fn up_degree(&self, v: VertexId) -> Result<usize, LayeringError> {
        let l = self.level_of(v).ok_or(LayeringError::UnknownVertex(v))?;
        Ok(self
            .base
            .rotation(v)
            .iter()
            .filter(|&&w| l > 0 && self.level[&w] == l - 1)
            .count())
    }

    /// Neighbours of `v` one level down.
    pub fn down_degree(&self, v: VertexId) -> Result<usize, LayeringError> {
        let l = self.level_of(v).ok_or(LayeringError::UnknownVertex(v))?;
        Ok(self.base.rotation(v).iter().filter(|&&w| self.level[&w] == l + 1).count())
    }

    /// Maximum up-degree over all vertices. A leveled squaregraph never
    /// exceeds 2; a violation surfaces as a structured error naming the
    /// offending vertex.
    pub fn max_up_degree(&self) -> Result<usize, LayeringError> {
        let mut max = 0;
        for v in self.base.vertices() {
            let d = self.up_degree(v)?;
            if d > 2 {
                return Err(LayeringError::UpDegreeViolation(v));
            }
            max = max.max(d);
        }
        Ok(max)
    }
}

/// Builds the leveled plane embedding of a connected squaregraph from a
/// BFS layering rooted at the outer vertex `root`.
pub fn leveled_embedding(
    g: &PlaneGraph,
    root: VertexId,
) -> Result<LeveledEmbedding, LayeringError> {
    if !g.has_vertex(root) {
        return Err(LayeringError::UnknownRoot(root));
    }
    let underlying = g.underlying();
    if !underlying.is_connected() {
        return Err(LayeringError::Disconnected);
    }
    if let crate::recognize::SquaregraphVerdict::No(w) = is_squaregraph(g) {
        return Err(LayeringError::NotSquaregraph(w));
    }
    let boundary = g
        .component_boundaries()
        .into_iter()
        .next()
        .map(|(_, walk)| walk)
        .unwrap_or_default();
    let on_outer = boundary.is_empty() || boundary.iter().any(|&(u, _)| u == root);
    if !on_outer {
        return Err(LayeringError::RootNotOuter(root));
    }

    let layering = bfs_layering(&underlying, root)?;
    let level: BTreeMap<VertexId, usize> = layering
        .layers()
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&v| (v, i)))
        .collect();

    let mut rank: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut by_level: Vec<Vec<VertexId>> = vec![vec![root]];
    rank.insert(root, 0);

    // The root's scan anchor: the head of the first boundary edge
    // leaving it (the outer reference itself when the root is its tail).
    let root_anchor = match g.outer_ref() {
        Some((u, w)) if u == root => Some(w),
        _ => boundary.iter().find(|&&(u, _)| u == root).map(|&(_, w)| w),
    };

    for i in 1..layering.len() {
        let mut next: Vec<VertexId> = Vec::new();
        for &u in &by_level[i - 1] {
            let rot = g.rotation(u);
            let anchor = if u == root {
                root_anchor.expect("root of an edged graph has a boundary edge")
            } else {
                // Leftmost ranked up-neighbour: minimal rank one level up.
                *rot.iter()
                    .filter(|&&w| level[&w] == i - 2)
                    .min_by_key(|&&w| rank[&w])
                    .expect("BFS vertex has an up-neighbour")
            };
            let start = rot.iter().position(|&w| w == anchor).unwrap();
            for k in 1..=rot.len() {
                let w = rot[(start + k) % rot.len()];
                if level[&w] == i && !rank.contains_key(&w) {
                    rank.insert(w, next.len());
                    next.push(w);
                }
            }
        }
        debug_assert_eq!(next.len(), layering.layers()[i].len());
        by_level.push(next);
    }

    let emb = LeveledEmbedding { base: g.clone(), level, rank, by_level, weak: false };
    emb.check_non_crossing()?;
    Ok(emb)
}
