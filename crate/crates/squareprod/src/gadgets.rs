//! Lower-bound gadget families and the brute-force searchers used to
//! test them at desk scale.
//!
//! The recursive families take an explicit path length everywhere the
//! construction is usually quantified asymptotically; experiment sizing
//! is configuration, not a constant baked in here. All searchers are
//! exhaustive behind hard size gates, so a negative answer is a proof
//! over the searched space.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::verify_layered_partition;
use crate::graph::Graph;
use crate::layering::Layering;
use crate::planegraph::{PlaneGraph, VertexId};
use crate::products::subgraph_injection_exists;
use crate::recognize::Colour;

pub const DEFAULT_MINOR_GATE: usize = 12;
pub const DEFAULT_PATHWIDTH_GATE: usize = 20;
pub const DEFAULT_FOREST_SEARCH_GATE: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("size gate exceeded: {actual} vertices, bound {bound}")]
    SizeGate { actual: usize, bound: usize },
    #[error("parameter out of range: {0}")]
    BadParameter(String),
}

/// Path length from the base-case sizing rule: with parts of size at
/// most `a`, a path on (a+1)am + a vertices survives the deletion of one
/// part with a piece long enough to force an m-vertex sub-quotient path.
pub fn gadget_path_length(a: usize, m: usize) -> usize {
    (a + 1) * a * m + a
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    Plain { k: usize, l: usize, nprime: usize },
    Bipartite { i: usize, j: usize, l: usize, nprime: usize },
}

/// A generated gadget together with its apex and colouring metadata.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub graph: Graph<usize>,
    pub kind: GadgetKind,
    pub apex: usize,
    pub colouring: Option<BTreeMap<usize, Colour>>,
}

/// Metadata JSON emitted alongside gadget graph files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetMetadata {
    pub kind: String,
    pub params: BTreeMap<String, usize>,
    pub apex_id: usize,
    pub colouring: Option<BTreeMap<String, Colour>>,
}

impl Gadget {
    pub fn metadata(&self) -> GadgetMetadata {
        let (kind, params) = match &self.kind {
            GadgetKind::Plain { k, l, nprime } => (
                "plain",
                BTreeMap::from([
                    ("k".to_string(), *k),
                    ("l".to_string(), *l),
                    ("nprime".to_string(), *nprime),
                ]),
            ),
            GadgetKind::Bipartite { i, j, l, nprime } => (
                "bipartite",
                BTreeMap::from([
                    ("i".to_string(), *i),
                    ("j".to_string(), *j),
                    ("l".to_string(), *l),
                    ("nprime".to_string(), *nprime),
                ]),
            ),
        };
        GadgetMetadata {
            kind: kind.to_string(),
            params,
            apex_id: self.apex,
            colouring: self
                .colouring
                .as_ref()
                .map(|c| c.iter().map(|(v, col)| (v.to_string(), *col)).collect()),
        }
    }
}

/// Recursive dominated family: level 1 is a path plus a dominant vertex;
/// each further level takes 3l disjoint copies of the previous one plus
/// a new dominant vertex.
pub fn gadget_plain(k: usize, l: usize, nprime: usize) -> Result<Gadget, GadgetError> {
    if k < 1 || l < 1 || nprime < 1 {
        return Err(GadgetError::BadParameter(format!(
            "need k >= 1, l >= 1, nprime >= 1; got k={k} l={l} nprime={nprime}"
        )));
    }
    let mut graph = Graph::path(nprime);
    let mut apex = nprime;
    graph.add_vertex(apex);
    for v in 0..nprime {
        graph.add_edge(v, apex);
    }
    for _ in 2..=k {
        let copy = graph.clone();
        let size = copy.vertex_count();
        let mut next = Graph::new();
        for c in 0..3 * l {
            for v in copy.vertices() {
                next.add_vertex(c * size + v);
            }
            for (u, v) in copy.edges() {
                next.add_edge(c * size + u, c * size + v);
            }
        }
        apex = 3 * l * size;
        next.add_vertex(apex);
        for v in 0..apex {
            next.add_edge(v, apex);
        }
        graph = next;
    }
    Ok(Gadget {
        graph,
        kind: GadgetKind::Plain { k, l, nprime },
        apex,
        colouring: None,
    })
}

fn coloured_path(nprime: usize) -> (Graph<usize>, BTreeMap<usize, Colour>) {
    let graph = Graph::path(nprime);
    let colouring = (0..nprime)
        .map(|v| (v, if v % 2 == 0 { Colour::Red } else { Colour::Blue }))
        .collect();
    (graph, colouring)
}

fn bipartite_base(nprime: usize, apex_colour: Colour) -> Gadget {
    let (mut graph, mut colouring) = coloured_path(nprime);
    let apex = nprime;
    graph.add_vertex(apex);
    for v in 0..nprime {
        if colouring[&v] == apex_colour.flip() {
            graph.add_edge(v, apex);
        }
    }
    colouring.insert(apex, apex_colour);
    Gadget {
        graph,
        kind: GadgetKind::Bipartite {
            i: (apex_colour == Colour::Red) as usize,
            j: (apex_colour == Colour::Blue) as usize,
            l: 1,
            nprime,
        },
        apex,
        colouring: Some(colouring),
    }
}

/// Takes 5l relabelled copies of `sub` plus a new apex of `apex_colour`
/// adjacent to every vertex of the opposite colour.
fn bipartite_step(sub: &Gadget, l: usize, apex_colour: Colour) -> (Graph<usize>, usize, BTreeMap<usize, Colour>) {
    let size = sub.graph.vertex_count();
    let sub_col = sub.colouring.as_ref().unwrap();
    let mut graph = Graph::new();
    let mut colouring = BTreeMap::new();
    for c in 0..5 * l {
        for v in sub.graph.vertices() {
            graph.add_vertex(c * size + v);
            colouring.insert(c * size + v, sub_col[&v]);
        }
        for (u, v) in sub.graph.edges() {
            graph.add_edge(c * size + u, c * size + v);
        }
    }
    let apex = 5 * l * size;
    graph.add_vertex(apex);
    for v in 0..apex {
        if colouring[&v] == apex_colour.flip() {
            graph.add_edge(v, apex);
        }
    }
    colouring.insert(apex, apex_colour);
    (graph, apex, colouring)
}

/// Red-blue coloured bipartite family. The base case is a coloured path
/// plus a red apex adjacent to all blue path vertices; every further red
/// apex reduces `i`, and the mirrored blue apex (adjacent to all red
/// vertices) grows the `j` side.
pub fn gadget_bipartite(
    i: usize,
    j: usize,
    l: usize,
    nprime: usize,
) -> Result<Gadget, GadgetError> {
    if i + j < 1 || l < 1 || nprime < 2 {
        return Err(GadgetError::BadParameter(format!(
            "need i + j >= 1, l >= 1, nprime >= 2; got i={i} j={j} l={l} nprime={nprime}"
        )));
    }
    let gadget = match (i, j) {
        (1, 0) => bipartite_base(nprime, Colour::Red),
        (0, 1) => bipartite_base(nprime, Colour::Blue),
        _ if i >= 2 => {
            let sub = gadget_bipartite(i - 1, j, l, nprime)?;
            let (graph, apex, colouring) = bipartite_step(&sub, l, Colour::Red);
            Gadget {
                graph,
                kind: GadgetKind::Bipartite { i, j, l, nprime },
                apex,
                colouring: Some(colouring),
            }
        }
        _ => {
            let sub = gadget_bipartite(i, j - 1, l, nprime)?;
            let (graph, apex, colouring) = bipartite_step(&sub, l, Colour::Blue);
            Gadget {
                graph,
                kind: GadgetKind::Bipartite { i, j, l, nprime },
                apex,
                colouring: Some(colouring),
            }
        }
    };
    Ok(gadget)
}

/// Plane embedding of the base bipartite gadget: the path drawn along a
/// line with the apex above it, one square per consecutive pair of blue
/// path vertices. Every vertex is on the outer face.
pub fn gadget_bipartite_base_plane(nprime: usize) -> Result<PlaneGraph, GadgetError> {
    if nprime < 2 {
        return Err(GadgetError::BadParameter("nprime must be at least 2".into()));
    }
    let apex = nprime;
    let is_blue = |v: usize| v % 2 == 1;
    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    rotation.insert(0, vec![1]);
    for p in 1..nprime - 1 {
        let mut rot = vec![p - 1, p + 1];
        if is_blue(p) {
            rot.push(apex);
        }
        rotation.insert(p, rot);
    }
    let end = nprime - 1;
    let mut rot = vec![end - 1];
    if is_blue(end) {
        rot.push(apex);
    }
    rotation.insert(end, rot);
    rotation.insert(apex, (1..nprime).filter(|&v| is_blue(v)).collect());
    Ok(PlaneGraph::new(rotation, Some((0, 1))).expect("gadget embedding is valid"))
}

/// Branch sets realising a target graph inside a host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub assignment: BTreeMap<usize, BTreeSet<usize>>,
    pub size_bound: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelViolation {
    #[error("target vertex {0} has no branch set")]
    MissingBranchSet(usize),
    #[error("branch set of {0} is empty or has unknown vertices")]
    BadBranchSet(usize),
    #[error("branch sets of {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("branch set of {0} is not connected")]
    Disconnected(usize),
    #[error("no host edge between the branch sets of {0} and {1}")]
    MissingEdge(usize, usize),
    #[error("branch set of {0} has {1} vertices, above the bound {2}")]
    TooLarge(usize, usize, usize),
}

/// Checks all the model clauses: disjoint connected branch sets of size
/// at most `s`, one per target vertex, with every target edge realised.
pub fn verify_minor_model(
    host: &Graph<usize>,
    target: &Graph<usize>,
    model: &MinorModel,
    s: usize,
) -> Result<(), ModelViolation> {
    for v in target.vertices() {
        let set = model
            .assignment
            .get(&v)
            .ok_or(ModelViolation::MissingBranchSet(v))?;
        if set.is_empty() || !set.iter().all(|&x| host.has_vertex(x)) {
            return Err(ModelViolation::BadBranchSet(v));
        }
        if set.len() > s {
            return Err(ModelViolation::TooLarge(v, set.len(), s));
        }
        if !host.is_connected_subset(set) {
            return Err(ModelViolation::Disconnected(v));
        }
    }
    let verts: Vec<usize> = target.vertices().collect();
    for (a, &u) in verts.iter().enumerate() {
        for &v in &verts[a + 1..] {
            if !model.assignment[&u].is_disjoint(&model.assignment[&v]) {
                return Err(ModelViolation::Overlap(u, v));
            }
        }
    }
    for (u, v) in target.edges() {
        if !host.sets_adjacent(&model.assignment[&u], &model.assignment[&v]) {
            return Err(ModelViolation::MissingEdge(u, v));
        }
    }
    Ok(())
}

/// Exhaustive search for an s-small minor model of `target` in `host`.
/// Branch sets are enumerated as connected subsets of at most `s`
/// vertices, smallest first, so the first model found is canonical.
pub fn find_minor_model(
    host: &Graph<usize>,
    target: &Graph<usize>,
    s: usize,
    gate: usize,
) -> Result<Option<MinorModel>, GadgetError> {
    let n = host.vertex_count();
    if n > gate {
        return Err(GadgetError::SizeGate { actual: n, bound: gate });
    }
    if target.vertex_count() > n || s == 0 {
        return Ok(None);
    }
    let verts: Vec<usize> = host.vertices().collect();
    let index: BTreeMap<usize, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbr_mask: Vec<u64> = verts
        .iter()
        .map(|&v| host.neighbours(v).fold(0u64, |m, w| m | 1 << index[&w]))
        .collect();

    let mut candidates: Vec<u64> = Vec::new();
    for mask in 1u64..(1 << n) {
        if (mask.count_ones() as usize) > s {
            continue;
        }
        let first = mask.trailing_zeros() as usize;
        let mut seen = 1u64 << first;
        loop {
            let mut grow = seen;
            let mut f = seen;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                grow |= nbr_mask[i] & mask;
            }
            if grow == seen {
                break;
            }
            seen = grow;
        }
        if seen == mask {
            candidates.push(mask);
        }
    }

    // Target order: each vertex after the first within a component is
    // adjacent to an earlier one, for pruning.
    let mut order: Vec<usize> = Vec::new();
    let mut placed: BTreeSet<usize> = BTreeSet::new();
    while order.len() < target.vertex_count() {
        let next = target
            .vertices()
            .filter(|v| !placed.contains(v))
            .find(|&v| target.neighbours(v).any(|w| placed.contains(&w)))
            .or_else(|| target.vertices().find(|v| !placed.contains(v)))
            .unwrap();
        placed.insert(next);
        order.push(next);
    }

    fn mask_adjacent(a: u64, b: u64, nbr: &[u64]) -> bool {
        let mut m = a;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            if nbr[i] & b != 0 {
                return true;
            }
        }
        false
    }

    fn rec(
        pos: usize,
        order: &[usize],
        target: &Graph<usize>,
        candidates: &[u64],
        nbr: &[u64],
        used: u64,
        chosen: &mut BTreeMap<usize, u64>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let t = order[pos];
        for &cand in candidates {
            if cand & used != 0 {
                continue;
            }
            let ok = target
                .neighbours(t)
                .filter(|w| chosen.contains_key(w))
                .all(|w| mask_adjacent(chosen[&w], cand, nbr));
            if ok {
                chosen.insert(t, cand);
                if rec(pos + 1, order, target, candidates, nbr, used | cand, chosen) {
                    return true;
                }
                chosen.remove(&t);
            }
        }
        false
    }

    let mut chosen = BTreeMap::new();
    if !rec(0, &order, target, &candidates, &nbr_mask, 0, &mut chosen) {
        return Ok(None);
    }
    let assignment: BTreeMap<usize, BTreeSet<usize>> = chosen
        .into_iter()
        .map(|(t, mask)| {
            let set = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
            (t, set)
        })
        .collect();
    let model = MinorModel { assignment, size_bound: s };
    debug_assert!(verify_minor_model(host, target, &model, s).is_ok());
    Ok(Some(model))
}

/// An exact path decomposition: the bag sequence and its width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDecomposition {
    pub value: usize,
    pub bags: Vec<Vec<usize>>,
}

/// Exact pathwidth by dynamic programming over vertex subsets (the
/// vertex-separation formulation): f(S) is the best achievable maximum
/// boundary over orderings that place S first. The returned bags are
/// validated against both path-decomposition clauses.
pub fn pathwidth_exact(
    g: &Graph<usize>,
    gate: usize,
) -> Result<PathDecomposition, GadgetError> {
    let n = g.vertex_count();
    if n > gate {
        return Err(GadgetError::SizeGate { actual: n, bound: gate });
    }
    if n == 0 {
        return Ok(PathDecomposition { value: 0, bags: vec![] });
    }
    let verts: Vec<usize> = g.vertices().collect();
    let index: BTreeMap<usize, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let nbr_mask: Vec<u32> = verts
        .iter()
        .map(|&v| g.neighbours(v).fold(0u32, |m, w| m | 1 << index[&w]))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };

    let boundary = |s: u32| -> u8 {
        let mut count = 0u8;
        let mut m = s;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            if nbr_mask[i] & !s != 0 {
                count += 1;
            }
        }
        count
    };

    let size = (full as usize) + 1;
    let mut f = vec![u8::MAX; size];
    let mut pick = vec![0u8; size];
    f[0] = 0;
    for s in 1..=full {
        let b = boundary(s);
        let mut best = u8::MAX;
        let mut best_v = 0u8;
        let mut m = s;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let sub = f[(s & !(1 << i)) as usize];
            let cost = sub.max(b);
            if cost < best {
                best = cost;
                best_v = i as u8;
            }
        }
        f[s as usize] = best;
        pick[s as usize] = best_v;
    }

    // Reconstruct the ordering, then read the bags off the prefixes.
    let mut order_rev = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = pick[s as usize] as usize;
        order_rev.push(v);
        s &= !(1 << v);
    }
    order_rev.reverse();
    let order = order_rev;

    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut prefix: u32 = 0;
    for &vi in &order {
        let mut bag: Vec<usize> = (0..n)
            .filter(|&i| prefix >> i & 1 == 1 && nbr_mask[i] & !prefix != 0)
            .map(|i| verts[i])
            .collect();
        bag.push(verts[vi]);
        bag.sort();
        bags.push(bag);
        prefix |= 1 << vi;
    }

    let value = f[full as usize] as usize;
    debug_assert_eq!(bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1, value);
    debug_assert!(valid_path_decomposition(g, &bags));
    Ok(PathDecomposition { value, bags })
}

/// Both path-decomposition clauses: every edge inside a bag, and the
/// bags containing any fixed vertex are contiguous.
pub fn valid_path_decomposition(g: &Graph<usize>, bags: &[Vec<usize>]) -> bool {
    let covered = g.edges().all(|(u, v)| {
        bags.iter().any(|b| b.contains(&u) && b.contains(&v))
    });
    let contiguous = g.vertices().all(|v| {
        let hits: Vec<usize> = bags
            .iter()
            .enumerate()
            .filter(|(_, b)| b.contains(&v))
            .map(|(i, _)| i)
            .collect();
        !hits.is_empty() && hits.windows(2).all(|w| w[1] == w[0] + 1)
    });
    covered && contiguous
}

/// Brute-force test for a subgraph isomorphic to the complete join of a
/// path on `n` vertices with a clique on `k` vertices.
pub fn contains_join_subgraph(
    h: &Graph<usize>,
    n: usize,
    k: usize,
    gate: usize,
) -> Result<bool, GadgetError> {
    if n < 1 {
        return Err(GadgetError::BadParameter("path part needs n >= 1".into()));
    }
    let pattern = Graph::join(&Graph::path(n), &Graph::complete(k));
    match subgraph_injection_exists(&pattern, h, gate) {
        Ok(found) => Ok(found.is_some()),
        Err(crate::products::ProductError::SizeGate { actual, bound }) => {
            Err(GadgetError::SizeGate { actual, bound })
        }
    }
}

/// A layered partition whose quotient is a forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestQuotientWitness {
    pub layers: Vec<Vec<usize>>,
    pub parts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestQuotientResult {
    /// `Some` = SAT with a verified witness; `None` = the whole space of
    /// layered partitions was exhausted.
    pub witness: Option<ForestQuotientWitness>,
    pub nodes_explored: u64,
}

/// Machine-readable report for one searcher run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub instance: String,
    pub gate: usize,
    pub outcome: String,
    pub witness: Option<ForestQuotientWitness>,
    pub nodes_explored: u64,
    pub wall_time_ms: u128,
}

/// Exhaustively decides whether `g` admits a layered partition of width
/// at most `width`, with independent layers, whose quotient is a forest.
/// Layerings are enumerated as layer assignments 0..max_layers with
/// min used index 0; every assignment of adjacent vertices must step by
/// exactly one (independence plus the layering rule).
pub fn forest_quotient_search(
    g: &Graph<usize>,
    width: usize,
    max_layers: usize,
    gate: usize,
) -> Result<ForestQuotientResult, GadgetError> {
    let n = g.vertex_count();
    if n > gate {
        return Err(GadgetError::SizeGate { actual: n, bound: gate });
    }
    if width < 1 || max_layers < 1 {
        return Err(GadgetError::BadParameter(
            "width and max_layers must be at least 1".into(),
        ));
    }
    let verts: Vec<usize> = g.vertices().collect();

    // Vertex order for layer assignment: BFS forest order, so each vertex
    // after its component anchor has an assigned neighbour.
    let mut order: Vec<usize> = Vec::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &v in &verts {
        if seen.contains(&v) {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([v]);
        seen.insert(v);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for w in g.neighbours(u) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }

    let mut nodes: u64 = 0;
    let mut layers_assign: BTreeMap<usize, usize> = BTreeMap::new();
    let result = assign_layers(
        g,
        &order,
        0,
        max_layers,
        width,
        &mut layers_assign,
        &mut nodes,
    );
    Ok(ForestQuotientResult { witness: result, nodes_explored: nodes })
}

fn assign_layers(
    g: &Graph<usize>,
    order: &[usize],
    pos: usize,
    max_layers: usize,
    width: usize,
    assign: &mut BTreeMap<usize, usize>,
    nodes: &mut u64,
) -> Option<ForestQuotientWitness> {
    if pos == order.len() {
        let min = assign.values().copied().min().unwrap_or(0);
        if min != 0 {
            return None; // canonical representative only
        }
        return partition_search(g, assign, width, nodes);
    }
    let v = order[pos];
    for layer in 0..max_layers {
        // Independence and the layering rule together force assigned
        // neighbours to sit exactly one layer away.
        let ok = g
            .neighbours(v)
            .filter_map(|w| assign.get(&w))
            .all(|&lw| lw.abs_diff(layer) == 1);
        if !ok {
            continue;
        }
        *nodes += 1;
        assign.insert(v, layer);
        if let Some(w) =
            assign_layers(g, order, pos + 1, max_layers, width, assign, nodes)
        {
            return Some(w);
        }
        assign.remove(&v);
    }
    None
}

/// Enumerates set partitions in restricted-growth order, pruning parts
/// that would exceed `width` in any layer, and tests each complete
/// partition's quotient for acyclicity.
fn partition_search(
    g: &Graph<usize>,
    layer_of: &BTreeMap<usize, usize>,
    width: usize,
    nodes: &mut u64,
) -> Option<ForestQuotientWitness> {
    let verts: Vec<usize> = g.vertices().collect();
    let mut parts: Vec<Vec<usize>> = Vec::new();

    fn rec(
        pos: usize,
        verts: &[usize],
        g: &Graph<usize>,
        layer_of: &BTreeMap<usize, usize>,
        width: usize,
        parts: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
    ) -> bool {
        if pos == verts.len() {
            return quotient_is_forest(g, parts);
        }
        let v = verts[pos];
        for i in 0..=parts.len() {
            if i == parts.len() {
                parts.push(vec![v]);
            } else {
                let in_layer = parts[i]
                    .iter()
                    .filter(|&&u| layer_of[&u] == layer_of[&v])
                    .count();
                if in_layer + 1 > width {
                    continue;
                }
                parts[i].push(v);
            }
            *nodes += 1;
            if rec(pos + 1, verts, g, layer_of, width, parts, nodes) {
                return true;
            }
            if parts[i].len() == 1 {
                parts.pop();
            } else {
                parts[i].pop();
            }
        }
        false
    }

    if rec(0, &verts, g, layer_of, width, &mut parts, nodes) {
        let depth = layer_of.values().copied().max().unwrap_or(0);
        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
        for (&v, &l) in layer_of {
            layers[l].push(v);
        }
        let witness = ForestQuotientWitness { layers, parts };
        debug_assert!(witness_is_valid(g, &witness, width));
        Some(witness)
    } else {
        None
    }
}

fn quotient_is_forest(g: &Graph<usize>, parts: &[Vec<usize>]) -> bool {
    let part_of: BTreeMap<usize, usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.iter().map(move |&v| (v, i)))
        .collect();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (part_of[&u], part_of[&v]);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    // Union-find cycle test over the quotient edges.
    let mut parent: Vec<usize> = (0..parts.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Re-derivation of the witness claims through the public checkers.
pub fn witness_is_valid(
    g: &Graph<usize>,
    witness: &ForestQuotientWitness,
    width: usize,
) -> bool {
    let layer_sets: Vec<BTreeSet<usize>> = witness
        .layers
        .iter()
        .map(|l| l.iter().copied().collect())
        .collect();
    let part_sets: Vec<BTreeSet<usize>> = witness
        .parts
        .iter()
        .map(|p| p.iter().copied().collect())
        .collect();
    let layering = Layering::new(layer_sets);
    if !crate::layering::is_layering(g, &layering) {
        return false;
    }
    let report = verify_layered_partition(g, &part_sets, &layering);
    report.width <= width
        && report.layers_independent
        && quotient_is_forest(g, &witness.parts)
}

/// Wraps a forest-quotient run into its machine-readable report.
pub fn forest_quotient_report(
    instance: &str,
    g: &Graph<usize>,
    width: usize,
    max_layers: usize,
    gate: usize,
) -> Result<SearchReport, GadgetError> {
    let start = Instant::now();
    let result = forest_quotient_search(g, width, max_layers, gate)?;
    Ok(SearchReport {
        instance: instance.to_string(),
        gate,
        outcome: if result.witness.is_some() { "SAT" } else { "UNSAT" }.to_string(),
        witness: result.witness,
        nodes_explored: result.nodes_explored,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognize::{
        is_outerplanar_embedding, is_squaregraph, radius, red_blue_colouring,
    };

    #[test]
    fn plain_base_counts() {
        let g = gadget_plain(1, 1, 4).unwrap();
        assert_eq!(g.graph.vertex_count(), 5);
        assert_eq!(g.graph.edge_count(), 7); // 3 path + 4 fan edges
        assert_eq!(radius(&g.graph).unwrap(), 1);
        assert_eq!(g.apex, 4);
    }

    #[test]
    fn plain_recursion_counts() {
        let g = gadget_plain(2, 1, 2).unwrap();
        // 3 copies of (P2 + apex) plus one more apex.
        assert_eq!(g.graph.vertex_count(), 10);
        assert_eq!(g.apex, 9);
        assert_eq!(g.graph.degree(9), 9);
    }

    #[test]
    fn plain_gadgets_have_dominant_vertex() {
        for k in 1..=3 {
            for nprime in [1, 3, 5] {
                let g = gadget_plain(k, 1, nprime).unwrap();
                let n = g.graph.vertex_count();
                assert_eq!(g.graph.degree(g.apex), n - 1, "k={k} nprime={nprime}");
                assert_eq!(radius(&g.graph).unwrap(), 1);
            }
        }
    }

    #[test]
    fn bipartite_base_counts() {
        // Path r,b,r,b,r has two blue vertices; the apex fans onto them.
        let g = gadget_bipartite(1, 0, 1, 5).unwrap();
        assert_eq!(g.graph.vertex_count(), 6);
        assert_eq!(g.graph.edge_count(), 6);
        assert_eq!(g.graph.degree(g.apex), 2);
        let col = g.colouring.as_ref().unwrap();
        assert_eq!(col[&g.apex], Colour::Red);
        assert_eq!(col.values().filter(|&&c| c == Colour::Blue).count(), 2);
    }

    #[test]
    fn bipartite_gadgets_are_bipartite_and_connected() {
        for (i, j) in [(1, 0), (0, 1), (2, 0), (1, 1)] {
            let g = gadget_bipartite(i, j, 1, 4).unwrap();
            assert!(g.graph.is_connected(), "({i},{j})");
            let proper = red_blue_colouring(&g.graph).unwrap();
            let col = g.colouring.as_ref().unwrap();
            for (u, v) in g.graph.edges() {
                assert_ne!(col[&u], col[&v]);
                assert_ne!(proper[&u], proper[&v]);
            }
        }
    }

    #[test]
    fn bipartite_radius_two() {
        assert_eq!(radius(&gadget_bipartite(1, 0, 1, 9).unwrap().graph).unwrap(), 2);
        for nprime in 4..=8 {
            assert_eq!(
                radius(&gadget_bipartite(1, 0, 1, nprime).unwrap().graph).unwrap(),
                2
            );
        }
    }

    #[test]
    fn bipartite_base_plane_is_outerplanar_squaregraph() {
        for nprime in 2..=9 {
            let plane = gadget_bipartite_base_plane(nprime).unwrap();
            assert!(is_squaregraph(&plane).is_yes(), "nprime={nprime}");
            assert!(is_outerplanar_embedding(&plane), "nprime={nprime}");
            assert_eq!(
                plane.underlying(),
                gadget_bipartite(1, 0, 1, nprime).unwrap().graph
            );
        }
    }

    #[test]
    fn minor_model_fixtures() {
        let c6 = Graph::cycle(6);
        let k3 = Graph::complete(3);
        // Contract alternate edges of the hexagon.
        let model = MinorModel {
            assignment: BTreeMap::from([
                (0, BTreeSet::from([0, 1])),
                (1, BTreeSet::from([2, 3])),
                (2, BTreeSet::from([4, 5])),
            ]),
            size_bound: 2,
        };
        verify_minor_model(&c6, &k3, &model, 2).unwrap();

        let overlapping = MinorModel {
            assignment: BTreeMap::from([
                (0, BTreeSet::from([0, 1])),
                (1, BTreeSet::from([1, 2])),
                (2, BTreeSet::from([4, 5])),
            ]),
            size_bound: 2,
        };
        assert_eq!(
            verify_minor_model(&c6, &k3, &overlapping, 2),
            Err(ModelViolation::Overlap(0, 1))
        );
    }

    #[test]
    fn find_minor_examples() {
        let c6 = Graph::cycle(6);
        let found = find_minor_model(&c6, &Graph::complete(3), 2, 12).unwrap();
        assert!(found.is_some());

        // Trees have no K4 minor; outerplanar hosts neither.
        let tree = Graph::path(7);
        assert!(find_minor_model(&tree, &Graph::complete(4), 3, 12)
            .unwrap()
            .is_none());
        let mut fan = Graph::path(5);
        for v in 1..5 {
            fan.add_edge(0, v);
        }
        assert!(find_minor_model(&fan, &Graph::complete(4), 2, 12)
            .unwrap()
            .is_none());

        assert!(matches!(
            find_minor_model(&Graph::path(13), &Graph::complete(3), 2, 12),
            Err(GadgetError::SizeGate { actual: 13, bound: 12 })
        ));
    }

    #[test]
    fn pathwidth_known_values() {
        for n in 2..=7 {
            assert_eq!(pathwidth_exact(&Graph::path(n), 20).unwrap().value, 1);
        }
        assert_eq!(pathwidth_exact(&Graph::complete(4), 20).unwrap().value, 3);
        assert_eq!(pathwidth_exact(&Graph::cycle(6), 20).unwrap().value, 2);
        assert_eq!(
            pathwidth_exact(&Graph::complete_bipartite(1, 5), 20).unwrap().value,
            1
        );
        let single = {
            let mut g = Graph::new();
            g.add_vertex(0);
            g
        };
        assert_eq!(pathwidth_exact(&single, 20).unwrap().value, 0);
    }

    #[test]
    fn pathwidth_of_base_gadget_at_most_two() {
        let g = gadget_plain(1, 1, 6).unwrap();
        let pd = pathwidth_exact(&g.graph, 20).unwrap();
        assert!(pd.value <= 2);
        assert!(valid_path_decomposition(&g.graph, &pd.bags));
    }

    #[test]
    fn join_subgraph_examples() {
        assert!(contains_join_subgraph(&Graph::complete(5), 2, 2, 10).unwrap());
        // A forest has no triangle (P2 + K1).
        assert!(!contains_join_subgraph(&Graph::path(6), 2, 1, 10).unwrap());
        let w5 = Graph::join(&Graph::cycle(5), &Graph::complete(1));
        assert!(contains_join_subgraph(&w5, 3, 1, 10).unwrap());
    }

    #[test]
    fn forest_quotient_p4_sat_k3_unsat() {
        let sat = forest_quotient_search(&Graph::path(4), 1, 6, 10).unwrap();
        assert!(sat.witness.is_some());
        assert!(witness_is_valid(&Graph::path(4), &sat.witness.unwrap(), 1));

        let unsat = forest_quotient_search(&Graph::complete(3), 1, 4, 10).unwrap();
        assert!(unsat.witness.is_none());
        assert!(unsat.nodes_explored > 0);
    }

    #[test]
    fn forest_quotient_gate() {
        assert!(matches!(
            forest_quotient_search(&Graph::path(11), 1, 4, 10),
            Err(GadgetError::SizeGate { actual: 11, bound: 10 })
        ));
    }

    #[test]
    fn gadget_metadata_shape() {
        let g = gadget_bipartite(1, 0, 1, 5).unwrap();
        let meta = g.metadata();
        assert_eq!(meta.kind, "bipartite");
        assert_eq!(meta.params["nprime"], 5);
        assert_eq!(meta.apex_id, 5);
        let json = serde_json::to_string(&meta).unwrap();
        assert!(json.contains("\"apex_id\":5"));
    }

    #[test]
    fn path_length_formula() {
        assert_eq!(gadget_path_length(1, 3), 7);
        assert_eq!(gadget_path_length(3, 10), 123);
    }
}
