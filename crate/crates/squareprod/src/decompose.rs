//! Vertical-path decomposition of squaregraphs.
//!
//! The pipeline: build the leveled embedding, take the leftmost matching
//! between every pair of consecutive levels, read off the connected
//! components of the matched edges as vertical paths, and certify that
//! the quotient H together with the level index gives a semi-strong
//! product embedding of the input into H and a path. Every guarantee is
//! re-verified before a decomposition is returned: width exactly 1,
//! independent layers, a valid semi-strong embedding, and H outerplanar
//! both by contracting the paths inside the rotation system and (within
//! the size gate) by the forbidden-minor oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::layering::{
    is_independent_layer, leveled_embedding, Layering, LayeringError, LeveledEmbedding,
};
use crate::planegraph::{PlaneGraph, VertexId};
use crate::products::ProductMode;
use crate::recognize::{
    is_outerplanar_abstract, RecognizeError, DEFAULT_OUTERPLANAR_GATE,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error(transparent)]
    Layering(#[from] LayeringError),
    #[error("vertex {0} in level {1} has no neighbour one level down")]
    DownDegreeZero(VertexId, usize),
    #[error("matching clash at vertex {0}: two leftmost edges collide")]
    MatchingClash(VertexId),
    #[error("partition check failed: {0}")]
    PartitionCheck(String),
    #[error("embedding check failed: {0}")]
    EmbeddingCheck(String),
    #[error("quotient is not outerplanar under the inherited embedding")]
    QuotientNotOuterplanar,
    #[error("outerplanarity oracles disagree on the quotient")]
    OuterplanarityMismatch,
}

/// Matching between levels i-1 and i saturating the inner part of
/// level i-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatingMatching {
    pub index: usize,
    /// Edges as (upper vertex in level i-1, lower vertex in level i).
    pub edges: Vec<(VertexId, VertexId)>,
}

/// For each inner vertex of level `i - 1`, the edge to its minimum-rank
/// neighbour one level down. Saturation of the inner part and the
/// matching property are verified; a clash can only arise when the
/// hypotheses on the embedding fail.
pub fn leftmost_matching(
    e: &LeveledEmbedding,
    i: usize,
) -> Result<SaturatingMatching, DecomposeError> {
    assert!(i >= 1 && i < e.level_count(), "level index out of range");
    let g = e.base().underlying();
    let inner = e.base().inner_vertices();
    let mut edges = Vec::new();
    let mut taken: BTreeSet<VertexId> = BTreeSet::new();
    for &u in e.level_vertices(i - 1) {
        if !inner.contains(&u) {
            continue;
        }
        let child = g
            .neighbours(u)
            .filter(|&w| e.level_of(w) == Some(i))
            .min_by_key(|&w| e.rank_of(w))
            .ok_or(DecomposeError::DownDegreeZero(u, i - 1))?;
        if !taken.insert(child) {
            return Err(DecomposeError::MatchingClash(child));
        }
        edges.push((u, child));
    }
    Ok(SaturatingMatching { index: i, edges })
}

/// Partition of the vertex set into vertical paths plus its quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPartition {
    /// Each part listed root-to-tip (increasing level); parts ordered by
    /// their smallest vertex id.
    pub parts: Vec<Vec<VertexId>>,
    pub part_of: BTreeMap<VertexId, usize>,
    pub quotient: Graph<usize>,
}

impl HPartition {
    pub fn part_count(&self) -> usize {
        self.parts.len()
    }
}

/// Reads the connected components of the union of all matchings as
/// vertical paths. Verifies that every vertex has at most one parent and
/// one child and that the deepest vertex of each part is outer.
pub fn vertical_path_partition(
    e: &LeveledEmbedding,
    matchings: &[SaturatingMatching],
) -> Result<HPartition, DecomposeError> {
    let mut child: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for m in matchings {
        for &(u, v) in &m.edges {
            if child.insert(u, v).is_some() {
                return Err(DecomposeError::PartitionCheck(format!(
                    "vertex {u} has two children"
                )));
            }
            if parent.insert(v, u).is_some() {
                return Err(DecomposeError::PartitionCheck(format!(
                    "vertex {v} has two parents"
                )));
            }
        }
    }
    let outer = e.base().outer_vertices();
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    for v in e.base().vertices() {
        if parent.contains_key(&v) {
            continue; // not the top of its path
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(&c) = child.get(&cur) {
            path.push(c);
            cur = c;
        }
        let deepest = *path.last().unwrap();
        if !outer.contains(&deepest) {
            return Err(DecomposeError::PartitionCheck(format!(
                "deepest vertex {deepest} of a part is not outer"
            )));
        }
        parts.push(path);
    }
    parts.sort_by_key(|p| p.iter().min().copied());
    let part_of: BTreeMap<VertexId, usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.iter().map(move |&v| (v, i)))
        .collect();
    let sets: Vec<BTreeSet<VertexId>> =
        parts.iter().map(|p| p.iter().copied().collect()).collect();
    let quotient = quotient(&e.base().underlying(), &sets)
        .map_err(DecomposeError::PartitionCheck)?;
    Ok(HPartition { parts, part_of, quotient })
}

/// Quotient graph of a partition: one vertex per part, an edge whenever
/// some cross-part adjacency exists. The partition must cover the vertex
/// set exactly.
pub fn quotient(
    g: &Graph<usize>,
    partition: &[BTreeSet<VertexId>],
) -> Result<Graph<usize>, String> {
    let mut part_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, part) in partition.iter().enumerate() {
        for &v in part {
            if !g.has_vertex(v) {
                return Err(format!("part {i} contains unknown vertex {v}"));
            }
            if part_of.insert(v, i).is_some() {
                return Err(format!("vertex {v} appears in two parts"));
            }
        }
    }
    if part_of.len() != g.vertex_count() {
        return Err("partition does not cover the vertex set".to_string());
    }
    let mut q = Graph::new();
    for i in 0..partition.len() {
        q.add_vertex(i);
    }
    for (u, v) in g.edges() {
        let (a, b) = (part_of[&u], part_of[&v]);
        if a != b {
            q.add_edge(a, b);
        }
    }
    Ok(q)
}

/// Quotient of the partition restricted to a subgraph `j`: only parts
/// meeting V(j) survive (keeping their original part ids), and only
/// adjacencies along edges of `j` count. Always a subgraph of the full
/// quotient.
pub fn sub_quotient(
    g: &Graph<usize>,
    partition: &[BTreeSet<VertexId>],
    j: &Graph<usize>,
) -> Result<Graph<usize>, String> {
    if !j.vertices().all(|v| g.has_vertex(v))
        || !j.edges().all(|(u, v)| g.has_edge(u, v))
    {
        return Err("j is not a subgraph".to_string());
    }
    let mut part_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, part) in partition.iter().enumerate() {
        for &v in part {
            part_of.insert(v, i);
        }
    }
    let mut q = Graph::new();
    for v in j.vertices() {
        let Some(&p) = part_of.get(&v) else {
            return Err(format!("vertex {v} of j is not covered by the partition"));
        };
        q.add_vertex(p);
    }
    for (u, v) in j.edges() {
        let (a, b) = (part_of[&u], part_of[&v]);
        if a != b {
            q.add_edge(a, b);
        }
    }
    Ok(q)
}

/// Width and independence report of a layered partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredPartitionReport {
    pub width: usize,
    pub thin: bool,
    pub layers_independent: bool,
}

pub fn verify_layered_partition(
    g: &Graph<usize>,
    partition: &[BTreeSet<VertexId>],
    layering: &Layering,
) -> LayeredPartitionReport {
    let mut width = 0;
    for part in partition {
        for layer in layering.layers() {
            width = width.max(part.intersection(layer).count());
        }
    }
    let layers_independent =
        layering.layers().iter().all(|l| is_independent_layer(g, l));
    LayeredPartitionReport { width, thin: width <= 1, layers_independent }
}

/// Coordinates of one vertex inside the product: the H-factor vertex,
/// the path index, and a copy index for width above 1 (always 0 here,
/// where partitions are thin).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCoords {
    pub part: usize,
    pub layer: usize,
    pub copy: usize,
}

/// An injective map certifying containment in a product of `target_h`
/// and a path with `path_length` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEmbedding {
    pub mode: ProductMode,
    pub target_h: Graph<usize>,
    pub path_length: usize,
    pub map: BTreeMap<VertexId, ProductCoords>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingViolation {
    #[error("vertex {0} has no image")]
    MissingVertex(VertexId),
    #[error("vertices {0} and {1} map to the same product vertex")]
    NotInjective(VertexId, VertexId),
    #[error("edge ({0},{1}) does not map to a product edge")]
    EdgeNotPreserved(VertexId, VertexId),
    #[error("image of vertex {0} is outside the product")]
    ImageOutOfRange(VertexId),
}

/// Re-checks a product embedding edge by edge under its mode's rule.
pub fn verify_product_embedding(
    g: &Graph<usize>,
    emb: &ProductEmbedding,
) -> Result<(), EmbeddingViolation> {
    let mut seen: BTreeMap<(usize, usize, usize), VertexId> = BTreeMap::new();
    for v in g.vertices() {
        let c = emb.map.get(&v).ok_or(EmbeddingViolation::MissingVertex(v))?;
        if !emb.target_h.has_vertex(c.part) || c.layer >= emb.path_length {
            return Err(EmbeddingViolation::ImageOutOfRange(v));
        }
        if let Some(&other) = seen.get(&(c.part, c.layer, c.copy)) {
            return Err(EmbeddingViolation::NotInjective(other, v));
        }
        seen.insert((c.part, c.layer, c.copy), v);
    }
    for (u, v) in g.edges() {
        let (a, b) = (&emb.map[&u], &emb.map[&v]);
        let h_eq = a.part == b.part;
        let h_adj = emb.target_h.has_edge(a.part, b.part);
        let p_eq = a.layer == b.layer;
        let p_adj = a.layer.abs_diff(b.layer) == 1;
        let ok = match emb.mode {
            ProductMode::Cartesian => (h_eq && p_adj) || (p_eq && h_adj),
            ProductMode::Direct => h_adj && p_adj,
            ProductMode::Strong => {
                (h_eq && p_adj) || (p_eq && h_adj) || (h_adj && p_adj)
            }
            ProductMode::Semistrong => (h_eq || h_adj) && p_adj,
        };
        if !ok {
            return Err(EmbeddingViolation::EdgeNotPreserved(u, v));
        }
    }
    Ok(())
}

/// Verification verdicts recorded in a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub squaregraph: bool,
    pub width_one: bool,
    pub layers_independent: bool,
    pub vertical_paths: bool,
    pub deepest_outer: bool,
    pub embedding_semistrong: bool,
    pub h_outerplanar_embedding: bool,
    /// `None` when the quotient exceeds the forbidden-minor size gate.
    pub h_outerplanar_abstract: Option<bool>,
}

/// Full decomposition certificate of one squaregraph.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub leveled: LeveledEmbedding,
    pub partition: HPartition,
    pub matchings: Vec<SaturatingMatching>,
    pub embedding: ProductEmbedding,
    pub checks: CheckReport,
}

impl Decomposition {
    pub fn layering(&self) -> Layering {
        self.leveled.layering()
    }

    pub fn quotient(&self) -> &Graph<usize> {
        &self.partition.quotient
    }
}

/// Theorem-style pipeline for one connected squaregraph. The default
/// root is the smallest outer vertex.
pub fn decompose_squaregraph(
    g: &PlaneGraph,
    root: Option<VertexId>,
) -> Result<Decomposition, DecomposeError> {
    let root = match root {
        Some(r) => r,
        None => *g
            .outer_vertices()
            .iter()
            .next()
            .ok_or(LayeringError::UnknownRoot(0))?,
    };
    let leveled = leveled_embedding(g, root)?;
    leveled.max_up_degree()?;

    let matchings: Vec<SaturatingMatching> = (1..leveled.level_count())
        .map(|i| leftmost_matching(&leveled, i))
        .collect::<Result<_, _>>()?;
    let partition = vertical_path_partition(&leveled, &matchings)?;

    let map: BTreeMap<VertexId, ProductCoords> = g
        .vertices()
        .map(|v| {
            (v, ProductCoords {
                part: partition.part_of[&v],
                layer: leveled.level_of(v).unwrap(),
                copy: 0,
            })
        })
        .collect();
    let embedding = ProductEmbedding {
        mode: ProductMode::Semistrong,
        target_h: partition.quotient.clone(),
        path_length: leveled.level_count(),
        map,
    };

    let checks = run_checks(g, &leveled, &partition, &embedding)?;
    Ok(Decomposition { leveled, partition, matchings, embedding, checks })
}

fn run_checks(
    g: &PlaneGraph,
    leveled: &LeveledEmbedding,
    partition: &HPartition,
    embedding: &ProductEmbedding,
) -> Result<CheckReport, DecomposeError> {
    let underlying = g.underlying();
    let layering = leveled.layering();
    let sets: Vec<BTreeSet<VertexId>> =
        partition.parts.iter().map(|p| p.iter().copied().collect()).collect();

    let report = verify_layered_partition(&underlying, &sets, &layering);
    if report.width != 1 {
        return Err(DecomposeError::PartitionCheck(format!(
            "width {} instead of 1",
            report.width
        )));
    }
    if !report.layers_independent {
        return Err(DecomposeError::PartitionCheck(
            "a layer contains an edge".to_string(),
        ));
    }

    let vertical = partition.parts.iter().all(|p| {
        p.windows(2).all(|w| {
            underlying.has_edge(w[0], w[1])
                && leveled.level_of(w[1]) == leveled.level_of(w[0]).map(|l| l + 1)
        })
    });
    if !vertical {
        return Err(DecomposeError::PartitionCheck(
            "a part is not a vertical path".to_string(),
        ));
    }
    let outer = g.outer_vertices();
    let deepest_outer = partition
        .parts
        .iter()
        .all(|p| outer.contains(p.last().unwrap()));
    if !deepest_outer {
        return Err(DecomposeError::PartitionCheck(
            "a part's deepest vertex is not outer".to_string(),
        ));
    }

    verify_product_embedding(&underlying, embedding)
        .map_err(|e| DecomposeError::EmbeddingCheck(e.to_string()))?;

    let h_outerplanar_embedding = contracted_quotient_outerplanar(g, partition)?;
    if !h_outerplanar_embedding {
        return Err(DecomposeError::QuotientNotOuterplanar);
    }
    let h_outerplanar_abstract =
        match is_outerplanar_abstract(&partition.quotient, DEFAULT_OUTERPLANAR_GATE) {
            Ok(v) => Some(v),
            Err(RecognizeError::SizeGate { .. }) => None,
            Err(_) => None,
        };
    if h_outerplanar_abstract == Some(false) {
        return Err(DecomposeError::OuterplanarityMismatch);
    }

    Ok(CheckReport {
        squaregraph: true,
        width_one: true,
        layers_independent: true,
        vertical_paths: true,
        deepest_outer: true,
        embedding_semistrong: true,
        h_outerplanar_embedding,
        h_outerplanar_abstract,
    })
}

/// Contracts every vertical path inside the rotation system, from its
/// deepest (outer) vertex upward, and reports whether some face of the
/// contracted embedding visits every surviving vertex. Also cross-checks
/// that the contracted graph equals the quotient.
fn contracted_quotient_outerplanar(
    g: &PlaneGraph,
    partition: &HPartition,
) -> Result<bool, DecomposeError> {
    let mut rot: BTreeMap<VertexId, Vec<VertexId>> = g
        .vertices()
        .map(|v| (v, g.rotation(v).to_vec()))
        .collect();

    // Merge `b` into `a` along edge (a, b): splice b's rotation (minus a,
    // starting after a) into a's rotation where b sat, then route b's
    // other neighbours to a and drop edges that became parallel copies.
    let contract = |rot: &mut BTreeMap<VertexId, Vec<VertexId>>,
                        a: VertexId,
                        b: VertexId|
     -> Result<(), DecomposeError> {
        let rot_b = rot.remove(&b).expect("vertex present");
        let pos_a = rot_b
            .iter()
            .position(|&x| x == a)
            .expect("contraction edge present");
        let spliced: Vec<VertexId> = (1..rot_b.len())
            .map(|k| rot_b[(pos_a + k) % rot_b.len()])
            .collect();
        {
            let rot_a = rot.get_mut(&a).unwrap();
            let pos_b = rot_a.iter().position(|&x| x == b).unwrap();
            rot_a.splice(pos_b..=pos_b, spliced.iter().copied());
        }
        for &x in &spliced {
            for y in rot.get_mut(&x).unwrap().iter_mut() {
                if *y == b {
                    *y = a;
                }
            }
        }
        // In a squaregraph every 4-cycle bounds a face, so a vertex that
        // was adjacent to both ends of the contracted edge now has two
        // parallel copies bounding a bigon: the duplicate slots sit side
        // by side in both rotations and either slot may be dropped. Only
        // the merged vertex can carry duplicates.
        loop {
            let mut seen = BTreeSet::new();
            let dup = rot[&a].iter().find(|&&x| !seen.insert(x)).copied();
            let Some(x) = dup else { break };
            let r = rot.get_mut(&a).unwrap();
            let p = r.iter().position(|&y| y == x).unwrap();
            r.remove(p);
            let rx = rot.get_mut(&x).unwrap();
            let p = rx.iter().position(|&y| y == a).unwrap();
            rx.remove(p);
        }
        Ok(())
    };

    for part in &partition.parts {
        // Merge upward: the deepest vertex absorbs the whole path.
        let rep = *part.last().unwrap();
        for k in (0..part.len() - 1).rev() {
            contract(&mut rot, rep, part[k])?;
        }
    }

    // The contracted embedding, relabelled by part id.
    let rep: BTreeMap<VertexId, usize> = partition
        .parts
        .iter()
        .enumerate()
        .map(|(i, p)| (*p.last().unwrap(), i))
        .collect();
    let relabelled: BTreeMap<VertexId, Vec<VertexId>> = rot
        .iter()
        .map(|(v, r)| (rep[v], r.iter().map(|w| rep[w]).collect()))
        .collect();
    let outer_ref = relabelled
        .iter()
        .find_map(|(&v, r)| r.first().map(|&w| (v, w)));
    let contracted = PlaneGraph::new(relabelled, outer_ref).map_err(|e| {
        DecomposeError::PartitionCheck(format!("contracted embedding invalid: {e}"))
    })?;

    if contracted.underlying() != partition.quotient {
        return Err(DecomposeError::PartitionCheck(
            "contracted graph differs from the quotient".to_string(),
        ));
    }

    if contracted.edge_count() == 0 {
        return Ok(true);
    }
    let all: BTreeSet<VertexId> = contracted.vertices().collect();
    let comps = contracted.underlying().components();
    // Outerplanar iff some face walk of each component visits the whole
    // component.
    let faces = contracted.trace_faces();
    Ok(comps.iter().all(|comp| {
        comp.len() == 1
            || faces
                .iter()
                .any(|f| f.vertex_set().is_superset(comp) && comp.is_subset(&all))
    }))
}

/// Decomposes a possibly disconnected squaregraph componentwise and
/// joins the results: part ids are offset, layerings padded to a common
/// length, and the quotient is the disjoint union.
pub fn decompose(
    g: &PlaneGraph,
    root: Option<VertexId>,
) -> Result<Vec<Decomposition>, DecomposeError> {
    let comps = g.underlying().components();
    let mut out = Vec::new();
    for comp in comps {
        let sub = plane_subgraph(g, &comp);
        let comp_root = root.filter(|r| comp.contains(r));
        out.push(decompose_squaregraph(&sub, comp_root)?);
    }
    Ok(out)
}

/// Restriction of a plane graph to one component, keeping rotations.
fn plane_subgraph(g: &PlaneGraph, keep: &BTreeSet<VertexId>) -> PlaneGraph {
    let rotation: BTreeMap<VertexId, Vec<VertexId>> = g
        .vertices()
        .filter(|v| keep.contains(v))
        .map(|v| (v, g.rotation(v).to_vec()))
        .collect();
    let has_edges = rotation.values().any(|r| !r.is_empty());
    let outer_ref = match g.outer_ref() {
        Some((u, v)) if keep.contains(&u) => Some((u, v)),
        _ if has_edges => {
            // Designate this component's boundary per the longest-walk rule.
            g.component_boundaries()
                .into_iter()
                .find(|(comp, _)| comp == keep)
                .and_then(|(_, walk)| walk.first().copied())
        }
        _ => None,
    };
    PlaneGraph::new(rotation, outer_ref).expect("component of a valid plane graph")
}

/// Certificate serialisation: stable field order, ascending arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub parts: Vec<Vec<VertexId>>,
    pub layers: Vec<Vec<VertexId>>,
    pub quotient_edges: Vec<[usize; 2]>,
    pub map: BTreeMap<String, [usize; 2]>,
    pub mode: String,
    pub checks: CheckReport,
}

impl Certificate {
    /// Merges componentwise decompositions into one certificate, with
    /// part ids offset and layers unioned index-by-index.
    pub fn from_decompositions(decs: &[Decomposition]) -> Certificate {
        let mut parts: Vec<Vec<VertexId>> = Vec::new();
        let mut layers: Vec<Vec<VertexId>> = Vec::new();
        let mut quotient_edges: Vec<[usize; 2]> = Vec::new();
        let mut map: BTreeMap<String, [usize; 2]> = BTreeMap::new();
        let mut checks: Option<CheckReport> = None;
        for dec in decs {
            let offset = parts.len();
            for part in &dec.partition.parts {
                let mut p = part.clone();
                p.sort();
                parts.push(p);
            }
            for (i, layer) in dec.layering().layers().iter().enumerate() {
                if layers.len() <= i {
                    layers.push(Vec::new());
                }
                layers[i].extend(layer.iter().copied());
                layers[i].sort();
            }
            for (u, v) in dec.partition.quotient.edges() {
                quotient_edges.push([u + offset, v + offset]);
            }
            for (&v, c) in &dec.embedding.map {
                map.insert(v.to_string(), [c.part + offset, c.layer]);
            }
            checks = Some(match checks {
                None => dec.checks,
                Some(prev) => CheckReport {
                    squaregraph: prev.squaregraph && dec.checks.squaregraph,
                    width_one: prev.width_one && dec.checks.width_one,
                    layers_independent: prev.layers_independent
                        && dec.checks.layers_independent,
                    vertical_paths: prev.vertical_paths && dec.checks.vertical_paths,
                    deepest_outer: prev.deepest_outer && dec.checks.deepest_outer,
                    embedding_semistrong: prev.embedding_semistrong
                        && dec.checks.embedding_semistrong,
                    h_outerplanar_embedding: prev.h_outerplanar_embedding
                        && dec.checks.h_outerplanar_embedding,
                    h_outerplanar_abstract: match (
                        prev.h_outerplanar_abstract,
                        dec.checks.h_outerplanar_abstract,
                    ) {
                        (Some(a), Some(b)) => Some(a && b),
                        _ => None,
                    },
                },
            });
        }
        quotient_edges.sort();
        Certificate {
            parts,
            layers,
            quotient_edges,
            map,
            mode: "semistrong".to_string(),
            checks: checks.unwrap_or(CheckReport {
                squaregraph: true,
                width_one: true,
                layers_independent: true,
                vertical_paths: true,
                deepest_outer: true,
                embedding_semistrong: true,
                h_outerplanar_embedding: true,
                h_outerplanar_abstract: Some(true),
            }),
        }
    }
}

/// Independent re-check of every claim in a certificate against the
/// graph. Returns the name of the first violated check.
pub fn verify_certificate(g: &PlaneGraph, cert: &Certificate) -> Result<(), String> {
    let underlying = g.underlying();
    let fail = |check: &str, detail: String| format!("{check}: {detail}");

    if cert.mode != "semistrong" {
        return Err(fail("mode", format!("unsupported mode `{}`", cert.mode)));
    }

    // parts partition the vertex set
    let mut part_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, part) in cert.parts.iter().enumerate() {
        if part.is_empty() {
            return Err(fail("parts", format!("part {i} is empty")));
        }
        for &v in part {
            if !underlying.has_vertex(v) {
                return Err(fail("parts", format!("unknown vertex {v}")));
            }
            if part_of.insert(v, i).is_some() {
                return Err(fail("parts", format!("vertex {v} in two parts")));
            }
        }
    }
    if part_of.len() != underlying.vertex_count() {
        return Err(fail("parts", "parts do not cover the vertex set".into()));
    }

    // layers form a valid layering
    let layer_sets: Vec<BTreeSet<VertexId>> = cert
        .layers
        .iter()
        .map(|l| l.iter().copied().collect())
        .collect();
    let layering = Layering::new(layer_sets.clone());
    if !crate::layering::is_layering(&underlying, &layering) {
        return Err(fail("layers", "not a valid layering".into()));
    }

    // width 1 and independence
    let part_sets: Vec<BTreeSet<VertexId>> = cert
        .parts
        .iter()
        .map(|p| p.iter().copied().collect())
        .collect();
    let report = verify_layered_partition(&underlying, &part_sets, &layering);
    if !report.thin {
        return Err(fail("width", format!("width {} exceeds 1", report.width)));
    }
    if !report.layers_independent {
        return Err(fail("independence", "a layer contains an edge".into()));
    }

    // parts are vertical paths with outer deepest vertex
    let layer_of: BTreeMap<VertexId, usize> = layer_sets
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&v| (v, i)))
        .collect();
    let outer = g.outer_vertices();
    for part in &part_sets {
        let mut by_layer: Vec<VertexId> = part.iter().copied().collect();
        by_layer.sort_by_key(|v| layer_of[v]);
        for w in by_layer.windows(2) {
            if layer_of[&w[1]] != layer_of[&w[0]] + 1
                || !underlying.has_edge(w[0], w[1])
            {
                return Err(fail(
                    "vertical_paths",
                    format!("part {:?} is not a vertical path", by_layer),
                ));
            }
        }
        let deepest = *by_layer.last().unwrap();
        if !outer.contains(&deepest) {
            return Err(fail(
                "deepest_outer",
                format!("deepest vertex {deepest} is not outer"),
            ));
        }
    }

    // quotient edges match the recomputed quotient
    let q = quotient(&underlying, &part_sets).map_err(|e| fail("quotient", e))?;
    let mut expect: Vec<[usize; 2]> = q.edges().map(|(u, v)| [u, v]).collect();
    expect.sort();
    let mut got = cert.quotient_edges.clone();
    got.sort();
    if expect != got {
        return Err(fail(
            "quotient",
            "quotient_edges differ from the partition's quotient".into(),
        ));
    }

    // map consistency and the semi-strong edge rule
    let mut target_h = Graph::new();
    for i in 0..cert.parts.len() {
        target_h.add_vertex(i);
    }
    for &[a, b] in &cert.quotient_edges {
        target_h.add_edge(a, b);
    }
    let mut map = BTreeMap::new();
    for v in underlying.vertices() {
        let Some(&[p, l]) = cert.map.get(&v.to_string()) else {
            return Err(fail("map", format!("vertex {v} missing from map")));
        };
        if part_of.get(&v) != Some(&p) {
            return Err(fail("map", format!("vertex {v} mapped to wrong part")));
        }
        if layer_of.get(&v) != Some(&l) {
            return Err(fail("map", format!("vertex {v} mapped to wrong layer")));
        }
        map.insert(v, ProductCoords { part: p, layer: l, copy: 0 });
    }
    let embedding = ProductEmbedding {
        mode: ProductMode::Semistrong,
        target_h,
        path_length: cert.layers.len(),
        map,
    };
    verify_product_embedding(&underlying, &embedding)
        .map_err(|e| fail("embedding", e.to_string()))?;

    Ok(())
}
