//! Deterministic corpus generators: grids, trees, and seeded random
//! squaregraphs grown by gluing 4-cycles onto the outer boundary.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::planegraph::{Dart, PlaneGraph, VertexId};

/// The rows x cols grid graph with its standard embedding. Vertex ids are
/// row-major; rotations list [left, below, right, above].
pub fn grid(rows: usize, cols: usize) -> PlaneGraph {
    assert!(rows >= 1 && cols >= 1);
    let id = |r: usize, c: usize| r * cols + c;
    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for r in 0..rows {
        for c in 0..cols {
            let mut rot = Vec::new();
            if c > 0 {
                rot.push(id(r, c - 1));
            }
            if r + 1 < rows {
                rot.push(id(r + 1, c));
            }
            if c + 1 < cols {
                rot.push(id(r, c + 1));
            }
            if r > 0 {
                rot.push(id(r - 1, c));
            }
            rotation.insert(id(r, c), rot);
        }
    }
    let outer_ref = if cols >= 2 {
        Some((id(0, 0), id(0, 1)))
    } else if rows >= 2 {
        Some((id(0, 0), id(1, 0)))
    } else {
        None
    };
    PlaneGraph::new(rotation, outer_ref).expect("grid embedding is valid")
}

/// Embeds a tree as a plane graph. Every rotation order of a tree is
/// planar, so neighbours are listed ascending; the outer reference is the
/// smallest directed edge.
pub fn tree_plane(tree: &Graph<usize>) -> PlaneGraph {
    let rotation: BTreeMap<VertexId, Vec<VertexId>> = tree
        .vertices()
        .map(|v| (v, tree.neighbours(v).collect()))
        .collect();
    let outer_ref = tree.edges().next();
    PlaneGraph::new(rotation, outer_ref).expect("tree embedding is valid")
}

fn prufer_decode(seq: &[usize], n: usize) -> Graph<usize> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    let mut used = vec![false; n];
    let mut seq = seq.to_vec();
    for i in 0..seq.len() {
        let leaf = (0..n).find(|&v| degree[v] == 1 && !used[v]).unwrap();
        used[leaf] = true;
        g.add_edge(leaf, seq[i]);
        degree[seq[i]] -= 1;
        degree[leaf] -= 1;
        let _ = &mut seq;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1 && !used[v]).collect();
    g.add_edge(rest[0], rest[1]);
    g
}

/// Uniformly random labelled tree on `n` vertices from a bare seed.
pub fn random_tree_seeded(n: usize, seed: u64) -> Graph<usize> {
    random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniformly random labelled tree on `n` vertices.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph<usize> {
    match n {
        0 => Graph::new(),
        1 => {
            let mut g = Graph::new();
            g.add_vertex(0);
            g
        }
        2 => Graph::from_edges([(0usize, 1)]),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(&seq, n)
        }
    }
}

/// Canonical string of a rooted tree (sorted subtree encodings).
fn rooted_encoding(g: &Graph<usize>, root: usize, parent: Option<usize>) -> String {
    let mut parts: Vec<String> = g
        .neighbours(root)
        .filter(|&w| Some(w) != parent)
        .map(|w| rooted_encoding(g, w, Some(root)))
        .collect();
    parts.sort();
    format!("({})", parts.join(""))
}

fn tree_canonical(g: &Graph<usize>) -> String {
    // Root at a centre; with two centres take the smaller encoding.
    let n = g.vertex_count();
    if n == 0 {
        return String::new();
    }
    let mut degree: BTreeMap<usize, usize> =
        g.vertices().map(|v| (v, g.degree(v))).collect();
    let mut remaining: BTreeSet<usize> = g.vertices().collect();
    let mut leaves: Vec<usize> = remaining
        .iter()
        .copied()
        .filter(|&v| degree[&v] <= 1)
        .collect();
    while remaining.len() > 2 {
        let mut next = Vec::new();
        for &v in &leaves {
            remaining.remove(&v);
            for w in g.neighbours(v) {
                if remaining.contains(&w) {
                    let d = degree.get_mut(&w).unwrap();
                    *d -= 1;
                    if *d == 1 {
                        next.push(w);
                    }
                }
            }
        }
        leaves = next;
    }
    remaining
        .iter()
        .map(|&c| rooted_encoding(g, c, None))
        .min()
        .unwrap()
}

/// All trees on `n` vertices up to isomorphism, by scanning labelled
/// trees and deduplicating on the canonical encoding. Intended for small
/// `n` only.
pub fn trees_up_to_isomorphism(n: usize) -> Vec<Graph<usize>> {
    match n {
        0 => return vec![],
        1 => return vec![random_tree(1, &mut ChaCha8Rng::seed_from_u64(0))],
        2 => return vec![Graph::from_edges([(0usize, 1)])],
        _ => {}
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        let tree = prufer_decode(&seq, n);
        if seen.insert(tree_canonical(&tree)) {
            out.push(tree);
        }
        // Odometer over the Prufer alphabet.
        let mut i = 0;
        loop {
            if i == seq.len() {
                return out;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Incrementally grown squaregraph: rotations plus the current outer
/// boundary walk, kept in trace order.
struct Gluing {
    rotation: BTreeMap<VertexId, Vec<VertexId>>,
    boundary: Vec<Dart>,
    next_id: VertexId,
}

impl Gluing {
    fn initial_square() -> Gluing {
        Gluing {
            rotation: BTreeMap::from([
                (0, vec![1, 3]),
                (1, vec![2, 0]),
                (2, vec![3, 1]),
                (3, vec![0, 2]),
            ]),
            boundary: vec![(0, 1), (1, 2), (2, 3), (3, 0)],
            next_id: 4,
        }
    }

    fn insert_before(&mut self, v: VertexId, anchor: VertexId, new: VertexId) {
        let rot = self.rotation.get_mut(&v).unwrap();
        let pos = rot.iter().position(|&x| x == anchor).unwrap();
        rot.insert(pos, new);
    }

    fn insert_after(&mut self, v: VertexId, anchor: VertexId, new: VertexId) {
        let rot = self.rotation.get_mut(&v).unwrap();
        let pos = rot.iter().position(|&x| x == anchor).unwrap();
        rot.insert(pos + 1, new);
    }

    /// Glues a new square outside boundary edge `i`, adding two vertices.
    fn glue_one_edge(&mut self, i: usize) {
        let len = self.boundary.len();
        let (u, v) = self.boundary[i];
        let (t, _) = self.boundary[(i + len - 1) % len];
        let (_, s) = self.boundary[(i + 1) % len];
        let x = self.next_id;
        let y = self.next_id + 1;
        self.next_id += 2;
        self.insert_before(u, t, x);
        self.insert_after(v, s, y);
        self.rotation.insert(x, vec![u, y]);
        self.rotation.insert(y, vec![v, x]);
        self.boundary.splice(i..=i, [(u, x), (x, y), (y, v)]);
    }

    /// Glues a new square over the two consecutive boundary edges at `i`,
    /// adding one vertex. Fails when the walk corner is degenerate or the
    /// enclosed vertex would end up inner with degree below 4.
    fn glue_two_edges(&mut self, i: usize) -> bool {
        let len = self.boundary.len();
        let (u, v) = self.boundary[i];
        let (v2, w) = self.boundary[(i + 1) % len];
        debug_assert_eq!(v, v2);
        if u == w {
            return false;
        }
        let visits = self.boundary.iter().filter(|&&(a, _)| a == v).count();
        if visits == 1 && self.rotation[&v].len() < 4 {
            return false; // closing v would create an inner vertex of low degree
        }
        let (t, _) = self.boundary[(i + len - 1) % len];
        let (_, s) = self.boundary[(i + 2) % len];
        let z = self.next_id;
        self.next_id += 1;
        self.insert_before(u, t, z);
        self.insert_after(w, s, z);
        self.rotation.insert(z, vec![u, w]);
        if (i + 1) % len < i {
            // The pair wraps; remove the first edge of the walk too.
            self.boundary.splice(i..len, [(u, z)]);
            self.boundary[0] = (z, w);
        } else {
            self.boundary.splice(i..=i + 1, [(u, z), (z, w)]);
        }
        true
    }

    fn finish(self) -> PlaneGraph {
        let outer_ref = Some(self.boundary[0]);
        PlaneGraph::new(self.rotation, outer_ref).expect("glued embedding is valid")
    }
}

/// Seeded random squaregraph with at least `target_vertices` vertices:
/// starting from one 4-cycle, repeatedly glue a new 4-cycle along one or
/// two consecutive boundary edges, rejecting gluings that would close an
/// inner vertex of degree below 4.
pub fn glued_squaregraph(seed: u64, target_vertices: usize) -> PlaneGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = Gluing::initial_square();
    while state.rotation.len() < target_vertices {
        let len = state.boundary.len();
        let mut glued = false;
        if rng.gen_bool(0.5) {
            for _ in 0..20 {
                let i = rng.gen_range(0..len);
                if state.glue_two_edges(i) {
                    glued = true;
                    break;
                }
            }
        }
        if !glued {
            let i = rng.gen_range(0..len);
            state.glue_one_edge(i);
        }
    }
    state.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recognize::is_squaregraph;

    #[test]
    fn grids_are_squaregraphs() {
        for (m, n) in [(1, 1), (1, 5), (2, 2), (3, 3), (4, 6)] {
            let g = grid(m, n);
            assert_eq!(g.vertex_count(), m * n);
            assert!(is_squaregraph(&g).is_yes(), "{m}x{n}");
        }
        assert_eq!(grid(3, 3).inner_vertices().len(), 1);
        assert_eq!(grid(4, 4).inner_vertices().len(), 4);
    }

    #[test]
    fn tree_enumeration_counts() {
        // Unlabelled tree counts for n = 1..=8.
        let expect = [1, 1, 1, 2, 3, 6, 11, 23];
        for (i, &want) in expect.iter().enumerate() {
            assert_eq!(trees_up_to_isomorphism(i + 1).len(), want, "n={}", i + 1);
        }
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=12 {
            let t = random_tree(n, &mut rng);
            assert_eq!(t.vertex_count(), n);
            assert_eq!(t.edge_count(), n.saturating_sub(1));
            assert!(t.is_connected());
            let plane = tree_plane(&t);
            assert!(is_squaregraph(&plane).is_yes());
        }
    }

    #[test]
    fn glued_generator_produces_squaregraphs() {
        for seed in 0..30u64 {
            let g = glued_squaregraph(seed, 8 + (seed as usize % 40));
            assert!(g.vertex_count() >= 8);
            assert!(is_squaregraph(&g).is_yes(), "seed {seed}");
            assert!(g.underlying().is_connected());
        }
    }

    #[test]
    fn glued_generator_is_deterministic() {
        let a = glued_squaregraph(42, 30);
        let b = glued_squaregraph(42, 30);
        assert_eq!(a, b);
    }

    #[test]
    fn glued_boundary_matches_trace() {
        let mut state = Gluing::initial_square();
        state.glue_one_edge(1);
        state.glue_two_edges(0);
        let boundary = state.boundary.clone();
        let g = state.finish();
        let walk = g.face_walk_of(boundary[0]);
        assert_eq!(walk.len(), boundary.len());
        assert!(boundary.iter().all(|d| walk.contains(d)));
    }

    #[test]
    fn some_seeds_produce_inner_vertices() {
        let found = (0..60u64)
            .any(|seed| !glued_squaregraph(seed, 40).inner_vertices().is_empty());
        assert!(found, "gluing never closed an inner vertex");
    }
}
