//! The four graph products and a brute-force subgraph-injection oracle.
//!
//! Product vertices stay explicit ordered pairs so that certificates can
//! reference factor coordinates directly. The injection oracle is
//! deliberately exponential behind a hard size gate: it exists to
//! validate the constructive pipeline, never to replace it.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Default bound on the number of pattern vertices for
/// `subgraph_injection_exists`.
pub const DEFAULT_INJECTION_GATE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    Cartesian,
    Direct,
    Strong,
    Semistrong,
}

impl ProductMode {
    pub const ALL: [ProductMode; 4] = [
        ProductMode::Cartesian,
        ProductMode::Direct,
        ProductMode::Strong,
        ProductMode::Semistrong,
    ];

    /// Edge rule on coordinate pairs. Note the semi-strong product is
    /// asymmetric: the second factor must always step.
    pub fn joins<A: Ord + Copy, B: Ord + Copy>(
        self,
        g: &Graph<A>,
        h: &Graph<B>,
        (v, w): (A, B),
        (v2, w2): (A, B),
    ) -> bool {
        let g_eq = v == v2;
        let g_adj = g.has_edge(v, v2);
        let h_eq = w == w2;
        let h_adj = h.has_edge(w, w2);
        match self {
            ProductMode::Cartesian => (g_eq && h_adj) || (h_eq && g_adj),
            ProductMode::Direct => g_adj && h_adj,
            ProductMode::Strong => {
                (g_eq && h_adj) || (h_eq && g_adj) || (g_adj && h_adj)
            }
            ProductMode::Semistrong => (g_eq || g_adj) && h_adj,
        }
    }
}

impl std::fmt::Display for ProductMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProductMode::Cartesian => "cartesian",
            ProductMode::Direct => "direct",
            ProductMode::Strong => "strong",
            ProductMode::Semistrong => "semistrong",
        };
        f.write_str(s)
    }
}

/// Product graph on V(G) x V(H) under the given mode.
pub fn product<A: Ord + Copy + Debug, B: Ord + Copy + Debug>(
    g: &Graph<A>,
    h: &Graph<B>,
    mode: ProductMode,
) -> Graph<(A, B)> {
    let mut p = Graph::new();
    let gv: Vec<A> = g.vertices().collect();
    let hv: Vec<B> = h.vertices().collect();
    for &v in &gv {
        for &w in &hv {
            p.add_vertex((v, w));
        }
    }
    for (i, &v) in gv.iter().enumerate() {
        for &w in &hv {
            for &v2 in &gv[i..] {
                for &w2 in &hv {
                    let a = (v, w);
                    let b = (v2, w2);
                    if a < b && mode.joins(g, h, a, b) {
                        p.add_edge(a, b);
                    }
                }
            }
        }
    }
    p
}

/// Closed-form |V| and |E| of all four products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCounts {
    pub vertices: usize,
    pub cartesian_edges: usize,
    pub direct_edges: usize,
    pub strong_edges: usize,
    pub semistrong_edges: usize,
}

pub fn edge_counts<A: Ord + Copy, B: Ord + Copy>(
    g: &Graph<A>,
    h: &Graph<B>,
) -> ProductCounts {
    let (vg, eg) = (g.vertex_count(), g.edge_count());
    let (vh, eh) = (h.vertex_count(), h.edge_count());
    ProductCounts {
        vertices: vg * vh,
        cartesian_edges: vg * eh + vh * eg,
        direct_edges: 2 * eg * eh,
        strong_edges: vg * eh + vh * eg + 2 * eg * eh,
        semistrong_edges: vg * eh + 2 * eg * eh,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProductError {
    #[error("size gate exceeded: pattern has {actual} vertices, bound {bound}")]
    SizeGate { actual: usize, bound: usize },
}

/// Searches for an injective map of `pattern` into `host` preserving all
/// pattern edges (host edges may be extra). Pattern vertices are tried in
/// descending degree order with adjacency pruning; the search is
/// exhaustive, so `None` is a proof of absence.
pub fn subgraph_injection_exists<A, B>(
    pattern: &Graph<A>,
    host: &Graph<B>,
    gate: usize,
) -> Result<Option<BTreeMap<A, B>>, ProductError>
where
    A: Ord + Copy + Debug,
    B: Ord + Copy + Debug,
{
    if pattern.vertex_count() > gate {
        return Err(ProductError::SizeGate { actual: pattern.vertex_count(), bound: gate });
    }
    if pattern.vertex_count() > host.vertex_count() {
        return Ok(None);
    }
    let mut order: Vec<A> = pattern.vertices().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(pattern.degree(v)));
    let hosts: Vec<B> = host.vertices().collect();

    fn rec<A: Ord + Copy, B: Ord + Copy>(
        order: &[A],
        pattern: &Graph<A>,
        host: &Graph<B>,
        hosts: &[B],
        map: &mut BTreeMap<A, B>,
        used: &mut Vec<B>,
    ) -> bool {
        let Some(&v) = order.get(map.len()) else { return true };
        for &cand in hosts {
            if used.contains(&cand) {
                continue;
            }
            if host.degree(cand) < pattern.degree(v) {
                continue;
            }
            let ok = pattern
                .neighbours(v)
                .filter_map(|u| map.get(&u))
                .all(|&img| host.has_edge(cand, img));
            if ok {
                map.insert(v, cand);
                used.push(cand);
                if rec(order, pattern, host, hosts, map, used) {
                    return true;
                }
                used.pop();
                map.remove(&v);
            }
        }
        false
    }

    let mut map = BTreeMap::new();
    if rec(&order, pattern, host, &hosts, &mut map, &mut Vec::new()) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn semistrong_of_two_edges_is_a_four_cycle() {
        // Enumerating all pairs under the definition: same-v edges
        // (0,0)-(0,1) and (1,0)-(1,1), direct edges (0,0)-(1,1) and
        // (0,1)-(1,0); together one 4-cycle.
        let k2 = Graph::complete(2);
        let p = product(&k2, &k2, ProductMode::Semistrong);
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.edge_count(), 4);
        assert!(p.vertices().all(|v| p.degree(v) == 2));
        assert!(crate::recognize::red_blue_colouring(&p).is_ok());
    }

    #[test]
    fn direct_of_two_edges_is_a_perfect_matching() {
        let k2 = Graph::complete(2);
        let p = product(&k2, &k2, ProductMode::Direct);
        assert_eq!(p.edge_count(), 2);
        assert!(p.vertices().all(|v| p.degree(v) == 1));
    }

    #[test]
    fn counts_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(edge_counts(&k2, &k2).semistrong_edges, 4);
        assert_eq!(edge_counts(&Graph::path(3), &Graph::path(2)).cartesian_edges, 7);
        let mut edgeless = Graph::new();
        for v in 0..3 {
            edgeless.add_vertex(v);
        }
        let c = edge_counts(&edgeless, &Graph::path(4));
        assert_eq!(c.direct_edges, 0);
        assert_eq!(c.semistrong_edges, 3 * 3);
    }

    #[test]
    fn injection_examples() {
        let p3 = Graph::path(3);
        let c4 = Graph::cycle(4);
        assert!(subgraph_injection_exists(&p3, &c4, 10).unwrap().is_some());

        let k3 = Graph::complete(3);
        let bip = Graph::complete_bipartite(3, 3);
        assert!(subgraph_injection_exists(&k3, &bip, 10).unwrap().is_none());

        assert!(matches!(
            subgraph_injection_exists(&Graph::path(11), &c4, 10),
            Err(ProductError::SizeGate { actual: 11, bound: 10 })
        ));
    }

    #[test]
    fn injection_preserves_edges() {
        let pattern = Graph::cycle(4);
        let host = product(&Graph::complete(2), &Graph::path(3), ProductMode::Strong);
        let map = subgraph_injection_exists(&pattern, &host, 10).unwrap().unwrap();
        assert_eq!(map.len(), 4);
        for (u, v) in pattern.edges() {
            assert!(host.has_edge(map[&u], map[&v]));
        }
    }

    fn small_graph(n: usize, bits: u32) -> Graph<usize> {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if bits >> (k % 32) & 1 == 1 {
                    g.add_edge(u, v);
                }
                k += 1;
            }
        }
        g
    }

    proptest! {
        #[test]
        fn product_chain_and_union(na in 1usize..5, nb in 1usize..5, ba: u32, bb: u32) {
            let g = small_graph(na, ba);
            let h = small_graph(nb, bb);
            let direct = product(&g, &h, ProductMode::Direct);
            let semi = product(&g, &h, ProductMode::Semistrong);
            let strong = product(&g, &h, ProductMode::Strong);
            let cart = product(&g, &h, ProductMode::Cartesian);

            for (u, v) in direct.edges() {
                prop_assert!(semi.has_edge(u, v));
            }
            for (u, v) in semi.edges() {
                prop_assert!(strong.has_edge(u, v));
            }
            // strong = cartesian union direct, as edge sets.
            for (u, v) in strong.edges() {
                prop_assert!(cart.has_edge(u, v) || direct.has_edge(u, v));
            }
            for (u, v) in cart.edges().chain(direct.edges()) {
                prop_assert!(strong.has_edge(u, v));
            }

            let counts = edge_counts(&g, &h);
            prop_assert_eq!(counts.cartesian_edges, cart.edge_count());
            prop_assert_eq!(counts.direct_edges, direct.edge_count());
            prop_assert_eq!(counts.strong_edges, strong.edge_count());
            prop_assert_eq!(counts.semistrong_edges, semi.edge_count());
        }

        #[test]
        fn bipartite_times_path_stays_bipartite(n in 2usize..5, b: u32, len in 1usize..5) {
            let g = small_graph(n, b);
            prop_assume!(crate::recognize::red_blue_colouring(&g).is_ok());
            let p = Graph::path(len);
            for mode in [ProductMode::Direct, ProductMode::Semistrong] {
                let prod = product(&g, &p, mode);
                prop_assert!(crate::recognize::red_blue_colouring(&prod).is_ok());
            }
        }
    }
}
