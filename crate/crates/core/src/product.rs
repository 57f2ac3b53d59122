//! Signed products `G ⊗ T` and regularization.
//!
//! The product has vertex set `V(G) × V(T)`. For a positive edge
//! `{t_1, ..., t_h}` of `T`, every ordering of every edge of `G` yields a
//! product edge `{(u_1, t_1), ..., (u_h, t_h)}`. For a negative edge, every
//! tuple `(u_1, ..., u_h)` that is not an edge of `G`, repeats included,
//! yields one.

use std::fmt::Write as _;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, KPartiteHypergraph, PlainHypergraph, VertexRef};
use crate::template::{build_template, Sign, SignedHypergraph};

/// Default cap on the number of product edges.
pub const DEFAULT_PRODUCT_EDGE_CAP: u128 = 100_000_000;

/// Bijection between `V(G) × V(T)` and the product vertices.
///
/// `(u, t)` lives in the part of `t` at index `u · |T_p| + t.index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductVertexMap {
    g_vertices: usize,
    template_parts: Vec<usize>,
}

impl ProductVertexMap {
    pub fn new(g_vertices: usize, template_parts: Vec<usize>) -> Self {
        ProductVertexMap {
            g_vertices,
            template_parts,
        }
    }

    pub fn forward(&self, u: usize, t: VertexRef) -> VertexRef {
        debug_assert!(u < self.g_vertices);
        VertexRef::new(t.part, u * self.template_parts[t.part] + t.index)
    }

    pub fn backward(&self, v: VertexRef) -> (usize, VertexRef) {
        let size = self.template_parts[v.part];
        (v.index / size, VertexRef::new(v.part, v.index % size))
    }

    pub fn g_vertex_count(&self) -> usize {
        self.g_vertices
    }

    pub fn product_part_sizes(&self) -> Vec<usize> {
        self.template_parts
            .iter()
            .map(|s| s * self.g_vertices)
            .collect()
    }

    /// Sidecar text: one `v <p:i> = <u> x <p:i>` line per product vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, &size) in self.template_parts.iter().enumerate() {
            for u in 0..self.g_vertices {
                for i in 0..size {
                    let t = VertexRef::new(p, i);
                    writeln!(out, "v {} = {u} x {t}", self.forward(u, t)).unwrap();
                }
            }
        }
        out
    }
}

/// Predicted `|E(G ⊗ T)| = |E+|·h!·|E(G)| + |E-|·(m^h − h!·|E(G)|)`.
pub fn predicted_edge_count(g: &PlainHypergraph, t: &SignedHypergraph) -> u128 {
    let h = t.h() as u32;
    let ordered_edges = (1..=h as u128).product::<u128>() * g.edges().len() as u128;
    let non_edges = (g.vertex_count() as u128).saturating_pow(h) - ordered_edges;
    let (pos, neg) = t
        .signed_edges()
        .fold((0u128, 0u128), |(p, n), (_, s)| match s {
            Sign::Positive => (p + 1, n),
            Sign::Negative => (p, n + 1),
        });
    pos.saturating_mul(ordered_edges)
        .saturating_add(neg.saturating_mul(non_edges))
}

pub fn signed_product(
    g: &PlainHypergraph,
    t: &SignedHypergraph,
) -> Result<(KPartiteHypergraph, ProductVertexMap)> {
    signed_product_with_cap(g, t, DEFAULT_PRODUCT_EDGE_CAP)
}

pub fn signed_product_with_cap(
    g: &PlainHypergraph,
    t: &SignedHypergraph,
    cap: u128,
) -> Result<(KPartiteHypergraph, ProductVertexMap)> {
    let h = t.h();
    if g.h() != h {
        return Err(Error::precondition(format!(
            "uniformity mismatch: G is {}-uniform, the template is {h}-uniform",
            g.h()
        )));
    }
    let required = predicted_edge_count(g, t);
    if required > cap {
        return Err(Error::Budget {
            what: "product edges",
            required,
            budget: cap,
        });
    }
    let map = ProductVertexMap::new(g.vertex_count(), t.base().part_sizes().to_vec());
    let ordered_g_edges: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .flat_map(|e| e.iter().copied().permutations(h))
        .collect();
    let non_edges: Vec<Vec<usize>> = (0..h)
        .map(|_| 0..g.vertex_count())
        .multi_cartesian_product()
        .filter(|tuple| !g.is_edge(tuple))
        .collect();

    let t_edges: Vec<(&Edge, Sign)> = t.signed_edges().collect();
    let edges: Vec<Edge> = t_edges
        .par_iter()
        .flat_map_iter(|&(te, sign)| {
            let tuples = match sign {
                Sign::Positive => &ordered_g_edges,
                Sign::Negative => &non_edges,
            };
            let map = &map;
            tuples.iter().map(move |us| {
                Edge(
                    us.iter()
                        .zip(te.vertices())
                        .map(|(&u, &tv)| map.forward(u, tv))
                        .collect(),
                )
            })
        })
        .collect();
    let gp = KPartiteHypergraph::from_canonical(t.k(), h, map.product_part_sizes(), edges);
    Ok((gp, map))
}

/// Signed product of `G` with `T(h, k)`.
pub fn regularize(
    g: &PlainHypergraph,
    h: usize,
    k: usize,
) -> Result<(KPartiteHypergraph, ProductVertexMap)> {
    if h < 2 || h >= k {
        return Err(Error::precondition(format!(
            "need 2 <= h < k, got h = {h}, k = {k}"
        )));
    }
    let t = build_template(h, k)?;
    signed_product(g, &t)
}

/// Splits a k-clique of the product into its `G` and `T` components.
pub fn project_clique(
    gp: &KPartiteHypergraph,
    map: &ProductVertexMap,
    clique: &[VertexRef],
) -> Result<(Vec<usize>, Vec<VertexRef>)> {
    if !gp.is_k_clique(clique) {
        return Err(Error::NotAClique(clique.iter().join(" ")));
    }
    Ok(clique.iter().map(|&v| map.backward(v)).unzip())
}
