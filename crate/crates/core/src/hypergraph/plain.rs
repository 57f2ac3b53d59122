use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::KPartiteHypergraph;
use crate::error::{Error, Result};

/// An h-uniform hypergraph on the flat vertex set `0..vertex_count`, with no
/// partition. Edges are sorted sets of `h` distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainHypergraph {
    vertex_count: usize,
    h: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl PlainHypergraph {
    pub fn new(
        vertex_count: usize,
        h: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        if h < 2 {
            return Err(Error::precondition(format!(
                "uniformity h = {h} must be at least 2"
            )));
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            e.sort_unstable();
            if e.len() != h {
                return Err(Error::precondition(format!(
                    "edge {e:?} does not have {h} vertices"
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::precondition(format!("edge {e:?} repeats a vertex")));
            }
            if e.iter().any(|&v| v >= vertex_count) {
                return Err(Error::precondition(format!(
                    "edge {e:?} leaves the vertex range"
                )));
            }
            if !set.insert(e.clone()) {
                return Err(Error::precondition(format!("duplicate edge {e:?}")));
            }
        }
        Ok(PlainHypergraph {
            vertex_count,
            h,
            edges: set,
        })
    }

    /// Complete h-uniform hypergraph (for `h = 2`, the clique `K_n`).
    pub fn complete(vertex_count: usize, h: usize) -> Result<Self> {
        Self::new(vertex_count, h, (0..vertex_count).combinations(h))
    }

    /// Each h-subset becomes an edge independently with probability `p`,
    /// one `gen_bool` per subset in lexicographic order.
    pub fn random(vertex_count: usize, h: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::precondition(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(
            vertex_count,
            h,
            (0..vertex_count)
                .combinations(h)
                .filter(|_| rng.gen_bool(p)),
        )
    }

    /// Forgets the partition; vertices are numbered by
    /// [`KPartiteHypergraph::flat_index`].
    pub fn from_partite(g: &KPartiteHypergraph) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|e| {
                e.vertices()
                    .iter()
                    .map(|&v| g.flat_index(v))
                    .collect::<Vec<_>>()
            })
            .collect();
        PlainHypergraph {
            vertex_count: g.vertex_count(),
            h: g.h(),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    /// True iff the vertices (in any order) are pairwise distinct and form
    /// an edge. Tuples with repeats are non-edges.
    pub fn is_edge(&self, tuple: &[usize]) -> bool {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        self.edges.contains(&sorted)
    }

    /// Whether `vertices` are pairwise distinct with every h-subset an edge.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().all_unique()
            && vertices
                .iter()
                .copied()
                .combinations(self.h)
                .all(|t| self.is_edge(&t))
    }

    /// Number of `k`-subsets of the vertex set that are cliques.
    pub fn count_cliques(&self, k: usize) -> u64 {
        (0..self.vertex_count)
            .combinations(k)
            .filter(|s| self.is_clique(s))
            .count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_counts() {
        let k3 = PlainHypergraph::complete(3, 2).unwrap();
        assert_eq!(k3.count_cliques(3), 1);
        let k5 = PlainHypergraph::complete(5, 2).unwrap();
        assert_eq!(k5.count_cliques(3), 10);
        assert!(!k3.is_edge(&[1, 1]));
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(PlainHypergraph::new(3, 2, vec![vec![0, 0]]).is_err());
        assert!(PlainHypergraph::new(3, 2, vec![vec![0, 3]]).is_err());
        assert!(PlainHypergraph::new(3, 2, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(PlainHypergraph::new(3, 3, vec![vec![0, 1]]).is_err());
    }
}
