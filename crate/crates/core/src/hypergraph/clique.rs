use std::ops::ControlFlow;

use itertools::Itertools;
use rayon::prelude::*;

use super::{KPartiteHypergraph, VertexRef};

/// Backtracking search over transversals, one vertex per part in part
/// order. A vertex added at depth `d >= h-1` must complete every
/// `(h-1)`-subset of the already chosen vertices to an edge.
struct CliqueSearch<'g> {
    graph: &'g KPartiteHypergraph,
    /// For each depth, the `(h-1)`-subsets of earlier positions to check,
    /// minus the first one which seeds the candidate list.
    checks: Vec<Vec<Vec<usize>>>,
}

impl<'g> CliqueSearch<'g> {
    fn new(graph: &'g KPartiteHypergraph) -> Self {
        let h = graph.h;
        let checks = (0..graph.k)
            .map(|d| {
                if d + 1 < h {
                    Vec::new()
                } else {
                    (0..d).combinations(h - 1).skip(1).collect()
                }
            })
            .collect();
        CliqueSearch { graph, checks }
    }

    fn extend<F>(
        &self,
        chosen: &mut Vec<VertexRef>,
        key: &mut Vec<VertexRef>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[VertexRef]) -> ControlFlow<()>,
    {
        let depth = chosen.len();
        if depth == self.graph.k {
            return visit(chosen);
        }
        let h = self.graph.h;
        if depth + 1 < h {
            for v in self.graph.vertices_of_part(depth) {
                chosen.push(v);
                let flow = self.extend(chosen, key, visit);
                chosen.pop();
                flow?;
            }
            return ControlFlow::Continue(());
        }
        let candidates = self.graph.completions_in_part(&chosen[..h - 1], depth);
        'candidates: for &v in candidates {
            for subset in &self.checks[depth] {
                key.clear();
                key.extend(subset.iter().map(|&i| chosen[i]));
                key.push(v);
                if !self.graph.contains_edge(key) {
                    continue 'candidates;
                }
            }
            chosen.push(v);
            let flow = self.extend(chosen, key, visit);
            chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

impl KPartiteHypergraph {
    /// Visits every k-clique (one vertex per part, every h-subset an edge)
    /// in lexicographic order until `visit` breaks.
    pub fn for_each_k_clique<F>(&self, mut visit: F)
    where
        F: FnMut(&[VertexRef]) -> ControlFlow<()>,
    {
        let search = CliqueSearch::new(self);
        let mut chosen = Vec::with_capacity(self.k);
        let mut key = Vec::with_capacity(self.h);
        let _ = search.extend(&mut chosen, &mut key, &mut visit);
    }

    /// The lexicographically first k-clique, if any.
    pub fn find_k_clique(&self) -> Option<Vec<VertexRef>> {
        let mut found = None;
        self.for_each_k_clique(|c| {
            found = Some(c.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    /// Exact number of k-cliques. Parallel over the vertices of part 0.
    pub fn count_k_cliques(&self) -> u64 {
        let search = CliqueSearch::new(self);
        (0..self.part_sizes[0])
            .into_par_iter()
            .map(|i| {
                let mut chosen = vec![VertexRef::new(0, i)];
                let mut key = Vec::with_capacity(self.h);
                let mut count = 0u64;
                let _ = search.extend(&mut chosen, &mut key, &mut |_| {
                    count += 1;
                    ControlFlow::Continue(())
                });
                count
            })
            .sum()
    }

    /// Whether `vertices` (one per part, in part order) is a k-clique.
    pub fn is_k_clique(&self, vertices: &[VertexRef]) -> bool {
        vertices.len() == self.k
            && vertices
                .iter()
                .enumerate()
                .all(|(p, v)| v.part == p && v.index < self.part_sizes[p])
            && vertices
                .iter()
                .copied()
                .combinations(self.h)
                .all(|t| self.contains_edge(&t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_count(g: &KPartiteHypergraph) -> u64 {
        g.part_sizes()
            .iter()
            .enumerate()
            .map(|(p, &n)| (0..n).map(move |i| VertexRef::new(p, i)))
            .multi_cartesian_product()
            .filter(|t| g.is_k_clique(t))
            .count() as u64
    }

    #[test]
    fn complete_tripartite_graph() {
        let g = KPartiteHypergraph::complete(3, 2, vec![2, 2, 2]).unwrap();
        assert_eq!(g.count_k_cliques(), 8);
        assert_eq!(
            g.find_k_clique(),
            Some(vec![
                VertexRef::new(0, 0),
                VertexRef::new(1, 0),
                VertexRef::new(2, 0)
            ])
        );
    }

    #[test]
    fn no_edges_no_clique() {
        let g = KPartiteHypergraph::empty(4, 3, vec![3; 4]).unwrap();
        assert_eq!(g.find_k_clique(), None);
        assert_eq!(g.count_k_cliques(), 0);
    }

    #[test]
    fn matches_exhaustive_scan_on_random_inputs() {
        for seed in 0..12 {
            for &(k, h, n, p) in &[
                (3, 2, 4, 0.5),
                (4, 3, 3, 0.7),
                (5, 3, 2, 0.8),
                (4, 2, 3, 0.6),
            ] {
                let g = crate::hypergraph::random_hypergraph(k, h, n, p, seed).unwrap();
                let count = g.count_k_cliques();
                assert_eq!(count, brute_force_count(&g));
                assert_eq!(g.find_k_clique().is_some(), count > 0);
                if let Some(c) = g.find_k_clique() {
                    assert!(g.is_k_clique(&c));
                }
            }
        }
    }
}
