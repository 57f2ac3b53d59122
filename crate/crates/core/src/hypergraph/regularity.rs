use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use super::{cross_tuples, KPartiteHypergraph, VertexRef};
use crate::error::{Error, Result};

/// A cross-part tuple whose incidence count differs from the reference
/// tuple (the first tuple in canonical order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityWitness {
    pub tuple: Vec<VertexRef>,
    pub count: usize,
    pub reference: Vec<VertexRef>,
    pub reference_count: usize,
}

/// Outcome of an `(s, λ)`-regularity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub s: usize,
    /// Common incidence count, present iff the hypergraph is regular.
    pub lambda: Option<usize>,
    pub witness: Option<RegularityWitness>,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.lambda.is_some()
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lambda, &self.witness) {
            (Some(l), _) => write!(f, "({}, {l})-regular", self.s),
            (None, Some(w)) => write!(
                f,
                "not {}-regular: {} lies in {} edges but {} lies in {}",
                self.s,
                w.tuple.iter().join(" "),
                w.count,
                w.reference.iter().join(" "),
                w.reference_count
            ),
            (None, None) => write!(f, "not {}-regular", self.s),
        }
    }
}

impl KPartiteHypergraph {
    /// Checks that every cross-part `s`-tuple lies in the same number of
    /// edges. Tuples touching no edge count with 0.
    pub fn regularity(&self, s: usize) -> Result<RegularityReport> {
        if s == 0 || s >= self.h {
            return Err(Error::precondition(format!(
                "regularity order s = {s} must satisfy 1 <= s < h = {}",
                self.h
            )));
        }
        let counts = self.incidence_counts(s);
        let mut tuples = cross_tuples(&self.part_sizes, s);
        let reference = tuples.next().expect("k > s so at least one tuple exists");
        let reference_count = counts.get(&reference).copied().unwrap_or(0);
        for tuple in tuples {
            let count = counts.get(&tuple).copied().unwrap_or(0);
            if count != reference_count {
                return Ok(RegularityReport {
                    s,
                    lambda: None,
                    witness: Some(RegularityWitness {
                        tuple,
                        count,
                        reference,
                        reference_count,
                    }),
                });
            }
        }
        Ok(RegularityReport {
            s,
            lambda: Some(reference_count),
            witness: None,
        })
    }

    /// Number of edges containing each cross-part `s`-tuple that lies in at
    /// least one edge.
    pub fn incidence_counts(&self, s: usize) -> HashMap<Vec<VertexRef>, usize> {
        let mut counts: HashMap<Vec<VertexRef>, usize> = HashMap::new();
        for edge in &self.edges {
            for sub in edge.vertices().iter().copied().combinations(s) {
                *counts.entry(sub).or_default() += 1;
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::super::VertexRef as V;
    use super::*;

    #[test]
    fn empty_hypergraph_is_zero_regular() {
        let g = KPartiteHypergraph::empty(4, 3, vec![2; 4]).unwrap();
        for s in 1..3 {
            assert_eq!(g.regularity(s).unwrap().lambda, Some(0));
        }
    }

    #[test]
    fn s_out_of_range() {
        let g = KPartiteHypergraph::empty(4, 3, vec![2; 4]).unwrap();
        assert!(g.regularity(0).is_err());
        assert!(g.regularity(3).is_err());
    }

    #[test]
    fn single_edge_is_irregular_with_zero_witness() {
        let g =
            KPartiteHypergraph::new(3, 2, vec![2, 2, 2], vec![vec![V::new(0, 1), V::new(1, 0)]])
                .unwrap();
        let report = g.regularity(1).unwrap();
        assert!(!report.is_regular());
        let w = report.witness.unwrap();
        assert_eq!(w.reference, vec![V::new(0, 0)]);
        assert_eq!(w.reference_count, 0);
        assert_eq!(w.tuple, vec![V::new(0, 1)]);
        assert_eq!(w.count, 1);
    }

    #[test]
    fn complete_hypergraph_counts() {
        // each pair across parts in a complete 4-partite 3-uniform
        // hypergraph with parts of size 3 lies in 2 * 3 edges
        let g = KPartiteHypergraph::complete(4, 3, vec![3; 4]).unwrap();
        assert_eq!(g.regularity(2).unwrap().lambda, Some(6));
        assert_eq!(g.regularity(1).unwrap().lambda, Some(3 * 9));
    }
}
