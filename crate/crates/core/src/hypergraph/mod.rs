//! k-partite h-uniform hypergraphs.
//!
//! Vertices are `(part, index)` pairs, both 0-based. Edges are stored in
//! canonical form: exactly `h` vertices sorted by strictly increasing part.
//! Every hypergraph also keeps a completion index that maps each
//! `(h-1)`-subset of an edge to the sorted list of vertices completing it,
//! so edge probes and clique extension are a hash lookup plus a binary
//! search.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

mod clique;
mod generate;
mod plain;
mod regularity;

pub use generate::{
    canonical_constant_sets, generate_sum_regular, random_constant_sets, random_hypergraph,
    ConstantSets, ZeroPolicy,
};
pub use plain::PlainHypergraph;
pub use regularity::{RegularityReport, RegularityWitness};

/// A vertex of a k-partite hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub part: usize,
    pub index: usize,
}

impl VertexRef {
    pub const fn new(part: usize, index: usize) -> Self {
        VertexRef { part, index }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.part, self.index)
    }
}

/// A canonical hyperedge: vertices sorted by strictly increasing part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub(crate) Vec<VertexRef>);

impl Edge {
    pub fn vertices(&self) -> &[VertexRef] {
        &self.0
    }

    pub fn parts(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|v| v.part)
    }

    pub fn into_vertices(self) -> Vec<VertexRef> {
        self.0
    }
}

impl Borrow<[VertexRef]> for Edge {
    fn borrow(&self) -> &[VertexRef] {
        &self.0
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

/// One violated invariant found by [`RawHypergraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Header-level problem (k, h or part sizes).
    Shape(String),
    /// Edge `edge` does not have exactly `h` vertices.
    WrongArity { edge: usize, len: usize },
    /// Edge `edge` has two vertices in `part`.
    RepeatedPart { edge: usize, part: usize },
    /// Edge `edge` references a vertex outside its part.
    IndexOutOfRange { edge: usize, vertex: VertexRef },
    /// Edge `edge` repeats edge `first`.
    DuplicateEdge { edge: usize, first: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(msg) => write!(f, "{msg}"),
            Violation::WrongArity { edge, len } => write!(f, "edge #{edge}: has {len} vertices"),
            Violation::RepeatedPart { edge, part } => {
                write!(f, "edge #{edge}: repeated part {part}")
            }
            Violation::IndexOutOfRange { edge, vertex } => {
                write!(f, "edge #{edge}: vertex {vertex} index out of range")
            }
            Violation::DuplicateEdge { edge, first } => {
                write!(f, "edge #{edge}: duplicate of edge #{first}")
            }
        }
    }
}

/// Every invariant violation of a raw hypergraph. Empty iff well-formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "well-formed");
        }
        write!(f, "{}", self.violations.iter().join("; "))
    }
}

/// An unchecked hypergraph description, as read from a file or assembled by
/// hand. Edges may be in any vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawHypergraph {
    pub k: usize,
    pub h: usize,
    pub part_sizes: Vec<usize>,
    pub edges: Vec<Vec<VertexRef>>,
}

impl RawHypergraph {
    /// Lists every violated invariant; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.k < 2 {
            violations.push(Violation::Shape(format!(
                "k = {} must be at least 2",
                self.k
            )));
        }
        if self.h < 2 || self.h >= self.k.max(2) {
            violations.push(Violation::Shape(format!(
                "h = {} must satisfy 2 <= h < k = {}",
                self.h, self.k
            )));
        }
        if self.part_sizes.len() != self.k {
            violations.push(Violation::Shape(format!(
                "{} part sizes given for k = {}",
                self.part_sizes.len(),
                self.k
            )));
        }
        if let Some(p) = self.part_sizes.iter().position(|&n| n == 0) {
            violations.push(Violation::Shape(format!("part {p} is empty")));
        }

        let mut seen: HashMap<Vec<VertexRef>, usize> = HashMap::new();
        for (i, edge) in self.edges.iter().enumerate() {
            let mut ok = true;
            if edge.len() != self.h {
                violations.push(Violation::WrongArity {
                    edge: i,
                    len: edge.len(),
                });
                ok = false;
            }
            let mut sorted = edge.clone();
            sorted.sort();
            for w in sorted.windows(2) {
                if w[0].part == w[1].part {
                    violations.push(Violation::RepeatedPart {
                        edge: i,
                        part: w[0].part,
                    });
                    ok = false;
                }
            }
            for &v in &sorted {
                let in_range = self.part_sizes.get(v.part).is_some_and(|&n| v.index < n);
                if !in_range {
                    violations.push(Violation::IndexOutOfRange { edge: i, vertex: v });
                    ok = false;
                }
            }
            if ok {
                if let Some(&first) = seen.get(&sorted) {
                    violations.push(Violation::DuplicateEdge { edge: i, first });
                } else {
                    seen.insert(sorted, i);
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn into_hypergraph(self) -> Result<KPartiteHypergraph> {
        KPartiteHypergraph::new(self.k, self.h, self.part_sizes, self.edges)
    }
}

/// A well-formed k-partite h-uniform hypergraph. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct KPartiteHypergraph {
    k: usize,
    h: usize,
    part_sizes: Vec<usize>,
    edges: Vec<Edge>,
    completions: HashMap<Vec<VertexRef>, Vec<VertexRef>>,
}

impl PartialEq for KPartiteHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.h == other.h
            && self.part_sizes == other.part_sizes
            && self.edges == other.edges
    }
}

impl Eq for KPartiteHypergraph {}

impl KPartiteHypergraph {
    /// Validates and canonicalizes. Any violation is returned as
    /// [`Error::InvalidHypergraph`].
    pub fn new(
        k: usize,
        h: usize,
        part_sizes: Vec<usize>,
        edges: Vec<Vec<VertexRef>>,
    ) -> Result<Self> {
        let raw = RawHypergraph {
            k,
            h,
            part_sizes,
            edges,
        };
        let report = raw.validate();
        if !report.is_empty() {
            return Err(Error::InvalidHypergraph(report));
        }
        let edges = raw
            .edges
            .into_iter()
            .map(|mut e| {
                e.sort();
                Edge(e)
            })
            .collect();
        Ok(Self::from_canonical(raw.k, raw.h, raw.part_sizes, edges))
    }

    /// Builds from edges already known to be canonical and distinct.
    pub(crate) fn from_canonical(
        k: usize,
        h: usize,
        part_sizes: Vec<usize>,
        mut edges: Vec<Edge>,
    ) -> Self {
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        let mut completions: HashMap<Vec<VertexRef>, Vec<VertexRef>> =
            HashMap::with_capacity(edges.len() * h / 2 + 1);
        let mut key = Vec::with_capacity(h);
        for edge in &edges {
            for skip in 0..h {
                key.clear();
                key.extend(
                    edge.0
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, &v)| v),
                );
                completions
                    .entry(key.clone())
                    .or_default()
                    .push(edge.0[skip]);
            }
        }
        for list in completions.values_mut() {
            list.sort_unstable();
        }
        KPartiteHypergraph {
            k,
            h,
            part_sizes,
            edges,
            completions,
        }
    }

    /// A hypergraph without edges.
    pub fn empty(k: usize, h: usize, part_sizes: Vec<usize>) -> Result<Self> {
        Self::new(k, h, part_sizes, Vec::new())
    }

    /// Every cross-part h-tuple is an edge.
    pub fn complete(k: usize, h: usize, part_sizes: Vec<usize>) -> Result<Self> {
        let shell = Self::empty(k, h, part_sizes)?;
        let edges = cross_tuples(&shell.part_sizes, h).map(Edge).collect();
        Ok(Self::from_canonical(
            shell.k,
            shell.h,
            shell.part_sizes,
            edges,
        ))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn vertex_count(&self) -> usize {
        self.part_sizes.iter().sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.part_sizes.iter().all_equal()
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Always empty: the type can only be built from a valid description.
    pub fn validate(&self) -> ValidationReport {
        ValidationReport::default()
    }

    /// `tuple` must be part-sorted. Returns false for tuples of the wrong
    /// length.
    pub fn contains_edge(&self, tuple: &[VertexRef]) -> bool {
        if tuple.len() != self.h {
            return false;
        }
        let (last, key) = tuple.split_last().expect("h >= 2");
        self.completions
            .get(key)
            .is_some_and(|list| list.binary_search(last).is_ok())
    }

    /// Vertices `w` such that `key ∪ {w}` is an edge, sorted. `key` must be
    /// a part-sorted `(h-1)`-tuple.
    pub fn completions(&self, key: &[VertexRef]) -> &[VertexRef] {
        self.completions.get(key).map_or(&[], Vec::as_slice)
    }

    /// Completions restricted to one part.
    pub fn completions_in_part(&self, key: &[VertexRef], part: usize) -> &[VertexRef] {
        let all = self.completions(key);
        let lo = all.partition_point(|v| v.part < part);
        let hi = all.partition_point(|v| v.part <= part);
        &all[lo..hi]
    }

    /// Sub-hypergraph on the same vertex set keeping edges matching `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> Self {
        let edges = self.edges.iter().filter(|e| keep(e)).cloned().collect();
        Self::from_canonical(self.k, self.h, self.part_sizes.clone(), edges)
    }

    /// The k-partition respecting complement: exactly the cross-part
    /// h-tuples that are not edges. Involutive.
    pub fn complement_partite(&self) -> Self {
        let edges = cross_tuples(&self.part_sizes, self.h)
            .filter(|t| !self.contains_edge(t))
            .map(Edge)
            .collect();
        Self::from_canonical(self.k, self.h, self.part_sizes.clone(), edges)
    }

    /// Number of edges lying entirely inside `vertices`.
    pub fn induced_edge_count(&self, vertices: &[VertexRef]) -> usize {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
            .iter()
            .copied()
            .combinations(self.h)
            .filter(|t| t.windows(2).all(|w| w[0].part < w[1].part) && self.contains_edge(t))
            .count()
    }

    /// Global vertex id: parts laid out consecutively.
    pub fn flat_index(&self, v: VertexRef) -> usize {
        self.part_sizes[..v.part].iter().sum::<usize>() + v.index
    }

    /// Inverse of [`Self::flat_index`].
    pub fn vertex_at(&self, mut flat: usize) -> VertexRef {
        for (part, &n) in self.part_sizes.iter().enumerate() {
            if flat < n {
                return VertexRef::new(part, flat);
            }
            flat -= n;
        }
        panic!("flat index out of range")
    }

    pub(crate) fn vertices_of_part(&self, part: usize) -> impl Iterator<Item = VertexRef> {
        (0..self.part_sizes[part]).map(move |i| VertexRef::new(part, i))
    }
}

/// All cross-part `s`-tuples in canonical order: part subsets
/// lexicographically, then indices lexicographically.
pub(crate) fn cross_tuples(
    part_sizes: &[usize],
    s: usize,
) -> impl Iterator<Item = Vec<VertexRef>> + '_ {
    (0..part_sizes.len())
        .combinations(s)
        .flat_map(move |parts| {
            parts
                .iter()
                .map(|&p| (0..part_sizes[p]).map(move |i| VertexRef::new(p, i)))
                .multi_cartesian_product()
                .collect::<Vec<_>>()
        })
}

/// Number of cross-part `s`-tuples.
#[cfg(test)]
fn cross_tuple_count(part_sizes: &[usize], s: usize) -> u128 {
    (0..part_sizes.len())
        .combinations(s)
        .map(|parts| {
            parts
                .iter()
                .map(|&p| part_sizes[p] as u128)
                .product::<u128>()
        })
        .sum()
}
