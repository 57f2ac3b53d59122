//! Template hypergraphs `T(h, k)` built from the group `(Z/hZ)^C(k,h)`.
//!
//! Each of the `k` parts is a copy of the group. Vertex index `i` in any part
//! stands for the group element whose coordinates are the base-`h` digits of
//! `i`, least significant digit first; coordinate `j` is indexed by the
//! `j`-th `h`-subset of `0..k` in lexicographic order. An `h`-tuple across
//! parts `S` is a positive edge when its elements sum to zero and a negative
//! edge when they sum to the unit vector `e_S`.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, KPartiteHypergraph, RegularityReport, VertexRef};

/// Largest number of template edges [`build_template`] will materialize.
pub const DEFAULT_TEMPLATE_EDGE_BUDGET: u128 = 2_000_000;

/// Edge sign in a signed hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// A k-partite h-uniform hypergraph whose edges each carry a sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedHypergraph {
    base: KPartiteHypergraph,
    signs: BTreeMap<Edge, Sign>,
}

impl SignedHypergraph {
    pub fn new(
        k: usize,
        h: usize,
        part_sizes: Vec<usize>,
        edges: Vec<(Vec<VertexRef>, Sign)>,
    ) -> Result<Self> {
        let (tuples, signs): (Vec<_>, Vec<_>) = edges.into_iter().unzip();
        let base = KPartiteHypergraph::new(k, h, part_sizes, tuples.clone())?;
        let signs = tuples
            .into_iter()
            .zip(signs)
            .map(|(mut t, s)| {
                t.sort();
                (edge_of(&base, &t), s)
            })
            .collect();
        Ok(SignedHypergraph { base, signs })
    }

    /// The sign-blind hypergraph.
    pub fn base(&self) -> &KPartiteHypergraph {
        &self.base
    }

    pub fn sign(&self, tuple: &[VertexRef]) -> Option<Sign> {
        self.signs.get(tuple).copied()
    }

    /// Edges with their signs in canonical order.
    pub fn signed_edges(&self) -> impl Iterator<Item = (&Edge, Sign)> {
        self.signs.iter().map(|(e, &s)| (e, s))
    }

    /// The sub-hypergraph `T^+` or `T^-` on the same vertex set.
    pub fn with_sign(&self, sign: Sign) -> KPartiteHypergraph {
        self.base.filter_edges(|e| self.signs[e] == sign)
    }

    pub fn positive(&self) -> KPartiteHypergraph {
        self.with_sign(Sign::Positive)
    }

    pub fn negative(&self) -> KPartiteHypergraph {
        self.with_sign(Sign::Negative)
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    pub fn h(&self) -> usize {
        self.base.h()
    }
}

fn edge_of(base: &KPartiteHypergraph, sorted: &[VertexRef]) -> Edge {
    let pos = base
        .edges()
        .binary_search_by(|e| e.vertices().cmp(sorted))
        .expect("edge present in base");
    base.edges()[pos].clone()
}

/// An element of `(Z/hZ)^C(k,h)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    modulus: usize,
    coords: Vec<usize>,
}

impl GroupElement {
    pub fn zero(modulus: usize, dims: usize) -> Self {
        GroupElement {
            modulus,
            coords: vec![0; dims],
        }
    }

    /// The unit vector with a 1 in coordinate `dim`.
    pub fn unit(modulus: usize, dims: usize, dim: usize) -> Self {
        let mut e = Self::zero(modulus, dims);
        e.coords[dim] = 1 % modulus;
        e
    }

    /// Decodes a vertex index (base-`modulus` digits, least significant
    /// first).
    pub fn from_index(modulus: usize, dims: usize, mut index: usize) -> Self {
        let coords = (0..dims)
            .map(|_| {
                let d = index % modulus;
                index /= modulus;
                d
            })
            .collect();
        GroupElement { modulus, coords }
    }

    pub fn index(&self) -> usize {
        self.coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.modulus + c)
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect();
        GroupElement {
            modulus: self.modulus,
            coords,
        }
    }

    pub fn neg(&self) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|&a| (self.modulus - a) % self.modulus)
            .collect();
        GroupElement {
            modulus: self.modulus,
            coords,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The `h`-subsets of `0..k` in lexicographic order; position = coordinate.
pub fn dimensions(h: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).combinations(h).collect()
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// `|G| = h^C(k,h)`, the number of vertices per part and of k-cliques.
pub fn group_order(h: usize, k: usize) -> u128 {
    (h as u128).saturating_pow(binomial(k, h).min(u32::MAX as u128) as u32)
}

/// Edges of `T(h, k)` of one sign: `C(k,h) · |G|^(h-1)`.
pub fn template_edge_count(h: usize, k: usize) -> u128 {
    binomial(k, h).saturating_mul(group_order(h, k).saturating_pow(h as u32 - 1))
}

pub fn build_template(h: usize, k: usize) -> Result<SignedHypergraph> {
    build_template_with_budget(h, k, DEFAULT_TEMPLATE_EDGE_BUDGET)
}

/// Materializes `T(h, k)`, refusing when it would hold more than `budget`
/// edges in total.
pub fn build_template_with_budget(h: usize, k: usize, budget: u128) -> Result<SignedHypergraph> {
    if h < 2 || h >= k {
        return Err(Error::precondition(format!(
            "template needs 2 <= h < k, got h = {h}, k = {k}"
        )));
    }
    let dims = dimensions(h, k);
    let d = dims.len();
    let required = template_edge_count(h, k).saturating_mul(2);
    if required > budget {
        return Err(Error::Budget {
            what: "template edges",
            required,
            budget,
        });
    }
    let order = group_order(h, k) as usize;
    let zero = GroupElement::zero(h, d);

    let mut base_edges = Vec::with_capacity(required as usize);
    let mut signs = BTreeMap::new();
    for (dim, parts) in dims.iter().enumerate() {
        let unit = GroupElement::unit(h, d, dim);
        for prefix in (0..h - 1).map(|_| 0..order).multi_cartesian_product() {
            let sum = prefix.iter().fold(zero.clone(), |acc, &i| {
                acc.add(&GroupElement::from_index(h, d, i))
            });
            for (target, sign) in [(&zero, Sign::Positive), (&unit, Sign::Negative)] {
                let last = target.sub(&sum).index();
                let vertices = parts
                    .iter()
                    .zip(prefix.iter().copied().chain(std::iter::once(last)))
                    .map(|(&p, i)| VertexRef::new(p, i))
                    .collect::<Vec<_>>();
                base_edges.push(vertices.clone());
                signs.insert(vertices, sign);
            }
        }
    }
    let base = KPartiteHypergraph::new(k, h, vec![order; k], base_edges)?;
    let signs = base
        .edges()
        .iter()
        .map(|e| (e.clone(), signs[e.vertices()]))
        .collect();
    Ok(SignedHypergraph { base, signs })
}

/// Certification of the three template properties, or counterexamples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateReport {
    /// Common λ when `T^+` and `T^-` are both `(h-1, λ)`-regular with the
    /// same positive λ.
    pub p1_lambda: Option<usize>,
    pub positive_regularity: RegularityReport,
    pub negative_regularity: RegularityReport,
    /// A k-clique of `T^+`.
    pub p2_clique: Option<Vec<VertexRef>>,
    /// An `(h+1)`-clique containing a negative edge.
    pub p3_violation: Option<Vec<VertexRef>>,
}

impl TemplateReport {
    pub fn is_template(&self) -> bool {
        self.p1_lambda.is_some() && self.p2_clique.is_some() && self.p3_violation.is_none()
    }
}

pub fn verify_template(t: &SignedHypergraph) -> Result<TemplateReport> {
    let h = t.h();
    let positive = t.positive();
    let negative = t.negative();
    let positive_regularity = positive.regularity(h - 1)?;
    let negative_regularity = negative.regularity(h - 1)?;
    let p1_lambda = match (positive_regularity.lambda, negative_regularity.lambda) {
        (Some(a), Some(b)) if a == b && a > 0 => Some(a),
        _ => None,
    };
    let p2_clique = positive.find_k_clique();
    let p3_violation = find_negative_h1_clique(t);
    Ok(TemplateReport {
        p1_lambda,
        positive_regularity,
        negative_regularity,
        p2_clique,
        p3_violation,
    })
}

/// First `(h+1)`-clique (sign-blind) that contains a negative edge. Joins
/// each negative edge with the completions of its first `h-1` vertices.
fn find_negative_h1_clique(t: &SignedHypergraph) -> Option<Vec<VertexRef>> {
    let base = t.base();
    let h = t.h();
    for (edge, sign) in t.signed_edges() {
        if sign != Sign::Negative {
            continue;
        }
        let verts = edge.vertices();
        for w in base.completions(&verts[..h - 1]) {
            if verts.iter().any(|v| v.part == w.part) {
                continue;
            }
            let mut clique = verts.to_vec();
            clique.push(*w);
            clique.sort();
            let all_edges = clique
                .iter()
                .copied()
                .combinations(h)
                .all(|sub| base.contains_edge(&sub));
            if all_edges {
                return Some(clique);
            }
        }
    }
    None
}

/// Counts sign-blind k-cliques of a template built by [`build_template`],
/// checking that every one is diagonal (the same group element in all
/// parts) and uses positive edges only.
pub fn count_template_cliques(t: &SignedHypergraph) -> Result<u64> {
    let mut count = 0u64;
    let mut bad = None;
    t.base().for_each_k_clique(|clique| {
        count += 1;
        let diagonal = clique.iter().all(|v| v.index == clique[0].index);
        let positive = clique
            .iter()
            .copied()
            .combinations(t.h())
            .all(|e| t.sign(&e) == Some(Sign::Positive));
        if diagonal && positive {
            ControlFlow::Continue(())
        } else {
            bad = Some(clique.to_vec());
            ControlFlow::Break(())
        }
    });
    match bad {
        None => Ok(count),
        Some(c) => Err(Error::precondition(format!(
            "template clique {} is not diagonal and positive",
            c.iter().join(" ")
        ))),
    }
}
