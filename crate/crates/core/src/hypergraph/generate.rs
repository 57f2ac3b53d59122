//! Seeded instance generators.
//!
//! Randomness always comes from `ChaCha8Rng::seed_from_u64(seed)`. The random
//! hypergraph draws exactly one `gen_bool(p)` per cross-part tuple, in the
//! canonical tuple order, so a seed fixes the edge set.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cross_tuples, Edge, KPartiteHypergraph, VertexRef};
use crate::error::{Error, Result};

/// For each 3-subset of parts `[i, j, l]` (sorted), the residues mod `n`
/// that make a triple an edge.
pub type ConstantSets = BTreeMap<[usize; 3], BTreeSet<usize>>;

/// How constant sets treat the residue 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroPolicy {
    /// Every set contains 0, so the all-zero transversal is a clique.
    Contain,
    /// No set contains 0.
    Avoid,
    /// No constraint.
    Free,
}

/// `{0..t-1}` for every triple of parts, or `{1..t}` under
/// [`ZeroPolicy::Avoid`].
pub fn canonical_constant_sets(k: usize, t: usize, zero: ZeroPolicy) -> ConstantSets {
    let offset = usize::from(zero == ZeroPolicy::Avoid);
    (0..k)
        .combinations(3)
        .map(|p| ([p[0], p[1], p[2]], (offset..offset + t).collect()))
        .collect()
}

/// Independent uniformly random `t`-subsets of `Z/nZ` per triple of parts.
pub fn random_constant_sets(
    k: usize,
    n: usize,
    t: usize,
    zero: ZeroPolicy,
    seed: u64,
) -> Result<ConstantSets> {
    if t == 0 || t >= n {
        return Err(Error::precondition(format!(
            "need 0 < t < n, got t = {t}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = (0..k)
        .combinations(3)
        .map(|p| {
            let set: BTreeSet<usize> = match zero {
                ZeroPolicy::Free => sample(&mut rng, n, t).into_iter().collect(),
                ZeroPolicy::Contain => std::iter::once(0)
                    .chain(sample(&mut rng, n - 1, t - 1).into_iter().map(|x| x + 1))
                    .collect(),
                ZeroPolicy::Avoid => sample(&mut rng, n - 1, t)
                    .into_iter()
                    .map(|x| x + 1)
                    .collect(),
            };
            ([p[0], p[1], p[2]], set)
        })
        .collect();
    Ok(sets)
}

/// 3-uniform k-partite hypergraph on parts `Z/nZ` where `{x, y, z}` across
/// parts `i < j < l` is an edge iff `x + y + z mod n` lies in the constant
/// set of `{i, j, l}`. Every cross-part pair lies in exactly `(k-2)·t`
/// edges.
pub fn generate_sum_regular(k: usize, n: usize, sets: &ConstantSets) -> Result<KPartiteHypergraph> {
    if k < 4 {
        return Err(Error::precondition(format!(
            "sum-regular generator needs k >= 4, got {k}"
        )));
    }
    if n < 2 {
        return Err(Error::precondition(format!(
            "sum-regular generator needs n >= 2, got {n}"
        )));
    }
    let mut t = None;
    for parts in (0..k).combinations(3) {
        let key = [parts[0], parts[1], parts[2]];
        let set = sets
            .get(&key)
            .ok_or_else(|| Error::precondition(format!("no constant set for parts {key:?}")))?;
        if let Some(&bad) = set.iter().find(|&&c| c >= n) {
            return Err(Error::precondition(format!(
                "residue {bad} is not below n = {n}"
            )));
        }
        match t {
            None => t = Some(set.len()),
            Some(t) if t != set.len() => {
                return Err(Error::precondition(
                    "constant sets must all have the same size t",
                ))
            }
            _ => {}
        }
    }
    if sets.len() != k * (k - 1) * (k - 2) / 6 {
        return Err(Error::precondition(
            "constant sets given for unknown part triples",
        ));
    }
    let t = t.unwrap_or(0);
    if t == 0 || t >= n {
        return Err(Error::precondition(format!(
            "density q = t/n must lie strictly between 0 and 1 (t = {t}, n = {n})"
        )));
    }

    let mut edges = Vec::with_capacity(sets.len() * n * n * t);
    for (&[i, j, l], set) in sets {
        for x in 0..n {
            for y in 0..n {
                for &c in set {
                    let z = (c + 2 * n - x - y) % n;
                    edges.push(Edge(vec![
                        VertexRef::new(i, x),
                        VertexRef::new(j, y),
                        VertexRef::new(l, z),
                    ]));
                }
            }
        }
    }
    Ok(KPartiteHypergraph::from_canonical(k, 3, vec![n; k], edges))
}

/// Each cross-part h-tuple becomes an edge independently with
/// probability `p`.
pub fn random_hypergraph(
    k: usize,
    h: usize,
    n: usize,
    p: f64,
    seed: u64,
) -> Result<KPartiteHypergraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::precondition(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let shell = KPartiteHypergraph::empty(k, h, vec![n; k])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = cross_tuples(&shell.part_sizes, h)
        .filter(|_| rng.gen_bool(p))
        .map(Edge)
        .collect();
    Ok(KPartiteHypergraph::from_canonical(k, h, vec![n; k], edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sets_give_the_zero_clique() {
        let sets = canonical_constant_sets(5, 1, ZeroPolicy::Contain);
        let g = generate_sum_regular(5, 4, &sets).unwrap();
        let zero: Vec<_> = (0..5).map(|p| VertexRef::new(p, 0)).collect();
        assert!(g.is_k_clique(&zero));
        assert_eq!(g.find_k_clique(), Some(zero));
    }

    #[test]
    fn pair_regularity_by_exhaustive_pair_scan() {
        let sets = random_constant_sets(4, 5, 2, ZeroPolicy::Free, 7).unwrap();
        let g = generate_sum_regular(4, 5, &sets).unwrap();
        // independent scan: count edges containing each cross-part pair directly
        for (a, b) in cross_tuples(g.part_sizes(), 2).map(|t| (t[0], t[1])) {
            let count = g
                .edges()
                .iter()
                .filter(|e| e.vertices().contains(&a) && e.vertices().contains(&b))
                .count();
            assert_eq!(count, 4);
        }
        assert_eq!(g.regularity(2).unwrap().lambda, Some(4));
        assert!(g.regularity(1).unwrap().is_regular());
    }

    #[test]
    fn density_bounds() {
        let full = canonical_constant_sets(4, 5, ZeroPolicy::Free);
        assert!(generate_sum_regular(4, 5, &full).is_err());
        let none = canonical_constant_sets(4, 0, ZeroPolicy::Free);
        assert!(generate_sum_regular(4, 5, &none).is_err());
        assert!(random_constant_sets(4, 5, 5, ZeroPolicy::Free, 0).is_err());
        assert!(
            generate_sum_regular(3, 5, &canonical_constant_sets(3, 2, ZeroPolicy::Free)).is_err()
        );
    }

    #[test]
    fn zero_policies() {
        for seed in 0..20 {
            let c = random_constant_sets(5, 7, 3, ZeroPolicy::Contain, seed).unwrap();
            assert!(c.values().all(|s| s.contains(&0) && s.len() == 3));
            let a = random_constant_sets(5, 7, 3, ZeroPolicy::Avoid, seed).unwrap();
            assert!(a.values().all(|s| !s.contains(&0) && s.len() == 3));
        }
    }

    #[test]
    fn random_extremes_and_determinism() {
        let empty = random_hypergraph(4, 3, 3, 0.0, 1).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = random_hypergraph(4, 3, 3, 1.0, 1).unwrap();
        assert_eq!(
            full,
            KPartiteHypergraph::complete(4, 3, vec![3; 4]).unwrap()
        );
        let a = random_hypergraph(4, 3, 3, 0.4, 99).unwrap();
        let b = random_hypergraph(4, 3, 3, 0.4, 99).unwrap();
        assert_eq!(a, b);
        assert!(random_hypergraph(4, 3, 3, 1.5, 0).is_err());
    }
}
