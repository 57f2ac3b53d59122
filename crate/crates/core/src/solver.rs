//! Exact weight-k CSP solvers through weighted hypercliques.
//!
//! For an instance of degree `h`, pick `ℓ > h` parts with weights
//! `w_0 + ... + w_{ℓ-1} = k`. Part `i` holds every weight-`w_i` support.
//! An h-tuple across parts `i_1 < ... < i_h` is weighted when its supports
//! are disjoint and increasing (every variable of one support is below every
//! variable of the next). Weight-k assignments correspond one-to-one to
//! ℓ-cliques, and each monomial of `P_Φ` is charged to exactly one tuple of
//! the clique: the one on the lexicographically first h-subset of parts
//! covering the parts its variables fall in.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rayon::prelude::*;

use crate::csp::{brute_force_optimum, Assignment, CspInstance, Objective};
use crate::error::{Error, Result};

/// Largest total number of part vertices built by default.
pub const DEFAULT_VERTEX_BUDGET: u128 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Reduction,
}

/// `w_i = ⌈k/ℓ⌉` for the first `k mod ℓ` parts and `⌊k/ℓ⌋` for the rest.
pub fn part_weights(k: usize, ell: usize) -> Vec<usize> {
    (0..ell)
        .map(|i| k / ell + usize::from(i < k % ell))
        .collect()
}

/// Lexicographically first h-subset of `0..ell` containing `parts`
/// (sorted, distinct, at most `h` entries).
pub fn charging_parts(parts: &[usize], h: usize) -> Vec<usize> {
    let mut out = parts.to_vec();
    out.extend((0..).filter(|p| !parts.contains(p)).take(h - parts.len()));
    out.sort_unstable();
    out
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

#[derive(Debug, Clone)]
pub struct WeightedCliqueInstance {
    pub ell: usize,
    pub h: usize,
    pub k: usize,
    pub n_vars: usize,
    pub part_weights: Vec<usize>,
    /// `parts[i][j]` is the sorted support of vertex `j` of part `i`.
    pub parts: Vec<Vec<Vec<usize>>>,
    /// For each h-subset of parts, weights keyed by part-local indices.
    weights: BTreeMap<Vec<usize>, HashMap<Vec<usize>, i64>>,
    weight_bound: i64,
}

impl WeightedCliqueInstance {
    pub fn weight(&self, parts: &[usize], locals: &[usize]) -> Option<i64> {
        self.weights.get(parts)?.get(locals).copied()
    }

    /// Weighted tuples of every part subset.
    pub fn tuples(&self) -> impl Iterator<Item = (&[usize], &[usize], i64)> {
        self.weights
            .iter()
            .flat_map(|(p, m)| m.iter().map(move |(l, &w)| (p.as_slice(), l.as_slice(), w)))
    }

    pub fn tuple_count(&self) -> usize {
        self.weights.values().map(HashMap::len).sum()
    }

    /// `m · k^h · 2^h` with `m` the number of constraints.
    pub fn weight_bound(&self) -> i64 {
        self.weight_bound
    }

    pub fn max_abs_weight(&self) -> i64 {
        self.tuples().map(|(_, _, w)| w.abs()).max().unwrap_or(0)
    }

    /// Union of the supports of one vertex per part.
    pub fn joint_assignment(&self, locals: &[usize]) -> Assignment {
        Assignment::new(
            locals
                .iter()
                .enumerate()
                .flat_map(|(i, &j)| self.parts[i][j].iter().copied()),
        )
    }

    /// Sum over all h-subsets of parts, or `None` if one is unweighted.
    pub fn clique_weight(&self, locals: &[usize]) -> Option<i64> {
        (0..self.ell)
            .combinations(self.h)
            .map(|p| {
                let l: Vec<usize> = p.iter().map(|&i| locals[i]).collect();
                self.weight(&p, &l)
            })
            .sum()
    }
}

pub fn build_weighted_clique_instance(
    phi: &CspInstance,
    k: usize,
    ell: usize,
) -> Result<WeightedCliqueInstance> {
    build_weighted_clique_instance_with_budget(phi, k, ell, DEFAULT_VERTEX_BUDGET)
}

pub fn build_weighted_clique_instance_with_budget(
    phi: &CspInstance,
    k: usize,
    ell: usize,
    budget: u128,
) -> Result<WeightedCliqueInstance> {
    let h = phi.degree().max(2);
    if ell <= h {
        return Err(Error::precondition(format!(
            "need ell > h, got ell = {ell}, h = {h}"
        )));
    }
    if k < ell {
        return Err(Error::precondition(format!(
            "need ell <= k, got ell = {ell}, k = {k}"
        )));
    }
    if k > phi.n_vars() {
        return Err(Error::precondition(format!(
            "k = {k} exceeds the {} variables",
            phi.n_vars()
        )));
    }
    let n = phi.n_vars();
    let weights_per_part = part_weights(k, ell);
    let required: u128 = weights_per_part.iter().map(|&w| binomial(n, w)).sum();
    if required > budget {
        return Err(Error::Budget {
            what: "weighted clique vertices",
            required,
            budget,
        });
    }
    let parts: Vec<Vec<Vec<usize>>> = weights_per_part
        .iter()
        .map(|&w| (0..n).combinations(w).collect())
        .collect();
    let poly: HashMap<Vec<usize>, i64> = phi
        .polynomial()
        .terms()
        .map(|(m, c)| (m.to_vec(), c))
        .collect();

    let weights = (0..ell)
        .combinations(h)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|p| {
            let mut map = HashMap::new();
            let mut locals = Vec::with_capacity(h);
            collect_tuples(&parts, &p, &mut locals, &mut |locals| {
                let mut joint: Vec<(usize, usize)> = Vec::with_capacity(k);
                for (&part, &j) in p.iter().zip(locals) {
                    joint.extend(parts[part][j].iter().map(|&v| (v, part)));
                }
                let mut w = 0;
                for r in 0..=h.min(joint.len()) {
                    for sub in joint.iter().combinations(r) {
                        let covered: Vec<usize> =
                            sub.iter().map(|&&(_, part)| part).dedup().collect();
                        if charging_parts(&covered, h) != p {
                            continue;
                        }
                        let vars: Vec<usize> = sub.iter().map(|&&(v, _)| v).collect();
                        w += poly.get(&vars).copied().unwrap_or(0);
                    }
                }
                map.insert(locals.to_vec(), w);
            });
            (p, map)
        })
        .collect();

    let m = phi.m() as i64;
    let weight_bound = m * (k as i64).pow(h as u32) * (1 << h);
    Ok(WeightedCliqueInstance {
        ell,
        h,
        k,
        n_vars: n,
        part_weights: weights_per_part,
        parts,
        weights,
        weight_bound,
    })
}

/// Visits every chain of vertices over `parts` with increasing supports.
fn collect_tuples(
    all: &[Vec<Vec<usize>>],
    parts: &[usize],
    locals: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    let depth = locals.len();
    if depth == parts.len() {
        visit(locals);
        return;
    }
    let floor = locals
        .last()
        .map(|&j| *all[parts[depth - 1]][j].last().unwrap() + 1)
        .unwrap_or(0);
    for (j, support) in all[parts[depth]].iter().enumerate() {
        if support[0] >= floor {
            locals.push(j);
            collect_tuples(all, parts, locals, visit);
            locals.pop();
        }
    }
}

/// Maximum `w(ab) + w(bc) + w(ac)` over weighted triangles, via the
/// max-plus product of the `0-1` and `1-2` weight matrices. Ties go to the
/// lexicographically smallest `(a, b, c)`.
pub fn max_weight_triangle(w: &WeightedCliqueInstance) -> Result<(i64, [usize; 3])> {
    if w.ell != 3 || w.h != 2 {
        return Err(Error::precondition(format!(
            "triangle search needs ell = 3 and h = 2, got ell = {}, h = {}",
            w.ell, w.h
        )));
    }
    let sizes: Vec<usize> = w.parts.iter().map(Vec::len).collect();
    let dense = |p: [usize; 2]| -> Vec<Option<i64>> {
        let mut m = vec![None; sizes[p[0]] * sizes[p[1]]];
        if let Some(map) = w.weights.get(&p[..]) {
            for (l, &x) in map {
                m[l[0] * sizes[p[1]] + l[1]] = Some(x);
            }
        }
        m
    };
    let (w01, w12, w02) = (dense([0, 1]), dense([1, 2]), dense([0, 2]));
    let (n0, n1, n2) = (sizes[0], sizes[1], sizes[2]);

    // product[a][c] = max_b w01[a][b] + w12[b][c]
    let product: Vec<Option<i64>> = (0..n0)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut row = vec![None; n2];
            for b in 0..n1 {
                let Some(x) = w01[a * n1 + b] else { continue };
                for c in 0..n2 {
                    if let Some(y) = w12[b * n2 + c] {
                        let s = x + y;
                        if row[c].is_none_or(|r| s > r) {
                            row[c] = Some(s);
                        }
                    }
                }
            }
            row
        })
        .collect();

    let mut best: Option<(i64, usize, usize)> = None;
    for a in 0..n0 {
        for c in 0..n2 {
            if let (Some(p), Some(z)) = (product[a * n2 + c], w02[a * n2 + c]) {
                if best.is_none_or(|(v, _, _)| p + z > v) {
                    best = Some((p + z, a, c));
                }
            }
        }
    }
    let (value, _, _) = best.ok_or(Error::NoClique)?;
    // witness recovery: first (a, c) reaching the value, then the first b
    for a in 0..n0 {
        for c in 0..n2 {
            let (Some(p), Some(z)) = (product[a * n2 + c], w02[a * n2 + c]) else {
                continue;
            };
            if p + z != value {
                continue;
            }
            for b in 0..n1 {
                if let (Some(x), Some(y)) = (w01[a * n1 + b], w12[b * n2 + c]) {
                    if x + y == p {
                        return Ok((value, [a, b, c]));
                    }
                }
            }
        }
    }
    unreachable!("the product value has a witness")
}

/// Maximum clique weight over all ℓ-transversals whose h-subsets are all
/// weighted, by exhaustive search in parallel over part 0. Ties go to the
/// lexicographically smallest transversal.
pub fn max_weight_hyperclique(w: &WeightedCliqueInstance) -> Result<(i64, Vec<usize>)> {
    let subsets: Vec<Vec<usize>> = (0..w.ell).combinations(w.h).collect();
    // subsets whose last part is `d`, checked once a vertex of part d is chosen
    let closing: Vec<Vec<&Vec<usize>>> = (0..w.ell)
        .map(|d| subsets.iter().filter(|s| *s.last().unwrap() == d).collect())
        .collect();

    fn search(
        w: &WeightedCliqueInstance,
        closing: &[Vec<&Vec<usize>>],
        locals: &mut Vec<usize>,
        partial: i64,
        best: &mut Option<(i64, Vec<usize>)>,
    ) {
        let d = locals.len();
        if d == w.ell {
            if best.as_ref().is_none_or(|(v, _)| partial > *v) {
                *best = Some((partial, locals.clone()));
            }
            return;
        }
        'candidates: for j in 0..w.parts[d].len() {
            locals.push(j);
            let mut add = 0;
            for p in &closing[d] {
                let l: Vec<usize> = p.iter().map(|&i| locals[i]).collect();
                match w.weight(p, &l) {
                    Some(x) => add += x,
                    None => {
                        locals.pop();
                        continue 'candidates;
                    }
                }
            }
            search(w, closing, locals, partial + add, best);
            locals.pop();
        }
    }

    let best = (0..w.parts[0].len())
        .into_par_iter()
        .map(|j| {
            let mut best = None;
            let mut locals = vec![j];
            search(w, &closing, &mut locals, 0, &mut best);
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }),
                (a, b) => a.or(b),
            },
        );
    best.ok_or(Error::NoClique)
}

/// Chooses `ℓ` for degree `d`: 3 when `d ≤ 2`, otherwise the smallest
/// divisor of `k` above `d`, or `d + 1` when there is none.
pub fn choose_ell(d: usize, k: usize) -> Result<usize> {
    let ell = if d <= 2 {
        3
    } else {
        (d + 1..=k).find(|l| k.is_multiple_of(*l)).unwrap_or(d + 1)
    };
    if ell > k {
        return Err(Error::precondition(format!(
            "degree {d} needs k >= {ell} for the clique reduction, got k = {k}"
        )));
    }
    Ok(ell)
}

fn solve_max_by_reduction(phi: &CspInstance, k: usize) -> Result<(i64, Assignment)> {
    if k > phi.n_vars() {
        return Err(Error::precondition(format!(
            "k = {k} exceeds the {} variables",
            phi.n_vars()
        )));
    }
    let d = phi.degree();
    if d <= 1 {
        let p = phi.polynomial();
        let mut gains: Vec<(i64, usize)> = (0..phi.n_vars())
            .map(|v| (p.coefficient(&[v]), v))
            .collect();
        gains.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let chosen = &gains[..k];
        let value = p.coefficient(&[]) + chosen.iter().map(|g| g.0).sum::<i64>();
        return Ok((value, Assignment::new(chosen.iter().map(|g| g.1))));
    }
    let ell = choose_ell(d, k)?;
    let w = build_weighted_clique_instance(phi, k, ell)?;
    let (value, locals) = if d == 2 {
        let (v, t) = max_weight_triangle(&w)?;
        (v, t.to_vec())
    } else {
        max_weight_hyperclique(&w)?
    };
    Ok((value, w.joint_assignment(&locals)))
}

/// Optimum over weight-k assignments. `Min` is answered as
/// `m − max` of the negated instance.
pub fn solve_maxcsp(
    phi: &CspInstance,
    k: usize,
    method: Method,
    objective: Objective,
) -> Result<(i64, Assignment)> {
    match (method, objective) {
        (Method::Brute, _) => brute_force_optimum(phi, k, objective),
        (Method::Reduction, Objective::Max) => solve_max_by_reduction(phi, k),
        (Method::Reduction, Objective::Min) => {
            let (v, a) = solve_max_by_reduction(&phi.negated(), k)?;
            Ok((phi.m() as i64 - v, a))
        }
    }
}
