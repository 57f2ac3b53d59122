//! From regular 3-uniform hypergraphs to weight-k CSP instances, and the
//! induced 4-cycle reduction.
//!
//! Given a balanced k-partite `(2, μ)`-regular hypergraph `G` and a ternary
//! degree-3 function `φ` with symmetric coefficients `(α, β, γ, δ)`, the
//! working graph `G'` is `G` when `α > 0` and its partite complement when
//! `α < 0`. Every edge of `G'` contributes the six argument permutations of
//! `φ`. When `β < 0`, or `β = 0` and `α < 0`, every pair `u, v` inside one
//! part and every other vertex `w` also contribute them. The instance has a
//! weight-k assignment scoring at least `τ` iff `G` has a k-clique.

use std::fmt::{self, Write as _};
use std::path::Path;

use itertools::Itertools;

use crate::boolean::{symmetrize, BooleanFunction, SymmetricCoefficients, S3};
use crate::csp::{
    cross_pair_sum, evaluate_instance, fold_weight_k, write_csp, Assignment, CspInstance, Objective,
};
use crate::error::{Error, Result};
use crate::hypergraph::{KPartiteHypergraph, VertexRef};
use crate::solver::{solve_maxcsp, Method};

/// Name under which `φ` is registered in emitted instances.
pub const PHI_NAME: &str = "phi";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    BetaPos,
    BetaNeg,
    BetaZero,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::BetaPos => "beta_pos",
            CaseTag::BetaNeg => "beta_neg",
            CaseTag::BetaZero => "beta_zero",
        })
    }
}

/// Which family of triples carries constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Edges of the working graph only.
    EdgesOnly,
    /// Edges plus every triple with two vertices in a common part.
    WithIntraPart,
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: CspInstance,
    pub k: usize,
    pub tau: i64,
    pub case_tag: CaseTag,
    pub alpha_sign: i64,
    pub construction: Construction,
    pub coefficients: SymmetricCoefficients,
    pub working_graph: KPartiteHypergraph,
    /// `λ` of the working graph at `s = 2`.
    pub lambda: usize,
    /// Part size `n`.
    pub n: usize,
}

impl ReductionOutput {
    /// Part of the vertex behind variable `v`.
    pub fn part_of(&self, v: usize) -> usize {
        v / self.n
    }

    /// `(k_1, ..., k_k)`: number of ones in each part.
    pub fn profile(&self, a: &Assignment) -> Vec<usize> {
        let mut profile = vec![0; self.k];
        for &v in a.ones() {
            profile[self.part_of(v)] += 1;
        }
        profile
    }

    /// Exactly one 1 in every part.
    pub fn is_k_partite(&self, ones: &[usize]) -> bool {
        ones.len() == self.k && ones.iter().enumerate().all(|(i, &v)| self.part_of(v) == i)
    }

    pub fn vertex(&self, v: usize) -> VertexRef {
        VertexRef::new(v / self.n, v % self.n)
    }

    /// Edges of the working graph inside the support of `a`.
    pub fn induced_edges(&self, a: &Assignment) -> usize {
        let support: Vec<_> = a.ones().iter().map(|&v| self.vertex(v)).collect();
        self.working_graph.induced_edge_count(&support)
    }

    /// CSP text with a `# tau=.. case=.. alpha=.. beta=..` trailer.
    pub fn to_csp_text(&self) -> String {
        let mut out = write_csp(&self.instance, self.k);
        writeln!(
            out,
            "# tau={} case={} alpha={} beta={}",
            self.tau, self.case_tag, self.coefficients.alpha, self.coefficients.beta
        )
        .unwrap();
        out
    }
}

fn binom(n: usize, r: usize) -> usize {
    if r > n {
        0
    } else {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}

/// Checks the standing assumptions and returns `(n, μ)`.
pub fn check_reduction_input(g: &KPartiteHypergraph) -> Result<(usize, usize)> {
    if g.h() != 3 {
        return Err(Error::precondition(format!(
            "input must be 3-uniform, got h = {}",
            g.h()
        )));
    }
    if g.k() < 4 {
        return Err(Error::precondition(format!(
            "need k >= 4, got k = {}",
            g.k()
        )));
    }
    if !g.is_balanced() {
        return Err(Error::precondition(
            "input parts must all have the same size",
        ));
    }
    let n = g.part_sizes()[0];
    let report = g.regularity(2)?;
    let mu = report
        .lambda
        .ok_or_else(|| Error::precondition(format!("input is not (2, mu)-regular: {}", report)))?;
    if mu == 0 || mu >= (g.k() - 2) * n {
        return Err(Error::precondition(format!(
            "density q = mu / ((k-2) n) must lie strictly between 0 and 1, got mu = {mu}, (k-2) n = {}",
            (g.k() - 2) * n
        )));
    }
    Ok((n, mu))
}

fn push_sym(instance: &mut CspInstance, triple: [usize; 3]) {
    for p in S3 {
        instance
            .add_constraint(0, vec![triple[p[0]], triple[p[1]], triple[p[2]]])
            .expect("distinct in-range variables");
    }
}

pub fn build_reduction(g: &KPartiteHypergraph, phi: &BooleanFunction) -> Result<ReductionOutput> {
    if phi.arity() != 3 {
        return Err(Error::precondition(format!(
            "phi must be ternary, got arity {}",
            phi.arity()
        )));
    }
    let d = phi.degree();
    if d != 3 {
        return Err(Error::precondition(format!(
            "phi must have degree 3, got {d}"
        )));
    }
    let (n, _mu) = check_reduction_input(g)?;
    let k = g.k();
    let coefficients = symmetrize(phi)?.coefficients;
    let SymmetricCoefficients { alpha, beta, .. } = coefficients;

    let working_graph = if alpha > 0 {
        g.clone()
    } else {
        g.complement_partite()
    };
    let lambda = working_graph
        .regularity(2)?
        .lambda
        .expect("complement of a regular hypergraph is regular");
    let (case_tag, construction) = match beta.signum() {
        1 => (CaseTag::BetaPos, Construction::EdgesOnly),
        -1 => (CaseTag::BetaNeg, Construction::WithIntraPart),
        _ if alpha > 0 => (CaseTag::BetaZero, Construction::EdgesOnly),
        _ => (CaseTag::BetaZero, Construction::WithIntraPart),
    };

    let total = k * n;
    let mut instance = CspInstance::new(total);
    instance.register(PHI_NAME, phi.clone())?;
    for e in working_graph.edges() {
        let v = e.vertices();
        push_sym(
            &mut instance,
            [
                working_graph.flat_index(v[0]),
                working_graph.flat_index(v[1]),
                working_graph.flat_index(v[2]),
            ],
        );
    }
    if construction == Construction::WithIntraPart {
        for part in 0..k {
            for (u, v) in (part * n..(part + 1) * n).tuple_combinations() {
                for w in (0..total).filter(|&w| w != u && w != v) {
                    push_sym(&mut instance, [u, v, w]);
                }
            }
        }
    }

    let mut out = ReductionOutput {
        instance,
        k,
        tau: 0,
        case_tag,
        alpha_sign: alpha.signum(),
        construction,
        coefficients,
        working_graph,
        lambda,
        n,
    };
    let a0 = Assignment::new((0..k).map(|p| p * n));
    let c = evaluate_instance(&out.instance, &a0)? - alpha * out.induced_edges(&a0) as i64;
    out.tau = if alpha > 0 {
        c + alpha * binom(k, 3) as i64
    } else {
        c
    };
    Ok(out)
}

/// `Φ(a) − α·m(S) − β·λ·Σ_{i<j} k_i k_j`; constant over all weight-k
/// assignments when only edges carry constraints.
pub fn edges_only_residual(out: &ReductionOutput, a: &Assignment) -> Result<i64> {
    let SymmetricCoefficients { alpha, beta, .. } = out.coefficients;
    let profile = out.profile(a);
    Ok(evaluate_instance(&out.instance, a)?
        - alpha * out.induced_edges(a) as i64
        - beta * out.lambda as i64 * cross_pair_sum(&profile) as i64)
}

/// The `(α-term, β-term)` multipliers for instances with intra-part
/// triples, counted exactly:
///
/// * α: `m(S) + 3·Σ C(k_i,3) + Σ_{i<j} (C(k_i,2)·k_j + C(k_j,2)·k_i)`
/// * β: `Σ_{i<j} k_i k_j (λ + 2n − 2) + Σ_i C(k_i,2)·(kn − 2 + 2(n − 2))`
pub fn intra_part_terms(out: &ReductionOutput, a: &Assignment) -> (i64, i64) {
    let p = out.profile(a);
    let (n, k, lambda) = (out.n as i64, out.k as i64, out.lambda as i64);
    let c2 = |x: usize| binom(x, 2) as i64;
    let c3 = |x: usize| binom(x, 3) as i64;
    let mut a_term = out.induced_edges(a) as i64 + 3 * p.iter().map(|&x| c3(x)).sum::<i64>();
    let mut b_term = 0;
    for (i, j) in (0..p.len()).tuple_combinations() {
        a_term += c2(p[i]) * p[j] as i64 + c2(p[j]) * p[i] as i64;
        b_term += (p[i] * p[j]) as i64 * (lambda + 2 * n - 2);
    }
    b_term += p
        .iter()
        .map(|&x| c2(x) * (k * n - 2 + 2 * (n - 2)))
        .sum::<i64>();
    (a_term, b_term)
}

/// `Φ(a)` minus `α` and `β` times [`intra_part_terms`]; constant over all
/// weight-k assignments when intra-part triples carry constraints.
pub fn intra_part_residual(out: &ReductionOutput, a: &Assignment) -> Result<i64> {
    let (a_term, b_term) = intra_part_terms(out, a);
    Ok(evaluate_instance(&out.instance, a)?
        - out.coefficients.alpha * a_term
        - out.coefficients.beta * b_term)
}

/// Residual against the commonly quoted form
/// `α(m + ΣC(k_i,3) + Σ_{i<j}(C(k_i,2)k_j + C(k_j,2)k_i)) +
/// β(Σ_{i<j} k_i k_j (λ + 2n − k_i − k_j) + Σ C(k_i,2)(kn − 2))`,
/// which is not constant.
pub fn quoted_intra_part_residual(out: &ReductionOutput, a: &Assignment) -> Result<i64> {
    let p = out.profile(a);
    let (n, k, lambda) = (out.n as i64, out.k as i64, out.lambda as i64);
    let c2 = |x: usize| binom(x, 2) as i64;
    let mut a_term =
        out.induced_edges(a) as i64 + p.iter().map(|&x| binom(x, 3) as i64).sum::<i64>();
    let mut b_term = 0;
    for (i, j) in (0..p.len()).tuple_combinations() {
        a_term += c2(p[i]) * p[j] as i64 + c2(p[j]) * p[i] as i64;
        b_term += (p[i] * p[j]) as i64 * (lambda + 2 * n - p[i] as i64 - p[j] as i64);
    }
    b_term += p.iter().map(|&x| c2(x) * (k * n - 2)).sum::<i64>();
    Ok(evaluate_instance(&out.instance, a)?
        - out.coefficients.alpha * a_term
        - out.coefficients.beta * b_term)
}

/// Exhaustive comparison of k-partite and other weight-k assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalityReport {
    pub tau: i64,
    pub min_partite: i64,
    pub max_partite: i64,
    /// Absent only when every weight-k assignment is k-partite.
    pub max_non_partite: Option<i64>,
    pub case_tag: CaseTag,
}

impl OptimalityReport {
    /// Every non-k-partite assignment is strictly below every k-partite one.
    pub fn partite_dominates(&self) -> bool {
        self.max_non_partite.is_none_or(|v| v < self.min_partite)
    }

    /// Every non-k-partite assignment is strictly below `τ`.
    pub fn non_partite_below_tau(&self) -> bool {
        self.max_non_partite.is_none_or(|v| v < self.tau)
    }

    /// What `τ` relies on: dominance when `β ≠ 0`, staying below `τ` when
    /// `β = 0`.
    pub fn certifies(&self) -> bool {
        match self.case_tag {
            CaseTag::BetaZero => self.non_partite_below_tau(),
            _ => self.partite_dominates(),
        }
    }
}

pub fn check_optimality(out: &ReductionOutput) -> Result<OptimalityReport> {
    #[derive(Clone, Copy)]
    struct Acc {
        min_p: i64,
        max_p: i64,
        max_np: i64,
    }
    let identity = || Acc {
        min_p: i64::MAX,
        max_p: i64::MIN,
        max_np: i64::MIN,
    };
    let acc = fold_weight_k(
        &out.instance,
        out.k,
        identity,
        |mut acc, ones, value| {
            if out.is_k_partite(ones) {
                acc.min_p = acc.min_p.min(value);
                acc.max_p = acc.max_p.max(value);
            } else {
                acc.max_np = acc.max_np.max(value);
            }
            acc
        },
        |a, b| Acc {
            min_p: a.min_p.min(b.min_p),
            max_p: a.max_p.max(b.max_p),
            max_np: a.max_np.max(b.max_np),
        },
    )?;
    Ok(OptimalityReport {
        tau: out.tau,
        min_partite: acc.min_p,
        max_partite: acc.max_p,
        max_non_partite: (acc.max_np != i64::MIN).then_some(acc.max_np),
        case_tag: out.case_tag,
    })
}

/// [`build_reduction`] followed by [`check_optimality`]; refuses to hand
/// out `τ` when the check fails.
pub fn build_reduction_checked(
    g: &KPartiteHypergraph,
    phi: &BooleanFunction,
) -> Result<(ReductionOutput, OptimalityReport)> {
    let out = build_reduction(g, phi)?;
    let report = check_optimality(&out)?;
    if !report.certifies() {
        return Err(Error::precondition(format!(
            "tau = {} is not certified: best non-k-partite value {:?}, k-partite range [{}, {}]",
            report.tau, report.max_non_partite, report.min_partite, report.max_partite
        )));
    }
    Ok((out, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspDecision {
    pub clique: bool,
    pub value: i64,
    pub tau: i64,
    pub assignment: Assignment,
}

/// Decides k-clique through the CSP instance: YES iff the optimum is at
/// least `τ`.
pub fn decide_clique_via_csp(
    g: &KPartiteHypergraph,
    phi: &BooleanFunction,
    method: Method,
) -> Result<CspDecision> {
    let out = build_reduction(g, phi)?;
    let (value, assignment) = solve_maxcsp(&out.instance, out.k, method, Objective::Max)?;
    Ok(CspDecision {
        clique: value >= out.tau,
        value,
        tau: out.tau,
        assignment,
    })
}

/// Undirected graph on `0..n` without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::precondition(format!(
                    "invalid edge {u} {v} for n = {n}"
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::precondition("duplicate edge"));
            }
        }
        Ok(SimpleGraph { adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// The common degree, if all vertices share one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("graph n={}\n", self.vertex_count());
        for (u, v) in self.edges() {
            writeln!(out, "e {u} {v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let n = header
            .strip_prefix("graph n=")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::parse(hl, "expected header `graph n=<N>`"))?;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (line, text) in lines {
            let tokens: Vec<_> = text.split_whitespace().collect();
            let parsed = match tokens.as_slice() {
                ["e", u, v] => u.parse::<usize>().ok().zip(v.parse::<usize>().ok()),
                _ => None,
            };
            let (u, v) = parsed
                .ok_or_else(|| Error::parse(line, format!("expected `e <u> <v>`, got `{text}`")))?;
            if u == v || u >= n || v >= n {
                return Err(Error::parse(
                    line,
                    format!("invalid edge {u} {v} for n = {n}"),
                ));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::parse(line, "duplicate edge"));
            }
            edges.push((u, v));
        }
        Self::new(n, edges)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Id of the pair vertex `(x, y)` with `x ∈ V_i`, `y ∈ V_{i+1 mod 4}`.
pub fn c4_vertex_id(n: usize, i: usize, x: usize, y: usize) -> usize {
    i * n * n + x * n + y
}

/// The pair graph on `V_i × V_{i+1}`: `(x, y) ~ (x', y)` inside a block, and
/// `(x, y) ~ (y, z)` across consecutive blocks when `{x, y, z}` is an edge.
pub fn c4_reduce(g: &KPartiteHypergraph) -> Result<SimpleGraph> {
    if g.k() != 4 || g.h() != 3 {
        return Err(Error::precondition(format!(
            "need a 4-partite 3-uniform input, got k = {}, h = {}",
            g.k(),
            g.h()
        )));
    }
    if !g.is_balanced() {
        return Err(Error::precondition(
            "input parts must all have the same size",
        ));
    }
    let report = g.regularity(2)?;
    if report.lambda.is_none() {
        return Err(Error::precondition(format!(
            "input is not (2, lambda)-regular: {report}"
        )));
    }
    let n = g.part_sizes()[0];
    let mut edges = Vec::new();
    for i in 0..4 {
        let j = (i + 1) % 4;
        let l = (i + 2) % 4;
        for y in 0..n {
            for (x, x2) in (0..n).tuple_combinations() {
                edges.push((c4_vertex_id(n, i, x, y), c4_vertex_id(n, i, x2, y)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let key = [VertexRef::new(i, x), VertexRef::new(j, y)];
                let key = if i < j { key } else { [key[1], key[0]] };
                for z in g.completions_in_part(&key, l) {
                    edges.push((c4_vertex_id(n, i, x, y), c4_vertex_id(n, j, y, z.index)));
                }
            }
        }
    }
    SimpleGraph::new(4 * n * n, edges)
}

/// Four vertices `a, b, c, d` forming the cycle `a-b-c-d-a` with both
/// chords absent, or `None`.
pub fn detect_induced_c4(g: &SimpleGraph) -> Option<[usize; 4]> {
    let n = g.vertex_count();
    for a in 0..n {
        for c in a + 1..n {
            if g.is_adjacent(a, c) {
                continue;
            }
            let common: Vec<usize> = g
                .neighbours(a)
                .iter()
                .copied()
                .filter(|&v| g.is_adjacent(c, v))
                .collect();
            for (bi, &b) in common.iter().enumerate() {
                if let Some(&d) = common[bi + 1..].iter().find(|&&d| !g.is_adjacent(b, d)) {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}
