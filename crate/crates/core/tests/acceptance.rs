//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use hyperreg::boolean::{characteristic_polynomial, BooleanFunction};
use hyperreg::csp::{
    brute_force_optimum, cross_pair_sum, evaluate_instance, weak_compositions, within_pair_sum,
    Assignment, CspInstance, Objective,
};
use hyperreg::hypergraph::{
    canonical_constant_sets, generate_sum_regular, random_constant_sets, ConstantSets,
    KPartiteHypergraph, PlainHypergraph, VertexRef, ZeroPolicy,
};
use hyperreg::product::signed_product;
use hyperreg::reduction::{
    build_reduction, c4_reduce, check_optimality, detect_induced_c4, edges_only_residual,
    intra_part_residual, Construction, ReductionOutput,
};
use hyperreg::solver::{solve_maxcsp, Method};
use hyperreg::template::{build_template, verify_template, SignedHypergraph};
use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TEMPLATE_LIMIT: Duration = Duration::from_secs(10);
const PRODUCT_LIMIT: Duration = Duration::from_secs(60);
const HARDNESS_RUN_LIMIT: Duration = Duration::from_secs(60);
const POLYNOMIAL_LIMIT: Duration = Duration::from_secs(1);
const SOLVER_LIMIT: Duration = Duration::from_secs(120);
const C4_LIMIT: Duration = Duration::from_secs(60);
const COEFFICIENT_BOUND: i64 = 8;
const RESIDUAL_SAMPLES: usize = 1000;

/// `(h, k, λ = k - h + 1, clique count)`.
const TEMPLATES: [(usize, usize, usize, u64); 3] = [(2, 3, 2, 8), (2, 4, 3, 64), (3, 4, 2, 81)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &str, start: Instant, outcome: Outcome) -> bool {
    println!(
        "criterion {id:>2} {name}: {} ({}; {:.2}s)",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail,
        start.elapsed().as_secs_f64()
    );
    outcome.pass
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let value = f();
    (value, start.elapsed())
}

/// Counts k-subsets of `0..n` all of whose h-subsets are edges.
fn naive_plain_cliques(g: &PlainHypergraph, k: usize) -> u64 {
    (0..g.vertex_count())
        .combinations(k)
        .filter(|c| {
            c.iter()
                .copied()
                .combinations(g.h())
                .all(|e| g.edges().contains(&e))
        })
        .count() as u64
}

/// Transversal search by direct enumeration.
fn naive_has_clique(g: &KPartiteHypergraph) -> bool {
    g.part_sizes()
        .iter()
        .map(|&n| 0..n)
        .multi_cartesian_product()
        .any(|x| {
            (0..g.k()).combinations(g.h()).all(|parts| {
                let tuple: Vec<_> = parts.iter().map(|&p| VertexRef::new(p, x[p])).collect();
                g.contains_edge(&tuple)
            })
        })
}

fn templates() -> Vec<SignedHypergraph> {
    TEMPLATES
        .iter()
        .map(|&(h, k, _, _)| build_template(h, k).unwrap())
        .collect()
}

fn criterion_1() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(h, k, lambda, _) in &TEMPLATES {
        let ((t, r), elapsed) = timed(|| {
            let t = build_template(h, k).unwrap();
            let r = verify_template(&t).unwrap();
            (t, r)
        });
        let ok = r.is_template() && r.p1_lambda == Some(lambda) && elapsed < TEMPLATE_LIMIT;
        pass &= ok;
        parts.push(format!(
            "T({h},{k}) {} vertices lambda={:?} {:.2}s",
            t.base().vertex_count(),
            r.p1_lambda,
            elapsed.as_secs_f64()
        ));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_2(ts: &[SignedHypergraph]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (t, &(h, k, _, expected)) in ts.iter().zip(&TEMPLATES) {
        let mut count = 0u64;
        let mut diagonal = true;
        t.base().for_each_k_clique(|c| {
            count += 1;
            diagonal &= c.iter().all(|v| v.index == c[0].index);
            ControlFlow::Continue(())
        });
        pass &= count == expected && diagonal;
        parts.push(format!("T({h},{k}) {count} cliques, diagonal={diagonal}"));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

/// The seeded graphs used by criteria 3 and 4, with their template index.
fn product_inputs() -> Vec<(usize, PlainHypergraph)> {
    let mut inputs = Vec::new();
    for seed in 0..10u64 {
        let vertices = 3 + (seed as usize % 4);
        inputs.push((0, PlainHypergraph::random(vertices, 2, 0.6, seed).unwrap()));
    }
    for seed in 0..10u64 {
        inputs.push((2, PlainHypergraph::random(2, 3, 0.5, 100 + seed).unwrap()));
    }
    inputs
}

fn criterion_3_and_4(ts: &[SignedHypergraph]) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut identity_ok = true;
    let mut regular_ok = true;
    let mut nonzero = 0;
    let mut regularity_notes = BTreeSet::new();
    for (ti, g) in product_inputs() {
        let t = &ts[ti];
        let (h, k, _, c_t) = TEMPLATES[ti];
        let (gp, _) = signed_product(&g, t).unwrap();
        let c_g = naive_plain_cliques(&g, k);
        let factorial: u64 = (1..=k as u64).product();
        let count = gp.count_k_cliques();
        identity_ok &= count == factorial * c_g * c_t;
        if count > 0 {
            nonzero += 1;
        }
        for s in 1..h {
            let r = gp.regularity(s).unwrap();
            regular_ok &= r.is_regular();
            if s == h - 1 {
                regular_ok &= r.lambda == Some((k - h + 1) * g.vertex_count());
            }
            regularity_notes.insert(format!("h={h} s={s}"));
        }
    }
    let elapsed = start.elapsed();
    (
        Outcome {
            pass: identity_ok && elapsed < PRODUCT_LIMIT,
            detail: format!(
                "20 products, {nonzero} with cliques, total {:.2}s",
                elapsed.as_secs_f64()
            ),
        },
        Outcome {
            pass: regular_ok,
            detail: format!("checked {}", regularity_notes.into_iter().join(", ")),
        },
    )
}

fn one_mod_three_sets() -> ConstantSets {
    (0..4)
        .combinations(3)
        .map(|p| ([p[0], p[1], p[2]], [1, 4, 7, 10].into_iter().collect()))
        .collect()
}

/// The YES instance (zero transversal, t = 6) and the NO instance
/// (every set {1, 4, 7, 10}), both with n = 12.
fn hardness_inputs() -> Vec<(&'static str, KPartiteHypergraph)> {
    vec![
        (
            "yes",
            generate_sum_regular(4, 12, &canonical_constant_sets(4, 6, ZeroPolicy::Contain))
                .unwrap(),
        ),
        (
            "no",
            generate_sum_regular(4, 12, &one_mod_three_sets()).unwrap(),
        ),
    ]
}

fn hardness_functions() -> Vec<(&'static str, BooleanFunction)> {
    vec![
        ("MAJ3", BooleanFunction::maj3()),
        ("OR3", BooleanFunction::or(3)),
        ("AND3", BooleanFunction::and(3)),
    ]
}

fn criterion_5(reductions: &[(String, bool, ReductionOutput)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, has_clique, out) in reductions {
        let ((value, _), elapsed) =
            timed(|| brute_force_optimum(&out.instance, 4, Objective::Max).unwrap());
        let ok = (value >= out.tau) == *has_clique && elapsed < HARDNESS_RUN_LIMIT;
        pass &= ok;
        parts.push(format!(
            "{label} value={value} tau={} {:.1}s",
            out.tau,
            elapsed.as_secs_f64()
        ));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_6(reductions: &[(String, bool, ReductionOutput)]) -> Outcome {
    let mut pass = true;
    let mut seen = BTreeSet::new();
    let mut parts = Vec::new();
    for (i, (label, _, out)) in reductions.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + i as u64);
        let n_vars = out.instance.n_vars();
        let residual = |a: &Assignment| match out.construction {
            Construction::EdgesOnly => edges_only_residual(out, a).unwrap(),
            Construction::WithIntraPart => intra_part_residual(out, a).unwrap(),
        };
        let values: BTreeSet<i64> = (0..RESIDUAL_SAMPLES)
            .map(|_| residual(&Assignment::new(sample(&mut rng, n_vars, 4).into_vec())))
            .collect();
        pass &= values.len() == 1;
        seen.insert(format!("{:?}", out.construction));
        parts.push(format!("{label} {:?} c={:?}", out.construction, values));
    }
    pass &= seen.len() == 2;
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_7(reductions: &[(String, bool, ReductionOutput)]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, _, out) in reductions {
        let r = check_optimality(out).unwrap();
        pass &= r.certifies();
        parts.push(format!(
            "{label} {} max_non_partite={:?} partite=[{},{}] dominates={}",
            r.case_tag,
            r.max_non_partite,
            r.min_partite,
            r.max_partite,
            r.partite_dominates()
        ));
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_8() -> Outcome {
    let mut distinct = BTreeSet::new();
    let mut round_trip = true;
    let mut bounded = true;
    for code in 0u32..256 {
        let table: Vec<bool> = (0..8).map(|t| code >> t & 1 == 1).collect();
        let f = BooleanFunction::from_table(3, table.clone()).unwrap();
        let p = characteristic_polynomial(&f);
        let back: Vec<bool> = (0..8)
            .map(|t| {
                let v = p.evaluate(&[t & 1 == 1, t & 2 == 2, t & 4 == 4]);
                assert!(v == 0 || v == 1);
                v == 1
            })
            .collect();
        round_trip &= back == table;
        bounded &= p.terms().all(|(_, c)| c.abs() <= COEFFICIENT_BOUND);
        distinct.insert(p.terms().map(|(m, c)| (m.to_vec(), c)).collect::<Vec<_>>());
    }
    Outcome {
        pass: round_trip && bounded && distinct.len() == 256,
        detail: format!(
            "round_trip={round_trip} bounded={bounded} distinct={}",
            distinct.len()
        ),
    }
}

fn random_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    fns: &[(&str, BooleanFunction)],
) -> CspInstance {
    let mut phi = CspInstance::new(n);
    for (name, f) in fns {
        phi.register(name, f.clone()).unwrap();
    }
    for _ in 0..m {
        let id = rng.gen_range(0..fns.len());
        let vars = sample(rng, n, fns[id].1.arity()).into_vec();
        phi.add_constraint(id, vars).unwrap();
    }
    phi
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let degree_two = [
        ("xor2", BooleanFunction::xor(2)),
        ("nae3", BooleanFunction::nae3()),
    ];
    let degree_three = [
        ("and3", BooleanFunction::and(3)),
        ("maj3", BooleanFunction::maj3()),
    ];
    let mut mismatches = 0;
    let mut runs = 0;
    for i in 0..70 {
        let (fns, n, k) = if i < 50 {
            let k = [3, 6][i % 2];
            (&degree_two[..], rng.gen_range(k.max(6)..=12), k)
        } else {
            let k = [4, 8][i % 2];
            (&degree_three[..], rng.gen_range(k.max(6)..=10), k)
        };
        let m = rng.gen_range(4..=16);
        let phi = random_instance(&mut rng, n, m, fns);
        for objective in [Objective::Max, Objective::Min] {
            let (expected, _) = brute_force_optimum(&phi, k, objective).unwrap();
            let (value, a) = solve_maxcsp(&phi, k, Method::Reduction, objective).unwrap();
            runs += 1;
            if value != expected || a.weight() != k || evaluate_instance(&phi, &a).unwrap() != value
            {
                mismatches += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: mismatches == 0 && elapsed < SOLVER_LIMIT,
        detail: format!("70 instances, {runs} solves, {mismatches} mismatches"),
    }
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let fns = [
        ("and3", BooleanFunction::and(3)),
        ("or2", BooleanFunction::or(2)),
        ("xor2", BooleanFunction::xor(2)),
        ("maj3", BooleanFunction::maj3()),
        ("id", BooleanFunction::identity()),
    ];
    let mut failures = 0;
    for _ in 0..20 {
        let n = rng.gen_range(6..=12);
        let k = rng.gen_range(1..=n);
        let m = rng.gen_range(3..=15);
        let phi = random_instance(&mut rng, n, m, &fns);
        let (min, _) = brute_force_optimum(&phi, k, Objective::Min).unwrap();
        let (max_neg, _) = brute_force_optimum(&phi.negated(), k, Objective::Max).unwrap();
        if min != phi.m() as i64 - max_neg {
            failures += 1;
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("20 instances, {failures} failures"),
    }
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut yes = 0;
    for seed in 0..20u64 {
        let n = 3 + (seed as usize % 3);
        let t = 1 + (seed as usize / 3) % (n - 1);
        let sets = random_constant_sets(4, n, t, ZeroPolicy::Free, 1100 + seed).unwrap();
        let g = generate_sum_regular(4, n, &sets).unwrap();
        let lambda = g.regularity(2).unwrap().lambda.unwrap();
        let per_third_part = lambda / 2;
        let gp = c4_reduce(&g).unwrap();
        let clique = g.find_k_clique().is_some();
        yes += usize::from(clique);
        let ok = gp.vertex_count() == 4 * n * n
            && gp.regular_degree() == Some(n - 1 + 2 * per_third_part)
            && detect_induced_c4(&gp).is_some() == clique
            && naive_has_clique(&g) == clique;
        failures += usize::from(!ok);
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures == 0 && elapsed < C4_LIMIT,
        detail: format!("20 instances, {yes} with cliques, {failures} failures"),
    }
}

fn criterion_12() -> Outcome {
    let mut checked = 0;
    let mut pass = true;
    for k in 1..=8 {
        let pairs = k * (k - 1) / 2;
        for c in weak_compositions(k, k) {
            let mut cross = 0;
            for i in 0..k {
                for j in i + 1..k {
                    cross += c[i] * c[j];
                }
            }
            let within: usize = c.iter().map(|&x| x * x.saturating_sub(1) / 2).sum();
            let all_ones = c.iter().all(|&x| x == 1);
            pass &= cross == cross_pair_sum(&c) && within == within_pair_sum(&c);
            pass &= cross + within == pairs;
            pass &= cross <= pairs && ((cross == pairs) == all_ones);
            checked += 1;
        }
    }
    Outcome {
        pass,
        detail: format!("{checked} compositions"),
    }
}

fn main() {
    let mut all = true;
    let ts = templates();

    let start = Instant::now();
    all &= report(1, "template certification", start, criterion_1());
    let start = Instant::now();
    all &= report(2, "template clique counts", start, criterion_2(&ts));

    let start = Instant::now();
    let (c3, c4) = criterion_3_and_4(&ts);
    all &= report(3, "product counting identity", start, c3);
    all &= report(4, "product regularity", start, c4);

    let start = Instant::now();
    let mut reductions = Vec::new();
    for (label, g) in hardness_inputs() {
        let has_clique = naive_has_clique(&g);
        assert_eq!(has_clique, g.find_k_clique().is_some());
        for (name, phi) in hardness_functions() {
            reductions.push((
                format!("{name}/{label}"),
                has_clique,
                build_reduction(&g, &phi).unwrap(),
            ));
        }
    }
    all &= report(5, "end-to-end threshold", start, criterion_5(&reductions));
    let start = Instant::now();
    all &= report(6, "residual constancy", start, criterion_6(&reductions));
    let start = Instant::now();
    all &= report(7, "k-partite optimality", start, criterion_7(&reductions));

    let start = Instant::now();
    let (c8, elapsed) = timed(criterion_8);
    let c8 = Outcome {
        pass: c8.pass && elapsed < POLYNOMIAL_LIMIT,
        ..c8
    };
    all &= report(8, "polynomial layer", start, c8);
    let start = Instant::now();
    all &= report(9, "solver oracle equivalence", start, criterion_9());
    let start = Instant::now();
    all &= report(10, "min/max duality", start, criterion_10());
    let start = Instant::now();
    all &= report(11, "c4 reduction", start, criterion_11());
    let start = Instant::now();
    all &= report(12, "composition identities", start, criterion_12());

    println!(
        "acceptance: {}",
        if all { "all criteria pass" } else { "FAILURES" }
    );
    if !all {
        std::process::exit(1);
    }
}
