use hyperreg::boolean::{characteristic_polynomial, BooleanFunction};
use hyperreg::csp::{
    brute_force_optimum, evaluate_instance, parse_csp, write_csp, CspInstance, Objective,
};
use hyperreg::hgr::{parse_hgr, write_hgr};
use hyperreg::hypergraph::{
    generate_sum_regular, random_constant_sets, random_hypergraph, KPartiteHypergraph, ZeroPolicy,
};
use hyperreg::solver::{solve_maxcsp, Method};
use itertools::Itertools;
use proptest::prelude::*;

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn small_hypergraph() -> impl Strategy<Value = KPartiteHypergraph> {
    (
        3usize..=5,
        2usize..=3,
        1usize..=3,
        0.0f64..=1.0,
        any::<u64>(),
    )
        .prop_filter("h < k", |(k, h, ..)| h < k)
        .prop_map(|(k, h, n, p, seed)| random_hypergraph(k, h, n, p, seed).unwrap())
}

fn sum_regular() -> impl Strategy<Value = KPartiteHypergraph> {
    (4usize..=5, 3usize..=6, any::<u64>()).prop_flat_map(|(k, n, seed)| {
        (1..n).prop_map(move |t| {
            let sets = random_constant_sets(k, n, t, ZeroPolicy::Free, seed).unwrap();
            generate_sum_regular(k, n, &sets).unwrap()
        })
    })
}

fn csp_instance() -> impl Strategy<Value = (CspInstance, usize)> {
    (
        4usize..=9,
        prop::collection::vec((0usize..4, any::<u64>()), 1..12),
    )
        .prop_map(|(n, picks)| {
            let fns = [
                BooleanFunction::and(3),
                BooleanFunction::xor(2),
                BooleanFunction::maj3(),
                BooleanFunction::or(2),
            ];
            let mut phi = CspInstance::new(n);
            for (i, f) in fns.iter().enumerate() {
                phi.register(&format!("f{i}"), f.clone()).unwrap();
            }
            for (id, bits) in picks {
                let vars = (0..n)
                    .combinations(fns[id].arity())
                    .nth(bits as usize % binomial(n, fns[id].arity()));
                phi.add_constraint(id, vars.unwrap()).unwrap();
            }
            (phi, n / 2)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(g in small_hypergraph()) {
        let c = g.complement_partite();
        let total: usize = (0..g.k())
            .combinations(g.h())
            .map(|parts| parts.iter().map(|&p| g.part_sizes()[p]).product::<usize>())
            .sum();
        prop_assert_eq!(c.edge_count() + g.edge_count(), total);
        prop_assert_eq!(c.complement_partite(), g);
    }

    #[test]
    fn incidences_double_count_edges(g in small_hypergraph(), s in 1usize..=2) {
        prop_assume!(s < g.h());
        let incidences: usize = g.incidence_counts(s).values().sum();
        prop_assert_eq!(incidences, g.edge_count() * binomial(g.h(), s));
    }

    #[test]
    fn pair_regularity_descends_to_vertices(g in sum_regular()) {
        let n = g.part_sizes()[0];
        let l2 = g.regularity(2).unwrap().lambda.unwrap();
        let l1 = g.regularity(1).unwrap().lambda.unwrap();
        prop_assert_eq!(l1 * 2, l2 * (g.k() - 1) * n);
    }

    #[test]
    fn hgr_round_trip(g in small_hypergraph()) {
        let back = parse_hgr(&write_hgr(&g)).unwrap().into_unsigned().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn polynomial_agrees_with_truth_table(arity in 1usize..=5, bits in any::<u32>()) {
        let table: Vec<bool> = (0..1usize << arity).map(|t| bits >> t & 1 == 1).collect();
        let f = BooleanFunction::from_table(arity, table.clone()).unwrap();
        let p = characteristic_polynomial(&f);
        for (t, &expected) in table.iter().enumerate() {
            let point: Vec<bool> = (0..arity).map(|j| t >> j & 1 == 1).collect();
            prop_assert_eq!(p.evaluate(&point), i64::from(expected));
        }
        prop_assert_eq!(BooleanFunction::from_tt(&f.to_tt()).unwrap(), f);
    }

    #[test]
    fn csp_round_trip_and_duality((phi, k) in csp_instance()) {
        let doc = parse_csp(&write_csp(&phi, k)).unwrap();
        prop_assert_eq!(&doc.instance, &phi);
        prop_assert_eq!(doc.k, k);
        let (min, _) = brute_force_optimum(&phi, k, Objective::Min).unwrap();
        let (max_neg, _) = brute_force_optimum(&phi.negated(), k, Objective::Max).unwrap();
        prop_assert_eq!(min, phi.m() as i64 - max_neg);
    }

    #[test]
    fn reduction_solver_matches_brute_force((phi, k) in csp_instance()) {
        let d = phi.degree();
        prop_assume!(d <= 2 && k >= 3 || d == 3 && k >= 4);
        for objective in [Objective::Max, Objective::Min] {
            let (brute, _) = brute_force_optimum(&phi, k, objective).unwrap();
            let (value, a) = solve_maxcsp(&phi, k, Method::Reduction, objective).unwrap();
            prop_assert_eq!(value, brute);
            prop_assert_eq!(a.weight(), k);
            prop_assert_eq!(evaluate_instance(&phi, &a).unwrap(), value);
        }
    }
}
