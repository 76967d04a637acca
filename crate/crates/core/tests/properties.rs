use proptest::prelude::*;
use relfix::catalog::{
    check_g1, check_g2, make_catalog, make_corollary3, phi_tail_bound, ComparisonFunction, Grid,
    Params, COROLLARY3_IDS,
};
use relfix::fuzz::{attempt_rng, random_catalog, random_instance};
use relfix::metric::FiniteMetricSpace;
use relfix::relation::{is_tg_closed, Relation};
use relfix::solver::{iterate, FiniteSystem, MappingPair};
use relfix::verify::{verify, Rank};

fn metric_axioms(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    (0..n).all(|i| m[i][i] == 0.0)
        && (0..n).all(|i| (0..n).all(|j| i == j || (m[i][j] > 0.0 && m[i][j] == m[j][i])))
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| m[i][j] <= m[i][k] + m[k][j] + 1e-12)))
}

fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..6).prop_flat_map(|n| {
        prop::collection::vec(
            prop::collection::vec(prop::sample::select(vec![0.0, 1.0, 2.0, 3.0, 5.0]), n),
            n,
        )
    })
}

fn symmetric_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    matrix().prop_map(|mut m| {
        let n = m.len();
        for i in 0..n {
            m[i][i] = 0.0;
            for j in 0..i {
                m[i][j] = m[j][i];
            }
        }
        m
    })
}

fn corollary_params(id: u8) -> (Params, Option<ComparisonFunction>) {
    let p = |pairs: &[(&str, f64)]| -> Params {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    };
    match id {
        16 | 20 | 21 | 23 | 29 | 32 => (p(&[("k", 0.6)]), None),
        34 => (p(&[("k", 0.05)]), None),
        17 => (Params::new(), Some(ComparisonFunction::Rational { k: 0.8 })),
        18 | 19 | 27 => (p(&[("k", 0.3)]), None),
        22 => (p(&[("a1", 0.2), ("a2", 0.1), ("a3", 0.15)]), None),
        24 | 26 => (p(&[("k", 0.5), ("L", 1.5)]), None),
        25 => (
            p(&[("a1", 0.2), ("a2", 0.1), ("a3", 0.2), ("a4", 0.1)]),
            None,
        ),
        28 => (
            p(&[
                ("a1", 0.1),
                ("a2", 0.2),
                ("a3", 0.1),
                ("a4", 0.15),
                ("a5", 0.2),
            ]),
            None,
        ),
        30 => (p(&[("k", 0.4), ("a", 0.3), ("b", 0.1)]), None),
        31 => (
            p(&[("a1", 0.3), ("a2", 0.2), ("a3", 0.1), ("a4", 0.5)]),
            None,
        ),
        33 => (p(&[("a1", 0.4), ("a2", 0.2), ("a3", 0.3)]), None),
        _ => (p(&[("a1", 1.2), ("a2", 0.6)]), None),
    }
}

proptest! {
    #[test]
    fn validation_accepts_exactly_the_metric_matrices(m in prop_oneof![matrix(), symmetric_matrix()]) {
        let n = m.len();
        let labels = (0..n).map(|i| i.to_string()).collect();
        let space = FiniteMetricSpace::new(labels, m.clone(), vec![0]).unwrap();
        prop_assert_eq!(space.validate().is_ok(), metric_axioms(&m));
    }

    #[test]
    fn line_coordinates_always_validate(coords in prop::collection::btree_set(-1000i32..1000, 1..8)) {
        let coords: Vec<f64> = coords.into_iter().map(|c| c as f64 / 8.0).collect();
        let labels = (0..coords.len()).map(|i| i.to_string()).collect();
        let space = FiniteMetricSpace::from_coordinates(labels, &coords, vec![0]).unwrap();
        prop_assert!(space.validate().is_ok());
    }

    #[test]
    fn tail_bound_dominates_fifty_terms(
        phi in prop_oneof![
            (0.0..0.99f64).prop_map(|k| ComparisonFunction::Linear { k }),
            (0.0..0.99f64).prop_map(|k| ComparisonFunction::Rational { k }),
        ],
        t in 0.0..100.0f64,
        n in 0usize..30,
    ) {
        let bound = phi_tail_bound(&phi, t, n).unwrap();
        let sum: f64 = (n..=n + 50).map(|j| phi.iterate(t, j)).sum();
        prop_assert!(sum <= bound * (1.0 + 1e-12) + 1e-15, "{} > {}", sum, bound);
    }

    #[test]
    fn sampled_catalog_members_conform(seed in any::<u64>()) {
        let (id, params, phi) = random_catalog(&mut attempt_rng(seed, 0));
        let g = make_catalog(&id, &params, phi.as_ref()).unwrap();
        let grid = Grid::uniform(0.0, 10.0, 0.5);
        prop_assert!(check_g1(&g, &grid).holds, "{} {:?}", id, params);
        prop_assert!(check_g2(&g, &grid).holds, "{} {:?}", id, params);
    }

    #[test]
    fn symmetric_closure_and_restriction(
        n in 1usize..7,
        raw in prop::collection::vec((0usize..7, 0usize..7), 1..20),
        keep in prop::collection::vec(any::<bool>(), 7),
    ) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let r = Relation::new(n, edges.clone()).unwrap();
        let s = r.symmetric_closure();
        prop_assert!(s.is_symmetric());
        for &(a, b) in &edges {
            prop_assert!(r.contains(a, b) && s.contains(b, a) && r.comparable(b, a));
        }
        if let Ok(sub) = r.restricted(&keep[..n]) {
            for (a, b) in sub.edges() {
                prop_assert!(keep[a] && keep[b] && r.contains(a, b));
            }
        }
    }

    #[test]
    fn traces_are_relation_preserving_and_end_in_coincidences(seed in any::<u64>()) {
        let inst = random_instance(&mut attempt_rng(seed, 0), 3, 8);
        prop_assert!(is_tg_closed(&inst.relation, inst.pair.t(), inst.pair.g()));
        let report = verify(&inst).unwrap();
        prop_assume!(report.rank >= Rank::Coincidence);
        let system = FiniteSystem { space: &inst.space, pair: &inst.pair };
        let (trace, cert) = iterate(&system, report.start.unwrap(), 0.0, 64).unwrap();
        prop_assert!(inst.relation.is_preserving(&trace.gx));
        let (t, g) = (inst.pair.t(), inst.pair.g());
        prop_assert_eq!(t[cert.point], g[cert.point]);
        prop_assert!(report.coincidence.unwrap().points.contains(&cert.point));
    }

    #[test]
    fn iteration_follows_preimages(
        n in 2usize..8,
        t_raw in prop::collection::vec(0usize..8, 8),
        x0 in 0usize..8,
    ) {
        // g = identity turns the iteration into x_{n+1} = T x_n
        let t: Vec<usize> = t_raw[..n].iter().map(|&v| v % n).collect();
        let pair = MappingPair::new(n, t.clone(), (0..n).collect()).unwrap();
        let coords: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        let space = FiniteMetricSpace::from_coordinates(labels, &coords, vec![0]).unwrap();
        let system = FiniteSystem { space: &space, pair: &pair };
        let x0 = x0 % n;
        if let Ok((trace, _)) = iterate(&system, x0, 0.0, 3 * n) {
            for w in trace.x.windows(2) {
                prop_assert_eq!(w[1], t[w[0]]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn explicit_and_implicit_forms_agree(
        idx in 0usize..COROLLARY3_IDS.len(),
        d in prop::array::uniform6(prop_oneof![Just(0.0), 0.0..10.0f64]),
    ) {
        let id = COROLLARY3_IDS[idx];
        let (params, phi) = corollary_params(id);
        let c = make_corollary3(id, &params, phi.as_ref()).unwrap();
        let (lhs, rhs) = c.sides(&d);
        let g = c.implicit().value(&d);
        // both forms round differently near the boundary
        if (lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()) {
            prop_assert!(g.abs() <= 1e-6 * (1.0 + lhs.abs()), "({}) at {:?}: tie but G = {}", id, d, g);
        } else {
            prop_assert_eq!(lhs <= rhs, g <= 0.0, "({}) at {:?}", id, d);
        }
    }
}
