use proptest::prelude::*;

use mbbp::graph::{Biclique, BipartiteGraph};
use mbbp::io::{gen_random, parse_konect, read_native, write_native, RandomSpec};
use mbbp::mip;
use mbbp::oracle::{brute_force_max_balanced, vertex_bound};
use mbbp::solvers::{solve, Algorithm, Status};
use mbbp::ubp::{run_ubp, DEFAULT_THRESHOLD};

/// Random bipartite graph with at most `max_side` vertices per side.
fn graph(max_side: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_side, 1..=max_side)
        .prop_flat_map(|(nu, nv)| {
            (
                Just(nu),
                Just(nv),
                proptest::collection::vec(any::<bool>(), nu * nv),
            )
        })
        .prop_map(|(nu, nv, bits)| {
            let edges: Vec<(usize, usize)> = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / nv + 1, nu + i % nv + 1))
                .collect();
            BipartiteGraph::build(nu, nv, &edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn native_round_trip(g in graph(12)) {
        let mut text = Vec::new();
        write_native(&g, &mut text).unwrap();
        prop_assert_eq!(read_native(text.as_slice()).unwrap(), g);
    }

    #[test]
    fn konect_round_trip(g in graph(12)) {
        let text: String = g.edges().map(|(u, v)| format!("{u} {}\n", v - g.u_count())).collect();
        let parsed = parse_konect(text.as_bytes()).unwrap();
        prop_assert_eq!(parsed.edges().count(), g.edge_count());
        for (u, v) in g.edges() {
            prop_assert!(parsed.has_edge(u, v - g.u_count() + parsed.u_count()));
        }
    }

    #[test]
    fn edges_and_non_edges_partition_pairs(g in graph(12)) {
        let non = g.non_edges();
        prop_assert_eq!(non.len() + g.edge_count(), g.u_count() * g.v_count());
        prop_assert!(non.iter().all(|&(u, v)| !g.has_edge(u, v)));
    }

    #[test]
    fn bounds_are_sound(g in graph(8)) {
        let ub = run_ubp(&g, DEFAULT_THRESHOLD);
        for v in g.vertices() {
            prop_assert!(ub.get(v) >= vertex_bound(&g, v).unwrap());
            prop_assert!(ub.get(v) <= g.degree(v));
        }
    }

    #[test]
    fn bounds_commute_with_transpose(g in graph(12)) {
        let mapped = run_ubp(&g, DEFAULT_THRESHOLD).transposed(&g);
        let recomputed = run_ubp(&g.transposed(), DEFAULT_THRESHOLD);
        prop_assert_eq!(mapped.as_slice(), recomputed.as_slice());
    }

    #[test]
    fn solvers_match_oracle(g in graph(9)) {
        let (opt, _) = brute_force_max_balanced(&g).unwrap();
        for algo in Algorithm::ALL {
            let r = solve(&g, algo, None).unwrap();
            prop_assert_eq!(r.half_size, opt, "{}", algo);
            prop_assert_eq!(r.stats.status, Status::Optimal);
            prop_assert!(g.verify_balanced_biclique(&r.best).unwrap());
        }
    }

    #[test]
    fn lifted_inequalities_are_valid(g in graph(8)) {
        let bounds = run_ubp(&g, DEFAULT_THRESHOLD);
        let model = mip::build_tightened(&g, &bounds);
        prop_assert!(mip::check_inequalities(&g, &model).unwrap());
        prop_assert_eq!(
            mip::feasible_points(&model).unwrap(),
            mip::feasible_points(&mip::build_original(&g)).unwrap()
        );
    }

    #[test]
    fn random_graph_counts(n in 1usize..40, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = gen_random(&RandomSpec { n, p, seed });
        prop_assert_eq!(g.edge_count() + g.non_edges().len(), n * n);
    }

    #[test]
    fn verify_rejects_non_bicliques(g in graph(6), a in proptest::collection::vec(1usize..=6, 1..4)) {
        let a: Vec<usize> = a.into_iter().filter(|&x| x <= g.u_count()).collect();
        let b: Vec<usize> = g.v_vertices().take(a.len()).collect();
        let complete = a.iter().all(|&x| b.iter().all(|&y| g.has_edge(x, y)));
        let mut dedup = a.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() == a.len() && b.len() == a.len() {
            prop_assert_eq!(g.verify_balanced_biclique(&Biclique::new(a, b)).unwrap(), complete);
        }
    }
}
