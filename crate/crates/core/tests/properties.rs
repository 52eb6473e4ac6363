mod common;

use common::*;
use gp_core::constructions as c;
use gp_core::gp::find_between_triple;
use gp_core::invariants::{component_count, is_cluster_set};
use gp_core::{
    alpha, characterization_check, distances, eta, gp_auto, gp_diam2, gp_exact, is_general_position, omega, rho,
    Budget, Distance, Graph, Status, VertexSet,
};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn subset(n: usize, mask: u32) -> VertexSet {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

fn to_u32(d: Distance) -> u32 {
    d.finite().unwrap_or(INF)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bfs_distances_match_matrix_powers(g in graph(8)) {
        let dm = distances(&g);
        let want = matrix_power_distances(&g);
        let floyd = floyd(&g);
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(to_u32(dm.get(u, v)), want[u][v]);
                prop_assert_eq!(want[u][v], floyd[u][v]);
            }
        }
    }

    #[test]
    fn omega_is_alpha_of_complement(g in graph(8)) {
        let b = Budget::unlimited();
        prop_assert_eq!(omega(&g, b).value, alpha(&g.complement(), b).value);
    }

    #[test]
    fn invariant_orderings(g in graph(8)) {
        let b = Budget::unlimited();
        let (om, al, et, rh) = (omega(&g, b).value, alpha(&g, b).value, eta(&g, b).value, rho(&g, b).value);
        prop_assert!(rh >= om.max(al));
        prop_assert!(rh >= et);
        prop_assert_eq!(rh, om.max(et));
    }

    #[test]
    fn invariants_match_enumeration(g in graph(9)) {
        let b = Budget::unlimited();
        let results = [omega(&g, b), alpha(&g, b), eta(&g, b), rho(&g, b)];
        let want = [oracle_omega(&g), oracle_alpha(&g), oracle_eta(&g), oracle_rho(&g)];
        for (r, w) in results.iter().zip(want) {
            prop_assert_eq!(r.status, Status::Exact);
            prop_assert_eq!(r.value, w, "{}", r.which.name());
            prop_assert_eq!(r.witness.len(), r.value);
        }
    }

    #[test]
    fn witnesses_pass_structural_checks(g in graph(9)) {
        let b = Budget::unlimited();
        let w = omega(&g, b).witness;
        prop_assert!(g.is_clique(w.as_slice()));
        let w = alpha(&g, b).witness;
        prop_assert!(g.is_independent(w.as_slice()));
        let w = rho(&g, b).witness;
        prop_assert!(is_cluster_set(&g, &w));
        let r = eta(&g, b);
        prop_assert!(is_cluster_set(&g, &r.witness));
        if r.value >= 2 {
            prop_assert!(component_count(&g, &r.witness) >= 2);
        }
        let r = gp_exact(&g, b);
        prop_assert!(is_general_position(&distances(&g), &r.witness).unwrap());
    }

    #[test]
    fn gp_exact_matches_enumeration(g in graph(10)) {
        let r = gp_exact(&g, Budget::unlimited());
        prop_assert_eq!(r.status, Status::Exact);
        prop_assert_eq!(r.value, oracle_gp(&g));
        prop_assert_eq!(r.witness.len(), r.value);
    }

    #[test]
    fn general_position_test_matches_definition(g in graph(7), mask in any::<u32>()) {
        let mask = mask & ((1u32 << g.n()) - 1);
        let s = subset(g.n(), mask);
        let dm = distances(&g);
        let want = is_gp_mask(&floyd(&g), mask);
        prop_assert_eq!(is_general_position(&dm, &s).unwrap(), want);
        prop_assert_eq!(find_between_triple(&dm, &s).is_none(), want);
    }

    #[test]
    fn characterization_matches_definition(g in graph(7)) {
        prop_assume!(g.n() > 0 && g.is_connected());
        let dm = distances(&g);
        for mask in 0u32..(1 << g.n()) {
            let s = subset(g.n(), mask);
            let by_def = is_general_position(&dm, &s).unwrap();
            prop_assert_eq!(characterization_check(&g, &dm, &s).unwrap().is_valid(), by_def, "{:?}", s);
        }
    }

    #[test]
    fn diameter_two_route_agrees(g in graph(9)) {
        prop_assume!(gp_core::diameter(&g) == Distance::Finite(2));
        let r = gp_diam2(&g, Budget::unlimited()).unwrap();
        prop_assert_eq!(r.value, gp_exact(&g, Budget::unlimited()).value);
        let cc = r.cross_check.unwrap();
        prop_assert!(cc.agrees);
        prop_assert_eq!(gp_auto(&g, Budget::unlimited()).value, r.value);
    }

    #[test]
    fn rho_is_a_largest_cluster_subgraph(g in graph(8)) {
        // pairwise independent cliques: components of G[S] are cliques and
        // vertices of different components are at distance >= 2
        let adj = adjacency_masks(&g);
        let d = floyd(&g);
        let best = (0u32..(1 << g.n()))
            .filter(|&m| {
                let s: Vec<usize> = members(m).collect();
                is_cluster_mask(&adj, m)
                    && s.iter().all(|&a| s.iter().all(|&b| a == b || adj[a] & (1 << b) != 0 || d[a][b] >= 2))
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0);
        prop_assert_eq!(rho(&g, Budget::unlimited()).value, best);
    }

    #[test]
    fn cartesian_distances_add(a in graph(5), b in graph(5)) {
        prop_assume!(a.n() > 0 && b.n() > 0);
        let p = c::cartesian_product(&a, &b);
        let (da, db, dp) = (distances(&a), distances(&b), distances(&p));
        for (x1, y1) in (0..a.n()).flat_map(|x| (0..b.n()).map(move |y| (x, y))) {
            for (x2, y2) in (0..a.n()).flat_map(|x| (0..b.n()).map(move |y| (x, y))) {
                prop_assert_eq!(
                    dp.get(x1 * b.n() + y1, x2 * b.n() + y2),
                    da.get(x1, x2) + db.get(y1, y2)
                );
            }
        }
    }

    #[test]
    fn graph6_round_trip(g in graph(70)) {
        let text = gp_core::io::to_graph6(&g);
        prop_assert_eq!(gp_core::io::from_graph6(&text).unwrap(), g);
    }
}

#[test]
fn budget_exhaustion_reports_a_lower_bound() {
    let g = c::kneser(9, 3).unwrap();
    let r = gp_exact(&g, Budget::nodes(50));
    assert_eq!(r.status, Status::LowerBound);
    assert!(is_general_position(&distances(&g), &r.witness).unwrap());
    let r = rho(&g, Budget::nodes(50));
    assert_eq!(r.status, Status::LowerBound);
    assert!(is_cluster_set(&g, &r.witness));
}

#[test]
fn searches_are_deterministic() {
    let g = c::line_graph(&c::complete(6).unwrap());
    let b = Budget::unlimited();
    assert_eq!(gp_exact(&g, b).witness, gp_exact(&g, b).witness);
    assert_eq!(rho(&g, b).witness, rho(&g, b).witness);
    assert_eq!(eta(&g, b).witness, eta(&g, b).witness);
}
