use std::collections::{BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use proptest::prelude::*;

use sensconn::format::{load_graph, serialize_graph};
use sensconn::oracle::{conformance, connected_via_component};
use sensconn::{
    connected_components, induced_augmented, pairs, FullyDynamic, Graph, IncrementalIndex, OracleKind,
    StatePartition, UpdateBatch,
};

fn reachable(g: &Graph, active: &FixedBitSet, u: usize, v: usize) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([u]);
    seen[u] = true;
    while let Some(x) = queue.pop_front() {
        if x == v {
            return true;
        }
        for &w in g.neighbors(x) {
            if active.contains(w) && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// (graph, off-mask) with n in 1..=max_n.
fn instance(max_n: usize) -> impl Strategy<Value = (Graph, StatePartition)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), pairs(n) as usize),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(edge_bits, on_bits)| {
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .zip(edge_bits)
                    .filter_map(|(e, keep)| keep.then_some(e))
                    .collect();
                let mut mask = FixedBitSet::with_capacity(n);
                for (v, on) in on_bits.into_iter().enumerate() {
                    mask.set(v, on);
                }
                (Graph::from_edges(n, &edges).unwrap(), StatePartition::from_mask(mask))
            })
    })
}

/// Instance plus a legal batch chosen by two selector masks.
fn instance_with_batch(max_n: usize) -> impl Strategy<Value = (Graph, StatePartition, UpdateBatch)> {
    (instance(max_n), any::<u64>(), any::<u64>(), 0usize..=6).prop_map(|((g, p), dsel, isel, size)| {
        let d: Vec<_> = p
            .on_vertices()
            .iter()
            .copied()
            .filter(|v| dsel >> (v % 64) & 1 == 1)
            .take(size / 2)
            .collect();
        let i: Vec<_> = p
            .off_vertices()
            .iter()
            .copied()
            .filter(|v| isel >> (v % 64) & 1 == 1)
            .take(size - d.len())
            .collect();
        let b = UpdateBatch::new(d, i).unwrap();
        (g, p, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn components_match_reachability((g, p) in instance(24)) {
        let lab = connected_components(&g, p.on_mask());
        for u in p.on_vertices().iter().copied() {
            for v in p.on_vertices().iter().copied() {
                prop_assert_eq!(lab.same_component(u, v), reachable(&g, p.on_mask(), u, v));
            }
        }
        for v in p.off_vertices() {
            prop_assert_eq!(lab.label(*v), None);
        }
    }

    #[test]
    fn induced_edges_are_filtered_edges((g, p) in instance(16), pick in any::<u32>()) {
        let extra: Vec<_> = p.off_vertices().iter().copied().filter(|v| pick >> v & 1 == 1).collect();
        let keep = |v: usize| p.is_on(v) || extra.contains(&v);
        let (h, remap) = induced_augmented(&g, &p, &extra).unwrap();
        let got: BTreeSet<_> = h
            .edges()
            .map(|(a, b)| {
                let (x, y) = (remap.global(a), remap.global(b));
                (x.min(y), x.max(y))
            })
            .collect();
        let want: BTreeSet<_> = g.edges().filter(|&(u, v)| keep(u) && keep(v)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn graph_file_round_trip((g, p) in instance(20)) {
        let text = serialize_graph(&g, &p);
        let (g2, p2) = load_graph(&text).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(&p2, &p);
        prop_assert_eq!(serialize_graph(&g2, &p2), text);
    }

    #[test]
    fn incremental_array_invariants((g, p) in instance(20)) {
        let idx = IncrementalIndex::build(&g, &p);
        let lab = idx.labeling();
        for c in 0..lab.k() {
            for j in 0..p.n_off() {
                let u = p.off_vertex(j);
                let adjacent = g.neighbors(u).iter().any(|&w| lab.label(w) == Some(c));
                prop_assert_eq!(idx.comp_adj(c).contains(j), adjacent);
                prop_assert_eq!(idx.comp_part(j).contains(c), adjacent);
            }
        }
        for i in 0..p.n_off() {
            for j in 0..p.n_off() {
                let want = i != j
                    && connected_via_component(&g, lab, p.off_vertex(i), p.off_vertex(j)).unwrap();
                prop_assert_eq!(idx.off_part(i).contains(j), want);
            }
        }
    }

    #[test]
    fn supergraph_edges_follow_predicate((g, p, b) in instance_with_batch(16)) {
        let idx = IncrementalIndex::build(&g, &p);
        let act = UpdateBatch::activate_only(b.activate().to_vec()).unwrap();
        let sg = idx.update(&act).unwrap();
        prop_assert_eq!(sg.pair_probes(), pairs(act.activate().len()));
        for (a, &u) in act.activate().iter().enumerate() {
            for &v in &act.activate()[a + 1..] {
                let want = connected_via_component(&g, idx.labeling(), u, v).unwrap();
                prop_assert_eq!(sg.edges().contains(&(u, v)), want);
            }
        }
    }

    #[test]
    fn fully_dynamic_matches_bruteforce_for_both_oracles((g, p, b) in instance_with_batch(12)) {
        let active = b.active_after(&p);
        let d = b.activate().len() as u64;
        let mut streams = Vec::new();
        for kind in OracleKind::ALL {
            let mut fd = FullyDynamic::build(&g, &p, kind);
            prop_assert_eq!(fd.build_stats().oracles as u64, 1 + p.n_off() as u64 + pairs(p.n_off()));
            let id = fd.update(&b).unwrap();
            let stats = fd.session().unwrap().stats();
            prop_assert_eq!(stats.delete_calls, 1 + d + pairs(d as usize));
            prop_assert_eq!(stats.pair_queries, pairs(d as usize));
            let mut answers = Vec::new();
            for u in active.ones() {
                for v in active.ones() {
                    let (ans, qs) = fd.query_with_stats(u, v).unwrap();
                    prop_assert_eq!(ans, reachable(&g, &active, u, v), "{} {} {}", kind, u, v);
                    prop_assert!(qs.oracle_calls <= 1 + 2 * d);
                    answers.push(ans);
                }
            }
            prop_assert_eq!(fd.rollback(id).unwrap() as u64, stats.delete_calls);
            streams.push(answers);
        }
        prop_assert_eq!(&streams[0], &streams[1]);
    }

    #[test]
    fn rollback_restores_fresh_answers((g, p, b) in instance_with_batch(10)) {
        let fresh = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        let mut used = FullyDynamic::build(&g, &p, OracleKind::Rebuild);
        let id = used.update(&b).unwrap();
        let _ = used.query(0, 0);
        used.rollback(id).unwrap();
        for (a, o) in fresh.oracles().zip(used.oracles()) {
            prop_assert_eq!(a.phase(), o.phase());
            prop_assert_eq!(a.costs(), o.costs());
            for u in 0..a.vertex_count() {
                for v in 0..a.vertex_count() {
                    prop_assert_eq!(a.query(u, v).unwrap(), o.query(u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn oracles_conform((g, _) in instance(14), pick in any::<u32>()) {
        let deleted: Vec<_> = (0..g.n()).filter(|v| pick >> v & 1 == 1).collect();
        for kind in OracleKind::ALL {
            let r = conformance::check_oracle(|a| kind.build(a), &g, &deleted);
            prop_assert!(r.passed(), "{}: {:?}", kind, r.first_failure);
        }
    }
}
