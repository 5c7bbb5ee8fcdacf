use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::Rng;

use sqfactor::corpus::{lemma_graph, random_two_edge_connected, rng, theorem_graph};
use sqfactor::factor::{build_factor, lemma_factor};
use sqfactor::structure::{classify, decompose, order_blocks, strip};
use sqfactor::verify::{exists_factor, verify_certificate, verify_factor, OracleBudget};
use sqfactor::{parse_edge_list, Edge, Graph, GraphJson, Origin};

/// Arbitrary simple graph on `n` vertices, possibly disconnected.
fn arbitrary(seed: u64, n: usize, p: f64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn connected(seed: u64, n: usize) -> Graph {
    let mut r = rng(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    for _ in 0..r.gen_range(0..=n) {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v && !edges.contains(&(u.min(v), u.max(v))) && !edges.contains(&(u.max(v), u.min(v))) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn bfs(g: &Graph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn subset_search(g: &Graph, s: usize) -> bool {
    let sq: Vec<Edge> = g.square().edges().collect();
    (0u64..1 << sq.len()).any(|mask| {
        let tagged: Vec<(Edge, Origin)> = (0..sq.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (sq[i], g.origin_of(sq[i])))
            .collect();
        verify_factor(g, &tagged, s).pass
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn square_matches_bfs(seed in any::<u64>(), n in 1usize..=9, p in 0.1f64..0.7) {
        let g = arbitrary(seed, n, p);
        let sq = g.square();
        for u in 0..n {
            let d = bfs(&g, u);
            for (v, dv) in d.iter().enumerate() {
                let expected = u != v && matches!(dv, Some(1 | 2));
                prop_assert_eq!(sq.has_edge(u, v), expected);
            }
        }
    }

    #[test]
    fn two_edge_connected_is_essential(seed in any::<u64>()) {
        let g = random_two_edge_connected(&mut rng(seed), 20, 8);
        prop_assert!(g.is_two_edge_connected());
        prop_assert!(g.is_essentially_two_edge_connected().unwrap());
    }

    #[test]
    fn edge_list_and_json_round_trip(seed in any::<u64>(), n in 2usize..=12) {
        let g = connected(seed, n);
        // Parsing renumbers vertices by first appearance; labels survive.
        let parsed = parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(parsed.labelled_edges(), g.labelled_edges());
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_graph().unwrap().labelled_edges(), g.labelled_edges());
    }

    #[test]
    fn blocks_partition_edges(seed in any::<u64>(), n in 2usize..=14) {
        let g = connected(seed, n);
        let bct = decompose(&g).unwrap();
        let mut seen = BTreeSet::new();
        for b in &bct.blocks {
            for &e in &b.edges {
                prop_assert!(seen.insert(e), "edge {:?} in two blocks", e);
            }
            let (sub, _) = b.to_graph(&g).unwrap();
            prop_assert!(b.is_bridge() || sub.is_two_connected());
        }
        prop_assert_eq!(seen, g.edges().collect::<BTreeSet<_>>());
        // A vertex is a cut vertex exactly when it lies in two blocks.
        for v in 0..n {
            let cut = bct.vertex_blocks[v].len() > 1;
            prop_assert_eq!(cut, bct.cut_vertices.contains(&v));
        }
    }

    #[test]
    fn ordering_invariants(seed in any::<u64>()) {
        let g = lemma_graph(&mut rng(seed), 30, 10);
        let bct = decompose(&g).unwrap();
        let ord = order_blocks(&g, &bct, None).unwrap();
        prop_assert!(!bct.blocks[ord.root_block].is_bridge());
        prop_assert_eq!(ord.sequence.iter().copied().collect::<BTreeSet<_>>().len(), bct.blocks.len());
        let pos: BTreeMap<usize, usize> = ord.sequence.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        for w in ord.sequence.windows(2) {
            prop_assert!(ord.depth[w[0]] <= ord.depth[w[1]]);
        }
        for (&v, kids) in &ord.children {
            let at: Vec<usize> = kids.iter().map(|k| pos[k]).collect();
            prop_assert!(at.windows(2).all(|w| w[1] == w[0] + 1), "children of {} not contiguous", v);
            let kinds: Vec<bool> = kids.iter().map(|&k| bct.blocks[k].is_bridge()).collect();
            prop_assert!(kinds.windows(2).all(|w| w[0] || !w[1]), "bridge after cyclic at {}", v);
            for &k in kids {
                prop_assert_eq!(ord.parent_cut_vertex[k], Some(v));
                prop_assert!(bct.blocks[k].contains(v));
            }
        }
    }

    #[test]
    fn stripped_order_ends_in_cyclic_block(seed in any::<u64>()) {
        let g = lemma_graph(&mut rng(seed), 30, 10);
        let cls = classify(&g, &decompose(&g).unwrap());
        let leaves: Vec<usize> = cls.leaf_sets.values().flatten().copied().collect();
        let core = strip(&g, &leaves).unwrap().graph;
        prop_assume!(core.m() > 0);
        let bct = decompose(&core).unwrap();
        let ord = order_blocks(&core, &bct, None).unwrap();
        prop_assert!(!bct.blocks[*ord.sequence.last().unwrap()].is_bridge());
    }

    #[test]
    fn classification_is_consistent(seed in any::<u64>()) {
        let g = theorem_graph(&mut rng(seed), 30, 10);
        let cls = classify(&g, &decompose(&g).unwrap());
        for &l in &cls.leaves {
            prop_assert_eq!(g.degree(l), 1);
        }
        prop_assert!(cls.bad_leaves.is_subset(&cls.leaves));
        for &x in &cls.bad_leaves {
            let y = g.neighbors(x)[0];
            prop_assert!(cls.trivial_cut_vertices.contains(&y));
            prop_assert_eq!(g.neighbors(y).iter().filter(|&&w| g.is_leaf(w)).count(), 1);
        }
        prop_assert!(cls.trivial_cut_vertices.is_disjoint(&cls.nontrivial_cut_vertices));
        let bridges = g.bridges();
        prop_assert_eq!(
            cls.trivial_bridges.len() + cls.nontrivial_bridges.len(),
            bridges.len()
        );
        prop_assert!(cls.bad_bridges.is_subset(&cls.trivial_bridges));
        prop_assert!(cls.nontrivial_bridges.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_matches_subset_search(seed in any::<u64>(), n in 2usize..=6, s in 1usize..=2) {
        let g = connected(seed, n);
        prop_assume!(g.square().m() <= 15);
        let fast = exists_factor(&g, s, OracleBudget::default()).unwrap();
        prop_assert_eq!(fast.is_yes(), subset_search(&g, s));
        prop_assert!(fast.is_yes() || fast.is_no());
    }

    #[test]
    fn builders_agree_with_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = if r.gen_bool(0.5) { lemma_graph(&mut r, 14, 6) } else { theorem_graph(&mut r, 14, 6) };
        let cert = build_factor(&g).unwrap();
        prop_assert!(verify_factor(&g, &cert.tagged_edges(), 2).pass);
        prop_assert!(exists_factor(&g, 2, OracleBudget::default()).unwrap().is_yes());
    }

    #[test]
    fn lemma_certificates_verify_from_any_anchor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = lemma_graph(&mut r, 24, 8);
        let u = r.gen_range(0..g.n());
        match lemma_factor(&g, Some(u)) {
            Ok(cert) => {
                let report = verify_certificate(&g, &cert);
                prop_assert!(report.pass, "{:?}", report.witnesses);
            }
            Err(e) => prop_assert!(matches!(e, sqfactor::Error::Precondition { .. }), "{}", e),
        }
    }
}
