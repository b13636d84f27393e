use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::graph::{path, random};
use crate::oracle::{centralized_slc, connected_subsets, core_by_definition, cores_within, union_find_components};

fn set(ids: &[NodeId]) -> NodeSet {
    NodeSet::from_unsorted(ids.iter().copied())
}

/// 0 -0.1- 1 -0.9- 2 -0.2- 3
fn bridge() -> Graph {
    Graph::from_weighted_edges(4, [(0, 1, 0.1), (1, 2, 0.9), (2, 3, 0.2)]).unwrap()
}

/// Grows a random connected subset of `g` from `start`, one neighbour at a time.
fn growth_chain(g: &Graph, start: NodeId, rng: &mut ChaCha8Rng) -> Vec<NodeSet> {
    let mut cur = NodeSet::singleton(start);
    let mut chain = vec![cur.clone()];
    loop {
        let frontier: Vec<NodeId> = cur
            .iter()
            .flat_map(|u| g.neighbors(u).iter().copied())
            .filter(|v| !cur.contains(*v))
            .collect();
        if frontier.is_empty() {
            return chain;
        }
        cur.insert(frontier[rng.gen_range(0..frontier.len())]);
        chain.push(cur.clone());
    }
}

#[test]
fn predicates_parse_and_print() {
    for s in ["dist:0.35", "size:100", "never"] {
        assert_eq!(s.parse::<StopPredicate>().unwrap().to_string(), s);
    }
    for s in ["dist:-1", "dist:nan", "size:0", "size:x", "foo:1", "dist"] {
        assert!(
            matches!(s.parse::<StopPredicate>(), Err(SlcError::BadPredicate(_))),
            "{s}"
        );
    }
}

/// Clusters containing `start` as single-linkage merges grow it.
fn merge_chain(g: &Graph, start: NodeId) -> Vec<NodeSet> {
    let mut edges: Vec<(f64, NodeId, NodeId)> = g.weighted_edges().map(|(u, v, w)| (w, u, v)).collect();
    edges.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut ds = crate::oracle::DisjointSet::new(g.node_count());
    let mut chain = vec![NodeSet::singleton(start)];
    for (_, u, v) in edges {
        if ds.union(u as usize, v as usize).is_some() {
            let r = ds.find(start as usize);
            let c: NodeSet = g.nodes().filter(|&x| ds.find(x as usize) == r).collect();
            if c.len() > chain.last().unwrap().len() {
                chain.push(c);
            }
        }
    }
    chain
}

#[test]
fn predicates_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pairs = 0;
    let mut seed = 0;
    while pairs < 1000 {
        let g = random(30, 0.15, seed, true).unwrap();
        seed += 1;
        let start = rng.gen_range(0..30);
        let grown = growth_chain(&g, start, &mut rng);
        let merged = merge_chain(&g, start);
        for _ in 0..20 {
            let theta: f64 = rng.gen();
            let size = StopPredicate::Size(rng.gen_range(1..10));
            let i = rng.gen_range(0..grown.len());
            let j = rng.gen_range(i..grown.len());
            assert!(grown[i].is_subset(&grown[j]));
            if size.stop_local(&g, &grown[i]).unwrap() {
                assert!(size.stop_local(&g, &grown[j]).unwrap());
            }
            let i = rng.gen_range(0..merged.len());
            let j = rng.gen_range(i..merged.len());
            assert!(merged[i].is_subset(&merged[j]));
            for p in [StopPredicate::Distance(theta), size, StopPredicate::Never] {
                if p.stop_local(&g, &merged[i]).unwrap() {
                    assert!(
                        p.stop_local(&g, &merged[j]).unwrap(),
                        "{p} {:?} {:?}",
                        merged[i],
                        merged[j]
                    );
                }
            }
            pairs += 1;
        }
    }
}

#[test]
fn stop_local_examples() {
    let g = bridge();
    let d = StopPredicate::Distance(0.5);
    assert!(!d.stop_local(&g, &set(&[0, 1])).unwrap());
    assert!(d.stop_local(&g, &NodeSet::range(0, 3)).unwrap());
    assert!(!d.stop_local(&g, &set(&[2])).unwrap());
    assert!(StopPredicate::Size(2).stop_local(&g, &set(&[0, 1, 2])).unwrap());
    assert!(!StopPredicate::Size(1).stop_local(&g, &set(&[3])).unwrap());
    assert_eq!(d.stop_local(&g, &set(&[0, 3])), Err(SlcError::Disconnected));
}

#[test]
fn core_examples() {
    let g = bridge();
    assert_eq!(is_core(&g, &set(&[2])), Ok(true));
    assert_eq!(is_core(&g, &set(&[0, 1])), Ok(true));
    assert_eq!(is_core(&g, &NodeSet::range(0, 3)), Ok(true));
    // 1 prefers 0 over 2
    assert_eq!(is_core(&g, &set(&[1, 2])), Ok(false));
    assert_eq!(is_core(&g, &set(&[0, 2])), Err(SlcError::Disconnected));
    assert_eq!(is_core(&path(2).unwrap(), &set(&[0, 1])), Err(SlcError::Unweighted));
}

#[test]
fn core_tree_shape() {
    for seed in 0..30 {
        let g = random(25, 0.2, seed, true).unwrap();
        for comp in union_find_components(&g).into_iter().filter(|c| c.len() > 1) {
            let t = CoreTree::build(&g, &comp).unwrap();
            assert_eq!(t.mst().len() + 1, comp.len());
            let max = t.max_edge().unwrap();
            assert!(t.mst().iter().all(|e| e.w <= max.w));
            let (l, r) = t.split().unwrap();
            assert_eq!(l.union(&r), comp);
            assert!(!l.intersects(&r));
            // the halves meet only through the removed edge
            let crossing: Vec<_> = t.mst().iter().filter(|e| l.contains(e.u) != l.contains(e.v)).collect();
            assert_eq!(crossing.len(), 1);
            assert_eq!(crossing[0].w, max.w);
        }
    }
}

#[test]
fn is_core_matches_definition() {
    for seed in 0..25 {
        let g = random(9, 0.4, seed, true).unwrap();
        for s in connected_subsets(&g, &NodeSet::range(0, 8)) {
            assert_eq!(is_core(&g, &s), core_by_definition(&g, &s), "seed {seed} {s:?}");
        }
    }
}

#[test]
fn mcd_examples() {
    let g = bridge();
    assert_eq!(mcd(&g, &NodeSet::range(0, 3)).unwrap(), vec![NodeSet::range(0, 3)]);
    assert_eq!(mcd(&g, &set(&[1, 2])).unwrap(), vec![set(&[1]), set(&[2])]);
    // a star whose leaves all prefer the centre: only singletons survive
    let star = Graph::from_weighted_edges(4, [(0, 1, 0.3), (0, 2, 0.2), (0, 3, 0.1), (1, 2, 0.05)]).unwrap();
    assert_eq!(mcd(&star, &set(&[0, 3])).unwrap(), vec![set(&[0, 3])]);
}

#[test]
fn mcd_is_maximal_core_partition() {
    for seed in 0..20 {
        let g = random(10, 0.35, seed, true).unwrap();
        for comp in union_find_components(&g) {
            let cores = cores_within(&g, &comp).unwrap();
            let found = mcd(&g, &comp).unwrap();
            let total: usize = found.iter().map(NodeSet::len).sum();
            assert_eq!(total, comp.len());
            assert_eq!(NodeSet::union_all(found.iter()), comp);
            for c in &found {
                assert!(cores.contains(c), "seed {seed}: {c:?} is not a core");
            }
            for c in &cores {
                assert!(found.iter().any(|f| c.is_subset(f)), "seed {seed}: {c:?} not covered");
            }
        }
    }
}

#[test]
fn stop_round_examples() {
    let g = bridge();
    let singles: Vec<NodeSet> = (0..4).map(NodeSet::singleton).collect();
    assert_eq!(stop_round(&g, &singles, &StopPredicate::Never), Ok(false));
    assert_eq!(stop_round(&g, &singles, &StopPredicate::Size(1)), Ok(true));
    assert_eq!(stop_round(&g, &singles, &StopPredicate::Distance(0.5)), Ok(false));
    let pairs = vec![set(&[0, 1]), set(&[0, 1]), set(&[2, 3]), set(&[2, 3])];
    assert_eq!(stop_round(&g, &pairs, &StopPredicate::Distance(0.5)), Ok(true));
    assert_eq!(stop_round(&g, &pairs, &StopPredicate::Distance(0.95)), Ok(false));
    assert_eq!(stop_round(&g, &pairs, &StopPredicate::Size(2)), Ok(true));
    assert_eq!(stop_round(&g, &pairs, &StopPredicate::Size(3)), Ok(false));
    // uncovered nodes count as singletons
    assert_eq!(
        stop_round(&g, &[set(&[0, 1])], &StopPredicate::Distance(0.5)),
        Ok(false)
    );
    assert_eq!(
        stop_round(&g, &[set(&[7])], &StopPredicate::Size(1)),
        Err(SlcError::UnknownNode(7))
    );
    // an isolated node has no next merge
    let h = Graph::from_weighted_edges(3, [(0, 1, 0.4)]).unwrap();
    let with_isolated = vec![set(&[0, 1]), set(&[0, 1]), set(&[2])];
    assert_eq!(stop_round(&h, &with_isolated, &StopPredicate::Distance(0.3)), Ok(true));
    assert_eq!(stop_round(&h, &with_isolated, &StopPredicate::Distance(0.5)), Ok(true));
    assert_eq!(
        stop_round(&h, &[set(&[0]), set(&[1]), set(&[2])], &StopPredicate::Distance(0.5)),
        Ok(false)
    );
}

/// Nodes of `within` reachable from `start` over edges lighter than `limit`.
fn lighter_closure(g: &Graph, within: &NodeSet, start: NodeId, limit: f64) -> usize {
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for (&y, &w) in g.neighbors(x).iter().zip(g.neighbor_weights(x).unwrap()) {
            if w < limit && within.contains(y) && !seen.contains(&y) {
                seen.push(y);
                stack.push(y);
            }
        }
    }
    seen.len()
}

#[test]
fn partner_sizes_match_lighter_closures() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    for seed in 0..40 {
        let g = random(30, 0.15, seed, true).unwrap();
        for comp in union_find_components(&g) {
            for piece in growth_chain(&g, comp.min().unwrap(), &mut rng) {
                for core in CoreTree::build(&g, &piece).unwrap().core_summaries() {
                    let want = match core.minout {
                        Some(e) if piece.contains(e.v) => lighter_closure(&g, &piece, e.v, e.w),
                        _ => 1,
                    };
                    assert_eq!(core.partner, want, "seed {seed} piece {piece:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn split_repair_examples() {
    let g = bridge();
    let all = NodeSet::range(0, 3);
    assert_eq!(
        split_repair(&g, &all, &StopPredicate::Distance(1.0)).unwrap(),
        vec![all.clone()]
    );
    assert_eq!(
        split_repair(&g, &all, &StopPredicate::Distance(0.5)).unwrap(),
        vec![set(&[0, 1]), set(&[2, 3])]
    );
    assert_eq!(
        split_repair(&g, &all, &StopPredicate::Distance(0.15)).unwrap(),
        vec![set(&[0, 1]), set(&[2]), set(&[3])]
    );
    assert_eq!(split_repair(&g, &all, &StopPredicate::Size(1)).unwrap().len(), 4);
}

#[test]
fn split_repair_matches_oracle_on_components() {
    for seed in 0..40 {
        let n = 10 + seed as usize;
        let g = random(n, 3.0 / n as f64, seed, true).unwrap();
        for p in [
            StopPredicate::Distance(0.3),
            StopPredicate::Distance(0.6),
            StopPredicate::Size(3),
        ] {
            let want = centralized_slc(&g, &p).unwrap();
            for comp in union_find_components(&g) {
                let mut got = split_repair(&g, &comp, &p).unwrap();
                got.sort_by_key(NodeSet::min);
                let inside: Vec<NodeSet> = want.iter().filter(|c| c.is_subset(&comp)).cloned().collect();
                assert_eq!(got, inside, "seed {seed} {p}");
            }
        }
    }
}

#[test]
fn run_slc_extremes() {
    let g = random(40, 0.1, 3, true).unwrap();
    for scheme in [SlcScheme::HashToAll, SlcScheme::HashToMin] {
        let all = run_slc(&g, scheme, &StopPredicate::Distance(1.0), 100).unwrap();
        assert_eq!(all.clustering.clusters(), union_find_components(&g));
        assert!(all.complete);
        let none = run_slc(&g, scheme, &StopPredicate::Distance(0.0), 100).unwrap();
        assert_eq!(none.clustering, Clustering::singletons(40));
        assert!(none.stopped);
    }
    assert!(matches!(
        run_slc(&path(3).unwrap(), SlcScheme::HashToAll, &StopPredicate::Never, 10),
        Err(SlcError::Unweighted)
    ));
    assert!(matches!(
        run_slc(&g, SlcScheme::HashToAll, &StopPredicate::Never, 0),
        Err(SlcError::Engine(crate::error::EngineError::ZeroRounds))
    ));
}

#[test]
fn run_slc_reports_exhausted_rounds() {
    let mut edges = Vec::new();
    for i in 0..63u32 {
        edges.push((i, i + 1, 0.01 + i as f64 / 100.0));
    }
    let g = Graph::from_weighted_edges(64, edges).unwrap();
    let r = run_slc(&g, SlcScheme::HashToAll, &StopPredicate::Never, 2).unwrap();
    assert!(!r.complete);
    assert_eq!(r.rounds, 2);
    assert!(r.clustering.len() > 1);
}

#[test]
fn run_slc_matches_oracle() {
    let preds = [
        StopPredicate::Distance(0.2),
        StopPredicate::Distance(0.5),
        StopPredicate::Distance(0.8),
        StopPredicate::Size(2),
        StopPredicate::Size(5),
        StopPredicate::Never,
    ];
    for seed in 0..30 {
        let n = 5 + (seed as usize * 13) % 60;
        let g = random(n, 2.5 / n as f64, seed, true).unwrap();
        for p in &preds {
            let want = centralized_slc(&g, p).unwrap();
            for scheme in [SlcScheme::HashToAll, SlcScheme::HashToMin] {
                let r = run_slc(&g, scheme, p, 200).unwrap();
                assert!(r.complete);
                assert_eq!(r.clustering.clusters(), want, "seed {seed} {scheme} {p}");
            }
        }
    }
}

#[test]
fn clustering_validation() {
    assert!(Clustering::new(vec![set(&[0, 1]), set(&[2])], 3).is_ok());
    assert_eq!(
        Clustering::new(vec![set(&[0, 1]), set(&[1, 2])], 3),
        Err(SlcError::NotAPartition)
    );
    assert_eq!(Clustering::new(vec![set(&[0, 1])], 3), Err(SlcError::NotAPartition));
    assert_eq!(Clustering::new(vec![set(&[0, 5])], 3), Err(SlcError::UnknownNode(5)));
    assert_eq!(Clustering::new(vec![NodeSet::new()], 0), Err(SlcError::EmptyCluster));
    let c = Clustering::new(vec![set(&[2]), set(&[0, 1])], 3).unwrap();
    assert_eq!(c.clusters()[0], set(&[0, 1]));
    assert_eq!(c.largest(), 2);
}

#[test]
fn schemes_parse() {
    assert_eq!("hash-to-all".parse::<SlcScheme>(), Ok(SlcScheme::HashToAll));
    assert_eq!("hash-to-min".parse::<SlcScheme>(), Ok(SlcScheme::HashToMin));
    assert!(matches!(
        "hash-min".parse::<SlcScheme>(),
        Err(SlcError::UnsupportedScheme(_))
    ));
}
