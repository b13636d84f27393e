//! Graph fixtures shared by the benchmarks.

use ccmr::graph::{complete_binary_tree, path, random, relabel_random};
use ccmr::Graph;

/// Named workloads at a size where one run takes milliseconds.
pub fn workloads(n: usize, seed: u64) -> Vec<(&'static str, Graph)> {
    let p = path(n).expect("n >= 1");
    let t = complete_binary_tree(n).expect("n >= 1");
    vec![
        ("path-identity", p.clone()),
        ("path-shuffled", relabel_random(&p, seed).0),
        ("tree-shuffled", relabel_random(&t, seed).0),
        (
            "random",
            random(n, 3.0 / n as f64, seed, false).expect("valid probability"),
        ),
    ]
}
