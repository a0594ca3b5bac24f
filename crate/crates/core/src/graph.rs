//! Dependency ordering over equation variables.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Strongly connected components of `deps` (edge `i → j` when `j ∈ deps[i]`),
/// ordered so that every component comes after the components it depends on.
/// Ties go to the component with the smallest member; members are sorted.
pub fn ordered_sccs(deps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = deps.len();
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for (i, ds) in deps.iter().enumerate() {
        for &j in ds {
            g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
        }
    }
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    sccs.sort_by_key(|c| c[0]);

    let mut comp = vec![0; n];
    for (ci, c) in sccs.iter().enumerate() {
        for &v in c {
            comp[v] = ci;
        }
    }
    // pending[c] counts distinct components c still waits for.
    let mut waits: Vec<Vec<usize>> = vec![Vec::new(); sccs.len()];
    let mut pending = vec![0usize; sccs.len()];
    for (ci, c) in sccs.iter().enumerate() {
        let mut targets: Vec<usize> = c
            .iter()
            .flat_map(|&v| deps[v].iter().map(|&d| comp[d]))
            .filter(|&d| d != ci)
            .collect();
        targets.sort_unstable();
        targets.dedup();
        pending[ci] = targets.len();
        for d in targets {
            waits[d].push(ci);
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..sccs.len()).filter(|&c| pending[c] == 0).map(Reverse).collect();
    let mut out = Vec::with_capacity(sccs.len());
    while let Some(Reverse(c)) = ready.pop() {
        out.push(sccs[c].clone());
        for &w in &waits[c] {
            pending[w] -= 1;
            if pending[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    out
}
