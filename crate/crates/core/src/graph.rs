use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// For each of `n` vertices, whether it lies on a cycle of the given edges.
pub(crate) fn on_cycle(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<bool> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    let mut res = vec![false; n];
    for (u, v) in edges {
        if u == v {
            res[u] = true;
        }
        g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    for comp in tarjan_scc(&g) {
        if comp.len() > 1 {
            for x in comp {
                res[x.index()] = true;
            }
        }
    }
    res
}
