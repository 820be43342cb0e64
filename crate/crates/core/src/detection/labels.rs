use alloc::vec;
use alloc::vec::Vec;

use super::components::ComponentId;
use super::graph::TrajectoryGraph;
use crate::calendar::Date;

/// Number of days on the longest chain through each node.
///
/// Every edge must go from a lower to a higher node index (true for graphs
/// whose nodes are sorted by date). Two passes in index order give the
/// longest chain ending at and starting from each node.
pub fn chain_lengths(n_nodes: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut incoming = vec![Vec::new(); n_nodes];
    let mut outgoing = vec![Vec::new(); n_nodes];
    for &(from, to) in edges {
        assert!(from < to, "edge {from}->{to} is not in topological order");
        incoming[to].push(from);
        outgoing[from].push(to);
    }
    let mut ending = vec![1usize; n_nodes];
    for v in 0..n_nodes {
        if let Some(best) = incoming[v].iter().map(|&u| ending[u]).max() {
            ending[v] = best + 1;
        }
    }
    let mut starting = vec![1usize; n_nodes];
    for v in (0..n_nodes).rev() {
        if let Some(best) = outgoing[v].iter().map(|&w| starting[w]).max() {
            starting[v] = best + 1;
        }
    }
    ending.iter().zip(&starting).map(|(e, s)| e + s - 1).collect()
}

/// Per-date blocking labels with the positive components of each date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingLabels {
    dates: Vec<Date>,
    footprints: Vec<Vec<ComponentId>>,
}

impl BlockingLabels {
    pub fn new(dates: Vec<Date>, footprints: Vec<Vec<ComponentId>>) -> Self {
        assert_eq!(dates.len(), footprints.len());
        BlockingLabels { dates, footprints }
    }

    pub fn dates(&self) -> &[Date] {
        &self.dates
    }

    /// A date is blocked iff it has at least one positive footprint.
    pub fn is_blocked(&self, index: usize) -> bool {
        !self.footprints[index].is_empty()
    }

    pub fn blocked(&self) -> Vec<bool> {
        self.footprints.iter().map(|f| !f.is_empty()).collect()
    }

    pub fn footprints(&self, index: usize) -> &[ComponentId] {
        &self.footprints[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Date, bool)> + '_ {
        self.dates.iter().zip(&self.footprints).map(|(d, f)| (*d, !f.is_empty()))
    }

    pub fn blocked_dates(&self) -> Vec<Date> {
        self.iter().filter(|(_, b)| *b).map(|(d, _)| d).collect()
    }

    pub fn n_blocked(&self) -> usize {
        self.footprints.iter().filter(|f| !f.is_empty()).count()
    }
}

/// Marks every component lying on a chain of at least `min_days`
/// consecutive days as positive. `min_days` of 0 behaves like 1.
pub fn label_blocking(graph: &TrajectoryGraph, min_days: usize) -> BlockingLabels {
    let chains = chain_lengths(graph.nodes().len(), &graph.edge_pairs());
    let footprints = (0..graph.dates().len())
        .map(|d| graph.day_nodes(d).filter(|&n| chains[n] >= min_days).map(|n| graph.nodes()[n].id).collect())
        .collect();
    BlockingLabels::new(graph.dates().to_vec(), footprints)
}

/// A longest chain through `node`, as node indices in date order.
pub fn longest_chain_through(graph: &TrajectoryGraph, node: usize) -> Vec<usize> {
    let n = graph.nodes().len();
    // Best predecessor / successor pointers from the same two passes as
    // `chain_lengths`.
    let mut ending = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for v in 0..=node {
        for &u in graph.predecessors(v) {
            if ending[u] + 1 > ending[v] {
                ending[v] = ending[u] + 1;
                prev[v] = u;
            }
        }
    }
    let mut starting = vec![1usize; n];
    let mut next = vec![usize::MAX; n];
    for v in (node..n).rev() {
        for &w in graph.successors(v) {
            if starting[w] + 1 > starting[v] {
                starting[v] = starting[w] + 1;
                next[v] = w;
            }
        }
    }
    let mut chain = Vec::new();
    let mut v = node;
    while v != usize::MAX {
        chain.push(v);
        v = prev[v];
    }
    chain.reverse();
    let mut v = next[node];
    while v != usize::MAX {
        chain.push(v);
        v = next[v];
    }
    chain
}
