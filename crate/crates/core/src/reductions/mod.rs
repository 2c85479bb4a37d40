//! Generators for the two hardness constructions, with witness partitions
//! and structural checks.
//!
//! * [`clique_path`] turns a regular graph and a clique size into a
//!   unit-weight path instance (or the union of paths it is built from).
//! * [`partition_tree`] turns a multiset of integers into a three-color
//!   tree whose answer is that of the balanced Partition problem.

pub mod clique_path;
pub mod partition_tree;

pub use clique_path::{check_clique_path, clique_to_path, clique_witness, CliqueGadgets, CliquePath, CliquePathParams};
pub use partition_tree::{
    check_partition_tree, partition_to_tree, partition_witness, PartitionTree, PartitionTreeParams, TreeGadget,
};

use crate::error::{Error, Result};

/// A simple undirected graph on `0..n`, the input of the clique construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SourceGraph {
    /// Rejects out-of-range endpoints, self-loops and repeated edges.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge {a}-{b} leaves 0..{n}")));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop at {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::invalid(format!("repeated edge {a}-{b}")));
            }
        }
        Ok(SourceGraph { n, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        SourceGraph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        SourceGraph {
            n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let d = *deg.first()?;
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }
}
