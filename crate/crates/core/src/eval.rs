//! Partitions, per-block color tallies and the solution evaluator.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{ColorId, Instance, VertexId};

/// A list of disjoint, non-empty vertex blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    pub blocks: Vec<Vec<VertexId>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<VertexId>>) -> Self {
        Partition { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks sorted internally and ordered by their smallest vertex.
    pub fn canonical(&self) -> Partition {
        let mut blocks: Vec<Vec<VertexId>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Partition { blocks }
    }
}

/// Outcome of the plurality rule on one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Plurality {
    /// Largest per-color weight, taken over all colors.
    pub max: u64,
    /// Number of colors attaining `max`.
    pub winners: usize,
    /// The unique color attaining `max`, if there is exactly one.
    pub sole: Option<ColorId>,
}

/// Applies the plurality rule to the colors present in a block. `entries`
/// holds each present color once; every other color of the palette has
/// weight zero and therefore only ties when `max` is zero.
pub(crate) fn plurality<I>(entries: I, num_colors: usize) -> Plurality
where
    I: IntoIterator<Item = (ColorId, u64)>,
{
    let mut max = 0u64;
    let mut winners = 0usize;
    let mut first = None;
    let mut present = 0usize;
    for (c, w) in entries {
        present += 1;
        if first.is_none() || w > max {
            max = w;
            winners = 1;
            first = Some(c);
        } else if w == max {
            winners += 1;
        }
    }
    if max == 0 {
        winners += num_colors.saturating_sub(present);
    }
    Plurality {
        max,
        winners,
        sole: if winners == 1 { first } else { None },
    }
}

/// Per-color weight sums of one block and the colors it is colored as.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTally {
    /// Colors present in the block with their weight sums, sorted by color.
    /// Colors not listed have weight zero.
    present: Vec<(ColorId, u64)>,
    /// Every color whose weight is maximal, over the whole palette.
    pub colored_as: Vec<ColorId>,
    /// Set iff exactly one color attains the maximum.
    pub uniquely: Option<ColorId>,
}

impl BlockTally {
    pub fn weight(&self, c: ColorId) -> u64 {
        self.present
            .binary_search_by_key(&c, |&(c, _)| c)
            .map_or(0, |i| self.present[i].1)
    }

    /// Non-zero entries of the weight-by-color map.
    pub fn nonzero_weights(&self) -> impl Iterator<Item = (ColorId, u64)> + '_ {
        self.present.iter().copied().filter(|&(_, w)| w > 0)
    }

    pub fn total(&self) -> u64 {
        self.present.iter().map(|&(_, w)| w).sum()
    }

    pub fn is_colored(&self, c: ColorId) -> bool {
        self.colored_as.binary_search(&c).is_ok()
    }
}

/// Tallies `block`. Fails on unknown vertices or an empty block.
pub fn block_tally(inst: &Instance, block: &[VertexId]) -> Result<BlockTally> {
    if block.is_empty() {
        return Err(Error::invalid("empty block"));
    }
    let mut pairs = Vec::with_capacity(block.len());
    for &v in block {
        if v >= inst.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        pairs.push((inst.color_of[v], inst.weights[v]));
    }
    pairs.sort_unstable();
    let mut present: Vec<(ColorId, u64)> = Vec::new();
    for (c, w) in pairs {
        match present.last_mut() {
            Some(last) if last.0 == c => last.1 += w,
            _ => present.push((c, w)),
        }
    }
    let rule = plurality(present.iter().copied(), inst.color_count());
    let colored_as = if rule.max == 0 {
        (0..inst.color_count()).map(ColorId).collect()
    } else {
        present
            .iter()
            .filter(|&&(_, w)| w == rule.max)
            .map(|&(c, _)| c)
            .collect()
    };
    Ok(BlockTally {
        present,
        colored_as,
        uniquely: rule.sole,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionViolation {
    EmptyBlock { block: usize },
    UnknownVertex { vertex: VertexId },
    RepeatedVertex { vertex: VertexId },
    MissingVertex { vertex: VertexId },
    WrongBlockCount { expected: usize, found: usize },
    DisconnectedBlock { block: usize },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::EmptyBlock { block } => {
                write!(f, "not a partition: block {block} is empty")
            }
            PartitionViolation::UnknownVertex { vertex } => {
                write!(f, "not a partition: unknown vertex {vertex}")
            }
            PartitionViolation::RepeatedVertex { vertex } => {
                write!(f, "not a partition: vertex {vertex} appears twice")
            }
            PartitionViolation::MissingVertex { vertex } => {
                write!(f, "not a partition: vertex {vertex} is not covered")
            }
            PartitionViolation::WrongBlockCount { expected, found } => {
                write!(f, "wrong block count: expected {expected}, found {found}")
            }
            PartitionViolation::DisconnectedBlock { block } => {
                write!(f, "block {block} does not induce a connected subgraph")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub valid: bool,
    pub violation: Option<PartitionViolation>,
    pub uniquely_p_count: usize,
    /// Number of blocks colored as each color, indexed by `ColorId`.
    pub colored_count: Vec<usize>,
    pub is_solution: bool,
}

/// Decides whether `part` is a solution of `inst`.
///
/// Counts are filled in whenever `part` is a partition of the vertex set,
/// even if it has the wrong number of blocks or a disconnected block.
pub fn evaluate_partition(inst: &Instance, part: &Partition) -> EvalReport {
    let n = inst.vertex_count();
    let num_colors = inst.color_count();
    let mut report = EvalReport {
        valid: false,
        violation: None,
        uniquely_p_count: 0,
        colored_count: vec![0; num_colors],
        is_solution: false,
    };

    let mut block_of = vec![usize::MAX; n];
    for (i, block) in part.blocks.iter().enumerate() {
        if block.is_empty() {
            report.violation = Some(PartitionViolation::EmptyBlock { block: i });
            return report;
        }
        for &v in block {
            if v >= n {
                report.violation = Some(PartitionViolation::UnknownVertex { vertex: v });
                return report;
            }
            if block_of[v] != usize::MAX {
                report.violation = Some(PartitionViolation::RepeatedVertex { vertex: v });
                return report;
            }
            block_of[v] = i;
        }
    }
    if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
        report.violation = Some(PartitionViolation::MissingVertex { vertex: v });
        return report;
    }

    // Sparse per-block accumulation keeps this linear in n for huge palettes.
    let mut acc = vec![0u64; num_colors];
    let mut touched_flag = vec![false; num_colors];
    let mut touched: Vec<ColorId> = Vec::new();
    for block in &part.blocks {
        for &v in block {
            let c = inst.color_of[v];
            if !touched_flag[c.0] {
                touched_flag[c.0] = true;
                touched.push(c);
            }
            acc[c.0] += inst.weights[v];
        }
        let rule = plurality(touched.iter().map(|&c| (c, acc[c.0])), num_colors);
        if rule.sole == Some(inst.target) {
            report.uniquely_p_count += 1;
        }
        if rule.max == 0 {
            report.colored_count.iter_mut().for_each(|x| *x += 1);
        } else {
            for &c in &touched {
                if acc[c.0] == rule.max {
                    report.colored_count[c.0] += 1;
                }
            }
        }
        for &c in &touched {
            acc[c.0] = 0;
            touched_flag[c.0] = false;
        }
        touched.clear();
    }

    if part.len() != inst.k {
        report.violation = Some(PartitionViolation::WrongBlockCount {
            expected: inst.k,
            found: part.len(),
        });
        return report;
    }

    let adj = inst.adjacency();
    let mut seen = vec![false; n];
    for (i, block) in part.blocks.iter().enumerate() {
        let start = block[0];
        seen[start] = true;
        let mut reached = 1;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if block_of[w] == i && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != block.len() {
            report.violation = Some(PartitionViolation::DisconnectedBlock { block: i });
            return report;
        }
    }

    report.valid = true;
    let u = report.uniquely_p_count;
    report.is_solution = report
        .colored_count
        .iter()
        .enumerate()
        .all(|(c, &count)| c == inst.target.0 || u > count);
    report
}

fn normalized(e: (VertexId, VertexId)) -> (VertexId, VertexId) {
    (e.0.min(e.1), e.0.max(e.1))
}

/// Connected components of the graph after deleting `cut`, ordered by their
/// smallest vertex, each block sorted. Works on any graph.
pub(crate) fn components_without(inst: &Instance, cut: &HashSet<(VertexId, VertexId)>) -> Partition {
    let n = inst.vertex_count();
    let adj = inst.adjacency();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut block = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] && !cut.contains(&normalized((u, v))) {
                    seen[v] = true;
                    block.push(v);
                    stack.push(v);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    Partition { blocks }
}

/// Turns a set of deleted tree edges into the partition it induces.
pub fn partition_from_edge_cut(inst: &Instance, cut: &[(VertexId, VertexId)]) -> Result<Partition> {
    if !inst.is_tree() {
        return Err(Error::NotATree);
    }
    let edges: HashSet<_> = inst.edges.iter().map(|&e| normalized(e)).collect();
    let mut cut_set = HashSet::with_capacity(cut.len());
    for &e in cut {
        let e = normalized(e);
        if !edges.contains(&e) {
            return Err(Error::EdgeNotInGraph(e.0, e.1));
        }
        cut_set.insert(e);
    }
    Ok(components_without(inst, &cut_set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{figure1, two_color};

    #[test]
    fn figure1_block_tallies() {
        let inst = figure1();
        let t = block_tally(&inst, &[3, 4, 5]).unwrap();
        assert_eq!(t.weight(ColorId(0)), 4);
        assert_eq!(t.weight(ColorId(1)), 3);
        assert_eq!(t.uniquely, Some(ColorId(0)));
        assert_eq!(t.colored_as, vec![ColorId(0)]);
        assert_eq!(t.total(), 7);
    }

    #[test]
    fn single_and_tied_blocks() {
        let inst = two_color(&[('p', 1), ('q', 1)], &[(0, 1)], 1);
        let single = block_tally(&inst, &[0]).unwrap();
        assert_eq!(single.colored_as, vec![ColorId(0)]);
        assert_eq!(single.uniquely, Some(ColorId(0)));
        let tie = block_tally(&inst, &[0, 1]).unwrap();
        assert_eq!(tie.colored_as, vec![ColorId(0), ColorId(1)]);
        assert_eq!(tie.uniquely, None);
    }

    #[test]
    fn zero_weight_block_is_colored_as_every_color() {
        let mut inst = two_color(&[('p', 0), ('q', 0)], &[(0, 1)], 1);
        inst.colors.push("r".into());
        let t = block_tally(&inst, &[0, 1]).unwrap();
        assert_eq!(t.colored_as, vec![ColorId(0), ColorId(1), ColorId(2)]);
        assert_eq!(t.uniquely, None);
    }

    #[test]
    fn absent_colors_compare_as_zero() {
        let mut inst = two_color(&[('q', 0)], &[], 1);
        inst.colors.push("r".into());
        // A lone zero-weight q vertex ties with the absent colors.
        let t = block_tally(&inst, &[0]).unwrap();
        assert_eq!(t.colored_as.len(), 3);
    }

    #[test]
    fn tally_rejects_unknown_vertex() {
        assert_eq!(block_tally(&figure1(), &[0, 17]), Err(Error::UnknownVertex(17)));
    }

    #[test]
    fn figure1_solution() {
        let inst = figure1();
        let r = evaluate_partition(&inst, &Partition::new(vec![vec![0, 1, 2], vec![3, 4, 5]]));
        assert!(r.valid);
        assert_eq!(r.uniquely_p_count, 2);
        assert_eq!(r.colored_count, vec![2, 0]);
        assert!(r.is_solution);
    }

    #[test]
    fn figure1_disconnected_block() {
        let inst = figure1();
        let r = evaluate_partition(&inst, &Partition::new(vec![vec![0, 1], vec![2, 3, 4, 5]]));
        assert!(!r.valid);
        assert_eq!(r.violation, Some(PartitionViolation::DisconnectedBlock { block: 0 }));
        assert!(!r.is_solution);
    }

    #[test]
    fn tie_counts_for_q_not_for_p() {
        let inst = two_color(&[('p', 1), ('q', 1)], &[(0, 1)], 1);
        let r = evaluate_partition(&inst, &Partition::new(vec![vec![0, 1]]));
        assert!(r.valid);
        assert_eq!(r.uniquely_p_count, 0);
        assert_eq!(r.colored_count[1], 1);
        assert!(!r.is_solution);
    }

    #[test]
    fn structural_violations() {
        let inst = figure1();
        let cases = [
            (vec![vec![0, 1, 2], vec![]], PartitionViolation::EmptyBlock { block: 1 }),
            (vec![vec![0, 1, 2, 9]], PartitionViolation::UnknownVertex { vertex: 9 }),
            (
                vec![vec![0, 1, 2], vec![2, 3, 4, 5]],
                PartitionViolation::RepeatedVertex { vertex: 2 },
            ),
            (
                vec![vec![0, 1, 2], vec![3, 4]],
                PartitionViolation::MissingVertex { vertex: 5 },
            ),
            (
                vec![vec![0, 1, 2, 3, 4, 5]],
                PartitionViolation::WrongBlockCount { expected: 2, found: 1 },
            ),
        ];
        for (blocks, expected) in cases {
            let r = evaluate_partition(&inst, &Partition::new(blocks));
            assert_eq!(r.violation, Some(expected));
            assert!(!r.valid && !r.is_solution);
        }
    }

    #[test]
    fn edge_cuts_on_a_path() {
        let inst = two_color(&[('p', 1); 3], &[(0, 1), (1, 2)], 1);
        assert_eq!(
            partition_from_edge_cut(&inst, &[(1, 0)]).unwrap(),
            Partition::new(vec![vec![0], vec![1, 2]])
        );
        assert_eq!(
            partition_from_edge_cut(&inst, &[]).unwrap(),
            Partition::new(vec![vec![0, 1, 2]])
        );
        assert_eq!(
            partition_from_edge_cut(&inst, &[(0, 1), (1, 2)]).unwrap(),
            Partition::new(vec![vec![0], vec![1], vec![2]])
        );
        assert_eq!(
            partition_from_edge_cut(&inst, &[(0, 2)]),
            Err(Error::EdgeNotInGraph(0, 2))
        );
        assert_eq!(partition_from_edge_cut(&figure1(), &[]), Err(Error::NotATree));
    }

    #[test]
    fn figure1_edge_removal_yields_the_solution() {
        let inst = figure1();
        let cut: HashSet<_> = [(2, 3), (2, 4)].into_iter().collect();
        let part = components_without(&inst, &cut);
        assert_eq!(part, Partition::new(vec![vec![0, 1, 2], vec![3, 4, 5]]));
    }
}
