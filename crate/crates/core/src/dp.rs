//! Polynomial dynamic program for tree instances with exactly two colors.
//!
//! Root the tree and process children one at a time. For vertex `u`, let
//! `G(u, i)` be `u` together with the subtrees of its first `i` children.
//! For every district count `k'` the table keeps the lexicographically best
//! pair `(won, margin)` over connected `k'`-partitions of `G(u, i)`:
//! `won` counts target-won districts among the blocks not containing `u`,
//! and `margin` is the target's lead in the block containing `u`, which is
//! still open towards the parent.
//!
//! Adding child `v` either cuts the edge `u-v` (the child's open block is
//! closed and counted when its margin is positive) or merges the child's
//! open block into `u`'s. An entry with one more won district is never
//! worse at the root, because the final open block adds at most one, so
//! keeping only the lexicographic maximum is exact.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::eval::{evaluate_partition, partition_from_edge_cut};
use crate::instance::{ColorId, Instance, Mode, VertexId};
use crate::oracle::OracleResult;

/// One table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DpEntry {
    /// Closed districts won by the target.
    pub won: usize,
    /// `w_p - w_q` of the open block containing the subtree root.
    pub margin: i64,
}

/// How a cell was obtained from the previous child prefix. `split` is the
/// district count taken from the prefix table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Cut { split: usize },
    Merge { split: usize },
}

#[derive(Clone, Debug)]
pub struct DpTable {
    root: VertexId,
    k: usize,
    children: Vec<Vec<VertexId>>,
    /// `cells[u][i][k' - 1]` for `k'` in `1..=min(|G(u, i)|, k)`.
    cells: Vec<Vec<Vec<DpEntry>>>,
    /// `steps[u][i][k' - 1]`, empty for `i = 0`.
    steps: Vec<Vec<Vec<Step>>>,
}

impl DpTable {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Children of `u` in processing order (ascending id).
    pub fn children(&self, u: VertexId) -> &[VertexId] {
        &self.children[u]
    }

    /// The cell for `G(u, i)` with `k'` districts, if `k'` is in range.
    pub fn entry(&self, u: VertexId, i: usize, parts: usize) -> Option<DpEntry> {
        self.cells.get(u)?.get(i)?.get(parts.checked_sub(1)?).copied()
    }

    /// The cell for the whole subtree of `u`.
    pub fn completed(&self, u: VertexId, parts: usize) -> Option<DpEntry> {
        self.entry(u, self.children[u].len(), parts)
    }

    pub fn step(&self, u: VertexId, i: usize, parts: usize) -> Option<Step> {
        self.steps.get(u)?.get(i)?.get(parts.checked_sub(1)?).copied()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().flatten().map(Vec::len).sum()
    }

    /// Deleted edges of a partition of `G(u, i)` into `parts` districts that
    /// attains the stored cell.
    pub fn reconstruct_cut(&self, u: VertexId, i: usize, parts: usize) -> Result<Vec<(VertexId, VertexId)>> {
        let mut cut = Vec::new();
        let mut stack = vec![(u, i, parts)];
        while let Some((u, i, parts)) = stack.pop() {
            if i == 0 {
                if parts != 1 {
                    return Err(Error::Internal(format!("leaf frame with {parts} parts")));
                }
                continue;
            }
            let v = self.children[u][i - 1];
            let full = self.children[v].len();
            match self.step(u, i, parts) {
                Some(Step::Cut { split }) => {
                    cut.push((u, v));
                    stack.push((u, i - 1, split));
                    stack.push((v, full, parts - split));
                }
                Some(Step::Merge { split }) => {
                    stack.push((u, i - 1, split));
                    stack.push((v, full, parts - split + 1));
                }
                None => return Err(Error::Internal(format!("missing backpointer at ({u}, {i}, {parts})"))),
            }
        }
        Ok(cut)
    }
}

fn check_two_color_tree(inst: &Instance) -> Result<()> {
    if inst.mode == Mode::Disconnected {
        return Err(Error::DisconnectedInstance);
    }
    if inst.color_count() != 2 {
        return Err(Error::ColorCount {
            expected: 2,
            found: inst.color_count(),
        });
    }
    if !inst.is_tree() {
        return Err(Error::NotATree);
    }
    if inst.k == 0 || inst.k > inst.vertex_count() {
        return Err(Error::invalid(format!("k = {} out of range", inst.k)));
    }
    Ok(())
}

/// Fills the tables for `inst` rooted at `root`.
pub fn dp_tables(inst: &Instance, root: VertexId) -> Result<DpTable> {
    check_two_color_tree(inst)?;
    let n = inst.vertex_count();
    if root >= n {
        return Err(Error::UnknownVertex(root));
    }
    let k = inst.k;
    let p = inst.target;
    let q = ColorId(1 - p.0);
    let margin = |v: VertexId| inst.weight_in(v, p) as i64 - inst.weight_in(v, q) as i64;

    let adj = inst.adjacency();
    let mut parent = vec![usize::MAX; n];
    let mut children = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    parent[root] = root;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                children[u].push(v);
                queue.push_back(v);
            }
        }
    }

    let mut cells: Vec<Vec<Vec<DpEntry>>> = vec![Vec::new(); n];
    let mut steps: Vec<Vec<Vec<Step>>> = vec![Vec::new(); n];
    let mut size = vec![1usize; n];

    for &u in order.iter().rev() {
        let mut prefix = vec![DpEntry {
            won: 0,
            margin: margin(u),
        }];
        let mut u_cells = vec![prefix.clone()];
        let mut u_steps = vec![Vec::new()];
        for &v in &children[u] {
            let child = cells[v].last().expect("children are processed first");
            let (prev_len, child_len) = (prefix.len(), child.len());
            let len = (size[u] + size[v]).min(k);
            let mut next = Vec::with_capacity(len);
            let mut next_steps = Vec::with_capacity(len);
            for parts in 1..=len {
                let mut best: Option<(DpEntry, Step)> = None;
                let mut offer = |entry: DpEntry, step: Step| {
                    if best.is_none_or(|(b, _)| entry > b) {
                        best = Some((entry, step));
                    }
                };
                // Cut u-v: the child's open block becomes a closed district.
                let lo = parts.saturating_sub(child_len).max(1);
                for split in lo..=prev_len.min(parts - 1) {
                    let a = prefix[split - 1];
                    let b = child[parts - split - 1];
                    offer(
                        DpEntry {
                            won: a.won + b.won + usize::from(b.margin > 0),
                            margin: a.margin,
                        },
                        Step::Cut { split },
                    );
                }
                // Keep u-v: the open blocks fuse.
                let lo = (parts + 1).saturating_sub(child_len).max(1);
                for split in lo..=prev_len.min(parts) {
                    let a = prefix[split - 1];
                    let b = child[parts - split];
                    offer(
                        DpEntry {
                            won: a.won + b.won,
                            margin: a.margin + b.margin,
                        },
                        Step::Merge { split },
                    );
                }
                let (entry, step) =
                    best.ok_or_else(|| Error::Internal(format!("no feasible split at vertex {u}, {parts} parts")))?;
                next.push(entry);
                next_steps.push(step);
            }
            size[u] += size[v];
            prefix = next;
            u_cells.push(prefix.clone());
            u_steps.push(next_steps);
        }
        cells[u] = u_cells;
        steps[u] = u_steps;
    }

    Ok(DpTable {
        root,
        k,
        children,
        cells,
        steps,
    })
}

/// Decides a two-color tree instance, rooting the tree at vertex 0.
pub fn solve_two_color_tree(inst: &Instance) -> Result<OracleResult> {
    solve_two_color_tree_rooted(inst, 0)
}

/// Decides a two-color tree instance from the given root. The target wins
/// iff `won + [margin > 0] > k / 2` at the root.
pub fn solve_two_color_tree_rooted(inst: &Instance, root: VertexId) -> Result<OracleResult> {
    let table = dp_tables(inst, root)?;
    let k = inst.k;
    let top = table
        .completed(root, k)
        .ok_or_else(|| Error::Internal("root table shorter than k".into()))?;
    let districts = top.won + usize::from(top.margin > 0);
    let examined = table.cell_count() as u64;
    if 2 * districts <= k {
        return Ok(OracleResult::no(examined));
    }
    let cut = table.reconstruct_cut(root, table.children(root).len(), k)?;
    let witness = partition_from_edge_cut(inst, &cut)?;
    let report = evaluate_partition(inst, &witness);
    if !report.is_solution || report.uniquely_p_count != districts {
        return Err(Error::Internal(format!(
            "reconstructed partition does not match the table ({} won, expected {districts})",
            report.uniquely_p_count
        )));
    }
    Ok(OracleResult {
        answer: true,
        witness: Some(witness),
        partitions_examined: examined,
    })
}
