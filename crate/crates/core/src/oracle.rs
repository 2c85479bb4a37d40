//! Exhaustive edge-cut search on trees, plus seeded random trees and
//! instances for cross-checking the fast solvers.
//!
//! On a tree, connected k-partitions are exactly the components left after
//! deleting k-1 edges, so enumerating (k-1)-subsets of edges visits every
//! candidate once.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{components_without, evaluate_partition, plurality, Partition};
use crate::instance::{ColorId, Instance, Mode, VertexId};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Result shared by every decision procedure in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub answer: bool,
    /// Present iff `answer` is true; always a verified solution.
    pub witness: Option<Partition>,
    /// Candidates looked at: edge subsets for brute force, table cells for
    /// the tree DP, guesses for the star algorithms.
    pub partitions_examined: u64,
}

impl OracleResult {
    pub(crate) fn no(examined: u64) -> Self {
        OracleResult {
            answer: false,
            witness: None,
            partitions_examined: examined,
        }
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Edges of the instance as `(min, max)` pairs in ascending order.
pub fn sorted_edges(inst: &Instance) -> Vec<(VertexId, VertexId)> {
    let mut edges: Vec<_> = inst.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    edges.sort_unstable();
    edges
}

fn check_tree(inst: &Instance) -> Result<()> {
    if inst.mode == Mode::Disconnected {
        return Err(Error::DisconnectedInstance);
    }
    if !inst.is_tree() {
        return Err(Error::NotATree);
    }
    Ok(())
}

fn check_cap(n: usize, k: usize, cap: u64) -> Result<u64> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("k = {k} out of range for {n} vertices")));
    }
    let count = binomial(n as u64 - 1, k as u64 - 1);
    if count > cap as u128 {
        return Err(Error::Capacity(format!(
            "C({}, {}) = {count} edge subsets exceeds the enumeration cap {cap}",
            n - 1,
            k - 1
        )));
    }
    Ok(count as u64)
}

/// Advances `idx` to the next `idx.len()`-subset of `0..m` in lexicographic
/// order. Returns false after the last subset.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let r = idx.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if idx[i] < m - r + i {
            idx[i] += 1;
            for j in i + 1..r {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Scores edge cuts of a tree without materializing partitions.
struct CutScorer<'a> {
    inst: &'a Instance,
    adj: Vec<Vec<(VertexId, usize)>>,
    seen: Vec<bool>,
    stack: Vec<VertexId>,
    acc: Vec<u64>,
    in_block: Vec<bool>,
    touched: Vec<ColorId>,
    counts: Vec<usize>,
    counted: Vec<ColorId>,
}

impl<'a> CutScorer<'a> {
    fn new(inst: &'a Instance, edges: &[(VertexId, VertexId)]) -> Self {
        let n = inst.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let c = inst.color_count();
        CutScorer {
            inst,
            adj,
            seen: vec![false; n],
            stack: Vec::new(),
            acc: vec![0; c],
            in_block: vec![false; c],
            touched: Vec::new(),
            counts: vec![0; c],
            counted: Vec::new(),
        }
    }

    fn is_solution(&mut self, cut: &[bool]) -> bool {
        let inst = self.inst;
        let num_colors = inst.color_count();
        let mut uniquely_p = 0usize;
        // Blocks with all-zero weight count for every color at once.
        let mut everywhere = 0usize;
        self.seen.iter_mut().for_each(|s| *s = false);
        for s in 0..inst.vertex_count() {
            if self.seen[s] {
                continue;
            }
            self.seen[s] = true;
            self.stack.push(s);
            while let Some(u) = self.stack.pop() {
                let c = inst.color_of[u];
                if !self.in_block[c.0] {
                    self.in_block[c.0] = true;
                    self.touched.push(c);
                }
                self.acc[c.0] += inst.weights[u];
                for &(v, e) in &self.adj[u] {
                    if !cut[e] && !self.seen[v] {
                        self.seen[v] = true;
                        self.stack.push(v);
                    }
                }
            }
            let rule = plurality(self.touched.iter().map(|&c| (c, self.acc[c.0])), num_colors);
            if rule.sole == Some(inst.target) {
                uniquely_p += 1;
            }
            if rule.max == 0 {
                everywhere += 1;
            } else {
                for &c in &self.touched {
                    if self.acc[c.0] == rule.max {
                        if self.counts[c.0] == 0 {
                            self.counted.push(c);
                        }
                        self.counts[c.0] += 1;
                    }
                }
            }
            for &c in &self.touched {
                self.acc[c.0] = 0;
                self.in_block[c.0] = false;
            }
            self.touched.clear();
        }
        let worst_rival = self
            .counted
            .iter()
            .filter(|&&c| c != inst.target)
            .map(|&c| self.counts[c.0])
            .max()
            .unwrap_or(0);
        for &c in &self.counted {
            self.counts[c.0] = 0;
        }
        self.counted.clear();
        match num_colors {
            1 => true,
            _ => uniquely_p > worst_rival + everywhere,
        }
    }
}

/// Decides the instance by trying every (k-1)-subset of edges with the
/// default enumeration cap.
pub fn solve_brute_force(inst: &Instance) -> Result<OracleResult> {
    solve_brute_force_capped(inst, DEFAULT_ENUMERATION_CAP)
}

/// As [`solve_brute_force`], refusing instances with more than `cap`
/// candidate edge subsets.
///
/// The witness is the first solution in lexicographic order of edge-index
/// subsets, with edges sorted by `(min, max)` endpoint.
pub fn solve_brute_force_capped(inst: &Instance, cap: u64) -> Result<OracleResult> {
    check_tree(inst)?;
    let n = inst.vertex_count();
    let k = inst.k;
    check_cap(n, k, cap)?;
    let edges = sorted_edges(inst);
    let mut scorer = CutScorer::new(inst, &edges);
    let mut cut = vec![false; edges.len()];
    let mut idx: Vec<usize> = (0..k - 1).collect();
    let mut examined = 0u64;
    loop {
        idx.iter().for_each(|&i| cut[i] = true);
        examined += 1;
        if scorer.is_solution(&cut) {
            let cut_set: HashSet<_> = idx.iter().map(|&i| edges[i]).collect();
            let witness = components_without(inst, &cut_set);
            if !evaluate_partition(inst, &witness).is_solution {
                return Err(Error::Internal("brute-force witness failed evaluation".into()));
            }
            return Ok(OracleResult {
                answer: true,
                witness: Some(witness),
                partitions_examined: examined,
            });
        }
        idx.iter().for_each(|&i| cut[i] = false);
        if !next_combination(&mut idx, edges.len()) {
            break;
        }
    }
    Ok(OracleResult::no(examined))
}

/// Visits every connected `k`-partition of a tree in lexicographic edge-cut
/// order and returns how many there were.
pub fn enumerate_connected_partitions(
    inst: &Instance,
    k: usize,
    cap: u64,
    mut visitor: Option<&mut dyn FnMut(&Partition)>,
) -> Result<u64> {
    if !inst.is_tree() {
        return Err(Error::NotATree);
    }
    check_cap(inst.vertex_count(), k, cap)?;
    let edges = sorted_edges(inst);
    let mut idx: Vec<usize> = (0..k - 1).collect();
    let mut count = 0u64;
    loop {
        count += 1;
        if let Some(visit) = visitor.as_mut() {
            let cut_set: HashSet<_> = idx.iter().map(|&i| edges[i]).collect();
            visit(&components_without(inst, &cut_set));
        }
        if !next_combination(&mut idx, edges.len()) {
            break;
        }
    }
    Ok(count)
}

/// Decodes a Prüfer sequence over `0..seq.len() + 2` into the edges of the
/// labeled tree it encodes, each edge as `(min, max)`.
pub fn prufer_decode(seq: &[usize]) -> Result<Vec<(VertexId, VertexId)>> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&a| a >= n) {
        return Err(Error::invalid(format!(
            "Prüfer entry {bad} out of range for {n} vertices"
        )));
    }
    let mut degree = vec![1usize; n];
    for &a in seq {
        degree[a] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &a in seq {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer step always has a leaf");
        edges.push((leaf.min(a), leaf.max(a)));
        degree[a] -= 1;
        if degree[a] == 1 {
            leaves.push(Reverse(a));
        }
    }
    let Reverse(u) = leaves.pop().expect("two leaves remain");
    let Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u.min(v), u.max(v)));
    Ok(edges)
}

fn random_tree_with(n: usize, rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    match n {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1)],
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(&seq).expect("entries are in range")
        }
    }
}

/// A uniformly random labeled tree on `n` vertices.
pub fn random_tree(n: usize, seed: u64) -> Vec<(VertexId, VertexId)> {
    random_tree_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn palette(num_colors: usize) -> Vec<String> {
    (0..num_colors).map(|i| format!("c{i}")).collect()
}

fn random_labels(
    inst_edges: Vec<(VertexId, VertexId)>,
    n: usize,
    num_colors: usize,
    max_weight: u64,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Instance {
    Instance {
        colors: palette(num_colors),
        target: ColorId(0),
        k,
        mode: Mode::Connected,
        weights: (0..n).map(|_| rng.gen_range(1..=max_weight)).collect(),
        color_of: (0..n).map(|_| ColorId(rng.gen_range(0..num_colors))).collect(),
        edges: inst_edges,
    }
}

fn check_params(n: usize, num_colors: usize, max_weight: u64, k: usize) {
    assert!(n >= 1 && num_colors >= 1 && max_weight >= 1, "degenerate parameters");
    assert!((1..=n).contains(&k), "k = {k} out of range for {n} vertices");
}

/// Random tree with independent uniform colors `c0..` and weights in
/// `1..=max_weight`; the target is `c0`.
pub fn random_instance(n: usize, num_colors: usize, max_weight: u64, k: usize, seed: u64) -> Instance {
    check_params(n, num_colors, max_weight, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = random_tree_with(n, &mut rng);
    random_labels(edges, n, num_colors, max_weight, k, &mut rng)
}

/// A star with center 0 and leaves `1..n`, randomly labeled.
pub fn random_star_instance(n: usize, num_colors: usize, max_weight: u64, k: usize, seed: u64) -> Instance {
    check_params(n, num_colors, max_weight, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (1..n).map(|v| (0, v)).collect();
    random_labels(edges, n, num_colors, max_weight, k, &mut rng)
}

/// A tree of diameter exactly three: centers 0 and 1, every other vertex a
/// leaf of one of them, each center with at least one leaf. Needs `n >= 4`.
pub fn random_diameter3_instance(n: usize, num_colors: usize, max_weight: u64, k: usize, seed: u64) -> Instance {
    check_params(n, num_colors, max_weight, k);
    assert!(n >= 4, "a diameter-3 tree needs at least 4 vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = vec![(0, 1), (0, 2), (1, 3)];
    for v in 4..n {
        edges.push((rng.gen_range(0..2), v));
    }
    random_labels(edges, n, num_colors, max_weight, k, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::two_color;

    fn star_q2_p1x3(k: usize) -> Instance {
        two_color(&[('q', 2), ('p', 1), ('p', 1), ('p', 1)], &[(0, 1), (0, 2), (0, 3)], k)
    }

    #[test]
    fn star_k2_has_no_solution() {
        let r = solve_brute_force(&star_q2_p1x3(2)).unwrap();
        assert!(!r.answer);
        assert_eq!(r.witness, None);
        assert_eq!(r.partitions_examined, 3);
    }

    #[test]
    fn star_k4_all_singletons() {
        let r = solve_brute_force(&star_q2_p1x3(4)).unwrap();
        assert!(r.answer);
        assert_eq!(r.partitions_examined, 1);
        assert_eq!(r.witness.unwrap().len(), 4);
    }

    #[test]
    fn single_color_block() {
        let inst = two_color(&[('p', 2), ('p', 1), ('p', 5)], &[(0, 1), (1, 2)], 1);
        assert!(solve_brute_force(&inst).unwrap().answer);
    }

    #[test]
    fn witness_is_first_in_lexicographic_order() {
        // Path p(1)-p(1)-q(1)-p(3).
        let inst = two_color(&[('p', 1), ('p', 1), ('q', 1), ('p', 3)], &[(0, 1), (1, 2), (2, 3)], 2);
        let r = solve_brute_force(&inst).unwrap();
        // {0}|{1,2,3}: p wins both (p4 vs q1). That is the first cut.
        assert_eq!(r.partitions_examined, 1);
        assert_eq!(r.witness.unwrap(), Partition::new(vec![vec![0], vec![1, 2, 3]]));
    }

    #[test]
    fn rejects_non_trees_and_caps() {
        let cyc = two_color(&[('p', 1); 3], &[(0, 1), (1, 2), (0, 2)], 1);
        assert_eq!(solve_brute_force(&cyc), Err(Error::NotATree));
        let path = two_color(&[('p', 1); 12], &(0..11).map(|i| (i, i + 1)).collect::<Vec<_>>(), 6);
        assert!(matches!(solve_brute_force_capped(&path, 100), Err(Error::Capacity(_))));
        assert!(solve_brute_force_capped(&path, 462).is_ok());
    }

    #[test]
    fn partition_counts() {
        let path4 = two_color(&[('p', 1); 4], &[(0, 1), (1, 2), (2, 3)], 1);
        assert_eq!(enumerate_connected_partitions(&path4, 2, 100, None).unwrap(), 3);
        assert_eq!(enumerate_connected_partitions(&path4, 4, 100, None).unwrap(), 1);
        let star5 = two_color(&[('p', 1); 5], &[(0, 1), (0, 2), (0, 3), (0, 4)], 1);
        let mut seen = Vec::new();
        let mut visit = |p: &Partition| seen.push(p.clone());
        assert_eq!(
            enumerate_connected_partitions(&star5, 3, 100, Some(&mut visit)).unwrap(),
            6
        );
        assert_eq!(seen.len(), 6);
        assert!(seen.iter().all(|p| p.len() == 3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(18, 6), 18_564);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(62, 31), 465_428_353_255_261_088);
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut idx = vec![0, 1];
        let mut all = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            all.push(idx.clone());
        }
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }

    #[test]
    fn small_random_trees() {
        assert!(random_tree(1, 7).is_empty());
        assert_eq!(random_tree(2, 7), vec![(0, 1)]);
        let t = random_tree(8, 42);
        assert_eq!(t.len(), 7);
        assert_eq!(t, random_tree(8, 42));
    }

    #[test]
    fn prufer_known_sequence() {
        // Sequence [3, 3, 3, 4] encodes the tree with leaves 0,1,2 on 3 and 3-4-5.
        let edges = prufer_decode(&[3, 3, 3, 4]).unwrap();
        assert_eq!(edges, vec![(0, 3), (1, 3), (2, 3), (3, 4), (4, 5)]);
        assert!(prufer_decode(&[9]).is_err());
    }

    #[test]
    fn prufer_decoding_reproduces_random_trees() {
        // Re-encode the random tree and decode it again.
        let edges = random_tree(8, 42);
        let seq = prufer_encode(8, &edges);
        let mut again = prufer_decode(&seq).unwrap();
        let mut orig = edges.clone();
        again.sort();
        orig.sort();
        assert_eq!(again, orig);
    }

    /// Test-only encoder: repeatedly strip the smallest leaf.
    fn prufer_encode(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
        let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let mut seq = Vec::new();
        for _ in 0..n - 2 {
            let leaf = (0..n).find(|&v| adj[v].len() == 1).unwrap();
            let parent = *adj[leaf].iter().next().unwrap();
            seq.push(parent);
            adj[parent].remove(&leaf);
            adj[leaf].clear();
        }
        seq
    }

    #[test]
    fn random_instances_are_valid() {
        for seed in [1, 2, 3] {
            let inst = random_instance(9, 3, 5, 4, seed);
            assert!(inst.is_valid(), "{:?}", inst.validate());
            assert_eq!(inst, random_instance(9, 3, 5, 4, seed));
        }
        for seed in 0..20 {
            let s = random_star_instance(7, 3, 5, 3, seed);
            assert!(s.is_valid());
            assert!(s.classify_shape().diameter.unwrap() <= 2);
            let d = random_diameter3_instance(9, 3, 5, 3, seed);
            assert!(d.is_valid());
            assert_eq!(d.classify_shape().diameter, Some(3));
        }
    }
}
