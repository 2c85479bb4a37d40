//! Balanced Partition to a three-color tree.
//!
//! A `p` star with center `z` and `n/2` unit leaves gets, for every element
//! `a_i`, two pendant two-vertex paths `x_i^q - x_i^r` and `y_i^q - y_i^r`
//! hanging from `z`. The weights make `X_i` `q`-colored and `Y_i`
//! `r`-colored, and `z` can absorb exactly the gadgets of a half-sum subset
//! of size `n/2`.
//!
//! Layout: `z = 0`, leaves `1..=n/2`, then for gadget `i` (1-based) the four
//! vertices `x_i^q, x_i^r, y_i^q, y_i^r` in that order.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::eval::Partition;
use crate::instance::{ColorId, Instance, Mode, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeGadget {
    pub x_q: VertexId,
    pub x_r: VertexId,
    pub y_q: VertexId,
    pub y_r: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTreeParams {
    /// The multiset as given.
    pub original: Vec<u64>,
    /// Factor applied so that `s` is a multiple of `n` (1 or `n`).
    pub scale: u64,
    /// Elements after scaling.
    pub elements: Vec<u64>,
    pub n: usize,
    pub s: u64,
    /// `s + 1`.
    pub big_n: u64,
    /// Smallest integer above `N·2ⁿ(n+1) + s/2 + 1`.
    pub big_m: u64,
    pub k: usize,
    pub z: VertexId,
    pub leaves: Vec<VertexId>,
    /// Gadget `i` is at index `i - 1`.
    pub gadgets: Vec<TreeGadget>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    pub instance: Instance,
    pub params: PartitionTreeParams,
}

const P: ColorId = ColorId(0);
const Q: ColorId = ColorId(1);
const R: ColorId = ColorId(2);

struct Weights {
    z: u64,
    /// Per gadget: x^q, x^r, y^q, y^r.
    gadgets: Vec<[u64; 4]>,
    big_n: u64,
    big_m: u64,
}

fn weights(elements: &[u64]) -> Result<Weights> {
    let n = elements.len();
    let cap = || Error::Capacity(format!("weights for {n} elements overflow 64-bit signed integers"));
    let s: u128 = elements.iter().map(|&a| a as u128).sum();
    let big_n = s + 1;
    let pow = |i: usize| 1u128.checked_shl(i as u32).filter(|_| i < 127);
    let big_m = pow(n)
        .and_then(|p| big_n.checked_mul(p))
        .and_then(|x| x.checked_mul(n as u128 + 1))
        .and_then(|x| x.checked_add(s / 2 + 2))
        .ok_or_else(cap)?;
    let z = big_m
        .checked_mul(n as u128)
        .and_then(|x| x.checked_add(s / 2 + 1))
        .ok_or_else(cap)?;
    let shift = 2 * s / n as u128;
    let mut gadgets = Vec::with_capacity(n);
    let mut total = z + (n / 2) as u128;
    for (idx, &a) in elements.iter().enumerate() {
        let step = pow(idx + 1).and_then(|p| big_n.checked_mul(p)).ok_or_else(cap)?;
        let a = a as u128;
        let x_q = big_m.checked_add(step).and_then(|x| x.checked_add(a)).ok_or_else(cap)?;
        let x_r = big_m - step;
        let y_r = (big_m + step + shift).checked_sub(a).ok_or_else(cap)?;
        let y_q = big_m - step;
        total = [x_q, x_r, y_q, y_r]
            .iter()
            .try_fold(total, |acc, &w| acc.checked_add(w))
            .ok_or_else(cap)?;
        gadgets.push([x_q, x_r, y_q, y_r]);
    }
    if total > i64::MAX as u128 {
        return Err(cap());
    }
    let narrow = |w: u128| w as u64;
    Ok(Weights {
        z: narrow(z),
        gadgets: gadgets.into_iter().map(|g| g.map(narrow)).collect(),
        big_n: narrow(big_n),
        big_m: narrow(big_m),
    })
}

fn check_elements(original: &[u64]) -> Result<()> {
    if original.is_empty() {
        return Err(Error::invalid("the multiset is empty"));
    }
    if !original.len().is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "need an even number of elements, got {}",
            original.len()
        )));
    }
    Ok(())
}

/// Builds the tree instance for `original`, scaling every element by `n`
/// first when the sum is not a multiple of `n`.
pub fn partition_to_tree(original: &[u64]) -> Result<PartitionTree> {
    check_elements(original)?;
    let n = original.len();
    let sum: u128 = original.iter().map(|&a| a as u128).sum();
    let scale = if sum.is_multiple_of(n as u128) { 1 } else { n as u64 };
    let elements = original
        .iter()
        .map(|&a| a.checked_mul(scale))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Capacity("scaled elements overflow".into()))?;
    let w = weights(&elements)?;
    let s: u64 = elements.iter().sum();

    let half = n / 2;
    let mut inst = Instance {
        colors: vec!["p".into(), "q".into(), "r".into()],
        target: P,
        k: 3 * half + 1,
        mode: Mode::Connected,
        weights: vec![w.z],
        color_of: vec![P],
        edges: Vec::with_capacity(9 * half),
    };
    let z = 0;
    let mut leaves = Vec::with_capacity(half);
    for _ in 0..half {
        inst.weights.push(1);
        inst.color_of.push(P);
        let v = inst.weights.len() - 1;
        inst.edges.push((z, v));
        leaves.push(v);
    }
    let mut gadgets = Vec::with_capacity(n);
    for ws in &w.gadgets {
        let base = inst.weights.len();
        inst.weights.extend_from_slice(ws);
        inst.color_of.extend_from_slice(&[Q, R, Q, R]);
        let g = TreeGadget {
            x_q: base,
            x_r: base + 1,
            y_q: base + 2,
            y_r: base + 3,
        };
        inst.edges
            .extend([(z, g.x_q), (z, g.y_q), (g.x_q, g.x_r), (g.y_q, g.y_r)]);
        gadgets.push(g);
    }
    let params = PartitionTreeParams {
        original: original.to_vec(),
        scale,
        elements,
        n,
        s,
        big_n: w.big_n,
        big_m: w.big_m,
        k: inst.k,
        z,
        leaves,
        gadgets,
    };
    Ok(PartitionTree { instance: inst, params })
}

impl PartitionTree {
    /// The solution induced by a 1-based index set `indices` of size `n/2`
    /// whose elements sum to half the total.
    pub fn witness(&self, indices: &[usize]) -> Result<Partition> {
        let p = &self.params;
        let chosen: BTreeSet<usize> = indices.iter().copied().collect();
        if chosen.len() != indices.len() || chosen.len() != p.n / 2 {
            return Err(Error::invalid(format!(
                "need {} distinct indices, got {indices:?}",
                p.n / 2
            )));
        }
        if let Some(&i) = chosen.iter().find(|&&i| i == 0 || i > p.n) {
            return Err(Error::invalid(format!("index {i} outside 1..={}", p.n)));
        }
        let sum: u128 = chosen.iter().map(|&i| p.original[i - 1] as u128).sum();
        let total: u128 = p.original.iter().map(|&a| a as u128).sum();
        if 2 * sum != total {
            return Err(Error::invalid(format!("indices sum to {sum}, not half of {total}")));
        }
        let mut center = vec![p.z];
        let mut blocks = Vec::new();
        for (i, g) in p.gadgets.iter().enumerate() {
            if chosen.contains(&(i + 1)) {
                center.extend([g.x_q, g.x_r, g.y_q, g.y_r]);
            } else {
                blocks.push(vec![g.x_q, g.x_r]);
                blocks.push(vec![g.y_q, g.y_r]);
            }
        }
        center.sort_unstable();
        let mut all = vec![center];
        all.extend(p.leaves.iter().map(|&v| vec![v]));
        all.extend(blocks);
        Ok(Partition::new(all))
    }
}

/// Builds the instance and the witness for `indices` (1-based) in one go.
pub fn partition_witness(original: &[u64], indices: &[usize]) -> Result<Partition> {
    partition_to_tree(original)?.witness(indices)
}

/// Structural check of a generated tree against its parameters.
pub fn check_partition_tree(inst: &Instance, params: &PartitionTreeParams) -> Result<()> {
    let fail = |what: String| Err(Error::invalid(format!("partition-tree check: {what}")));
    let n = params.n;
    if inst.vertex_count() != 9 * n / 2 + 1 || !inst.is_tree() {
        return fail(format!("expected a tree on {} vertices", 9 * n / 2 + 1));
    }
    if inst.k != 3 * n / 2 + 1 {
        return fail(format!("k = {}", inst.k));
    }
    let s = params.s as u128;
    if !s.is_multiple_of(n as u128) {
        return fail(format!("s = {s} is not a multiple of n = {n}"));
    }
    let (big_n, big_m) = (params.big_n as u128, params.big_m as u128);
    let bound = big_n * (1u128 << n) * (n as u128 + 1) + s / 2 + 1;
    if big_n != s + 1 || big_m <= bound {
        return fail(format!("N = {big_n}, M = {big_m} violate N = s + 1, M > {bound}"));
    }
    let w = |v: VertexId| inst.weights[v] as u128;
    if w(params.z) != big_m * n as u128 + s / 2 + 1 || inst.color_of[params.z] != P {
        return fail("center weight or color".into());
    }
    for &l in &params.leaves {
        if w(l) != 1 || inst.color_of[l] != P || !inst.edges.contains(&(params.z, l)) {
            return fail(format!("leaf {l}"));
        }
    }
    for (idx, g) in params.gadgets.iter().enumerate() {
        let step = big_n << (idx + 1);
        let a = params.elements[idx] as u128;
        let expect = [
            (g.x_q, big_m + step + a, Q),
            (g.x_r, big_m - step, R),
            (g.y_r, big_m + step - a + 2 * s / n as u128, R),
            (g.y_q, big_m - step, Q),
        ];
        for (v, weight, color) in expect {
            if w(v) != weight || inst.color_of[v] != color {
                return fail(format!("gadget {} vertex {v}", idx + 1));
            }
        }
        // X_i is q-colored, Y_i is r-colored.
        if w(g.x_q) < w(g.x_r) || w(g.y_r) < w(g.y_q) {
            return fail(format!("gadget {} pair colors", idx + 1));
        }
        let adj = [(params.z, g.x_q), (params.z, g.y_q), (g.x_q, g.x_r), (g.y_q, g.y_r)];
        if !adj.iter().all(|e| inst.edges.contains(e)) {
            return fail(format!("gadget {} edges", idx + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{block_tally, evaluate_partition};
    use crate::oracle::solve_brute_force;

    #[test]
    fn two_twos() {
        let pt = partition_to_tree(&[2, 2]).unwrap();
        let p = &pt.params;
        assert_eq!((p.big_n, p.big_m, p.k), (5, 64, 4));
        let w = &pt.instance.weights;
        assert_eq!(w[p.z], 131);
        assert_eq!(w[p.leaves[0]], 1);
        let g1 = p.gadgets[0];
        assert_eq!([w[g1.x_q], w[g1.x_r], w[g1.y_r], w[g1.y_q]], [76, 54, 76, 54]);
        let g2 = p.gadgets[1];
        assert_eq!([w[g2.x_q], w[g2.x_r], w[g2.y_r], w[g2.y_q]], [86, 44, 86, 44]);
        check_partition_tree(&pt.instance, p).unwrap();
    }

    #[test]
    fn witness_tallies() {
        let pt = partition_to_tree(&[2, 2]).unwrap();
        for i in [1, 2] {
            let part = pt.witness(&[i]).unwrap();
            assert_eq!(part.len(), 4);
            let t = block_tally(&pt.instance, &part.blocks[0]).unwrap();
            assert_eq!([t.weight(P), t.weight(Q), t.weight(R)], [131, 130, 130]);
            assert!(evaluate_partition(&pt.instance, &part).is_solution);
        }
        assert!(pt.witness(&[1, 2]).is_err());
        assert!(pt.witness(&[3]).is_err());
        assert!(partition_witness(&[1, 3], &[1]).is_err());
    }

    #[test]
    fn ones_and_errors() {
        let pt = partition_to_tree(&[1, 1]).unwrap();
        assert_eq!((pt.params.big_n, pt.params.big_m, pt.params.k), (3, 39, 4));
        assert!(partition_to_tree(&[1, 2, 3]).is_err());
        assert!(partition_to_tree(&[]).is_err());
    }

    #[test]
    fn normalizes_sums() {
        let pt = partition_to_tree(&[1, 2]).unwrap();
        assert_eq!(pt.params.scale, 2);
        assert_eq!(pt.params.elements, vec![2, 4]);
        check_partition_tree(&pt.instance, &pt.params).unwrap();
        let pt = partition_to_tree(&[1, 2, 3, 4]).unwrap();
        assert_eq!(pt.params.scale, 4);
        let part = pt.witness(&[1, 4]).unwrap();
        assert!(evaluate_partition(&pt.instance, &part).is_solution);
    }

    #[test]
    fn pairs_round_trip() {
        for a in 0..=4u64 {
            for b in (0..=4u64).filter(|b| (a + b) % 2 == 0) {
                let pt = partition_to_tree(&[a, b]).unwrap();
                let r = solve_brute_force(&pt.instance).unwrap();
                assert_eq!(r.answer, a == b, "{{{a}, {b}}}");
            }
        }
    }

    #[test]
    fn refuses_overflow() {
        assert!(matches!(partition_to_tree(&[1; 60]), Err(Error::Capacity(_))));
        assert!(matches!(partition_to_tree(&[u64::MAX, 1]), Err(Error::Capacity(_))));
        assert!(partition_to_tree(&[7; 40]).is_ok());
    }
}
