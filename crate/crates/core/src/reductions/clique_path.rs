//! Clique on a `d`-regular graph to a unit-weight path instance.
//!
//! Every source vertex `v` becomes a path `P_v` of `4N - 1` vertices: `N - 1`
//! `q` vertices, then a stretch of `3N` where every third vertex carries the
//! private color `cv_v` and the rest get fresh one-off colors. Every source
//! edge `{u, v}` becomes a four-vertex path `cv_u, r, r, cv_v`, and `S` adds
//! `N + 1` isolated `p` vertices and `N - (n - l)` isolated `q` vertices.
//!
//! Layout: vertex paths in source order, then edge paths in source edge
//! order, then `S` (`p` vertices first). Ids follow the layout. In connected
//! mode a path of `M` fresh-colored vertices is spliced between every two
//! consecutive components, so the whole instance is the path `0, 1, 2, ...`.

use std::collections::HashSet;
use std::ops::Range;

use super::SourceGraph;
use crate::error::{Error, Result};
use crate::eval::{components_without, Partition};
use crate::instance::{ColorId, Instance, Mode, VertexId};

/// Generated instances beyond this many vertices are refused.
pub const MAX_VERTICES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliquePathParams {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub l: usize,
    /// `4n²`.
    pub big_n: usize,
    /// `4Nn + 3m`, the connector length.
    pub big_m: usize,
    /// Components of the disconnected construction, `2N + l + m + 1`.
    pub z: usize,
    pub connected: bool,
    pub k: usize,
}

impl CliquePathParams {
    pub fn new(n: usize, m: usize, d: usize, l: usize, connected: bool) -> Result<Self> {
        let cap = || Error::Capacity(format!("clique construction for n = {n} does not fit"));
        let big_n = 4usize.checked_mul(n).and_then(|x| x.checked_mul(n)).ok_or_else(cap)?;
        let big_m = (4 * big_n)
            .checked_mul(n)
            .and_then(|x| x.checked_add(3 * m))
            .ok_or_else(cap)?;
        let z = 2 * big_n + l + m + 1;
        let base = (n - l) * 3 * big_n + d * l + l * l.saturating_sub(1) / 2;
        let k = if connected {
            (z - 1)
                .checked_mul(big_m + 1)
                .and_then(|x| x.checked_add(base))
                .ok_or_else(cap)?
        } else {
            base + z
        };
        Ok(CliquePathParams {
            n,
            m,
            d,
            l,
            big_n,
            big_m,
            z,
            connected,
            k,
        })
    }

    pub fn vertex_count(&self) -> Option<usize> {
        let n = self.n;
        let core = n * (4 * self.big_n - 1) + 4 * self.m + 2 * self.big_n - (n - self.l) + 1;
        if self.connected {
            (self.z - 1).checked_mul(self.big_m)?.checked_add(core)
        } else {
            Some(core)
        }
    }
}

/// Where each gadget sits in the generated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueGadgets {
    /// `P_v` for every source vertex.
    pub vertex_paths: Vec<Range<VertexId>>,
    /// `P'_e` for every source edge, as `[cv_u, r, r, cv_v]`.
    pub edge_paths: Vec<[VertexId; 4]>,
    pub s_p: Vec<VertexId>,
    pub s_q: Vec<VertexId>,
    /// Connector paths in layout order; empty in disconnected mode.
    pub connectors: Vec<Range<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePath {
    pub instance: Instance,
    pub params: CliquePathParams,
    pub gadgets: CliqueGadgets,
}

struct Builder {
    inst: Instance,
    fresh: usize,
    connected: bool,
    connector_len: usize,
    last: Option<VertexId>,
    connectors: Vec<Range<VertexId>>,
}

impl Builder {
    fn vertex(&mut self, c: ColorId) -> VertexId {
        self.inst.weights.push(1);
        self.inst.color_of.push(c);
        self.inst.weights.len() - 1
    }

    fn fresh_color(&mut self) -> ColorId {
        self.inst.colors.push(format!("fresh_{}", self.fresh));
        self.fresh += 1;
        ColorId(self.inst.colors.len() - 1)
    }

    /// Appends a path component with the given colors and returns its ids.
    fn component(&mut self, colors: &[ColorId]) -> Range<VertexId> {
        if self.connected && self.last.is_some() {
            let start = self.inst.weights.len();
            for _ in 0..self.connector_len {
                let c = self.fresh_color();
                self.chain(c);
            }
            self.connectors.push(start..self.inst.weights.len());
        }
        let start = self.inst.weights.len();
        let mut prev = if self.connected { self.last } else { None };
        for &c in colors {
            let v = self.vertex(c);
            if let Some(u) = prev {
                self.inst.edges.push((u, v));
            }
            prev = Some(v);
        }
        self.last = prev;
        start..self.inst.weights.len()
    }

    fn chain(&mut self, c: ColorId) {
        let v = self.vertex(c);
        if let Some(u) = self.last {
            self.inst.edges.push((u, v));
        }
        self.last = Some(v);
    }
}

const P: ColorId = ColorId(0);
const Q: ColorId = ColorId(1);
const R: ColorId = ColorId(2);

fn private_color(v: usize) -> ColorId {
    ColorId(3 + v)
}

/// Builds the instance for `(graph, l)`. Fails on a non-regular graph, on
/// `l` outside `1..=n`, or when the result would be too large.
pub fn clique_to_path(graph: &SourceGraph, l: usize, connected: bool) -> Result<CliquePath> {
    let d = graph
        .regular_degree()
        .ok_or_else(|| Error::invalid("source graph is not regular"))?;
    let n = graph.n;
    if l == 0 || l > n {
        return Err(Error::invalid(format!("clique size {l} outside 1..={n}")));
    }
    let params = CliquePathParams::new(n, graph.edges.len(), d, l, connected)?;
    match params.vertex_count() {
        Some(v) if v <= MAX_VERTICES => {}
        _ => {
            return Err(Error::Capacity(format!(
                "construction would exceed {MAX_VERTICES} vertices"
            )))
        }
    }
    let big_n = params.big_n;

    let mut colors: Vec<String> = vec!["p".into(), "q".into(), "r".into()];
    colors.extend((0..n).map(|v| format!("cv_{v}")));
    let mut b = Builder {
        inst: Instance {
            colors,
            target: P,
            k: params.k,
            mode: if connected { Mode::Connected } else { Mode::Disconnected },
            weights: Vec::new(),
            color_of: Vec::new(),
            edges: Vec::new(),
        },
        fresh: 0,
        connected,
        connector_len: params.big_m,
        last: None,
        connectors: Vec::new(),
    };

    let mut vertex_paths = Vec::with_capacity(n);
    for v in 0..n {
        let mut cs = vec![Q; big_n - 1];
        for j in big_n..4 * big_n {
            // 1-based position j; private color at N - 1 + 3i.
            let c = if (j + 1 - big_n) % 3 == 0 {
                private_color(v)
            } else {
                b.fresh_color()
            };
            cs.push(c);
        }
        vertex_paths.push(b.component(&cs));
    }
    let mut edge_paths = Vec::with_capacity(graph.edges.len());
    for &(u, v) in &graph.edges {
        let r = b.component(&[private_color(u), R, R, private_color(v)]);
        edge_paths.push([r.start, r.start + 1, r.start + 2, r.start + 3]);
    }
    let s_p = (0..=big_n).map(|_| b.component(&[P]).start).collect();
    let s_q = (0..big_n - (n - l)).map(|_| b.component(&[Q]).start).collect();

    let gadgets = CliqueGadgets {
        vertex_paths,
        edge_paths,
        s_p,
        s_q,
        connectors: b.connectors,
    };
    Ok(CliquePath {
        instance: b.inst,
        params,
        gadgets,
    })
}

impl CliquePath {
    /// The partition induced by a clique `clique` of size `l` in `graph`,
    /// which must be the graph this instance was built from.
    pub fn witness(&self, graph: &SourceGraph, clique: &[usize]) -> Result<Partition> {
        let p = &self.params;
        let members: HashSet<usize> = clique.iter().copied().collect();
        if clique.len() != p.l || members.len() != p.l {
            return Err(Error::invalid(format!(
                "witness needs {} distinct vertices, got {:?}",
                p.l, clique
            )));
        }
        if let Some(&v) = clique.iter().find(|&&v| v >= graph.n) {
            return Err(Error::invalid(format!("vertex {v} is not in the source graph")));
        }
        if !graph.is_clique(clique) {
            return Err(Error::invalid(format!("{clique:?} is not a clique")));
        }
        let big_n = p.big_n;
        let mut cut = HashSet::new();
        for (v, path) in self.gadgets.vertex_paths.iter().enumerate() {
            if !members.contains(&v) {
                // Every edge not joining two q vertices: positions N-1..4N-1.
                for t in path.start + big_n - 2..path.end - 1 {
                    cut.insert((t, t + 1));
                }
            }
        }
        for (&(u, v), path) in graph.edges.iter().zip(&self.gadgets.edge_paths) {
            let (iu, iv) = (members.contains(&u), members.contains(&v));
            if iu {
                cut.insert((path[0], path[1]));
            }
            if iv {
                cut.insert((path[2], path[3]));
            }
            if iu && iv {
                cut.insert((path[1], path[2]));
            }
        }
        for (i, c) in self.gadgets.connectors.iter().enumerate() {
            for t in c.start - 1..c.end {
                // Keeping one connector edge makes the block count exactly k.
                if i == 0 && t == c.start {
                    continue;
                }
                cut.insert((t, t + 1));
            }
        }
        Ok(components_without(&self.instance, &cut))
    }
}

/// Builds the instance and the witness for `clique` in one go.
pub fn clique_witness(graph: &SourceGraph, l: usize, clique: &[usize], connected: bool) -> Result<Partition> {
    clique_to_path(graph, l, connected)?.witness(graph, clique)
}

/// Structural check of a generated instance against its parameters, with
/// every count recomputed from `n`, `m`, `d` and `l`.
pub fn check_clique_path(inst: &Instance, params: &CliquePathParams) -> Result<()> {
    let fail = |what: String| Err(Error::invalid(format!("clique-path check: {what}")));
    let (n, m, d, l) = (params.n, params.m, params.d, params.l);
    let big_n = 4 * n * n;
    let big_m = 4 * big_n * n + 3 * m;
    let z = 2 * big_n + l + m + 1;
    let removed = (n - l) * 3 * big_n + d * l + l * (l - 1) / 2;
    let k = if params.connected {
        removed + (z - 1) * (big_m + 1)
    } else {
        removed + z
    };
    if (params.big_n, params.big_m, params.z, params.k) != (big_n, big_m, z, k) {
        return fail(format!("parameters {params:?} disagree with the formulas"));
    }
    if inst.k != k {
        return fail(format!("k = {} but the formula gives {k}", inst.k));
    }
    if let Some(v) = inst.weights.iter().position(|&w| w != 1) {
        return fail(format!("vertex {v} has weight {}", inst.weights[v]));
    }
    let core = n * (4 * big_n - 1) + 4 * m + 2 * big_n - (n - l) + 1;
    let expected = if params.connected { core + (z - 1) * big_m } else { core };
    if inst.vertex_count() != expected {
        return fail(format!("{} vertices, expected {expected}", inst.vertex_count()));
    }
    let adj = inst.adjacency();
    let forest_of_paths = adj.iter().all(|a| a.len() <= 2) && inst.edges.len() + inst.component_count() == expected;
    if !forest_of_paths {
        return fail("not a union of paths".into());
    }
    if params.connected {
        if inst.mode != Mode::Connected || inst.component_count() != 1 {
            return fail("connected mode must be a single path".into());
        }
    } else if inst.mode != Mode::Disconnected || inst.component_count() != z {
        return fail(format!("{} components, expected {z}", inst.component_count()));
    }
    let mut count = vec![0usize; inst.color_count()];
    for c in &inst.color_of {
        count[c.index()] += 1;
    }
    let name_count = |name: &str| inst.color_id(name).map_or(0, |c| count[c.index()]);
    if name_count("p") != big_n + 1 {
        return fail(format!("{} p vertices", name_count("p")));
    }
    if name_count("q") != n * (big_n - 1) + big_n - (n - l) {
        return fail(format!("{} q vertices", name_count("q")));
    }
    if name_count("r") != 2 * m {
        return fail(format!("{} r vertices", name_count("r")));
    }
    for v in 0..n {
        let c = name_count(&format!("cv_{v}"));
        if c != big_n + d {
            return fail(format!("cv_{v} has {c} vertices"));
        }
    }
    let singles = inst
        .colors
        .iter()
        .zip(&count)
        .filter(|(name, _)| name.starts_with("fresh_"));
    if let Some((name, c)) = singles.clone().find(|(_, &c)| c != 1) {
        return fail(format!("{name} used {c} times"));
    }
    let fresh = singles.count();
    let expected_fresh = 2 * big_n * n + if params.connected { (z - 1) * big_m } else { 0 };
    if fresh != expected_fresh {
        return fail(format!("{fresh} one-off colors, expected {expected_fresh}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::evaluate_partition;

    fn q_colored(inst: &Instance, part: &Partition) -> usize {
        evaluate_partition(inst, part).colored_count[Q.index()]
    }

    #[test]
    fn k3_disconnected_shape() {
        let g = SourceGraph::complete(3);
        let cp = clique_to_path(&g, 3, false).unwrap();
        let p = cp.params;
        assert_eq!((p.big_n, p.z, p.k), (36, 79, 88));
        assert_eq!(cp.instance.component_count(), 79);
        assert!(cp.gadgets.vertex_paths.iter().all(|r| r.len() == 143));
        assert_eq!(cp.gadgets.s_p.len() + cp.gadgets.s_q.len(), 73);
        check_clique_path(&cp.instance, &p).unwrap();

        let w = cp.witness(&g, &[0, 1, 2]).unwrap();
        let report = evaluate_partition(&cp.instance, &w);
        assert_eq!(w.len(), 88);
        assert!(report.is_solution);
        assert_eq!(report.uniquely_p_count, 37);
        assert_eq!(q_colored(&cp.instance, &w), 36);
    }

    #[test]
    fn k3_connected_shape() {
        let g = SourceGraph::complete(3);
        let cp = clique_to_path(&g, 3, true).unwrap();
        assert_eq!(cp.instance.vertex_count(), 34_912);
        assert_eq!(cp.params.k, 34_485);
        assert_eq!(cp.params.big_m, 441);
        assert_eq!(cp.gadgets.connectors.len(), 78);
        check_clique_path(&cp.instance, &cp.params).unwrap();
        let w = cp.witness(&g, &[2, 0, 1]).unwrap();
        let report = evaluate_partition(&cp.instance, &w);
        assert!(report.is_solution);
        assert_eq!(report.uniquely_p_count, 37);
        assert_eq!(q_colored(&cp.instance, &w), 36);
    }

    #[test]
    fn c5_both_modes() {
        let g = SourceGraph::cycle(5);
        for connected in [false, true] {
            let cp = clique_to_path(&g, 2, connected).unwrap();
            assert_eq!(cp.params.big_n, 100);
            check_clique_path(&cp.instance, &cp.params).unwrap();
            for e in [[0, 1], [3, 4], [4, 0]] {
                let w = cp.witness(&g, &e).unwrap();
                let report = evaluate_partition(&cp.instance, &w);
                assert!(report.is_solution, "{e:?}");
                assert_eq!(report.uniquely_p_count, 101);
                assert_eq!(q_colored(&cp.instance, &w), 100);
            }
        }
        assert_eq!(clique_to_path(&g, 2, false).unwrap().params.k, 1113);
    }

    #[test]
    fn vertex_gadget_colors() {
        let g = SourceGraph::complete(3);
        let cp = clique_to_path(&g, 1, false).unwrap();
        let path = cp.gadgets.vertex_paths[1].clone();
        let cv = cp.instance.color_id("cv_1").unwrap();
        let at = |pos: usize| cp.instance.color_of[path.start + pos - 1];
        assert!((1..36).all(|j| at(j) == Q));
        assert!((1..=36).all(|i| at(35 + 3 * i) == cv));
        assert_ne!(at(36), cv);
        assert_ne!(at(37), at(36));
        let e = cp.gadgets.edge_paths[0];
        assert_eq!(cp.instance.color_name(cp.instance.color_of[e[0]]), "cv_0");
        assert_eq!(cp.instance.color_of[e[1]], R);
        assert_eq!(cp.instance.color_name(cp.instance.color_of[e[3]]), "cv_1");
    }

    #[test]
    fn rejects_bad_inputs() {
        let path = SourceGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(clique_to_path(&path, 2, false).is_err());
        let g = SourceGraph::complete(3);
        assert!(clique_to_path(&g, 4, false).is_err());
        assert!(clique_to_path(&g, 0, false).is_err());
        assert!(clique_witness(&g, 3, &[0, 1], false).is_err());
        let c5 = SourceGraph::cycle(5);
        assert!(clique_witness(&c5, 2, &[0, 2], false).is_err());
        assert!(clique_witness(&c5, 2, &[0, 0], false).is_err());
        assert!(SourceGraph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn checker_catches_tampering() {
        let g = SourceGraph::complete(3);
        let cp = clique_to_path(&g, 3, false).unwrap();
        let mut bad = cp.instance.clone();
        bad.weights[5] = 2;
        assert!(check_clique_path(&bad, &cp.params).is_err());
        let mut bad = cp.instance.clone();
        bad.k += 1;
        assert!(check_clique_path(&bad, &cp.params).is_err());
        let mut bad = cp.instance.clone();
        bad.edges.pop();
        assert!(check_clique_path(&bad, &cp.params).is_err());
    }
}
