//! The instance data model and structural predicates over it.

use std::collections::{HashSet, VecDeque};
use std::fmt;

pub type VertexId = usize;

/// Index into [`Instance::colors`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorId(pub usize);

impl ColorId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Whether the instance is required to be connected.
///
/// Generated intermediate reductions are disconnected unions of paths; they
/// can be evaluated but not solved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Connected,
    Disconnected,
}

/// A vertex-colored, vertex-weighted graph together with the target color and
/// the number of districts.
///
/// Vertices are the dense range `0..vertex_count()`; `weights[v]` and
/// `color_of[v]` describe vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    /// Color names, in declaration order. `ColorId(i)` names `colors[i]`.
    pub colors: Vec<String>,
    pub target: ColorId,
    pub k: usize,
    pub mode: Mode,
    pub weights: Vec<u64>,
    pub color_of: Vec<ColorId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceViolation {
    NoVertices,
    NoColors,
    LengthMismatch { weights: usize, colors: usize },
    DuplicateColorName(String),
    TargetNotInColors,
    UnknownColor { vertex: VertexId },
    DanglingEdge { edge: (VertexId, VertexId) },
    SelfLoop { vertex: VertexId },
    DuplicateEdge { edge: (VertexId, VertexId) },
    Disconnected,
    KOutOfRange { k: usize, vertex_count: usize },
    WeightOverflow,
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceViolation::NoVertices => write!(f, "no vertices"),
            InstanceViolation::NoColors => write!(f, "no colors"),
            InstanceViolation::LengthMismatch { weights, colors } => {
                write!(f, "weight table has {weights} entries but color table has {colors}")
            }
            InstanceViolation::DuplicateColorName(name) => write!(f, "duplicate color {name}"),
            InstanceViolation::TargetNotInColors => write!(f, "target color not in colors"),
            InstanceViolation::UnknownColor { vertex } => {
                write!(f, "vertex {vertex} has a color not in colors")
            }
            InstanceViolation::DanglingEdge { edge } => {
                write!(f, "edge {}-{} references an unknown vertex", edge.0, edge.1)
            }
            InstanceViolation::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            InstanceViolation::DuplicateEdge { edge } => {
                write!(f, "duplicate edge {}-{}", edge.0, edge.1)
            }
            InstanceViolation::Disconnected => write!(f, "disconnected"),
            InstanceViolation::KOutOfRange { k, vertex_count } => {
                write!(f, "k out of range (k = {k}, {vertex_count} vertices)")
            }
            InstanceViolation::WeightOverflow => write!(f, "total weight exceeds 2^63 - 1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Path,
    Star,
    Diameter3Tree,
    Tree,
    GeneralConnected,
    Disconnected,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Shape::Path => "path",
            Shape::Star => "star",
            Shape::Diameter3Tree => "diam3-tree",
            Shape::Tree => "tree",
            Shape::GeneralConnected => "general-connected",
            Shape::Disconnected => "disconnected",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub is_tree: bool,
    pub is_path: bool,
    /// `None` when the graph is disconnected.
    pub diameter: Option<usize>,
    pub shape: Shape,
}

impl Instance {
    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color_id(&self, name: &str) -> Option<ColorId> {
        self.colors.iter().position(|c| c == name).map(ColorId)
    }

    pub fn color_name(&self, c: ColorId) -> &str {
        &self.colors[c.0]
    }

    /// `w_q(v)`: the weight of `v` if it has color `q`, else 0.
    pub fn weight_in(&self, v: VertexId, q: ColorId) -> u64 {
        if self.color_of[v] == q {
            self.weights[v]
        } else {
            0
        }
    }

    /// Adjacency lists with neighbors in ascending order.
    ///
    /// Panics if an edge references a vertex outside `0..vertex_count()`.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && self.edges.len() == n - 1 && self.is_connected()
    }

    /// Reports every structural problem with the instance. An empty list
    /// means the instance is valid.
    ///
    /// Connectivity is not required for [`Mode::Disconnected`] instances.
    pub fn validate(&self) -> Vec<InstanceViolation> {
        let mut out = Vec::new();
        let n = self.vertex_count();
        if n == 0 {
            out.push(InstanceViolation::NoVertices);
        }
        if self.colors.is_empty() {
            out.push(InstanceViolation::NoColors);
        }
        if self.color_of.len() != n {
            out.push(InstanceViolation::LengthMismatch {
                weights: n,
                colors: self.color_of.len(),
            });
        }
        let mut names = HashSet::new();
        for name in &self.colors {
            if !names.insert(name.as_str()) {
                out.push(InstanceViolation::DuplicateColorName(name.clone()));
            }
        }
        if self.target.0 >= self.colors.len() {
            out.push(InstanceViolation::TargetNotInColors);
        }
        for (v, c) in self.color_of.iter().enumerate() {
            if c.0 >= self.colors.len() {
                out.push(InstanceViolation::UnknownColor { vertex: v });
            }
        }

        let mut graph_ok = true;
        let mut seen_edges = HashSet::new();
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                out.push(InstanceViolation::DanglingEdge { edge: (a, b) });
                graph_ok = false;
            } else if a == b {
                out.push(InstanceViolation::SelfLoop { vertex: a });
            } else if !seen_edges.insert((a.min(b), a.max(b))) {
                out.push(InstanceViolation::DuplicateEdge { edge: (a, b) });
            }
        }
        if graph_ok && n > 0 && self.mode == Mode::Connected && !self.is_connected() {
            out.push(InstanceViolation::Disconnected);
        }
        if self.k == 0 || self.k > n {
            out.push(InstanceViolation::KOutOfRange {
                k: self.k,
                vertex_count: n,
            });
        }
        let total = self.weights.iter().try_fold(0u64, |acc, &w| acc.checked_add(w));
        if total.is_none_or(|t| t > i64::MAX as u64) {
            out.push(InstanceViolation::WeightOverflow);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Classifies the underlying graph. Expects a graph without dangling
    /// edges (see [`Instance::validate`]).
    pub fn classify_shape(&self) -> ShapeReport {
        let n = self.vertex_count();
        let adj = self.adjacency();
        if n == 0 || !self.is_connected() {
            return ShapeReport {
                is_tree: false,
                is_path: false,
                diameter: None,
                shape: Shape::Disconnected,
            };
        }
        let is_tree = self.edges.len() == n - 1;
        let is_path = is_tree && adj.iter().all(|l| l.len() <= 2);
        let diameter = if is_tree {
            let (far, _) = farthest(&adj, 0);
            farthest(&adj, far).1
        } else {
            (0..n).map(|s| farthest(&adj, s).1).max().unwrap_or(0)
        };
        let shape = if is_path {
            Shape::Path
        } else if is_tree && diameter <= 2 {
            Shape::Star
        } else if is_tree && diameter == 3 {
            Shape::Diameter3Tree
        } else if is_tree {
            Shape::Tree
        } else {
            Shape::GeneralConnected
        };
        ShapeReport {
            is_tree,
            is_path,
            diameter: Some(diameter),
            shape,
        }
    }
}

/// BFS eccentricity: the farthest vertex from `source` and its distance.
fn farthest(adj: &[Vec<VertexId>], source: VertexId) -> (VertexId, usize) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut best = (source, 0);
    while let Some(u) = queue.pop_front() {
        if dist[u] > best.1 {
            best = (u, dist[u]);
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    best
}
