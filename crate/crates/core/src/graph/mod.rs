//! Finite multigraphs with dense integer ids, the standard constructions
//! (stars, the H-graph, paths, cycles), glueing along subtrees, and
//! subdivision.

mod family;

pub use family::{FamilyDescriptor, FamilyKind, RealizedFamily, Summand, SummandCopy};
pub(crate) use family::support_subgraphs;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Which glued summand an element belongs to: coordinate `coord` of the
/// family, copy number `copy` (both zero-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct SummandLabel {
    pub coord: usize,
    pub copy: usize,
}

impl From<(usize, usize)> for SummandLabel {
    fn from((coord, copy): (usize, usize)) -> Self {
        SummandLabel { coord, copy }
    }
}

impl From<SummandLabel> for (usize, usize) {
    fn from(l: SummandLabel) -> Self {
        (l.coord, l.copy)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    #[serde(default)]
    pub vertices: BTreeMap<VertexId, SummandLabel>,
    #[serde(default)]
    pub edges: BTreeMap<EdgeId, SummandLabel>,
}

impl Labels {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }
}

/// A finite multigraph. Vertices are `0..num_vertices`; edge `e` is stored
/// as `(endpoint 0, endpoint 1)`, which fixes its orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(VertexId, VertexId)>,
    basepoint: Option<VertexId>,
    labels: Labels,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    basepoint: Option<VertexId>,
    #[serde(default)]
    labels: Labels,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        if j.vertices.iter().enumerate().any(|(i, &v)| i != v) {
            return invalid_arg("vertex ids must be 0, 1, ..., |V|-1 in order");
        }
        let mut g = Graph::new(j.vertices.len(), j.edges)?;
        if let Some(b) = j.basepoint {
            g = g.with_basepoint(b)?;
        }
        g.set_labels(j.labels)?;
        Ok(g)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> GraphJson {
        GraphJson {
            vertices: (0..g.num_vertices).collect(),
            edges: g.edges,
            basepoint: g.basepoint,
            labels: g.labels,
        }
    }
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Graph> {
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a >= num_vertices || b >= num_vertices)
        {
            return invalid_arg(format!(
                "edge ({a}, {b}) references a vertex outside 0..{num_vertices}"
            ));
        }
        Ok(Graph {
            num_vertices,
            edges,
            basepoint: None,
            labels: Labels::default(),
        })
    }

    pub fn with_basepoint(mut self, v: VertexId) -> Result<Graph> {
        if v >= self.num_vertices {
            return invalid_arg(format!("basepoint {v} is not a vertex"));
        }
        self.basepoint = Some(v);
        Ok(self)
    }

    pub fn set_labels(&mut self, labels: Labels) -> Result<()> {
        if let Some(v) = labels.vertices.keys().find(|&&v| v >= self.num_vertices) {
            return invalid_arg(format!("label on missing vertex {v}"));
        }
        if let Some(e) = labels.edges.keys().find(|&&e| e >= self.edges.len()) {
            return invalid_arg(format!("label on missing edge {e}"));
        }
        self.labels = labels;
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.num_vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Endpoint `end` (0 or 1) of edge `e`.
    pub fn endpoint(&self, e: EdgeId, end: u8) -> VertexId {
        let (a, b) = self.edges[e];
        if end == 0 {
            a
        } else {
            b
        }
    }

    pub fn basepoint(&self) -> Option<VertexId> {
        self.basepoint
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn vertex_label(&self, v: VertexId) -> Option<SummandLabel> {
        self.labels.vertices.get(&v).copied()
    }

    pub fn edge_label(&self, e: EdgeId) -> Option<SummandLabel> {
        self.labels.edges.get(&e).copied()
    }

    /// Number of edge germs at `v`; a loop counts twice.
    pub fn valence(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Edge germs at `v` as `(edge, end)` pairs with `endpoint(edge, end) == v`.
    pub fn germs(&self, v: VertexId) -> Vec<(EdgeId, u8)> {
        let mut out = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if a == v {
                out.push((e, 0));
            }
            if b == v {
                out.push((e, 1));
            }
        }
        out
    }

    pub fn essential_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.valence(v) >= 3).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    pub fn is_connected(&self) -> bool {
        Subgraph::whole(self).is_connected(self)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.euler_characteristic() == 1
    }

    /// Identify vertex `v` with vertex `u`; ids above `v` shift down by one.
    pub fn identify_vertices(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        if u >= self.num_vertices || v >= self.num_vertices || u == v {
            return invalid_arg("identify_vertices needs two distinct existing vertices");
        }
        let remap = |x: VertexId| {
            let x = if x == v { u } else { x };
            if x > v {
                x - 1
            } else {
                x
            }
        };
        let edges = self.edges.iter().map(|&(a, b)| (remap(a), remap(b))).collect();
        let mut g = Graph::new(self.num_vertices - 1, edges)?;
        g.basepoint = self.basepoint.map(remap);
        g.labels.edges = self.labels.edges.clone();
        g.labels.vertices = self
            .labels
            .vertices
            .iter()
            .filter(|(&x, _)| x != v)
            .map(|(&x, &l)| (remap(x), l))
            .collect();
        Ok(g)
    }

    /// Replace every edge by a path of `t` edges. Original vertices keep their
    /// ids; the interior vertices of edge `e` follow in edge order, and the
    /// pieces of `e` are consecutive edge ids oriented like `e`.
    pub fn subdivide(&self, t: usize) -> Result<Graph> {
        Ok(self.subdivide_with_map(t)?.0)
    }

    /// As [`Graph::subdivide`], also returning the pieces of each old edge.
    pub fn subdivide_with_map(&self, t: usize) -> Result<(Graph, Vec<Vec<EdgeId>>)> {
        if t == 0 {
            return invalid_arg("subdivision factor must be at least 1");
        }
        let mut num_vertices = self.num_vertices;
        let mut edges = Vec::with_capacity(self.edges.len() * t);
        let mut labels = Labels {
            vertices: self.labels.vertices.clone(),
            edges: BTreeMap::new(),
        };
        let mut pieces = Vec::with_capacity(self.edges.len());
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let label = self.edge_label(e);
            let mut prev = a;
            let mut mine = Vec::with_capacity(t);
            for i in 0..t {
                let next = if i + 1 == t {
                    b
                } else {
                    let x = num_vertices;
                    num_vertices += 1;
                    if let Some(l) = label {
                        labels.vertices.insert(x, l);
                    }
                    x
                };
                if let Some(l) = label {
                    labels.edges.insert(edges.len(), l);
                }
                mine.push(edges.len());
                edges.push((prev, next));
                prev = next;
            }
            pieces.push(mine);
        }
        let g = Graph {
            num_vertices,
            edges,
            basepoint: self.basepoint,
            labels,
        };
        Ok((g, pieces))
    }

    /// Subdivide every loop once: loop `e = (u, u)` becomes `(u, x)` and a new
    /// edge `(x, u)` is appended, `x` a new vertex. Other ids are unchanged.
    pub fn normalize_loops(&self) -> (Graph, Vec<LoopSplit>) {
        let mut g = self.clone();
        let mut splits = Vec::new();
        for e in 0..self.edges.len() {
            let (a, b) = self.edges[e];
            if a != b {
                continue;
            }
            let x = g.num_vertices;
            g.num_vertices += 1;
            g.edges[e] = (a, x);
            let new_edge = g.edges.len();
            g.edges.push((x, a));
            if let Some(l) = self.edge_label(e) {
                g.labels.vertices.insert(x, l);
                g.labels.edges.insert(new_edge, l);
            }
            splits.push(LoopSplit {
                edge: e,
                new_vertex: x,
                new_edge,
            });
        }
        (g, splits)
    }
}

/// Record of one loop subdivided by [`Graph::normalize_loops`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopSplit {
    pub edge: EdgeId,
    pub new_vertex: VertexId,
    pub new_edge: EdgeId,
}

/// A subgraph given by explicit vertex and edge sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Subgraph {
    pub fn whole(g: &Graph) -> Subgraph {
        Subgraph {
            vertices: g.vertices().collect(),
            edges: (0..g.num_edges()).collect(),
        }
    }

    /// The closed subgraph spanned by `edges` (endpoints included).
    pub fn from_edges(g: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Subgraph {
        let mut s = Subgraph::default();
        for e in edges {
            let (a, b) = g.edge(e);
            s.edges.insert(e);
            s.vertices.insert(a);
            s.vertices.insert(b);
        }
        s
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if let Some(v) = self.vertices.iter().find(|&&v| v >= g.num_vertices()) {
            return invalid_arg(format!("subgraph vertex {v} is not in the graph"));
        }
        for &e in &self.edges {
            if e >= g.num_edges() {
                return invalid_arg(format!("subgraph edge {e} is not in the graph"));
            }
            let (a, b) = g.edge(e);
            if !self.vertices.contains(&a) || !self.vertices.contains(&b) {
                return invalid_arg(format!("subgraph contains edge {e} but not both endpoints"));
            }
        }
        Ok(())
    }

    pub fn is_connected(&self, g: &Graph) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return true;
        };
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &e in &self.edges {
            let (a, b) = g.edge(e);
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    pub fn is_tree(&self, g: &Graph) -> bool {
        self.is_connected(g) && self.vertices.len() == self.edges.len() + 1
    }

    pub fn is_disjoint(&self, other: &Subgraph) -> bool {
        self.vertices.is_disjoint(&other.vertices) && self.edges.is_disjoint(&other.edges)
    }

    /// Extend through loop normalization: a split loop drags its new vertex
    /// and edge along.
    pub fn extend_through_splits(&mut self, splits: &[LoopSplit]) {
        for s in splits {
            if self.edges.contains(&s.edge) {
                self.vertices.insert(s.new_vertex);
                self.edges.insert(s.new_edge);
            }
        }
    }
}

/// A partial isomorphism used for glueing: vertex and edge pairs
/// `(element of the glued-in graph, element of the host graph)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub vertices: Vec<(VertexId, VertexId)>,
    #[serde(default)]
    pub edges: Vec<(EdgeId, EdgeId)>,
}

impl Correspondence {
    /// A wedge: identify vertex `b_vertex` of the glued-in graph with
    /// `a_vertex` of the host.
    pub fn point(b_vertex: VertexId, a_vertex: VertexId) -> Correspondence {
        Correspondence {
            vertices: vec![(b_vertex, a_vertex)],
            edges: Vec::new(),
        }
    }

    /// Check that this is an isomorphism between a subtree of `b` and a
    /// subtree of `a`.
    pub fn validate(&self, a: &Graph, b: &Graph) -> Result<()> {
        if self.vertices.is_empty() {
            return invalid_arg("glueing needs at least one identified vertex");
        }
        let mut vmap = BTreeMap::new();
        let mut vimage = BTreeSet::new();
        for &(vb, va) in &self.vertices {
            if vb >= b.num_vertices() || va >= a.num_vertices() {
                return invalid_arg(format!("glue pair ({vb}, {va}) is out of range"));
            }
            if vmap.insert(vb, va).is_some() || !vimage.insert(va) {
                return invalid_arg("glue vertex correspondence is not injective");
            }
        }
        let mut eimage = BTreeSet::new();
        let mut edomain = BTreeSet::new();
        for &(eb, ea) in &self.edges {
            if eb >= b.num_edges() || ea >= a.num_edges() {
                return invalid_arg(format!("glue edge pair ({eb}, {ea}) is out of range"));
            }
            if !edomain.insert(eb) || !eimage.insert(ea) {
                return invalid_arg("glue edge correspondence is not injective");
            }
            let (b0, b1) = b.edge(eb);
            let (Some(&x), Some(&y)) = (vmap.get(&b0), vmap.get(&b1)) else {
                return invalid_arg(format!("endpoints of glued edge {eb} are not identified"));
            };
            let (a0, a1) = a.edge(ea);
            if !((x, y) == (a0, a1) || (x, y) == (a1, a0)) {
                return invalid_arg(format!("glued edges {eb} and {ea} have mismatched endpoints"));
            }
        }
        let hb = Subgraph {
            vertices: vmap.keys().copied().collect(),
            edges: edomain,
        };
        let ha = Subgraph {
            vertices: vimage,
            edges: eimage,
        };
        if !hb.is_tree(b) || !ha.is_tree(a) {
            return invalid_arg("only glueing along a single vertex or a subtree is supported");
        }
        if !hb.edges.is_empty() && !(a.is_tree() && b.is_tree()) {
            return invalid_arg("glueing along a subtree with edges requires both graphs to be trees");
        }
        Ok(())
    }
}

/// Result of glueing `b` into `a`: the new graph and where each element of
/// `b` ended up.
#[derive(Clone, Debug)]
pub struct Glued {
    pub graph: Graph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

/// Disjoint union of `a` and `b` with the subtree named by `along` identified.
/// Elements of `a` keep their ids; the remaining elements of `b` are appended
/// in order. Labels of `a` are kept, new elements carry `label` if given.
pub fn glue(a: &Graph, b: &Graph, along: &Correspondence) -> Result<Glued> {
    glue_labeled(a, b, along, None)
}

pub(crate) fn glue_labeled(
    a: &Graph,
    b: &Graph,
    along: &Correspondence,
    label: Option<SummandLabel>,
) -> Result<Glued> {
    along.validate(a, b)?;
    let mut g = a.clone();
    let vfixed: BTreeMap<_, _> = along.vertices.iter().copied().collect();
    let efixed: BTreeMap<_, _> = along.edges.iter().copied().collect();
    let mut vertex_map = Vec::with_capacity(b.num_vertices());
    for v in b.vertices() {
        match vfixed.get(&v) {
            Some(&va) => vertex_map.push(va),
            None => {
                let x = g.num_vertices;
                g.num_vertices += 1;
                if let Some(l) = label {
                    g.labels.vertices.insert(x, l);
                }
                vertex_map.push(x);
            }
        }
    }
    let mut edge_map = Vec::with_capacity(b.num_edges());
    for (e, &(x, y)) in b.edges.iter().enumerate() {
        match efixed.get(&e) {
            Some(&ea) => edge_map.push(ea),
            None => {
                let id = g.edges.len();
                g.edges.push((vertex_map[x], vertex_map[y]));
                if let Some(l) = label {
                    g.labels.edges.insert(id, l);
                }
                edge_map.push(id);
            }
        }
    }
    Ok(Glued {
        graph: g,
        vertex_map,
        edge_map,
    })
}

pub fn point() -> Graph {
    Graph::new(1, Vec::new())
        .and_then(|g| g.with_basepoint(0))
        .expect("point is valid")
}

/// Star with `k` leaves; the center is vertex 0 and the basepoint, leaf `i`
/// is vertex `i` on edge `i - 1`.
pub fn make_star(k: usize) -> Result<Graph> {
    if k == 0 {
        return invalid_arg("a star needs at least one leaf");
    }
    Graph::new(k + 1, (1..=k).map(|i| (0, i)).collect())?.with_basepoint(0)
}

/// The tree with two adjacent vertices of valence three: vertices 0 and 1
/// are essential and joined by edge 0; 2, 3 hang off 0 and 4, 5 off 1.
pub fn make_h_graph() -> Graph {
    Graph::new(6, vec![(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).expect("H-graph is valid")
}

/// Path with `m` edges `(i, i + 1)`; basepoint 0.
pub fn make_path_graph(m: usize) -> Result<Graph> {
    if m == 0 {
        return invalid_arg("a path needs at least one edge");
    }
    Graph::new(m + 1, (0..m).map(|i| (i, i + 1)).collect())?.with_basepoint(0)
}

/// Cycle with `m >= 3` vertices and edges `(i, i + 1 mod m)`; basepoint 0.
pub fn make_cycle_graph(m: usize) -> Result<Graph> {
    if m < 3 {
        return invalid_arg("a simple cycle needs at least three vertices");
    }
    Graph::new(m, (0..m).map(|i| (i, (i + 1) % m)).collect())?.with_basepoint(0)
}

/// A "spider": one essential vertex `0` with `legs_a` leaves, joined by an
/// edge to a second essential vertex `1` with `legs_b` leaves.
pub fn make_two_center_tree(legs_a: usize, legs_b: usize) -> Result<Graph> {
    if legs_a < 2 || legs_b < 2 {
        return invalid_arg("both centers need at least two extra legs to be essential");
    }
    let mut edges = vec![(0, 1)];
    let mut next = 2;
    for _ in 0..legs_a {
        edges.push((0, next));
        next += 1;
    }
    for _ in 0..legs_b {
        edges.push((1, next));
        next += 1;
    }
    Graph::new(next, edges)
}
