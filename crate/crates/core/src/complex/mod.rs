//! The combinatorial cube-complex model of `Conf_n(G)` and of the sink
//! variant `ConfSink_n(G, W)`, plus the classical discretized complex used
//! as an independent check.
//!
//! A 0-cell places every particle on a vertex or inside an edge; the
//! particles inside one edge are ordered from endpoint 0 to endpoint 1 and
//! sit at evenly spaced positions. A q-cell is a 0-cell together with q
//! moves: a particle in the extremal slot of an edge sliding to the
//! adjacent endpoint. No two particles may approach or rest on the same
//! non-sink vertex.

mod oracle;

pub use oracle::{build_abrams_oracle, OracleCell, OraclePlace};

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::graph::{EdgeId, Graph, Subgraph, VertexId};
use crate::homology::{Chain, SparseIntMatrix};

/// Default refusal threshold for a single complex.
pub const DEFAULT_MAX_CELLS: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Vertex(VertexId),
    /// Slot 0 is the one nearest endpoint 0 of the edge.
    Edge { edge: EdgeId, slot: usize },
}

/// `particle` slides from the extremal slot of `edge` at `end` onto
/// `endpoint(edge, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub particle: usize,
    pub edge: EdgeId,
    pub end: u8,
}

/// A cell of the combinatorial model. `places[p]` is the resting position of
/// particle `p`; `moves` is sorted by particle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModelCell {
    places: Vec<Place>,
    moves: Vec<Move>,
}

impl ModelCell {
    /// Builds a cell and checks every model invariant against `g` and `sinks`.
    pub fn new(
        places: Vec<Place>,
        mut moves: Vec<Move>,
        g: &Graph,
        sinks: &BTreeSet<VertexId>,
    ) -> Result<ModelCell> {
        moves.sort();
        let cell = ModelCell { places, moves };
        cell.check(g, sinks)?;
        Ok(cell)
    }

    /// No invariant checks; `moves` must already be sorted by particle.
    pub(crate) fn from_parts(places: Vec<Place>, moves: Vec<Move>) -> ModelCell {
        ModelCell { places, moves }
    }

    pub fn dim(&self) -> usize {
        self.moves.len()
    }

    pub fn num_particles(&self) -> usize {
        self.places.len()
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Particles on edge `e`, from endpoint 0 to endpoint 1.
    pub fn edge_tuple(&self, e: EdgeId) -> Vec<usize> {
        let mut on: Vec<(usize, usize)> = self
            .places
            .iter()
            .enumerate()
            .filter_map(|(p, pl)| match *pl {
                Place::Edge { edge, slot } if edge == e => Some((slot, p)),
                _ => None,
            })
            .collect();
        on.sort();
        on.into_iter().map(|(_, p)| p).collect()
    }

    pub fn occupants(&self, v: VertexId) -> Vec<usize> {
        self.places
            .iter()
            .enumerate()
            .filter(|(_, pl)| **pl == Place::Vertex(v))
            .map(|(p, _)| p)
            .collect()
    }

    /// Vertex and edge ids touched by this cell (resting places and move
    /// targets).
    fn touches(&self, g: &Graph, h: &Subgraph) -> bool {
        self.places.iter().all(|pl| match *pl {
            Place::Vertex(v) => h.vertices.contains(&v),
            Place::Edge { edge, .. } => h.edges.contains(&edge),
        }) && self.moves.iter().all(|m| {
            h.edges.contains(&m.edge) && h.vertices.contains(&g.endpoint(m.edge, m.end))
        })
    }

    pub fn check(&self, g: &Graph, sinks: &BTreeSet<VertexId>) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidState(msg));
        let mut tuples: HashMap<EdgeId, Vec<usize>> = HashMap::new();
        let mut load = vec![0usize; g.num_vertices()];
        for (p, pl) in self.places.iter().enumerate() {
            match *pl {
                Place::Vertex(v) => {
                    if v >= g.num_vertices() {
                        return bad(format!("particle {p} on missing vertex {v}"));
                    }
                    load[v] += 1;
                }
                Place::Edge { edge, slot } => {
                    if edge >= g.num_edges() {
                        return bad(format!("particle {p} on missing edge {edge}"));
                    }
                    tuples.entry(edge).or_default().push(slot);
                }
            }
        }
        for (e, slots) in &mut tuples {
            slots.sort();
            if slots.iter().enumerate().any(|(i, &s)| i != s) {
                return bad(format!("slots on edge {e} are not 0..len"));
            }
        }
        let mut moved = BTreeSet::new();
        for m in &self.moves {
            if !moved.insert(m.particle) {
                return bad(format!("particle {} moves twice", m.particle));
            }
            let Some(Place::Edge { edge, slot }) = self.places.get(m.particle).copied() else {
                return bad(format!("moving particle {} is not inside an edge", m.particle));
            };
            if edge != m.edge {
                return bad(format!("particle {} moves along the wrong edge", m.particle));
            }
            let len = tuples[&edge].len();
            let extremal = if m.end == 0 { 0 } else { len - 1 };
            if slot != extremal || m.end > 1 {
                return bad(format!("particle {} is not extremal at end {}", m.particle, m.end));
            }
            load[g.endpoint(edge, m.end)] += 1;
        }
        if self.moves.windows(2).any(|w| w[0].particle >= w[1].particle) {
            return bad("moves are not sorted by particle".into());
        }
        if let Some(v) = (0..load.len()).find(|&v| load[v] > 1 && !sinks.contains(&v)) {
            return bad(format!("non-sink vertex {v} is approached or occupied twice"));
        }
        Ok(())
    }

    pub fn face0(&self, i: usize) -> ModelCell {
        let mut moves = self.moves.clone();
        moves.remove(i);
        ModelCell {
            places: self.places.clone(),
            moves,
        }
    }

    /// The face where move `i` has completed: the particle lands on the
    /// vertex and the rest of its edge re-indexes.
    pub fn face1(&self, i: usize, g: &Graph) -> ModelCell {
        let m = self.moves[i];
        let mut places = self.places.clone();
        if m.end == 0 {
            for pl in places.iter_mut() {
                if let Place::Edge { edge, slot } = pl {
                    if *edge == m.edge && *slot > 0 {
                        *slot -= 1;
                    }
                }
            }
        }
        places[m.particle] = Place::Vertex(g.endpoint(m.edge, m.end));
        let mut moves = self.moves.clone();
        moves.remove(i);
        ModelCell { places, moves }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Cubical,
    AbramsOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_cells: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) enum CellStore {
    Model(Vec<Vec<ModelCell>>),
    Oracle(Vec<Vec<OracleCell>>),
}

impl CellStore {
    pub(crate) fn counts(&self) -> Vec<usize> {
        match self {
            CellStore::Model(d) => d.iter().map(Vec::len).collect(),
            CellStore::Oracle(d) => d.iter().map(Vec::len).collect(),
        }
    }
}

static NEXT_COMPLEX_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_COMPLEX_ID.fetch_add(1, Ordering::Relaxed)
}

/// An assembled cube complex with its integral boundary matrices.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    id: u64,
    graph: Graph,
    n: usize,
    sinks: BTreeSet<VertexId>,
    kind: ModelKind,
    support: Option<Subgraph>,
    cells: CellStore,
    index: Vec<HashMap<ModelCell, usize>>,
    /// `boundaries[q]` maps q-chains to (q-1)-chains; `boundaries[0]` has
    /// zero rows.
    boundaries: Vec<SparseIntMatrix>,
}

impl CubeComplex {
    pub(crate) fn assemble(
        graph: Graph,
        n: usize,
        sinks: BTreeSet<VertexId>,
        kind: ModelKind,
        support: Option<Subgraph>,
        cells: CellStore,
        boundaries: Vec<SparseIntMatrix>,
    ) -> CubeComplex {
        let index = match &cells {
            CellStore::Model(dims) => dims
                .iter()
                .map(|cs| cs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
                .collect(),
            CellStore::Oracle(_) => Vec::new(),
        };
        CubeComplex {
            id: fresh_id(),
            graph,
            n,
            sinks,
            kind,
            support,
            cells,
            index,
            boundaries,
        }
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_particles(&self) -> usize {
        self.n
    }

    pub fn sinks(&self) -> &BTreeSet<VertexId> {
        &self.sinks
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// The subgraph this complex was restricted to, if it is a subcomplex.
    pub fn support(&self) -> Option<&Subgraph> {
        self.support.as_ref()
    }

    pub(crate) fn cells(&self) -> &CellStore {
        &self.cells
    }

    /// Highest dimension with a cell (0 for an empty complex).
    pub fn top_dim(&self) -> usize {
        self.f_vector()
            .iter()
            .rposition(|&c| c > 0)
            .unwrap_or(0)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = self.cells.counts();
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn num_cells(&self, q: usize) -> usize {
        self.f_vector().get(q).copied().unwrap_or(0)
    }

    pub fn total_cells(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// `∂_q : C_q → C_{q-1}`. Degrees above the top give a `C_{q-1} × 0`
    /// (or `0 × 0`) matrix.
    pub fn boundary(&self, q: usize) -> SparseIntMatrix {
        match self.boundaries.get(q) {
            Some(m) => m.clone(),
            None => SparseIntMatrix::zeros(if q == 0 { 0 } else { self.num_cells(q - 1) }, 0),
        }
    }

    pub fn model_cells(&self, q: usize) -> Option<&[ModelCell]> {
        match &self.cells {
            CellStore::Model(d) => Some(d.get(q).map_or(&[][..], Vec::as_slice)),
            CellStore::Oracle(_) => None,
        }
    }

    pub fn oracle_cells(&self, q: usize) -> Option<&[OracleCell]> {
        match &self.cells {
            CellStore::Oracle(d) => Some(d.get(q).map_or(&[][..], Vec::as_slice)),
            CellStore::Model(_) => None,
        }
    }

    pub fn cell_index(&self, cell: &ModelCell) -> Option<usize> {
        self.index.get(cell.dim())?.get(cell).copied()
    }

    /// Exact check of `∂_q ∘ ∂_{q+1} = 0` in every degree.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (2..self.boundaries.len()).all(|q| {
            let lower = &self.boundaries[q - 1];
            self.boundaries[q].columns().iter().all(|c| lower.apply(c).is_zero())
        })
    }
}

/// Builds the combinatorial model of `ConfSink_n(g, sinks)` (plain
/// `Conf_n(g)` when `sinks` is empty).
pub fn build_model(
    g: &Graph,
    n: usize,
    sinks: &BTreeSet<VertexId>,
    opts: &BuildOptions,
) -> Result<CubeComplex> {
    if g.has_loops() {
        return Err(Error::InvalidState(
            "graph has unnormalized loop edges; call normalize_loops first".into(),
        ));
    }
    if let Some(v) = sinks.iter().find(|&&v| v >= g.num_vertices()) {
        return invalid_arg(format!("sink {v} is not a vertex"));
    }
    let is_sink: Vec<bool> = g.vertices().map(|v| sinks.contains(&v)).collect();

    let mut enumerator = ZeroCells {
        g,
        n,
        is_sink: &is_sink,
        load: vec![0; g.num_vertices()],
        tuples: vec![Vec::new(); g.num_edges()],
        at: vec![None; n],
        out: Vec::new(),
        limit: opts.max_cells,
    };
    enumerator.run(0)?;
    let zero_cells = enumerator.out;

    let mut dims: Vec<Vec<ModelCell>> = vec![Vec::new(); n + 1];
    let mut total = zero_cells.len();
    for z in &zero_cells {
        let cands = candidate_moves(g, &is_sink, z);
        let mut chosen = Vec::new();
        let mut used_targets = Vec::new();
        extend_moves(g, &is_sink, &cands, 0, &mut chosen, &mut used_targets, &mut |moves| {
            let mut moves = moves.to_vec();
            moves.sort();
            dims[moves.len()].push(ModelCell {
                places: z.places.clone(),
                moves,
            });
            total += 1;
            if total > opts.max_cells {
                Err(Error::BudgetExceeded {
                    what: "cells",
                    count: total,
                    limit: opts.max_cells,
                })
            } else {
                Ok(())
            }
        })?;
    }
    dims[0] = zero_cells;
    for d in dims.iter_mut() {
        d.sort();
    }
    while dims.len() > 1 && dims.last().is_some_and(Vec::is_empty) {
        dims.pop();
    }

    let index: Vec<HashMap<&ModelCell, usize>> = dims
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let mut boundaries = vec![SparseIntMatrix::zeros(0, dims[0].len())];
    for q in 1..dims.len() {
        let columns = dims[q]
            .iter()
            .map(|c| model_boundary(c, g, &index[q - 1]))
            .collect();
        boundaries.push(SparseIntMatrix::from_columns(dims[q - 1].len(), columns)?);
    }
    drop(index);

    Ok(CubeComplex::assemble(
        g.clone(),
        n,
        sinks.clone(),
        ModelKind::Cubical,
        None,
        CellStore::Model(dims),
        boundaries,
    ))
}

fn model_boundary(c: &ModelCell, g: &Graph, lower: &HashMap<&ModelCell, usize>) -> Chain {
    let mut entries = Vec::with_capacity(2 * c.dim());
    for i in 0..c.dim() {
        let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
        let f1 = c.face1(i, g);
        let f0 = c.face0(i);
        entries.push((lower[&f1], BigInt::from(sign)));
        entries.push((lower[&f0], BigInt::from(-sign)));
    }
    Chain::from_entries(entries)
}

struct ZeroCells<'a> {
    g: &'a Graph,
    n: usize,
    is_sink: &'a [bool],
    load: Vec<usize>,
    tuples: Vec<Vec<usize>>,
    at: Vec<Option<std::result::Result<VertexId, EdgeId>>>,
    out: Vec<ModelCell>,
    limit: usize,
}

impl ZeroCells<'_> {
    fn run(&mut self, p: usize) -> Result<()> {
        if p == self.n {
            let places = (0..self.n)
                .map(|q| match self.at[q].expect("every particle placed") {
                    Ok(v) => Place::Vertex(v),
                    Err(e) => Place::Edge {
                        edge: e,
                        slot: self.tuples[e].iter().position(|&x| x == q).expect("on edge"),
                    },
                })
                .collect();
            self.out.push(ModelCell {
                places,
                moves: Vec::new(),
            });
            if self.out.len() > self.limit {
                return Err(Error::BudgetExceeded {
                    what: "cells",
                    count: self.out.len(),
                    limit: self.limit,
                });
            }
            return Ok(());
        }
        for v in self.g.vertices() {
            if self.is_sink[v] || self.load[v] == 0 {
                self.load[v] += 1;
                self.at[p] = Some(Ok(v));
                self.run(p + 1)?;
                self.load[v] -= 1;
            }
        }
        for e in 0..self.g.num_edges() {
            for pos in 0..=self.tuples[e].len() {
                self.tuples[e].insert(pos, p);
                self.at[p] = Some(Err(e));
                self.run(p + 1)?;
                self.tuples[e].remove(pos);
            }
        }
        self.at[p] = None;
        Ok(())
    }
}

fn candidate_moves(g: &Graph, is_sink: &[bool], z: &ModelCell) -> Vec<Move> {
    let mut occupied = vec![false; g.num_vertices()];
    let mut first: HashMap<EdgeId, usize> = HashMap::new();
    let mut last: HashMap<EdgeId, (usize, usize)> = HashMap::new();
    for (p, pl) in z.places.iter().enumerate() {
        match *pl {
            Place::Vertex(v) => occupied[v] = true,
            Place::Edge { edge, slot } => {
                if slot == 0 {
                    first.insert(edge, p);
                }
                let e = last.entry(edge).or_insert((slot, p));
                if slot >= e.0 {
                    *e = (slot, p);
                }
            }
        }
    }
    let free = |v: VertexId| is_sink[v] || !occupied[v];
    let mut out = Vec::new();
    let mut edges: Vec<_> = first.keys().copied().collect();
    edges.sort();
    for e in edges {
        if free(g.endpoint(e, 0)) {
            out.push(Move {
                particle: first[&e],
                edge: e,
                end: 0,
            });
        }
        if free(g.endpoint(e, 1)) {
            out.push(Move {
                particle: last[&e].1,
                edge: e,
                end: 1,
            });
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_moves(
    g: &Graph,
    is_sink: &[bool],
    cands: &[Move],
    from: usize,
    chosen: &mut Vec<Move>,
    used_targets: &mut Vec<VertexId>,
    emit: &mut dyn FnMut(&[Move]) -> Result<()>,
) -> Result<()> {
    for i in from..cands.len() {
        let m = cands[i];
        let target = g.endpoint(m.edge, m.end);
        if chosen.iter().any(|c| c.particle == m.particle) {
            continue;
        }
        if !is_sink[target] && used_targets.contains(&target) {
            continue;
        }
        chosen.push(m);
        used_targets.push(target);
        emit(chosen)?;
        extend_moves(g, is_sink, cands, i + 1, chosen, used_targets, emit)?;
        chosen.pop();
        used_targets.pop();
    }
    Ok(())
}

/// A subcomplex together with its cell-index inclusion into the parent.
#[derive(Clone, Debug)]
pub struct SubcomplexInclusion {
    pub sub: CubeComplex,
    /// `maps[q][i]` is the parent index of sub cell `i` in degree `q`.
    pub maps: Vec<Vec<usize>>,
    pub(crate) parent_id: u64,
}

impl SubcomplexInclusion {
    pub fn push_forward(&self, q: usize, z: &Chain) -> Chain {
        z.reindex(&self.maps[q])
    }
}

/// All cells of `c` whose resting places, moving edges and move targets lie
/// in `h`.
pub fn subcomplex_supported_in(c: &CubeComplex, h: &Subgraph) -> Result<SubcomplexInclusion> {
    h.validate(&c.graph)?;
    let CellStore::Model(dims) = &c.cells else {
        return invalid_arg("supported subcomplexes are only available for the cubical model");
    };
    let mut sub_dims = Vec::with_capacity(dims.len());
    let mut maps = Vec::with_capacity(dims.len());
    let mut back: Vec<HashMap<usize, usize>> = Vec::with_capacity(dims.len());
    for cells in dims {
        let mut kept = Vec::new();
        let mut map = Vec::new();
        let mut inv = HashMap::new();
        for (i, cell) in cells.iter().enumerate() {
            if cell.touches(&c.graph, h) {
                inv.insert(i, kept.len());
                map.push(i);
                kept.push(cell.clone());
            }
        }
        sub_dims.push(kept);
        maps.push(map);
        back.push(inv);
    }
    let mut boundaries = vec![SparseIntMatrix::zeros(0, sub_dims[0].len())];
    for q in 1..sub_dims.len() {
        let parent = &c.boundaries[q];
        let columns = maps[q]
            .iter()
            .map(|&j| {
                Chain::from_entries(
                    parent
                        .column(j)
                        .entries()
                        .iter()
                        .map(|(i, v)| (back[q - 1][i], v.clone())),
                )
            })
            .collect();
        boundaries.push(SparseIntMatrix::from_columns(sub_dims[q - 1].len(), columns)?);
    }
    let sub = CubeComplex::assemble(
        c.graph.clone(),
        c.n,
        c.sinks.clone(),
        c.kind,
        Some(h.clone()),
        CellStore::Model(sub_dims),
        boundaries,
    );
    Ok(SubcomplexInclusion {
        sub,
        maps,
        parent_id: c.id,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle_graph, make_h_graph, make_path_graph, make_star};

    fn no_sinks() -> BTreeSet<VertexId> {
        BTreeSet::new()
    }

    fn build(g: &Graph, n: usize, sinks: &[VertexId]) -> CubeComplex {
        build_model(g, n, &sinks.iter().copied().collect(), &BuildOptions::default()).unwrap()
    }

    /// Brute-force count of the interval model: enumerate all placements of
    /// two labeled particles (on vertex 0, vertex 1, or inside the edge in
    /// either order) and all admissible move sets directly.
    fn brute_interval_two(sinks: [bool; 2]) -> Vec<usize> {
        #[derive(Clone, Copy, PartialEq)]
        enum P {
            V(usize),
            E,
        }
        let mut f = vec![0usize; 3];
        let spots = [P::V(0), P::V(1), P::E];
        for a in spots {
            for b in spots {
                for order in 0..2 {
                    let (pa, pb) = (a, b);
                    let both_in = pa == P::E && pb == P::E;
                    if !both_in && order == 1 {
                        continue;
                    }
                    if let (P::V(x), P::V(y)) = (pa, pb) {
                        if x == y && !sinks[x] {
                            continue;
                        }
                    }
                    // order 0: particle 0 nearer vertex 0
                    let occupied = |v: usize| pa == P::V(v) || pb == P::V(v);
                    let mut moves: Vec<(usize, usize)> = Vec::new(); // (particle, target)
                    let on_edge: Vec<usize> = if both_in {
                        if order == 0 { vec![0, 1] } else { vec![1, 0] }
                    } else if pa == P::E {
                        vec![0]
                    } else if pb == P::E {
                        vec![1]
                    } else {
                        vec![]
                    };
                    if let Some(&first) = on_edge.first() {
                        if sinks[0] || !occupied(0) {
                            moves.push((first, 0));
                        }
                    }
                    if let Some(&last) = on_edge.last() {
                        if sinks[1] || !occupied(1) {
                            moves.push((last, 1));
                        }
                    }
                    for mask in 0..(1u32 << moves.len()) {
                        let sel: Vec<_> = (0..moves.len()).filter(|i| mask >> i & 1 == 1).map(|i| moves[i]).collect();
                        let distinct_p = sel.len() < 2 || sel[0].0 != sel[1].0;
                        let distinct_t = sel.len() < 2 || sel[0].1 != sel[1].1 || sinks[sel[0].1];
                        if distinct_p && distinct_t {
                            f[sel.len()] += 1;
                        }
                    }
                }
            }
        }
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    #[test]
    fn interval_with_two_sinks() {
        let c = build(&make_path_graph(1).unwrap(), 2, &[0, 1]);
        assert_eq!(c.f_vector(), vec![10, 12, 2]);
        assert_eq!(c.euler_characteristic(), 0);
        assert_eq!(brute_interval_two([true, true]), vec![10, 12, 2]);
    }

    #[test]
    fn interval_without_sinks() {
        let c = build(&make_path_graph(1).unwrap(), 2, &[]);
        assert_eq!(brute_interval_two([false, false]), vec![8, 8, 2]);
        assert_eq!(c.f_vector(), vec![8, 8, 2]);
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn empty_configuration() {
        for g in [make_star(3).unwrap(), make_cycle_graph(4).unwrap()] {
            let c = build(&g, 0, &[]);
            assert_eq!(c.f_vector(), vec![1]);
            assert_eq!(c.euler_characteristic(), 1);
        }
    }

    #[test]
    fn every_cell_satisfies_invariants() {
        let g = make_h_graph();
        let sinks: BTreeSet<_> = [2].into();
        let c = build_model(&g, 3, &sinks, &BuildOptions::default()).unwrap();
        for q in 0..=c.top_dim() {
            for cell in c.model_cells(q).unwrap() {
                cell.check(&g, &sinks).unwrap();
                assert_eq!(cell.dim(), q);
            }
        }
        assert!(c.top_dim() <= 3);
    }

    #[test]
    fn boundary_squares_to_zero() {
        for (g, n) in [
            (make_star(3).unwrap(), 3),
            (make_h_graph(), 2),
            (make_cycle_graph(3).unwrap(), 3),
        ] {
            let c = build(&g, n, &[]);
            assert!(c.boundary_squares_to_zero());
        }
        let c = build(&make_path_graph(2).unwrap(), 3, &[0, 2]);
        assert!(c.boundary_squares_to_zero());
    }

    #[test]
    fn faces_come_in_pairs() {
        let c = build(&make_star(4).unwrap(), 3, &[]);
        for q in 1..=c.top_dim() {
            let d = c.boundary(q);
            for (j, cell) in c.model_cells(q).unwrap().iter().enumerate() {
                let col = d.column(j);
                // faces of a cube are distinct, so 2q unit entries
                assert_eq!(col.nnz(), 2 * q);
                for i in 0..q {
                    let (a, b) = (cell.face0(i), cell.face1(i, c.graph()));
                    assert_eq!(a.moves(), b.moves());
                }
            }
        }
    }

    #[test]
    fn loops_are_rejected() {
        let g = Graph::new(1, vec![(0, 0)]).unwrap();
        let e = build_model(&g, 1, &no_sinks(), &BuildOptions::default()).unwrap_err();
        assert!(matches!(e, Error::InvalidState(_)));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = BuildOptions { max_cells: 50 };
        let e = build_model(&make_star(4).unwrap(), 2, &no_sinks(), &opts).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn sink_monotonicity() {
        let g = make_star(3).unwrap();
        let small = build(&g, 2, &[1]);
        let big = build(&g, 2, &[1, 0]);
        for q in 0..=small.top_dim() {
            for cell in small.model_cells(q).unwrap() {
                assert!(big.cell_index(cell).is_some());
            }
        }
    }

    #[test]
    fn supported_subcomplexes() {
        let g = make_star(3).unwrap();
        let c = build(&g, 2, &[]);
        let whole = subcomplex_supported_in(&c, &Subgraph::whole(&g)).unwrap();
        assert_eq!(whole.sub.f_vector(), c.f_vector());
        for (q, m) in whole.maps.iter().enumerate() {
            assert!(m.iter().copied().eq(0..c.num_cells(q)));
        }
        let edge = Subgraph::from_edges(&g, [0]);
        let sub = subcomplex_supported_in(&c, &edge).unwrap();
        let interval = build(&make_path_graph(1).unwrap(), 2, &[]);
        assert_eq!(sub.sub.total_cells(), 18);
        assert_eq!(sub.sub.f_vector(), interval.f_vector());
        let points = Subgraph {
            vertices: [0, 1, 2].into(),
            edges: BTreeSet::new(),
        };
        let sub = subcomplex_supported_in(&c, &points).unwrap();
        assert_eq!(sub.sub.f_vector(), vec![6]);
        let bogus = Subgraph {
            vertices: [9].into(),
            edges: BTreeSet::new(),
        };
        assert!(subcomplex_supported_in(&c, &bogus).is_err());
    }
}
