//! Basic cycles (star and H classes), parked configurations and products.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::complex::{CubeComplex, ModelCell, Move, Place};
use crate::error::{invalid_arg, Error, Result};
use crate::graph::{EdgeId, Graph, Subgraph, VertexId};
use crate::homology::Chain;

/// Where a particle of a basic cycle sits between steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Local {
    Vertex(VertexId),
    /// On edge `e`, counted from the end facing `endpoint(e, s)`; depth 0
    /// is the extremal slot.
    Edge(EdgeId, u8, usize),
}

/// Position of a particle that stays put.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parked {
    Vertex(VertexId),
    /// Parked particles on one edge keep their listed order, from endpoint
    /// 0 to endpoint 1, between any moving particles at the two ends.
    Edge(EdgeId),
}

/// Static positions for the particles a cycle does not move.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parking {
    pub places: Vec<(usize, Parked)>,
}

impl Parking {
    pub fn new(places: Vec<(usize, Parked)>) -> Parking {
        Parking { places }
    }

    pub fn particles(&self) -> BTreeSet<usize> {
        self.places.iter().map(|(p, _)| *p).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasicKind {
    Star,
    H,
}

/// One oriented 1-cell of a basic cycle: the positions of its particles and
/// which one moves.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Step {
    at: BTreeMap<usize, Local>,
    moving: usize,
    coeff: BigInt,
}

/// What a basic cycle occupies, for disjointness and parking checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Footprint {
    vertices: BTreeSet<VertexId>,
    /// Edges crossed from end to end.
    traversed: BTreeSet<EdgeId>,
    germs: BTreeSet<(EdgeId, u8)>,
}

impl Footprint {
    fn compatible(&self, o: &Footprint) -> bool {
        let edges = |f: &Footprint| -> BTreeSet<EdgeId> { f.germs.iter().map(|g| g.0).collect() };
        self.vertices.is_disjoint(&o.vertices)
            && self.traversed.is_disjoint(&o.traversed)
            && self.germs.is_disjoint(&o.germs)
            && self.traversed.is_disjoint(&edges(o))
            && o.traversed.is_disjoint(&edges(self))
    }

    fn allows(&self, p: Parked) -> bool {
        match p {
            Parked::Vertex(v) => !self.vertices.contains(&v),
            Parked::Edge(e) => !self.traversed.contains(&e),
        }
    }
}

/// The moving part of a basic cycle, independent of any parking.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    kind: BasicKind,
    support: Subgraph,
    particles: Vec<usize>,
    steps: Vec<Step>,
    footprint: Footprint,
}

impl Shape {
    pub(crate) fn compatible(&self, o: &Shape) -> bool {
        self.footprint.compatible(&o.footprint) && self.particles.iter().all(|p| !o.particles.contains(p))
    }

    pub(crate) fn allows(&self, p: Parked) -> bool {
        self.footprint.allows(p)
    }
}

#[derive(Clone, Debug)]
pub struct BasicCycle {
    pub kind: BasicKind,
    /// The embedded star or H.
    pub support: Subgraph,
    pub particles: Vec<usize>,
    pub parking: Parking,
    /// Integer 1-chain in the ambient complex.
    pub chain: Chain,
    shape: Shape,
}

/// Records the walk of the moving particles and emits signed 1-cells.
struct Walker<'a> {
    g: &'a Graph,
    at: BTreeMap<usize, Local>,
    steps: Vec<Step>,
}

impl Walker<'_> {
    /// Particle `p`, sitting on edge `e` at the end facing `endpoint(e, s)`,
    /// slides onto that vertex.
    fn land(&mut self, p: usize, e: EdgeId, s: u8) {
        debug_assert_eq!(self.at[&p], Local::Edge(e, s, 0));
        self.steps.push(Step {
            at: self.at.clone(),
            moving: p,
            coeff: BigInt::from(1),
        });
        self.at.insert(p, Local::Vertex(self.g.endpoint(e, s)));
    }

    /// Particle `p` leaves vertex `endpoint(e, s)` into edge `e`.
    fn leave(&mut self, p: usize, e: EdgeId, s: u8) {
        self.at.insert(p, Local::Edge(e, s, 0));
        self.steps.push(Step {
            at: self.at.clone(),
            moving: p,
            coeff: BigInt::from(-1),
        });
    }

    /// From the germ `from` (on its edge, facing the vertex) along the
    /// vertex route `path` into the germ `to`.
    fn travel(&mut self, p: usize, from: (EdgeId, u8), path: &[(EdgeId, u8)], to: (EdgeId, u8)) {
        self.land(p, from.0, from.1);
        for &(e, s) in path {
            // leave through end s, arrive at the other end
            self.leave(p, e, s);
            self.at.insert(p, Local::Edge(e, 1 - s, 0));
            self.land(p, e, 1 - s);
        }
        self.leave(p, to.0, to.1);
    }
}

fn germ_at(g: &Graph, v: VertexId, e: EdgeId) -> Result<(EdgeId, u8)> {
    if e >= g.num_edges() {
        return invalid_arg(format!("no edge {e}"));
    }
    let (a, b) = g.edge(e);
    if a == b {
        return invalid_arg(format!("edge {e} is a loop"));
    }
    if a == v {
        Ok((e, 0))
    } else if b == v {
        Ok((e, 1))
    } else {
        invalid_arg(format!("edge {e} does not meet vertex {v}"))
    }
}

fn check_particles(c: &CubeComplex, moving: &[usize], parking: &Parking) -> Result<()> {
    let n = c.num_particles();
    let mut seen = BTreeSet::new();
    for &p in moving.iter().chain(parking.places.iter().map(|(p, _)| p)) {
        if p >= n || !seen.insert(p) {
            return invalid_arg(format!("particle {p} is out of range or used twice"));
        }
    }
    if seen.len() != n {
        return invalid_arg("every particle must move or be parked");
    }
    Ok(())
}

/// The hexagonal cycle in which `p` and `q` take turns rotating through the
/// three germs `e₁, e₂, e₃` at `v`.
pub fn star_cycle(
    c: &CubeComplex,
    v: VertexId,
    edges: [EdgeId; 3],
    p: usize,
    q: usize,
    parking: &Parking,
) -> Result<BasicCycle> {
    check_particles(c, &[p, q], parking)?;
    finish(c, star_shape(c.graph(), v, edges, p, q)?, parking)
}

pub(crate) fn star_shape(g: &Graph, v: VertexId, edges: [EdgeId; 3], p: usize, q: usize) -> Result<Shape> {
    if v >= g.num_vertices() || g.valence(v) < 3 {
        return invalid_arg(format!("vertex {v} is not essential"));
    }
    if edges[0] == edges[1] || edges[1] == edges[2] || edges[0] == edges[2] {
        return invalid_arg("star cycle needs three distinct edges");
    }
    if p == q {
        return invalid_arg("star cycle needs two distinct particles");
    }
    let [g1, g2, g3] = [germ_at(g, v, edges[0])?, germ_at(g, v, edges[1])?, germ_at(g, v, edges[2])?];
    let footprint = Footprint {
        vertices: BTreeSet::from([v]),
        traversed: BTreeSet::new(),
        germs: BTreeSet::from([g1, g2, g3]),
    };
    let mut w = Walker {
        g,
        at: BTreeMap::from([(p, Local::Edge(g1.0, g1.1, 0)), (q, Local::Edge(g2.0, g2.1, 0))]),
        steps: Vec::new(),
    };
    w.travel(p, g1, &[], g3);
    w.travel(q, g2, &[], g1);
    w.travel(p, g3, &[], g2);
    w.travel(q, g1, &[], g3);
    w.travel(p, g2, &[], g1);
    w.travel(q, g3, &[], g2);
    Ok(Shape {
        kind: BasicKind::Star,
        support: Subgraph::from_edges(g, edges),
        particles: vec![p, q],
        steps: w.steps,
        footprint,
    })
}

/// The H class: `p` starts on `a₁` at `v`, `q` on `b₁` at `w`; each in
/// turn crosses the bridge between `v` and `w` to the free germ on the far
/// side.
#[allow(clippy::too_many_arguments)]
pub fn h_cycle(
    c: &CubeComplex,
    v: VertexId,
    w: VertexId,
    a: [EdgeId; 2],
    b: [EdgeId; 2],
    p: usize,
    q: usize,
    parking: &Parking,
) -> Result<BasicCycle> {
    check_particles(c, &[p, q], parking)?;
    finish(c, h_shape(c.graph(), v, w, a, b, p, q)?, parking)
}

pub(crate) fn h_shape(
    g: &Graph,
    v: VertexId,
    w: VertexId,
    a: [EdgeId; 2],
    b: [EdgeId; 2],
    p: usize,
    q: usize,
) -> Result<Shape> {
    if v == w {
        return invalid_arg("an H needs two distinct essential vertices");
    }
    if v >= g.num_vertices() || w >= g.num_vertices() {
        return invalid_arg("vertex out of range");
    }
    if p == q {
        return invalid_arg("H cycle needs two distinct particles");
    }
    let [a1, a2] = [germ_at(g, v, a[0])?, germ_at(g, v, a[1])?];
    let [b1, b2] = [germ_at(g, w, b[0])?, germ_at(g, w, b[1])?];
    let used: BTreeSet<EdgeId> = [a[0], a[1], b[0], b[1]].into();
    if used.len() != 4 {
        return invalid_arg("the four legs of an H must be distinct edges");
    }
    let bridge = route(g, v, w, &used)
        .ok_or_else(|| Error::InvalidArgument(format!("no path from {v} to {w} avoiding the legs")))?;
    let mut vertices: BTreeSet<VertexId> = BTreeSet::from([v]);
    let mut x = v;
    for &(e, s) in &bridge {
        debug_assert_eq!(g.endpoint(e, s), x);
        x = g.endpoint(e, 1 - s);
        vertices.insert(x);
    }
    let back: Vec<(EdgeId, u8)> = bridge.iter().rev().map(|&(e, s)| (e, 1 - s)).collect();
    let footprint = Footprint {
        vertices,
        traversed: bridge.iter().map(|x| x.0).collect(),
        germs: BTreeSet::from([a1, a2, b1, b2]),
    };
    let mut walk = Walker {
        g,
        at: BTreeMap::from([(p, Local::Edge(a1.0, a1.1, 0)), (q, Local::Edge(b1.0, b1.1, 0))]),
        steps: Vec::new(),
    };
    walk.travel(q, b1, &back, a2);
    walk.travel(p, a1, &bridge, b2);
    walk.travel(q, a2, &bridge, b1);
    walk.travel(p, b2, &back, a1);
    Ok(Shape {
        kind: BasicKind::H,
        support: Subgraph::from_edges(g, a.iter().chain(&b).copied().chain(bridge.iter().map(|x| x.0))),
        particles: vec![p, q],
        steps: walk.steps,
        footprint,
    })
}

/// Shortest route from `v` to `w` as `(edge, end at the current vertex)`
/// pairs, not using `avoid`.
fn route(g: &Graph, v: VertexId, w: VertexId, avoid: &BTreeSet<EdgeId>) -> Option<Vec<(EdgeId, u8)>> {
    let mut prev: BTreeMap<VertexId, (EdgeId, u8, VertexId)> = BTreeMap::new();
    let mut queue = VecDeque::from([v]);
    let mut seen = BTreeSet::from([v]);
    while let Some(x) = queue.pop_front() {
        if x == w {
            break;
        }
        for (e, s) in g.germs(x) {
            if avoid.contains(&e) {
                continue;
            }
            let y = g.endpoint(e, 1 - s);
            if seen.insert(y) {
                prev.insert(y, (e, s, x));
                queue.push_back(y);
            }
        }
    }
    if !seen.contains(&w) {
        return None;
    }
    let mut out = Vec::new();
    let mut y = w;
    while y != v {
        let (e, s, x) = prev[&y];
        out.push((e, s));
        y = x;
    }
    out.reverse();
    Some(out)
}

/// The part of the tree a family of basic cycles lives in: vertices and
/// edges it covers completely, and the germs of the legs leaving it. Legs
/// are shortened to their germs, so particles on them stay near the core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Neighbourhood {
    kind: BasicKind,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    germs: Vec<(EdgeId, u8)>,
}

impl Neighbourhood {
    pub(crate) fn star(g: &Graph, v: VertexId) -> Result<Neighbourhood> {
        if v >= g.num_vertices() || g.valence(v) < 3 {
            return invalid_arg(format!("vertex {v} is not essential"));
        }
        if g.germs(v).iter().any(|&(e, _)| g.edge(e).0 == g.edge(e).1) {
            return invalid_arg(format!("vertex {v} carries a loop"));
        }
        Ok(Neighbourhood {
            kind: BasicKind::Star,
            vertices: vec![v],
            edges: Vec::new(),
            germs: g.germs(v),
        })
    }

    /// Two essential vertices joined by a path through valence-2 vertices.
    pub(crate) fn h(g: &Graph, v: VertexId, w: VertexId) -> Result<Neighbourhood> {
        if v == w {
            return invalid_arg("an H needs two distinct essential vertices");
        }
        for x in [v, w] {
            if x >= g.num_vertices() || g.valence(x) < 3 {
                return invalid_arg(format!("vertex {x} is not essential"));
            }
        }
        let bridge = route(g, v, w, &BTreeSet::new())
            .ok_or_else(|| Error::InvalidArgument(format!("no path from {v} to {w}")))?;
        let mut vertices = vec![v];
        for &(e, s) in &bridge {
            vertices.push(g.endpoint(e, 1 - s));
        }
        if vertices[1..vertices.len() - 1].iter().any(|&x| g.valence(x) != 2) {
            return invalid_arg("the path between the two vertices meets another essential vertex");
        }
        let first = bridge[0];
        let last = *bridge.last().expect("v != w");
        let last = (last.0, 1 - last.1);
        let germs = g
            .germs(v)
            .into_iter()
            .filter(|&x| x != first)
            .chain(g.germs(w).into_iter().filter(|&x| x != last))
            .collect();
        Ok(Neighbourhood {
            kind: BasicKind::H,
            vertices,
            edges: bridge.iter().map(|x| x.0).collect(),
            germs,
        })
    }

    fn abstract_graph(&self, g: &Graph) -> Result<Graph> {
        let nv = self.vertices.len();
        let id = |x: VertexId| self.vertices.iter().position(|&y| y == x).expect("core vertex");
        let mut edges: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .map(|&e| (id(g.edge(e).0), id(g.edge(e).1)))
            .collect();
        for (j, &(e, s)) in self.germs.iter().enumerate() {
            edges.push((id(g.endpoint(e, s)), nv + j));
        }
        Graph::new(nv + self.germs.len(), edges)
    }

    fn footprint(&self) -> Footprint {
        Footprint {
            vertices: self.vertices.iter().copied().collect(),
            traversed: self.edges.iter().copied().collect(),
            germs: self.germs.iter().copied().collect(),
        }
    }

    /// Images of a basis of `H_1` of the configurations of `particles` in
    /// this neighbourhood.
    pub(crate) fn shapes(&self, g: &Graph, particles: &[usize]) -> Result<Vec<Shape>> {
        let a = self.abstract_graph(g)?;
        let m = particles.len();
        let ac = crate::complex::build_model(&a, m, &BTreeSet::new(), &crate::complex::BuildOptions::default())?;
        let h = crate::homology::homology(&ac, 1)?;
        let cells = ac.model_cells(1).expect("model complex");
        let (nv, ne) = (self.vertices.len(), self.edges.len());
        let support = Subgraph::from_edges(g, self.edges.iter().copied().chain(self.germs.iter().map(|x| x.0)));
        let mut out = Vec::new();
        for z in h.cycle_basis() {
            let mut steps = Vec::new();
            for (idx, coeff) in z.entries() {
                let cell = &cells[*idx];
                let mv = cell.moves()[0];
                if mv.edge >= ne && mv.end == 1 {
                    // crossing the cut end of a leg is invisible in the tree
                    continue;
                }
                let mut on_leg = vec![0usize; self.germs.len()];
                for pl in cell.places() {
                    if let Place::Edge { edge, .. } = pl {
                        if *edge >= ne {
                            on_leg[*edge - ne] += 1;
                        }
                    }
                }
                let at = cell
                    .places()
                    .iter()
                    .enumerate()
                    .map(|(i, pl)| {
                        let l = match *pl {
                            Place::Vertex(x) if x < nv => Local::Vertex(self.vertices[x]),
                            Place::Vertex(x) => {
                                let (e, s) = self.germs[x - nv];
                                Local::Edge(e, s, on_leg[x - nv])
                            }
                            Place::Edge { edge, .. } if edge < ne && i == mv.particle && mv.end == 1 => {
                                Local::Edge(self.edges[edge], 1, 0)
                            }
                            Place::Edge { edge, slot } if edge < ne => Local::Edge(self.edges[edge], 0, slot),
                            Place::Edge { edge, slot } => {
                                let (e, s) = self.germs[edge - ne];
                                Local::Edge(e, s, slot)
                            }
                        };
                        (particles[i], l)
                    })
                    .collect();
                steps.push(Step {
                    at,
                    moving: particles[mv.particle],
                    coeff: coeff.clone(),
                });
            }
            if !steps.is_empty() {
                out.push(Shape {
                    kind: self.kind,
                    support: support.clone(),
                    particles: particles.to_vec(),
                    steps,
                    footprint: self.footprint(),
                });
            }
        }
        Ok(out)
    }
}

fn finish(c: &CubeComplex, shape: Shape, parking: &Parking) -> Result<BasicCycle> {
    let chain = product_chain(c, &[&shape], parking)?;
    Ok(BasicCycle {
        kind: shape.kind,
        support: shape.support.clone(),
        particles: shape.particles.clone(),
        parking: parking.clone(),
        chain,
        shape,
    })
}

/// Sums the product cells of the given step tuples (with extra signs) and
/// the parking, as a chain of the ambient complex.
fn assemble(c: &CubeComplex, terms: &[Vec<&Step>], parking: &Parking) -> Result<Chain> {
    let g = c.graph();
    let n = c.num_particles();
    let mut entries = Vec::with_capacity(terms.len());
    for steps in terms {
        let mut local: BTreeMap<usize, Local> = BTreeMap::new();
        let mut movers: Vec<usize> = Vec::with_capacity(steps.len());
        let mut coeff = BigInt::from(1);
        for s in steps {
            local.extend(s.at.iter().map(|(p, l)| (*p, *l)));
            movers.push(s.moving);
            coeff *= &s.coeff;
        }
        coeff *= permutation_sign(&movers);
        let cell = build_cell(g, n, &local, &movers, parking)?;
        let idx = c.cell_index(&cell).ok_or_else(|| {
            Error::InvalidState(format!("configuration {cell:?} is not a cell of the complex"))
        })?;
        entries.push((idx, coeff));
    }
    Ok(Chain::from_entries(entries))
}

/// Sign of the permutation sorting `v` (distinct entries).
fn permutation_sign(v: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn build_cell(
    g: &Graph,
    n: usize,
    local: &BTreeMap<usize, Local>,
    movers: &[usize],
    parking: &Parking,
) -> Result<ModelCell> {
    type Ends = (Vec<(usize, usize)>, Vec<usize>, Vec<(usize, usize)>);
    let mut tuples: BTreeMap<EdgeId, Ends> = BTreeMap::new();
    let mut places: Vec<Option<Place>> = vec![None; n];
    for (&p, &l) in local {
        match l {
            Local::Vertex(v) => places[p] = Some(Place::Vertex(v)),
            Local::Edge(e, 0, d) => tuples.entry(e).or_default().0.push((d, p)),
            Local::Edge(e, _, d) => tuples.entry(e).or_default().2.push((d, p)),
        }
    }
    for &(p, pl) in &parking.places {
        match pl {
            Parked::Vertex(v) => places[p] = Some(Place::Vertex(v)),
            Parked::Edge(e) => tuples.entry(e).or_default().1.push(p),
        }
    }
    for (e, (mut front, mid, mut back)) in tuples {
        front.sort_unstable();
        back.sort_unstable_by(|a, b| b.cmp(a));
        let order = front.iter().map(|x| x.1).chain(mid).chain(back.iter().map(|x| x.1));
        for (slot, p) in order.enumerate() {
            places[p] = Some(Place::Edge { edge: e, slot });
        }
    }
    let places = places
        .into_iter()
        .enumerate()
        .map(|(p, pl)| pl.ok_or_else(|| Error::InvalidArgument(format!("particle {p} has no position"))))
        .collect::<Result<Vec<_>>>()?;
    let moves = movers
        .iter()
        .map(|&p| match local[&p] {
            Local::Edge(edge, end, 0) => Ok(Move { particle: p, edge, end }),
            Local::Edge(..) => Err(Error::InvalidState("moving particle is not at the end of its edge".into())),
            Local::Vertex(_) => Err(Error::InvalidState("moving particle rests on a vertex".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    ModelCell::new(places, moves, g, &BTreeSet::new())
}

/// The product of basic cycles with pairwise disjoint particles and
/// footprints, with the remaining particles parked. The degree is the
/// number of factors; no factors gives the parked 0-cell.
pub fn product_cycle(c: &CubeComplex, factors: &[BasicCycle], parking: &Parking) -> Result<Chain> {
    let shapes: Vec<&Shape> = factors.iter().map(|f| &f.shape).collect();
    let moving: Vec<usize> = shapes.iter().flat_map(|s| s.particles.iter().copied()).collect();
    check_particles(c, &moving, parking)?;
    product_chain(c, &shapes, parking)
}

/// Product chain of shapes; checks disjointness, parking and `∂ = 0`.
pub(crate) fn product_chain(c: &CubeComplex, shapes: &[&Shape], parking: &Parking) -> Result<Chain> {
    for (i, f) in shapes.iter().enumerate() {
        for o in &shapes[i + 1..] {
            if !f.compatible(o) {
                return invalid_arg("factor supports or particles overlap");
            }
        }
        if let Some((p, _)) = parking.places.iter().find(|(_, pl)| !f.allows(*pl)) {
            return invalid_arg(format!("particle {p} is parked in the way of a factor"));
        }
    }
    let mut terms: Vec<Vec<&Step>> = vec![Vec::new()];
    for f in shapes {
        terms = terms
            .into_iter()
            .flat_map(|pre| {
                f.steps.iter().map(move |st| {
                    let mut t = pre.clone();
                    t.push(st);
                    t
                })
            })
            .collect();
    }
    let chain = assemble(c, &terms, parking)?;
    let q = shapes.len();
    if q > 0 && !c.boundary(q).apply(&chain).is_zero() {
        return Err(Error::InvalidState("product of cycles has nonzero boundary".into()));
    }
    Ok(chain)
}

impl BasicCycle {
    /// Whether this cycle can be multiplied with `other`.
    pub fn is_disjoint_from(&self, other: &BasicCycle) -> bool {
        self.shape.compatible(&other.shape)
    }
}
