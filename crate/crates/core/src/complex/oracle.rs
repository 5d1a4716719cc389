//! The classical discretized configuration complex: after subdividing every
//! edge into `n + 1` pieces, a cell assigns each particle a vertex or a
//! closed edge, with all closures pairwise disjoint.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{BuildOptions, CellStore, CubeComplex, ModelKind};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::homology::{Chain, SparseIntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OraclePlace {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OracleCell {
    places: Vec<OraclePlace>,
}

impl OracleCell {
    pub fn places(&self) -> &[OraclePlace] {
        &self.places
    }

    pub fn dim(&self) -> usize {
        self.places
            .iter()
            .filter(|p| matches!(p, OraclePlace::Edge(_)))
            .count()
    }

    /// Face `(i, end)`: the `i`-th edge particle (in label order) moved to
    /// endpoint `end` of its edge.
    fn face(&self, i: usize, end: u8, g: &Graph) -> OracleCell {
        let (p, e) = self
            .places
            .iter()
            .enumerate()
            .filter_map(|(p, pl)| match pl {
                OraclePlace::Edge(e) => Some((p, *e)),
                OraclePlace::Vertex(_) => None,
            })
            .nth(i)
            .expect("face index within dimension");
        let mut places = self.places.clone();
        places[p] = OraclePlace::Vertex(g.endpoint(e, end));
        OracleCell { places }
    }
}

/// Builds the discretized complex of `Conf_n(g)` on `g` subdivided `n + 1`
/// times. Boundary sign convention matches the cubical model.
pub fn build_abrams_oracle(g: &Graph, n: usize, opts: &BuildOptions) -> Result<CubeComplex> {
    let fine = if n == 0 { g.clone() } else { g.subdivide(n + 1)? };
    let mut e = Enumerator {
        g: &fine,
        n,
        blocked: vec![0; fine.num_vertices()],
        places: Vec::with_capacity(n),
        out: Vec::new(),
        limit: opts.max_cells,
    };
    e.run()?;
    let mut dims: Vec<Vec<OracleCell>> = vec![Vec::new(); n + 1];
    for c in e.out {
        dims[c.dim()].push(c);
    }
    for d in dims.iter_mut() {
        d.sort();
    }
    while dims.len() > 1 && dims.last().is_some_and(Vec::is_empty) {
        dims.pop();
    }
    let index: Vec<HashMap<&OracleCell, usize>> = dims
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let mut boundaries = vec![SparseIntMatrix::zeros(0, dims[0].len())];
    for q in 1..dims.len() {
        let columns = dims[q]
            .iter()
            .map(|c| {
                let mut entries = Vec::with_capacity(2 * q);
                for i in 0..q {
                    let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                    entries.push((index[q - 1][&c.face(i, 1, &fine)], BigInt::from(sign)));
                    entries.push((index[q - 1][&c.face(i, 0, &fine)], BigInt::from(-sign)));
                }
                Chain::from_entries(entries)
            })
            .collect();
        boundaries.push(SparseIntMatrix::from_columns(dims[q - 1].len(), columns)?);
    }
    drop(index);
    Ok(CubeComplex::assemble(
        fine,
        n,
        BTreeSet::new(),
        ModelKind::AbramsOracle,
        None,
        CellStore::Oracle(dims),
        boundaries,
    ))
}

struct Enumerator<'a> {
    g: &'a Graph,
    n: usize,
    blocked: Vec<u32>,
    places: Vec<OraclePlace>,
    out: Vec<OracleCell>,
    limit: usize,
}

impl Enumerator<'_> {
    fn run(&mut self) -> Result<()> {
        if self.places.len() == self.n {
            self.out.push(OracleCell {
                places: self.places.clone(),
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
            if self.blocked[v] == 0 {
                self.blocked[v] += 1;
                self.places.push(OraclePlace::Vertex(v));
                self.run()?;
                self.places.pop();
                self.blocked[v] -= 1;
            }
        }
        for (e, &(a, b)) in self.g.edges().iter().enumerate() {
            if a != b && self.blocked[a] == 0 && self.blocked[b] == 0 {
                self.blocked[a] += 1;
                self.blocked[b] += 1;
                self.places.push(OraclePlace::Edge(e));
                self.run()?;
                self.places.pop();
                self.blocked[a] -= 1;
                self.blocked[b] -= 1;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_path_graph, make_star};

    #[test]
    fn oracle_is_a_chain_complex() {
        let c = build_abrams_oracle(&make_star(3).unwrap(), 2, &BuildOptions::default()).unwrap();
        assert!(c.boundary_squares_to_zero());
        assert_eq!(c.kind(), ModelKind::AbramsOracle);
        assert_eq!(c.graph().num_edges(), 9);
    }

    #[test]
    fn oracle_interval_two_particles() {
        // interval cut into 3 edges: vertices 0..4 on a line
        let c = build_abrams_oracle(&make_path_graph(1).unwrap(), 2, &BuildOptions::default()).unwrap();
        // ordered pairs of distinct vertices: 4 * 3
        assert_eq!(c.num_cells(0), 12);
        // one particle on one of 3 edges, the other on one of the 2
        // vertices off its closure
        assert_eq!(c.num_cells(1), 2 * 3 * 2);
        // the two end edges are disjoint
        assert_eq!(c.num_cells(2), 2);
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn oracle_zero_particles() {
        let c = build_abrams_oracle(&make_star(3).unwrap(), 0, &BuildOptions::default()).unwrap();
        assert_eq!(c.f_vector(), vec![1]);
    }
}
