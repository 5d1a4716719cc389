//! Chain maps induced by graph automorphisms, with particles fixed.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{Chain, HomologyPresentation};
use crate::complex::{CubeComplex, ModelCell, Move, Place};
use crate::error::{invalid_arg, Error, Result};
use crate::graph::{EdgeId, Graph, RealizedFamily, VertexId};

/// `vertex_map[v]` is the image of `v`; `edge_map[e] = (e', reversed)`
/// sends edge `e` to `e'`, swapping ends when `reversed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAutomorphism {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<(EdgeId, bool)>,
}

impl GraphAutomorphism {
    pub fn identity(g: &Graph) -> GraphAutomorphism {
        GraphAutomorphism {
            vertex_map: g.vertices().collect(),
            edge_map: (0..g.num_edges()).map(|e| (e, false)).collect(),
        }
    }

    /// Permutes the copies of coordinate `coord`: copy `m` goes to copy
    /// `sigma[m]`.
    pub fn from_summand_permutation(
        realized: &RealizedFamily,
        coord: usize,
        sigma: &[usize],
    ) -> Result<GraphAutomorphism> {
        let copies = realized
            .copies
            .get(coord)
            .ok_or_else(|| Error::InvalidArgument(format!("no coordinate {coord}")))?;
        if !is_permutation(sigma) || sigma.len() != copies.len() {
            return invalid_arg("sigma must permute the copies of the coordinate");
        }
        let mut a = GraphAutomorphism::identity(&realized.graph);
        for (m, copy) in copies.iter().enumerate() {
            let target = &copies[sigma[m]];
            for (x, &v) in copy.vertices.iter().enumerate() {
                a.vertex_map[v] = target.vertices[x];
            }
            for (x, &e) in copy.edges.iter().enumerate() {
                a.edge_map[e] = (target.edges[x], false);
            }
        }
        a.validate(&realized.graph)?;
        Ok(a)
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.vertex_map.len() != g.num_vertices() || self.edge_map.len() != g.num_edges() {
            return invalid_arg("automorphism has the wrong size");
        }
        let edges: Vec<usize> = self.edge_map.iter().map(|(e, _)| *e).collect();
        if !is_permutation(&self.vertex_map) || !is_permutation(&edges) {
            return invalid_arg("automorphism is not bijective");
        }
        for (e, &(f, rev)) in self.edge_map.iter().enumerate() {
            let (a, b) = g.edge(e);
            let (c, d) = g.edge(f);
            let (a, b) = (self.vertex_map[a], self.vertex_map[b]);
            let ok = if rev { (b, a) == (c, d) } else { (a, b) == (c, d) };
            if !ok {
                return invalid_arg(format!("edge {e} is not mapped compatibly with its endpoints"));
            }
        }
        Ok(())
    }

    pub fn compose(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        // (self ∘ other)(x) = self(other(x))
        GraphAutomorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other
                .edge_map
                .iter()
                .map(|&(e, r)| {
                    let (f, s) = self.edge_map[e];
                    (f, r ^ s)
                })
                .collect(),
        }
    }

    fn map_cell(&self, cell: &ModelCell) -> ModelCell {
        let places = cell
            .places()
            .iter()
            .map(|pl| match *pl {
                Place::Vertex(v) => Place::Vertex(self.vertex_map[v]),
                Place::Edge { edge, slot } => {
                    let (f, rev) = self.edge_map[edge];
                    let slot = if rev {
                        cell.edge_tuple(edge).len() - 1 - slot
                    } else {
                        slot
                    };
                    Place::Edge { edge: f, slot }
                }
            })
            .collect();
        let moves = cell
            .moves()
            .iter()
            .map(|m| {
                let (f, rev) = self.edge_map[m.edge];
                Move {
                    particle: m.particle,
                    edge: f,
                    end: m.end ^ u8::from(rev),
                }
            })
            .collect();
        ModelCell::from_parts(places, moves)
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// The induced cellular permutation in every degree; every sign is `+1`
/// because particles keep their labels.
#[derive(Clone, Debug)]
pub struct ActionMap {
    /// `perms[q][i]` is the image of q-cell `i`.
    pub perms: Vec<Vec<usize>>,
}

impl ActionMap {
    pub fn apply(&self, q: usize, z: &Chain) -> Chain {
        z.reindex(&self.perms[q])
    }

    /// Matrix of the induced map on the free part of `H_q`, as rows.
    pub fn homology_matrix(&self, h: &HomologyPresentation) -> Result<Vec<Vec<BigInt>>> {
        let cols = h
            .cycle_basis()
            .par_iter()
            .map(|z| h.project(&self.apply(h.q(), z)))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..h.betti())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect())
    }

    pub fn trace(&self, h: &HomologyPresentation) -> Result<BigInt> {
        let m = self.homology_matrix(h)?;
        Ok(m.iter().enumerate().map(|(i, r)| &r[i]).sum())
    }

    /// Checks that the cell map commutes with every boundary.
    pub fn is_chain_map(&self, c: &CubeComplex) -> bool {
        (1..=c.top_dim()).all(|q| {
            let d = c.boundary(q);
            (0..c.num_cells(q)).all(|i| {
                let lhs = d.apply(&Chain::basis(self.perms[q][i]));
                let rhs = self.apply(q - 1, d.column(i));
                lhs == rhs
            })
        })
    }
}

pub fn permutation_action_map(c: &CubeComplex, auto: &GraphAutomorphism) -> Result<ActionMap> {
    auto.validate(c.graph())?;
    if c.sinks().iter().any(|s| !c.sinks().contains(&auto.vertex_map[*s])) {
        return invalid_arg("automorphism does not preserve the sinks");
    }
    if c.support().is_some() {
        return invalid_arg("actions are only defined on full complexes");
    }
    let mut perms = Vec::with_capacity(c.top_dim() + 1);
    for q in 0..=c.top_dim() {
        let cells = c
            .model_cells(q)
            .ok_or_else(|| Error::InvalidArgument("actions need the cubical model".into()))?;
        let perm = cells
            .par_iter()
            .map(|cell| {
                c.cell_index(&auto.map_cell(cell))
                    .ok_or_else(|| Error::InvalidState("image of a cell is not a cell".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        perms.push(perm);
    }
    Ok(ActionMap { perms })
}

/// Convenience: homology in degree `q` and the action of `auto` on it.
#[cfg(test)]
pub(crate) fn action_on_homology(
    c: &CubeComplex,
    auto: &GraphAutomorphism,
    q: usize,
) -> Result<(HomologyPresentation, Vec<Vec<BigInt>>)> {
    let h = super::homology(c, q)?;
    let m = permutation_action_map(c, auto)?.homology_matrix(&h)?;
    Ok((h, m))
}
