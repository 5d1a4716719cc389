//! The three stabilizing families: wedges/subtree glueings indexed by
//! `FI^ℓ`, graphs strung along an interval (indexed by finite totally ordered
//! sets) and along a circle (finite cyclically ordered sets).

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{glue_labeled, point, Correspondence, EdgeId, Graph, Subgraph, SummandLabel, VertexId};
use crate::error::{invalid_arg, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    WedgeFi,
    IntervalDelta,
    CircleLambda,
}

/// One summand `G_i`. For `WedgeFi` the correspondence marks how `H_i ⊂ G_i`
/// sits in the base graph; for the interval and circle families the summand
/// is wedged at its basepoint and `glue` is ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub graph: Graph,
    #[serde(default)]
    pub glue: Option<Correspondence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    #[serde(default = "point")]
    pub base: Graph,
    pub summands: Vec<Summand>,
}

/// Where copy `m` of a summand landed: `vertices[x]` / `edges[e]` are the
/// realized ids of summand vertex `x` / edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummandCopy {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct RealizedFamily {
    pub graph: Graph,
    pub sizes: Vec<usize>,
    /// `copies[i][m]` for coordinate `i`, copy `m`.
    pub copies: Vec<Vec<SummandCopy>>,
}

impl FamilyDescriptor {
    pub fn wedge(base: Graph, summands: Vec<(Graph, Correspondence)>) -> Result<FamilyDescriptor> {
        let f = FamilyDescriptor {
            kind: FamilyKind::WedgeFi,
            base,
            summands: summands
                .into_iter()
                .map(|(graph, c)| Summand {
                    graph,
                    glue: Some(c),
                })
                .collect(),
        };
        f.validate()?;
        Ok(f)
    }

    /// `G₀ = point`, `G₁ = interval`: the star family.
    pub fn star_family() -> FamilyDescriptor {
        let interval = super::make_path_graph(1).expect("interval");
        FamilyDescriptor::wedge(point(), vec![(interval, Correspondence::point(0, 0))])
            .expect("star family is valid")
    }

    pub fn interval(summand: Graph) -> Result<FamilyDescriptor> {
        Self::along(FamilyKind::IntervalDelta, summand)
    }

    pub fn circle(summand: Graph) -> Result<FamilyDescriptor> {
        Self::along(FamilyKind::CircleLambda, summand)
    }

    fn along(kind: FamilyKind, summand: Graph) -> Result<FamilyDescriptor> {
        let f = FamilyDescriptor {
            kind,
            base: point(),
            summands: vec![Summand {
                graph: summand,
                glue: None,
            }],
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_json(s: &str) -> Result<FamilyDescriptor> {
        let f: FamilyDescriptor = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serialization cannot fail")
    }

    pub fn arity(&self) -> usize {
        match self.kind {
            FamilyKind::WedgeFi => self.summands.len(),
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            FamilyKind::WedgeFi => {
                if self.summands.is_empty() {
                    return invalid_arg("a wedge family needs at least one summand");
                }
                for (i, s) in self.summands.iter().enumerate() {
                    let Some(c) = &s.glue else {
                        return invalid_arg(format!("summand {i} has no glueing correspondence"));
                    };
                    c.validate(&self.base, &s.graph)?;
                }
            }
            FamilyKind::IntervalDelta | FamilyKind::CircleLambda => {
                if self.summands.len() != 1 {
                    return invalid_arg("interval and circle families take exactly one summand");
                }
                let g = &self.summands[0].graph;
                let Some(b) = g.basepoint() else {
                    return invalid_arg("the summand needs a basepoint");
                };
                if g.valence(b) < 2 {
                    return invalid_arg("the summand's basepoint must have valence at least 2");
                }
                if !g.is_connected() {
                    return invalid_arg("the summand must be connected");
                }
            }
        }
        Ok(())
    }

    /// The graph at object `sizes`, with every element of copy `m` of
    /// coordinate `i` labeled `(i, m)`.
    pub fn realize(&self, sizes: &[usize]) -> Result<RealizedFamily> {
        self.validate()?;
        if sizes.len() != self.arity() {
            return invalid_arg(format!(
                "expected {} sizes, got {}",
                self.arity(),
                sizes.len()
            ));
        }
        match self.kind {
            FamilyKind::WedgeFi => self.realize_wedge(sizes),
            FamilyKind::IntervalDelta => {
                let k = sizes[0];
                let backbone = super::make_path_graph(k + 1)?;
                self.realize_along(backbone, (1..=k).collect(), sizes)
            }
            FamilyKind::CircleLambda => {
                let k = sizes[0];
                let backbone = circle_backbone(k)?;
                self.realize_along(backbone, (0..k).collect(), sizes)
            }
        }
    }

    fn realize_wedge(&self, sizes: &[usize]) -> Result<RealizedFamily> {
        let mut g = self.base.clone();
        let mut copies = Vec::with_capacity(sizes.len());
        for (i, (s, &j)) in self.summands.iter().zip(sizes).enumerate() {
            let along = s.glue.as_ref().expect("validated");
            let mut mine = Vec::with_capacity(j);
            for m in 0..j {
                let glued = glue_labeled(&g, &s.graph, along, Some(SummandLabel { coord: i, copy: m }))?;
                g = glued.graph;
                mine.push(SummandCopy {
                    vertices: glued.vertex_map,
                    edges: glued.edge_map,
                });
            }
            copies.push(mine);
        }
        Ok(RealizedFamily {
            graph: g,
            sizes: sizes.to_vec(),
            copies,
        })
    }

    fn realize_along(
        &self,
        backbone: Graph,
        attach: Vec<VertexId>,
        sizes: &[usize],
    ) -> Result<RealizedFamily> {
        let summand = &self.summands[0].graph;
        let b = summand.basepoint().expect("validated");
        let mut g = backbone;
        let mut mine = Vec::with_capacity(attach.len());
        for (m, &at) in attach.iter().enumerate() {
            let glued = glue_labeled(
                &g,
                summand,
                &Correspondence::point(b, at),
                Some(SummandLabel { coord: 0, copy: m }),
            )?;
            g = glued.graph;
            mine.push(SummandCopy {
                vertices: glued.vertex_map,
                edges: glued.edge_map,
            });
        }
        Ok(RealizedFamily {
            graph: g,
            sizes: sizes.to_vec(),
            copies: vec![mine],
        })
    }

    /// Images of all degree-`degree` objects in the object `target`: the base
    /// (or backbone) together with a choice of `degree[i]` copies in each
    /// coordinate. Returned in lexicographic order of the choices.
    pub fn support_embeddings(&self, degree: &[usize], target: &[usize]) -> Result<Vec<Subgraph>> {
        if degree.len() != self.arity() || target.len() != self.arity() {
            return invalid_arg("degree and target must have one entry per coordinate");
        }
        if degree.iter().zip(target).any(|(d, k)| d > k) {
            return invalid_arg("degree must be at most the target size in every coordinate");
        }
        let realized = self.realize(target)?;
        Ok(support_subgraphs(&realized, degree))
    }
}

/// Cycle backbone with `k` vertices and `k` edges. For `k <= 1` this is a
/// single vertex with a loop.
fn circle_backbone(k: usize) -> Result<Graph> {
    if k <= 1 {
        return Graph::new(1, vec![(0, 0)])?.with_basepoint(0);
    }
    Graph::new(k, (0..k).map(|i| (i, (i + 1) % k)).collect())?.with_basepoint(0)
}

pub(crate) fn support_subgraphs(realized: &RealizedFamily, degree: &[usize]) -> Vec<Subgraph> {
    let g = &realized.graph;
    let mut core = Subgraph::default();
    core.vertices.extend(g.vertices().filter(|&v| g.vertex_label(v).is_none()));
    core.edges.extend((0..g.num_edges()).filter(|&e| g.edge_label(e).is_none()));

    let choices: Vec<Vec<Vec<usize>>> = realized
        .sizes
        .iter()
        .zip(degree)
        .map(|(&k, &d)| (0..k).combinations(d).collect())
        .collect();
    choices
        .into_iter()
        .multi_cartesian_product()
        .map(|pick| {
            let mut s = core.clone();
            for (i, chosen) in pick.iter().enumerate() {
                for &m in chosen {
                    let copy = &realized.copies[i][m];
                    let label = SummandLabel { coord: i, copy: m };
                    s.vertices
                        .extend(copy.vertices.iter().filter(|&&v| g.vertex_label(v) == Some(label)));
                    s.edges
                        .extend(copy.edges.iter().filter(|&&e| g.edge_label(e) == Some(label)));
                }
            }
            s
        })
        .collect()
}

impl RealizedFamily {
    /// Binomial product `Π C(K_i, d_i)`: the number of support subgraphs.
    pub fn support_count(&self, degree: &[usize]) -> usize {
        self.sizes
            .iter()
            .zip(degree)
            .map(|(&k, &d)| num_integer::binomial(k, d))
            .product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cycle_graph, make_path_graph, make_star};

    #[test]
    fn star_family_realizes_stars() {
        let f = FamilyDescriptor::star_family();
        for k in 1..6 {
            let r = f.realize(&[k]).unwrap();
            assert_eq!(r.graph.edges(), make_star(k).unwrap().edges());
            assert_eq!(r.graph.num_vertices(), k + 1);
        }
    }

    #[test]
    fn wedge_counts() {
        let base = make_cycle_graph(3).unwrap();
        let s = make_star(3).unwrap();
        let f = FamilyDescriptor::wedge(
            base.clone(),
            vec![
                (make_path_graph(1).unwrap(), Correspondence::point(0, 0)),
                (s.clone(), Correspondence::point(1, 2)),
            ],
        )
        .unwrap();
        let r = f.realize(&[2, 3]).unwrap();
        assert_eq!(r.graph.num_edges(), 3 + 2 * 1 + 3 * 3);
        assert_eq!(r.graph.num_vertices(), 3 + 2 * 1 + 3 * 3);
        assert!(r.graph.is_connected());
        // labels partition the non-base edges
        let labeled = r.graph.labels().edges.len();
        assert_eq!(labeled, r.graph.num_edges() - base.num_edges());
    }

    #[test]
    fn interval_family() {
        let f = FamilyDescriptor::interval(make_cycle_graph(3).unwrap()).unwrap();
        let r0 = f.realize(&[0]).unwrap();
        assert_eq!(r0.graph.edges(), make_path_graph(1).unwrap().edges());
        let r3 = f.realize(&[3]).unwrap();
        assert_eq!(r3.graph.num_edges(), 4 + 3 * 3);
        assert_eq!(r3.graph.euler_characteristic(), 1 - 3);
        // attachments at interior backbone vertices
        for m in 0..3 {
            assert_eq!(r3.copies[0][m].vertices[0], m + 1);
        }
    }

    #[test]
    fn circle_family_euler_characteristic() {
        let f = FamilyDescriptor::circle(make_cycle_graph(3).unwrap()).unwrap();
        let r = f.realize(&[2]).unwrap();
        // brute-force audit of the construction: 2 backbone vertices, 2 new
        // vertices per copy; 2 backbone edges, 3 edges per copy
        assert_eq!(r.graph.num_vertices(), 2 + 2 * 2);
        assert_eq!(r.graph.num_edges(), 2 + 2 * 3);
        assert_eq!(r.graph.euler_characteristic(), -2);
        assert!(!r.graph.has_loops());
        let r1 = f.realize(&[1]).unwrap();
        assert!(r1.graph.has_loops());
    }

    #[test]
    fn interval_family_rejects_leaf_basepoint() {
        assert!(FamilyDescriptor::interval(make_path_graph(1).unwrap()).is_err());
    }

    #[test]
    fn support_counts() {
        let f = FamilyDescriptor::star_family();
        assert_eq!(f.support_embeddings(&[2], &[4]).unwrap().len(), 6);
        let fi = FamilyDescriptor::interval(make_cycle_graph(3).unwrap()).unwrap();
        let whole = fi.support_embeddings(&[3], &[3]).unwrap();
        assert_eq!(whole.len(), 1);
        let r = fi.realize(&[3]).unwrap();
        assert_eq!(whole[0], Subgraph::whole(&r.graph));
        let fc = FamilyDescriptor::circle(make_cycle_graph(3).unwrap()).unwrap();
        let subs = fc.support_embeddings(&[1], &[5]).unwrap();
        assert_eq!(subs.len(), 5);
        let r = fc.realize(&[5]).unwrap();
        for s in &subs {
            s.validate(&r.graph).unwrap();
            assert!(s.is_connected(&r.graph));
            assert!((0..5).all(|e| s.edges.contains(&e)));
        }
        assert!(f.support_embeddings(&[3], &[2]).is_err());
    }

    #[test]
    fn descriptor_json() {
        let f = FamilyDescriptor::star_family();
        let s = f.to_json();
        assert_eq!(FamilyDescriptor::from_json(&s).unwrap(), f);
    }
}
