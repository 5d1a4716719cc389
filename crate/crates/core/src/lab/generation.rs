//! Span checks: products of basic cycles on trees, and images of
//! low-degree objects in family members.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cycles::{product_chain, Neighbourhood, Parked, Parking, Shape};
use crate::complex::{build_model, subcomplex_supported_in, BuildOptions, CubeComplex};
use crate::error::{invalid_arg, Result};
use crate::graph::{support_subgraphs, FamilyDescriptor, FamilyKind, Graph, LoopSplit, RealizedFamily};
use crate::homology::coeff::with_fallback;
use crate::homology::lattice::kernel_basis;
use crate::homology::{generated_check, Chain, GenerationVerdict};

/// Every parking of `particles` avoiding the given shapes: on free
/// vertices (at most one per vertex) or on edges in every relative order.
fn parkings(g: &Graph, particles: &[usize], shapes: &[&Shape]) -> Vec<Parking> {
    let spots: Vec<Parked> = g
        .vertices()
        .map(Parked::Vertex)
        .chain((0..g.num_edges()).map(Parked::Edge))
        .filter(|&p| shapes.iter().all(|f| f.allows(p)))
        .collect();
    fn rec(spots: &[Parked], rest: &[usize], cur: &mut Vec<(usize, Parked)>, out: &mut Vec<Parking>) {
        let Some((&p, tail)) = rest.split_first() else {
            out.push(Parking::new(cur.clone()));
            return;
        };
        for &s in spots {
            if matches!(s, Parked::Vertex(_)) && cur.iter().any(|(_, t)| *t == s) {
                continue;
            }
            cur.push((p, s));
            rec(spots, tail, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&spots, particles, &mut Vec::new(), &mut out);
    out
}

/// Stars at essential vertices and H's between essential vertices with no
/// essential vertex in between.
fn neighbourhoods(g: &Graph) -> Vec<Neighbourhood> {
    let essential = g.essential_vertices();
    let mut out: Vec<Neighbourhood> = essential.iter().filter_map(|&v| Neighbourhood::star(g, v).ok()).collect();
    for (&v, &w) in essential.iter().tuple_combinations() {
        if let Ok(h) = Neighbourhood::h(g, v, w) {
            out.push(h);
        }
    }
    out
}

/// Sets of `q` disjoint blocks of at least two particles, each set once.
fn block_sets(n: usize, q: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(n: usize, q: usize, from: usize, used: &mut Vec<bool>, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        // blocks are listed by increasing smallest element
        for first in from..n {
            if used[first] {
                continue;
            }
            let free: Vec<usize> = (first + 1..n).filter(|&p| !used[p]).collect();
            for size in 1..=free.len() {
                for rest in free.iter().copied().combinations(size) {
                    let mut block = vec![first];
                    block.extend(rest);
                    for &p in &block {
                        used[p] = true;
                    }
                    cur.push(block);
                    rec(n, q, first + 1, used, cur, out);
                    let block = cur.pop().expect("pushed");
                    for p in block {
                        used[p] = false;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(n, q, 0, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Products of `q` basic cycles on disjoint particle blocks, with the other
/// particles parked in every admissible way. In degree 0 these are all
/// 0-cells.
pub fn product_candidates(c: &CubeComplex, q: usize) -> Result<Vec<Chain>> {
    let n = c.num_particles();
    let g = c.graph();
    if q == 0 {
        return Ok((0..c.num_cells(0)).map(Chain::basis).collect());
    }
    if 2 * q > n {
        return Ok(Vec::new());
    }
    let hoods = neighbourhoods(g);
    let mut jobs: Vec<(Vec<Vec<usize>>, Vec<usize>)> = Vec::new();
    for blocks in block_sets(n, q) {
        for choice in (0..q).map(|_| 0..hoods.len()).multi_cartesian_product() {
            jobs.push((blocks.clone(), choice));
        }
    }
    let chains = jobs
        .par_iter()
        .map(|(blocks, choice)| {
            let options: Vec<Vec<Shape>> = blocks
                .iter()
                .zip(choice)
                .map(|(b, &h)| hoods[h].shapes(g, b))
                .collect::<Result<_>>()?;
            let moving: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
            let rest: Vec<usize> = (0..n).filter(|p| !moving.contains(p)).collect();
            let mut out = Vec::new();
            if options.iter().any(Vec::is_empty) {
                return Ok(out);
            }
            let firsts: Vec<&Shape> = options.iter().map(|o| &o[0]).collect();
            if firsts.iter().tuple_combinations().any(|(x, y)| !x.compatible(y)) {
                return Ok(out);
            }
            // footprints depend only on the neighbourhoods
            let spots = parkings(g, &rest, &firsts);
            for combo in options.iter().map(|v| v.iter()).multi_cartesian_product() {
                for parking in &spots {
                    out.push(product_chain(c, &combo, parking)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(dedup_up_to_sign(chains.into_iter().flatten().collect()))
}

fn dedup_up_to_sign(chains: Vec<Chain>) -> Vec<Chain> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for z in chains {
        let key = if z.entries().first().is_some_and(|(_, v)| v.sign() == num_bigint::Sign::Minus) {
            z.scale(&num_bigint::BigInt::from(-1))
        } else {
            z
        };
        if seen.insert(key.clone()) {
            out.push(key);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeGeneratorReport {
    pub n: usize,
    pub q: usize,
    pub candidates: usize,
    pub verdict: GenerationVerdict,
}

/// Checks over ℤ that products of basic cycles generate `H_q(Conf_n(tree))`.
pub fn verify_tree_generators(tree: &Graph, n: usize, q: usize) -> Result<bool> {
    Ok(tree_generator_report(tree, n, q, &BuildOptions::default())?
        .verdict
        .generates_over_z)
}

pub fn tree_generator_report(tree: &Graph, n: usize, q: usize, opts: &BuildOptions) -> Result<TreeGeneratorReport> {
    if !tree.is_tree() {
        return invalid_arg("tree generators are defined for trees only");
    }
    let c = build_model(tree, n, &BTreeSet::new(), opts)?;
    let candidates = product_candidates(&c, q)?;
    let verdict = generated_check(&c, q, &candidates)?;
    Ok(TreeGeneratorReport {
        n,
        q,
        candidates: candidates.len(),
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVerdict {
    pub degree: usize,
    pub supports: usize,
    pub candidates: usize,
    pub over_q: bool,
    pub over_z: bool,
    pub missing_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub family: FamilyKind,
    pub n: usize,
    pub q: usize,
    pub sizes: Vec<usize>,
    pub degree: usize,
    pub over_q: bool,
    pub over_z: bool,
    /// Smallest degree in the unbroken run of passing degrees below
    /// `degree`, if `degree` itself passes.
    pub d_min: Option<usize>,
    pub degree_bound: usize,
    /// `degree_bound` clamped to the sizes.
    pub checked_bound: usize,
    pub bound_passes: bool,
    pub betti: usize,
    pub f_vector: Vec<usize>,
    pub verdicts: Vec<DegreeVerdict>,
    pub elapsed_ms: u128,
}

/// The known generation degree for this family.
pub fn degree_bound(f: &FamilyDescriptor, n: usize) -> usize {
    match f.kind {
        FamilyKind::WedgeFi => {
            let point_glue = f
                .summands
                .iter()
                .all(|s| s.glue.as_ref().is_some_and(|c| c.edges.is_empty()));
            if point_glue {
                3 * n
            } else {
                2 * n
            }
        }
        FamilyKind::IntervalDelta => n,
        FamilyKind::CircleLambda => 6 * n,
    }
}

/// The complex of a family member, with loops split first.
pub(crate) struct FamilyComplex {
    pub realized: RealizedFamily,
    pub splits: Vec<LoopSplit>,
    pub complex: CubeComplex,
}

pub(crate) fn family_complex(f: &FamilyDescriptor, n: usize, sizes: &[usize], opts: &BuildOptions) -> Result<FamilyComplex> {
    let realized = f.realize(sizes)?;
    let (g, splits) = realized.graph.normalize_loops();
    let complex = build_model(&g, n, &BTreeSet::new(), opts)?;
    Ok(FamilyComplex {
        realized,
        splits,
        complex,
    })
}

impl FamilyComplex {
    /// Span check of the images of all degree-`d` objects.
    pub fn degree_verdict(&self, q: usize, d: usize) -> Result<DegreeVerdict> {
        let degree: Vec<usize> = self.realized.sizes.iter().map(|&k| d.min(k)).collect();
        let supports = support_subgraphs(&self.realized, &degree);
        let pushed = supports
            .par_iter()
            .map(|s| {
                let mut s = s.clone();
                s.extend_through_splits(&self.splits);
                let inc = subcomplex_supported_in(&self.complex, &s)?;
                let z = with_fallback!(kernel_basis(inc.sub.boundary(q).columns()));
                Ok(z.iter().map(|z| inc.push_forward(q, z)).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let candidates = dedup_up_to_sign(pushed.into_iter().flatten().collect());
        let v = generated_check(&self.complex, q, &candidates)?;
        Ok(DegreeVerdict {
            degree: d,
            supports: supports.len(),
            candidates: candidates.len(),
            over_q: v.generates_over_q,
            over_z: v.generates_over_z,
            missing_rank: v.missing_rank,
        })
    }
}

/// Builds the member at `sizes`, checks generation by degree-`d` images, and
/// searches downward for the smallest passing degree.
pub fn generation_degree_check(
    f: &FamilyDescriptor,
    n: usize,
    q: usize,
    d: usize,
    sizes: &[usize],
    opts: &BuildOptions,
) -> Result<GenerationReport> {
    let start = Instant::now();
    if sizes.len() != f.arity() {
        return invalid_arg(format!("expected {} sizes", f.arity()));
    }
    let max_k = sizes.iter().copied().max().unwrap_or(0);
    if d > max_k {
        return invalid_arg("degree exceeds every size");
    }
    let fc = family_complex(f, n, sizes, opts)?;
    let bound = degree_bound(f, n);
    let checked_bound = bound.min(max_k);

    let mut verdicts = Vec::new();
    let at = fc.degree_verdict(q, d)?;
    let (over_q, over_z) = (at.over_q, at.over_z);
    verdicts.push(at);
    let mut d_min = over_z.then_some(d);
    if over_z {
        for e in (0..d).rev() {
            let v = fc.degree_verdict(q, e)?;
            let pass = v.over_z;
            verdicts.push(v);
            if !pass {
                break;
            }
            d_min = Some(e);
        }
    }
    let bound_passes = if checked_bound == d {
        over_z
    } else if d_min.is_some_and(|m| m <= checked_bound && checked_bound <= d) {
        true
    } else {
        fc.degree_verdict(q, checked_bound)?.over_z
    };
    if over_q && !over_z {
        log::warn!("degree {d} images generate over Q but not over Z: torsion obstruction");
    }
    let betti = crate::homology::homology(&fc.complex, q)?.betti();
    verdicts.sort_by_key(|v| v.degree);
    Ok(GenerationReport {
        family: f.kind,
        n,
        q,
        sizes: sizes.to_vec(),
        degree: d,
        over_q,
        over_z,
        d_min,
        degree_bound: bound,
        checked_bound,
        bound_passes,
        betti,
        f_vector: fc.complex.f_vector(),
        verdicts,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_h_graph, make_path_graph, make_star};

    #[test]
    fn trees_small() {
        assert!(verify_tree_generators(&make_star(3).unwrap(), 2, 1).unwrap());
        assert!(verify_tree_generators(&make_path_graph(1).unwrap(), 3, 1).unwrap());
        assert!(verify_tree_generators(&make_h_graph(), 2, 1).unwrap());
        assert!(verify_tree_generators(&crate::graph::make_cycle_graph(3).unwrap(), 2, 1).is_err());
    }

    #[test]
    fn star_family_degrees() {
        let f = FamilyDescriptor::star_family();
        let r = generation_degree_check(&f, 2, 1, 4, &[5], &BuildOptions::default()).unwrap();
        assert!(r.over_z);
        assert!(r.d_min.unwrap() <= 4);
    }
}
