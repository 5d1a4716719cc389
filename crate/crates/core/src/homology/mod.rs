//! Exact integral homology of cube complexes.
//!
//! A degree-`q` presentation keeps an echelon basis `E` of the cycle lattice
//! `Z_q`, and a saturated basis `Y` of the integer kernel of `Aᵀ`, where `A`
//! writes the boundaries in `E`-coordinates. The pairing with `Y` is then a
//! surjection `Z_q → ℤ^b` whose kernel is the saturation of `B_q`, which is
//! exactly the projection to the free part of `H_q`.

mod action;
pub(crate) mod coeff;
pub(crate) mod lattice;
mod matrix;
mod snf;

pub use action::{permutation_action_map, ActionMap, GraphAutomorphism};
pub use matrix::{Chain, SparseIntMatrix};
pub use snf::{rational_rank, smith_divisors, smith_normal_form, SmithForm, SmithTransforms};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{CubeComplex, SubcomplexInclusion};
use crate::error::{invalid_arg, Error, Result};
use coeff::with_fallback;
use lattice::{kernel_basis, right_inverse, EchelonBasis};

#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    q: usize,
    betti: usize,
    torsion: Vec<BigInt>,
    cycle_basis: Vec<Chain>,
    cycles: EchelonBasis,
    /// Functionals on `E`-coordinates, one per free generator.
    dual: Vec<Chain>,
}

impl HomologyPresentation {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn betti(&self) -> usize {
        self.betti
    }

    /// Elementary divisors greater than one.
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Integer cycles whose classes form a basis of `H_q` modulo torsion.
    pub fn cycle_basis(&self) -> &[Chain] {
        &self.cycle_basis
    }

    /// Rank of the cycle lattice `Z_q`.
    pub fn cycle_rank(&self) -> usize {
        self.cycles.len()
    }

    /// Coordinates of the class of `z` in the free basis. Torsion and
    /// boundaries project to zero.
    pub fn project(&self, z: &Chain) -> Result<Vec<BigInt>> {
        let x = self
            .cycles
            .solve(z)
            .ok_or_else(|| Error::InvalidArgument("chain is not a cycle".into()))?;
        Ok(self.dual.iter().map(|y| dot(y, &x)).collect())
    }

    pub fn report(&self, cells: Vec<usize>) -> HomologyReport {
        HomologyReport {
            q: self.q,
            betti: self.betti,
            torsion: self.torsion.clone(),
            cells,
        }
    }
}

fn dot(a: &Chain, b: &Chain) -> BigInt {
    let mut s = BigInt::zero();
    let (x, y) = (a.entries(), b.entries());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &x[i].1 * &y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub q: usize,
    pub betti: usize,
    #[serde(with = "crate::serde_num::big_vec")]
    pub torsion: Vec<BigInt>,
    pub cells: Vec<usize>,
}

pub fn homology(c: &CubeComplex, q: usize) -> Result<HomologyPresentation> {
    let dq = c.boundary(q);
    let up = c.boundary(q + 1);
    let k = with_fallback!(kernel_basis(dq.columns()));
    let cycles = EchelonBasis::new(&k);
    let dim_z = cycles.len();

    let a_cols = up
        .columns()
        .iter()
        .map(|b| {
            cycles
                .solve(b)
                .ok_or_else(|| Error::InvalidState(format!("boundary of a {}-cell is not a cycle", q + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let a = SparseIntMatrix::from_columns(dim_z, a_cols)?;
    let dual = with_fallback!(kernel_basis(a.transpose().columns()));
    let betti = dual.len();

    let cycle_basis = if betti == 0 {
        Vec::new()
    } else {
        let yt = SparseIntMatrix::from_columns(dim_z, dual.clone())?.transpose();
        let xs = with_fallback!(right_inverse(yt.columns(), betti))
            .ok_or_else(|| Error::InvalidState("free part projection is not onto".into()))?;
        xs.iter().map(|x| cycles.combine(x)).collect()
    };

    let torsion = smith_divisors(&up)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    Ok(HomologyPresentation {
        q,
        betti,
        torsion,
        cycle_basis,
        cycles,
        dual,
    })
}

pub fn project_to_homology(h: &HomologyPresentation, z: &Chain) -> Result<Vec<BigInt>> {
    h.project(z)
}

/// `H_q` as Betti number and torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(with = "crate::serde_num::big_vec")]
    pub torsion: Vec<BigInt>,
}

/// All homology groups from elementary divisors of the boundary maps
/// alone (no cycle representatives).
pub fn homology_groups(c: &CubeComplex) -> Vec<HomologyGroup> {
    let top = c.top_dim();
    let divisors: Vec<Vec<BigInt>> = (0..=top + 1).map(|q| smith_divisors(&c.boundary(q))).collect();
    (0..=top)
        .map(|q| HomologyGroup {
            betti: c.num_cells(q) - divisors[q].len() - divisors[q + 1].len(),
            torsion: divisors[q + 1].iter().filter(|d| !d.is_one()).cloned().collect(),
        })
        .collect()
}

pub fn betti_numbers(c: &CubeComplex) -> Vec<usize> {
    homology_groups(c).into_iter().map(|h| h.betti).collect()
}

/// Betti numbers from fraction-free rational ranks; independent of the
/// Smith routines.
pub fn rational_betti_numbers(c: &CubeComplex) -> Vec<usize> {
    let top = c.top_dim();
    let ranks: Vec<usize> = (0..=top + 1).map(|q| rational_rank(&c.boundary(q))).collect();
    (0..=top)
        .map(|q| c.num_cells(q) - ranks[q] - ranks[q + 1])
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationVerdict {
    pub generates_over_q: bool,
    pub generates_over_z: bool,
    pub missing_rank: usize,
}

/// Whether the candidates together with the boundaries span `Z_q`.
pub fn generated_check(c: &CubeComplex, q: usize, candidates: &[Chain]) -> Result<GenerationVerdict> {
    let dq = c.boundary(q);
    let cq = c.num_cells(q);
    for (i, z) in candidates.iter().enumerate() {
        if z.max_index().is_some_and(|m| m >= cq) {
            return invalid_arg(format!("candidate {i} has entries outside the {q}-cells"));
        }
        if !dq.apply(z).is_zero() {
            return invalid_arg(format!("candidate {i} is not a cycle"));
        }
    }
    let dim_z = cq - smith_divisors(&dq).len();
    let m = c.boundary(q + 1).with_extra_columns(candidates)?;
    let d = smith_divisors(&m);
    let spans = d.len() == dim_z;
    Ok(GenerationVerdict {
        generates_over_q: spans,
        generates_over_z: spans && snf::all_units(&d),
        missing_rank: dim_z - d.len(),
    })
}

#[derive(Clone, Debug)]
pub struct InducedMap {
    /// `matrix[i][j]`: coordinate `i` in `H_q(c)` of basis class `j` of the
    /// subcomplex.
    pub matrix: Vec<Vec<BigInt>>,
    pub pushed: Vec<Chain>,
    pub rank: usize,
}

pub fn induced_inclusion_map(
    inc: &SubcomplexInclusion,
    c: &CubeComplex,
    q: usize,
) -> Result<InducedMap> {
    if inc.parent_id != c.id() {
        return invalid_arg("the inclusion was not taken in this complex");
    }
    let hs = homology(&inc.sub, q)?;
    let hc = homology(c, q)?;
    let pushed: Vec<Chain> = hs
        .cycle_basis()
        .iter()
        .map(|z| inc.push_forward(q, z))
        .collect();
    let cols = pushed
        .iter()
        .map(|z| hc.project(z))
        .collect::<Result<Vec<_>>>()?;
    let matrix: Vec<Vec<BigInt>> = (0..hc.betti())
        .map(|i| cols.iter().map(|col| col[i].clone()).collect())
        .collect();
    let rank = rank_of_dense(&matrix, cols.len());
    Ok(InducedMap { matrix, pushed, rank })
}

pub(crate) fn rank_of_dense(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let triplets = rows.iter().enumerate().flat_map(|(i, r)| {
        r.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(j, v)| (i, j, v.clone()))
    });
    let m = SparseIntMatrix::from_triplets(rows.len(), ncols, triplets).expect("in range");
    rational_rank(&m)
}
