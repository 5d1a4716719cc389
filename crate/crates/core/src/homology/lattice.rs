//! Integer column reduction: kernel lattices, echelon bases and exact
//! solves against them.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::coeff::{axpy, convert_vec, ext_gcd, lincomb, to_big_vec, Checked, Coeff, SparseVec};
use super::matrix::Chain;

pub(crate) struct Reduced<T> {
    /// Reduced columns; nonzero ones have pairwise distinct lowest rows.
    pub cols: Vec<SparseVec<T>>,
    /// `v[j]` expresses reduced column `j` in the original columns.
    pub v: Vec<SparseVec<T>>,
    /// lowest row -> column index
    pub pivots: HashMap<usize, usize>,
}

fn low<T>(c: &SparseVec<T>) -> Option<(usize, &T)> {
    c.last().map(|(i, x)| (*i, x))
}

/// Column reduction by unimodular column operations. With `track`, the
/// transform is recorded so that `M·V = reduced`.
pub(crate) fn column_reduce<T: Coeff>(cols: Vec<SparseVec<T>>, track: bool) -> Checked<Reduced<T>> {
    let n = cols.len();
    let mut red: Vec<SparseVec<T>> = Vec::with_capacity(n);
    let mut v: Vec<SparseVec<T>> = Vec::with_capacity(if track { n } else { 0 });
    let mut pivots: HashMap<usize, usize> = HashMap::new();
    for (j, mut col) in cols.into_iter().enumerate() {
        let mut vj: SparseVec<T> = if track { vec![(j, T::one())] } else { Vec::new() };
        while let Some((l, a)) = low(&col) {
            let Some(&p) = pivots.get(&l) else {
                pivots.insert(l, j);
                break;
            };
            let a = a.clone();
            let b = low(&red[p]).expect("pivot column is nonzero").1.clone();
            let (q, r) = a.div_rem(&b)?;
            if r.is_zero() {
                let c = q.neg()?;
                col = axpy(&col, &c, &red[p])?;
                if track {
                    vj = axpy(&vj, &c, &v[p])?;
                }
            } else {
                // [p, col] <- [p, col] · [[s, -a/g], [t, b/g]], determinant 1
                let (g, s, t) = ext_gcd(&b, &a)?;
                let ag = a.div_rem(&g)?.0.neg()?;
                let bg = b.div_rem(&g)?.0;
                let new_p = lincomb(&s, &red[p], &t, &col)?;
                col = lincomb(&ag, &red[p], &bg, &col)?;
                red[p] = new_p;
                if track {
                    let new_vp = lincomb(&s, &v[p], &t, &vj)?;
                    vj = lincomb(&ag, &v[p], &bg, &vj)?;
                    v[p] = new_vp;
                }
            }
        }
        red.push(col);
        if track {
            v.push(vj);
        }
    }
    Ok(Reduced { cols: red, v, pivots })
}

/// A basis of the integer kernel of the matrix with the given columns,
/// as vectors over the column indices.
pub(crate) fn kernel_basis<T: Coeff>(cols: &[Chain]) -> Checked<Vec<Chain>> {
    let cols = cols
        .iter()
        .map(|c| convert_vec::<T>(c.entries()))
        .collect::<Checked<Vec<_>>>()?;
    let r = column_reduce(cols, true)?;
    Ok(r.cols
        .iter()
        .zip(&r.v)
        .filter(|(c, _)| c.is_empty())
        .map(|(_, v)| Chain::from_entries(to_big_vec(v)))
        .collect())
}

/// A lattice basis in column echelon form (distinct lowest rows) that
/// supports exact coordinate solves.
#[derive(Clone, Debug, Default)]
pub(crate) struct EchelonBasis {
    cols: Vec<Chain>,
    pivots: HashMap<usize, usize>,
}

impl EchelonBasis {
    pub fn new(gens: &[Chain]) -> EchelonBasis {
        super::coeff::with_fallback!(echelon_of(gens))
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    /// Coordinates of `z` in this basis, or `None` if `z` is not in the
    /// lattice.
    pub fn solve(&self, z: &Chain) -> Option<Chain> {
        let mut z = z.clone();
        let mut coords = Vec::new();
        while let Some(l) = z.max_index() {
            let p = *self.pivots.get(&l)?;
            let (q, r) = num_integer::Integer::div_rem(&z.get(l), &self.cols[p].get(l));
            if r != BigInt::from(0) {
                return None;
            }
            z = z.add_scaled(&self.cols[p], &-&q);
            coords.push((p, q));
        }
        Some(Chain::from_entries(coords))
    }

    /// `Σ x_k · col_k`.
    pub fn combine(&self, x: &Chain) -> Chain {
        x.entries()
            .iter()
            .fold(Chain::zero(), |acc, (k, c)| acc.add_scaled(&self.cols[*k], c))
    }
}

fn echelon_of<T: Coeff>(gens: &[Chain]) -> Checked<EchelonBasis> {
    let cols = gens
        .iter()
        .map(|c| convert_vec::<T>(c.entries()))
        .collect::<Checked<Vec<_>>>()?;
    let r = column_reduce(cols, false)?;
    let cols: Vec<Chain> = r
        .cols
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| Chain::from_entries(to_big_vec(c)))
        .collect();
    let pivots = cols
        .iter()
        .enumerate()
        .map(|(k, c)| (c.max_index().expect("nonzero column"), k))
        .collect();
    Ok(EchelonBasis { cols, pivots })
}

/// For a surjective integer map given by its columns (over `rows` rows),
/// vectors `x_i` over the column indices with `M·x_i = e_i`. Returns `None`
/// if the map is not surjective over ℤ.
pub(crate) fn right_inverse<T: Coeff>(cols: &[Chain], rows: usize) -> Checked<Option<Vec<Chain>>> {
    let conv = cols
        .iter()
        .map(|c| convert_vec::<T>(c.entries()))
        .collect::<Checked<Vec<_>>>()?;
    let r = column_reduce(conv, true)?;
    if r.pivots.len() != rows || r.pivots.values().any(|&p| !low(&r.cols[p]).unwrap().1.is_unit()) {
        return Ok(None);
    }
    // Solve L·w = e_i over the reduced nonzero columns, then x_i = V·w.
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut z: SparseVec<T> = vec![(i, T::one())];
        let mut x: SparseVec<T> = Vec::new();
        while let Some((l, a)) = low(&z) {
            let p = r.pivots[&l];
            let b = low(&r.cols[p]).unwrap().1;
            // b = ±1
            let q = a.mul(b)?;
            z = axpy(&z, &q.neg()?, &r.cols[p])?;
            x = axpy(&x, &q, &r.v[p])?;
        }
        out.push(Chain::from_entries(to_big_vec(&x)));
    }
    Ok(Some(out))
}
