//! Smith normal form.
//!
//! Divisors alone come from a sparse elimination that first exhausts unit
//! pivots (Markowitz-style: shortest row first, sparsest column within it)
//! and finishes the small residual densely. Full transforms use a dense
//! routine and are meant for small matrices.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::Signed;

use super::coeff::{axpy, convert_vec, gcd, with_fallback, Checked, Coeff, SparseVec};
use super::matrix::SparseIntMatrix;

/// Unimodular `left`, `right` with `left · M · right = diag(divisors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithTransforms {
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub divisors: Vec<BigInt>,
    pub transforms: Option<SmithTransforms>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix, with_transforms: bool) -> SmithForm {
    if with_transforms {
        let dense = m.to_dense();
        let out = with_fallback!(dense_snf_big(&dense, true));
        SmithForm {
            divisors: out.0,
            transforms: out.1,
        }
    } else {
        SmithForm {
            divisors: smith_divisors(m),
            transforms: None,
        }
    }
}

/// Elementary divisors of `m` (nonzero diagonal of its Smith form).
pub fn smith_divisors(m: &SparseIntMatrix) -> Vec<BigInt> {
    with_fallback!(sparse_divisors(m))
}

fn sparse_divisors<T: Coeff>(m: &SparseIntMatrix) -> Checked<Vec<BigInt>> {
    let t = m.transpose();
    let mut rows: Vec<SparseVec<T>> = t
        .columns()
        .iter()
        .map(|c| convert_vec(c.entries()))
        .collect::<Checked<_>>()?;
    let ncols = m.cols();
    let mut col_count = vec![0usize; ncols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_count[*j] += 1;
            col_rows[*j].push(i);
        }
    }
    let mut active = vec![true; rows.len()];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        rows.iter().enumerate().map(|(i, r)| Reverse((r.len(), i))).collect();
    let mut units = 0usize;

    while let Some(Reverse((len, r))) = heap.pop() {
        if !active[r] || rows[r].len() != len {
            continue;
        }
        if len == 0 {
            active[r] = false;
            continue;
        }
        let Some((pc, pv)) = rows[r]
            .iter()
            .filter(|(_, v)| v.is_unit())
            .min_by_key(|(j, _)| col_count[*j])
            .cloned()
        else {
            continue;
        };
        units += 1;
        let pivot_row = std::mem::take(&mut rows[r]);
        active[r] = false;
        for (j, _) in &pivot_row {
            col_count[*j] -= 1;
        }
        let mut others = std::mem::take(&mut col_rows[pc]);
        others.sort_unstable();
        others.dedup();
        for i in others {
            if !active[i] {
                continue;
            }
            let a = super::coeff::sparse_get(&rows[i], pc);
            if a.is_zero() {
                continue;
            }
            // row_i -= (a / p) row_r, with p = ±1
            let factor = a.mul(&pv)?.neg()?;
            let old = std::mem::take(&mut rows[i]);
            let new = axpy(&old, &factor, &pivot_row)?;
            let (mut oi, mut ni) = (0, 0);
            while oi < old.len() || ni < new.len() {
                let oc = old.get(oi).map(|x| x.0);
                let nc = new.get(ni).map(|x| x.0);
                match (oc, nc) {
                    (Some(o), Some(n)) if o == n => {
                        oi += 1;
                        ni += 1;
                    }
                    (Some(o), Some(n)) if o < n => {
                        col_count[o] -= 1;
                        oi += 1;
                    }
                    (Some(o), None) => {
                        col_count[o] -= 1;
                        oi += 1;
                    }
                    (_, Some(n)) => {
                        col_count[n] += 1;
                        col_rows[n].push(i);
                        ni += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            rows[i] = new;
            heap.push(Reverse((rows[i].len(), i)));
        }
    }

    // Residual without unit entries.
    let residual: Vec<&SparseVec<T>> = rows
        .iter()
        .zip(&active)
        .filter(|(r, &a)| a && !r.is_empty())
        .map(|(r, _)| r)
        .collect();
    let mut out = vec![BigInt::from(1); units];
    if !residual.is_empty() {
        let mut cols: Vec<usize> = residual.iter().flat_map(|r| r.iter().map(|(j, _)| *j)).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut dense = vec![vec![T::zero(); cols.len()]; residual.len()];
        for (i, r) in residual.iter().enumerate() {
            for (j, v) in r.iter() {
                let jj = cols.binary_search(j).expect("column collected");
                dense[i][jj] = v.clone();
            }
        }
        let (d, _) = dense_snf(dense, false)?;
        out.extend(d.iter().map(Coeff::to_big));
    }
    Ok(out)
}

type DenseResult = (Vec<BigInt>, Option<SmithTransforms>);

fn dense_snf_big<T: Coeff>(m: &[Vec<BigInt>], track: bool) -> Checked<DenseResult> {
    let a: Vec<Vec<T>> = m
        .iter()
        .map(|r| r.iter().map(T::from_big).collect::<Checked<_>>())
        .collect::<Checked<_>>()?;
    let (d, tr) = dense_snf(a, track)?;
    let to_big = |x: Vec<Vec<T>>| -> Vec<Vec<BigInt>> {
        x.into_iter()
            .map(|r| r.iter().map(Coeff::to_big).collect())
            .collect()
    };
    Ok((
        d.iter().map(Coeff::to_big).collect(),
        tr.map(|(l, r)| SmithTransforms {
            left: to_big(l),
            right: to_big(r),
        }),
    ))
}

fn identity<T: Coeff>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

type Transforms<T> = (Vec<Vec<T>>, Vec<Vec<T>>);

/// Dense Smith normal form. Returns the positive divisors and, if
/// `track`, the left and right transforms.
pub(crate) fn dense_snf<T: Coeff>(
    mut a: Vec<Vec<T>>,
    track: bool,
) -> Checked<(Vec<T>, Option<Transforms<T>>)> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut left: Vec<Vec<T>> = if track { identity(nr) } else { Vec::new() };
    let mut right: Vec<Vec<T>> = if track { identity(nc) } else { Vec::new() };

    // row_i += c·row_k
    fn row_op<T: Coeff>(m: &mut [Vec<T>], i: usize, k: usize, c: &T) -> Checked<()> {
        if c.is_zero() {
            return Ok(());
        }
        for j in 0..m[i].len() {
            if !m[k][j].is_zero() {
                m[i][j] = m[i][j].add(&c.mul(&m[k][j])?)?;
            }
        }
        Ok(())
    }
    // col_j += c·col_k
    fn col_op<T: Coeff>(m: &mut [Vec<T>], j: usize, k: usize, c: &T) -> Checked<()> {
        if c.is_zero() {
            return Ok(());
        }
        for row in m.iter_mut() {
            if !row[k].is_zero() {
                row[j] = row[j].add(&c.mul(&row[k])?)?;
            }
        }
        Ok(())
    }
    fn swap_cols<T>(m: &mut [Vec<T>], j: usize, k: usize) {
        for row in m.iter_mut() {
            row.swap(j, k);
        }
    }

    let mut divisors = Vec::new();
    for t in 0..nr.min(nc) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].cmp_abs(&a[bi][bj]).is_lt())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, t, bj);
        if track {
            left.swap(t, bi);
            swap_cols(&mut right, t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, r) = a[i][t].div_rem(&a[t][t])?;
                let c = q.neg()?;
                row_op(&mut a, i, t, &c)?;
                if track {
                    row_op(&mut left, i, t, &c)?;
                }
                if !r.is_zero() {
                    a.swap(t, i);
                    if track {
                        left.swap(t, i);
                    }
                    dirty = true;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, r) = a[t][j].div_rem(&a[t][t])?;
                let c = q.neg()?;
                col_op(&mut a, j, t, &c)?;
                if track {
                    col_op(&mut right, j, t, &c)?;
                }
                if !r.is_zero() {
                    swap_cols(&mut a, t, j);
                    if track {
                        swap_cols(&mut right, t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let mut offender = None;
            'scan: for i in t + 1..nr {
                for j in t + 1..nc {
                    if !a[t][t].divides(&a[i][j])? {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    row_op(&mut a, t, i, &T::one())?;
                    if track {
                        row_op(&mut left, t, i, &T::one())?;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = x.neg()?;
            }
            if track {
                for x in left[t].iter_mut() {
                    *x = x.neg()?;
                }
            }
        }
        divisors.push(a[t][t].clone());
    }
    let tr = track.then_some((left, right));
    Ok((divisors, tr))
}

/// Rank over ℚ by fraction-free row elimination with content removal.
/// Independent of the Smith routines; used to cross-check their ranks.
pub fn rational_rank(m: &SparseIntMatrix) -> usize {
    with_fallback!(fraction_free_rank(m))
}

fn fraction_free_rank<T: Coeff>(m: &SparseIntMatrix) -> Checked<usize> {
    let t = m.transpose();
    // pivot rows keyed by leading column
    let mut pivots: std::collections::HashMap<usize, SparseVec<T>> = Default::default();
    for r in t.columns() {
        let mut row: SparseVec<T> = convert_vec(r.entries())?;
        while let Some((lead, lv)) = row.first().cloned() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, row);
                break;
            };
            let pv = p[0].1.clone();
            // row ← pv·row − lv·p, then strip content
            let scaled: SparseVec<T> = row
                .iter()
                .map(|(j, v)| Ok((*j, pv.mul(v)?)))
                .collect::<Checked<_>>()?;
            row = axpy(&scaled, &lv.neg()?, p)?;
            let mut g = T::zero();
            for (_, v) in &row {
                g = gcd(&g, v)?;
                if g.is_unit() {
                    break;
                }
            }
            if !g.is_zero() && !g.is_unit() {
                row = row
                    .into_iter()
                    .map(|(j, v)| Ok((j, v.div_rem(&g)?.0)))
                    .collect::<Checked<_>>()?;
            }
        }
    }
    Ok(pivots.len())
}

/// `true` if every divisor is 1.
pub(crate) fn all_units(d: &[BigInt]) -> bool {
    d.iter().all(|x| Signed::abs(x) == BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let k = b.len();
        let m = b.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).fold(<BigInt as Zero>::zero(), |s, t| s + &a[i][t] * &b[t][j]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_examples() {
        let m = SparseIntMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(smith_divisors(&m), big(&[2, 4]));
        let id = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(smith_divisors(&id), big(&[1, 1, 1]));
        let z = SparseIntMatrix::zeros(3, 2);
        assert!(smith_divisors(&z).is_empty());
        assert!(smith_divisors(&SparseIntMatrix::zeros(0, 0)).is_empty());
    }

    #[test]
    fn transforms_diagonalize() {
        let rows = [vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let m = SparseIntMatrix::from_dense(&rows);
        let s = smith_normal_form(&m, true);
        assert_eq!(s.divisors, big(&[2, 6, 12]));
        let t = s.transforms.unwrap();
        let prod = matmul(&matmul(&t.left, &m.to_dense()), &t.right);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { s.divisors[i].clone() } else { <BigInt as Zero>::zero() };
                assert_eq!(*x, want);
            }
        }
        assert_eq!(smith_divisors(&m), s.divisors);
    }

    #[test]
    fn torsion_of_projective_plane_boundary() {
        // ∂₂ of a minimal RP² cell structure: one 2-cell attached by a·a
        let m = SparseIntMatrix::from_dense(&[vec![2]]);
        assert_eq!(smith_divisors(&m), big(&[2]));
    }

    #[test]
    fn big_entries_fall_back() {
        let huge = i64::MAX / 2;
        let m = SparseIntMatrix::from_dense(&[vec![huge, 3], vec![5, huge]]);
        let d = smith_divisors(&m);
        let det = BigInt::from(huge) * BigInt::from(huge) - BigInt::from(15);
        assert_eq!(d.len(), 2);
        assert_eq!(&d[0] * &d[1], det);
        assert_eq!(rational_rank(&m), 2);
    }

    #[test]
    fn rational_rank_matches() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rational_rank(&m), 2);
        assert_eq!(smith_divisors(&m).len(), 2);
    }
}
