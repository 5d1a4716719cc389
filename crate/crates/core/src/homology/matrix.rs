use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};

/// A sparse integer vector: sorted `(index, coefficient)` pairs, no zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    entries: Vec<(usize, BigInt)>,
}

impl Chain {
    pub fn zero() -> Chain {
        Chain::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (usize, BigInt)>) -> Chain {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, v) in entries {
            *acc.entry(i).or_insert_with(BigInt::zero) += v;
        }
        Chain {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_i64(entries: impl IntoIterator<Item = (usize, i64)>) -> Chain {
        Chain::from_entries(entries.into_iter().map(|(i, v)| (i, BigInt::from(v))))
    }

    pub fn basis(i: usize) -> Chain {
        Chain {
            entries: vec![(i, BigInt::one())],
        }
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, BigInt)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> BigInt {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &BigInt) -> Chain {
        if c.is_zero() {
            return Chain::zero();
        }
        Chain {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Chain, c: &BigInt) -> Chain {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + y * c;
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Chain { entries: out }
    }

    pub fn add(&self, other: &Chain) -> Chain {
        self.add_scaled(other, &BigInt::one())
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add_scaled(other, &-BigInt::one())
    }

    /// Re-index through `map` (e.g. a subcomplex inclusion).
    pub fn reindex(&self, map: &[usize]) -> Chain {
        Chain::from_entries(self.entries.iter().map(|(i, v)| (map[*i], v.clone())))
    }

    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut d = vec![BigInt::zero(); len];
        for (i, v) in &self.entries {
            d[*i] = v.clone();
        }
        d
    }
}

/// Sparse integer matrix stored by columns; each column is a [`Chain`]
/// over the row indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Chain>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SparseIntMatrix {
        SparseIntMatrix {
            rows,
            cols,
            columns: vec![Chain::zero(); cols],
        }
    }

    /// Builds from triplets; repeated positions are summed and zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<SparseIntMatrix> {
        let mut per_col: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return invalid_arg(format!("entry ({r}, {c}) outside {rows}x{cols}"));
            }
            per_col[c].push((r, v));
        }
        Ok(SparseIntMatrix {
            rows,
            cols,
            columns: per_col.into_iter().map(Chain::from_entries).collect(),
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<Chain>) -> Result<SparseIntMatrix> {
        if let Some(c) = columns.iter().find(|c| c.max_index().is_some_and(|m| m >= rows)) {
            return invalid_arg(format!(
                "column entry at row {} outside {rows} rows",
                c.max_index().unwrap()
            ));
        }
        Ok(SparseIntMatrix {
            rows,
            cols: columns.len(),
            columns,
        })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> SparseIntMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(move |(j, &v)| (i, j, BigInt::from(v)))
        });
        SparseIntMatrix::from_triplets(nrows, ncols, triplets).expect("dense input is in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Chain::nnz).sum()
    }

    pub fn column(&self, j: usize) -> &Chain {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Chain] {
        &self.columns
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Chain::is_zero)
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.entries().iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut per_col: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (i, j, v) in self.triplets() {
            per_col[i].push((j, v.clone()));
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: per_col
                .into_iter()
                .map(|entries| Chain { entries })
                .collect(),
        }
    }

    pub fn apply(&self, x: &Chain) -> Chain {
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (j, c) in x.entries() {
            for (i, v) in self.columns[*j].entries() {
                *acc.entry(*i).or_insert_with(BigInt::zero) += v * c;
            }
        }
        Chain::from_entries(acc)
    }

    /// Columns of `self` followed by `extra` (same row count).
    pub fn with_extra_columns(&self, extra: &[Chain]) -> Result<SparseIntMatrix> {
        let mut cols = self.columns.clone();
        cols.extend(extra.iter().cloned());
        SparseIntMatrix::from_columns(self.rows, cols)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }

    /// Coordinate-triplet text: a `rows cols nnz` header, then one
    /// `row col value` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (i, j, v) in self.triplets() {
            writeln!(s, "{i} {j} {v}").expect("writing to a String");
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<SparseIntMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().unwrap_or_default();
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| ()))
            .collect::<std::result::Result<_, _>>()
            .or_else(|_| invalid_arg("bad triplet header"))?;
        let [rows, cols, nnz] = h[..] else {
            return invalid_arg("triplet header must be `rows cols nnz`");
        };
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = t[..] else {
                return invalid_arg(format!("bad triplet line `{line}`"));
            };
            let parse_err = || crate::error::Error::InvalidArgument(format!("bad triplet line `{line}`"));
            triplets.push((
                r.parse().map_err(|_| parse_err())?,
                c.parse().map_err(|_| parse_err())?,
                v.parse::<BigInt>().map_err(|_| parse_err())?,
            ));
        }
        if triplets.len() != nnz {
            return invalid_arg("triplet count does not match header");
        }
        SparseIntMatrix::from_triplets(rows, cols, triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_arithmetic() {
        let a = Chain::from_i64([(0, 1), (3, 2), (3, -2), (5, 1)]);
        assert_eq!(a.entries().len(), 2);
        let b = Chain::from_i64([(0, -1), (2, 4)]);
        let s = a.add(&b);
        assert_eq!(s, Chain::from_i64([(2, 4), (5, 1)]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.scale(&BigInt::from(3)).get(5), BigInt::from(3));
    }

    #[test]
    fn triplets_round_trip() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 0, -2], vec![0, 0, 7]]);
        let t = m.to_triplet_text();
        assert_eq!(SparseIntMatrix::from_triplet_text(&t).unwrap(), m);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn apply() {
        let m = SparseIntMatrix::from_dense(&[vec![1, 1], vec![0, 2]]);
        let y = m.apply(&Chain::from_i64([(0, 3), (1, -1)]));
        assert_eq!(y, Chain::from_i64([(0, 2), (1, -2)]));
    }
}
