//! Symmetric group characters: partitions, conjugacy classes,
//! Murnaghan–Nakayama values and multiplicity extraction.

mod stability;

pub use stability::{
    character_report, homology_character, stability_verdict, ClassValue, CharacterReport,
    Multiplicity, StabilityRow, StabilityVerdict,
};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Partition> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid_arg(format!("{parts:?} is not a partition"));
        }
        Ok(Partition { parts })
    }

    /// Sorts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `λ[k] = (k − |λ|, λ₁, λ₂, …)`, defined when `k − |λ| ≥ λ₁`.
    pub fn pad(&self, k: usize) -> Option<Partition> {
        let head = k.checked_sub(self.size())?;
        if head < self.first() {
            return None;
        }
        let mut parts = Vec::with_capacity(self.len() + 1);
        if head > 0 {
            parts.push(head);
        }
        parts.extend(&self.parts);
        Some(Partition { parts })
    }

    /// Drops the first part; inverse of [`Partition::pad`].
    pub fn unpad(&self) -> Partition {
        Partition {
            parts: self.parts.iter().skip(1).copied().collect(),
        }
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.first())
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count())
            .collect();
        Partition { parts }
    }

    /// Dimension of the irreducible representation, by the hook length
    /// formula.
    pub fn hook_dimension(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks *= row - j + conj.parts[j] - i - 1;
            }
        }
        factorial(self.size()) / hooks
    }

    /// `z_μ = Π i^{m_i} m_i!`, the centralizer order of the class `μ`.
    pub fn centralizer_order(&self) -> BigInt {
        let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &self.parts {
            *mult.entry(p).or_default() += 1;
        }
        mult.iter().fold(BigInt::one(), |acc, (&i, &m)| {
            acc * BigInt::from(i).pow(m as u32) * factorial(m)
        })
    }

    pub fn class_size(&self) -> BigInt {
        factorial(self.size()) / self.centralizer_order()
    }

    /// The permutation of `0..k` with contiguous cycles `(0 1 … μ₁−1)(μ₁ …)…`
    /// in one-line notation.
    pub fn class_representative(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.size());
        let mut start = 0;
        for &p in &self.parts {
            for i in 0..p {
                perm.push(start + (i + 1) % p);
            }
            start += p;
        }
        perm
    }

    pub fn cycle_type(perm: &[usize]) -> Partition {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for s in 0..perm.len() {
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            if len > 0 {
                parts.push(len);
            }
        }
        Partition::from_unsorted(parts)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// All partitions of `k` in reverse lexicographic order, starting with `(k)`.
pub fn partitions(k: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// `χ^λ(μ)` by the Murnaghan–Nakayama rule, removing rim hooks of the parts
/// of `μ` in order.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.size() != mu.size() {
        return invalid_arg(format!(
            "{lambda} and {mu} are partitions of different sizes"
        ));
    }
    let mut memo = HashMap::new();
    Ok(BigInt::from(mn_rec(&beta_set(lambda), mu.parts(), &mut memo)))
}

/// First-column hook lengths; removing an `r`-rim hook replaces some `b` by
/// `b − r`.
fn beta_set(lambda: &Partition) -> Vec<usize> {
    let l = lambda.len();
    lambda
        .parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + l - 1 - i)
        .collect()
}

fn mn_rec(beta: &[usize], mu: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i64>) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (beta.to_vec(), mu.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b - r && x < b).count();
        let mut next = beta.to_vec();
        next[i] = b - r;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn_rec(&next, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Full character table of `Σ_k`; rows and columns indexed by
/// [`partitions`]`(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub k: usize,
    pub partitions: Vec<Partition>,
    #[serde(with = "crate::serde_num::big_vec")]
    pub class_sizes: Vec<BigInt>,
    /// `values[λ][μ]`
    #[serde(with = "crate::serde_num::big_matrix")]
    pub values: Vec<Vec<BigInt>>,
}

impl CharacterTable {
    pub fn new(k: usize) -> CharacterTable {
        let parts = partitions(k);
        let values = parts
            .iter()
            .map(|l| {
                parts
                    .iter()
                    .map(|m| mn_character(l, m).expect("same size"))
                    .collect()
            })
            .collect();
        CharacterTable {
            k,
            class_sizes: parts.iter().map(Partition::class_size).collect(),
            partitions: parts,
            values,
        }
    }

    pub fn order(&self) -> BigInt {
        factorial(self.k)
    }

    /// `⟨χ_λ, χ_ν⟩ · k!` for every pair; `k!` times the identity if the
    /// table is right.
    pub fn row_products(&self) -> Vec<Vec<BigInt>> {
        let n = self.partitions.len();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n).fold(BigInt::zero(), |s, c| {
                            s + &self.class_sizes[c] * &self.values[a][c] * &self.values[b][c]
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// `Σ_λ χ_λ(μ) χ_λ(ν)`; `z_μ` on the diagonal, zero elsewhere.
    pub fn column_products(&self) -> Vec<Vec<BigInt>> {
        let n = self.partitions.len();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).fold(BigInt::zero(), |s, l| s + &self.values[l][a] * &self.values[l][b]))
                    .collect()
            })
            .collect()
    }

    pub fn orthogonality_holds(&self) -> bool {
        let g = self.order();
        let rows = self.row_products();
        let cols = self.column_products();
        let n = self.partitions.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let row_want = if a == b { g.clone() } else { BigInt::zero() };
                let col_want = if a == b {
                    self.partitions[a].centralizer_order()
                } else {
                    BigInt::zero()
                };
                rows[a][b] == row_want && cols[a][b] == col_want
            })
        })
    }

    /// Multiplicities of the irreducibles in the class function with
    /// `values[μ]` on the classes. Fails if any multiplicity is not a
    /// nonnegative integer.
    pub fn decompose(&self, values: &[BigInt]) -> Result<Vec<(Partition, BigInt)>> {
        if values.len() != self.partitions.len() {
            return invalid_arg(format!(
                "expected {} class values, got {}",
                self.partitions.len(),
                values.len()
            ));
        }
        let g = self.order();
        self.partitions
            .iter()
            .zip(&self.values)
            .map(|(lambda, chi)| {
                let s = (0..values.len()).fold(BigInt::zero(), |s, c| {
                    s + &self.class_sizes[c] * &values[c] * &chi[c]
                });
                let (m, r) = s.div_rem(&g);
                if !r.is_zero() || m.is_negative() {
                    return Err(Error::CorruptedCharacter(format!(
                        "multiplicity of {lambda} is {s}/{g}"
                    )));
                }
                Ok((lambda.clone(), m))
            })
            .collect()
    }
}

/// Multiplicities for `Σ_{k₁} × Σ_{k₂}` (or a single factor). `values` is
/// indexed by tuples of classes in the order of [`product_classes`].
pub fn decompose_product(ks: &[usize], values: &[BigInt]) -> Result<Vec<(Vec<Partition>, BigInt)>> {
    if ks.is_empty() || ks.len() > 2 {
        return invalid_arg("products are supported for one or two factors");
    }
    let tables: Vec<CharacterTable> = ks.iter().map(|&k| CharacterTable::new(k)).collect();
    let classes = product_classes(ks);
    if values.len() != classes.len() {
        return invalid_arg(format!(
            "expected {} class values, got {}",
            classes.len(),
            values.len()
        ));
    }
    let g: BigInt = tables.iter().map(CharacterTable::order).product();
    let irreps = product_classes(ks);
    let index = |t: &CharacterTable, p: &Partition| t.partitions.iter().position(|x| x == p).expect("partition of k");
    irreps
        .into_iter()
        .map(|lam| {
            let mut s = BigInt::zero();
            for (ci, cls) in classes.iter().enumerate() {
                let mut term = values[ci].clone();
                for (f, t) in tables.iter().enumerate() {
                    let (li, mi) = (index(t, &lam[f]), index(t, &cls[f]));
                    term *= &t.class_sizes[mi] * &t.values[li][mi];
                }
                s += term;
            }
            let (m, r) = s.div_rem(&g);
            if !r.is_zero() || m.is_negative() {
                let names: Vec<String> = lam.iter().map(ToString::to_string).collect();
                return Err(Error::CorruptedCharacter(format!(
                    "multiplicity of {} is {s}/{g}",
                    names.join("⊗")
                )));
            }
            Ok((lam, m))
        })
        .collect()
}

/// Tuples of partitions of the `ks`, in lexicographic order of the
/// per-factor [`partitions`] lists.
pub fn product_classes(ks: &[usize]) -> Vec<Vec<Partition>> {
    let mut out: Vec<Vec<Partition>> = vec![Vec::new()];
    for &k in ks {
        let ps = partitions(k);
        out = out
            .into_iter()
            .flat_map(|pre| {
                ps.iter().map(move |p| {
                    let mut t = pre.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}
