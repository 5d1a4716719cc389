//! Characters of the summand-permuting action on homology, and the padded
//! multiplicity tables across a window of sizes.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{decompose_product, product_classes, Partition};
use crate::complex::{build_model, BuildOptions, CubeComplex};
use crate::error::{invalid_arg, Error, Result};
use crate::graph::{FamilyDescriptor, FamilyKind, RealizedFamily};
use crate::homology::{homology, permutation_action_map, GraphAutomorphism, HomologyPresentation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassValue {
    /// One cycle type per coordinate.
    pub cycle_type: Vec<Partition>,
    #[serde(with = "crate::serde_num::big")]
    pub class_size: BigInt,
    #[serde(with = "crate::serde_num::big")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub padded: Vec<Partition>,
    pub unpadded: Vec<Partition>,
    #[serde(with = "crate::serde_num::big")]
    pub multiplicity: BigInt,
    #[serde(with = "crate::serde_num::big")]
    pub dimension: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub k: Vec<usize>,
    pub q: usize,
    pub n: usize,
    pub betti: usize,
    pub class_data: Vec<ClassValue>,
    /// Nonzero multiplicities only.
    pub multiplicities: Vec<Multiplicity>,
}

/// Trace of the permutation of summands (one permutation per coordinate)
/// on the free part of `H_q`.
pub fn homology_character(
    realized: &RealizedFamily,
    c: &CubeComplex,
    h: &HomologyPresentation,
    sigma: &[Vec<usize>],
) -> Result<BigInt> {
    if sigma.len() != realized.copies.len() {
        return invalid_arg("need one permutation per coordinate");
    }
    let mut auto = GraphAutomorphism::identity(&realized.graph);
    for (i, s) in sigma.iter().enumerate() {
        auto = GraphAutomorphism::from_summand_permutation(realized, i, s)?.compose(&auto);
    }
    permutation_action_map(c, &auto)?.trace(h)
}

/// Characters on every product class at object `sizes` of a wedge family,
/// decomposed into irreducibles.
pub fn character_report(
    f: &FamilyDescriptor,
    n: usize,
    q: usize,
    sizes: &[usize],
    opts: &BuildOptions,
) -> Result<CharacterReport> {
    if f.kind != FamilyKind::WedgeFi {
        return invalid_arg("characters are defined for wedge families");
    }
    if sizes.len() > 2 {
        return invalid_arg("characters are implemented for at most two coordinates");
    }
    let realized = f.realize(sizes)?;
    let c = build_model(&realized.graph, n, &BTreeSet::new(), opts)?;
    let h = homology(&c, q)?;
    let classes = product_classes(sizes);
    let values = classes
        .par_iter()
        .map(|cls| {
            let sigma: Vec<Vec<usize>> = cls.iter().map(Partition::class_representative).collect();
            homology_character(&realized, &c, &h, &sigma)
        })
        .collect::<Result<Vec<_>>>()?;
    let identity = classes
        .iter()
        .position(|cls| cls.iter().all(|p| p.parts().iter().all(|&x| x == 1)))
        .expect("identity class");
    if values[identity] != BigInt::from(h.betti()) {
        return Err(Error::CorruptedCharacter(format!(
            "trace of the identity is {}, betti is {}",
            values[identity],
            h.betti()
        )));
    }
    let decomposition = decompose_product(sizes, &values)?;
    let mut multiplicities = Vec::new();
    let mut total = BigInt::zero();
    for (lambda, m) in decomposition {
        if m.is_zero() {
            continue;
        }
        let dimension: BigInt = lambda.iter().map(Partition::hook_dimension).product();
        total += &m * &dimension;
        multiplicities.push(Multiplicity {
            unpadded: lambda.iter().map(Partition::unpad).collect(),
            padded: lambda,
            multiplicity: m,
            dimension,
        });
    }
    if total != BigInt::from(h.betti()) {
        return Err(Error::CorruptedCharacter(format!(
            "Σ c·dim = {total} but betti is {}",
            h.betti()
        )));
    }
    let class_data = classes
        .into_iter()
        .zip(values)
        .map(|(cls, value)| ClassValue {
            class_size: cls.iter().map(Partition::class_size).product(),
            cycle_type: cls,
            value,
        })
        .collect();
    Ok(CharacterReport {
        k: sizes.to_vec(),
        q,
        n,
        betti: h.betti(),
        class_data,
        multiplicities,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub unpadded: Vec<Partition>,
    /// One multiplicity per report, in window order.
    #[serde(with = "crate::serde_num::big_vec")]
    pub values: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub window: Vec<Vec<usize>>,
    pub rows: Vec<StabilityRow>,
    /// Rows whose padding is undefined somewhere in the window; they are
    /// left out of the verdict.
    pub excluded: Vec<StabilityRow>,
}

/// Re-indexes the multiplicities by unpadded partitions and checks that
/// every row is constant across the window.
pub fn stability_verdict(reports: &[CharacterReport]) -> Result<StabilityVerdict> {
    if reports.len() < 2 {
        return invalid_arg("a stability window needs at least two sizes");
    }
    for r in reports {
        let total: BigInt = r.multiplicities.iter().map(|m| &m.multiplicity * &m.dimension).sum();
        if total != BigInt::from(r.betti) {
            return Err(Error::CorruptedCharacter(format!(
                "at k = {:?}: Σ c·dim = {total}, betti = {}",
                r.k, r.betti
            )));
        }
    }
    let mut table: BTreeMap<Vec<Partition>, Vec<BigInt>> = BTreeMap::new();
    for (i, r) in reports.iter().enumerate() {
        for m in &r.multiplicities {
            table
                .entry(m.unpadded.clone())
                .or_insert_with(|| vec![BigInt::zero(); reports.len()])[i] = m.multiplicity.clone();
        }
    }
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for (unpadded, values) in table {
        let valid = reports
            .iter()
            .all(|r| unpadded.iter().zip(&r.k).all(|(l, &k)| l.pad(k).is_some()));
        let row = StabilityRow { unpadded, values };
        if valid {
            rows.push(row);
        } else {
            let names: Vec<String> = row.unpadded.iter().map(ToString::to_string).collect();
            log::warn!("padding of {} is undefined somewhere in the window; excluded", names.join("⊗"));
            excluded.push(row);
        }
    }
    let stable = rows.iter().all(|r| r.values.windows(2).all(|w| w[0] == w[1]));
    Ok(StabilityVerdict {
        stable,
        window: reports.iter().map(|r| r.k.clone()).collect(),
        rows,
        excluded,
    })
}
