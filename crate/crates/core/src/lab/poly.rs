//! Exact polynomial fits of Betti numbers along a family.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{build_model, BuildOptions};
use crate::error::{invalid_arg, Result};
use crate::graph::FamilyDescriptor;
use crate::homology::betti_numbers;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFit {
    pub n: usize,
    pub q: usize,
    /// `(k, b_q)` in window order.
    pub points: Vec<(usize, usize)>,
    pub fit_points: usize,
    /// Coefficients of `1, k, k², …`, trailing zeros removed.
    #[serde(with = "crate::serde_num::ratio_vec")]
    pub coefficients: Vec<BigRational>,
    pub fits: bool,
}

impl PolyFit {
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, k: usize) -> BigRational {
        eval(&self.coefficients, &BigRational::from_integer(BigInt::from(k)))
    }
}

fn eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Interpolates the first `degree + 1` points and checks the rest.
pub fn fit_points(points: &[(BigInt, BigInt)], degree: usize) -> Result<(Vec<BigRational>, bool)> {
    if points.len() < degree + 1 {
        return invalid_arg("not enough points to interpolate");
    }
    let xs: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.0.clone())).collect();
    let ys: Vec<BigRational> = points.iter().map(|p| BigRational::from_integer(p.1.clone())).collect();
    let m = degree + 1;
    if (0..m).any(|i| (0..i).any(|j| xs[i] == xs[j])) {
        return invalid_arg("interpolation nodes must be distinct");
    }
    // Newton divided differences, then expand to the monomial basis.
    let mut dd: Vec<BigRational> = ys[..m].to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut coeffs = vec![BigRational::zero(); m];
    let mut basis = vec![BigRational::one()];
    for (i, c) in dd.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            coeffs[j] += c * b;
        }
        if i + 1 < m {
            // basis *= (x - xs[i])
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (j, b) in basis.iter().enumerate() {
                next[j + 1] += b;
                next[j] -= b * &xs[i];
            }
            basis = next;
        }
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    let fits = (m..points.len()).all(|i| eval(&coeffs, &xs[i]) == ys[i]);
    Ok((coeffs, fits))
}

/// Betti numbers `b_q(Conf_n(G_k))` over `window`, fitted by a polynomial
/// of degree at most `degree` and checked on `holdout` further points.
pub fn dimension_polynomial_check(
    f: &FamilyDescriptor,
    n: usize,
    q: usize,
    window: &[usize],
    degree: usize,
    holdout: usize,
    opts: &BuildOptions,
) -> Result<PolyFit> {
    if f.arity() != 1 {
        return invalid_arg("polynomial fits need a one-coordinate family");
    }
    if window.len() < degree + 1 + holdout {
        return invalid_arg(format!(
            "window of {} sizes is too short for degree {degree} with {holdout} holdout points",
            window.len()
        ));
    }
    let window = &window[..degree + 1 + holdout];
    let points = window
        .par_iter()
        .map(|&k| {
            let r = f.realize(&[k])?;
            let (g, _) = r.graph.normalize_loops();
            let c = build_model(&g, n, &BTreeSet::new(), opts)?;
            Ok((k, betti_numbers(&c).get(q).copied().unwrap_or(0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let big: Vec<(BigInt, BigInt)> = points.iter().map(|&(k, b)| (BigInt::from(k), BigInt::from(b))).collect();
    let (coefficients, fits) = fit_points(&big, degree)?;
    Ok(PolyFit {
        n,
        q,
        points,
        fit_points: degree + 1,
        coefficients,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        v.iter().map(|&(a, b)| (BigInt::from(a), BigInt::from(b))).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn constants_and_quadratics() {
        let (c, ok) = fit_points(&pts(&[(1, 4), (2, 4), (3, 4)]), 0).unwrap();
        assert!(ok);
        assert_eq!(c, vec![r(4, 1)]);
        let (c, ok) = fit_points(&pts(&[(0, 0), (1, 0), (2, 1), (3, 3), (4, 6)]), 2).unwrap();
        assert!(ok);
        assert_eq!(c, vec![r(0, 1), r(-1, 2), r(1, 2)]);
        let (_, ok) = fit_points(&pts(&[(0, 0), (1, 1), (2, 4), (3, 10)]), 2).unwrap();
        assert!(!ok);
        assert!(fit_points(&pts(&[(0, 0)]), 2).is_err());
    }

    #[test]
    fn zero_polynomial_for_trees() {
        let f = FamilyDescriptor::star_family();
        let fit = dimension_polynomial_check(&f, 1, 1, &[3, 4, 5], 0, 2, &BuildOptions::default()).unwrap();
        assert!(fit.fits);
        assert!(fit.coefficients.is_empty());
    }
}
