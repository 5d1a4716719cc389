//! Integer coefficient rings for the elimination routines. Every routine is
//! written once against [`Coeff`] and run first with checked `i64`
//! arithmetic; on overflow it is rerun with `BigInt`.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = std::result::Result<T, Overflow>;

pub(crate) trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(b: &BigInt) -> Checked<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Checked<Self>;
    fn sub(&self, o: &Self) -> Checked<Self>;
    fn mul(&self, o: &Self) -> Checked<Self>;
    fn neg(&self) -> Checked<Self>;
    /// Truncated division with remainder.
    fn div_rem(&self, o: &Self) -> Checked<(Self, Self)>;
    fn cmp_abs(&self, o: &Self) -> Ordering;

    fn abs(&self) -> Checked<Self> {
        if self.is_negative() {
            self.neg()
        } else {
            Ok(self.clone())
        }
    }

    fn divides(&self, o: &Self) -> Checked<bool> {
        Ok(o.div_rem(self)?.1.is_zero())
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(b: &BigInt) -> Checked<Self> {
        b.to_i64().ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        self.checked_add(*o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_rem(&self, o: &Self) -> Checked<(Self, Self)> {
        Ok((
            self.checked_div(*o).ok_or(Overflow)?,
            self.checked_rem(*o).ok_or(Overflow)?,
        ))
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.unsigned_abs().cmp(&o.unsigned_abs())
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(b: &BigInt) -> Checked<Self> {
        Ok(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        Signed::abs(self).is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Checked<Self> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        Ok(self * o)
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn div_rem(&self, o: &Self) -> Checked<(Self, Self)> {
        Ok(Integer::div_rem(self, o))
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.magnitude().cmp(o.magnitude())
    }
}

/// `(g, s, t)` with `g = s·a + t·b`, `g = gcd(a, b) > 0` (for `(a, b) ≠ 0`).
pub(crate) fn ext_gcd<T: Coeff>(a: &T, b: &T) -> Checked<(T, T, T)> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = s0.sub(&q.mul(&s1)?)?;
        let t = t0.sub(&q.mul(&t1)?)?;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if r0.is_negative() {
        Ok((r0.neg()?, s0.neg()?, t0.neg()?))
    } else {
        Ok((r0, s0, t0))
    }
}

pub(crate) fn gcd<T: Coeff>(a: &T, b: &T) -> Checked<T> {
    let (mut x, mut y) = (a.abs()?, b.abs()?);
    while !y.is_zero() {
        let r = x.div_rem(&y)?.1;
        x = y;
        y = r;
    }
    Ok(x)
}

/// A sparse vector over `T`: sorted indices, no zeros.
pub(crate) type SparseVec<T> = Vec<(usize, T)>;

/// `a + c·b`.
pub(crate) fn axpy<T: Coeff>(a: &[(usize, T)], c: &T, b: &[(usize, T)]) -> Checked<SparseVec<T>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = c.mul(&b[j].1)?;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&c.mul(&b[j].1)?)?;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// `x·a + y·b`.
pub(crate) fn lincomb<T: Coeff>(
    x: &T,
    a: &[(usize, T)],
    y: &T,
    b: &[(usize, T)],
) -> Checked<SparseVec<T>> {
    let scaled: SparseVec<T> = a
        .iter()
        .map(|(i, v)| Ok((*i, x.mul(v)?)))
        .collect::<Checked<Vec<_>>>()?
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    axpy(&scaled, y, b)
}

pub(crate) fn sparse_get<T: Coeff>(v: &[(usize, T)], i: usize) -> T {
    match v.binary_search_by_key(&i, |(j, _)| *j) {
        Ok(p) => v[p].1.clone(),
        Err(_) => T::zero(),
    }
}

pub(crate) fn convert_vec<T: Coeff>(v: &[(usize, BigInt)]) -> Checked<SparseVec<T>> {
    v.iter().map(|(i, x)| Ok((*i, T::from_big(x)?))).collect()
}

pub(crate) fn to_big_vec<T: Coeff>(v: &[(usize, T)]) -> Vec<(usize, BigInt)> {
    v.iter().map(|(i, x)| (*i, x.to_big())).collect()
}

/// Runs `f` over `i64`, falling back to `BigInt` if any step overflows.
macro_rules! with_fallback {
    ($f:ident ( $($arg:expr),* $(,)? )) => {
        match $f::<i64>($($arg),*) {
            Ok(v) => v,
            Err($crate::homology::coeff::Overflow) => {
                log::debug!(concat!(stringify!($f), ": i64 overflow, retrying with BigInt"));
                $f::<num_bigint::BigInt>($($arg),*)
                    .expect("BigInt arithmetic cannot overflow")
            }
        }
    };
}
pub(crate) use with_fallback;
