use std::fmt;
use std::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{KernelError, Rat};

/// A point or direction with exact rational coordinates.
///
/// Ordering is lexicographic on coordinates, which is the canonical order used
/// for every deterministic listing in the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVec(Vec<Rat>);

impl RatVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVec(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVec(vec![Rat::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVec(coords.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    fn check_dim(&self, other: &RatVec) -> Result<(), KernelError> {
        if self.dim() != other.dim() {
            return Err(KernelError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn checked_dot(&self, other: &RatVec) -> Result<Rat, KernelError> {
        self.check_dim(other)?;
        Ok(self.dot(other))
    }

    pub fn checked_add(&self, other: &RatVec) -> Result<RatVec, KernelError> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &RatVec) -> Result<RatVec, KernelError> {
        self.check_dim(other)?;
        Ok(self - other)
    }

    /// Inner product. Panics on a dimension mismatch; see [`RatVec::checked_dot`].
    pub fn dot(&self, other: &RatVec) -> Rat {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot product");
        let mut acc = Rat::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn scale(&self, factor: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn neg(&self) -> RatVec {
        RatVec(self.0.iter().map(|c| -c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    /// Least positive integer `k` with `k * self` integral.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()))
    }

    /// Integer coordinates, if every coordinate is an integer that fits in `i64`.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(Rat::to_i64).collect()
    }
}

/// Free-function form of [`RatVec::denominator_lcm`].
pub fn denominator_lcm(v: &RatVec) -> BigInt {
    v.denominator_lcm()
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add<&RatVec> for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in vector sum");
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&RatVec> for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in vector difference");
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl FromIterator<Rat> for RatVec {
    fn from_iter<I: IntoIterator<Item = Rat>>(iter: I) -> Self {
        RatVec(iter.into_iter().collect())
    }
}

impl From<Vec<Rat>> for RatVec {
    fn from(v: Vec<Rat>) -> Self {
        RatVec(v)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
