use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{KernelError, Rat, RatVec};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

/// Outcome of [`RatMat::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(RatVec),
    Singular,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self, KernelError> {
        let cols = rows.first().map_or(0, RatVec::dim);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.dim() != cols {
                return Err(KernelError::DimensionMismatch { expected: cols, found: row.dim() });
            }
            entries.extend(row.into_coords());
        }
        Ok(RatMat { rows: n, cols, entries })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, KernelError> {
        Self::from_rows(rows.iter().map(|r| RatVec::from_ints(r)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RatVec]) -> Result<Self, KernelError> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rat) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> RatVec {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec().into()
    }

    pub fn row_vectors(&self) -> Vec<RatVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rat::is_integer)
    }

    pub fn mul_vec(&self, x: &RatVec) -> Result<RatVec, KernelError> {
        if x.dim() != self.cols {
            return Err(KernelError::DimensionMismatch { expected: self.cols, found: x.dim() });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x[c].is_zero() {
                        acc += a * &x[c];
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &RatMat) -> Result<RatMat, KernelError> {
        if self.cols != other.rows {
            return Err(KernelError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = RatMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Exact determinant. Integral inputs use Bareiss fraction-free
    /// elimination; anything else falls back to rational Gaussian elimination.
    pub fn det(&self) -> Result<Rat, KernelError> {
        if !self.is_square() {
            return Err(KernelError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.is_integral() {
            Ok(Rat::from_bigint(self.bareiss_det()))
        } else {
            Ok(self.gaussian_det())
        }
    }

    fn bareiss_det(&self) -> BigInt {
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> =
            (0..n).map(|r| (0..n).map(|c| self.get(r, c).numer()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn gaussian_det(&self) -> Rat {
        let mut a = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det *= &pivot;
            for r in k + 1..n {
                let f = a.get(r, k) / &pivot;
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.get(r, c) - &(&f * a.get(k, c));
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let f = self.get(r, col).clone();
                for c in col..self.cols {
                    let v = self.get(r, c) - &(&f * self.get(row, c));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// A basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<RatVec> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rat::zero(); self.cols];
                x[f] = Rat::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m.get(r, f);
                }
                RatVec::new(x)
            })
            .collect()
    }

    /// Solves `self * x = b` exactly.
    pub fn solve(&self, b: &RatVec) -> Result<LinearSolution, KernelError> {
        if !self.is_square() {
            return Err(KernelError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if b.dim() != self.rows {
            return Err(KernelError::DimensionMismatch { expected: self.rows, found: b.dim() });
        }
        let n = self.rows;
        let mut aug = RatMat::zeros(n, n + 1);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n, b[r].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Ok(LinearSolution::Singular);
        }
        Ok(LinearSolution::Unique((0..n).map(|r| aug.get(r, n).clone()).collect()))
    }

    pub fn inverse(&self) -> Result<Option<RatMat>, KernelError> {
        if !self.is_square() {
            return Err(KernelError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Rat::one());
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = RatMat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(Some(inv))
    }
}

/// Free-function form of [`RatMat::det`].
pub fn det(m: &RatMat) -> Result<Rat, KernelError> {
    m.det()
}

/// Free-function form of [`RatMat::solve`].
pub fn solve_linear(a: &RatMat, b: &RatVec) -> Result<LinearSolution, KernelError> {
    a.solve(b)
}

impl fmt::Display for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RatMat {
        RatMat::from_int_rows(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(RatMat::identity(2).det().unwrap(), Rat::one());
        assert_eq!(m(&[&[1, 0], &[1, 1]]).det().unwrap(), Rat::one());
        assert_eq!(m(&[&[2, 0], &[0, 2]]).det().unwrap(), Rat::from_int(4));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), Rat::from_int(-1));
        assert!(matches!(
            m(&[&[1, 2, 3], &[4, 5, 6]]).det(),
            Err(KernelError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn rational_det_uses_gaussian_path() {
        let mut a = RatMat::identity(2);
        a.set(0, 0, Rat::new(1, 2));
        a.set(0, 1, Rat::new(1, 3));
        a.set(1, 0, Rat::from_int(3));
        assert_eq!(a.det().unwrap(), Rat::new(1, 2) - Rat::one());
    }

    #[test]
    fn solve_examples() {
        let b = RatVec::from_ints(&[3, 5]);
        assert_eq!(RatMat::identity(2).solve(&b).unwrap(), LinearSolution::Unique(b.clone()));
        assert_eq!(
            m(&[&[1, 1], &[1, -1]]).solve(&RatVec::from_ints(&[1, 1])).unwrap(),
            LinearSolution::Unique(RatVec::from_ints(&[1, 0]))
        );
        assert_eq!(
            m(&[&[1, 1], &[2, 2]]).solve(&RatVec::from_ints(&[1, 1])).unwrap(),
            LinearSolution::Singular
        );
        assert!(RatMat::identity(2).solve(&RatVec::from_ints(&[1])).is_err());
    }

    #[test]
    fn nullspace_and_rank() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).unwrap().is_zero());
    }

    fn small_int_matrix(n: usize) -> impl Strategy<Value = RatMat> {
        proptest::collection::vec(-4i64..=4, n * n).prop_map(move |e| {
            let rows: Vec<RatVec> = e.chunks(n).map(RatVec::from_ints).collect();
            RatMat::from_rows(rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in small_int_matrix(3), b in small_int_matrix(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
            prop_assert_eq!(a.det().unwrap(), a.gaussian_det());
        }

        #[test]
        fn solve_reproduces_rhs(a in small_int_matrix(3), b in proptest::collection::vec(-9i64..=9, 3)) {
            let b = RatVec::from_ints(&b);
            match a.solve(&b).unwrap() {
                LinearSolution::Unique(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), b),
                LinearSolution::Singular => prop_assert!(a.det().unwrap().is_zero()),
            }
        }
    }
}
