use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use super::{exact_sign, Field, QuadExt};
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Mat<T>> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Mat<T>> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Mat::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Mat<T> {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat<T> {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Mat<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn diag(entries: &[T]) -> Mat<T> {
        let n = entries.len();
        Mat::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &T) -> Mat<T> {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        Ok((0..self.rows).fold(T::zero(), |acc, i| acc + self[(i, i)].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn checked_mul(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        }))
    }

    pub fn checked_add(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        self.same_shape(rhs)?;
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone()))
    }

    pub fn checked_sub(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        self.same_shape(rhs)?;
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - rhs[(i, j)].clone()))
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * v[k].clone())
            })
            .collect())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat<T> {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)].clone())
    }

    /// Place `blocks` along the diagonal.
    pub fn block_diag(blocks: &[Mat<T>]) -> Mat<T> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn from_blocks(a: &Mat<T>, b: &Mat<T>, c: &Mat<T>, d: &Mat<T>) -> Result<Mat<T>> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("block shapes".into()));
        }
        Ok(Mat::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a[(i, j)].clone(),
                (true, false) => b[(i, j - a.cols)].clone(),
                (false, true) => c[(i - a.rows, j)].clone(),
                (false, false) => d[(i - a.rows, j - a.cols)].clone(),
            }
        }))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut prev = T::one();
        let mut negate = false;
        for k in 0..n {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(T::zero());
                };
                m.swap_rows(k, p);
                negate = !negate;
            }
            let prev_inv = prev.try_inv().expect("Bareiss pivots are nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = v * prev_inv.clone();
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        Ok(if negate { -det } else { det })
    }

    /// Leading principal minors `det M[..k, ..k]` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Result<Vec<T>> {
        self.require_square()?;
        (1..=self.rows).map(|k| self.submatrix(0..k, 0..k).determinant()).collect()
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Mat<T>> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Mat<T> = Mat::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let piv = a[(k, k)].try_inv().expect("nonzero pivot");
            for j in 0..n {
                a[(k, j)] = a[(k, j)].clone() * piv.clone();
                inv[(k, j)] = inv[(k, j)].clone() * piv.clone();
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                    inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(k, j)].clone();
                }
            }
        }
        Ok(inv)
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let (_, pivots) = self.rref();
        pivots.len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].try_inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m[(row, j)] = m[(row, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != row && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for j in 0..m.cols {
                        m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(row, j)].clone();
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Unique solution `x` of `self * x = rhs` for a matrix of full column rank.
    ///
    /// Returns `Ok(None)` when the system is inconsistent and an error when the
    /// columns are dependent.
    pub fn solve_unique(&self, rhs: &[T]) -> Result<Option<Vec<T>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        if pivots.len() < self.cols {
            return Err(Error::SingularMatrix);
        }
        Ok(Some((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)))
        }
    }

    fn same_shape(&self, rhs: &Mat<T>) -> Result<()> {
        if self.rows == rhs.rows && self.cols == rhs.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )))
        }
    }
}

/// Exact positive-definiteness via the signs of the leading principal minors.
pub fn is_positive_definite(m: &Mat<QuadExt>) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("not square".into()));
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(m.leading_minors()?.iter().all(|d| exact_sign(d) > 0))
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `checked_*` methods at API boundaries.
impl<T: Field> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.checked_mul(rhs).expect("matrix product shapes")
    }
}

impl<T: Field> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        self.checked_add(rhs).expect("matrix sum shapes")
    }
}

impl<T: Field> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        self.checked_sub(rhs).expect("matrix difference shapes")
    }
}

impl<T: Field> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{Rat, Surd};

    fn r(n: i64) -> Rat {
        Rat::integer(n)
    }

    fn rm(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()).unwrap()
    }

    fn qm(rows: &[&[i64]]) -> Mat<QuadExt> {
        crate::exactnum::rat_to_quad(&rm(rows))
    }

    #[test]
    fn identity_inverse() {
        let i = Mat::<Rat>::identity(2);
        assert_eq!(i.inverse().unwrap(), i);
    }

    #[test]
    fn inverse_over_quadratic_field() {
        let a = Surd::new(r(2)).unwrap();
        let m = Mat::from_rows(vec![
            vec![QuadExt::new(r(1), r(1), &a), QuadExt::int(0)],
            vec![QuadExt::int(0), QuadExt::int(1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv[(0, 0)], QuadExt::new(r(-1), r(1), &a));
        assert_eq!(inv[(1, 1)], QuadExt::int(1));
        assert_eq!(&m * &inv, Mat::identity(2));
        assert_eq!(&inv * &m, Mat::identity(2));
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(rm(&[&[1, 1], &[1, 1]]).inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = rm(&[&[0, 2, 1], &[3, -1, 4], &[5, 2, 0]]);
        // cofactor expansion along the first row, whose leading entry is zero
        let expected = -2 * (-4 * 5) + (3 * 2 + 5);
        assert_eq!(m.determinant().unwrap(), r(expected));
    }

    #[test]
    fn positive_definite_examples() {
        assert!(is_positive_definite(&Mat::identity(3)).unwrap());
        assert!(is_positive_definite(&qm(&[&[1, 0], &[0, 4]])).unwrap());
        assert!(!is_positive_definite(&qm(&[&[1, 2], &[2, 1]])).unwrap());
        assert_eq!(is_positive_definite(&qm(&[&[1, 2], &[0, 1]])), Err(Error::NotSymmetric));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = rm(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(a.solve_unique(&[r(1), r(2), r(3)]).unwrap(), Some(vec![r(1), r(2)]));
        assert_eq!(a.solve_unique(&[r(1), r(2), r(4)]).unwrap(), None);
        let dep = rm(&[&[1, 2], &[2, 4]]);
        assert!(dep.solve_unique(&[r(1), r(2)]).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(rm(&[&[1, 2]]).checked_mul(&rm(&[&[1, 2]])).is_err());
        assert!(Mat::<Rat>::from_rows(vec![vec![r(1)], vec![r(1), r(2)]]).is_err());
        assert!(rm(&[&[1, 2]]).determinant().is_err());
    }
}
