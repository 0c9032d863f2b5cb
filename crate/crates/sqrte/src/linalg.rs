//! Dense exact linear algebra over the rationals, sized for the small
//! Gram matrices and subspace bases of this crate.

use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: Vec<Vec<BigRational>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut m = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] = &m[(i, j)] + &prod;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = &*a + b;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = &*a - b;
        }
        m
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Row echelon form in place; returns (rank, pivot columns, sign flips).
    fn echelon(&mut self) -> (usize, Vec<usize>, usize) {
        let mut pivots = Vec::new();
        let mut row = 0;
        let mut swaps = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let pivot_row = (row..self.rows).find(|&r| !self[(r, col)].is_zero());
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for j in 0..self.cols {
                    let tmp = self[(pr, j)].clone();
                    self[(pr, j)] = self[(row, j)].clone();
                    self[(row, j)] = tmp;
                }
                swaps += 1;
            }
            let inv = BigRational::one() / self[(row, col)].clone();
            for j in col..self.cols {
                self[(row, j)] = &self[(row, j)] * &inv;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let sub = &factor * &self[(row, j)];
                        self[(r, j)] = &self[(r, j)] - &sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (row, pivots, swaps)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelon().0
    }

    /// Basis of the right kernel, as columns.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let (_, pivots, _) = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.cols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `self * x = b`; returns None when inconsistent. When the
    /// system is underdetermined an arbitrary solution is returned.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows);
        let rhs = QMatrix::from_columns(vec![b.to_vec()]);
        let mut aug = self.hstack(&rhs);
        let (_, pivots, _) = aug.echelon();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pr) = pivot else { return BigRational::zero() };
            if pr != col {
                for j in 0..n {
                    let tmp = m[(pr, j)].clone();
                    m[(pr, j)] = m[(col, j)].clone();
                    m[(col, j)] = tmp;
                }
                det = -det;
            }
            det = det * m[(col, col)].clone();
            let inv = BigRational::one() / m[(col, col)].clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for j in col..n {
                    let sub = &factor * &m[(col, j)];
                    m[(r, j)] = &m[(r, j)] - &sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(n));
        let (rank, _, _) = aug.echelon();
        if rank < n {
            return None;
        }
        let mut inv = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// dim(colspan(a) ∩ colspan(b)) = dim a + dim b − rank [a | b],
/// assuming each basis matrix has full column rank.
pub fn intersection_dim(a: &QMatrix, b: &QMatrix) -> usize {
    let ra = a.rank();
    let rb = b.rank();
    ra + rb - a.hstack(b).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qint;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| qint(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel();
        assert_eq!(ker.len(), 1);
        let img = a.mul_vec(&ker[0]);
        assert!(img.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), qint(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
    }

    #[test]
    fn solve_consistent() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = a.solve(&[qint(3), qint(1)]).unwrap();
        assert_eq!(x, vec![qint(2), qint(1)]);
        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[qint(0), qint(1)]).is_none());
    }

    #[test]
    fn intersection_dimension() {
        let a = m(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = m(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(intersection_dim(&a, &b), 1);
    }
}
