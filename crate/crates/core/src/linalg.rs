//! Small dense row-major matrices: just enough linear algebra for metric
//! matrices, change-of-basis matrices and per-grade outermorphism blocks.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};

/// Pivots below this magnitude mark a matrix as singular.
pub const SINGULAR_PIVOT: f64 = 1e-10;

/// Eigenvalues below this magnitude are snapped to zero.
pub const EIGEN_ZERO: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::domain("matrix rows have different lengths"));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, a: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| a * x).collect() }
    }

    /// `a·self + b·other`; shapes must agree.
    pub fn combine(&self, a: f64, other: &Matrix, b: f64) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::domain("matrix shapes differ"));
        }
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest `|a_ij - a_ji|`; infinite for non-square matrices.
    pub fn max_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_asymmetry() <= tol
    }

    /// True when every off-diagonal entry is below `tol` in magnitude.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].abs() < tol))
    }

    /// `selfᵀ·self ≈ I` within `tol`.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .transpose()
                .try_mul(self)
                .map(|p| p.max_abs_diff(&Matrix::identity(self.rows)) <= tol)
                .unwrap_or(false)
    }

    fn frobenius_off_diagonal(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    sum += self[(i, j)] * self[(i, j)];
                }
            }
        }
        sum.sqrt()
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::domain("only square matrices have inverses"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs())).unwrap();
            if a[(pivot, col)].abs() < SINGULAR_PIVOT {
                return Err(Error::domain("matrix is singular"));
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(i, j)] -= f * a[(col, j)];
                    inv[(i, j)] -= f * inv[(col, j)];
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by partially pivoted elimination.
    pub fn determinant(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::domain("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs())).unwrap();
            if a[(pivot, col)] == 0.0 {
                return Ok(0.0);
            }
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for i in col + 1..n {
                let f = a[(i, col)] / p;
                for j in col..n {
                    a[(i, j)] -= f * a[(col, j)];
                }
            }
        }
        Ok(det)
    }

    /// Number of pivots above [`SINGULAR_PIVOT`] in row-echelon form.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let pivot = (rank..self.rows).max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs())).unwrap();
            if a[(pivot, col)].abs() < SINGULAR_PIVOT {
                continue;
            }
            a.swap_rows(rank, pivot);
            for i in rank + 1..self.rows {
                let f = a[(i, col)] / a[(rank, col)];
                for j in col..self.cols {
                    a[(i, j)] -= f * a[(rank, j)];
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Eigen-decomposition `A = Q·diag(λ)·Qᵀ` of a symmetric matrix by cyclic
/// Jacobi rotations. Eigenvalues come back in descending order, the
/// eigenvectors are the columns of `Q`.
pub fn sym_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if !a.is_square() || !a.is_symmetric(1e-12) {
        return Err(Error::domain(format!("matrix is not symmetric (max asymmetry {})", a.max_asymmetry())));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut q = Matrix::identity(n);
    let scale = a.frobenius().max(1.0);
    let mut sweeps = 0;
    while m.frobenius_off_diagonal() >= JACOBI_TOL * scale {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numeric(format!("Jacobi eigen-solver did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
        }
        for p in 0..n {
            for r in p + 1..n {
                rotate(&mut m, &mut q, p, r);
            }
        }
        sweeps += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| if m[(i, i)].abs() < EIGEN_ZERO { 0.0 } else { m[(i, i)] }).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok((values, vectors))
}

/// One Jacobi rotation zeroing `m[p][r]`, accumulated into `q`.
fn rotate(m: &mut Matrix, q: &mut Matrix, p: usize, r: usize) {
    let apr = m[(p, r)];
    if apr == 0.0 {
        return;
    }
    let theta = (m[(r, r)] - m[(p, p)]) / (2.0 * apr);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkr = m[(k, r)];
        m[(k, p)] = c * mkp - s * mkr;
        m[(k, r)] = s * mkp + c * mkr;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mrk = m[(r, k)];
        m[(p, k)] = c * mpk - s * mrk;
        m[(r, k)] = s * mpk + c * mrk;
    }
    m[(p, r)] = 0.0;
    m[(r, p)] = 0.0;
    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = c * qkp - s * qkr;
        q[(k, r)] = s * qkp + c * qkr;
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl fmt::Display for Matrix {
    /// One row per line, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&x| crate::multivector::format_real(x)).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
