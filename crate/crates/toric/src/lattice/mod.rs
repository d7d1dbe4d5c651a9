//! Exact integer and rational linear algebra.
//!
//! Everything here is generic over the integer scalar via [`IntScalar`]; the
//! crate root pins the concrete aliases ([`crate::Int`], [`crate::IntMatrix`])
//! to arbitrary precision. No floating point is used anywhere.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub mod lp;

pub use lp::{cone_membership, simplex_max, LpResult};

/// Integer scalar the linear algebra is generic over. `i64`, `i128` and
/// `num_bigint::BigInt` all qualify.
pub trait IntScalar:
    num_integer::Integer + Signed + Clone + fmt::Debug + fmt::Display + From<i64> + 'static
{
}

impl<T> IntScalar for T where
    T: num_integer::Integer + Signed + Clone + fmt::Debug + fmt::Display + From<i64> + 'static
{
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense matrix with exact entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: IntScalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    pub fn add_row_multiple(&mut self, a: usize, b: usize, q: &T) {
        for j in 0..self.cols {
            let add = q.clone() * self[(b, j)].clone();
            self[(a, j)] = self[(a, j)].clone() + add;
        }
    }

    /// col[a] += q * col[b]
    pub fn add_col_multiple(&mut self, a: usize, b: usize, q: &T) {
        for i in 0..self.rows {
            let add = q.clone() * self[(i, b)].clone();
            self[(i, a)] = self[(i, a)].clone() + add;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    /// Fraction-free Bareiss determinant.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = !sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(k, k)].clone() * a[(i, j)].clone()
                        - a[(i, k)].clone() * a[(k, j)].clone();
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[(i, j)] = q;
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        if sign {
            -det
        } else {
            det
        }
    }
}

impl<T: IntScalar> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: IntScalar> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: IntScalar> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }
}

impl<T: IntScalar> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Result of [`smith_normal_form`]: `u * a * v = d` with `u`, `v` unimodular
/// and `d` diagonal, entries non-negative with `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithNormalForm<T: IntScalar> {
    pub u: Mat<T>,
    pub d: Mat<T>,
    pub v: Mat<T>,
}

impl<T: IntScalar> SmithNormalForm<T> {
    pub fn diagonal(&self) -> Vec<T> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|e| !e.is_zero()).count()
    }
}

pub fn smith_normal_form<T: IntScalar>(a: &Mat<T>) -> SmithNormalForm<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut v = Mat::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // Deterministic pivot: first entry of minimal absolute value in the
        // trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[(i, j)].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => d[(i, j)].abs() < d[(pi, pj)].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'reduce: loop {
            // Clear column t below the pivot.
            for i in t + 1..m {
                while !d[(i, t)].is_zero() {
                    let q = -(d[(i, t)].clone() / d[(t, t)].clone());
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        // Nonzero remainder, strictly smaller than the pivot.
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                    }
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..n {
                while !d[(t, j)].is_zero() {
                    let q = -(d[(t, j)].clone() / d[(t, t)].clone());
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                    }
                }
            }
            // Column swaps above may have re-dirtied column t.
            if (t + 1..m).any(|i| !d[(i, t)].is_zero()) {
                continue 'reduce;
            }
            // Divisibility: the pivot must divide every remaining entry.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(d[(i, j)].clone() % d[(t, t)].clone()).is_zero());
            match offender {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, &T::one());
                    u.add_row_multiple(t, i, &T::one());
                }
                None => break 'reduce,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    SmithNormalForm { u, d, v }
}

/// Finitely generated abelian group `Z^free_rank + Z/d_1 + ...` with
/// `d_1 | d_2 | ...` and all `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

impl<T: IntScalar> AbelianGroupPresentation<T> {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Presentation of `Z^rows / column-span(a)`. Callers pass the transpose when
/// their map runs the other way.
pub fn cokernel<T: IntScalar>(a: &Mat<T>) -> AbelianGroupPresentation<T> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|e| !e.is_zero()).count();
    let two = T::from(2);
    AbelianGroupPresentation {
        free_rank: a.rows() - nonzero,
        torsion: diag.into_iter().filter(|e| *e >= two).collect(),
    }
}

/// Exact inverse of a matrix with determinant +-1.
pub fn unimodular_inverse<T: IntScalar>(m: &Mat<T>) -> Mat<T> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| (0..n).map(|j| Ratio::from_integer(m[(i, j)].clone())).collect())
        .collect();
    let mut inv: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Ratio::one()
                    } else {
                        Ratio::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).expect("matrix is singular");
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] = &a[k][j] / &piv;
            inv[k][j] = &inv[k][j] / &piv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                a[i][j] = &a[i][j] - &(&f * &a[k][j]);
                inv[i][j] = &inv[i][j] - &(&f * &inv[k][j]);
            }
        }
    }
    Mat::from_fn(n, n, |i, j| {
        assert!(inv[i][j].is_integer(), "matrix is not unimodular");
        inv[i][j].to_integer()
    })
}

/// Signature (positive, negative, zero eigenvalue counts) of a symmetric
/// matrix, by exact rational congruence diagonalization.
pub fn symmetric_signature<T: IntScalar>(m: &Mat<T>) -> (usize, usize, usize) {
    assert_eq!(m.rows(), m.cols(), "signature of a non-square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| (0..n).map(|j| Ratio::from_integer(m[(i, j)].clone())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                // Simultaneous row/column swap keeps congruence.
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(i) = (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                // All trailing diagonal entries vanish: fold row/col i into k,
                // producing 2*a[i][k] on the diagonal.
                for j in 0..n {
                    let add = a[i][j].clone();
                    a[k][j] = &a[k][j] + &add;
                }
                for r in 0..n {
                    let add = a[r][i].clone();
                    a[r][k] = &a[r][k] + &add;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in 0..n {
                let sub = &f * &a[k][j];
                a[i][j] = &a[i][j] - &sub;
            }
            for r in 0..n {
                let sub = &f * &a[r][k];
                a[r][i] = &a[r][i] - &sub;
            }
        }
    }
    (pos, neg, zero)
}

/// Rank of a family of rational vectors.
pub fn rational_rank<T: IntScalar>(vectors: &[Vec<Ratio<T>>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].len();
    let mut rows: Vec<Vec<Ratio<T>>> = vectors.to_vec();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let piv = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &piv;
            for j in col..dim {
                let sub = &f * &rows[rank][j];
                rows[i][j] = &rows[i][j] - &sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
