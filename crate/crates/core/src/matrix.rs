//! Dense matrices over [`GaussianRational`] and the exact kernels the rest
//! of the crate is built on: reduced row echelon form, rank, inverse,
//! full-rank factorization, nilpotency and polynomial membership.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::GaussianRational;

type Scalar = GaussianRational;

/// Row-major dense matrix.
///
/// Algebra elements are always square. Zero-sized matrices exist only as
/// restrictions to a trivial subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub rref: Matrix,
    pub pivot_columns: Vec<usize>,
    pub kernel_basis: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Format(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::Format(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from integer rows; mostly a convenience for tests.
    pub fn from_int_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        Matrix {
            rows: rows.len(),
            cols: C,
            data: rows.iter().flatten().map(|&x| Scalar::from(x)).collect(),
        }
    }

    /// Builds a matrix from scalar literals. Panics on a malformed literal.
    pub fn from_literals<const C: usize>(rows: &[[&str; C]]) -> Self {
        Matrix {
            rows: rows.len(),
            cols: C,
            data: rows
                .iter()
                .flatten()
                .map(|s| Scalar::parse(s).expect("valid scalar literal"))
                .collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::zeros(n, n)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn diag_ints(entries: &[i64]) -> Self {
        Self::diag(&entries.iter().map(|&x| Scalar::from(x)).collect::<Vec<_>>())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape {
                op,
                left: self.shape(),
                right: self.shape(),
            })
        }
    }

    pub(crate) fn require_same_square(&self, other: &Matrix, op: &'static str) -> Result<usize> {
        if self.is_square() && self.shape() == other.shape() {
            Ok(self.rows)
        } else {
            Err(Error::Shape {
                op,
                left: self.shape(),
                right: other.shape(),
            })
        }
    }

    fn zip_with(&self, rhs: &Matrix, op: &'static str, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Shape {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, "subtract", |a, b| a - b)
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape {
                op: "multiply",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let bkj = rhs.get(k, j);
                    if bkj.is_zero() {
                        continue;
                    }
                    out.data[i * rhs.cols + j] += &(aik * bkj);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `self^k` with `self^0 = I`.
    pub fn pow(&self, k: u32) -> Result<Matrix> {
        let n = self.require_square("power")?;
        let mut result = Matrix::identity(n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Copies the `rows x cols` block starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of range");
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape {
                op: "block assembly",
                left: a.shape(),
                right: d.shape(),
            });
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut out = Matrix::zeros(rows, cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    out.data[(r0 + i) * cols + c0 + j] = blk.get(i, j).clone();
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal `a ⊕ b`.
    pub fn direct_sum(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_blocks(a, &Matrix::zeros(a.rows, b.cols), &Matrix::zeros(b.rows, a.cols), b)
            .expect("direct sum shapes are always compatible")
    }

    /// Stacks the columns into a single vector of length `rows * cols`.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    /// Reduced row echelon form with the first nonzero entry of each column
    /// as pivot, plus a kernel basis read off the free columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let (rows, cols) = self.shape();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).checked_inv().expect("pivot is nonzero");
            for j in c..cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        let mut kernel_basis = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(row, free);
            }
            kernel_basis.push(v);
        }
        Rref {
            rank,
            rref: m,
            pivot_columns: pivots,
            kernel_basis,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn determinant(&self) -> Result<Scalar> {
        let n = self.require_square("determinant")?;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.checked_inv()?;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&factor * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// The two-sided inverse, or `None` when the matrix is singular.
    pub fn try_inverse(&self) -> Result<Option<Matrix>> {
        let n = self.require_square("inverse")?;
        let aug = Matrix::from_blocks(self, &Matrix::identity(n), &Matrix::zeros(0, n), &Matrix::zeros(0, n))?;
        let red = aug.rref();
        if red.pivot_columns.iter().take_while(|&&c| c < n).count() < n {
            return Ok(None);
        }
        Ok(Some(red.rref.submatrix(0, n, n, n)))
    }

    pub fn is_invertible(&self) -> Result<bool> {
        self.require_square("inverse")?;
        Ok(self.rank() == self.rows)
    }

    /// Inverse of a matrix the caller knows to be invertible.
    pub(crate) fn inverse_or(&self, what: &str) -> Result<Matrix> {
        self.try_inverse()?
            .ok_or_else(|| Error::Certificate(format!("{what} is not invertible")))
    }

    /// Some solution `x` of `self * x = rhs`, with free variables set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::Shape {
                op: "solve",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let n = self.cols;
        let aug = Matrix::from_blocks(self, rhs, &Matrix::zeros(0, n), &Matrix::zeros(0, rhs.cols))?;
        let red = aug.rref();
        if red.pivot_columns.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(n, rhs.cols);
        for (row, &pc) in red.pivot_columns.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, red.rref.get(row, n + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// `a = B C` with `B` the pivot columns of `a` and `C` the nonzero rows
    /// of its RREF. Returns `None` exactly when `a` is zero.
    pub fn full_rank_factorize(&self) -> Option<(Matrix, Matrix)> {
        let red = self.rref();
        if red.rank == 0 {
            return None;
        }
        let cols: Vec<_> = red.pivot_columns.iter().map(|&j| self.column(j)).collect();
        let b = Matrix::from_columns(self.rows, &cols);
        let c = red.rref.submatrix(0, 0, red.rank, self.cols);
        Some((b, c))
    }

    /// Basis of the column space, taken from the pivot columns.
    pub fn column_space_basis(&self) -> Vec<Vec<Scalar>> {
        self.rref().pivot_columns.iter().map(|&j| self.column(j)).collect()
    }

    /// Least `m` with `self^m = 0`, or `None` when the matrix is not nilpotent.
    ///
    /// Squares up to an exponent of at least `n`, then recovers the least
    /// exponent by binary lifting over the stored squares.
    pub fn nilpotency_index(&self) -> Result<Option<usize>> {
        let n = self.require_square("nilpotency test")?;
        if n == 0 {
            return Ok(Some(0));
        }
        let mut squares = vec![self.clone()];
        while (1usize << (squares.len() - 1)) < n {
            let last = squares.last().expect("nonempty");
            squares.push(last * last);
        }
        if !squares.last().expect("nonempty").is_zero() {
            return Ok(None);
        }
        // Largest m with self^m != 0; the index is m + 1.
        let mut current: Option<Matrix> = None;
        let mut m = 0usize;
        for (j, sq) in squares.iter().enumerate().rev() {
            let candidate = match &current {
                Some(c) => c * sq,
                None => sq.clone(),
            };
            if !candidate.is_zero() {
                current = Some(candidate);
                m += 1 << j;
            }
        }
        Ok(Some(m + 1))
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.nilpotency_index()?.is_some())
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && &(self * self) == self
    }

    pub fn commutes(&self, other: &Matrix) -> Result<bool> {
        self.require_same_square(other, "commutation test")?;
        Ok(self * other == other * self)
    }

    /// Coefficients `c_0..c_d` of the lowest-degree polynomial with
    /// `sum c_i self^i = target`, or `None` if `target` lies outside the
    /// unital algebra generated by `self`.
    pub fn express_as_polynomial(&self, target: &Matrix) -> Result<Option<Vec<Scalar>>> {
        let n = self.require_same_square(target, "polynomial membership")?;
        let len = n * n;
        let rhs = Matrix::new(len, 1, target.vectorize())?;
        let mut columns = vec![Matrix::identity(n).vectorize()];
        let mut power = Matrix::identity(n);
        loop {
            let basis = Matrix::from_columns(len, &columns);
            if let Some(x) = basis.solve(&rhs)? {
                return Ok(Some(x.column(0)));
            }
            if columns.len() > len {
                return Ok(None);
            }
            power = &power * self;
            let next = power.vectorize();
            // Once the next power is dependent on the lower ones the span is
            // saturated and no higher degree can help.
            if basis.solve(&Matrix::new(len, 1, next.clone())?)?.is_some() {
                return Ok(None);
            }
            columns.push(next);
        }
    }

    /// `sum c_i self^i` (Horner).
    pub fn eval_polynomial(&self, coefficients: &[Scalar]) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zero(n);
        for c in coefficients.iter().rev() {
            acc = &(&acc * self) + &Matrix::identity(n).scale(c);
        }
        acc
    }

    /// Serializes to the JSON matrix file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    /// Reads a matrix file. Rejects empty matrices and inconsistent shapes,
    /// and reports the entry and character position of a bad literal.
    pub fn from_json(text: &str) -> Result<Matrix> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let m = Matrix::try_from(file)?;
        if m.rows == 0 || m.cols == 0 {
            return Err(Error::Format("matrix must have at least one row and one column".into()));
        }
        Ok(m)
    }
}

/// Wire form: `{"rows": R, "cols": C, "entries": [[literal, ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixFile> for Matrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Matrix> {
        if file.entries.len() != file.rows {
            return Err(Error::Format(format!(
                "declared {} rows but found {}",
                file.rows,
                file.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(file.rows * file.cols);
        for (i, row) in file.entries.iter().enumerate() {
            if row.len() != file.cols {
                return Err(Error::Format(format!(
                    "row {i} has {} entries but {} columns were declared",
                    row.len(),
                    file.cols
                )));
            }
            for (j, lit) in row.iter().enumerate() {
                let x = Scalar::parse(lit)
                    .map_err(|e| Error::Format(format!("entry ({i},{j}) \"{lit}\": {e}")))?;
                data.push(x);
            }
        }
        Matrix::new(file.rows, file.cols, data)
    }
}

impl From<&Matrix> for MatrixFile {
    fn from(m: &Matrix) -> Self {
        MatrixFile {
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows)
                .map(|i| m.row(i).iter().map(Scalar::format).collect())
                .collect(),
        }
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(deserializer)?;
        Matrix::try_from(file).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

// Operator forms panic on shape mismatch; internal code only combines
// matrices whose shapes are already known to agree.
impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}
