//! Dense complex matrices in row-major order.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// A dense complex matrix stored row-major.
///
/// This is the carrier for every state, Kraus operator, Choi operator and
/// witness in the crate. All dimensions here are small (a few hundred at
/// most), so no attempt is made at blocking or sparsity.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Column vector from entries.
    pub fn column(v: &[C64]) -> Self {
        Self::from_vec_unchecked(v.len(), 1, v.to_vec())
    }

    /// Rank-one operator `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// Matrix unit `|i><j|` of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = ONE;
        m
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|&z| z * s).collect())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[p * m..(p + 1) * m];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec_unchecked(n, m, out)
    }

    /// `self * rhs^dagger` without materializing the adjoint.
    pub(crate) fn mul_adjoint(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.cols, rhs.cols);
        let (n, k, m) = (self.rows, self.cols, rhs.rows);
        Self::from_fn(n, m, |i, j| {
            let a = &self.data[i * k..(i + 1) * k];
            let b = &rhs.data[j * k..(j + 1) * k];
            a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
        })
    }

    /// `self^dagger * rhs`.
    pub(crate) fn adjoint_mul(&self, rhs: &Self) -> Self {
        self.adjoint().mul_unchecked(rhs)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut data = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    let base = (i * rhs.rows + k) * cols + j * rhs.cols;
                    let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                    for (o, &b) in data[base..base + rhs.cols].iter_mut().zip(src) {
                        *o = a * b;
                    }
                }
            }
        }
        Self::from_vec_unchecked(rows, cols, data)
    }

    /// Kronecker product of a non-empty list of factors.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Self {
        factors
            .into_iter()
            .fold(Self::identity(1), |acc, f| acc.kron(f))
    }

    /// `n`-fold tensor power; `n = 0` yields the 1x1 identity.
    pub fn kron_pow(&self, n: usize) -> Self {
        (0..n).fold(Self::identity(1), |acc, _| acc.kron(self))
    }

    /// Direct sum `self ⊕ rhs` (block diagonal).
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, rhs);
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry deviation from Hermiticity, `max |m_ij - conj(m_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Hilbert-Schmidt inner product `tr(self^dagger rhs)`.
    pub fn inner(&self, rhs: &Self) -> C64 {
        self.data.iter().zip(&rhs.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub(crate) fn add_scaled_assign(&mut self, rhs: &Self, s: C64) {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b * s;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
