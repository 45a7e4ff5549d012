//! Dense complex matrices.
//!
//! [`Operator`] is a row-major matrix of `Complex64` with just enough algebra
//! for small quantum systems: products, Kronecker products, partial traces and
//! Hermitian eigendecomposition. Dimensions stay below ~100 throughout the
//! crate, so nothing here is blocked or sparse.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Unit complex number `e^{iθ}`.
pub fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[derive(Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "operator dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::dims("Operator::new", rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, d, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let m = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        assert!(n > 0 && m > 0, "empty matrix");
        let mut data = Vec::with_capacity(n * m);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), m, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: n,
            cols: m,
            data,
        }
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let d = entries.len();
        Self::from_fn(d, d, |r, c| if r == c { entries[r] } else { ZERO })
    }

    /// Column vector `|ψ⟩`.
    pub fn ket(amplitudes: &[C64]) -> Self {
        Self::from_fn(amplitudes.len(), 1, |r, _| amplitudes[r])
    }

    /// Row vector `⟨ψ|`.
    pub fn bra(amplitudes: &[C64]) -> Self {
        Self::from_fn(1, amplitudes.len(), |_, c| amplitudes[c].conj())
    }

    /// `|i⟩⟨j|` in dimension `d`.
    pub fn ket_bra(d: usize, i: usize, j: usize) -> Self {
        Self::from_fn(d, d, |r, c| if r == i && c == j { ONE } else { ZERO })
    }

    /// Projector onto the normalized vector `ψ / ‖ψ‖`.
    pub fn pure_projector(amplitudes: &[C64]) -> Self {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        Self::from_fn(amplitudes.len(), amplitudes.len(), |r, c| {
            amplitudes[r] * amplitudes[c].conj() / norm2
        })
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

    /// Side length of a square operator.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn try_matmul(&self, rhs: &Operator) -> Result<Operator> {
        if self.cols != rhs.rows {
            return Err(Error::dims(
                "matmul",
                format!("{} rows", self.cols),
                format!("{} rows", rhs.rows),
            ));
        }
        let mut out = vec![ZERO; self.rows * rhs.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(Operator {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        })
    }

    /// Panicking product; use [`Operator::try_matmul`] when shapes are not
    /// known to agree.
    pub fn matmul(&self, rhs: &Operator) -> Operator {
        self.try_matmul(rhs).expect("matmul shape mismatch")
    }

    /// `A X A†`.
    pub fn conjugate(&self, x: &Operator) -> Operator {
        self.matmul(x).matmul(&self.dagger())
    }

    pub fn try_add(&self, rhs: &Operator) -> Result<Operator> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Operator) -> Result<Operator> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Operator,
        context: &'static str,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<Operator> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::dims(
                context,
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        Ok(Operator {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn tensor(&self, rhs: &Operator) -> Operator {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        Operator::from_fn(rows, cols, |r, c| {
            self.get(r / rhs.rows, c / rhs.cols) * rhs.get(r % rhs.rows, c % rhs.cols)
        })
    }

    /// Kronecker product of a list of operators, left to right.
    pub fn tensor_all<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> Operator {
        ops.into_iter()
            .fold(Operator::identity(1), |acc, op| acc.tensor(op))
    }

    /// Partial trace over every factor not listed in `keep`.
    ///
    /// `dims` gives the factor dimensions in tensor order. The kept factors
    /// stay in their original relative order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Operator> {
        let total: usize = dims.iter().product();
        if !self.is_square() || self.rows != total {
            return Err(Error::dims(
                "partial_trace",
                format!("{total}x{total}"),
                format!("{}x{}", self.rows, self.cols),
            ));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument("zero factor dimension".into()));
        }
        let mut kept = vec![false; dims.len()];
        for &k in keep {
            if k >= dims.len() {
                return Err(Error::InvalidArgument(format!(
                    "factor index {k} out of range for {} factors",
                    dims.len()
                )));
            }
            kept[k] = true;
        }
        let kept_dims: Vec<usize> = (0..dims.len())
            .filter(|&i| kept[i])
            .map(|i| dims[i])
            .collect();
        let traced_dims: Vec<usize> = (0..dims.len())
            .filter(|&i| !kept[i])
            .map(|i| dims[i])
            .collect();
        let d_out: usize = kept_dims.iter().product();
        let d_tr: usize = traced_dims.iter().product();

        // full index from (kept multi-index, traced multi-index)
        let compose = |k: usize, t: usize| -> usize {
            let mut k_digits = digits(k, &kept_dims);
            let mut t_digits = digits(t, &traced_dims);
            k_digits.reverse();
            t_digits.reverse();
            let mut idx = 0;
            for (i, &d) in dims.iter().enumerate() {
                let digit = if kept[i] {
                    k_digits.pop().unwrap()
                } else {
                    t_digits.pop().unwrap()
                };
                idx = idx * d + digit;
            }
            idx
        };

        let mut table = vec![0usize; d_out * d_tr];
        for k in 0..d_out {
            for t in 0..d_tr {
                table[k * d_tr + t] = compose(k, t);
            }
        }
        Ok(Operator::from_fn(d_out, d_out, |r, c| {
            (0..d_tr)
                .map(|t| self.get(table[r * d_tr + t], table[c * d_tr + t]))
                .sum()
        }))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise comparison with an explicit absolute tolerance.
    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of `|A - A†|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `Tr(A† B)`, the Hilbert-Schmidt inner product.
    pub fn inner(&self, other: &Operator) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Operator) -> C64 {
        debug_assert_eq!(self.cols, other.rows);
        debug_assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self.get(r, k) * other.get(k, r);
            }
        }
        acc
    }

    pub fn pow(&self, n: usize) -> Operator {
        (0..n).fold(Operator::identity(self.rows), |acc, _| acc.matmul(self))
    }

    /// Eigendecomposition of a Hermitian operator. Eigenvalues are returned
    /// in ascending order; column `k` of the second item is the eigenvector
    /// for eigenvalue `k`.
    pub fn hermitian_eigen(&self, tol: f64) -> Result<(Vec<f64>, Operator)> {
        let dev = self.hermitian_deviation();
        if dev > tol {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let d = self.rows;
        // symmetrize before handing to the solver
        let m = DMatrix::from_fn(d, d, |r, c| (self.get(r, c) + self.get(c, r).conj()) * 0.5);
        let eig = m.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Operator::from_fn(d, d, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((values, vectors))
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        self.hermitian_eigen(tol).map(|(v, _)| v)
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

/// Mixed-radix digits of `index` for the given radices, most significant first.
pub(crate) fn digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("add shape mismatch")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("sub shape mismatch")
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.map(|z| -z)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, s: f64) -> Operator {
        self.scale_real(s)
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, s: C64) -> Operator {
        self.scale(s)
    }
}
