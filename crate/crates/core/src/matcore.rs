//! Dense complex matrices for small dimensions.
//!
//! Storage is row-major. All operations return new values; nothing is
//! mutated behind a shared reference, so matrices can be shared freely
//! between threads.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::tol;

pub type Complex = num_complex::Complex64;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
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

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension {
                op: "from_vec",
                detail: format!("{} entries for a {}x{} matrix", data.len(), rows, cols),
            });
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// Builds a real matrix from row-major entries.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "from_real: wrong entry count");
        CMatrix {
            rows,
            cols,
            data: data.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, 0.0);
        }
        m
    }

    pub fn column(entries: &[Complex]) -> Self {
        CMatrix {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.data
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<Complex> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(self.mismatch("matmul", other));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CMatrix) -> Result<Self> {
        self.zip_with("add", other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<Self> {
        self.zip_with("sub", other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex) -> Self {
        self.map(|z| c * z)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn trace(&self) -> Complex {
        self.diagonal().into_iter().sum()
    }

    /// Hilbert–Schmidt inner product `Tr(A†B)`.
    pub fn trace_inner(&self, other: &CMatrix) -> Result<Complex> {
        if !self.is_square() || !other.is_square() || self.shape() != other.shape() {
            return Err(self.mismatch("trace_inner", other));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self − other`. Shapes must agree.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "distance: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_abs_diff(other) <= tol
    }

    /// `‖A − A†‖_F`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖A·A† − I‖_F`; infinite for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = self * &self.dagger();
        prod.distance(&Self::identity(self.rows))
    }

    pub fn kron(&self, other: &CMatrix) -> Self {
        let (ra, ca) = self.shape();
        let (rb, cb) = other.shape();
        Self::from_fn(ra * rb, ca * cb, |r, c| {
            self[(r / rb, c / cb)] * other[(r % rb, c % cb)]
        })
    }

    /// Block-diagonal `[[A, 0], [0, B]]`.
    pub fn direct_sum(&self, other: &CMatrix) -> Self {
        let (ra, ca) = self.shape();
        let (rb, cb) = other.shape();
        let mut out = Self::zeros(ra + rb, ca + cb);
        for r in 0..ra {
            for c in 0..ca {
                out[(r, c)] = self[(r, c)];
            }
        }
        for r in 0..rb {
            for c in 0..cb {
                out[(ra + r, ca + c)] = other[(r, c)];
            }
        }
        out
    }

    /// Row-stacking vectorization: entry `(i, j)` of an `N×N` matrix lands
    /// at position `i·N + j` of the returned `N²×1` column.
    pub fn vec(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(self.not_square("vec"));
        }
        Ok(CMatrix {
            rows: self.rows * self.cols,
            cols: 1,
            data: self.data.clone(),
        })
    }

    /// Inverse of [`CMatrix::vec`]: successive blocks of `n` entries become rows.
    pub fn unvec(v: &CMatrix, n: usize) -> Result<Self> {
        if v.data.len() != n * n || n == 0 {
            return Err(Error::InvalidDimension {
                op: "unvec",
                detail: format!("{} entries cannot form a {n}x{n} matrix", v.data.len()),
            });
        }
        Ok(CMatrix {
            rows: n,
            cols: n,
            data: v.data.clone(),
        })
    }

    /// Transpose on the second tensor factor of a `dim_a·dim_b` square matrix.
    pub fn partial_transpose(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(self.not_square("partial_transpose"));
        }
        if dim_a * dim_b != self.rows || dim_a == 0 {
            return Err(Error::InvalidDimension {
                op: "partial_transpose",
                detail: format!("{}x{} does not factor as {dim_a}·{dim_b}", self.rows, self.cols),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            let (a, b) = (r / dim_b, r % dim_b);
            let (a2, b2) = (c / dim_b, c % dim_b);
            self[(a * dim_b + b2, a2 * dim_b + b)]
        }))
    }

    /// Eigen-decomposition of a Hermitian matrix; see [`hermitian_eigen`].
    pub fn hermitian_eigen(&self) -> Result<EigenResult> {
        hermitian_eigen(self)
    }

    fn zip_with(&self, op: &'static str, other: &CMatrix, f: impl Fn(Complex, Complex) -> Complex) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(op, other));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    fn mismatch(&self, op: &'static str, other: &CMatrix) -> Error {
        Error::ShapeMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    fn not_square(&self, op: &'static str) -> Error {
        Error::NotSquare {
            op,
            rows: self.rows,
            cols: self.cols,
        }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch; use the named methods for a `Result`.

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::add(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::sub(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>10.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl EigenResult {
    /// `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        CMatrix::from_fn(n, n, |r, c| {
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(i, &l)| v[(r, i)] * v[(c, i)].conj() * l)
                .sum()
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Input is admitted when `‖H − H†‖_F ≤ EPS·max(1, ‖H‖_F)`; its Hermitian part
/// is then diagonalized. Eigenvectors belonging to a degenerate cluster are
/// orthonormal, in no particular order.
pub fn hermitian_eigen(h: &CMatrix) -> Result<EigenResult> {
    if !h.is_square() {
        return Err(h.not_square("hermitian_eigen"));
    }
    let norm = h.frobenius_norm();
    let defect = h.hermiticity_defect();
    if defect.is_nan() || defect > tol::EPS * norm.max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let n = h.rows();
    let mut a = CMatrix::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);

    let off_norm = |a: &CMatrix| -> f64 {
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    acc += a[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let target = f64::EPSILON * norm;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    orthonormalize_clusters(&mut vectors, &eigenvalues, tol::EPS * norm.max(1.0));

    Ok(EigenResult {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Annihilates `a[p][q]` with the unitary `J = W·R`, where `W` removes the
/// phase of `a[p][q]` and `R` is the real Jacobi rotation; `a ← J†aJ`, `v ← vJ`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / r;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex::new(c, 0.0);
    let j_pq = Complex::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Modified Gram–Schmidt inside each run of (sorted) eigenvalues closer than `gap`.
fn orthonormalize_clusters(v: &mut CMatrix, eigenvalues: &[f64], gap: f64) {
    let n = v.rows();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end - 1] - eigenvalues[end] <= gap {
            end += 1;
        }
        for i in start..end {
            for prev in start..i {
                let proj: Complex = (0..n).map(|r| v[(r, prev)].conj() * v[(r, i)]).sum();
                for r in 0..n {
                    let x = v[(r, prev)];
                    v[(r, i)] -= proj * x;
                }
            }
            let norm = (0..n).map(|r| v[(r, i)].norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.0 {
                for r in 0..n {
                    v[(r, i)] /= norm;
                }
            }
        }
        start = end;
    }
}
