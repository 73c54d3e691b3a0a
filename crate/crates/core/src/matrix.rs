//! Dense square matrices: real symmetric and general complex.
//!
//! Storage is row-major. Values are immutable once constructed; every
//! arithmetic helper returns a new matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{input, Error, Result};

/// Largest entrywise asymmetry accepted by [`SymmetricMatrix::new`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Common surface of the two matrix kinds, used by [`MatrixTuple`].
pub trait SquareMatrix: Clone {
    fn dim(&self) -> usize;
}

/// A real symmetric `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a symmetric matrix from row-major entries.
    ///
    /// The input is replaced by `(M + M^T) / 2`. Entries that differ from
    /// their transpose partner by more than [`SYMMETRY_TOLERANCE`] are rejected.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return input("matrix dimension must be at least 1");
        }
        if data.len() != n * n {
            return input(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, data.len()));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return input(format!("non-finite entry at ({}, {})", pos / n, pos % n));
        }
        let mut data = data;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return input(format!(
                        "matrix is not symmetric: entries ({i}, {j}) and ({j}, {i}) differ by {:e}",
                        (a - b).abs()
                    ));
                }
                let avg = 0.5 * (a + b);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return input(format!("row {r} has length {}, expected {n}", rows[r].len()));
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self::new(n, data)
    }

    /// The rank-one matrix `x ⊗ x` with entries `x_i x_j`.
    pub fn outer_product(x: &[f64]) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return input("outer product of an empty vector");
        }
        let data = x.iter().flat_map(|&a| x.iter().map(move |&b| a * b)).collect();
        Self::new(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// Entrywise sum. Panics on a dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Sum of a non-empty list of equally sized matrices.
    pub fn sum<'a>(ms: impl IntoIterator<Item = &'a SymmetricMatrix>) -> Option<Self> {
        ms.into_iter().fold(None, |acc: Option<Self>, m| Some(match acc {
            None => m.clone(),
            Some(a) => a.add(m),
        }))
    }

    /// The congruence `T · self · T` for symmetric `T`.
    pub fn congruence(&self, t: &SymmetricMatrix) -> Self {
        let prod = t.to_nalgebra() * self.to_nalgebra() * t.to_nalgebra();
        Self::from_nalgebra_symmetrized(&prod)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Applies `f` to the spectrum: `V diag(f(λ)) V^T`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Self {
        let eig = SymmetricEigen::new(self.to_nalgebra());
        let mapped = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
        let v = &eig.eigenvectors;
        Self::from_nalgebra_symmetrized(&(v * mapped * v.transpose()))
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        if self.data.iter().any(|x| !x.is_finite()) {
            return input("non-finite matrix entry");
        }
        let ev = self.eigenvalues();
        Ok(ev[0].abs().max(ev[self.n - 1].abs()))
    }

    pub fn determinant(&self) -> f64 {
        self.to_complex().determinant().re
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }

    fn from_nalgebra_symmetrized(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        Self { n, data }
    }
}

impl SquareMatrix for SymmetricMatrix {
    fn dim(&self) -> usize {
        self.n
    }
}

/// A general complex `n x n` matrix.
///
/// User-facing constructors require `n >= 1`; the only `0 x 0` matrix is the
/// empty principal submatrix, whose determinant is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return input("matrix dimension must be at least 1");
        }
        if data.len() != n * n {
            return input(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, data.len()));
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return input(format!("non-finite entry at ({}, {})", pos / n, pos % n));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return input(format!("row {r} has length {}, expected {n}", rows[r].len()));
        }
        Self::new(n, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self::new(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        if self.n == 0 {
            return Vec::new();
        }
        self.data.chunks(self.n).map(<[Complex64]>::to_vec).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// Entrywise sum. Panics on a dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self { n, data }
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { n, data }
    }

    /// The `|S| x |S|` submatrix on rows and columns `indices`, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return input(format!("index {bad} out of range for dimension {}", self.n));
        }
        let data = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| self.data[i * self.n + j]))
            .collect();
        Ok(Self { n: indices.len(), data })
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let mut buf = self.data.clone();
        lu_determinant(&mut buf, self.n)
    }

    /// Largest singular value, from the top eigenvalue of `B* B`.
    pub fn operator_norm(&self) -> Result<f64> {
        if self.data.iter().any(|z| !z.is_finite()) {
            return input("non-finite matrix entry");
        }
        if self.n == 0 {
            return Ok(0.0);
        }
        let b = DMatrix::from_row_slice(self.n, self.n, &self.data);
        let gram = b.adjoint() * b;
        let top = gram.symmetric_eigenvalues().iter().copied().fold(0.0, f64::max);
        Ok(top.max(0.0).sqrt())
    }

    /// Sums of principal minors by size: entry `k` is the sum of all `k x k`
    /// principal minors, i.e. the coefficient of `x^k` in `det(I + xM)`.
    pub fn principal_minor_sums(&self) -> Vec<Complex64> {
        let mut buf = self.data.clone();
        principal_minor_sums_in_place(&mut buf, self.n)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    /// Eigenvalues of the Hermitian part `(M + M*)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        if self.n == 0 {
            return Vec::new();
        }
        let b = DMatrix::from_row_slice(self.n, self.n, &self.data);
        let h = (&b + b.adjoint()).scale(0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl SquareMatrix for ComplexMatrix {
    fn dim(&self) -> usize {
        self.n
    }
}

impl From<&SymmetricMatrix> for ComplexMatrix {
    fn from(m: &SymmetricMatrix) -> Self {
        m.to_complex()
    }
}

/// Ordered, non-empty list of matrices sharing one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple<M: SquareMatrix = ComplexMatrix> {
    matrices: Vec<M>,
}

impl<M: SquareMatrix> MatrixTuple<M> {
    pub fn new(matrices: Vec<M>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return input("matrix tuple must contain at least one matrix");
        };
        let n = first.dim();
        if let Some(k) = matrices.iter().position(|m| m.dim() != n) {
            return input(format!(
                "matrix {k} has dimension {}, expected {n}",
                matrices[k].dim()
            ));
        }
        Ok(Self { matrices })
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[M] {
        &self.matrices
    }

    pub fn iter(&self) -> std::slice::Iter<'_, M> {
        self.matrices.iter()
    }

    pub fn into_inner(self) -> Vec<M> {
        self.matrices
    }
}

impl<M: SquareMatrix> std::ops::Index<usize> for MatrixTuple<M> {
    type Output = M;
    fn index(&self, k: usize) -> &M {
        &self.matrices[k]
    }
}

impl MatrixTuple<SymmetricMatrix> {
    pub fn to_complex(&self) -> MatrixTuple<ComplexMatrix> {
        MatrixTuple { matrices: self.matrices.iter().map(SymmetricMatrix::to_complex).collect() }
    }
}

impl TryFrom<Vec<SymmetricMatrix>> for MatrixTuple<SymmetricMatrix> {
    type Error = Error;
    fn try_from(v: Vec<SymmetricMatrix>) -> Result<Self> {
        Self::new(v)
    }
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Determinant of the row-major `n x n` matrix in `a`, destroying it.
pub(crate) fn lu_determinant(a: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, cabs1(a[r * n + col])))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in col..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        let inv = p.inv();
        for r in (col + 1)..n {
            let f = a[r * n + col] * inv;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                let t = a[col * n + j];
                a[r * n + j] -= f * t;
            }
        }
    }
    det
}

/// Coefficients of `det(I + xM)` for the row-major matrix in `a`, destroying it.
///
/// Reduces to upper Hessenberg form by stabilized elementary similarity
/// transforms, then runs the Hessenberg characteristic-polynomial recurrence.
pub(crate) fn principal_minor_sums_in_place(a: &mut [Complex64], n: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    // Hessenberg reduction.
    for m in 1..n.saturating_sub(1) {
        let (piv, best) = (m..n)
            .map(|r| (r, cabs1(a[r * n + m - 1])))
            .fold((m, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if piv != m {
            for j in (m - 1)..n {
                a.swap(piv * n + j, m * n + j);
            }
            for r in 0..n {
                a.swap(r * n + piv, r * n + m);
            }
        }
        if best == 0.0 {
            continue;
        }
        let inv = a[m * n + m - 1].inv();
        for i in (m + 1)..n {
            let y = a[i * n + m - 1] * inv;
            if y == zero {
                continue;
            }
            a[i * n + m - 1] = zero;
            for j in m..n {
                let t = a[m * n + j];
                a[i * n + j] -= y * t;
            }
            for r in 0..n {
                let t = a[r * n + i];
                a[r * n + m] += y * t;
            }
        }
    }
    // polys[k] holds det(λI - H_k) for the leading k x k block, low degree first.
    let h = |i: usize, j: usize| a[i * n + j];
    let mut polys: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
    polys.push(vec![Complex64::new(1.0, 0.0)]);
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut p = vec![zero; k + 1];
        let diag = h(k - 1, k - 1);
        for (d, &c) in prev.iter().enumerate() {
            p[d + 1] += c;
            p[d] -= diag * c;
        }
        let mut sub_prod = Complex64::new(1.0, 0.0);
        for i in (1..k).rev() {
            // i is the 1-based row; the product runs over h_{j,j-1}, j = i+1..=k.
            sub_prod *= h(i, i - 1);
            if sub_prod == zero {
                break;
            }
            let coef = h(i - 1, k - 1) * sub_prod;
            for (d, &c) in polys[i - 1].iter().enumerate() {
                p[d] -= coef * c;
            }
        }
        polys.push(p);
    }
    let charpoly = &polys[n];
    (0..=n)
        .map(|k| {
            let c = charpoly[n - k];
            if k % 2 == 0 { c } else { -c }
        })
        .collect()
}
