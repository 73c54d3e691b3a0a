//! Mixed characteristic polynomials, the Szegő star product and the
//! truncated exponential.
//!
//! For `m` matrices of dimension `n` the mixed characteristic polynomial is
//!
//! ```text
//! p(x) = Σ_k (-1)^{n+k} (1/k!) Σ_{|J| = n-k} D(I, ..., I [k copies], A_j : j ∈ J) x^k.
//! ```

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::derivatives::{padded_subset_sums, Settings};
use crate::error::{domain, input, Result};
use crate::matrix::{ComplexMatrix, SymmetricMatrix};
use crate::subsets::binomial;

/// Dense univariate polynomial; `coeffs[k]` multiplies `z^k`. Trailing zero
/// coefficients are removed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    fn eval_derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
    }

    /// `z^n p(1/z)`, padding with zeros up to degree `n`.
    pub fn reversed(&self, n: usize) -> Result<Self> {
        if self.degree().is_some_and(|d| d > n) {
            return input(format!("degree {} exceeds reversal degree {n}", self.degree().unwrap_or(0)));
        }
        Ok(Self::new((0..=n).rev().map(|k| self.coeff(k)).collect()))
    }

    /// All complex roots with multiplicity, from the eigenvalues of the
    /// balanced companion matrix followed by two Newton steps each.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let Some(d) = self.degree() else {
            return domain("the zero polynomial has no finite root set");
        };
        // Zero roots show up as vanishing low-order coefficients.
        let low = self.coeffs.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
        let mut roots = vec![Complex64::new(0.0, 0.0); low];
        let core = &self.coeffs[low..];
        let deg = d - low;
        if deg == 0 {
            return Ok(roots);
        }
        let lead = core[deg];
        let mut c = DMatrix::<Complex64>::zeros(deg, deg);
        for j in 0..deg {
            c[(0, j)] = -core[deg - 1 - j] / lead;
        }
        for i in 1..deg {
            c[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        balance(&mut c);
        let eig = Schur::new(c).eigenvalues().ok_or_else(|| crate::Error::Domain("eigenvalue solver failed".into()))?;
        let reduced = Poly::new(core.to_vec());
        for z in eig.iter() {
            roots.push(reduced.newton(*z));
        }
        Ok(roots)
    }

    fn newton(&self, mut z: Complex64) -> Complex64 {
        for _ in 0..2 {
            let d = self.eval_derivative(z);
            if d == Complex64::new(0.0, 0.0) {
                break;
            }
            let next = z - self.eval(z) / d;
            if !next.is_finite() || self.eval(next).norm() > self.eval(z).norm() {
                break;
            }
            z = next;
        }
        z
    }
}

/// Parlett-Reinsch balancing by powers of two.
fn balance(a: &mut DMatrix<Complex64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].l1_norm();
                    r += a[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / radix {
                f *= radix;
                c *= radix * radix;
            }
            while c > r * radix {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// The mixed characteristic polynomial of `m` matrices of dimension `n`.
pub fn mixed_char_poly(matrices: &[ComplexMatrix], settings: &Settings) -> Result<Poly> {
    let Some(first) = matrices.first() else {
        return input("need at least one matrix");
    };
    let n = first.dim();
    let s = padded_subset_sums(matrices, n, n, settings)?;
    Ok(Poly::new(
        (0..=n)
            .map(|k| if (n + k) % 2 == 0 { s[n - k] } else { -s[n - k] })
            .collect(),
    ))
}

/// `s_k = q_k r_k / C(n, k)` for `k = 0..=n`.
pub fn star_product(q: &Poly, r: &Poly, n: usize) -> Result<Poly> {
    for p in [q, r] {
        if p.degree().is_some_and(|d| d > n) {
            return input(format!("star product of order {n} needs degrees at most {n}"));
        }
    }
    Ok(Poly::new((0..=n).map(|k| q.coeff(k) * r.coeff(k) / binomial(n, k)).collect()))
}

/// `Σ_{k=0}^n z^k / k!`.
pub fn exp_partial_sum(n: usize) -> Poly {
    let mut c = Vec::with_capacity(n + 1);
    let mut term = 1.0;
    for k in 0..=n {
        if k > 0 {
            term /= k as f64;
        }
        c.push(Complex64::new(term, 0.0));
    }
    Poly::new(c)
}

pub const MSS_TOLERANCE: f64 = 1e-6;
const DECOMPOSITION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct MssReport {
    pub poly: Poly,
    pub roots: Vec<Complex64>,
    pub max_imag: f64,
    pub min_real: f64,
    pub max_real: f64,
    /// `(1 + sqrt(eps_trace))^2`.
    pub bound: f64,
    pub passed: bool,
}

/// Checks that the mixed characteristic polynomial of a PSD decomposition of
/// the identity has real roots in `[0, (1 + sqrt(eps_trace))^2]`.
pub fn mss_root_check(matrices: &[SymmetricMatrix], eps_trace: f64, settings: &Settings) -> Result<MssReport> {
    let Some(first) = matrices.first() else {
        return input("need at least one matrix");
    };
    let n = first.dim();
    if matrices.iter().any(|a| a.dim() != n) {
        return input("matrices must share one dimension");
    }
    if !(eps_trace > 0.0) {
        return domain(format!("trace bound {eps_trace} must be positive"));
    }
    for (k, a) in matrices.iter().enumerate() {
        if a.min_eigenvalue() < -DECOMPOSITION_TOLERANCE {
            return domain(format!("matrix {k} is not positive semidefinite"));
        }
        if a.trace() > eps_trace + DECOMPOSITION_TOLERANCE {
            return domain(format!("matrix {k} has trace {} above {eps_trace}", a.trace()));
        }
    }
    let total = SymmetricMatrix::sum(matrices.iter()).expect("non-empty");
    let dev = total.sub(&SymmetricMatrix::identity(n)).operator_norm()?;
    if dev > DECOMPOSITION_TOLERANCE {
        return domain(format!("matrices sum to I only within {dev:e}"));
    }
    let complex: Vec<ComplexMatrix> = matrices.iter().map(SymmetricMatrix::to_complex).collect();
    let poly = mixed_char_poly(&complex, settings)?;
    let roots = poly.roots()?;
    let max_imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let min_real = roots.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let max_real = roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let bound = (1.0 + eps_trace.sqrt()).powi(2);
    let passed = max_imag <= MSS_TOLERANCE && min_real >= -MSS_TOLERANCE && max_real <= bound + MSS_TOLERANCE;
    Ok(MssReport { poly, roots, max_imag, min_real, max_real, bound, passed })
}
