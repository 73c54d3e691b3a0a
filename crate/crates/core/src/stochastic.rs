//! Doubly stochastic tuples: validation, scaling, and approximation of
//! `ln D(I + zQ_1, ..., I + zQ_n)` for `|z| < α0 n / 4`.
//!
//! A tuple `Q_1, ..., Q_n` of positive semidefinite `n x n` matrices is
//! doubly stochastic when `Σ Q_k = I` and `tr Q_k = 1` for every `k`.

use num_complex::Complex64;
use rand::Rng;

use crate::constants::constants;
use crate::derivatives::Settings;
use crate::error::{domain, input, Error, Result};
use crate::exact;
use crate::gen;
use crate::matrix::{ComplexMatrix, MatrixTuple, SymmetricMatrix};
use crate::polydisc::{interpolate_identity_perturbation, ZeroFreeReport, ZERO_THRESHOLD};
use crate::subsets::{falling_factorial, ln_factorial};
use crate::taylor::ApproxResult;

/// Validation tolerance required before approximating.
pub const DS_TOLERANCE: f64 = 1e-9;

/// Shrink factor applied to the open zero-free radius `α0 n / (4|z|)`.
const RADIUS_SAFETY: f64 = 1.0 - 1e-12;

/// Relative smallest-eigenvalue threshold for "positive definite" scaling input.
const PD_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DsReport {
    pub min_eigenvalues: Vec<f64>,
    pub traces: Vec<f64>,
    /// Operator norm of `Σ Q_k - I`.
    pub sum_deviation: f64,
    pub psd_violations: Vec<usize>,
    pub trace_violations: Vec<usize>,
    /// False when the tuple is not `n` matrices of dimension `n`.
    pub shape_ok: bool,
    pub passed: bool,
}

impl DsReport {
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.shape_ok {
            parts.push(format!("need {} matrices of dimension {}", self.traces.len(), self.traces.len()));
        }
        for &k in &self.psd_violations {
            parts.push(format!("matrix {k} has eigenvalue {:.17e}", self.min_eigenvalues[k]));
        }
        for &k in &self.trace_violations {
            parts.push(format!("matrix {k} has trace {:.17e}", self.traces[k]));
        }
        if parts.is_empty() && !self.passed {
            parts.push(format!("sum of matrices deviates from I by {:.17e}", self.sum_deviation));
        }
        parts.join("; ")
    }
}

pub fn is_doubly_stochastic(t: &MatrixTuple<SymmetricMatrix>, tol: f64) -> DsReport {
    let n = t.dim();
    let min_eigenvalues: Vec<f64> = t.iter().map(SymmetricMatrix::min_eigenvalue).collect();
    let traces: Vec<f64> = t.iter().map(SymmetricMatrix::trace).collect();
    let total = SymmetricMatrix::sum(t.iter()).expect("non-empty tuple");
    let sum_deviation = total.sub(&SymmetricMatrix::identity(n)).operator_norm().unwrap_or(f64::INFINITY);
    let psd_violations = (0..t.len()).filter(|&k| !(min_eigenvalues[k] >= -tol)).collect::<Vec<_>>();
    let trace_violations = (0..t.len()).filter(|&k| !((traces[k] - 1.0).abs() <= tol)).collect::<Vec<_>>();
    let shape_ok = t.len() == n;
    let passed = shape_ok && psd_violations.is_empty() && trace_violations.is_empty() && sum_deviation <= tol;
    DsReport { min_eigenvalues, traces, sum_deviation, psd_violations, trace_violations, shape_ok, passed }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000 }
    }
}

/// `A_k = ξ_k T Q_k T` with `T` symmetric positive definite and `Q` doubly stochastic.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingResult {
    pub transform: SymmetricMatrix,
    pub scales: Vec<f64>,
    pub ds_tuple: MatrixTuple<SymmetricMatrix>,
    pub residual: f64,
    pub iterations: usize,
}

impl ScalingResult {
    /// `ξ_k T Q_k T`.
    pub fn reconstruct(&self, k: usize) -> SymmetricMatrix {
        self.ds_tuple[k].congruence(&self.transform).scale(self.scales[k])
    }

    /// `Σ ln ξ_k + 2 ln det T`, so that `ln D(A) = log_factor + ln D(Q)`.
    pub fn log_factor(&self) -> f64 {
        let log_det_t: f64 = self.transform.eigenvalues().iter().map(|l| l.ln()).sum();
        self.scales.iter().map(|x| x.ln()).sum::<f64>() + 2.0 * log_det_t
    }
}

/// Alternating trace and sum normalization.
///
/// Starting from `ξ_k = tr A_k`, each round forms `S = Σ A_k / ξ_k`, sets
/// `T = S^{1/2}` and `Q_k = T^{-1} A_k T^{-1} / ξ_k` (so `Σ Q_k = I`), and
/// then absorbs the traces `ξ_k <- ξ_k tr Q_k`. The loop stops once
/// `max(|tr Q_k - 1|, ‖Σ Q_k - I‖) <= tol`.
pub fn scale_to_doubly_stochastic(a: &MatrixTuple<SymmetricMatrix>, opts: &ScalingOptions) -> Result<ScalingResult> {
    let n = a.dim();
    if a.len() != n {
        return input(format!("need {n} matrices of dimension {n}, got {}", a.len()));
    }
    for (k, m) in a.iter().enumerate() {
        let ev = m.eigenvalues();
        let top = ev[n - 1].abs().max(ev[0].abs());
        if !(ev[0] > PD_THRESHOLD * top) {
            return domain(format!("matrix {k} is not positive definite (smallest eigenvalue {:e})", ev[0]));
        }
    }
    let id = SymmetricMatrix::identity(n);
    let mut scales: Vec<f64> = a.iter().map(SymmetricMatrix::trace).collect();
    let mut residual = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let s = SymmetricMatrix::sum(a.iter().zip(&scales).map(|(m, x)| m.scale(1.0 / x)).collect::<Vec<_>>().iter())
            .expect("non-empty");
        let inv_sqrt = s.spectral_map(|l| 1.0 / l.sqrt());
        let qs: Vec<SymmetricMatrix> = a.iter().zip(&scales).map(|(m, x)| m.congruence(&inv_sqrt).scale(1.0 / x)).collect();
        let traces: Vec<f64> = qs.iter().map(SymmetricMatrix::trace).collect();
        let trace_dev = traces.iter().map(|t| (t - 1.0).abs()).fold(0.0, f64::max);
        let sum_dev = SymmetricMatrix::sum(qs.iter()).expect("non-empty").sub(&id).operator_norm()?;
        residual = trace_dev.max(sum_dev);
        if residual <= opts.tol {
            return Ok(ScalingResult {
                transform: s.spectral_map(f64::sqrt),
                scales,
                ds_tuple: MatrixTuple::new(qs)?,
                residual,
                iterations: iter,
            });
        }
        for (x, t) in scales.iter_mut().zip(&traces) {
            *x *= t;
        }
    }
    Err(Error::Convergence { iterations: opts.max_iter, residual })
}

/// The open radius `α0 n / 4` inside which `D(I + zQ)` has no zeros.
pub fn zero_free_radius(n: usize) -> f64 {
    constants().alpha0 * n as f64 / 4.0
}

/// Approximates `ln D(I + zQ_1, ..., I + zQ_n)` within `eps` for a doubly
/// stochastic tuple and `|z| < α0 n / 4`.
pub fn approx_log_mixed_disc_ds(
    t: &MatrixTuple<SymmetricMatrix>,
    z: Complex64,
    eps: f64,
    settings: &Settings,
) -> Result<ApproxResult> {
    let report = is_doubly_stochastic(t, DS_TOLERANCE);
    if !report.passed {
        return domain(format!("tuple is not doubly stochastic: {}", report.describe()));
    }
    let n = t.dim();
    let radius = zero_free_radius(n);
    if !(z.norm() < radius) {
        return domain(format!(
            "|z| = {:.17e} is not below the zero-free radius alpha0 n / 4 = {radius:.17e}",
            z.norm()
        ));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(ApproxResult {
            log_value: Complex64::new(ln_factorial(n), 0.0),
            degree: 0,
            truncation_bound: 0.0,
            beta: f64::INFINITY,
            n,
            derivative_orders: 0,
            rounding_estimate: 0.0,
        });
    }
    let beta = radius / z.norm() * RADIUS_SAFETY;
    if !(beta > 1.0) {
        return domain(format!("|z| = {:e} is too close to the zero-free radius", z.norm()));
    }
    let a: Vec<ComplexMatrix> = t.iter().map(|q| q.to_complex().scale(z)).collect();
    interpolate_identity_perturbation(&a, beta, eps, settings)
}

/// Approximates `ln D((1-γ)C + γX)` for a doubly stochastic `X`, where
/// `C = (I/n, ..., I/n)` is the center of the doubly stochastic body.
///
/// Uses `D((1-γ)I/n + γX_k) = ((1-γ)/n)^n D(I + zX_k)` with `z = γn/(1-γ)`.
pub fn approx_log_contracted(
    x: &MatrixTuple<SymmetricMatrix>,
    gamma: f64,
    eps: f64,
    settings: &Settings,
) -> Result<ApproxResult> {
    let limit = constants().ds_radius_factor();
    if !(0.0..1.0).contains(&gamma) || !(gamma / (1.0 - gamma) < limit) {
        return domain(format!("contraction gamma = {gamma} needs gamma / (1 - gamma) < alpha0 / 4 = {limit:.17e}"));
    }
    let n = x.dim();
    let z = gamma * n as f64 / (1.0 - gamma);
    let mut r = approx_log_mixed_disc_ds(x, Complex64::new(z, 0.0), eps, settings)?;
    r.log_value += n as f64 * ((1.0 - gamma) / n as f64).ln();
    Ok(r)
}

/// The contracted tuple `(1-γ)C + γX`.
pub fn contracted_tuple(x: &MatrixTuple<SymmetricMatrix>, gamma: f64) -> MatrixTuple<SymmetricMatrix> {
    let n = x.dim();
    let center = SymmetricMatrix::scaled_identity(n, (1.0 - gamma) / n as f64);
    MatrixTuple::new(x.iter().map(|q| center.add(&q.scale(gamma))).collect()).expect("same dimensions")
}

/// Exact `D(I + zQ_1, ..., I + zQ_n)`.
pub fn exact_identity_perturbation(t: &MatrixTuple<SymmetricMatrix>, z: Complex64) -> Result<Complex64> {
    let n = t.dim();
    let id = ComplexMatrix::identity(n);
    let ms = t.iter().map(|q| id.add(&q.to_complex().scale(z))).collect();
    exact::mixed_discriminant(&MatrixTuple::new(ms)?)
}

/// Samples random doubly stochastic tuples and evaluates `D(I + zQ)` exactly
/// on `grid` radii times `grid` angles inside `|z| < α0 n / 4`.
pub fn verify_zero_free_ds(n: usize, samples: usize, grid: usize, seed: u64) -> Result<ZeroFreeReport> {
    if n == 0 || grid == 0 {
        return input("n and grid must be positive");
    }
    let radius = zero_free_radius(n) * RADIUS_SAFETY;
    let scale = falling_factorial(n, n);
    let (mut min_mod, mut zeros, mut evaluations) = (f64::INFINITY, 0, 0);
    for s in 0..samples {
        let sample_seed = gen::derive_seed(seed, s as u64);
        let t = gen::ds_tuple(n, sample_seed)?;
        let mut r = gen::rng(gen::derive_seed(sample_seed, 1));
        for i in 1..=grid {
            let rad = radius * i as f64 / grid as f64;
            for j in 0..grid {
                let angle = std::f64::consts::TAU * (j as f64 + r.random::<f64>()) / grid as f64;
                let d = exact_identity_perturbation(&t, Complex64::from_polar(rad, angle))?;
                let rel = d.norm() / scale;
                evaluations += 1;
                min_mod = min_mod.min(rel);
                if rel <= ZERO_THRESHOLD {
                    zeros += 1;
                }
            }
        }
    }
    Ok(ZeroFreeReport { n, evaluations, min_normalized_modulus: min_mod, zeros, threshold: ZERO_THRESHOLD })
}
