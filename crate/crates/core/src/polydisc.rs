//! Approximation of `ln D(I + z_1 Q_1, ..., I + z_n Q_n)` for real symmetric
//! `Q_k` with `‖Q_k‖ <= γ0` and `|z_k| <= rho < 1`.
//!
//! With `A_k = z_k Q_k`, the polynomial `g(t) = D(I + tA_1, ..., I + tA_n)`
//! has no zeros for `|t| <= 1/rho`, so its logarithm is interpolated from
//! `t = 0` to `t = 1` with `β = 1/rho`.

use num_complex::Complex64;

use crate::constants::GAMMA0;
use crate::derivatives::{padded_subset_sums, Settings};
use crate::error::{domain, input, resource, Result};
use crate::exact;
use crate::gen;
use crate::matrix::{ComplexMatrix, MatrixTuple, SymmetricMatrix};
use crate::subsets::{falling_factorial, ln_factorial};
use crate::taylor::{degree_for_accuracy, taylor_log_at_one, ApproxResult, DerivativeSequence};

/// Slack allowed on `‖Q_k‖ <= γ0`.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct PolydiscInstance {
    pub tuple: MatrixTuple<SymmetricMatrix>,
    pub points: Vec<Complex64>,
    pub rho: f64,
    pub eps: f64,
}

impl PolydiscInstance {
    /// Checks shapes only; see [`check_domain`] for the norm and radius conditions.
    pub fn new(tuple: MatrixTuple<SymmetricMatrix>, points: Vec<Complex64>, rho: f64, eps: f64) -> Result<Self> {
        let n = tuple.dim();
        if tuple.len() != n {
            return input(format!("need {n} matrices of dimension {n}, got {}", tuple.len()));
        }
        if points.len() != n {
            return input(format!("need {n} points, got {}", points.len()));
        }
        if points.iter().any(|z| !z.is_finite()) {
            return input("non-finite point");
        }
        Ok(Self { tuple, points, rho, eps })
    }

    pub fn dim(&self) -> usize {
        self.tuple.dim()
    }

    /// The tuple `(I + z_1 Q_1, ..., I + z_n Q_n)`.
    pub fn perturbed_tuple(&self) -> MatrixTuple {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let ms = self
            .tuple
            .iter()
            .zip(&self.points)
            .map(|(q, &z)| id.add(&q.to_complex().scale(z)))
            .collect();
        MatrixTuple::new(ms).expect("same dimensions")
    }
}

/// Per-matrix and per-point validity of a [`PolydiscInstance`].
#[derive(Clone, Debug, PartialEq)]
pub struct DomainReport {
    pub norms: Vec<f64>,
    /// Indices (0-based) of matrices with `‖Q_k‖ > γ0 + NORM_TOLERANCE`.
    pub norm_violations: Vec<usize>,
    pub point_moduli: Vec<f64>,
    /// Indices (0-based) of points with `|z_k| > rho`.
    pub point_violations: Vec<usize>,
    /// Problems with `rho` or `eps` themselves.
    pub parameter_errors: Vec<String>,
    pub passed: bool,
}

impl DomainReport {
    pub fn describe(&self) -> String {
        let mut parts = self.parameter_errors.clone();
        for &k in &self.norm_violations {
            parts.push(format!("matrix {k} has operator norm {:.17e} > gamma0 = {GAMMA0}", self.norms[k]));
        }
        for &k in &self.point_violations {
            parts.push(format!("point {k} has modulus {:.17e} > rho", self.point_moduli[k]));
        }
        parts.join("; ")
    }
}

pub fn check_domain(inst: &PolydiscInstance) -> DomainReport {
    let norms: Vec<f64> = inst.tuple.iter().map(|q| q.operator_norm().unwrap_or(f64::INFINITY)).collect();
    let norm_violations = (0..norms.len()).filter(|&k| !(norms[k] <= GAMMA0 + NORM_TOLERANCE)).collect::<Vec<_>>();
    let point_moduli: Vec<f64> = inst.points.iter().map(|z| z.norm()).collect();
    let point_violations = (0..point_moduli.len())
        .filter(|&k| !(point_moduli[k] <= inst.rho))
        .collect::<Vec<_>>();
    let mut parameter_errors = Vec::new();
    if !(inst.rho > 0.0 && inst.rho < 1.0) {
        parameter_errors.push(format!("rho = {} must lie in (0, 1)", inst.rho));
    }
    if !(inst.eps > 0.0 && inst.eps < 1.0) {
        parameter_errors.push(format!("eps = {} must lie in (0, 1)", inst.eps));
    }
    let passed = norm_violations.is_empty() && point_violations.is_empty() && parameter_errors.is_empty();
    DomainReport { norms, norm_violations, point_moduli, point_violations, parameter_errors, passed }
}

/// Approximates `ln D(I + z_1 Q_1, ..., I + z_n Q_n)` within `eps`.
pub fn approx_log_mixed_discriminant(inst: &PolydiscInstance, settings: &Settings) -> Result<ApproxResult> {
    let report = check_domain(inst);
    if !report.passed {
        return domain(report.describe());
    }
    let a: Vec<ComplexMatrix> = inst
        .tuple
        .iter()
        .zip(&inst.points)
        .map(|(q, &z)| q.to_complex().scale(z))
        .collect();
    interpolate_identity_perturbation(&a, 1.0 / inst.rho, inst.eps, settings)
}

/// Interpolates `ln D(I + tA_1, ..., I + tA_n)` from `t = 0` to `t = 1`, given
/// that it has no zeros for `|t| < beta`.
pub(crate) fn interpolate_identity_perturbation(
    a: &[ComplexMatrix],
    beta: f64,
    eps: f64,
    settings: &Settings,
) -> Result<ApproxResult> {
    let n = a.len();
    let m = degree_for_accuracy(n, beta, eps)?;
    if m > settings.limits.max_taylor_degree {
        return resource(format!(
            "accuracy {eps:e} needs Taylor degree {m}, cap is {}",
            settings.limits.max_taylor_degree
        ));
    }
    let derivs = normalized_derivatives(a, m.min(n), settings)?;
    // g(0) = n! is folded in as ln n! so that large n cannot overflow.
    let seq = DerivativeSequence::new(Complex64::new(1.0, 0.0), derivs)?.with_degree(m);
    let mut result = taylor_log_at_one(&seq, n, beta)?;
    result.log_value += ln_factorial(n);
    Ok(result)
}

/// `g^(k)(0) / (k! g(0))` for `k = 1..=orders`, where
/// `g(t) = D(I + tA_1, ..., I + tA_n)` and `g(0) = n!`.
pub fn normalized_derivatives(a: &[ComplexMatrix], orders: usize, settings: &Settings) -> Result<Vec<Complex64>> {
    let n = a.len();
    let sums = padded_subset_sums(a, n, orders, settings)?;
    Ok((1..=orders).map(|k| sums[k] / falling_factorial(n, k)).collect())
}

/// Exact `ln D(I + z_k Q_k)` (principal branch), for moderate `n`.
pub fn exact_log_mixed_discriminant(inst: &PolydiscInstance) -> Result<Complex64> {
    Ok(exact::mixed_discriminant(&inst.perturbed_tuple())?.ln())
}

/// How the sampled zero-free verification chooses points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSampling {
    /// Every `|z_k| = 1`.
    Boundary,
    /// Alternate between the unit circle and uniform points of the unit disc.
    Mixed,
}

/// Result of evaluating exact mixed discriminants at sampled points of a zero-free region.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroFreeReport {
    pub n: usize,
    pub evaluations: usize,
    /// Smallest `|D| / n!` seen.
    pub min_normalized_modulus: f64,
    /// Evaluations with `|D| <= threshold * n!`.
    pub zeros: usize,
    pub threshold: f64,
}

pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Samples tuples with `‖Q_k‖ <= γ0` and points of the closed unit polydisc.
///
/// Each sample draws one tuple and evaluates it at `grid` point vectors
/// whose angles are stratified over `grid` sectors.
pub fn verify_zero_free(n: usize, samples: usize, grid: usize, seed: u64, sampling: PointSampling) -> Result<ZeroFreeReport> {
    if n == 0 || grid == 0 {
        return input("n and grid must be positive");
    }
    let mut min_mod = f64::INFINITY;
    let mut zeros = 0;
    let mut evaluations = 0;
    let scale = falling_factorial(n, n);
    for s in 0..samples {
        let sample_seed = gen::derive_seed(seed, s as u64);
        let qs = (0..n)
            .map(|k| gen::symmetric_bounded(n, GAMMA0, gen::derive_seed(sample_seed, k as u64)))
            .collect::<Result<Vec<_>>>()?;
        let tuple = MatrixTuple::new(qs)?;
        let mut r = gen::rng(gen::derive_seed(sample_seed, n as u64));
        for j in 0..grid {
            let points: Vec<Complex64> = (0..n)
                .map(|_| {
                    use rand::Rng;
                    let angle = std::f64::consts::TAU * (j as f64 + r.random::<f64>()) / grid as f64;
                    let radius = match sampling {
                        PointSampling::Mixed if j % 2 == 1 => (1.0 - r.random::<f64>()).sqrt(),
                        _ => 1.0,
                    };
                    Complex64::from_polar(radius, angle)
                })
                .collect();
            let inst = PolydiscInstance::new(tuple.clone(), points, 1.0, 0.5)?;
            let d = exact::mixed_discriminant(&inst.perturbed_tuple())?;
            let rel = d.norm() / scale;
            evaluations += 1;
            min_mod = min_mod.min(rel);
            if rel <= ZERO_THRESHOLD {
                zeros += 1;
            }
        }
    }
    Ok(ZeroFreeReport { n, evaluations, min_normalized_modulus: min_mod, zeros, threshold: ZERO_THRESHOLD })
}
