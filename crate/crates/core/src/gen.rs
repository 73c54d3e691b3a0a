//! Seeded instance generators.
//!
//! Every generator is a pure function of its parameters and a `u64` seed.
//! Randomness comes from ChaCha8 in counter mode, so instances are identical
//! across platforms and builds.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::GAMMA0;
use crate::error::{domain, input, Result};
use crate::matrix::{ComplexMatrix, MatrixTuple, SymmetricMatrix};
use crate::polydisc::PolydiscInstance;
use crate::stochastic::{scale_to_doubly_stochastic, ScalingOptions};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-seed for stream `index` of `seed` (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn signed_unit(r: &mut ChaCha8Rng) -> f64 {
    2.0 * r.random::<f64>() - 1.0
}

/// Uniform in `(0, 1]`.
fn open_unit(r: &mut ChaCha8Rng) -> f64 {
    1.0 - r.random::<f64>()
}

fn random_symmetric(r: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = signed_unit(r);
            data[i * n + j] = x;
            data[j * n + i] = x;
        }
    }
    SymmetricMatrix::new(n, data).expect("finite symmetric data")
}

/// `G G^T / cols` for a random `n x cols` matrix `G`.
fn random_gram(r: &mut ChaCha8Rng, n: usize, cols: usize) -> SymmetricMatrix {
    let g: Vec<f64> = (0..n * cols).map(|_| signed_unit(r)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = (0..cols).map(|c| g[i * cols + c] * g[j * cols + c]).sum::<f64>() / cols as f64;
        }
    }
    SymmetricMatrix::new(n, data).expect("finite symmetric data")
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return input("dimension must be at least 1");
    }
    Ok(())
}

/// Random symmetric matrix with operator norm `norm_bound * u`, `u` uniform in `(0, 1]`.
pub fn symmetric_bounded(n: usize, norm_bound: f64, seed: u64) -> Result<SymmetricMatrix> {
    check_dim(n)?;
    if !(norm_bound > 0.0 && norm_bound.is_finite()) {
        return domain(format!("norm bound {norm_bound} must be positive"));
    }
    let mut r = rng(seed);
    let m = random_symmetric(&mut r, n);
    let u = open_unit(&mut r);
    let norm = m.operator_norm()?;
    if norm == 0.0 {
        return Ok(SymmetricMatrix::scaled_identity(n, norm_bound * u));
    }
    Ok(m.scale(norm_bound * u / norm))
}

/// Random complex matrix with operator norm `norm_bound * u`, `u` uniform in `(0, 1]`.
pub fn complex_bounded(n: usize, norm_bound: f64, seed: u64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    if !(norm_bound > 0.0 && norm_bound.is_finite()) {
        return domain(format!("norm bound {norm_bound} must be positive"));
    }
    let mut r = rng(seed);
    let data = (0..n * n).map(|_| Complex64::new(signed_unit(&mut r), signed_unit(&mut r))).collect();
    let m = ComplexMatrix::new(n, data)?;
    let u = open_unit(&mut r);
    let norm = m.operator_norm()?;
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n).scale(Complex64::new(norm_bound * u, 0.0)));
    }
    Ok(m.scale(Complex64::new(norm_bound * u / norm, 0.0)))
}

/// Random real symmetric matrix (not Hermitian-complex) with the same norm law
/// as [`complex_bounded`], for real Gram-type instances.
pub fn real_bounded(n: usize, norm_bound: f64, seed: u64) -> Result<ComplexMatrix> {
    Ok(symmetric_bounded(n, norm_bound, seed)?.to_complex())
}

/// `n` positive definite `n x n` matrices `G G^T / n + 0.05 I`.
pub fn pd_tuple(n: usize, seed: u64) -> Result<MatrixTuple<SymmetricMatrix>> {
    check_dim(n)?;
    let mut r = rng(seed);
    let shift = SymmetricMatrix::scaled_identity(n, 0.05);
    let ms = (0..n).map(|_| random_gram(&mut r, n, n).add(&shift)).collect();
    MatrixTuple::new(ms)
}

/// A doubly stochastic tuple: a random positive definite tuple scaled to
/// satisfy `Σ Q_k = I`, `tr Q_k = 1`.
pub fn ds_tuple(n: usize, seed: u64) -> Result<MatrixTuple<SymmetricMatrix>> {
    let pd = pd_tuple(n, seed)?;
    Ok(scale_to_doubly_stochastic(&pd, &ScalingOptions::default())?.ds_tuple)
}

/// `m` positive semidefinite `n x n` matrices summing to the identity.
pub fn psd_decomposition_of_identity(n: usize, m: usize, seed: u64) -> Result<MatrixTuple<SymmetricMatrix>> {
    check_dim(n)?;
    if m == 0 {
        return input("need at least one matrix");
    }
    let mut r = rng(seed);
    let parts: Vec<SymmetricMatrix> = (0..m)
        .map(|_| {
            let rank = 1 + (r.random::<u32>() as usize) % n;
            random_gram(&mut r, n, rank).add(&SymmetricMatrix::scaled_identity(n, 1e-3))
        })
        .collect();
    let total = SymmetricMatrix::sum(parts.iter()).expect("non-empty");
    let inv_sqrt = total.spectral_map(|x| 1.0 / x.sqrt());
    MatrixTuple::new(parts.iter().map(|p| p.congruence(&inv_sqrt)).collect())
}

/// `n` points drawn uniformly from the closed disc of radius `rho`.
pub fn disc_points(n: usize, rho: f64, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let radius = rho * open_unit(&mut r).sqrt();
            let angle = std::f64::consts::TAU * r.random::<f64>();
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// `n` points on the circle of radius `rho` with uniform angles.
pub fn circle_points(n: usize, rho: f64, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..n).map(|_| Complex64::from_polar(rho, std::f64::consts::TAU * r.random::<f64>())).collect()
}

/// A random instance of the polydisc problem: `‖Q_k‖ <= γ0`, `|z_k| <= rho`.
pub fn polydisc_instance(n: usize, rho: f64, eps: f64, seed: u64) -> Result<PolydiscInstance> {
    check_dim(n)?;
    let qs = (0..n)
        .map(|k| symmetric_bounded(n, GAMMA0, derive_seed(seed, k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let points = disc_points(n, rho, derive_seed(seed, n as u64));
    PolydiscInstance::new(MatrixTuple::new(qs)?, points, rho, eps)
}
