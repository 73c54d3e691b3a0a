//! Power sums of principal minors, `Σ_S (det B_S)^m`, through
//! `φ(z) = Σ_S (det B_S)^m z^{|S|}`, which has no zeros in `|z| <= ρ^{-m}`
//! when `‖B‖ < ρ <= 1`.

use num_complex::Complex64;
use rand::Rng;

use crate::derivatives::Settings;
use crate::error::{domain, input, resource, Result};
use crate::exact;
use crate::gen;
use crate::limits::Limits;
use crate::matrix::{lu_determinant, ComplexMatrix, SymmetricMatrix};
use crate::polydisc::{ZeroFreeReport, ZERO_THRESHOLD};
use crate::subsets::{binomial, combinations, par_sum};
use crate::taylor::{degree_for_accuracy, taylor_log_at_one, ApproxResult, DerivativeSequence};

/// `φ^(k)(0) / k! = Σ_{|S| = k} (det B_S)^m` for `k = 1..=up_to`, with `g0 = 1`.
pub fn phi_derivatives(b: &ComplexMatrix, m: u32, up_to: usize, limits: &Limits) -> Result<DerivativeSequence> {
    let n = b.dim();
    if m == 0 {
        return input("power m must be at least 1");
    }
    if up_to > n {
        return input(format!("order {up_to} exceeds the dimension {n}"));
    }
    let cost: f64 = (1..=up_to).map(|k| binomial(n, k)).sum();
    if cost > limits.max_subset_evaluations as f64 {
        return resource(format!(
            "orders up to {up_to} need {cost:.3e} principal minors, cap is {}",
            limits.max_subset_evaluations
        ));
    }
    let normalized = (1..=up_to)
        .map(|k| {
            par_sum(&combinations(n, k), |s| {
                let mut buf = b.principal_submatrix(s).expect("in range").as_slice().to_vec();
                lu_determinant(&mut buf, k).powu(m)
            })
        })
        .collect();
    DerivativeSequence::new(Complex64::new(1.0, 0.0), normalized)
}

/// Approximates `ln Σ_S (det B_S)^m` within `eps` for `‖B‖ < rho < 1`.
pub fn approx_log_minor_power_sum(b: &ComplexMatrix, m: u32, rho: f64, eps: f64, settings: &Settings) -> Result<ApproxResult> {
    if m == 0 {
        return input("power m must be at least 1");
    }
    if !(rho > 0.0 && rho < 1.0) {
        return domain(format!("rho = {rho} must lie in (0, 1)"));
    }
    let norm = b.operator_norm()?;
    if !(norm < rho) {
        return domain(format!("operator norm {norm:.17e} is not below rho = {rho}"));
    }
    let n = b.dim();
    let beta = rho.powi(-(m as i32));
    let degree = degree_for_accuracy(n, beta, eps)?;
    if degree > settings.limits.max_taylor_degree {
        return resource(format!(
            "accuracy {eps:e} needs Taylor degree {degree}, cap is {}",
            settings.limits.max_taylor_degree
        ));
    }
    let seq = phi_derivatives(b, m, degree.min(n), &settings.limits)?.with_degree(degree);
    taylor_log_at_one(&seq, n, beta)
}

fn check_vectors(x: &[Vec<f64>]) -> Result<usize> {
    let n = x.len();
    if n == 0 {
        return input("need at least one vector");
    }
    if let Some(k) = x.iter().position(|v| v.len() != n) {
        return input(format!("vector {k} has length {}, expected {n}", x[k].len()));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return input("non-finite vector entry");
    }
    Ok(n)
}

/// Gram matrix `b_ij = <x_i, x_j>` of `n` vectors in `R^n`.
pub fn gram_from_rank2(x: &[Vec<f64>]) -> Result<ComplexMatrix> {
    let n = check_vectors(x)?;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    ComplexMatrix::from_real_rows(&rows)
}

/// Coordinate matrix `b_ij = <e_i, x_j>`, whose principal minors give
/// `D(e_1⊗e_1 + x_1⊗x_1, ..., e_n⊗e_n + x_n⊗x_n) = Σ_S (det B_S)^2`.
pub fn coordinate_matrix(x: &[Vec<f64>]) -> Result<ComplexMatrix> {
    let n = check_vectors(x)?;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| x[j][i]).collect()).collect();
    ComplexMatrix::from_real_rows(&rows)
}

/// The tuple `e_k⊗e_k + x_k⊗x_k`.
pub fn rank2_tuple(x: &[Vec<f64>]) -> Result<Vec<SymmetricMatrix>> {
    let n = check_vectors(x)?;
    (0..n)
        .map(|k| {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            Ok(SymmetricMatrix::outer_product(&e)?.add(&SymmetricMatrix::outer_product(&x[k])?))
        })
        .collect()
}

/// Samples `B` with `‖B‖ < 1` and evaluates `φ_{B,m}` exactly on `grid`
/// radii times `grid` angles of the closed unit disc.
pub fn verify_zero_free_minors(n: usize, m: u32, samples: usize, grid: usize, seed: u64) -> Result<ZeroFreeReport> {
    if n == 0 || grid == 0 || m == 0 {
        return input("n, m and grid must be positive");
    }
    let limits = Limits::default();
    let (mut min_mod, mut zeros, mut evaluations) = (f64::INFINITY, 0, 0);
    for s in 0..samples {
        let sample_seed = gen::derive_seed(seed, s as u64);
        let b = gen::complex_bounded(n, 1.0 - 1e-9, sample_seed)?;
        let seq = phi_derivatives(&b, m, n, &limits)?;
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        coeffs.extend_from_slice(seq.normalized());
        let mut r = gen::rng(gen::derive_seed(sample_seed, 1));
        for i in 1..=grid {
            let rad = i as f64 / grid as f64;
            for j in 0..grid {
                let angle = std::f64::consts::TAU * (j as f64 + r.random::<f64>()) / grid as f64;
                let z = Complex64::from_polar(rad, angle);
                let v = coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
                evaluations += 1;
                min_mod = min_mod.min(v.norm());
                if v.norm() <= ZERO_THRESHOLD {
                    zeros += 1;
                }
            }
        }
    }
    Ok(ZeroFreeReport { n, evaluations, min_normalized_modulus: min_mod, zeros, threshold: ZERO_THRESHOLD })
}

/// Exact `ln Σ_S (det B_S)^m` (principal branch).
pub fn exact_log_minor_power_sum(b: &ComplexMatrix, m: u32) -> Result<Complex64> {
    Ok(exact::minor_power_sum(b, m)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::MatrixTuple;
    use crate::taylor::log_distance;
    use crate::testutil::{complex_matrix, real_vector, rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn derivative_examples() {
        let lim = Limits::default();
        let d = phi_derivatives(&ComplexMatrix::zeros(3), 2, 3, &lim).unwrap();
        assert!(d.normalized().iter().all(|z| *z == c(0.0)));
        let b = ComplexMatrix::diagonal(&[c(0.5), c(-0.25), c(2.0)]).unwrap();
        let d = phi_derivatives(&b, 3, 1, &lim).unwrap();
        assert!((d.normalized()[0] - c(0.125 - 0.015625 + 8.0)).norm() < 1e-14);
        let b = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let d = phi_derivatives(&b, 1, 2, &lim).unwrap();
        assert!((d.normalized()[1] - c(-2.0)).norm() < 1e-14);
        assert!(phi_derivatives(&b, 1, 3, &lim).is_err());
    }

    #[test]
    fn approximation_examples() {
        let s = Settings::default();
        let r = approx_log_minor_power_sum(&ComplexMatrix::zeros(4), 2, 0.6, 1e-3, &s).unwrap();
        assert!(r.log_value.norm() < 1e-15);
        let b = ComplexMatrix::diagonal(&[c(0.5), c(0.5)]).unwrap();
        let r = approx_log_minor_power_sum(&b, 2, 0.6, 1e-4, &s).unwrap();
        assert!((r.log_value.re - 1.5625f64.ln()).abs() <= 1e-4);
        assert!(r.truncation_bound <= 1e-4);
        assert!(approx_log_minor_power_sum(&b, 2, 0.5, 1e-4, &s).is_err());
        let mut g = rng(3);
        let raw = complex_matrix(&mut g, 10, 1.0);
        let b = raw.scale(c(0.5 / raw.operator_norm().unwrap()));
        let r = approx_log_minor_power_sum(&b, 2, 0.6, 1e-3, &s).unwrap();
        assert!(log_distance(r.log_value, exact_log_minor_power_sum(&b, 2).unwrap()) <= 1e-3);
    }

    #[test]
    fn diagonal_closed_form() {
        let mut g = rng(11);
        for m in 1..=3 {
            let d: Vec<Complex64> = (0..12).map(|_| c(2.0 * g.random::<f64>() - 1.0)).collect();
            let want: Complex64 = d.iter().map(|x| 1.0 + x.powu(m)).product();
            let got = exact::minor_power_sum(&ComplexMatrix::diagonal(&d).unwrap(), m).unwrap();
            assert!((got - want).norm() <= 1e-12 * want.norm());
        }
    }

    #[test]
    fn rank2_examples() {
        let zero = vec![vec![0.0; 3]; 3];
        assert_eq!(gram_from_rank2(&zero).unwrap(), ComplexMatrix::zeros(3));
        let t = MatrixTuple::new(rank2_tuple(&zero).unwrap()).unwrap().to_complex();
        assert!((exact::mixed_discriminant(&t).unwrap() - 1.0).norm() < 1e-12);
        let e: Vec<Vec<f64>> = (0..3).map(|k| (0..3).map(|i| if i == k { 1.0 } else { 0.0 }).collect()).collect();
        let b = gram_from_rank2(&e).unwrap();
        assert_eq!(b, ComplexMatrix::identity(3));
        let t = MatrixTuple::new(rank2_tuple(&e).unwrap()).unwrap().to_complex();
        assert!((exact::mixed_discriminant(&t).unwrap() - 8.0).norm() < 1e-10);
        assert!((exact::minor_power_sum(&b, 2).unwrap() - 8.0).norm() < 1e-12);
        assert!(gram_from_rank2(&[vec![1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn gram_entries_are_scalar_products() {
        let x = vec![vec![1.0, 2.0], vec![-1.0, 0.5]];
        let b = gram_from_rank2(&x).unwrap();
        assert_eq!(b.get(0, 0), c(5.0));
        assert_eq!(b.get(0, 1), c(0.0));
        assert_eq!(b.get(1, 1), c(1.25));
    }

    #[test]
    fn coordinate_matrix_identity() {
        let mut g = rng(5);
        for n in 1..=6 {
            let x: Vec<Vec<f64>> = (0..n).map(|_| real_vector(&mut g, n)).collect();
            let t = MatrixTuple::new(rank2_tuple(&x).unwrap()).unwrap().to_complex();
            let lhs = exact::mixed_discriminant(&t).unwrap();
            let rhs = exact::minor_power_sum(&coordinate_matrix(&x).unwrap(), 2).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm(), "n = {n}");
        }
    }

    #[test]
    fn sampled_nonvanishing() {
        let r = verify_zero_free_minors(5, 2, 4, 6, 1).unwrap();
        assert_eq!(r.zeros, 0);
        assert_eq!(r.evaluations, 4 * 36);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn scaling_covariance(seed in 0u64..1000, rho in 0.3f64..0.95, m in 1u32..=3) {
            let mut g = rng(seed);
            let b = complex_matrix(&mut g, 5, 0.4);
            let lim = Limits::default();
            let base = phi_derivatives(&b, m, 5, &lim).unwrap();
            let scaled = phi_derivatives(&b.scale(c(1.0 / rho)), m, 5, &lim).unwrap();
            for k in 1..=5 {
                let want = base.normalized()[k - 1];
                let got = scaled.normalized()[k - 1] * rho.powi((m as usize * k) as i32);
                prop_assert!((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
            }
        }

        #[test]
        fn approximation_matches_exact(seed in 0u64..1000, n in 1usize..=8, m in 1u32..=3) {
            let mut g = rng(seed);
            let raw = complex_matrix(&mut g, n, 1.0);
            let b = raw.scale(c(0.5 * g.random::<f64>() / raw.operator_norm().unwrap()));
            let r = approx_log_minor_power_sum(&b, m, 0.6, 1e-3, &Settings::default()).unwrap();
            prop_assert!(log_distance(r.log_value, exact_log_minor_power_sum(&b, m).unwrap()) <= 1e-3);
        }
    }
}
