//! Taylor interpolation of `f = ln g` for a polynomial `g` that does not
//! vanish on a disc of radius `β > 1` around the origin.
//!
//! Everything here works with normalized coefficients `g^(k)(0) / (k! g(0))`
//! so that factorial-sized values such as `g(0) = n!` never appear.

use num_complex::Complex64;

use crate::error::{domain, input, Result};
use crate::sum::CompensatedSum;

/// The value `g(0)` together with `g^(k)(0) / (k! g(0))` for `k = 1..=m`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeSequence {
    g0: Complex64,
    normalized: Vec<Complex64>,
}

impl DerivativeSequence {
    pub fn new(g0: Complex64, normalized: Vec<Complex64>) -> Result<Self> {
        if g0 == Complex64::new(0.0, 0.0) || !g0.is_finite() {
            return domain("g(0) must be finite and nonzero");
        }
        if normalized.iter().any(|z| !z.is_finite()) {
            return input("non-finite derivative");
        }
        Ok(Self { g0, normalized })
    }

    /// From plain polynomial coefficients `c_0, c_1, ...`, truncated or
    /// zero-padded to `degree` normalized entries.
    pub fn from_coefficients(coeffs: &[Complex64], degree: usize) -> Result<Self> {
        let Some(&g0) = coeffs.first() else {
            return domain("empty coefficient list");
        };
        if g0 == Complex64::new(0.0, 0.0) {
            return domain("g(0) must be nonzero");
        }
        let normalized = (1..=degree)
            .map(|k| coeffs.get(k).map_or(Complex64::new(0.0, 0.0), |c| c / g0))
            .collect();
        Self::new(g0, normalized)
    }

    pub fn g0(&self) -> Complex64 {
        self.g0
    }

    pub fn normalized(&self) -> &[Complex64] {
        &self.normalized
    }

    /// Number of normalized entries, i.e. the Taylor degree `m`.
    pub fn degree(&self) -> usize {
        self.normalized.len()
    }

    /// Same sequence cut or zero-padded to exactly `m` entries.
    pub fn with_degree(mut self, m: usize) -> Self {
        self.normalized.resize(m, Complex64::new(0.0, 0.0));
        self
    }
}

/// Outcome of a Taylor-interpolation approximation of a logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult {
    /// Approximation of `ln g(1)` on the branch continuous along `[0, 1]`
    /// starting from the principal value of `ln g(0)`.
    pub log_value: Complex64,
    /// Taylor degree `m`.
    pub degree: usize,
    /// `n / (β^m (β - 1) (m + 1))`.
    pub truncation_bound: f64,
    /// Certified zero-free radius, `> 1` (infinite when `g` is constant).
    pub beta: f64,
    /// The degree bound `n` of `g` entering the truncation bound.
    pub n: usize,
    /// Number of derivative orders that had to be computed explicitly.
    /// Orders above `deg g` are zero and cost nothing.
    pub derivative_orders: usize,
    /// Rough size of the floating-point error in `log_value`. Diagnostic only;
    /// not part of `truncation_bound`.
    pub rounding_estimate: f64,
}

/// The truncation bound `n / (β^m (β - 1) (m + 1))`, evaluated in log space.
pub fn truncation_bound(n: usize, beta: f64, m: usize) -> f64 {
    if beta.is_infinite() {
        return 0.0;
    }
    let ln = (n as f64).ln() - m as f64 * beta.ln() - (beta - 1.0).ln() - ((m + 1) as f64).ln();
    ln.exp()
}

/// Smallest `m >= 0` whose truncation bound is at most `eps`.
pub fn degree_for_accuracy(n: usize, beta: f64, eps: f64) -> Result<usize> {
    if n == 0 {
        return input("degree bound n must be at least 1");
    }
    if !(beta > 1.0) {
        return domain(format!("zero-free radius beta = {beta} must exceed 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("accuracy eps = {eps} must lie in (0, 1)"));
    }
    if beta.is_infinite() {
        return Ok(0);
    }
    let target = eps.ln();
    let base = (n as f64).ln() - (beta - 1.0).ln();
    let step = beta.ln();
    let mut m = 0usize;
    while base - m as f64 * step - ((m + 1) as f64).ln() > target {
        m += 1;
    }
    Ok(m)
}

/// Taylor coefficients `f^(k)(0) / k!`, `k = 1..=m`, of `f = ln g`.
///
/// Solves the triangular system obtained from `g' = f' g` by forward
/// substitution: with `a_k = g^(k)(0)/(k! g(0))` and `c_k = f^(k)(0)/k!`,
/// `a_k = c_k + Σ_{i<k} (i/k) c_i a_{k-i}`.
pub fn log_derivatives(d: &DerivativeSequence) -> Vec<Complex64> {
    let a = &d.normalized;
    let m = a.len();
    // Past the last nonzero a_j the inner sum only needs j <= last.
    let last = a.iter().rposition(|z| *z != Complex64::new(0.0, 0.0)).map_or(0, |p| p + 1);
    let mut c = vec![Complex64::new(0.0, 0.0); m];
    for k in 1..=m {
        let mut acc = CompensatedSum::new();
        for j in 1..k.min(last + 1) {
            let i = k - j;
            acc.add(c[i - 1] * a[j - 1] * (i as f64));
        }
        let ak = if k <= last { a[k - 1] } else { Complex64::new(0.0, 0.0) };
        c[k - 1] = ak - acc.value() / k as f64;
    }
    c
}

/// Inverse of [`log_derivatives`]: rebuilds `a_k` from `c_k`.
pub fn normalized_from_log(c: &[Complex64]) -> Vec<Complex64> {
    let m = c.len();
    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for k in 1..=m {
        let mut acc = CompensatedSum::new();
        for i in 1..k {
            acc.add(c[i - 1] * a[k - i - 1] * (i as f64));
        }
        a[k - 1] = c[k - 1] + acc.value() / k as f64;
    }
    a
}

/// `ln g(0) + Σ_{k=1}^m f^(k)(0)/k!` without any admissibility check on `β`.
pub fn taylor_log_at_one_unchecked(d: &DerivativeSequence) -> Complex64 {
    let c = log_derivatives(d);
    let mut acc = CompensatedSum::new();
    acc.add(d.g0.ln());
    for ck in c {
        acc.add(ck);
    }
    acc.value()
}

/// `T_m(1)` with the truncation bound for a degree-`n` polynomial with no
/// zeros in `|z| < beta`.
pub fn taylor_log_at_one(d: &DerivativeSequence, n: usize, beta: f64) -> Result<ApproxResult> {
    if !(beta > 1.0) {
        return domain(format!("zero-free radius beta = {beta} must exceed 1"));
    }
    let c = log_derivatives(d);
    let ln_g0 = d.g0.ln();
    let mut acc = CompensatedSum::new();
    acc.add(ln_g0);
    let mut weight = ln_g0.norm();
    for (k, ck) in c.iter().enumerate() {
        acc.add(*ck);
        weight += (k + 2) as f64 * ck.norm();
    }
    Ok(ApproxResult {
        log_value: acc.value(),
        degree: d.degree(),
        truncation_bound: truncation_bound(n, beta, d.degree()),
        beta,
        n,
        derivative_orders: d.degree().min(n),
        rounding_estimate: 4.0 * f64::EPSILON * weight,
    })
}

/// Distance between two logarithms, ignoring multiples of `2πi`.
pub fn log_distance(a: Complex64, b: Complex64) -> f64 {
    let d = a - b;
    let two_pi = 2.0 * std::f64::consts::PI;
    let im = d.im - two_pi * (d.im / two_pi).round();
    Complex64::new(d.re, im).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_for_accuracy(1, 11.0, 0.2).unwrap(), 0);
        assert_eq!(degree_for_accuracy(2, 2.0, 0.011).unwrap(), 5);
        // Independent scan with direct powers.
        let beta: f64 = 10.0 / 9.0;
        let want = (0..).find(|&m| beta.powi(m) * (m + 1) as f64 >= 9e5).unwrap() as usize;
        assert_eq!(degree_for_accuracy(100, beta, 1e-3).unwrap(), want);
        assert!(degree_for_accuracy(3, 1.0, 0.1).is_err());
        assert!(degree_for_accuracy(3, 0.5, 0.1).is_err());
        assert!(degree_for_accuracy(3, 2.0, 1.0).is_err());
        assert_eq!(degree_for_accuracy(3, f64::INFINITY, 0.1).unwrap(), 0);
    }

    #[test]
    fn bound_values() {
        assert!((truncation_bound(2, 2.0, 4) - 0.025).abs() < 1e-15);
        assert!((truncation_bound(2, 2.0, 5) - 2.0 / 192.0).abs() < 1e-15);
    }

    #[test]
    fn constant_polynomial() {
        let d = DerivativeSequence::new(c(3.5), vec![c(0.0); 6]).unwrap();
        assert!(log_derivatives(&d).iter().all(|z| *z == c(0.0)));
        let r = taylor_log_at_one(&d, 1, 2.0).unwrap();
        assert!((r.log_value - c(3.5f64.ln())).norm() < 1e-15);
    }

    #[test]
    fn series_of_log_one_plus_z() {
        let d = DerivativeSequence::from_coefficients(&[c(1.0), c(1.0)], 8).unwrap();
        for (k, ck) in log_derivatives(&d).iter().enumerate() {
            let k = (k + 1) as f64;
            let want = if k as usize % 2 == 1 { 1.0 / k } else { -1.0 / k };
            assert!((ck - c(want)).norm() < 1e-15);
        }
        let v = taylor_log_at_one_unchecked(&d.with_degree(3));
        assert!((v - c(1.0 - 0.5 + 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn series_of_squared_factor() {
        let d = DerivativeSequence::from_coefficients(&[c(1.0), c(2.0), c(1.0)], 5).unwrap();
        let got = log_derivatives(&d);
        for (k, ck) in got.iter().enumerate() {
            let k = (k + 1) as f64;
            let sign = if k as usize % 2 == 1 { 1.0 } else { -1.0 };
            assert!((ck - c(2.0 * sign / k)).norm() < 1e-14);
        }
    }

    #[test]
    fn half_root_example() {
        // g(z) = (1 - z/2)^2
        let d = DerivativeSequence::from_coefficients(&[c(1.0), c(-1.0), c(0.25)], 5).unwrap();
        let r = taylor_log_at_one(&d, 2, 2.0).unwrap();
        let want: f64 = -2.0 * (1..=5).map(|k| 0.5f64.powi(k) / k as f64).sum::<f64>();
        assert!((r.log_value - c(want)).norm() < 1e-14);
        assert!((r.log_value.re + 1.37708).abs() < 1e-5);
        assert!((r.truncation_bound - 0.0104167).abs() < 1e-6);
        let err = (r.log_value.re + 2.0 * 2f64.ln()).abs();
        assert!(err <= r.truncation_bound && (err - 0.0092).abs() < 1e-4);
        assert!(taylor_log_at_one(&d, 2, 1.0).is_err());
    }

    #[test]
    fn zero_constant_term_rejected() {
        assert!(DerivativeSequence::new(c(0.0), vec![]).is_err());
        assert!(DerivativeSequence::from_coefficients(&[c(0.0), c(1.0)], 2).is_err());
    }

    #[test]
    fn wrapped_distance() {
        let a = Complex64::new(1.0, 0.1);
        let b = Complex64::new(1.0, 0.1 + 4.0 * std::f64::consts::PI);
        assert!(log_distance(a, b) < 1e-12);
    }

    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        // Π (1 - z/α)
        let mut p = vec![c(1.0)];
        for &r in roots {
            let mut next = vec![c(0.0); p.len() + 1];
            for (k, &pk) in p.iter().enumerate() {
                next[k] += pk;
                next[k + 1] -= pk / r;
            }
            p = next;
        }
        p
    }

    proptest! {
        #[test]
        fn bound_holds_for_known_roots(
            roots in prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), 1..=10),
            beta in 1.05f64..3.0,
            m in 0usize..40,
        ) {
            let roots: Vec<Complex64> = roots.iter().map(|&(u, th)| Complex64::from_polar(beta * (1.0 + 2.0 * u), th)).collect();
            let coeffs = poly_from_roots(&roots);
            let d = DerivativeSequence::from_coefficients(&coeffs, m).unwrap();
            let r = taylor_log_at_one(&d, roots.len(), beta).unwrap();
            let exact: Complex64 = roots.iter().map(|a| (c(1.0) - a.inv()).ln()).sum();
            prop_assert!((r.log_value - exact).norm() <= r.truncation_bound + 1e-12);
        }

        #[test]
        fn log_coefficients_round_trip(a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20)) {
            let a: Vec<Complex64> = a.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
            let d = DerivativeSequence::new(c(1.0), a.clone()).unwrap();
            let back = normalized_from_log(&log_derivatives(&d));
            for (x, y) in back.iter().zip(&a) {
                prop_assert!((x - y).norm() <= 1e-10 * (1.0 + y.norm()));
            }
        }

        #[test]
        fn degree_is_monotone(n in 1usize..200, beta in 1.01f64..5.0, e1 in 1e-9f64..0.9, e2 in 1e-9f64..0.9, db in 0.0f64..2.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(degree_for_accuracy(n, beta, hi).unwrap() <= degree_for_accuracy(n, beta, lo).unwrap());
            prop_assert!(degree_for_accuracy(n, beta + db, lo).unwrap() <= degree_for_accuracy(n, beta, lo).unwrap());
        }
    }
}
