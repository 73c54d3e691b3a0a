//! Exponential-time exact evaluation: mixed discriminants, permanents,
//! identity-padded mixed discriminants and principal-minor power sums.
//!
//! These are the reference values every approximation is checked against.

use num_complex::Complex64;

use crate::error::{input, resource, Result};
use crate::limits::Limits;
use crate::matrix::{lu_determinant, ComplexMatrix, MatrixTuple};
use crate::subsets::{combinations, factorial, mask_members, par_sum, par_sum_range};
use crate::sum::CompensatedSum;

/// `D(A_1, ..., A_n)` by the polarization identity
/// `Σ_{S ⊆ [n]} (-1)^{n-|S|} det(Σ_{i∈S} A_i)`.
pub fn mixed_discriminant(tuple: &MatrixTuple) -> Result<Complex64> {
    mixed_discriminant_with(tuple, &Limits::default())
}

pub fn mixed_discriminant_with(tuple: &MatrixTuple, limits: &Limits) -> Result<Complex64> {
    let n = check_square_tuple(tuple)?;
    if n > limits.mixed_discriminant_max_n {
        return resource(format!(
            "exact mixed discriminant of dimension {n} exceeds the cap {}",
            limits.mixed_discriminant_max_n
        ));
    }
    let mats: Vec<&[Complex64]> = tuple.iter().map(ComplexMatrix::as_slice).collect();
    Ok(par_sum_range(1 << n, |mask| polarization_term(&mats, n, mask)))
}

/// `D(A_1, ..., A_n)` straight from the double permutation sum
/// `Σ_{σ,τ} sgn(στ) Π_i a^i_{τ(i)σ(i)}`. Only for very small `n`.
pub fn mixed_discriminant_by_permutations(tuple: &MatrixTuple, limits: &Limits) -> Result<Complex64> {
    let n = check_square_tuple(tuple)?;
    if n > limits.permutation_sum_max_n {
        return resource(format!(
            "permutation-sum mode of dimension {n} exceeds the cap {}",
            limits.permutation_sum_max_n
        ));
    }
    let perms = permutations_with_sign(n);
    let mut total = CompensatedSum::new();
    for (sigma, s_sign) in &perms {
        for (tau, t_sign) in &perms {
            let prod: Complex64 = (0..n).map(|i| tuple[i].get(tau[i], sigma[i])).product();
            total.add(prod * (s_sign * t_sign));
        }
    }
    Ok(total.value())
}

/// Permanent by Ryser's inclusion-exclusion formula, visiting subsets in
/// Gray-code order so each step updates the row sums by one column.
pub fn permanent(b: &ComplexMatrix) -> Result<Complex64> {
    permanent_with(b, &Limits::default())
}

pub fn permanent_with(b: &ComplexMatrix, limits: &Limits) -> Result<Complex64> {
    let n = b.dim();
    if n > limits.permanent_max_n {
        return resource(format!("permanent of dimension {n} exceeds the cap {}", limits.permanent_max_n));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = CompensatedSum::new();
    let mut gray: u64 = 0;
    for step in 1u64..(1 << n) {
        let col = step.trailing_zeros() as usize;
        gray ^= 1 << col;
        if gray >> col & 1 == 1 {
            for (i, r) in row_sums.iter_mut().enumerate() {
                *r += b.get(i, col);
            }
        } else {
            for (i, r) in row_sums.iter_mut().enumerate() {
                *r -= b.get(i, col);
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total.add(prod);
        } else {
            total.add(-prod);
        }
    }
    let value = total.value();
    Ok(if n.is_multiple_of(2) { value } else { -value })
}

/// `D(I, ..., I, A_1, ..., A_k)` with `n - k` identity copies, for `k`
/// matrices of dimension `n`:
/// `(n-k)! Σ_{|W|=k} D_k(A_1[W], ..., A_k[W])`.
pub fn padded_mixed_discriminant(matrices: &[ComplexMatrix], n: usize) -> Result<Complex64> {
    let k = matrices.len();
    if k > n {
        return input(format!("{k} matrices cannot be padded to dimension {n}"));
    }
    if let Some(j) = matrices.iter().position(|m| m.dim() != n) {
        return input(format!("matrix {j} has dimension {}, expected {n}", matrices[j].dim()));
    }
    let pad = factorial(n - k);
    if k == 0 {
        return Ok(Complex64::new(pad, 0.0));
    }
    let windows = combinations(n, k);
    let total = par_sum(&windows, |w| {
        let subs: Vec<ComplexMatrix> = matrices
            .iter()
            .map(|m| m.principal_submatrix(w).expect("window indices are in range"))
            .collect();
        polarize(&subs)
    });
    Ok(total * pad)
}

/// `Σ_{S ⊆ [n]} (det B_S)^m`, the empty set contributing 1.
pub fn minor_power_sum(b: &ComplexMatrix, m: u32) -> Result<Complex64> {
    minor_power_sum_with(b, m, &Limits::default())
}

pub fn minor_power_sum_with(b: &ComplexMatrix, m: u32, limits: &Limits) -> Result<Complex64> {
    let n = b.dim();
    if m == 0 {
        return input("power m must be at least 1");
    }
    if n > limits.minor_sum_max_n {
        return resource(format!("minor power sum of dimension {n} exceeds the cap {}", limits.minor_sum_max_n));
    }
    Ok(par_sum_range(1 << n, |mask| {
        let idx: Vec<usize> = mask_members(mask, n).collect();
        let mut buf: Vec<Complex64> = b.principal_submatrix(&idx).expect("in range").as_slice().to_vec();
        lu_determinant(&mut buf, idx.len()).powu(m)
    }))
}

/// Sequential polarization for `k` matrices of dimension `k`.
pub(crate) fn polarize(mats: &[ComplexMatrix]) -> Complex64 {
    let k = mats.len();
    let slices: Vec<&[Complex64]> = mats.iter().map(ComplexMatrix::as_slice).collect();
    let mut total = CompensatedSum::new();
    for mask in 1u64..(1 << k) {
        total.add(polarization_term(&slices, k, mask));
    }
    total.value()
}

fn polarization_term(mats: &[&[Complex64]], n: usize, mask: u64) -> Complex64 {
    if mask == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut sum = vec![Complex64::new(0.0, 0.0); n * n];
    for i in mask_members(mask, mats.len()) {
        for (s, a) in sum.iter_mut().zip(mats[i]) {
            *s += a;
        }
    }
    let det = lu_determinant(&mut sum, n);
    if (n - mask.count_ones() as usize).is_multiple_of(2) {
        det
    } else {
        -det
    }
}

fn check_square_tuple(tuple: &MatrixTuple) -> Result<usize> {
    let n = tuple.dim();
    if tuple.len() != n {
        return input(format!("mixed discriminant needs {n} matrices of dimension {n}, got {}", tuple.len()));
    }
    Ok(n)
}

/// All permutations of `0..n` with their signs, by Heap's algorithm
/// (each step is one transposition, so the sign alternates).
pub(crate) fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), 1.0)];
    let mut counters = vec![0usize; n];
    let mut sign = 1.0;
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymmetricMatrix;
    use crate::testutil::{complex_matrix, real_symmetric, rng};
    use itertools::Itertools;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300) + 1e-300
    }

    fn tuple(ms: Vec<ComplexMatrix>) -> MatrixTuple {
        MatrixTuple::new(ms).unwrap()
    }

    fn real(rows: &[Vec<f64>]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn diag(d: &[f64]) -> ComplexMatrix {
        SymmetricMatrix::diagonal(d).unwrap().to_complex()
    }

    #[test]
    fn identity_pair_gives_two() {
        let t = tuple(vec![ComplexMatrix::identity(2); 2]);
        assert!(close(mixed_discriminant(&t).unwrap(), c(2.0), 1e-15));
    }

    #[test]
    fn diagonal_pair_reduces_to_permanent() {
        let t = tuple(vec![diag(&[1.0, 2.0]), diag(&[3.0, 4.0])]);
        assert!(close(mixed_discriminant(&t).unwrap(), c(10.0), 1e-14));
    }

    #[test]
    fn rank_one_pair() {
        let x1 = SymmetricMatrix::outer_product(&[1.0, 1.0]).unwrap().to_complex();
        let x2 = SymmetricMatrix::outer_product(&[0.0, 1.0]).unwrap().to_complex();
        assert!(close(mixed_discriminant(&tuple(vec![x1, x2])).unwrap(), c(1.0), 1e-14));
    }

    #[test]
    fn mismatched_count_and_cap() {
        let t = tuple(vec![ComplexMatrix::identity(3); 2]);
        assert!(matches!(mixed_discriminant(&t), Err(crate::Error::Input(_))));
        let big = tuple(vec![ComplexMatrix::identity(15); 15]);
        assert!(matches!(mixed_discriminant(&big), Err(crate::Error::Resource(_))));
        let b = ComplexMatrix::identity(21);
        assert!(matches!(permanent(&b), Err(crate::Error::Resource(_))));
    }

    #[test]
    fn permanent_examples() {
        assert!(close(permanent(&ComplexMatrix::identity(5)).unwrap(), c(1.0), 1e-15));
        assert!(close(permanent(&real(&[vec![1.0, 2.0], vec![3.0, 4.0]])).unwrap(), c(10.0), 1e-15));
        assert!(close(permanent(&real(&vec![vec![1.0; 3]; 3])).unwrap(), c(6.0), 1e-15));
    }

    #[test]
    fn permanent_matches_permutation_sum() {
        let mut r = rng(7);
        for n in 1..=6 {
            let b = complex_matrix(&mut r, n, 1.0);
            let brute: Complex64 = (0..n)
                .permutations(n)
                .map(|p| (0..n).map(|i| b.get(i, p[i])).product::<Complex64>())
                .sum();
            assert!(close(permanent(&b).unwrap(), brute, 1e-12), "n = {n}");
        }
    }

    #[test]
    fn padded_examples() {
        assert!(close(padded_mixed_discriminant(&[], 3).unwrap(), c(6.0), 1e-15));
        assert!(close(padded_mixed_discriminant(&[diag(&[1.0, 2.0])], 2).unwrap(), c(3.0), 1e-14));
        let mut r = rng(3);
        let ms: Vec<ComplexMatrix> = (0..3).map(|_| complex_matrix(&mut r, 3, 1.0)).collect();
        let full = mixed_discriminant(&tuple(ms.clone())).unwrap();
        assert!(close(padded_mixed_discriminant(&ms, 3).unwrap(), full, 1e-12));
        assert!(padded_mixed_discriminant(&ms, 2).is_err());
    }

    #[test]
    fn padded_agrees_with_explicit_identities() {
        let mut r = rng(11);
        for (n, k) in [(4, 1), (4, 2), (5, 3), (3, 2)] {
            let ms: Vec<ComplexMatrix> = (0..k).map(|_| complex_matrix(&mut r, n, 1.0)).collect();
            let mut full = vec![ComplexMatrix::identity(n); n - k];
            full.extend(ms.iter().cloned());
            let want = mixed_discriminant(&tuple(full)).unwrap();
            assert!(close(padded_mixed_discriminant(&ms, n).unwrap(), want, 1e-11), "n={n} k={k}");
        }
    }

    #[test]
    fn single_padded_matrix_is_scaled_trace() {
        let mut r = rng(5);
        let a = complex_matrix(&mut r, 5, 1.0);
        let want = a.trace() * factorial(4);
        assert!(close(padded_mixed_discriminant(&[a], 5).unwrap(), want, 1e-12));
    }

    #[test]
    fn minor_power_sum_examples() {
        assert!(close(minor_power_sum(&ComplexMatrix::zeros(4), 3).unwrap(), c(1.0), 1e-15));
        assert!(close(minor_power_sum(&diag(&[0.5, 0.5]), 2).unwrap(), c(1.5625), 1e-15));
        let b = ComplexMatrix::new(1, vec![Complex64::new(0.3, -0.2)]).unwrap();
        let want = c(1.0) + Complex64::new(0.3, -0.2).powu(3);
        assert!(close(minor_power_sum(&b, 3).unwrap(), want, 1e-15));
        assert!(minor_power_sum(&b, 0).is_err());
    }

    #[test]
    fn polarization_matches_permutation_sum() {
        let mut r = rng(1);
        let limits = Limits::default();
        for n in 1..=5 {
            let t = tuple((0..n).map(|_| complex_matrix(&mut r, n, 1.0)).collect());
            let a = mixed_discriminant(&t).unwrap();
            let b = mixed_discriminant_by_permutations(&t, &limits).unwrap();
            assert!(close(a, b, 1e-10), "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn symmetric_under_reordering() {
        let mut r = rng(2);
        for n in 2..=5 {
            let ms: Vec<ComplexMatrix> = (0..n).map(|_| complex_matrix(&mut r, n, 1.0)).collect();
            let base = mixed_discriminant(&tuple(ms.clone())).unwrap();
            let mut rev = ms.clone();
            rev.reverse();
            let mut rot = ms.clone();
            rot.rotate_left(1);
            for other in [rev, rot] {
                assert!(close(mixed_discriminant(&tuple(other)).unwrap(), base, 1e-10));
            }
        }
    }

    #[test]
    fn multilinear_and_homogeneous() {
        let mut r = rng(4);
        for n in 2..=5 {
            let ms: Vec<ComplexMatrix> = (0..n).map(|_| complex_matrix(&mut r, n, 1.0)).collect();
            let x = complex_matrix(&mut r, n, 1.0);
            let y = complex_matrix(&mut r, n, 1.0);
            let (a, b) = (Complex64::new(0.7, -0.3), Complex64::new(-1.2, 0.4));
            let with = |first: ComplexMatrix| {
                let mut v = ms.clone();
                v[0] = first;
                mixed_discriminant(&tuple(v)).unwrap()
            };
            let lhs = with(x.scale(a).add(&y.scale(b)));
            let rhs = with(x.clone()) * a + with(y.clone()) * b;
            assert!(close(lhs, rhs, 1e-10), "n = {n}");
            let scaled = with(x.scale(c(2.5)));
            assert!(close(scaled, with(x) * 2.5, 1e-12));
        }
    }

    #[test]
    fn diagonal_tuples_reduce_to_permanents() {
        let mut r = rng(9);
        for n in 1..=8 {
            let b = crate::testutil::real_matrix(&mut r, n, 1.0);
            let t = tuple((0..n).map(|k| diag(&b.rows()[k].iter().map(|z| z.re).collect::<Vec<_>>())).collect());
            assert!(close(mixed_discriminant(&t).unwrap(), permanent(&b).unwrap(), 1e-10), "n = {n}");
        }
    }

    #[test]
    fn rank_one_identity() {
        let mut r = rng(12);
        for n in 1..=6 {
            let cols = crate::testutil::real_matrix(&mut r, n, 1.0);
            let xs: Vec<Vec<f64>> = (0..n).map(|k| (0..n).map(|i| cols.get(i, k).re).collect()).collect();
            let t = tuple(xs.iter().map(|x| SymmetricMatrix::outer_product(x).unwrap().to_complex()).collect());
            let det = cols.determinant();
            assert!(close(mixed_discriminant(&t).unwrap(), det * det, 1e-10), "n = {n}");
        }
    }

    #[test]
    fn set_sum_identity() {
        let mut r = rng(13);
        for n in 1..=4 {
            let sets: Vec<Vec<Vec<f64>>> = (0..n)
                .map(|k| (0..(k % 3 + 1)).map(|_| crate::testutil::real_vector(&mut r, n)).collect())
                .collect();
            let t = tuple(
                sets.iter()
                    .map(|s| {
                        SymmetricMatrix::sum(s.iter().map(|x| SymmetricMatrix::outer_product(x).unwrap()).collect::<Vec<_>>().iter())
                            .unwrap()
                            .to_complex()
                    })
                    .collect(),
            );
            let mut want = Complex64::new(0.0, 0.0);
            for choice in sets.iter().map(|s| s.iter()).multi_cartesian_product() {
                let m = ComplexMatrix::from_real_rows(
                    &(0..n).map(|i| choice.iter().map(|x| x[i]).collect()).collect::<Vec<_>>(),
                )
                .unwrap();
                let d = m.determinant();
                want += d * d;
            }
            assert!(close(mixed_discriminant(&t).unwrap(), want, 1e-10), "n = {n}");
        }
    }

    #[test]
    fn psd_tuples_have_nonnegative_discriminant() {
        let mut r = rng(14);
        for n in 1..=5 {
            let t = tuple((0..n).map(|_| {
                let s = real_symmetric(&mut r, n);
                s.congruence(&SymmetricMatrix::identity(n)).spectral_map(f64::abs).to_complex()
            }).collect());
            let d = mixed_discriminant(&t).unwrap();
            assert!(d.re >= -1e-12 && d.im.abs() < 1e-10);
        }
    }

    #[test]
    fn heap_signs_match_inversion_parity() {
        for (p, s) in permutations_with_sign(5) {
            let inv = (0..5).flat_map(|i| ((i + 1)..5).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(s, if inv % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_eq!(permutations_with_sign(5).len(), 120);
    }
}
