//! Sums of identity-padded mixed discriminants over subsets of a matrix list.
//!
//! For `m` matrices `A_1, ..., A_m` of dimension `n` and an order `j`, the
//! quantity computed here is
//!
//! ```text
//! S_j = (1 / (n - j)!) Σ_{J ⊆ [m], |J| = j} D(I, ..., I, A_i : i ∈ J)
//! ```
//!
//! with `n - j` identity copies. These are the Taylor coefficients of
//! `D(I + zA_1, ..., I + zA_n)` (up to `(n - j)! / n!`) and the coefficients
//! of the mixed characteristic polynomial.
//!
//! Two routes are provided:
//!
//! * [`DerivativeMethod::SubsetEnumeration`] expands every padded mixed
//!   discriminant into `k x k` principal windows, costing
//!   `C(m, j) C(n, j) 2^j j^3` per order.
//! * [`DerivativeMethod::TruncatedPolarization`] uses
//!   `S_j = Σ_{T ⊆ [m], |T| <= j} (-1)^{j-|T|} C(m-|T|, j-|T|) e_j(Σ_{i∈T} A_i)`,
//!   where `e_j(M)` is the sum of the `j x j` principal minors of `M`. One
//!   characteristic polynomial per subset `T` serves every order at once,
//!   for a total of `Σ_{t <= j} C(m, t)` evaluations of cost `O(n^3)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{input, resource, Result};
use crate::exact::polarize;
use crate::limits::Limits;
use crate::matrix::{principal_minor_sums_in_place, ComplexMatrix};
use crate::subsets::{binomial, combinations, CHUNK};
use crate::sum::CompensatedSum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DerivativeMethod {
    #[default]
    TruncatedPolarization,
    SubsetEnumeration,
}

impl std::str::FromStr for DerivativeMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "polarization" | "truncated-polarization" => Ok(Self::TruncatedPolarization),
            "subsets" | "subset-enumeration" => Ok(Self::SubsetEnumeration),
            other => Err(format!("unknown derivative method `{other}`")),
        }
    }
}

/// Knobs shared by every approximation routine.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Settings {
    pub method: DerivativeMethod,
    pub limits: Limits,
}

/// `S_0, ..., S_max_order` as defined in the module docs. Orders above
/// `min(n, m)` are zero.
pub fn padded_subset_sums(
    matrices: &[ComplexMatrix],
    n: usize,
    max_order: usize,
    settings: &Settings,
) -> Result<Vec<Complex64>> {
    if let Some(k) = matrices.iter().position(|a| a.dim() != n) {
        return input(format!("matrix {k} has dimension {}, expected {n}", matrices[k].dim()));
    }
    let m = matrices.len();
    let top = max_order.min(n).min(m);
    let mut out = match settings.method {
        DerivativeMethod::TruncatedPolarization => truncated_polarization(matrices, n, top, &settings.limits)?,
        DerivativeMethod::SubsetEnumeration => subset_enumeration(matrices, n, top, &settings.limits)?,
    };
    out.resize(max_order + 1, Complex64::new(0.0, 0.0));
    Ok(out)
}

/// Number of subset evaluations the chosen method needs up to `top`.
pub fn evaluation_count(method: DerivativeMethod, m: usize, n: usize, top: usize) -> f64 {
    let top = top.min(n).min(m);
    match method {
        DerivativeMethod::TruncatedPolarization => (0..=top).map(|t| binomial(m, t)).sum(),
        DerivativeMethod::SubsetEnumeration => (1..=top)
            .map(|j| binomial(m, j) * binomial(n, j) * 2f64.powi(j as i32))
            .sum(),
    }
}

fn check_cost(method: DerivativeMethod, m: usize, n: usize, top: usize, limits: &Limits) -> Result<()> {
    let cost = evaluation_count(method, m, n, top);
    if cost > limits.max_subset_evaluations as f64 {
        return resource(format!(
            "derivatives up to order {top} need {cost:.3e} subset evaluations, cap is {}",
            limits.max_subset_evaluations
        ));
    }
    Ok(())
}

fn truncated_polarization(matrices: &[ComplexMatrix], n: usize, top: usize, limits: &Limits) -> Result<Vec<Complex64>> {
    let m = matrices.len();
    check_cost(DerivativeMethod::TruncatedPolarization, m, n, top, limits)?;
    let subsets: Vec<Vec<usize>> = (0..=top).flat_map(|t| combinations(m, t)).collect();
    let partials: Vec<Vec<CompensatedSum>> = subsets
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![CompensatedSum::new(); top + 1];
            let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
            for t_set in chunk {
                buf.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
                for &i in t_set {
                    for (b, a) in buf.iter_mut().zip(matrices[i].as_slice()) {
                        *b += a;
                    }
                }
                let e = principal_minor_sums_in_place(&mut buf, n);
                let t = t_set.len();
                for (j, slot) in acc.iter_mut().enumerate().skip(t) {
                    let w = binomial(m - t, j - t);
                    let w = if (j - t) % 2 == 0 { w } else { -w };
                    slot.add(e[j] * w);
                }
            }
            acc
        })
        .collect();
    Ok(reduce(partials, top))
}

fn subset_enumeration(matrices: &[ComplexMatrix], n: usize, top: usize, limits: &Limits) -> Result<Vec<Complex64>> {
    let m = matrices.len();
    check_cost(DerivativeMethod::SubsetEnumeration, m, n, top, limits)?;
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for j in 1..=top {
        let windows = combinations(n, j);
        let picks = combinations(m, j);
        let partials: Vec<Vec<CompensatedSum>> = picks
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = CompensatedSum::new();
                for pick in chunk {
                    for w in &windows {
                        let subs: Vec<ComplexMatrix> = pick
                            .iter()
                            .map(|&i| matrices[i].principal_submatrix(w).expect("in range"))
                            .collect();
                        acc.add(polarize(&subs));
                    }
                }
                vec![acc]
            })
            .collect();
        out.push(reduce(partials, 0)[0]);
    }
    Ok(out)
}

fn reduce(partials: Vec<Vec<CompensatedSum>>, top: usize) -> Vec<Complex64> {
    let mut total = vec![CompensatedSum::new(); top + 1];
    for p in &partials {
        for (t, q) in total.iter_mut().zip(p) {
            t.merge(q);
        }
    }
    total.iter().map(CompensatedSum::value).collect()
}
