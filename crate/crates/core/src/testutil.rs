//! Random fixtures for unit tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ComplexMatrix, SymmetricMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(r: &mut ChaCha8Rng) -> f64 {
    2.0 * r.random::<f64>() - 1.0
}

pub fn complex_matrix(r: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    let data = (0..n * n).map(|_| Complex64::new(unit(r), unit(r)) * scale).collect();
    ComplexMatrix::new(n, data).unwrap()
}

pub fn real_matrix(r: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    let data = (0..n * n).map(|_| Complex64::new(unit(r) * scale, 0.0)).collect();
    ComplexMatrix::new(n, data).unwrap()
}

pub fn real_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| unit(r)).collect()
}

pub fn real_symmetric(r: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x = unit(r);
            data[i * n + j] = x;
            data[j * n + i] = x;
        }
    }
    SymmetricMatrix::new(n, data).unwrap()
}
