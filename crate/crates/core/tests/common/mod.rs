#![allow(dead_code)]

use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tjusim_core::{Basis, Operator};

pub fn full(sites: usize) -> Arc<Basis> {
    Arc::new(Basis::full(sites).unwrap())
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Array1<C64> {
    let v: Array1<C64> = (0..dim)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.mapv(|z| z / n)
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, basis: &Arc<Basis>) -> Operator {
    let n = basis.dim();
    let a = Array2::from_shape_fn((n, n), |_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let h = &a + &a.t().mapv(|z| z.conj());
    Operator::from_matrix(basis.clone(), h).unwrap()
}
