//! Dense complex kernels shared by the propagator and analysis code.

use ndarray::{Array1, Array2, ArrayView2, Axis, ShapeBuilder};
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn identity(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, ONE)
}

pub fn adjoint(a: &ArrayView2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs(a: &ArrayView2<C64>) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

pub fn all_finite(a: &ArrayView2<C64>) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `a^n` by repeated squaring.
pub fn matrix_power(a: &Array2<C64>, mut n: u64) -> Array2<C64> {
    let mut result: Option<Array2<C64>> = None;
    let mut base = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.dot(&base),
            });
        }
        n >>= 1;
        if n > 0 {
            base = base.dot(&base);
        }
    }
    result.unwrap_or_else(|| identity(a.nrows()))
}

/// Largest singular value.
pub fn spectral_norm(a: &ArrayView2<C64>) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    if !all_finite(a) {
        return Err(Error::numeric("non-finite matrix entries"));
    }
    let (_, s, _) = a.to_owned().svd(false, false)?;
    Ok(s.iter().cloned().fold(0.0, f64::max))
}

pub fn frobenius_norm(a: &ArrayView2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Connected components of the nonzero pattern of a square matrix.
///
/// A Hermitian matrix is block diagonal over these index sets, so each can
/// be diagonalized on its own.
pub fn coupled_components(a: &ArrayView2<C64>) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for ((i, j), z) in a.indexed_iter() {
        if i < j && (z.re != 0.0 || z.im != 0.0) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Eigendecomposition of a Hermitian matrix, split over decoupled blocks.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    dim: usize,
    blocks: Vec<EigenBlock>,
}

#[derive(Debug, Clone)]
struct EigenBlock {
    indices: Vec<usize>,
    values: Array1<f64>,
    vectors: Array2<C64>,
}

impl HermitianEigen {
    pub fn new(h: &ArrayView2<C64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::domain("eigendecomposition needs a square matrix"));
        }
        if !all_finite(h) {
            return Err(Error::numeric("non-finite matrix entries"));
        }
        let blocks = coupled_components(h)
            .into_iter()
            .map(|indices| {
                let k = indices.len();
                // column-major: eigh returns conjugated vectors for row-major complex input
                let sub = Array2::from_shape_fn((k, k).f(), |(a, b)| h[[indices[a], indices[b]]]);
                let (values, vectors) = sub.eigh(UPLO::Lower)?;
                Ok(EigenBlock {
                    indices,
                    values,
                    vectors,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HermitianEigen {
            dim: h.nrows(),
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().cloned()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Apply `f` to the spectrum: returns `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> Array2<C64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for block in &self.blocks {
            let weights: Array1<C64> = block.values.mapv(&f);
            let scaled = &block.vectors * &weights.view().insert_axis(Axis(0));
            let sub = scaled.dot(&adjoint(&block.vectors.view()));
            for (a, &i) in block.indices.iter().enumerate() {
                for (b, &j) in block.indices.iter().enumerate() {
                    out[[i, j]] = sub[[a, b]];
                }
            }
        }
        out
    }

    /// `exp(-i s H)`.
    pub fn unitary(&self, s: f64) -> Array2<C64> {
        self.map_spectrum(|lambda| C64::from_polar(1.0, -lambda * s))
    }
}
