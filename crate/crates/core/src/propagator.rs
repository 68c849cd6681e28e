//! Matrix exponentials and exact time evolution `U₀(τ) = exp(-i H τ)`.

use ndarray::{Array1, Array2};
use ndarray_linalg::Inverse;

use crate::error::{Error, Result};
use crate::linalg::{self, HermitianEigen, C64};
use crate::operator::Operator;

/// What is known about the exponent passed to [`expm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// No structure assumed; Padé scaling and squaring.
    General,
    /// `A = -i H τ` with `H` Hermitian; exponentiated through the spectrum of
    /// `H` so the result is unitary to rounding.
    AntiHermitian,
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm thresholds for degrees 3, 5, 7, 9, 13 (Higham 2005).
const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.53939833006323e-1,
    9.504178996162932e-1,
    2.097847961257068e0,
    5.371920351148152e0,
];

fn one_norm(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scale_add(acc: &mut Array2<C64>, m: &Array2<C64>, c: f64) {
    acc.zip_mut_with(m, |a, &b| *a += b * c);
}

/// `(U, V)` such that `exp(A) ≈ (V - U)^{-1} (V + U)` for a low-degree approximant.
fn pade_low(a: &Array2<C64>, coeffs: &[f64]) -> (Array2<C64>, Array2<C64>) {
    let n = a.nrows();
    let ident = linalg::identity(n);
    let a2 = a.dot(a);
    let degree = coeffs.len() - 1;
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() <= degree / 2 {
        let next = powers.last().unwrap().dot(&a2);
        powers.push(next);
    }
    let mut odd = Array2::zeros((n, n));
    let mut even = Array2::zeros((n, n));
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < degree {
            scale_add(&mut odd, p, coeffs[2 * k + 1]);
        }
        scale_add(&mut even, p, coeffs[2 * k]);
    }
    (a.dot(&odd), even)
}

fn pade13(a: &Array2<C64>) -> (Array2<C64>, Array2<C64>) {
    let b = &PADE13;
    let n = a.nrows();
    let ident = linalg::identity(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);

    let mut inner_u = Array2::zeros((n, n));
    scale_add(&mut inner_u, &a6, b[13]);
    scale_add(&mut inner_u, &a4, b[11]);
    scale_add(&mut inner_u, &a2, b[9]);
    let mut u = a6.dot(&inner_u);
    scale_add(&mut u, &a6, b[7]);
    scale_add(&mut u, &a4, b[5]);
    scale_add(&mut u, &a2, b[3]);
    scale_add(&mut u, &ident, b[1]);
    let u = a.dot(&u);

    let mut inner_v = Array2::zeros((n, n));
    scale_add(&mut inner_v, &a6, b[12]);
    scale_add(&mut inner_v, &a4, b[10]);
    scale_add(&mut inner_v, &a2, b[8]);
    let mut v = a6.dot(&inner_v);
    scale_add(&mut v, &a6, b[6]);
    scale_add(&mut v, &a4, b[4]);
    scale_add(&mut v, &a2, b[2]);
    scale_add(&mut v, &ident, b[0]);
    (u, v)
}

/// `exp(A)` by scaling and squaring with a diagonal Padé approximant.
pub fn pade_expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::domain("matrix exponential needs a square matrix"));
    }
    if !linalg::all_finite(&a.view()) {
        return Err(Error::numeric("non-finite entries in exponent"));
    }
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    let norm = one_norm(a);
    let low: [&[f64]; 4] = [&PADE3, &PADE5, &PADE7, &PADE9];
    for (coeffs, theta) in low.iter().zip(THETA) {
        if norm <= theta {
            let (u, v) = pade_low(a, coeffs);
            return rational(&u, &v);
        }
    }
    let s = if norm > THETA[4] {
        (norm / THETA[4]).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::new(2f64.powi(-s), 0.0);
    let (u, v) = pade13(&scaled);
    let mut r = rational(&u, &v)?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}

fn rational(u: &Array2<C64>, v: &Array2<C64>) -> Result<Array2<C64>> {
    let q = v - u;
    let p = v + u;
    let q_inv = q.inv()?;
    Ok(q_inv.dot(&p))
}

/// Matrix exponential of an operator.
pub fn expm(a: &Operator, generator: Generator) -> Result<Operator> {
    let m = a.matrix();
    let out = match generator {
        Generator::General => pade_expm(m)?,
        Generator::AntiHermitian => {
            // H = i A is Hermitian; exp(A) = exp(-i H)
            let h = m.mapv(|z| z * C64::new(0.0, 1.0));
            let defect = linalg::max_abs(&(&h - &linalg::adjoint(&h.view())).view());
            let scale = linalg::max_abs(&h.view()).max(1.0);
            if defect > 1e-10 * scale {
                return Err(Error::domain("exponent is not anti-Hermitian"));
            }
            HermitianEigen::new(&h.view())?.unitary(1.0)
        }
    };
    Operator::from_matrix(a.basis().clone(), out)
}

/// Exact evolution for a fixed Hamiltonian; the spectrum is computed once.
#[derive(Debug, Clone)]
pub struct ExactEvolution {
    hamiltonian: Operator,
    eigen: HermitianEigen,
}

impl ExactEvolution {
    pub fn new(h: &Operator) -> Result<ExactEvolution> {
        let scale = h.max_abs().max(1.0);
        if h.hermiticity_defect() > 1e-12 * scale {
            return Err(Error::domain("Hamiltonian is not Hermitian"));
        }
        Ok(ExactEvolution {
            eigen: HermitianEigen::new(&h.matrix().view())?,
            hamiltonian: h.clone(),
        })
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen.eigenvalues()
    }

    /// `exp(-i H τ)` with `ħ = 1`.
    pub fn propagator(&self, tau: f64) -> Result<Operator> {
        if !tau.is_finite() {
            return Err(Error::numeric("non-finite evolution time"));
        }
        Operator::from_matrix(self.hamiltonian.basis().clone(), self.eigen.unitary(tau))
    }
}

pub fn exact_propagator(h: &Operator, tau: f64) -> Result<Operator> {
    ExactEvolution::new(h)?.propagator(tau)
}

/// `U |ψ>` for a normalized state.
pub fn evolve_state(u: &Operator, psi: &Array1<C64>) -> Result<Array1<C64>> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::domain(format!("state is not normalized (norm {norm})")));
    }
    u.apply(psi)
}
