//! Dense operators tied to the basis they act on.

use std::collections::HashMap;
use std::sync::Arc;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::fockspace::{Basis, FockState, ModeOp, Spin};
use crate::linalg::{self, C64, ZERO};

/// Dense complex matrix over a [`Basis`].
#[derive(Debug, Clone)]
pub struct Operator {
    basis: Arc<Basis>,
    matrix: Array2<C64>,
}

impl Operator {
    pub fn from_matrix(basis: Arc<Basis>, matrix: Array2<C64>) -> Result<Operator> {
        let n = basis.dim();
        if matrix.dim() != (n, n) {
            return Err(Error::domain(format!(
                "matrix shape {:?} does not match basis dimension {n}",
                matrix.dim()
            )));
        }
        Ok(Operator { basis, matrix })
    }

    pub fn zeros(basis: Arc<Basis>) -> Operator {
        let n = basis.dim();
        Operator {
            basis,
            matrix: Array2::zeros((n, n)),
        }
    }

    pub fn identity(basis: Arc<Basis>) -> Operator {
        let n = basis.dim();
        Operator {
            basis,
            matrix: linalg::identity(n),
        }
    }

    pub fn from_diagonal(basis: Arc<Basis>, diag: &[C64]) -> Result<Operator> {
        if diag.len() != basis.dim() {
            return Err(Error::domain("diagonal length does not match basis"));
        }
        Ok(Operator {
            matrix: Array2::from_diag(&Array1::from(diag.to_vec())),
            basis,
        })
    }

    /// Real diagonal operator `Σ_s f(s) |s><s|`.
    pub fn diagonal_fn(basis: Arc<Basis>, f: impl Fn(FockState) -> f64) -> Operator {
        let diag: Vec<C64> = basis.states().iter().map(|&s| C64::new(f(s), 0.0)).collect();
        let matrix = Array2::from_diag(&Array1::from(diag));
        Operator { basis, matrix }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.matrix.diag().to_vec()
    }

    pub fn check_same_basis(&self, other: &Operator) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(Error::domain("operators live on different bases"))
        }
    }

    /// Operator product `self · other`.
    pub fn dot(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        Ok(Operator {
            basis: self.basis.clone(),
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        Ok(Operator {
            basis: self.basis.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same_basis(other)?;
        Ok(Operator {
            basis: self.basis.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scaled(&self, factor: C64) -> Operator {
        Operator {
            basis: self.basis.clone(),
            matrix: &self.matrix * factor,
        }
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            basis: self.basis.clone(),
            matrix: linalg::adjoint(&self.matrix.view()),
        }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.dot(other)?.sub(&other.dot(self)?)
    }

    /// `A† · self · A`.
    pub fn conjugated_by(&self, a: &Operator) -> Result<Operator> {
        a.adjoint().dot(&self.dot(a)?)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix.view())
    }

    pub fn max_imag(&self) -> f64 {
        self.matrix.iter().fold(0.0f64, |m, z| m.max(z.im.abs()))
    }

    /// `max |A - A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.matrix - &linalg::adjoint(&self.matrix.view());
        linalg::max_abs(&d.view())
    }

    /// `max |A†A - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = linalg::adjoint(&self.matrix.view()).dot(&self.matrix);
        let d = prod - linalg::identity(self.dim());
        linalg::max_abs(&d.view())
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.matrix
            .indexed_iter()
            .all(|((i, j), z)| i == j || z.norm() <= tol)
    }

    pub fn apply(&self, psi: &Array1<C64>) -> Result<Array1<C64>> {
        if psi.len() != self.dim() {
            return Err(Error::domain(format!(
                "state of length {} does not match operator dimension {}",
                psi.len(),
                self.dim()
            )));
        }
        Ok(self.matrix.dot(psi))
    }

    /// `c†` or `c` on one mode; only defined on the full basis.
    pub fn mode(basis: Arc<Basis>, site: usize, spin: Spin, op: ModeOp) -> Result<Operator> {
        basis.check_site(site)?;
        if basis.sector() != crate::fockspace::Sector::Full {
            return Err(Error::domain("single mode operators need the full Fock basis"));
        }
        let n = basis.dim();
        let mut m = Array2::zeros((n, n));
        for (col, &s) in basis.states().iter().enumerate() {
            if let Some((out, sign)) = s.apply(site, spin, op) {
                let row = basis.index_of(out).expect("full basis is closed");
                m[[row, col]] = C64::new(sign, 0.0);
            }
        }
        Ok(Operator { basis, matrix: m })
    }

    /// Number operator for one spin species, or the total if `spin` is `None`.
    pub fn number(basis: Arc<Basis>, spin: Option<Spin>) -> Operator {
        Operator::diagonal_fn(basis, |s| match spin {
            Some(sp) => s.spin_count(sp) as f64,
            None => s.particle_count() as f64,
        })
    }
}

/// One product of mode operators with a coefficient, written left to right
/// (the rightmost operator acts first).
#[derive(Debug, Clone)]
pub(crate) struct Term {
    pub coeff: C64,
    pub ops: Vec<(usize, Spin, ModeOp)>,
}

impl Term {
    pub fn hop(coeff: C64, to: (usize, Spin), from: (usize, Spin)) -> Term {
        Term {
            coeff,
            ops: vec![(to.0, to.1, ModeOp::Create), (from.0, from.1, ModeOp::Annihilate)],
        }
    }

    fn act(&self, state: FockState) -> Option<(FockState, f64)> {
        let mut s = state;
        let mut sign = 1.0;
        for &(site, spin, op) in self.ops.iter().rev() {
            let (next, sg) = s.apply(site, spin, op)?;
            s = next;
            sign *= sg;
        }
        Some((s, sign))
    }
}

/// Assemble `Σ terms` on a basis. Amplitudes that leave the basis are an
/// error unless they cancel.
pub(crate) fn assemble(basis: Arc<Basis>, terms: &[Term]) -> Result<Operator> {
    let n = basis.dim();
    let mut m = Array2::<C64>::zeros((n, n));
    let mut column: HashMap<FockState, C64> = HashMap::new();
    for (col, &s) in basis.states().iter().enumerate() {
        column.clear();
        for term in terms {
            if term.coeff == ZERO {
                continue;
            }
            if let Some((out, sign)) = term.act(s) {
                *column.entry(out).or_insert(ZERO) += term.coeff * sign;
            }
        }
        for (&out, &amp) in &column {
            match basis.index_of(out) {
                Some(row) => m[[row, col]] += amp,
                None if amp.norm() < 1e-14 => {}
                None => {
                    return Err(Error::domain(format!(
                        "operator maps {s} outside the {:?} basis",
                        basis.sector()
                    )))
                }
            }
        }
    }
    Ok(Operator { basis, matrix: m })
}

pub(crate) fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}
