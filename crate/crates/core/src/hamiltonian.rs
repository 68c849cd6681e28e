//! Hubbard, next-nearest hopping, spin-coupling and t-J-U Hamiltonians on a
//! one-dimensional chain. Energies are in units of `t`, with `ħ = 1`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{Basis, Spin};
use crate::linalg::{C64, ZERO};
use crate::operator::{assemble, real, Operator, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::domain(format!("unknown boundary '{other}'"))),
        }
    }
}

/// Spin component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Pauli matrix entries `σ^w[a][b]`, index 0 = up, 1 = down.
    pub fn pauli(self) -> [[C64; 2]; 2] {
        let o = ZERO;
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Axis::X => [[o, one], [one, o]],
            Axis::Y => [[o, -i], [i, o]],
            Axis::Z => [[one, o], [o, -one]],
        }
    }
}

/// Linear chain of `sites` sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub sites: usize,
    pub boundary: Boundary,
}

impl Chain {
    pub fn new(sites: usize, boundary: Boundary) -> Chain {
        Chain { sites, boundary }
    }

    pub fn open(sites: usize) -> Chain {
        Chain::new(sites, Boundary::Open)
    }

    fn pairs(&self, distance: usize) -> Vec<(usize, usize)> {
        let m = self.sites;
        let mut out: Vec<(usize, usize)> = (0..m.saturating_sub(distance)).map(|i| (i, i + distance)).collect();
        if self.boundary == Boundary::Periodic && m > distance {
            for i in m - distance..m {
                let j = (i + distance) % m;
                let key = (i.min(j), i.max(j));
                if i != j && !out.contains(&key) {
                    out.push(key);
                }
            }
        }
        out
    }

    /// Distinct nearest-neighbour pairs `(i, j)` with `i < j`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        self.pairs(1)
    }

    /// Distinct next-nearest pairs; pairs already counted as bonds are skipped.
    pub fn next_nearest(&self) -> Vec<(usize, usize)> {
        let bonds = self.bonds();
        self.pairs(2).into_iter().filter(|p| !bonds.contains(p)).collect()
    }
}

/// Parameters of the t-J-U model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub sites: usize,
    pub t: f64,
    #[serde(default)]
    pub t_prime: f64,
    pub u: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

impl ModelParams {
    pub fn isotropic(sites: usize, t: f64, u: f64, j: f64) -> ModelParams {
        ModelParams {
            sites,
            t,
            t_prime: 0.0,
            u,
            jx: j,
            jy: j,
            jz: j,
            boundary: Boundary::Open,
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn chain(&self) -> Chain {
        Chain::new(self.sites, self.boundary)
    }

    pub fn is_isotropic(&self) -> bool {
        self.jx == self.jy && self.jy == self.jz
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.t, self.t_prime, self.u, self.jx, self.jy, self.jz];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("model parameters must be finite"));
        }
        if self.sites == 0 {
            return Err(Error::domain("need at least one site"));
        }
        if self.sites < 2 && (self.t != 0.0 || self.jx != 0.0 || self.jy != 0.0 || self.jz != 0.0) {
            return Err(Error::domain("nearest-neighbour terms need at least 2 sites"));
        }
        if self.t_prime != 0.0 && self.sites < 3 {
            return Err(Error::domain("next-nearest hopping needs at least 3 sites"));
        }
        Ok(())
    }
}

fn check_chain(basis: &Basis, chain: &Chain) -> Result<()> {
    if basis.sites() != chain.sites {
        return Err(Error::domain(format!(
            "basis has {} sites but chain has {}",
            basis.sites(),
            chain.sites
        )));
    }
    Ok(())
}

fn hopping_terms(pairs: &[(usize, usize)], amplitude: f64) -> Vec<Term> {
    let mut terms = Vec::with_capacity(4 * pairs.len());
    for &(i, j) in pairs {
        for spin in Spin::BOTH {
            terms.push(Term::hop(real(-amplitude), (i, spin), (j, spin)));
            terms.push(Term::hop(real(-amplitude), (j, spin), (i, spin)));
        }
    }
    terms
}

/// `-t Σ_<ij>,σ (c†_iσ c_jσ + h.c.) + U Σ_j n_j↑ n_j↓`.
pub fn build_hubbard(basis: &Arc<Basis>, chain: &Chain, t: f64, u: f64) -> Result<Operator> {
    check_chain(basis, chain)?;
    if t != 0.0 && chain.sites < 2 {
        return Err(Error::domain("hopping needs at least 2 sites"));
    }
    let mut h = if t != 0.0 {
        assemble(basis.clone(), &hopping_terms(&chain.bonds(), t))?
    } else {
        Operator::zeros(basis.clone())
    };
    if u != 0.0 {
        let sites = chain.sites;
        let onsite = double_occupancy(basis, sites).scaled(real(u));
        h = h.add(&onsite)?;
    }
    Ok(h)
}

/// `-t' Σ_<<ij>>,σ (c†_iσ c_jσ + h.c.)`.
pub fn build_nn_hopping(basis: &Arc<Basis>, chain: &Chain, t_prime: f64) -> Result<Operator> {
    check_chain(basis, chain)?;
    if chain.sites < 3 {
        return Err(Error::domain("next-nearest hopping needs at least 3 sites"));
    }
    if t_prime == 0.0 {
        return Ok(Operator::zeros(basis.clone()));
    }
    assemble(basis.clone(), &hopping_terms(&chain.next_nearest(), t_prime))
}

/// `Σ_j n_j↑ n_j↓`.
pub fn double_occupancy(basis: &Arc<Basis>, sites: usize) -> Operator {
    Operator::diagonal_fn(basis.clone(), |s| s.double_occupancy(sites) as f64)
}

fn spin_terms(site: usize, axis: Axis, scale: f64) -> Vec<Term> {
    let sigma = axis.pauli();
    let mut terms = Vec::new();
    for (a, sa) in Spin::BOTH.into_iter().enumerate() {
        for (b, sb) in Spin::BOTH.into_iter().enumerate() {
            if sigma[a][b] != ZERO {
                terms.push(Term::hop(sigma[a][b] * (0.5 * scale), (site, sa), (site, sb)));
            }
        }
    }
    terms
}

/// `S^w_j = ½ Σ c†_ς σ^w_ςζ c_ζ` at one site.
pub fn spin_operator(basis: &Arc<Basis>, site: usize, axis: Axis) -> Result<Operator> {
    basis.check_site(site)?;
    assemble(basis.clone(), &spin_terms(site, axis, 1.0))
}

/// `Σ_j S^w_j`.
pub fn total_spin(basis: &Arc<Basis>, axis: Axis) -> Result<Operator> {
    let terms: Vec<Term> = (0..basis.sites()).flat_map(|j| spin_terms(j, axis, 1.0)).collect();
    assemble(basis.clone(), &terms)
}

fn coupling_terms(i: usize, j: usize, axis: Axis, coupling: f64) -> Vec<Term> {
    let mut out = Vec::new();
    for left in spin_terms(i, axis, 1.0) {
        for right in spin_terms(j, axis, 1.0) {
            let mut ops = left.ops.clone();
            ops.extend_from_slice(&right.ops);
            out.push(Term {
                coeff: left.coeff * right.coeff * coupling,
                ops,
            });
        }
    }
    out
}

/// `Σ_<ij> (J_x S^x_i S^x_j + J_y S^y_i S^y_j + J_z S^z_i S^z_j)`.
pub fn build_spin_coupling(
    basis: &Arc<Basis>,
    chain: &Chain,
    jx: f64,
    jy: f64,
    jz: f64,
) -> Result<Operator> {
    check_chain(basis, chain)?;
    let mut terms = Vec::new();
    for (i, j) in chain.bonds() {
        for (axis, coupling) in [(Axis::X, jx), (Axis::Y, jy), (Axis::Z, jz)] {
            if coupling != 0.0 {
                terms.extend(coupling_terms(i, j, axis, coupling));
            }
        }
    }
    if terms.is_empty() {
        return Ok(Operator::zeros(basis.clone()));
    }
    assemble(basis.clone(), &terms)
}

/// `J_w Σ_<ij> S^w_i S^w_j` for a single axis.
pub fn build_axis_coupling(basis: &Arc<Basis>, chain: &Chain, axis: Axis, j: f64) -> Result<Operator> {
    match axis {
        Axis::X => build_spin_coupling(basis, chain, j, 0.0, 0.0),
        Axis::Y => build_spin_coupling(basis, chain, 0.0, j, 0.0),
        Axis::Z => build_spin_coupling(basis, chain, 0.0, 0.0, j),
    }
}

/// Same-spin minus cross-spin neighbour pair count, i.e. `(4/J_z) H_zz`
/// evaluated on an occupation pattern.
pub fn zz_pair_weight(state: crate::fockspace::FockState, chain: &Chain) -> f64 {
    let mut w = 0i32;
    for (i, j) in chain.bonds() {
        let ui = state.occupation(i, Spin::Up) as i32;
        let di = state.occupation(i, Spin::Down) as i32;
        let uj = state.occupation(j, Spin::Up) as i32;
        let dj = state.occupation(j, Spin::Down) as i32;
        w += ui * uj + di * dj - ui * dj - di * uj;
    }
    w as f64
}

/// The full t-J-U Hamiltonian `H_tU + H_J (+ H_nn)`.
pub fn build_tju(basis: &Arc<Basis>, params: &ModelParams) -> Result<Operator> {
    params.validate()?;
    let chain = params.chain();
    let mut h = build_hubbard(basis, &chain, params.t, params.u)?;
    h = h.add(&build_spin_coupling(basis, &chain, params.jx, params.jy, params.jz)?)?;
    if params.t_prime != 0.0 {
        h = h.add(&build_nn_hopping(basis, &chain, params.t_prime)?)?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{FockState, Sector};
    use crate::linalg::HermitianEigen;

    fn full(m: usize) -> Arc<Basis> {
        Arc::new(Basis::full(m).unwrap())
    }

    fn eigenvalues(op: &Operator) -> Vec<f64> {
        HermitianEigen::new(&op.matrix().view()).unwrap().eigenvalues()
    }

    #[test]
    fn chain_pairs() {
        assert_eq!(Chain::open(4).bonds(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(
            Chain::new(4, Boundary::Periodic).bonds(),
            vec![(0, 1), (1, 2), (2, 3), (0, 3)]
        );
        assert_eq!(Chain::new(2, Boundary::Periodic).bonds(), vec![(0, 1)]);
        assert_eq!(Chain::open(3).next_nearest(), vec![(0, 2)]);
        assert_eq!(
            Chain::new(5, Boundary::Periodic).next_nearest(),
            vec![(0, 2), (1, 3), (2, 4), (0, 3), (1, 4)]
        );
    }

    #[test]
    fn hubbard_without_hopping_is_diagonal_double_occupancy() {
        let b = full(3);
        let h = build_hubbard(&b, &Chain::open(3), 0.0, 2.5).unwrap();
        assert!(h.is_diagonal(0.0));
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(h.matrix()[[i, i]].re, 2.5 * s.double_occupancy(3) as f64);
        }
        let s = FockState::from_occupations(&[(0, Spin::Up), (0, Spin::Down)]);
        assert_eq!(h.matrix()[[b.index_of(s).unwrap(), b.index_of(s).unwrap()]].re, 2.5);
    }

    #[test]
    fn two_site_hubbard_spectrum() {
        let (t, u) = (1.0, 3.7);
        let b = Arc::new(Basis::new(2, Sector::Spin { up: 1, down: 1 }).unwrap());
        let h = build_hubbard(&b, &Chain::open(2), t, u).unwrap();
        let mut expect = vec![
            0.0,
            u,
            (u + (u * u + 16.0 * t * t).sqrt()) / 2.0,
            (u - (u * u + 16.0 * t * t).sqrt()) / 2.0,
        ];
        expect.sort_by(f64::total_cmp);
        for (a, e) in eigenvalues(&h).iter().zip(&expect) {
            assert!((a - e).abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn next_nearest_hopping() {
        let b = full(3);
        assert!(build_nn_hopping(&b, &Chain::open(3), 0.0).unwrap().max_abs() == 0.0);
        assert!(build_nn_hopping(&full(2), &Chain::open(2), 1.0).is_err());
        let h = build_nn_hopping(&b, &Chain::open(3), 0.7).unwrap();
        let a = FockState::from_occupations(&[(0, Spin::Up)]);
        let c = FockState::from_occupations(&[(2, Spin::Up)]);
        let mid = FockState::from_occupations(&[(1, Spin::Up)]);
        let (ia, ic, im) = (b.index_of(a).unwrap(), b.index_of(c).unwrap(), b.index_of(mid).unwrap());
        assert_eq!(h.matrix()[[ic, ia]].re, -0.7);
        assert_eq!(h.matrix()[[im, ia]].re, 0.0);

        // one up particle on 4 sites: the one-body matrix has -t' on (0,2),(1,3)
        let b4 = Arc::new(Basis::new(4, Sector::Spin { up: 1, down: 0 }).unwrap());
        let h4 = build_nn_hopping(&b4, &Chain::open(4), 0.7).unwrap();
        let mut expect = vec![-0.7, -0.7, 0.7, 0.7];
        expect.sort_by(f64::total_cmp);
        for (a, e) in eigenvalues(&h4).iter().zip(&expect) {
            assert!((a - e).abs() < 1e-12);
        }
    }

    #[test]
    fn spin_operator_examples() {
        let b = full(2);
        let sz = spin_operator(&b, 0, Axis::Z).unwrap();
        let up = b.index_of(FockState::from_occupations(&[(0, Spin::Up)])).unwrap();
        assert_eq!(sz.matrix()[[up, up]].re, 0.5);
        let empty = b.index_of(FockState::VACUUM).unwrap();
        let double = b
            .index_of(FockState::from_occupations(&[(0, Spin::Up), (0, Spin::Down)]))
            .unwrap();
        let mut casimir = Operator::zeros(b.clone());
        for axis in Axis::ALL {
            let s = spin_operator(&b, 0, axis).unwrap();
            for col in [empty, double] {
                assert!(s.matrix().column(col).iter().all(|z| z.norm() == 0.0));
            }
            casimir = casimir.add(&s.dot(&s).unwrap()).unwrap();
        }
        for (i, st) in b.states().iter().enumerate() {
            let single = st.occupation(0, Spin::Up) + st.occupation(0, Spin::Down) == 1;
            for j in 0..b.dim() {
                let expect = if i == j && single { 0.75 } else { 0.0 };
                assert!((casimir.matrix()[[i, j]] - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn heisenberg_singlet_triplet() {
        let j = 0.8;
        let b = Arc::new(Basis::new(2, Sector::Spin { up: 1, down: 1 }).unwrap());
        let h = build_spin_coupling(&b, &Chain::open(2), j, j, j).unwrap();
        let ev = eigenvalues(&h);
        // two doubly occupied states give 0, one singlet, one triplet (m=0)
        let expect = [-0.75 * j, 0.0, 0.0, 0.25 * j];
        for (a, e) in ev.iter().zip(&expect) {
            assert!((a - e).abs() < 1e-12, "{ev:?}");
        }
        let bt = full(2);
        let hz = build_spin_coupling(&bt, &Chain::open(2), 0.0, 0.0, 1.3).unwrap();
        let uu = bt
            .index_of(FockState::from_occupations(&[(0, Spin::Up), (1, Spin::Up)]))
            .unwrap();
        assert!((hz.matrix()[[uu, uu]].re - 1.3 / 4.0).abs() < 1e-15);
        assert_eq!(build_spin_coupling(&bt, &Chain::open(2), 0.0, 0.0, 0.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn zz_matches_number_operator_expansion() {
        let b = full(3);
        let chain = Chain::new(3, Boundary::Periodic);
        let hz = build_axis_coupling(&b, &chain, Axis::Z, 0.9).unwrap();
        assert!(hz.is_diagonal(1e-15));
        for (i, s) in b.states().iter().enumerate() {
            let expect = 0.9 / 4.0 * zz_pair_weight(*s, &chain);
            assert!((hz.matrix()[[i, i]].re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn tju_is_sum_of_parts() {
        let b = full(5);
        let p = ModelParams::isotropic(5, 1.0, -1.0, 0.3);
        let h = build_tju(&b, &p).unwrap();
        let parts = build_hubbard(&b, &p.chain(), 1.0, -1.0)
            .unwrap()
            .add(&build_spin_coupling(&b, &p.chain(), 0.3, 0.3, 0.3).unwrap())
            .unwrap();
        assert!(h.sub(&parts).unwrap().max_abs() < 1e-15);
        assert!(h.max_imag() < 1e-13);
        assert!(h.hermiticity_defect() < 1e-13);

        let b3 = full(3);
        let only_hub = ModelParams::isotropic(3, 1.0, 4.0, 0.0);
        let diff = build_tju(&b3, &only_hub)
            .unwrap()
            .sub(&build_hubbard(&b3, &Chain::open(3), 1.0, 4.0).unwrap())
            .unwrap();
        assert_eq!(diff.max_abs(), 0.0);
        let only_j = ModelParams::isotropic(3, 0.0, 0.0, 0.6);
        let diff = build_tju(&b3, &only_j)
            .unwrap()
            .sub(&build_spin_coupling(&b3, &Chain::open(3), 0.6, 0.6, 0.6).unwrap())
            .unwrap();
        assert_eq!(diff.max_abs(), 0.0);
    }

    #[test]
    fn mismatched_chain_rejected() {
        let b = full(3);
        assert!(build_hubbard(&b, &Chain::open(4), 1.0, 1.0).is_err());
        let p = ModelParams::isotropic(4, 1.0, 1.0, 0.3);
        assert!(build_tju(&b, &p).is_err());
    }

    #[test]
    fn anisotropic_coupling_leaves_spin_sector() {
        // S+S+ on the two down spins reaches (3, 0)
        let b = Arc::new(Basis::new(3, Sector::Spin { up: 1, down: 2 }).unwrap());
        assert!(build_spin_coupling(&b, &Chain::open(3), 1.0, 0.0, 0.0).is_err());
        assert!(build_spin_coupling(&b, &Chain::open(3), 0.5, 0.5, 0.1).is_ok());
    }

    #[test]
    fn periodic_differs_only_on_wrap_bond() {
        let b = full(3);
        let p = ModelParams::isotropic(3, 1.0, 2.0, 0.3);
        let open = build_tju(&b, &p).unwrap();
        let periodic = build_tju(&b, &p.with_boundary(Boundary::Periodic)).unwrap();
        let wrap = Chain::new(3, Boundary::Periodic);
        let single = |pairs: Vec<(usize, usize)>| {
            let hop = assemble(b.clone(), &hopping_terms(&pairs, 1.0)).unwrap();
            let mut terms = Vec::new();
            for &(i, j) in &pairs {
                for axis in Axis::ALL {
                    terms.extend(coupling_terms(i, j, axis, 0.3));
                }
            }
            hop.add(&assemble(b.clone(), &terms).unwrap()).unwrap()
        };
        let extra = single(wrap.bonds().into_iter().filter(|&(i, j)| (i, j) == (0, 2)).collect());
        let diff = periodic.sub(&open).unwrap().sub(&extra).unwrap();
        assert!(diff.max_abs() < 1e-15);
    }
}
