//! Operator distances, anti-fidelity bounds and the sweep harness.
//!
//! The bound `F ≤ ‖U - U₀‖²` is operator-level. Every gate of the protocol
//! and the target Hamiltonian conserve the total particle number, so both
//! propagators are block diagonal over particle-number sectors and the
//! spectral norm of their difference is the largest blockwise norm.
//! [`Evaluation::Blocked`] uses this; [`Evaluation::Dense`] builds the full
//! Fock space in one piece and exists to cross-check it.

use std::f64::consts::TAU;
use std::sync::Arc;

use ndarray::{Array1, Array2, Axis as NdAxis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{Basis, Sector, Spin};
use crate::hamiltonian::{build_tju, ModelParams};
use crate::linalg::{self, C64};
use crate::operator::Operator;
use crate::propagator::ExactEvolution;
use crate::protocol::{TrotterFactors, TrotterOrder};

/// Unitarity tolerance for inputs of [`antifidelity_bound`].
pub const UNITARITY_TOL: f64 = 1e-8;
/// Normalization tolerance for input states.
pub const NORM_TOL: f64 = 1e-10;
/// Largest chain handled by sweeps unless overridden.
pub const DEFAULT_MAX_SITES: usize = 6;
/// Largest chain for [`Evaluation::Dense`] (full space `4^M` in one matrix).
pub const DENSE_MAX_SITES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Spectral,
    Frobenius,
}

fn difference(a: &Operator, b: &Operator) -> Result<Array2<C64>> {
    a.check_same_basis(b)?;
    Ok(a.matrix() - b.matrix())
}

/// Spectral norm of `A - B`.
pub fn operator_distance(a: &Operator, b: &Operator) -> Result<f64> {
    operator_distance_with(a, b, Norm::Spectral)
}

pub fn operator_distance_with(a: &Operator, b: &Operator, norm: Norm) -> Result<f64> {
    let d = difference(a, b)?;
    match norm {
        Norm::Spectral => linalg::spectral_norm(&d.view()),
        Norm::Frobenius => Ok(linalg::frobenius_norm(&d.view())),
    }
}

/// `min_θ ‖A - e^{iθ} B‖` and the minimizing `θ`.
pub fn phase_aligned_distance(a: &Operator, b: &Operator) -> Result<(f64, f64)> {
    a.check_same_basis(b)?;
    let at = |theta: f64| -> Result<f64> {
        let d = a.matrix() - &b.matrix().mapv(|z| z * C64::from_polar(1.0, theta));
        linalg::spectral_norm(&d.view())
    };
    const GRID: usize = 48;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..GRID {
        let theta = TAU * k as f64 / GRID as f64;
        let v = at(theta)?;
        if v < best.0 {
            best = (v, theta);
        }
    }
    // golden-section refinement around the best grid point
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best.1 - TAU / GRID as f64, best.1 + TAU / GRID as f64);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (at(x1)?, at(x2)?);
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = at(x2)?;
        }
    }
    let (v, theta) = if f1 < f2 { (f1, x1) } else { (f2, x2) };
    Ok(if v < best.0 { (v, theta.rem_euclid(TAU)) } else { best })
}

/// Anti-fidelity bound `‖U - U₀‖²`.
///
/// The bound is only meaningful while the squared distance is at most 2;
/// beyond that `value` is clamped to 1 and `clamped` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub squared_distance: f64,
    pub clamped: bool,
}

impl Bound {
    pub fn from_distance(distance: f64) -> Bound {
        let sq = distance * distance;
        let clamped = sq > 2.0;
        Bound {
            value: if clamped { 1.0 } else { sq },
            squared_distance: sq,
            clamped,
        }
    }

    fn max(self, other: Bound) -> Bound {
        if other.squared_distance > self.squared_distance {
            other
        } else {
            self
        }
    }

    const ZERO: Bound = Bound {
        value: 0.0,
        squared_distance: 0.0,
        clamped: false,
    };
}

fn check_unitary(m: &Array2<C64>, what: &str) -> Result<()> {
    if !linalg::all_finite(&m.view()) {
        return Err(Error::numeric(format!("{what} has non-finite entries")));
    }
    let defect = linalg::max_abs(&(linalg::adjoint(&m.view()).dot(m) - linalg::identity(m.nrows())).view());
    if defect > UNITARITY_TOL {
        return Err(Error::domain(format!("{what} is not unitary (defect {defect:.3e})")));
    }
    Ok(())
}

pub fn antifidelity_bound(u_sim: &Operator, u_exact: &Operator) -> Result<Bound> {
    u_sim.check_same_basis(u_exact)?;
    check_unitary(u_sim.matrix(), "simulated propagator")?;
    check_unitary(u_exact.matrix(), "exact propagator")?;
    Ok(Bound::from_distance(operator_distance(u_sim, u_exact)?))
}

fn check_state(psi: &Array1<C64>, dim: usize) -> Result<()> {
    if psi.len() != dim {
        return Err(Error::domain(format!("state has length {} but basis has {dim}", psi.len())));
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::domain(format!("state is not normalized (norm {norm})")));
    }
    Ok(())
}

fn overlap(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `1 - |⟨U ψ | U₀ ψ⟩|²`.
pub fn antifidelity_state(psi: &Array1<C64>, u_sim: &Operator, u_exact: &Operator) -> Result<f64> {
    u_sim.check_same_basis(u_exact)?;
    check_state(psi, u_sim.dim())?;
    let a = u_sim.matrix().dot(psi);
    let b = u_exact.matrix().dot(psi);
    Ok((1.0 - overlap(&a, &b).norm_sqr()).clamp(0.0, 1.0))
}

/// How the operator norm over the Fock space is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    /// Full Fock space, one particle-number block at a time.
    #[default]
    Blocked,
    /// Full Fock space as a single matrix.
    Dense,
    /// Only inputs with `up` and `down` particles (columns of `U - U₀`).
    Inputs { up: usize, down: usize },
}

/// Target model and protocol parameters of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    /// Lattice model; `u` is the bare on-site interaction `U_s`.
    pub model: ModelParams,
    /// Effective interaction `U'_eff` engineered with the collision phase.
    pub u_eff_prime: f64,
    pub dimension: u32,
}

impl SimulationParams {
    pub fn new(model: ModelParams, u_eff_prime: f64) -> SimulationParams {
        SimulationParams {
            model,
            u_eff_prime,
            dimension: 1,
        }
    }

    /// Model with `U = U_s + 3 d U'_eff`.
    pub fn target_model(&self) -> ModelParams {
        ModelParams {
            u: self.model.u + 3.0 * self.dimension as f64 * self.u_eff_prime,
            ..self.model
        }
    }

    pub fn with_sites(&self, sites: usize) -> SimulationParams {
        SimulationParams {
            model: ModelParams { sites, ..self.model },
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if !self.u_eff_prime.is_finite() {
            return Err(Error::domain("effective interaction must be finite"));
        }
        if self.dimension < 1 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct BlockEngine {
    factors: TrotterFactors,
    exact: ExactEvolution,
    /// Restrict the norm to these input columns.
    columns: Option<Vec<usize>>,
}

impl BlockEngine {
    fn new(basis: Arc<Basis>, params: &SimulationParams, columns: Option<Vec<usize>>) -> Result<BlockEngine> {
        let factors = TrotterFactors::new(&basis, &params.model, params.dimension)?;
        let exact = ExactEvolution::new(&build_tju(&basis, &params.target_model())?)?;
        Ok(BlockEngine { factors, exact, columns })
    }

    fn propagators(&self, tau: f64, steps: u64, theta: f64, order: TrotterOrder) -> Result<(Array2<C64>, Array2<C64>)> {
        let sim = self.factors.evolve(tau, steps, theta, order)?;
        let exact = self.exact.propagator(tau)?.into_matrix();
        Ok((sim, exact))
    }

    fn bound(&self, tau: f64, steps: u64, theta: f64, order: TrotterOrder) -> Result<Bound> {
        let (sim, exact) = self.propagators(tau, steps, theta, order)?;
        check_unitary(&sim, "simulated propagator")?;
        let diff = &sim - &exact;
        let norm = match &self.columns {
            None => linalg::spectral_norm(&diff.view())?,
            Some(cols) => linalg::spectral_norm(&diff.select(NdAxis(1), cols).view())?,
        };
        Ok(Bound::from_distance(norm))
    }
}

/// Reusable evaluator of `‖U(τ) - U₀(τ)‖²` for one parameter set.
///
/// Preparation diagonalizes the lattice and target Hamiltonians once, so
/// evaluating many `(τ, m, order)` points is cheap.
#[derive(Debug, Clone)]
pub struct BoundEvaluator {
    params: SimulationParams,
    evaluation: Evaluation,
    blocks: Vec<BlockEngine>,
}

impl BoundEvaluator {
    pub fn new(params: &SimulationParams, evaluation: Evaluation) -> Result<BoundEvaluator> {
        params.validate()?;
        let sites = params.model.sites;
        let blocks = match evaluation {
            Evaluation::Dense => {
                if sites > DENSE_MAX_SITES {
                    return Err(Error::domain(format!(
                        "dense evaluation is limited to {DENSE_MAX_SITES} sites; use blocked evaluation"
                    )));
                }
                vec![BlockEngine::new(Arc::new(Basis::full(sites)?), params, None)?]
            }
            Evaluation::Blocked => Basis::particle_blocks(sites)?
                .into_iter()
                .map(|b| BlockEngine::new(Arc::new(b), params, None))
                .collect::<Result<_>>()?,
            Evaluation::Inputs { up, down } => {
                let basis = Arc::new(Basis::new(sites, Sector::Particles(up + down))?);
                // validates the counts
                Basis::new(sites, Sector::Spin { up, down })?;
                let columns = basis
                    .states()
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.spin_count(Spin::Up) as usize == up && s.spin_count(Spin::Down) as usize == down)
                    .map(|(i, _)| i)
                    .collect();
                vec![BlockEngine::new(basis, params, Some(columns))?]
            }
        };
        Ok(BoundEvaluator {
            params: *params,
            evaluation,
            blocks,
        })
    }

    pub fn params(&self) -> &SimulationParams {
        &self.params
    }

    pub fn evaluation(&self) -> Evaluation {
        self.evaluation
    }

    /// Effective on-site phase per full step for step time `tau_step`.
    fn theta(&self, tau_step: f64) -> f64 {
        self.params.u_eff_prime * tau_step
    }

    fn check_point(tau: f64, steps: u64) -> Result<()> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::domain(format!("time must be finite and non-negative, got {tau}")));
        }
        if steps < 1 {
            return Err(Error::domain("need at least one Trotter step"));
        }
        Ok(())
    }

    pub fn bound(&self, tau: f64, steps: u64, order: TrotterOrder) -> Result<Bound> {
        Self::check_point(tau, steps)?;
        let theta = self.theta(tau / steps as f64);
        self.blocks
            .iter()
            .try_fold(Bound::ZERO, |acc, b| Ok(acc.max(b.bound(tau, steps, theta, order)?)))
    }

    /// Simulated and exact propagators over the full Fock space, assembled
    /// from the blocks. Not available for [`Evaluation::Inputs`].
    pub fn full_propagators(&self, tau: f64, steps: u64, order: TrotterOrder) -> Result<(Operator, Operator)> {
        Self::check_point(tau, steps)?;
        if let Evaluation::Inputs { .. } = self.evaluation {
            return Err(Error::domain("full propagators need blocked or dense evaluation"));
        }
        let full = Arc::new(Basis::full(self.params.model.sites)?);
        let n = full.dim();
        let theta = self.theta(tau / steps as f64);
        let mut sim = Array2::<C64>::zeros((n, n));
        let mut exact = Array2::<C64>::zeros((n, n));
        for block in &self.blocks {
            let basis = block.factors.basis();
            let idx: Vec<usize> = basis
                .states()
                .iter()
                .map(|&s| full.index_of(s).expect("block state in full basis"))
                .collect();
            let (bs, be) = block.propagators(tau, steps, theta, order)?;
            for (r, &i) in idx.iter().enumerate() {
                for (c, &j) in idx.iter().enumerate() {
                    sim[[i, j]] = bs[[r, c]];
                    exact[[i, j]] = be[[r, c]];
                }
            }
        }
        Ok((Operator::from_matrix(full.clone(), sim)?, Operator::from_matrix(full, exact)?))
    }

    /// Anti-fidelity of one input state given in the full-basis ordering.
    pub fn state_antifidelity(&self, tau: f64, steps: u64, order: TrotterOrder, psi: &Array1<C64>) -> Result<f64> {
        let (sim, exact) = self.full_propagators(tau, steps, order)?;
        antifidelity_state(psi, &sim, &exact)
    }
}

/// One row of a sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub order: TrotterOrder,
    pub bound: f64,
    pub clamped: bool,
}

fn rows_for<X: Copy + Sync>(
    grid: &[X],
    orders: &[TrotterOrder],
    eval: impl Fn(X, TrotterOrder) -> Result<(f64, Bound)> + Sync,
) -> Result<Vec<SweepRow>> {
    let points: Vec<(X, TrotterOrder)> = grid
        .iter()
        .flat_map(|&x| orders.iter().map(move |&o| (x, o)))
        .collect();
    points
        .par_iter()
        .map(|&(x, order)| {
            let (xv, b) = eval(x, order)?;
            Ok(SweepRow {
                x: xv,
                order,
                bound: b.value,
                clamped: b.clamped,
            })
        })
        .collect()
}

/// Bound versus total time at a fixed number of steps.
pub fn sweep_time(
    params: &SimulationParams,
    taus: &[f64],
    orders: &[TrotterOrder],
    steps: u64,
    evaluation: Evaluation,
) -> Result<Vec<SweepRow>> {
    let ev = BoundEvaluator::new(params, evaluation)?;
    rows_for(taus, orders, |tau, o| Ok((tau, ev.bound(tau, steps, o)?)))
}

/// Bound versus number of steps at a fixed total time.
pub fn sweep_steps(
    params: &SimulationParams,
    total_time: f64,
    steps: &[u64],
    orders: &[TrotterOrder],
    evaluation: Evaluation,
) -> Result<Vec<SweepRow>> {
    let ev = BoundEvaluator::new(params, evaluation)?;
    rows_for(steps, orders, |m, o| Ok((m as f64, ev.bound(total_time, m, o)?)))
}

/// Bound versus chain length at fixed time and one step.
pub fn sweep_sites(
    params: &SimulationParams,
    sites: &[usize],
    tau: f64,
    orders: &[TrotterOrder],
    evaluation: Evaluation,
    max_sites: usize,
) -> Result<Vec<SweepRow>> {
    if let Some(&m) = sites.iter().find(|&&m| m > max_sites) {
        return Err(Error::domain(format!(
            "{m} sites exceeds the cap of {max_sites}; the full space has 4^M states, raise the cap explicitly if memory allows"
        )));
    }
    let evaluators: Vec<BoundEvaluator> = sites
        .par_iter()
        .map(|&m| BoundEvaluator::new(&params.with_sites(m), evaluation))
        .collect::<Result<_>>()?;
    let indexed: Vec<usize> = (0..sites.len()).collect();
    rows_for(&indexed, orders, |k, o| Ok((sites[k] as f64, evaluators[k].bound(tau, 1, o)?)))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::domain("slope fit needs at least two matching points"));
    }
    if x.iter().chain(y).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::numeric("slope fit needs positive finite values"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Boundary;
    use crate::linalg::HermitianEigen;
    use crate::protocol::trotter_step;

    fn fig3(sites: usize) -> SimulationParams {
        SimulationParams::new(ModelParams::isotropic(sites, 1.0, 10.0, 0.3), 0.0)
    }

    /// ‖D‖₂ from the largest eigenvalue of D†D.
    fn svd_oracle(d: &Array2<C64>) -> f64 {
        let g = linalg::adjoint(&d.view()).dot(d);
        let e = HermitianEigen::new(&g.view()).unwrap().eigenvalues();
        e.last().unwrap().max(0.0).sqrt()
    }

    fn scalar(basis: &Arc<Basis>, z: C64) -> Operator {
        Operator::identity(basis.clone()).scaled(z)
    }

    #[test]
    fn distance_scalar_case() {
        let b = Arc::new(Basis::full(1).unwrap());
        let one = Operator::identity(b.clone());
        assert_eq!(operator_distance(&one, &one).unwrap(), 0.0);
        for theta in [0.3, 1.7, 3.0] {
            let v = scalar(&b, C64::from_polar(1.0, theta));
            let d = operator_distance(&one, &v).unwrap();
            assert!((d - 2.0 * (theta / 2.0).sin().abs()).abs() < 1e-14);
            let (aligned, at) = phase_aligned_distance(&one, &v).unwrap();
            assert!(aligned < 1e-7, "{aligned} at {at}");
        }
    }

    #[test]
    fn distance_matches_oracle() {
        let b = Arc::new(Basis::full(2).unwrap());
        let p = ModelParams::isotropic(2, 1.0, 3.0, 0.7);
        let h = build_tju(&b, &p).unwrap();
        let u = ExactEvolution::new(&h).unwrap().propagator(0.37).unwrap();
        let d = operator_distance(&u, &Operator::identity(b.clone())).unwrap();
        let oracle = svd_oracle(&(u.matrix() - &linalg::identity(16)));
        assert!((d - oracle).abs() < 1e-12);
        let f = operator_distance_with(&u, &Operator::identity(b), Norm::Frobenius).unwrap();
        assert!(f >= d);
    }

    #[test]
    fn bound_clamps_past_two() {
        let b = Bound::from_distance(2f64.sqrt() * 1.01);
        assert!(b.clamped);
        assert_eq!(b.value, 1.0);
        let ok = Bound::from_distance(1.0);
        assert!(!ok.clamped);
        assert_eq!(ok.value, 1.0);
    }

    #[test]
    fn non_unitary_rejected() {
        let b = Arc::new(Basis::full(1).unwrap());
        let one = Operator::identity(b.clone());
        let half = one.scaled(C64::new(0.5, 0.0));
        assert!(matches!(antifidelity_bound(&half, &one), Err(Error::Domain(_))));
    }

    #[test]
    fn state_antifidelity_edges() {
        let b = Arc::new(Basis::full(1).unwrap());
        let one = Operator::identity(b.clone());
        let mut psi = Array1::<C64>::zeros(4);
        psi[1] = C64::new(1.0, 0.0);
        assert_eq!(antifidelity_state(&psi, &one, &one).unwrap(), 0.0);
        // swap |0> <-> |1>: orthogonal outputs for psi = |1>
        let mut m = linalg::identity(4);
        m[[0, 0]] = C64::new(0.0, 0.0);
        m[[1, 1]] = C64::new(0.0, 0.0);
        m[[0, 1]] = C64::new(1.0, 0.0);
        m[[1, 0]] = C64::new(1.0, 0.0);
        let swap = Operator::from_matrix(b, m).unwrap();
        assert!((antifidelity_state(&psi, &swap, &one).unwrap() - 1.0).abs() < 1e-15);
        psi[0] = C64::new(1.0, 0.0);
        assert!(antifidelity_state(&psi, &swap, &one).is_err());
    }

    #[test]
    fn blocked_matches_dense() {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let mut p = SimulationParams::new(ModelParams::isotropic(4, 1.0, 5.0, 0.3).with_boundary(boundary), -2.0);
            p.model.u = 5.0;
            let blocked = BoundEvaluator::new(&p, Evaluation::Blocked).unwrap();
            let dense = BoundEvaluator::new(&p, Evaluation::Dense).unwrap();
            for order in [TrotterOrder::First, TrotterOrder::Second] {
                let a = blocked.bound(0.4, 3, order).unwrap().squared_distance;
                let b = dense.bound(0.4, 3, order).unwrap().squared_distance;
                assert!((a - b).abs() < 1e-12 * b.max(1e-300) + 1e-15, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn dense_matches_direct_construction() {
        // evaluator against the public step + exact propagator route
        let p = SimulationParams::new(ModelParams::isotropic(2, 1.0, 5.0, 0.3), -2.0);
        let tau = 0.01;
        let ev = BoundEvaluator::new(&p, Evaluation::Dense).unwrap();
        let basis = Arc::new(Basis::full(2).unwrap());
        let step = trotter_step(&basis, &p.model, p.u_eff_prime * tau, 1, tau, TrotterOrder::First).unwrap();
        let exact = ExactEvolution::new(&build_tju(&basis, &p.target_model()).unwrap())
            .unwrap()
            .propagator(tau)
            .unwrap();
        let direct = antifidelity_bound(&step, &exact).unwrap();
        let via = ev.bound(tau, 1, TrotterOrder::First).unwrap();
        assert!((direct.value - via.value).abs() < 1e-15 + 1e-10 * direct.value);
    }

    #[test]
    fn regression_two_site_first_order() {
        let ev = BoundEvaluator::new(&fig3(2), Evaluation::Blocked).unwrap();
        let b = ev.bound(0.01, 1, TrotterOrder::First).unwrap();
        assert!((b.value - REGRESSION_M2_TAU_0_01).abs() < 1e-6 * REGRESSION_M2_TAU_0_01, "{:.12e}", b.value);
    }

    const REGRESSION_M2_TAU_0_01: f64 = 5.059173779298e-10;

    #[test]
    fn inputs_bounded_by_full() {
        let p = fig3(3);
        let full = BoundEvaluator::new(&p, Evaluation::Blocked).unwrap().bound(1.0, 2, TrotterOrder::First).unwrap();
        let part = BoundEvaluator::new(&p, Evaluation::Inputs { up: 1, down: 1 })
            .unwrap()
            .bound(1.0, 2, TrotterOrder::First)
            .unwrap();
        assert!(part.squared_distance <= full.squared_distance + 1e-14);
        assert!(BoundEvaluator::new(&p, Evaluation::Inputs { up: 4, down: 0 }).is_err());
    }

    #[test]
    fn full_propagators_agree_with_bound() {
        let p = fig3(3);
        let ev = BoundEvaluator::new(&p, Evaluation::Blocked).unwrap();
        let (sim, exact) = ev.full_propagators(0.5, 2, TrotterOrder::Second).unwrap();
        let direct = antifidelity_bound(&sim, &exact).unwrap();
        let blocked = ev.bound(0.5, 2, TrotterOrder::Second).unwrap();
        assert!((direct.squared_distance - blocked.squared_distance).abs() < 1e-12);
    }

    #[test]
    fn sweeps_are_ordered() {
        let p = fig3(2);
        let rows = sweep_time(&p, &[0.1, 0.2, 0.3], &[TrotterOrder::First, TrotterOrder::Second], 1, Evaluation::Blocked).unwrap();
        let xs: Vec<(f64, u8)> = rows.iter().map(|r| (r.x, r.order.as_u8())).collect();
        assert_eq!(xs, vec![(0.1, 1), (0.1, 2), (0.2, 1), (0.2, 2), (0.3, 1), (0.3, 2)]);
        let steps = sweep_steps(&p, 1.0, &[1, 2, 4], &[TrotterOrder::First], Evaluation::Blocked).unwrap();
        assert!(steps.windows(2).all(|w| w[1].bound <= w[0].bound + 1e-12));
        assert!(sweep_sites(&p, &[2, 7], 0.01, &[TrotterOrder::First], Evaluation::Blocked, 6).is_err());
    }

    #[test]
    fn slope_fit() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.0)).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 2.0).abs() < 1e-12);
        assert!(loglog_slope(&[1.0], &[1.0]).is_err());
    }
}
