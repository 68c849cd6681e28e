//! Python bindings. Matrices cross the boundary as nested lists of `complex`.

use std::sync::Arc;

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tjusim_core::analysis::{self, BoundEvaluator, Evaluation, SimulationParams, SweepRow, DEFAULT_MAX_SITES};
use tjusim_core::collision::{self as coll, AtomSpecies};
use tjusim_core::protocol::{self, CollisionPhase};
use tjusim_core::{hamiltonian, Basis, Boundary, ModelParams, Sector, TrotterOrder};

fn py_err(err: tjusim_core::Error) -> PyErr {
    match err {
        tjusim_core::Error::Domain(msg) => PyValueError::new_err(msg),
        tjusim_core::Error::Numeric(msg) => PyArithmeticError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for tjusim_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn order(o: u8) -> PyResult<TrotterOrder> {
    TrotterOrder::try_from(o).py()
}

fn boundary(s: &str) -> PyResult<Boundary> {
    s.parse().py()
}

/// `None` for the full space, `(up, down)` for a spin sector, an int for a
/// particle-number sector.
#[derive(FromPyObject)]
enum SectorSpec {
    Spin(usize, usize),
    Particles(usize),
}

fn sector(spec: Option<SectorSpec>) -> Sector {
    match spec {
        None => Sector::Full,
        Some(SectorSpec::Spin(up, down)) => Sector::Spin { up, down },
        Some(SectorSpec::Particles(n)) => Sector::Particles(n),
    }
}

type Matrix = Vec<Vec<Complex64>>;

fn matrix(m: &ndarray::Array2<Complex64>) -> Matrix {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// t-J-U chain parameters. `j` sets all three couplings unless a per-axis
/// value is given.
#[pyclass(name = "Model", frozen)]
struct PyModel {
    inner: ModelParams,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (sites, t=1.0, u=0.0, j=0.0, jx=None, jy=None, jz=None, t_prime=0.0, boundary="open"))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        sites: usize,
        t: f64,
        u: f64,
        j: f64,
        jx: Option<f64>,
        jy: Option<f64>,
        jz: Option<f64>,
        t_prime: f64,
        boundary: &str,
    ) -> PyResult<Self> {
        let inner = ModelParams {
            sites,
            t,
            t_prime,
            u,
            jx: jx.unwrap_or(j),
            jy: jy.unwrap_or(j),
            jz: jz.unwrap_or(j),
            boundary: self::boundary(boundary)?,
        };
        inner.validate().py()?;
        Ok(PyModel { inner })
    }

    #[getter]
    fn sites(&self) -> usize {
        self.inner.sites
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn u(&self) -> f64 {
        self.inner.u
    }

    #[getter]
    fn couplings(&self) -> (f64, f64, f64) {
        (self.inner.jx, self.inner.jy, self.inner.jz)
    }

    #[getter]
    fn boundary(&self) -> &'static str {
        match self.inner.boundary {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }

    /// Hamiltonian matrix on the given sector.
    #[pyo3(signature = (sector=None))]
    fn hamiltonian(&self, sector: Option<SectorSpec>) -> PyResult<Matrix> {
        let basis = Arc::new(Basis::new(self.inner.sites, self::sector(sector)).py()?);
        let h = hamiltonian::build_tju(&basis, &self.inner).py()?;
        Ok(matrix(h.matrix()))
    }

    fn __repr__(&self) -> String {
        let m = &self.inner;
        format!(
            "Model(sites={}, t={}, u={}, jx={}, jy={}, jz={}, t_prime={}, boundary='{}')",
            m.sites,
            m.t,
            m.u,
            m.jx,
            m.jy,
            m.jz,
            m.t_prime,
            self.boundary()
        )
    }
}

/// Occupation basis: states are bit patterns, bit `2j` is site `j` up and
/// bit `2j+1` site `j` down.
#[pyfunction]
#[pyo3(signature = (sites, sector=None))]
fn basis_states(sites: usize, sector: Option<SectorSpec>) -> PyResult<Vec<u32>> {
    let basis = Basis::new(sites, self::sector(sector)).py()?;
    Ok(basis.states().iter().map(|s| s.bits()).collect())
}

/// Protocol simulation of a model: the hopping stage runs with `u` of the
/// model as `U_s`, the collision phase adds `U'_eff`.
#[pyclass(name = "Simulation", frozen)]
struct PySimulation {
    evaluator: BoundEvaluator,
}

fn evaluation(inputs: Option<(usize, usize)>) -> Evaluation {
    match inputs {
        None => Evaluation::Blocked,
        Some((up, down)) => Evaluation::Inputs { up, down },
    }
}

fn sim_params(model: &PyModel, u_eff_prime: f64, dimension: u32) -> PyResult<SimulationParams> {
    let params = SimulationParams {
        model: model.inner,
        u_eff_prime,
        dimension,
    };
    params.validate().py()?;
    Ok(params)
}

#[pymethods]
impl PySimulation {
    #[new]
    #[pyo3(signature = (model, u_eff_prime=0.0, dimension=1, inputs=None))]
    fn new(model: PyRef<'_, PyModel>, u_eff_prime: f64, dimension: u32, inputs: Option<(usize, usize)>) -> PyResult<Self> {
        let params = sim_params(&model, u_eff_prime, dimension)?;
        let evaluator = BoundEvaluator::new(&params, evaluation(inputs)).py()?;
        Ok(PySimulation { evaluator })
    }

    /// Interaction `U = U_s + 3 d U'_eff` of the simulated model.
    #[getter]
    fn target_u(&self) -> f64 {
        self.evaluator.params().target_model().u
    }

    /// Anti-fidelity bound `min(1, ‖U - U₀‖²)` after total time `tau` in `steps` steps.
    #[pyo3(signature = (tau, steps=1, order=2))]
    fn bound(&self, py: Python<'_>, tau: f64, steps: u64, order: u8) -> PyResult<f64> {
        let o = self::order(order)?;
        py.detach(|| self.evaluator.bound(tau, steps, o)).py().map(|b| b.value)
    }

    /// Dict with `value`, `squared_distance` and `clamped`.
    #[pyo3(signature = (tau, steps=1, order=2))]
    fn bound_info<'py>(&self, py: Python<'py>, tau: f64, steps: u64, order: u8) -> PyResult<Bound<'py, PyDict>> {
        let o = self::order(order)?;
        let b = py.detach(|| self.evaluator.bound(tau, steps, o)).py()?;
        let d = PyDict::new(py);
        d.set_item("value", b.value)?;
        d.set_item("squared_distance", b.squared_distance)?;
        d.set_item("clamped", b.clamped)?;
        Ok(d)
    }

    /// `(simulated, exact)` propagators on the full Fock space.
    #[pyo3(signature = (tau, steps=1, order=2))]
    fn propagators(
        &self,
        py: Python<'_>,
        tau: f64,
        steps: u64,
        order: u8,
    ) -> PyResult<(Matrix, Matrix)> {
        let o = self::order(order)?;
        let (sim, exact) = py.detach(|| self.evaluator.full_propagators(tau, steps, o)).py()?;
        Ok((matrix(sim.matrix()), matrix(exact.matrix())))
    }

    /// Anti-fidelity `1 - |⟨Uψ|U₀ψ⟩|²` of a normalized full-space state.
    #[pyo3(signature = (psi, tau, steps=1, order=2))]
    fn state_antifidelity(&self, py: Python<'_>, psi: Vec<Complex64>, tau: f64, steps: u64, order: u8) -> PyResult<f64> {
        let o = self::order(order)?;
        let psi = ndarray::Array1::from_vec(psi);
        py.detach(|| self.evaluator.state_antifidelity(tau, steps, o, &psi)).py()
    }
}

fn rows(rows: Vec<SweepRow>) -> Vec<(f64, u8, f64)> {
    rows.into_iter().map(|r| (r.x, r.order.as_u8(), r.bound)).collect()
}

fn orders(os: Vec<u8>) -> PyResult<Vec<TrotterOrder>> {
    os.into_iter().map(order).collect()
}

/// `(tau, order, bound)` rows.
#[pyfunction]
#[pyo3(signature = (model, taus, u_eff_prime=0.0, steps=1, orders=vec![1, 2], inputs=None))]
fn sweep_time(
    py: Python<'_>,
    model: PyRef<'_, PyModel>,
    taus: Vec<f64>,
    u_eff_prime: f64,
    steps: u64,
    orders: Vec<u8>,
    inputs: Option<(usize, usize)>,
) -> PyResult<Vec<(f64, u8, f64)>> {
    let params = sim_params(&model, u_eff_prime, 1)?;
    let os = self::orders(orders)?;
    py.detach(|| analysis::sweep_time(&params, &taus, &os, steps, evaluation(inputs)))
        .py()
        .map(rows)
}

/// `(m, order, bound)` rows.
#[pyfunction]
#[pyo3(signature = (model, tau, steps, u_eff_prime=0.0, orders=vec![1, 2], inputs=None))]
fn sweep_steps(
    py: Python<'_>,
    model: PyRef<'_, PyModel>,
    tau: f64,
    steps: Vec<u64>,
    u_eff_prime: f64,
    orders: Vec<u8>,
    inputs: Option<(usize, usize)>,
) -> PyResult<Vec<(f64, u8, f64)>> {
    let params = sim_params(&model, u_eff_prime, 1)?;
    let os = self::orders(orders)?;
    py.detach(|| analysis::sweep_steps(&params, tau, &steps, &os, evaluation(inputs)))
        .py()
        .map(rows)
}

/// `(M, order, bound)` rows; the model's own site count is ignored.
#[pyfunction]
#[pyo3(signature = (model, sites, tau, u_eff_prime=0.0, orders=vec![1, 2], max_sites=DEFAULT_MAX_SITES))]
fn sweep_sites(
    py: Python<'_>,
    model: PyRef<'_, PyModel>,
    sites: Vec<usize>,
    tau: f64,
    u_eff_prime: f64,
    orders: Vec<u8>,
    max_sites: usize,
) -> PyResult<Vec<(f64, u8, f64)>> {
    let params = sim_params(&model, u_eff_prime, 1)?;
    let os = self::orders(orders)?;
    py.detach(|| analysis::sweep_sites(&params, &sites, tau, &os, Evaluation::Blocked, max_sites))
        .py()
        .map(rows)
}

#[pyfunction]
fn loglog_slope(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    analysis::loglog_slope(&x, &y).py()
}

/// Dict with `lattice_ramps`, `hzz_simulations` and `rotation_applications`.
#[pyfunction]
#[pyo3(signature = (steps, order=2, dimension=1))]
fn resource_count(py: Python<'_>, steps: u64, order: u8, dimension: u32) -> PyResult<Bound<'_, PyDict>> {
    let rc = protocol::resource_count(steps, self::order(order)?, dimension);
    let d = PyDict::new(py);
    d.set_item("lattice_ramps", rc.lattice_ramps)?;
    d.set_item("hzz_simulations", rc.hzz_simulations)?;
    d.set_item("rotation_applications", rc.rotation_applications)?;
    Ok(d)
}

/// Effective interaction `(U_eff, U)` realized by collision phase `phi`
/// with `winding` full turns removed.
#[pyfunction]
#[pyo3(signature = (phi, tau_step, u_s, dimension=1, winding=0))]
fn effective_u(phi: f64, tau_step: f64, u_s: f64, dimension: u32, winding: i64) -> PyResult<(f64, f64)> {
    let e = coll::effective_u(CollisionPhase::with_winding(phi, winding), tau_step, dimension, u_s).py()?;
    Ok((e.u_eff, e.u_total))
}

/// Collision phase in `[0, 2π)` and its winding for a target interaction.
#[pyfunction]
#[pyo3(signature = (u_target, u_s, tau_step, dimension=1))]
fn phase_for_interaction(u_target: f64, u_s: f64, tau_step: f64, dimension: u32) -> PyResult<(f64, i64)> {
    let p = coll::phase_for_interaction(u_target, u_s, dimension, tau_step).py()?;
    Ok((p.phi(), p.winding()))
}

/// Atomic species in an optical lattice (SI units).
#[pyclass(name = "Species", frozen)]
struct PySpecies {
    inner: AtomSpecies,
}

#[pymethods]
impl PySpecies {
    #[new]
    fn new(label: &str, mass_kg: f64, a_s_m: f64, lambda_m: f64) -> PyResult<Self> {
        Ok(PySpecies {
            inner: AtomSpecies::new(label, mass_kg, a_s_m, lambda_m).py()?,
        })
    }

    /// Built-in species by label: `Rb`, `K` or `Li`.
    #[staticmethod]
    fn builtin(label: &str) -> PyResult<Self> {
        let table = AtomSpecies::defaults();
        Ok(PySpecies {
            inner: coll::find_species(&table, label).py()?.clone(),
        })
    }

    #[getter]
    fn label(&self) -> &str {
        &self.inner.label
    }

    #[getter]
    fn mass_kg(&self) -> f64 {
        self.inner.mass_kg
    }

    #[getter]
    fn a_s_m(&self) -> f64 {
        self.inner.a_s_m
    }

    #[getter]
    fn lambda_m(&self) -> f64 {
        self.inner.lambda_m
    }

    /// Recoil energy in joules.
    fn recoil_energy(&self) -> f64 {
        coll::recoil_energy(&self.inner)
    }

    /// Trap frequency in rad/s at depth `V0/E_R`.
    fn trap_frequency(&self, depth: f64) -> PyResult<f64> {
        coll::trap_frequency(&self.inner, depth).py()
    }

    /// Collisional phase rate `K` in rad/s at depth `V0/E_R`.
    fn k_prefactor(&self, depth: f64) -> PyResult<f64> {
        coll::k_prefactor(&self.inner, depth).py()
    }

    /// Lower bound on one shift-and-hold time in seconds.
    fn shift_time_bound(&self, depth: f64) -> PyResult<f64> {
        coll::shift_time_bound(&self.inner, depth).py()
    }

    /// Trotter steps that fit into `lifetime` seconds with default timing.
    #[pyo3(signature = (depth, lifetime=1.0, order=2, dimension=1))]
    fn step_budget(&self, depth: f64, lifetime: f64, order: u8, dimension: u32) -> PyResult<u64> {
        coll::step_budget(
            &self.inner,
            depth,
            lifetime,
            self::order(order)?,
            dimension,
            &coll::StepTiming::default(),
        )
        .py()
    }

    fn __repr__(&self) -> String {
        format!(
            "Species('{}', mass_kg={:e}, a_s_m={:e}, lambda_m={:e})",
            self.inner.label, self.inner.mass_kg, self.inner.a_s_m, self.inner.lambda_m
        )
    }
}

#[pymodule]
pub fn tjusim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PySimulation>()?;
    m.add_class::<PySpecies>()?;
    m.add_function(wrap_pyfunction!(basis_states, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_time, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_steps, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_sites, m)?)?;
    m.add_function(wrap_pyfunction!(loglog_slope, m)?)?;
    m.add_function(wrap_pyfunction!(resource_count, m)?)?;
    m.add_function(wrap_pyfunction!(effective_u, m)?)?;
    m.add_function(wrap_pyfunction!(phase_for_interaction, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_specs() {
        assert_eq!(sector(None), Sector::Full);
        assert_eq!(sector(Some(SectorSpec::Spin(1, 2))), Sector::Spin { up: 1, down: 2 });
        assert_eq!(sector(Some(SectorSpec::Particles(3))), Sector::Particles(3));
    }

    #[test]
    fn orders_and_boundaries() {
        assert_eq!(order(1).unwrap(), TrotterOrder::First);
        assert_eq!(order(2).unwrap(), TrotterOrder::Second);
        assert!(boundary("periodic").is_ok());
    }
}
