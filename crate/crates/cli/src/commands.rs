use ndarray::Array1;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tjusim_core::analysis::{
    antifidelity_state, sweep_sites, sweep_steps, sweep_time, BoundEvaluator, Evaluation, SweepRow,
};
use tjusim_core::collision::{
    k_prefactor, ramp_window, recoil_energy, shift_time_bound, step_budget, step_wall_time, trap_frequency,
    RampWindow,
};
use tjusim_core::protocol::{resource_count, ResourceCount};
use tjusim_core::{Basis, Boundary, Spin, TrotterOrder};

use crate::config::{CurveJob, Format, Job, SectorArg};
use crate::error::Result;
use crate::output::{sci, to_json, Csv};

/// Run a validated job and render its output.
pub fn run(job: &Job, format: Format) -> Result<String> {
    match job {
        Job::ShiftTimes { species, depths } => {
            let mut rows = Vec::with_capacity(species.len() * depths.len());
            for s in species {
                for &d in depths {
                    rows.push(ShiftRow {
                        species: s.label.clone(),
                        v0_over_er: d,
                        tau_sh_seconds: shift_time_bound(s, d)?,
                    });
                }
            }
            match format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut csv = Csv::new(&["species", "V0_over_ER", "tau_sh_seconds"]);
                    for r in &rows {
                        csv.row(&[r.species.clone(), sci(r.v0_over_er), sci(r.tau_sh_seconds)]);
                    }
                    Ok(csv.finish())
                }
            }
        }
        Job::Time { curve, taus, m } => {
            let rows = sweep_time(&curve.params, taus, &curve.orders, *m, eval(curve))?;
            curve_table("tau", &rows, format, sci)
        }
        Job::Steps { curve, tau, ms } => {
            let rows = sweep_steps(&curve.params, *tau, ms, &curve.orders, eval(curve))?;
            curve_table("m", &rows, format, |x| format!("{x:.0}"))
        }
        Job::Sites {
            curve,
            tau,
            sites,
            max_sites,
        } => {
            let rows = sweep_sites(&curve.params, sites, *tau, &curve.orders, eval(curve), *max_sites)?;
            curve_table("M", &rows, format, |x| format!("{x:.0}"))
        }
        Job::Feasibility {
            species,
            depth,
            lifetime_s,
            m,
            order,
            dimension,
            timing,
        } => {
            let window = ramp_window(species, *depth, timing.hop_energy(), timing.ramp_safety)?;
            let steps_budget = step_budget(species, *depth, *lifetime_s, *order, *dimension, timing)?;
            let status = if !window.feasible {
                "ramp_infeasible"
            } else if *m > steps_budget {
                "exceeds_lifetime"
            } else {
                "ok"
            };
            to_json(&FeasibilityReport {
                species: species.label.clone(),
                v0_over_er: *depth,
                recoil_energy_j: recoil_energy(species),
                k: k_prefactor(species, *depth)?,
                omega_t: trap_frequency(species, *depth)?,
                tau_sh_bound: shift_time_bound(species, *depth)?,
                ramp_window: window,
                step_wall_time_s: step_wall_time(species, *depth, *order, *dimension, timing)?,
                lifetime_s: *lifetime_s,
                steps_budget,
                requested: Requested {
                    m: *m,
                    order: *order,
                    dimension: *dimension,
                },
                resource_counts: resource_count(*m, *order, *dimension),
                status,
            })
        }
        Job::Evolve {
            params,
            sector,
            tau,
            m,
            order,
            samples,
            seed,
            include_propagator,
        } => {
            let ev = BoundEvaluator::new(params, sector.evaluation())?;
            let bound = ev.bound(*tau, *m, *order)?;
            let needs_full = *samples > 0 || *include_propagator;
            let full = if needs_full {
                let blocked = match sector {
                    SectorArg::Full => ev,
                    SectorArg::Spin { .. } => BoundEvaluator::new(params, Evaluation::Blocked)?,
                };
                Some(blocked.full_propagators(*tau, *m, *order)?)
            } else {
                None
            };
            let max_state_antifidelity = match &full {
                Some((sim, exact)) if *samples > 0 => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let basis = sim.basis().clone();
                    let mut worst = 0.0f64;
                    for _ in 0..*samples {
                        let psi = random_state(&mut rng, &basis, *sector);
                        worst = worst.max(antifidelity_state(&psi, sim, exact)?);
                    }
                    Some(worst)
                }
                _ => None,
            };
            let propagator = match (&full, include_propagator) {
                (Some((sim, exact)), true) => Some(Propagators {
                    states: sim.basis().states().iter().map(|s| s.bits()).collect(),
                    simulated: pairs(sim.matrix()),
                    exact: pairs(exact.matrix()),
                }),
                _ => None,
            };
            let report = EvolveReport {
                sites: params.model.sites,
                boundary: params.model.boundary,
                sector: sector.to_string(),
                tau: *tau,
                m: *m,
                order: *order,
                u_target: params.target_model().u,
                bound: bound.value,
                squared_distance: bound.squared_distance,
                clamped: bound.clamped,
                samples: *samples,
                seed: *seed,
                max_state_antifidelity,
                propagator,
            };
            match format {
                Format::Json => to_json(&report),
                Format::Csv => {
                    let mut csv = Csv::new(&["tau", "m", "order", "bound", "clamped", "max_state_antifidelity"]);
                    csv.row(&[
                        sci(report.tau),
                        report.m.to_string(),
                        report.order.as_u8().to_string(),
                        sci(report.bound),
                        report.clamped.to_string(),
                        report.max_state_antifidelity.map(sci).unwrap_or_default(),
                    ]);
                    Ok(csv.finish())
                }
            }
        }
    }
}

fn eval(curve: &CurveJob) -> Evaluation {
    curve.sector.evaluation()
}

fn curve_table(x_name: &str, rows: &[SweepRow], format: Format, fmt_x: impl Fn(f64) -> String) -> Result<String> {
    match format {
        Format::Json => {
            let out: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        x_name: r.x,
                        "order": r.order,
                        "bound": r.bound,
                        "clamped": r.clamped,
                    })
                })
                .collect();
            to_json(&out)
        }
        Format::Csv => {
            let mut csv = Csv::new(&[x_name, "order", "bound"]);
            for r in rows {
                csv.row(&[fmt_x(r.x), r.order.as_u8().to_string(), sci(r.bound)]);
            }
            Ok(csv.finish())
        }
    }
}

/// Normalized random state, restricted to one spin sector if requested.
fn random_state(rng: &mut ChaCha8Rng, basis: &Basis, sector: SectorArg) -> Array1<Complex64> {
    let keep = |i: usize| match sector {
        SectorArg::Full => true,
        SectorArg::Spin { up, down } => {
            let s = basis.state(i);
            s.spin_count(Spin::Up) as usize == up && s.spin_count(Spin::Down) as usize == down
        }
    };
    let mut psi = Array1::from_shape_fn(basis.dim(), |i| {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if keep(i) {
            z
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.mapv_inplace(|z| z / norm);
    psi
}

fn pairs(m: &ndarray::Array2<Complex64>) -> Vec<Vec<[f64; 2]>> {
    m.rows().into_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

#[derive(Serialize)]
struct ShiftRow {
    species: String,
    #[serde(rename = "V0_over_ER")]
    v0_over_er: f64,
    tau_sh_seconds: f64,
}

#[derive(Serialize)]
struct Requested {
    m: u64,
    order: TrotterOrder,
    dimension: u32,
}

/// Frequencies in rad/s, times in seconds, energies in joules.
#[derive(Serialize)]
struct FeasibilityReport {
    species: String,
    #[serde(rename = "V0_over_ER")]
    v0_over_er: f64,
    recoil_energy_j: f64,
    #[serde(rename = "K")]
    k: f64,
    omega_t: f64,
    tau_sh_bound: f64,
    ramp_window: RampWindow,
    step_wall_time_s: f64,
    lifetime_s: f64,
    steps_budget: u64,
    requested: Requested,
    resource_counts: ResourceCount,
    status: &'static str,
}

#[derive(Serialize)]
struct Propagators {
    /// Occupation bit patterns labelling rows and columns.
    states: Vec<u32>,
    simulated: Vec<Vec<[f64; 2]>>,
    exact: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct EvolveReport {
    sites: usize,
    boundary: Boundary,
    sector: String,
    tau: f64,
    m: u64,
    order: TrotterOrder,
    u_target: f64,
    bound: f64,
    squared_distance: f64,
    clamped: bool,
    samples: usize,
    seed: u64,
    max_state_antifidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    propagator: Option<Propagators>,
}
