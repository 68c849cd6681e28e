//! Physical parameters of the shift-and-collide scheme: recoil energy, trap
//! frequency, collision prefactor `K`, collisional phases of shift
//! trajectories, shift-time and ramp-time constraints, and the number of
//! Trotter steps that fit into the atoms' lifetime.
//!
//! SI units throughout except [`effective_u`], which works in model units
//! (`ħ = 1`, energies in `t`, times in `ħ/t`).

use std::f64::consts::{PI, TAU};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{resource_count, CollisionPhase, TrotterOrder};

/// Reduced Planck constant (J s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Atomic mass unit (kg), CODATA 2018.
pub const AMU: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpecies {
    pub label: String,
    pub mass_kg: f64,
    pub a_s_m: f64,
    pub lambda_m: f64,
}

impl AtomSpecies {
    pub fn new(label: &str, mass_kg: f64, a_s_m: f64, lambda_m: f64) -> Result<AtomSpecies> {
        let s = AtomSpecies {
            label: label.to_string(),
            mass_kg,
            a_s_m,
            lambda_m,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.mass_kg) || !ok(self.lambda_m) || !(self.a_s_m.is_finite() && self.a_s_m >= 0.0) {
            return Err(Error::domain(format!(
                "species '{}' needs positive mass, wavelength and scattering length",
                self.label
            )));
        }
        Ok(())
    }

    pub fn rubidium87() -> AtomSpecies {
        AtomSpecies {
            label: "Rb".into(),
            mass_kg: 86.909_180_5 * AMU,
            a_s_m: 5.1e-9,
            lambda_m: 826e-9,
        }
    }

    pub fn potassium40() -> AtomSpecies {
        AtomSpecies {
            label: "K".into(),
            mass_kg: 39.963_998_2 * AMU,
            a_s_m: 5.5e-9,
            lambda_m: 826e-9,
        }
    }

    pub fn lithium6() -> AtomSpecies {
        AtomSpecies {
            label: "Li".into(),
            mass_kg: 6.015_122_9 * AMU,
            a_s_m: 2.4e-9,
            lambda_m: 670e-9,
        }
    }

    /// Rb, K and Li with their typical lattice wavelengths and scattering lengths.
    pub fn defaults() -> Vec<AtomSpecies> {
        vec![Self::rubidium87(), Self::potassium40(), Self::lithium6()]
    }
}

/// Parse a species table: a JSON array of `{label, mass_kg, a_s_m, lambda_m}`.
pub fn species_from_json(text: &str) -> Result<Vec<AtomSpecies>> {
    let table: Vec<AtomSpecies> =
        serde_json::from_str(text).map_err(|e| Error::domain(format!("species table: {e}")))?;
    for s in &table {
        s.validate()?;
    }
    Ok(table)
}

/// Load a species table file, or the built-in defaults when `path` is `None`.
pub fn load_species(path: Option<&Path>) -> std::io::Result<Result<Vec<AtomSpecies>>> {
    match path {
        None => Ok(Ok(AtomSpecies::defaults())),
        Some(p) => Ok(species_from_json(&std::fs::read_to_string(p)?)),
    }
}

pub fn find_species<'a>(table: &'a [AtomSpecies], label: &str) -> Result<&'a AtomSpecies> {
    table
        .iter()
        .find(|s| s.label.eq_ignore_ascii_case(label))
        .ok_or_else(|| Error::domain(format!("unknown species '{label}'")))
}

fn check_depth(depth: f64) -> Result<()> {
    if depth.is_finite() && depth > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("lattice depth V0/E_R must be positive, got {depth}")))
    }
}

/// `E_R = ħ² (2π)² / (2 m λ²)`.
pub fn recoil_energy(s: &AtomSpecies) -> f64 {
    HBAR * HBAR * (TAU * TAU) / (2.0 * s.mass_kg * s.lambda_m * s.lambda_m)
}

/// `ω_t = √(V₀/E_R) ħ (2π)² / (m λ²)`.
pub fn trap_frequency(s: &AtomSpecies, depth: f64) -> Result<f64> {
    check_depth(depth)?;
    Ok(depth.sqrt() * HBAR * TAU * TAU / (s.mass_kg * s.lambda_m * s.lambda_m))
}

/// `K = (4π a_s ħ / m) (√(2π))³ / λ³ (V₀/E_R)^{3/4}` in rad/s.
pub fn k_prefactor(s: &AtomSpecies, depth: f64) -> Result<f64> {
    check_depth(depth)?;
    Ok(4.0 * PI * s.a_s_m * HBAR / s.mass_kg * TAU.powf(1.5) / s.lambda_m.powi(3) * depth.powf(0.75))
}

/// Width of the on-site Gaussian, `x₀ = (E_R/V₀)^{1/4} λ / 2π`.
pub fn gaussian_width(s: &AtomSpecies, depth: f64) -> Result<f64> {
    check_depth(depth)?;
    Ok(depth.powf(-0.25) * s.lambda_m / TAU)
}

/// Position of one atom during a shift sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Trajectory {
    /// Linear move `from → to` over `shift`, hold for `hold`, linear return.
    /// Spans `[start, start + 2 shift + hold]`.
    Trapezoid {
        from: f64,
        to: f64,
        shift: f64,
        hold: f64,
        #[serde(default)]
        start: f64,
    },
    /// Piecewise-linear samples; times strictly increasing.
    Sampled { times: Vec<f64>, positions: Vec<f64> },
}

impl Trajectory {
    /// Atom resting at `position` for `[0, duration]`.
    pub fn stationary(position: f64, duration: f64) -> Trajectory {
        Trajectory::Trapezoid {
            from: position,
            to: position,
            shift: 0.0,
            hold: duration,
            start: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Trajectory::Trapezoid {
                from,
                to,
                shift,
                hold,
                start,
            } => {
                if ![*from, *to, *shift, *hold, *start].iter().all(|v| v.is_finite()) {
                    return Err(Error::numeric("non-finite trajectory parameter"));
                }
                if *shift < 0.0 || *hold < 0.0 {
                    return Err(Error::domain("shift and hold durations must be non-negative"));
                }
            }
            Trajectory::Sampled { times, positions } => {
                if times.len() != positions.len() || times.len() < 2 {
                    return Err(Error::domain("sampled trajectory needs ≥ 2 matching samples"));
                }
                if times.iter().chain(positions).any(|v| !v.is_finite()) {
                    return Err(Error::numeric("non-finite trajectory sample"));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::domain("sample times must increase"));
                }
            }
        }
        Ok(())
    }

    pub fn span(&self) -> (f64, f64) {
        match self {
            Trajectory::Trapezoid {
                shift, hold, start, ..
            } => (*start, start + 2.0 * shift + hold),
            Trajectory::Sampled { times, .. } => (times[0], *times.last().unwrap()),
        }
    }

    /// Points where the trajectory has kinks.
    fn knots(&self) -> Vec<f64> {
        match self {
            Trajectory::Trapezoid {
                shift, hold, start, ..
            } => vec![*start, start + shift, start + shift + hold, start + 2.0 * shift + hold],
            Trajectory::Sampled { times, .. } => times.clone(),
        }
    }

    pub fn position(&self, time: f64) -> f64 {
        match self {
            Trajectory::Trapezoid {
                from,
                to,
                shift,
                hold,
                start,
            } => {
                let t = time - start;
                let lerp = |f: f64| from + (to - from) * f.clamp(0.0, 1.0);
                if t <= *shift {
                    if *shift > 0.0 {
                        lerp(t / shift)
                    } else {
                        *to
                    }
                } else if t <= shift + hold {
                    *to
                } else if *shift > 0.0 {
                    lerp(1.0 - (t - shift - hold) / shift)
                } else {
                    *to
                }
            }
            Trajectory::Sampled { times, positions } => {
                if time <= times[0] {
                    return positions[0];
                }
                let k = times.partition_point(|&x| x <= time);
                if k >= times.len() {
                    return *positions.last().unwrap();
                }
                let (t0, t1) = (times[k - 1], times[k]);
                let f = (time - t0) / (t1 - t0);
                positions[k - 1] + f * (positions[k] - positions[k - 1])
            }
        }
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1)
        + adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `eps`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    // seed with a few panels so narrow features are not skipped
    const PANELS: usize = 16;
    let h = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (f0, f1) = (f(x0), f(x1));
            let (m, fm, whole) = simpson(f, x0, f0, x1, f1);
            adaptive_simpson(f, x0, f0, x1, f1, m, fm, whole, eps / PANELS as f64, 40)
        })
        .sum()
}

/// `χ = K ∫ dτ exp(-[x↑(τ) - x↓(τ)]² / 2x₀²)`, accurate to 1e-6 rad.
pub fn collisional_phase(s: &AtomSpecies, depth: f64, up: &Trajectory, down: &Trajectory) -> Result<f64> {
    up.validate()?;
    down.validate()?;
    let (a0, a1) = up.span();
    let (b0, b1) = down.span();
    let scale = (a1 - a0).abs().max(1e-300);
    if (a0 - b0).abs() > 1e-9 * scale || (a1 - b1).abs() > 1e-9 * scale {
        return Err(Error::domain("trajectories must cover the same time interval"));
    }
    let k = k_prefactor(s, depth)?;
    let x0 = gaussian_width(s, depth)?;
    let integrand = |t: f64| {
        let dx = up.position(t) - down.position(t);
        (-dx * dx / (2.0 * x0 * x0)).exp()
    };
    let mut knots: Vec<f64> = up.knots().into_iter().chain(down.knots()).filter(|&t| t >= a0 && t <= a1).collect();
    knots.push(a0);
    knots.push(a1);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * scale);
    let segments = (knots.len() - 1).max(1) as f64;
    let eps = 1e-7 / k.max(1e-300) / segments;
    let total: f64 = knots
        .windows(2)
        .map(|w| integrate(&integrand, w[0], w[1], eps))
        .sum();
    let chi = k * total;
    if !chi.is_finite() {
        return Err(Error::numeric("collisional phase is not finite"));
    }
    Ok(chi)
}

/// Default shift leg: `4 · 2π/ω_t`.
pub fn default_shift_time(s: &AtomSpecies, depth: f64) -> Result<f64> {
    Ok(4.0 * TAU / trap_frequency(s, depth)?)
}

/// Trapezoidal pair (↑ moves one site onto a resting ↓) whose hold time is
/// chosen by bisection so the collisional phase equals `target`.
pub fn trajectory_for_phase(s: &AtomSpecies, depth: f64, target: f64) -> Result<(Trajectory, Trajectory)> {
    let spacing = s.lambda_m / 2.0;
    let shift = default_shift_time(s, depth)?;
    let pair = |hold: f64| {
        let up = Trajectory::Trapezoid {
            from: 0.0,
            to: spacing,
            shift,
            hold,
            start: 0.0,
        };
        let down = Trajectory::stationary(spacing, 2.0 * shift + hold);
        (up, down)
    };
    let phase_at = |hold: f64| {
        let (u, d) = pair(hold);
        collisional_phase(s, depth, &u, &d)
    };
    let base = phase_at(0.0)?;
    if target < base {
        return Err(Error::domain(format!(
            "target phase {target} is below the phase {base} picked up by the shift legs alone"
        )));
    }
    let k = k_prefactor(s, depth)?;
    if k <= 0.0 {
        return Err(Error::domain("no collisional phase without a scattering length"));
    }
    let (mut lo, mut hi) = (0.0, (target - base) / k * 2.0 + 1e-9);
    while phase_at(hi)? < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phase_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1e-12) {
            break;
        }
    }
    Ok(pair(0.5 * (lo + hi)))
}

/// `τ_sh > 2π (4/ω_t + 1/K)`.
pub fn shift_time_bound(s: &AtomSpecies, depth: f64) -> Result<f64> {
    let omega = trap_frequency(s, depth)?;
    let k = k_prefactor(s, depth)?;
    if k <= 0.0 {
        return Err(Error::domain("shift time is unbounded without a scattering length"));
    }
    Ok(TAU * (4.0 / omega + 1.0 / k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveInteraction {
    pub u_eff: f64,
    pub u_total: f64,
}

/// `U_eff = φ_eff / τ_step` and `U = U_s + 3 d U_eff` in model units.
///
/// `φ_eff` is the phase with its winding removed, so `φ = 2π + U'τ` yields
/// `U_eff = U'`.
pub fn effective_u(phase: CollisionPhase, tau_step: f64, d: u32, u_s: f64) -> Result<EffectiveInteraction> {
    if !(tau_step > 0.0 && tau_step.is_finite()) {
        return Err(Error::domain("step time must be positive"));
    }
    let u_eff = phase.effective() / tau_step;
    Ok(EffectiveInteraction {
        u_eff,
        u_total: u_s + 3.0 * d as f64 * u_eff,
    })
}

/// Collision phase that makes the simulated interaction equal `u_target`.
pub fn phase_for_interaction(u_target: f64, u_s: f64, d: u32, tau_step: f64) -> Result<CollisionPhase> {
    if !(tau_step > 0.0 && tau_step.is_finite()) {
        return Err(Error::domain("step time must be positive"));
    }
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let u_eff = (u_target - u_s) / (3.0 * d as f64);
    Ok(CollisionPhase::from_effective(u_eff * tau_step))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampWindow {
    pub min_s: f64,
    pub max_s: f64,
    pub feasible: bool,
}

impl RampWindow {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min_s + self.max_s)
    }
}

/// Ramp time between `safety · 2π/ω_t` (no band excitation) and `ħπ/2t`
/// (sudden on the hopping scale). `hop_energy` is `t` in joules.
pub fn ramp_window(s: &AtomSpecies, depth: f64, hop_energy: f64, safety: f64) -> Result<RampWindow> {
    let omega = trap_frequency(s, depth)?;
    if !(hop_energy > 0.0) {
        return Err(Error::domain("hopping energy must be positive"));
    }
    let min_s = safety * TAU / omega;
    let max_s = HBAR * PI / (2.0 * hop_energy);
    Ok(RampWindow {
        min_s,
        max_s,
        feasible: min_s < max_s,
    })
}

/// Hopping energy with `ħπ/2t` equal to `hop_time` seconds.
pub fn hop_energy_for_time(hop_time: f64) -> f64 {
    HBAR * PI / (2.0 * hop_time)
}

/// Timing assumptions for [`step_budget`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepTiming {
    /// `ħπ/2t` in seconds; fixes the hopping energy.
    pub hop_time_s: f64,
    /// Simulated time per Trotter step in `ħ/t`.
    pub step_time: f64,
    /// Factor on the minimal ramp time `2π/ω_t`.
    pub ramp_safety: f64,
}

impl Default for StepTiming {
    fn default() -> Self {
        StepTiming {
            hop_time_s: 1e-3,
            step_time: 0.2,
            ramp_safety: 1.0,
        }
    }
}

impl StepTiming {
    pub fn hop_energy(&self) -> f64 {
        hop_energy_for_time(self.hop_time_s)
    }

    /// Lab time spent in the hopping stage per step.
    pub fn dwell_s(&self) -> f64 {
        self.step_time * HBAR / self.hop_energy()
    }
}

/// Lab time of one Trotter step: each `H_zz` simulation per dimension takes
/// two shift-and-hold sequences, the lattice is ramped up and back down once,
/// and the hopping stage runs for the step time.
pub fn step_wall_time(s: &AtomSpecies, depth: f64, order: TrotterOrder, d: u32, timing: &StepTiming) -> Result<f64> {
    let per_step = resource_count(1, order, d);
    let shifts = 2.0 * per_step.hzz_simulations as f64;
    let ramp = ramp_window(s, depth, timing.hop_energy(), timing.ramp_safety)?;
    Ok(shifts * shift_time_bound(s, depth)? + 2.0 * ramp.midpoint() + timing.dwell_s())
}

/// Number of Trotter steps that fit into `lifetime` seconds.
pub fn step_budget(
    s: &AtomSpecies,
    depth: f64,
    lifetime: f64,
    order: TrotterOrder,
    d: u32,
    timing: &StepTiming,
) -> Result<u64> {
    if !(lifetime >= 0.0 && lifetime.is_finite()) {
        return Err(Error::domain("lifetime must be non-negative"));
    }
    Ok((lifetime / step_wall_time(s, depth, order, d, timing)?).floor() as u64)
}
