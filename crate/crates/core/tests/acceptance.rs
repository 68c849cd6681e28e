//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and a
//! summary. With `ACCEPTANCE_STRICT=1` the run exits non-zero when any
//! criterion fails. Pass criterion numbers as arguments to run a subset,
//! e.g. `cargo test --test acceptance -- 3 4 5`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tjusim_core::analysis::{
    antifidelity_bound, antifidelity_state, loglog_slope, operator_distance, sweep_sites, sweep_time,
    BoundEvaluator, Evaluation, SimulationParams,
};
use tjusim_core::collision::{k_prefactor, shift_time_bound, AtomSpecies};
use tjusim_core::hamiltonian::{
    build_axis_coupling, build_hubbard, build_spin_coupling, build_tju, double_occupancy, total_spin,
};
use tjusim_core::propagator::{expm, ExactEvolution, Generator};
use tjusim_core::protocol::{global_rotation, resource_count, trotter_evolve, zz_gate_sequence, ResourceCount};
use tjusim_core::{Axis, Chain, ModeOp, ModelParams, Operator, ProtocolSchedule, Spin, TrotterOrder};

use common::{full, random_hermitian, random_state};

// criterion 1
const C1_SLOPE_FIRST: (f64, f64) = (4.0, 0.3);
const C1_SLOPE_SECOND: (f64, f64) = (6.0, 0.45);
// criterion 2
const C2_HARD_GATE: f64 = 5e-3;
const C2_TARGET: f64 = 1e-3;
const C2_SLOPE_FIRST: (f64, f64) = (-2.0, 0.2);
const C2_SLOPE_SECOND: (f64, f64) = (-4.0, 0.4);
// criterion 4
const C4_K_RB: (f64, f64) = (19e3, 0.20);
const C4_K_LI: (f64, f64) = (230e3, 0.25);
// criterion 5
const C5_RB_RANGE: (f64, f64) = (100e-6, 1e-3);
const C5_LI_RANGE: (f64, f64) = (10e-6, 100e-6);
// criterion 6
const C6_TOL: f64 = 1e-13;
// criterion 7
const C7_TOL: f64 = 1e-11;
// criterion 8
const C8_TOL: f64 = 1e-6;
const C8_TIME: f64 = 10.0;
const C8_STEPS: u64 = 10_000;
// criterion 9
const C9_UNITARY: f64 = 1e-12;
const C9_HERMITIAN: f64 = 1e-13;
const C9_COMMUTE: f64 = 1e-12;
const C9_ANTICOMM: f64 = 1e-14;
const C9_SLACK: f64 = 1e-12;
// criterion 10
const C10_RATIO: f64 = 10.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(value: f64, (center, tol): (f64, f64)) -> bool {
    (value - center).abs() <= tol
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn fig2(sites: usize) -> SimulationParams {
    SimulationParams::new(ModelParams::isotropic(sites, 1.0, 5.0, 0.3), -2.0)
}

fn fig3(sites: usize) -> SimulationParams {
    SimulationParams::new(ModelParams::isotropic(sites, 1.0, 10.0, 0.3), 0.0)
}

fn trotter_error_orders() -> Outcome {
    let taus = logspace(1e-3, 1e-2, 5);
    let orders = [TrotterOrder::First, TrotterOrder::Second];
    let rows = sweep_time(&fig2(4), &taus, &orders, 1, Evaluation::Blocked).unwrap();
    let slope = |o: TrotterOrder| {
        let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r.order == o).map(|r| (r.x, r.bound)).unzip();
        loglog_slope(&x, &y).unwrap()
    };
    let (s1, s2) = (slope(TrotterOrder::First), slope(TrotterOrder::Second));
    Outcome {
        pass: within(s1, C1_SLOPE_FIRST) && within(s2, C1_SLOPE_SECOND),
        detail: format!("M=4 slopes {s1:.3} (order 1, want 4±0.3), {s2:.3} (order 2, want 6±0.45)"),
    }
}

fn step_count_threshold() -> Outcome {
    let ev = BoundEvaluator::new(&fig3(5), Evaluation::Blocked).unwrap();
    let at500 = ev.bound(100.0, 500, TrotterOrder::Second).unwrap().value;
    let ms = [50u64, 100, 200, 400];
    let slope = |o: TrotterOrder| {
        let y: Vec<f64> = ms.iter().map(|&m| ev.bound(100.0, m, o).unwrap().value).collect();
        let x: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
        (loglog_slope(&x, &y).unwrap(), y)
    };
    let (s1, y1) = slope(TrotterOrder::First);
    let (s2, y2) = slope(TrotterOrder::Second);
    // informational: the same fit past the clamped regime
    let tail = [400u64, 800, 1600];
    let tail_slope = |o: TrotterOrder| {
        let y: Vec<f64> = tail.iter().map(|&m| ev.bound(100.0, m, o).unwrap().value).collect();
        let x: Vec<f64> = tail.iter().map(|&m| m as f64).collect();
        loglog_slope(&x, &y).unwrap()
    };
    let (t1, t2) = (tail_slope(TrotterOrder::First), tail_slope(TrotterOrder::Second));
    let fmt = |y: &[f64]| y.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(",");
    Outcome {
        pass: at500 < C2_HARD_GATE && within(s1, C2_SLOPE_FIRST) && within(s2, C2_SLOPE_SECOND),
        detail: format!(
            "order-2 bound at m=500 {at500:.3e} (gate <{C2_HARD_GATE:.0e}, target <{C2_TARGET:.0e} {}); \
             m-slopes {s1:.3} (order 1, want -2±0.2), {s2:.3} (order 2, want -4±0.4); \
             order 1 [{}], order 2 [{}] at m=50,100,200,400; \
             info: slopes over m=400,800,1600 are {t1:.3} and {t2:.3}",
            if at500 < C2_TARGET { "met" } else { "missed" },
            fmt(&y1),
            fmt(&y2)
        ),
    }
}

fn resource_parity() -> Outcome {
    let a = resource_count(900, TrotterOrder::First, 1);
    let b = resource_count(500, TrotterOrder::Second, 1);
    let want_a = ResourceCount {
        lattice_ramps: 900,
        hzz_simulations: 2700,
        rotation_applications: 1800,
    };
    let want_b = ResourceCount {
        lattice_ramps: 500,
        hzz_simulations: 2500,
        rotation_applications: 1500,
    };
    Outcome {
        pass: a == want_a && b == want_b,
        detail: format!("order 1 m=900 {a:?}; order 2 m=500 {b:?}"),
    }
}

fn collision_prefactors() -> Outcome {
    let rb = k_prefactor(&AtomSpecies::rubidium87(), 34.0).unwrap();
    let li = k_prefactor(&AtomSpecies::lithium6(), 34.0).unwrap();
    let rel = |v: f64, c: f64| (v - c).abs() / c;
    Outcome {
        pass: rel(rb, C4_K_RB.0) <= C4_K_RB.1 && rel(li, C4_K_LI.0) <= C4_K_LI.1,
        detail: format!(
            "K(Rb) = {:.2} rad/ms (19 ± 20%), K(Li) = {:.1} rad/ms (230 ± 25%)",
            rb / 1e3,
            li / 1e3
        ),
    }
}

fn shift_time_ranges() -> Outcome {
    let rb = shift_time_bound(&AtomSpecies::rubidium87(), 34.0).unwrap();
    let li = shift_time_bound(&AtomSpecies::lithium6(), 34.0).unwrap();
    let in_range = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
    let grid: Vec<f64> = (0..=450).map(|k| 5.0 + 0.1 * k as f64).collect();
    let monotone = AtomSpecies::defaults().iter().all(|s| {
        let curve: Vec<f64> = grid.iter().map(|&v| shift_time_bound(s, v).unwrap()).collect();
        curve.windows(2).all(|w| w[1] < w[0])
    });
    Outcome {
        pass: in_range(rb, C5_RB_RANGE) && in_range(li, C5_LI_RANGE) && monotone,
        detail: format!(
            "tau_sh(Rb) = {:.1} us, tau_sh(Li) = {:.1} us at 34 E_R; monotone decreasing on [5,50] for Rb, K, Li: {monotone}",
            rb * 1e6,
            li * 1e6
        ),
    }
}

fn exact_gate_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for m in 2..=4 {
        let basis = full(m);
        let chain = Chain::open(m);
        let hzz = build_axis_coupling(&basis, &chain, Axis::Z, 1.0).unwrap();
        let docc = double_occupancy(&basis, m);
        for _ in 0..20 {
            let chi: f64 = rng.random_range(0.0..1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let d: u32 = rng.random_range(1..=3);
            let tau = 4.0 * chi;
            let gate = zz_gate_sequence(&basis, &chain, chi, phi, d).unwrap();
            let gen = hzz
                .scaled(C64::new(tau, 0.0))
                .add(&docc.scaled(C64::new(d as f64 * phi, 0.0)))
                .unwrap()
                .scaled(C64::new(0.0, -1.0));
            let want = expm(&gen, Generator::General).unwrap();
            worst = worst.max(gate.sub(&want).unwrap().max_abs());
        }
    }
    Outcome {
        pass: worst < C6_TOL,
        detail: format!("max entry defect {worst:.2e} over M=2,3,4 x 20 draws (want <{C6_TOL:.0e})"),
    }
}

fn conjugation_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let basis = full(3);
    let chain = Chain::open(3);
    let ev = |axis| ExactEvolution::new(&build_axis_coupling(&basis, &chain, axis, 1.0).unwrap()).unwrap();
    let (ez, ex, ey) = (ev(Axis::Z), ev(Axis::X), ev(Axis::Y));
    let vy = global_rotation(&basis, Axis::Y).unwrap();
    let vx = global_rotation(&basis, Axis::X).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let tau: f64 = rng.random_range(f64::EPSILON..=1.0);
        let uz = ez.propagator(tau).unwrap();
        let dx = operator_distance(&uz.conjugated_by(&vy).unwrap(), &ex.propagator(tau).unwrap()).unwrap();
        let dy = operator_distance(&uz.conjugated_by(&vx).unwrap(), &ey.propagator(tau).unwrap()).unwrap();
        worst = worst.max(dx).max(dy);
    }
    Outcome {
        pass: worst < C7_TOL,
        detail: format!("max spectral defect {worst:.2e} over 10 draws, M=3 (want <{C7_TOL:.0e})"),
    }
}

fn oracle_equivalence() -> Outcome {
    let basis = full(2);
    let mut values = Vec::new();
    for (u_s, u_eff) in [(10.0, 0.0), (5.0, -2.0)] {
        let model = ModelParams::isotropic(2, 1.0, u_s, 0.3);
        let schedule =
            ProtocolSchedule::with_effective_interaction(model, u_eff, C8_TIME, C8_STEPS, TrotterOrder::Second, 1);
        let sim = trotter_evolve(&basis, &schedule).unwrap();
        let target = schedule.target_model();
        let exact = ExactEvolution::new(&build_tju(&basis, &target).unwrap())
            .unwrap()
            .propagator(C8_TIME)
            .unwrap();
        values.push((target.u, antifidelity_bound(&sim, &exact).unwrap().value));
    }
    Outcome {
        pass: values.iter().all(|&(_, b)| b < C8_TOL),
        detail: format!(
            "M=2 full space, order 2, m=1e4, tau={C8_TIME}: {} (want <{C8_TOL:.0e})",
            values
                .iter()
                .map(|(u, b)| format!("U={u:+.3} bound {b:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn invariant_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let mut check = |name: &str, value: f64, tol: f64| {
        if !(value <= tol) {
            failures.push(format!("{name}={value:.2e}"));
        }
    };

    // anticommutation relations on M <= 3
    for m in 1..=3 {
        let b = full(m);
        let modes: Vec<(usize, Spin)> = (0..m).flat_map(|j| Spin::BOTH.map(|s| (j, s))).collect();
        let ops: Vec<(Operator, Operator)> = modes
            .iter()
            .map(|&(j, s)| {
                (
                    Operator::mode(b.clone(), j, s, ModeOp::Annihilate).unwrap(),
                    Operator::mode(b.clone(), j, s, ModeOp::Create).unwrap(),
                )
            })
            .collect();
        let id = Operator::identity(b.clone());
        let mut worst: f64 = 0.0;
        for (x, (ca, _)) in ops.iter().enumerate() {
            for (y, (cb, cdb)) in ops.iter().enumerate() {
                let ac = ca.dot(cdb).unwrap().add(&cdb.dot(ca).unwrap()).unwrap();
                let want = if x == y { id.clone() } else { Operator::zeros(b.clone()) };
                worst = worst.max(ac.sub(&want).unwrap().max_abs());
                let aa = ca.dot(cb).unwrap().add(&cb.dot(ca).unwrap()).unwrap();
                worst = worst.max(aa.max_abs());
            }
        }
        check("anticommutator", worst, C9_ANTICOMM);
    }

    for m in 2..=4 {
        let b = full(m);
        let chain = Chain::open(m);
        let n_up = Operator::number(b.clone(), Some(Spin::Up));
        let n_down = Operator::number(b.clone(), Some(Spin::Down));
        let u: f64 = rng.random_range(-5.0..10.0);
        let j: f64 = rng.random_range(-1.0..1.0);
        let params = ModelParams::isotropic(m, 1.0, u, j);
        let tju = build_tju(&b, &params).unwrap();
        let hams = [
            build_hubbard(&b, &chain, 1.0, u).unwrap(),
            build_spin_coupling(&b, &chain, 0.4, 0.4, -0.7).unwrap(),
            tju.clone(),
        ];
        for h in &hams {
            check("hermiticity", h.hermiticity_defect(), C9_HERMITIAN);
            check("[H,N_up]", h.commutator(&n_up).unwrap().max_abs(), C9_COMMUTE);
            check("[H,N_down]", h.commutator(&n_down).unwrap().max_abs(), C9_COMMUTE);
        }
        // J_x != J_y keeps only the total number
        let xyz = build_spin_coupling(&b, &chain, 0.2, -0.4, 0.7).unwrap();
        check("hermiticity", xyz.hermiticity_defect(), C9_HERMITIAN);
        let n_total = n_up.add(&n_down).unwrap();
        check("[H_xyz,N]", xyz.commutator(&n_total).unwrap().max_abs(), C9_COMMUTE);
        check("tju imaginary part", tju.max_imag(), C9_HERMITIAN);
        for axis in Axis::ALL {
            let s = total_spin(&b, axis).unwrap();
            check("SU(2)", tju.commutator(&s).unwrap().max_abs(), C9_COMMUTE);
        }
        let tau: f64 = rng.random_range(0.1..2.0);
        let exact = ExactEvolution::new(&tju).unwrap().propagator(tau).unwrap();
        check("exact unitarity", exact.unitarity_defect(), C9_UNITARY);
        check("[U,N_up]", exact.commutator(&n_up).unwrap().max_abs(), C9_COMMUTE);
        let schedule = ProtocolSchedule::with_effective_interaction(params, -0.5, tau, 3, TrotterOrder::Second, 1);
        let sim = trotter_evolve(&b, &schedule).unwrap();
        check("trotter unitarity", sim.unitarity_defect(), C9_UNITARY);
        let n = n_up.add(&n_down).unwrap();
        check("[U_sim,N]", sim.commutator(&n).unwrap().max_abs(), C9_COMMUTE);

        let bound = antifidelity_bound(&sim, &exact).unwrap();
        let worst_state = (0..100)
            .map(|_| antifidelity_state(&random_state(&mut rng, b.dim()), &sim, &exact).unwrap())
            .fold(0.0, f64::max);
        check("state antifidelity - bound", worst_state - bound.value, C9_SLACK);
        let sym = antifidelity_bound(&exact, &sim).unwrap().value;
        check("bound symmetry", (sym - bound.value).abs(), C9_SLACK);
    }

    let b = full(2);
    for _ in 0..20 {
        let [x, y, z] = [0, 1, 2].map(|_| random_hermitian(&mut rng, &b));
        let dxz = operator_distance(&x, &z).unwrap();
        let dxy = operator_distance(&x, &y).unwrap();
        let dyz = operator_distance(&y, &z).unwrap();
        check("triangle", dxz - dxy - dyz, C9_SLACK);
    }

    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "anticommutators, Hermiticity, SU(2), number conservation, unitarity, bound >= 100 state anti-fidelities, symmetry, triangle inequality".into()
        } else {
            format!("violations: {}", failures.join(", "))
        },
    }
}

fn lattice_size_trend() -> Outcome {
    let sites = [2usize, 3, 4, 5, 6];
    let orders = [TrotterOrder::First, TrotterOrder::Second];
    let rows = sweep_sites(&fig3(2), &sites, 0.01, &orders, Evaluation::Blocked, 6).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for o in orders {
        let y: Vec<f64> = rows.iter().filter(|r| r.order == o).map(|r| r.bound).collect();
        let ratio = y.iter().map(|v| v / y[0]).fold(0.0, f64::max);
        let monotone = y.windows(2).all(|w| w[1] >= w[0]);
        pass &= ratio < C10_RATIO && monotone;
        parts.push(format!(
            "order {}: [{}] max ratio {ratio:.2}, monotone {monotone}",
            o.as_u8(),
            y.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(",")
        ));
    }
    Outcome {
        pass,
        detail: format!("M=2..6, tau=0.01: {} (want ratio <{C10_RATIO})", parts.join("; ")),
    }
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "Trotter error orders", trotter_error_orders),
        (2, "step-count threshold", step_count_threshold),
        (3, "resource parity", resource_parity),
        (4, "collision prefactors", collision_prefactors),
        (5, "shift-time ranges", shift_time_ranges),
        (6, "exact zz gate identity", exact_gate_identity),
        (7, "conjugation identities", conjugation_identities),
        (8, "oracle equivalence at small scale", oracle_equivalence),
        (9, "invariant suite", invariant_suite),
        (10, "lattice-size trend", lattice_size_trend),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        println!(
            "criterion {n:>2} {} {name}: {} [{:.1}s]",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            start.elapsed().as_secs_f64()
        );
        if !out.pass {
            failed += 1;
        }
    }
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed > 0 {
        println!("acceptance summary: {failed} criteria FAILED");
    } else {
        println!("acceptance summary: all selected criteria passed");
    }
    if failed > 0 && strict {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
