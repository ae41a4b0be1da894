//! Time-domain checks: linear vs nonlinear Bloch dynamics, trace
//! conservation and slab propagation invariants.

use num_complex::Complex64;
use rydberg_eit::bloch::{
    integrate_bloch, integrate_linearized, steady_state_linearized, BlochOptions, DensityMatrixState,
    LinearResponse,
};
use rydberg_eit::ode::Tolerance;
use rydberg_eit::propagation::{default_setup, leading_edge, propagate_pulse};
use rydberg_eit::units::GIGA;
use rydberg_eit::{FieldDrive, LadderSystem};

fn drive(sys: &LadderSystem, rabi1: f64, rabi2: f64) -> FieldDrive {
    FieldDrive::resonant(sys, Complex64::new(rabi1, 0.0), Complex64::new(rabi2, 0.0))
}

#[test]
fn weak_probe_full_dynamics_match_linear_response() {
    let sys = LadderSystem::cu2o_default();
    let d = drive(&sys, 1e-3 * sys.gamma_ab, 25.0 * GIGA).with_detunings(3e9, 1e9);
    let t_end = 20.0 / sys.gamma_bc;
    let full = integrate_bloch(
        &DensityMatrixState::ground(),
        &d,
        &sys,
        BlochOptions::default(),
        t_end,
        Tolerance::new(1e-10, 1e-16),
        40,
    )
    .unwrap();
    let lin = integrate_linearized(&LinearResponse::default(), &d, &sys, t_end, Tolerance::new(1e-10, 1e-16), 40)
        .unwrap();
    let peak = lin.states.iter().map(|s| s.sigma_ab.norm()).fold(0.0, f64::max);
    for (f, l) in full.states.iter().zip(&lin.states) {
        assert!((f.sigma_ab - l.sigma_ab).norm() < 1e-4 * peak);
    }
}

#[test]
fn tighter_tolerance_gets_closer_to_steady_state() {
    let sys = LadderSystem::cu2o_default();
    let d = drive(&sys, 1e6, 25.0 * GIGA);
    let ss = steady_state_linearized(&d, &sys).unwrap().sigma_ab;
    let err = |rtol: f64| {
        let t = integrate_linearized(
            &LinearResponse::default(),
            &d,
            &sys,
            20.0 / sys.gamma_bc,
            Tolerance::new(rtol, rtol * 1e-6),
            1,
        )
        .unwrap();
        (t.states.last().unwrap().sigma_ab - ss).norm() / ss.norm()
    };
    let coarse = err(1e-4);
    let fine = err(1e-8);
    assert!(fine < coarse, "{fine} !< {coarse}");
}

#[test]
fn trace_conserved_from_mixed_initial_state() {
    let sys = LadderSystem::cu2o_default();
    let d = drive(&sys, 10.0 * GIGA, 25.0 * GIGA).with_detunings(5e9, -5e9);
    let init = DensityMatrixState {
        sigma_aa: 0.3,
        sigma_bb: 0.6,
        sigma_cc: 0.1,
        sigma_ab: Complex64::new(0.1, 0.05),
        ..Default::default()
    };
    let traj =
        integrate_bloch(&init, &d, &sys, BlochOptions::default(), 100.0 / sys.gamma_ab, Tolerance::default(), 100)
            .unwrap();
    assert!(traj.max_trace_drift < 1e-9, "{}", traj.max_trace_drift);
    assert!(traj.states.iter().all(|s| (s.trace() - 1.0).abs() < 1e-9));
}

#[test]
fn propagation_grid_convergence_and_causality() {
    let sys = LadderSystem::cu2o_default();
    let d = drive(&sys, 1e6, 25.0 * GIGA);
    let setup = default_setup(&sys, &d, 30e-6, None, 200, 40.0).unwrap();
    let rec = propagate_pulse(|t| setup.pulse.at(t), &setup.params, &d, &sys).unwrap();
    let change = rec.refinement_change.unwrap();
    assert!(change < 0.01, "refinement changed result by {change}");
    assert!(rec.warnings.is_empty(), "{:?}", rec.warnings);
    let lead_in = leading_edge(&rec.envelope_in, 1e-3).unwrap();
    let lead_out = leading_edge(&rec.envelope_out, 1e-3).unwrap();
    assert!(lead_out + 1 >= lead_in);
    assert!(rec.measured_attenuation > 0.0 && rec.measured_attenuation <= 1.0);
}
