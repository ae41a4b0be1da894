//! Density-matrix dynamics of the ladder in the rotating frame.
//!
//! State components are the slowly varying `σ_ij`; the conjugate coherences
//! `σ_ba`, `σ_cb`, `σ_ca` are taken as `σ_ab*`, `σ_bc*`, `σ_ac*`.
//!
//! ```text
//! iσ̇_aa = −Ω₁σ_ba + Ω₁*σ_ab − Ω₂σ_ca + Ω₂*σ_ac − i(Γ_ab − Γ_ca)σ_aa
//! iσ̇_bb = −Ω₁*σ_ab + Ω₁σ_ba + iΓ_ab σ_aa
//! iσ̇_cc = −Ω₂*σ_ac + Ω₂σ_ca − iΓ_ca σ_aa
//! iσ̇_ab = (δ₁ − iγ_ab)σ_ab − Ω₁(σ_bb − σ_aa) − Ω₂σ_cb
//! iσ̇_bc = (δ₂ − δ₁ − iγ_bc)σ_bc + Ω₂σ_ba − Ω₁*σ_ac
//! iσ̇_ac = (δ₂ − iγ_ac)σ_ac − Ω₂(σ_cc − σ_aa) − Ω₁σ_bc
//! ```
//!
//! The population damping signs above are unusual (the `a → c` channel adds
//! to `σ_aa` and drains `σ_cc`) but the trace is exactly conserved; this is
//! [`DecayConvention::Literal`]. [`DecayConvention::Standard`] instead lets
//! `a` decay at `Γ_ab + Γ_ca` into `b` and `c`.
//!
//! To first order in the probe only `σ_ab` and `σ_bc` respond:
//!
//! ```text
//! iσ̇_ab = (δ₁ − iγ_ab)σ_ab − Ω₁ − Ω₂σ_cb
//! iσ̇_bc = (δ₂ − δ₁ − iγ_bc)σ_bc + Ω₂σ_ba
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EitError, Result};
use crate::ode::{self, Stats, Tolerance};
use crate::system::{FieldDrive, LadderSystem};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixState {
    pub sigma_aa: f64,
    pub sigma_bb: f64,
    pub sigma_cc: f64,
    pub sigma_ab: Complex64,
    pub sigma_bc: Complex64,
    pub sigma_ac: Complex64,
}

impl DensityMatrixState {
    /// All population in the ground state `b`.
    pub fn ground() -> Self {
        DensityMatrixState { sigma_bb: 1.0, ..Default::default() }
    }

    pub fn trace(&self) -> f64 {
        self.sigma_aa + self.sigma_bb + self.sigma_cc
    }

    /// Occupations inside `[−eps, 1 + eps]`.
    pub fn occupations_within(&self, eps: f64) -> bool {
        [self.sigma_aa, self.sigma_bb, self.sigma_cc]
            .iter()
            .all(|&p| p >= -eps && p <= 1.0 + eps)
    }

    fn to_array(self) -> [f64; 9] {
        [
            self.sigma_aa,
            self.sigma_bb,
            self.sigma_cc,
            self.sigma_ab.re,
            self.sigma_ab.im,
            self.sigma_bc.re,
            self.sigma_bc.im,
            self.sigma_ac.re,
            self.sigma_ac.im,
        ]
    }

    fn from_array(y: &[f64; 9]) -> Self {
        DensityMatrixState {
            sigma_aa: y[0],
            sigma_bb: y[1],
            sigma_cc: y[2],
            sigma_ab: Complex64::new(y[3], y[4]),
            sigma_bc: Complex64::new(y[5], y[6]),
            sigma_ac: Complex64::new(y[7], y[8]),
        }
    }
}

/// Sign convention for the population damping terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayConvention {
    /// The printed equations, verbatim.
    #[default]
    Literal,
    /// Conventional relaxation of `a` into `b` (Γ_ab) and `c` (Γ_ca).
    Standard,
}

/// Which coherence multiplies `(δ₂ − iγ_ac)` in the `σ̇_ac` equation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcCoherenceTerm {
    /// `σ_ac`, which makes the equation self-consistent.
    #[default]
    SelfConsistent,
    /// `σ_ca = σ_ac*` as printed.
    Printed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlochOptions {
    pub decay: DecayConvention,
    pub ac_term: AcCoherenceTerm,
}

/// Time derivative of the full six-component state.
pub fn bloch_rhs(
    state: &DensityMatrixState,
    drive: &FieldDrive,
    system: &LadderSystem,
    options: BlochOptions,
) -> DensityMatrixState {
    bloch_rhs_with(state, drive.rabi1, drive, system, options)
}

/// As [`bloch_rhs`] with the probe Rabi frequency overridden (propagation).
pub(crate) fn bloch_rhs_with(
    s: &DensityMatrixState,
    rabi1: Complex64,
    drive: &FieldDrive,
    system: &LadderSystem,
    options: BlochOptions,
) -> DensityMatrixState {
    let o1 = rabi1;
    let o2 = drive.rabi2;
    let (saa, sbb, scc) = (s.sigma_aa, s.sigma_bb, s.sigma_cc);
    let (sab, sbc, sac) = (s.sigma_ab, s.sigma_bc, s.sigma_ac);

    // Ω*σ − Ωσ* = 2i Im(Ω*σ), so −i(...) = 2 Im(Ω*σ).
    let probe_flow = 2.0 * (o1.conj() * sab).im;
    let control_flow = 2.0 * (o2.conj() * sac).im;

    let (daa, dbb, dcc) = match options.decay {
        DecayConvention::Literal => (
            probe_flow + control_flow - (system.decay_ab - system.decay_ca) * saa,
            -probe_flow + system.decay_ab * saa,
            -control_flow - system.decay_ca * saa,
        ),
        DecayConvention::Standard => (
            probe_flow + control_flow - (system.decay_ab + system.decay_ca) * saa,
            -probe_flow + system.decay_ab * saa,
            -control_flow + system.decay_ca * saa,
        ),
    };

    let d1 = drive.delta1;
    let d2 = drive.delta2;
    let dab = -I * (Complex64::new(d1, -system.gamma_ab) * sab
        - o1 * (sbb - saa)
        - o2 * sbc.conj());
    let dbc = -I * (Complex64::new(d2 - d1, -system.gamma_bc) * sbc + o2 * sab.conj()
        - o1.conj() * sac);
    let ac_var = match options.ac_term {
        AcCoherenceTerm::SelfConsistent => sac,
        AcCoherenceTerm::Printed => sac.conj(),
    };
    let dac = -I * (Complex64::new(d2, -system.gamma_ac) * ac_var - o2 * (scc - saa) - o1 * sbc);

    DensityMatrixState {
        sigma_aa: daa,
        sigma_bb: dbb,
        sigma_cc: dcc,
        sigma_ab: dab,
        sigma_bc: dbc,
        sigma_ac: dac,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrixState>,
    /// max |trace − trace(initial)| over the samples
    pub max_trace_drift: f64,
    pub stats: Stats,
}

impl Trajectory {
    pub fn last(&self) -> &DensityMatrixState {
        self.states.last().expect("trajectory has at least one sample")
    }
}

fn sample_grid(t_end: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) {
        return Err(EitError::Domain(format!("integration time must be > 0, got {t_end}")));
    }
    let n = samples.max(1);
    Ok((0..=n).map(|i| t_end * i as f64 / n as f64).collect())
}

/// Integrate the full Bloch equations from `t = 0` to `t_end` with the
/// embedded Dormand–Prince pair; `samples + 1` equally spaced states are
/// returned (including `t = 0`).
pub fn integrate_bloch(
    initial: &DensityMatrixState,
    drive: &FieldDrive,
    system: &LadderSystem,
    options: BlochOptions,
    t_end: f64,
    tolerance: Tolerance,
    samples: usize,
) -> Result<Trajectory> {
    let times = sample_grid(t_end, samples)?;
    let rhs = |_t: f64, y: &[f64; 9]| {
        bloch_rhs(&DensityMatrixState::from_array(y), drive, system, options).to_array()
    };
    let (ys, stats) = ode::integrate(rhs, 0.0, initial.to_array(), &times, tolerance)?;
    let states: Vec<DensityMatrixState> = ys.iter().map(DensityMatrixState::from_array).collect();
    let t0 = initial.trace();
    let max_trace_drift = states.iter().map(|s| (s.trace() - t0).abs()).fold(0.0, f64::max);
    Ok(Trajectory { times, states, max_trace_drift, stats })
}

/// The first-order probe response `(σ_ab, σ_bc)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearResponse {
    pub sigma_ab: Complex64,
    pub sigma_bc: Complex64,
}

/// Right-hand side of the linearised equations.
pub fn linearized_rhs(
    state: &LinearResponse,
    drive: &FieldDrive,
    system: &LadderSystem,
) -> LinearResponse {
    let (sab, sbc) = (state.sigma_ab, state.sigma_bc);
    let (d1, d2) = (drive.delta1, drive.delta2);
    LinearResponse {
        sigma_ab: -I
            * (Complex64::new(d1, -system.gamma_ab) * sab - drive.rabi1 - drive.rabi2 * sbc.conj()),
        sigma_bc: -I * (Complex64::new(d2 - d1, -system.gamma_bc) * sbc + drive.rabi2 * sab.conj()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<LinearResponse>,
    pub stats: Stats,
}

/// Integrate the linearised equations with a constant probe.
pub fn integrate_linearized(
    initial: &LinearResponse,
    drive: &FieldDrive,
    system: &LadderSystem,
    t_end: f64,
    tolerance: Tolerance,
    samples: usize,
) -> Result<LinearTrajectory> {
    let times = sample_grid(t_end, samples)?;
    let pack = |s: &LinearResponse| [s.sigma_ab.re, s.sigma_ab.im, s.sigma_bc.re, s.sigma_bc.im];
    let unpack = |y: &[f64; 4]| LinearResponse {
        sigma_ab: Complex64::new(y[0], y[1]),
        sigma_bc: Complex64::new(y[2], y[3]),
    };
    let rhs = |_t: f64, y: &[f64; 4]| pack(&linearized_rhs(&unpack(y), drive, system));
    let (ys, stats) = ode::integrate(rhs, 0.0, pack(initial), &times, tolerance)?;
    Ok(LinearTrajectory { times, states: ys.iter().map(unpack).collect(), stats })
}

/// Closed-form stationary point of the linearised equations.
///
/// With `D = (δ₁ − iγ_ab)(δ₂ − δ₁ + iγ_bc) + |Ω₂|²`:
/// `σ_ab = Ω₁(δ₂ − δ₁ + iγ_bc)/D` and `σ_bc = −(Ω₂ Ω₁* ) / D*`.
pub fn steady_state_linearized(drive: &FieldDrive, system: &LadderSystem) -> Result<LinearResponse> {
    let (d1, d2) = (drive.delta1, drive.delta2);
    let two_photon = Complex64::new(d2 - d1, system.gamma_bc);
    let det = Complex64::new(d1, -system.gamma_ab) * two_photon + drive.rabi2.norm_sqr();
    if det.norm() == 0.0 {
        return Err(EitError::Singular(format!(
            "linear steady state is singular: (δ₁ − iγ_ab)(δ₂ − δ₁ + iγ_bc) + |Ω₂|² = 0 \
             for δ₁ = {d1:e}, δ₂ = {d2:e}, γ_ab = {:e}, γ_bc = {:e}, |Ω₂| = {:e}",
            system.gamma_ab,
            system.gamma_bc,
            drive.rabi2.norm()
        )));
    }
    let sigma_ab = drive.rabi1 * two_photon / det;
    let sigma_cb = -drive.rabi2.conj() * drive.rabi1 / det;
    Ok(LinearResponse { sigma_ab, sigma_bc: sigma_cb.conj() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::GIGA;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ground_state_is_stationary_without_fields() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(0.0, 0.0), c(0.0, 0.0));
        for decay in [DecayConvention::Literal, DecayConvention::Standard] {
            let opts = BlochOptions { decay, ..Default::default() };
            let d = bloch_rhs(&DensityMatrixState::ground(), &drive, &sys, opts);
            assert_eq!(d, DensityMatrixState::default());
        }
    }

    #[test]
    fn populations_have_real_derivatives_and_zero_trace_rate() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(3e9, 1e9), c(20e9, -5e9)).with_detunings(2e9, -1e9);
        let s = DensityMatrixState {
            sigma_aa: 0.2,
            sigma_bb: 0.5,
            sigma_cc: 0.3,
            sigma_ab: c(0.1, -0.2),
            sigma_bc: c(-0.05, 0.07),
            sigma_ac: c(0.02, 0.11),
        };
        let d = bloch_rhs(&s, &drive, &sys, BlochOptions::default());
        let rate = d.sigma_aa + d.sigma_bb + d.sigma_cc;
        assert!(rate.abs() < 1e-15 * sys.decay_ab);
    }

    #[test]
    fn two_level_rabi_oscillation() {
        let mut sys = LadderSystem::cu2o_default();
        sys.decay_ab = 0.0;
        sys.decay_ca = 0.0;
        sys.gamma_ab = 0.0;
        sys.gamma_bc = 0.0;
        sys.gamma_ac = 0.0;
        let rabi = 2e9;
        let drive = FieldDrive::resonant(&sys, c(rabi, 0.0), c(0.0, 0.0));
        let t_end = 5.0 / rabi;
        let traj = integrate_bloch(
            &DensityMatrixState::ground(),
            &drive,
            &sys,
            BlochOptions::default(),
            t_end,
            Tolerance::new(1e-11, 1e-14),
            50,
        )
        .unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let w = (2.0 * rabi * t).cos();
            let y = 0.5 * (2.0 * rabi * t).sin();
            assert!((s.sigma_bb - s.sigma_aa - w).abs() < 1e-8, "t = {t}");
            assert!((s.sigma_ab - c(0.0, y)).norm() < 1e-8);
        }
    }

    #[test]
    fn fields_off_trajectory_is_constant() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(0.0, 0.0), c(0.0, 0.0));
        let traj = integrate_bloch(
            &DensityMatrixState::ground(),
            &drive,
            &sys,
            BlochOptions::default(),
            1e-9,
            Tolerance::default(),
            10,
        )
        .unwrap();
        assert!(traj.states.iter().all(|s| *s == DensityMatrixState::ground()));
    }

    #[test]
    fn steady_state_limits() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(1e6, 0.0), c(0.0, 0.0)).with_detunings(3e9, 0.0);
        let s = steady_state_linearized(&drive, &sys).unwrap();
        let want = c(1e6, 0.0) / c(3e9, -sys.gamma_ab);
        assert!((s.sigma_ab - want).norm() < 1e-15 * want.norm());

        let drive = drive.with_control(c(25.0 * GIGA, 0.0));
        let a = steady_state_linearized(&drive, &sys).unwrap().sigma_ab;
        let b = steady_state_linearized(&drive.with_probe(c(2e6, 0.0)), &sys).unwrap().sigma_ab;
        assert!((b - a * 2.0).norm() < 1e-14 * b.norm());
    }

    #[test]
    fn steady_state_is_stationary() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(1e6, 2e5), c(25.0 * GIGA, 3e9)).with_detunings(1e9, -4e9);
        let s = steady_state_linearized(&drive, &sys).unwrap();
        let d = linearized_rhs(&s, &drive, &sys);
        let scale = sys.gamma_ab * s.sigma_ab.norm();
        assert!(d.sigma_ab.norm() < 1e-12 * scale && d.sigma_bc.norm() < 1e-12 * scale);
    }

    #[test]
    fn singular_steady_state_is_reported() {
        let mut sys = LadderSystem::cu2o_default();
        sys.gamma_ab = 0.0;
        sys.gamma_bc = 0.0;
        let drive = FieldDrive::resonant(&sys, c(1e6, 0.0), c(0.0, 0.0));
        assert!(matches!(steady_state_linearized(&drive, &sys), Err(EitError::Singular(_))));
    }

    #[test]
    fn occupation_bounds_hold_for_standard_decay() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(5e9, 0.0), c(25.0 * GIGA, 0.0));
        let opts = BlochOptions { decay: DecayConvention::Standard, ..Default::default() };
        let traj = integrate_bloch(
            &DensityMatrixState::ground(),
            &drive,
            &sys,
            opts,
            50.0 / sys.gamma_ab,
            Tolerance::default(),
            200,
        )
        .unwrap();
        assert!(traj.states.iter().all(|s| s.occupations_within(1e-9)));
        assert!(traj.max_trace_drift < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_time() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, c(0.0, 0.0), c(0.0, 0.0));
        let r = integrate_bloch(
            &DensityMatrixState::ground(),
            &drive,
            &sys,
            BlochOptions::default(),
            0.0,
            Tolerance::default(),
            1,
        );
        assert!(matches!(r, Err(EitError::Domain(_))));
    }
}
