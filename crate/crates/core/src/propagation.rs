//! Propagation of the probe Rabi envelope through a slab.
//!
//! In the co-moving frame `τ = t − z/c` the slowly varying envelope obeys
//!
//! ```text
//! ∂Ω₁/∂z = (iκ₁²/c) σ_ab(z, τ),   κ₁² = N|d_ab|²ω₁/(2ħε₀)
//! ```
//!
//! which is the sign under which a stationary probe picks up the factor
//! `exp(iω₁χz/(2c))`. At each z the medium starts in the ground state
//! before the pulse and `σ_ab(τ)` is obtained from the linearised Bloch
//! equations (or the full ones, see [`BlochSource`]). The z march is
//! classical RK4; the τ evolution of the linear system uses the exact
//! 2×2 propagator with a piecewise-linear probe.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{bloch_rhs_with, BlochOptions, DensityMatrixState};
use crate::error::{EitError, Result};
use crate::linalg::Mat2;
use crate::susceptibility::{chi, group_index, group_velocity, window_metrics};
use crate::system::{FieldDrive, LadderSystem};
use crate::units::SPEED_OF_LIGHT;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Medium response that sources the envelope.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlochSource {
    /// First order in the probe.
    #[default]
    Linearized,
    /// All six density-matrix components, for strong probes.
    Full(BlochOptions),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationParams {
    /// κ₁², rad²/s².
    pub kappa1_sq: f64,
    /// Slab thickness, m.
    pub length: f64,
    pub z_steps: usize,
    pub t_steps: usize,
    /// First co-moving time sample, s.
    pub t_start: f64,
    pub dt: f64,
    pub dz: f64,
    pub source: BlochSource,
    /// Re-run at half the step sizes and warn if the result moves by > 1 %.
    pub check_convergence: bool,
}

impl PropagationParams {
    /// `t_steps` samples spanning `[t_start, t_end]` in co-moving time.
    pub fn new(
        system: &LadderSystem,
        drive: &FieldDrive,
        length: f64,
        z_steps: usize,
        t_start: f64,
        t_end: f64,
        t_steps: usize,
    ) -> Result<Self> {
        if !(length >= 0.0) {
            return Err(EitError::InvalidParameter(format!("slab length must be ≥ 0, got {length}")));
        }
        if z_steps == 0 || t_steps < 2 {
            return Err(EitError::InvalidParameter("need z_steps ≥ 1 and t_steps ≥ 2".into()));
        }
        if !(t_end > t_start) {
            return Err(EitError::InvalidParameter("time window must have t_end > t_start".into()));
        }
        let dt = (t_end - t_start) / (t_steps - 1) as f64;
        let dz = length / z_steps as f64;
        let params = PropagationParams {
            kappa1_sq: drive.kappa1_sq(system),
            length,
            z_steps,
            t_steps,
            t_start,
            dt,
            dz,
            source: BlochSource::Linearized,
            check_convergence: true,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dz > SPEED_OF_LIGHT * self.dt {
            return Err(EitError::InvalidParameter(format!(
                "grid violates dz ≤ c·dt (dz = {:e} m, c·dt = {:e} m)",
                self.dz,
                SPEED_OF_LIGHT * self.dt
            )));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.t_steps).map(|j| self.t_start + j as f64 * self.dt).collect()
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + (self.t_steps - 1) as f64 * self.dt
    }

    /// Same window and slab with both step sizes halved.
    pub fn refined(&self) -> Self {
        let t_steps = 2 * self.t_steps - 1;
        let z_steps = 2 * self.z_steps;
        PropagationParams {
            t_steps,
            z_steps,
            dt: self.dt / 2.0,
            dz: self.length / z_steps as f64,
            ..*self
        }
    }
}

/// Gaussian envelope `peak · exp(−(t − center)²/(2·duration²)) · e^{−iω_off t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPulse {
    pub center: f64,
    pub duration: f64,
    pub peak: f64,
    pub carrier_offset: f64,
}

impl GaussianPulse {
    pub fn at(&self, t: f64) -> Complex64 {
        let x = (t - self.center) / self.duration;
        Complex64::from_polar(self.peak * (-0.5 * x * x).exp(), -self.carrier_offset * t)
    }

    pub fn sample(&self, times: &[f64]) -> Vec<Complex64> {
        times.iter().map(|&t| self.at(t)).collect()
    }
}

/// A Gaussian probe matched to the window and a co-moving grid that holds
/// it before and after the slab.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSetup {
    pub params: PropagationParams,
    pub pulse: GaussianPulse,
}

/// Pulse duration (rms of the amplitude) in units of the inverse window width.
pub const DEFAULT_DURATION_FACTOR: f64 = 40.0;

pub fn default_pulse_duration(system: &LadderSystem, drive: &FieldDrive) -> Result<f64> {
    let w = window_metrics(system, drive)?;
    let width = if w.width > 0.0 { w.width } else { system.gamma_ab.max(f64::MIN_POSITIVE) };
    Ok(DEFAULT_DURATION_FACTOR / width)
}

/// Build a pulse centred at the two-photon resonance with `duration` (or the
/// default), sampled with `samples_per_duration` points per duration.
pub fn default_setup(
    system: &LadderSystem,
    drive: &FieldDrive,
    length: f64,
    duration: Option<f64>,
    z_steps: usize,
    samples_per_duration: f64,
) -> Result<PulseSetup> {
    let duration = match duration {
        Some(d) => d,
        None => default_pulse_duration(system, drive)?,
    };
    if !(duration > 0.0) {
        return Err(EitError::InvalidParameter(format!("pulse duration must be > 0, got {duration}")));
    }
    let center = drive.two_photon_center();
    let ng = group_index(center, system, drive)?;
    let extra = (length * (ng - 1.0) / SPEED_OF_LIGHT).max(0.0);
    // The truncated input tails must sit well below the transmitted peak.
    let chi0 = chi(center, system, drive)?;
    let exponent = (drive.omega1 * chi0.im * length / (2.0 * SPEED_OF_LIGHT)).max(0.0);
    let half = (2.0 * (exponent + 30.0)).sqrt().max(7.0) * duration;
    let t_start = -half;
    let t_end = extra + half;
    let t_steps = (((t_end - t_start) / duration) * samples_per_duration).ceil() as usize + 1;
    let params = PropagationParams::new(system, drive, length, z_steps, t_start, t_end, t_steps)?;
    let pulse = GaussianPulse { center: 0.0, duration, peak: drive.rabi1.norm(), carrier_offset: center };
    Ok(PulseSetup { params, pulse })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseRecord {
    /// Co-moving time grid, s.
    pub times: Vec<f64>,
    pub envelope_in: Vec<Complex64>,
    pub envelope_out: Vec<Complex64>,
    /// Lab-frame delay of the intensity centroid (co-moving delay + L/c), s.
    pub measured_delay: f64,
    /// Centroid delay in the co-moving frame, s.
    pub comoving_delay: f64,
    /// |peak_out| / |peak_in|.
    pub measured_attenuation: f64,
    /// Phase of the output peak relative to the input peak, rad.
    pub measured_phase: f64,
    /// Largest relative change of delay/attenuation under grid refinement.
    pub refinement_change: Option<f64>,
    pub warnings: Vec<String>,
}

impl PulseRecord {
    /// `c · delay / L`, the inferred slow-down factor.
    pub fn slowdown_factor(&self, length: f64) -> f64 {
        SPEED_OF_LIGHT * self.measured_delay / length
    }
}

fn centroid(times: &[f64], values: &[Complex64]) -> Option<f64> {
    let (num, den) = times
        .iter()
        .zip(values)
        .fold((0.0, 0.0), |(n, d), (&t, v)| (n + t * v.norm_sqr(), d + v.norm_sqr()));
    (den > 0.0).then(|| num / den)
}

fn peak(values: &[Complex64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v.norm() > bv { (i, v.norm()) } else { (bi, bv) })
}

/// Index of the first sample with `|v| ≥ threshold · max|v|`.
pub fn leading_edge(values: &[Complex64], threshold: f64) -> Option<usize> {
    let (_, max) = peak(values);
    if max == 0.0 {
        return None;
    }
    values.iter().position(|v| v.norm() >= threshold * max)
}

/// Linear response σ_ab(τ) to a probe sampled on a uniform grid.
struct LinearPropagator {
    transfer: Mat2,
    hold0: [Complex64; 2],
    hold1: [Complex64; 2],
}

impl LinearPropagator {
    fn new(system: &LadderSystem, drive: &FieldDrive, dt: f64) -> Result<Self> {
        // d/dτ (σ_ab, σ_cb) = M (σ_ab, σ_cb) + (iΩ₁, 0)
        let m = Mat2([
            [Complex64::new(-system.gamma_ab, -drive.delta1), I * drive.rabi2],
            [
                I * drive.rabi2.conj(),
                Complex64::new(-system.gamma_bc, drive.delta2 - drive.delta1),
            ],
        ]);
        let minv = m.inverse().ok_or_else(|| {
            EitError::Singular("linearised Bloch generator is singular (all dampings zero?)".into())
        })?;
        let e = m.expm(dt);
        let id = Mat2::identity();
        // ∫₀ʰ e^{M(h−s)} ds and ∫₀ʰ e^{M(h−s)} (s/h) ds
        let p0 = minv * (e - id);
        let p1 = p0 - minv * (e - p0.scale(Complex64::new(1.0 / dt, 0.0)));
        let col = |p: Mat2| [p.0[0][0], p.0[1][0]];
        Ok(LinearPropagator { transfer: e, hold0: col(p0), hold1: col(p1) })
    }

    fn respond(&self, probe: &[Complex64], out: &mut [Complex64]) {
        let mut x = [Complex64::new(0.0, 0.0); 2];
        out[0] = x[0];
        for j in 1..probe.len() {
            let f0 = I * probe[j - 1];
            let df = I * probe[j] - f0;
            let ex = self.transfer.apply(x);
            x = [
                ex[0] + self.hold0[0] * f0 + self.hold1[0] * df,
                ex[1] + self.hold0[1] * f0 + self.hold1[1] * df,
            ];
            out[j] = x[0];
        }
    }
}

struct FullResponder<'a> {
    system: &'a LadderSystem,
    drive: &'a FieldDrive,
    options: BlochOptions,
    dt: f64,
}

impl FullResponder<'_> {
    fn respond(&self, probe: &[Complex64], out: &mut [Complex64]) {
        let peak_rabi = probe.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let rate = self.system.gamma_ab
            + self.system.gamma_ac
            + self.system.decay_ab
            + self.system.decay_ca
            + self.drive.rabi2.norm()
            + peak_rabi
            + self.drive.delta1.abs()
            + self.drive.delta2.abs();
        let substeps = ((self.dt * rate / 0.5).ceil() as usize).max(1);
        let h = self.dt / substeps as f64;
        let mut s = DensityMatrixState::ground();
        out[0] = s.sigma_ab;
        let rhs = |st: &DensityMatrixState, o1: Complex64| {
            bloch_rhs_with(st, o1, self.drive, self.system, self.options)
        };
        let axpy = |a: &DensityMatrixState, k: &DensityMatrixState, h: f64| DensityMatrixState {
            sigma_aa: a.sigma_aa + h * k.sigma_aa,
            sigma_bb: a.sigma_bb + h * k.sigma_bb,
            sigma_cc: a.sigma_cc + h * k.sigma_cc,
            sigma_ab: a.sigma_ab + k.sigma_ab * h,
            sigma_bc: a.sigma_bc + k.sigma_bc * h,
            sigma_ac: a.sigma_ac + k.sigma_ac * h,
        };
        for j in 1..probe.len() {
            let (p0, p1) = (probe[j - 1], probe[j]);
            for k in 0..substeps {
                let at = |frac: f64| p0 + (p1 - p0) * ((k as f64 + frac) / substeps as f64);
                let k1 = rhs(&s, at(0.0));
                let k2 = rhs(&axpy(&s, &k1, 0.5 * h), at(0.5));
                let k3 = rhs(&axpy(&s, &k2, 0.5 * h), at(0.5));
                let k4 = rhs(&axpy(&s, &k3, h), at(1.0));
                let sum = DensityMatrixState {
                    sigma_aa: k1.sigma_aa + 2.0 * k2.sigma_aa + 2.0 * k3.sigma_aa + k4.sigma_aa,
                    sigma_bb: k1.sigma_bb + 2.0 * k2.sigma_bb + 2.0 * k3.sigma_bb + k4.sigma_bb,
                    sigma_cc: k1.sigma_cc + 2.0 * k2.sigma_cc + 2.0 * k3.sigma_cc + k4.sigma_cc,
                    sigma_ab: k1.sigma_ab + k2.sigma_ab * 2.0 + k3.sigma_ab * 2.0 + k4.sigma_ab,
                    sigma_bc: k1.sigma_bc + k2.sigma_bc * 2.0 + k3.sigma_bc * 2.0 + k4.sigma_bc,
                    sigma_ac: k1.sigma_ac + k2.sigma_ac * 2.0 + k3.sigma_ac * 2.0 + k4.sigma_ac,
                };
                s = axpy(&s, &sum, h / 6.0);
            }
            out[j] = s.sigma_ab;
        }
    }
}

fn march(
    input: &[Complex64],
    params: &PropagationParams,
    drive: &FieldDrive,
    system: &LadderSystem,
) -> Result<Vec<Complex64>> {
    let n = input.len();
    let coupling = I * (params.kappa1_sq / SPEED_OF_LIGHT);
    let linear = match params.source {
        BlochSource::Linearized => Some(LinearPropagator::new(system, drive, params.dt)?),
        BlochSource::Full(_) => None,
    };
    let full = match params.source {
        BlochSource::Full(options) => Some(FullResponder { system, drive, options, dt: params.dt }),
        BlochSource::Linearized => None,
    };
    let respond = |probe: &[Complex64], out: &mut [Complex64]| {
        if let Some(l) = &linear {
            l.respond(probe, out);
        } else if let Some(f) = &full {
            f.respond(probe, out);
        }
        for v in out.iter_mut() {
            *v *= coupling;
        }
    };

    let dz = params.dz;
    let mut field = input.to_vec();
    let mut stage = vec![Complex64::new(0.0, 0.0); n];
    let mut k = [vec![Complex64::new(0.0, 0.0); n], vec![Complex64::new(0.0, 0.0); n]];
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..params.z_steps {
        // k1
        respond(&field, &mut k[0]);
        acc.copy_from_slice(&k[0]);
        // k2, k3
        for weight in [0.5, 0.5] {
            for j in 0..n {
                stage[j] = field[j] + k[0][j] * (weight * dz);
            }
            respond(&stage, &mut k[1]);
            for j in 0..n {
                acc[j] += k[1][j] * 2.0;
            }
            k.swap(0, 1);
        }
        // k4
        for j in 0..n {
            stage[j] = field[j] + k[0][j] * dz;
        }
        respond(&stage, &mut k[1]);
        for j in 0..n {
            field[j] += (acc[j] + k[1][j]) * (dz / 6.0);
        }
        if field.iter().any(|v| !v.is_finite()) {
            return Err(EitError::Numerical(
                "envelope became non-finite; reduce dz".to_string(),
            ));
        }
    }
    Ok(field)
}

struct Measured {
    comoving_delay: f64,
    attenuation: f64,
    phase: f64,
}

fn measure(times: &[f64], input: &[Complex64], output: &[Complex64]) -> Result<Measured> {
    let (c_in, c_out) = match (centroid(times, input), centroid(times, output)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(EitError::Numerical("envelope has zero energy".into())),
    };
    let (i_in, p_in) = peak(input);
    let (i_out, p_out) = peak(output);
    Ok(Measured {
        comoving_delay: c_out - c_in,
        attenuation: p_out / p_in,
        phase: (output[i_out] * input[i_in].conj()).arg(),
    })
}

/// March the input envelope `shape(τ)` through the slab. The shape is
/// sampled on `params.times()` and, for the convergence check, on the
/// refined grid.
pub fn propagate_pulse<F: Fn(f64) -> Complex64>(
    shape: F,
    params: &PropagationParams,
    drive: &FieldDrive,
    system: &LadderSystem,
) -> Result<PulseRecord> {
    params.validate()?;
    let times = params.times();
    let input: Vec<Complex64> = times.iter().map(|&t| shape(t)).collect();
    let output = march(&input, params, drive, system)?;
    let m = measure(&times, &input, &output)?;
    let mut warnings = Vec::new();

    let (_, p_out) = peak(&output);
    let tail = output.last().map_or(0.0, |v| v.norm());
    if p_out > 0.0 && tail > 1e-3 * p_out {
        warnings.push(format!(
            "output envelope is truncated at the end of the time window (|tail|/|peak| = {:.3e})",
            tail / p_out
        ));
    }

    let mut refinement_change = None;
    if params.check_convergence {
        let fine = params.refined();
        let fine_times = fine.times();
        let fine_input: Vec<Complex64> = fine_times.iter().map(|&t| shape(t)).collect();
        let fine_out = march(&fine_input, &fine, drive, system)?;
        let fm = measure(&fine_times, &fine_input, &fine_out)?;
        let lab = |d: f64| d + params.length / SPEED_OF_LIGHT;
        let rel = |a: f64, b: f64| if b == 0.0 { (a - b).abs() } else { ((a - b) / b).abs() };
        let change = rel(lab(m.comoving_delay), lab(fm.comoving_delay))
            .max(rel(m.attenuation, fm.attenuation));
        if change > 0.01 {
            warnings.push(format!(
                "grid too coarse: delay/attenuation change by {:.2} % under refinement",
                100.0 * change
            ));
        }
        refinement_change = Some(change);
    }

    Ok(PulseRecord {
        times,
        envelope_in: input,
        envelope_out: output,
        measured_delay: m.comoving_delay + params.length / SPEED_OF_LIGHT,
        comoving_delay: m.comoving_delay,
        measured_attenuation: m.attenuation,
        measured_phase: m.phase,
        refinement_change,
        warnings,
    })
}

/// Narrowband solution at depth `z`, on the same co-moving grid as `input`:
/// the envelope is delayed by `z/v_g − z/c` and multiplied by
/// `exp(iω₁χ′z/(2c) − ω₁χ″z/(2c))`, with χ and v_g taken at the
/// two-photon resonance.
pub fn analytic_envelope<F: Fn(f64) -> Complex64>(
    shape: F,
    times: &[f64],
    z: f64,
    drive: &FieldDrive,
    system: &LadderSystem,
) -> Result<Vec<Complex64>> {
    let center = drive.two_photon_center();
    let chi0 = chi(center, system, drive)?;
    let vg = group_velocity(center, system, drive)?;
    let shift = z / vg - z / SPEED_OF_LIGHT;
    let factor = (I * chi0 * (drive.omega1 * z / (2.0 * SPEED_OF_LIGHT))).exp();
    let carrier = |t: f64| Complex64::from_polar(1.0, -center * t);
    Ok(times
        .iter()
        .map(|&t| {
            let s = t - shift;
            factor * carrier(t) * shape(s) * carrier(s).conj()
        })
        .collect())
}

/// Relative L² distance `‖a − b‖/‖b‖`.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
