//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export wraps a plain Rust function of the same name prefixed with
//! `compute_`, so the numerics can be tested natively.

use rydberg_eit::propagation::{analytic_envelope, default_setup, propagate_pulse};
use rydberg_eit::susceptibility::{group_velocity, spectrum, sweep_control, window_metrics};
use rydberg_eit::units::GIGA;
use rydberg_eit::{Complex64, EitError, FieldDrive, LadderSystem};
use wasm_bindgen::prelude::*;

fn drive(sys: &LadderSystem, omega2_grad: f64) -> FieldDrive {
    FieldDrive::resonant(sys, Complex64::new(1e6, 0.0), Complex64::new(omega2_grad * GIGA, 0.0))
}

fn js(e: EitError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Spectrum {
    offset: Vec<f64>,
    chi_re: Vec<f64>,
    chi_im: Vec<f64>,
    n_g: Vec<f64>,
    width: f64,
    ng_center: f64,
}

#[wasm_bindgen]
impl Spectrum {
    /// Probe offsets, Grad/s.
    #[wasm_bindgen(getter)]
    pub fn offset(&self) -> Vec<f64> {
        self.offset.clone()
    }

    #[wasm_bindgen(getter, js_name = chiRe)]
    pub fn chi_re(&self) -> Vec<f64> {
        self.chi_re.clone()
    }

    #[wasm_bindgen(getter, js_name = chiIm)]
    pub fn chi_im(&self) -> Vec<f64> {
        self.chi_im.clone()
    }

    #[wasm_bindgen(getter, js_name = groupIndex)]
    pub fn group_index(&self) -> Vec<f64> {
        self.n_g.clone()
    }

    /// Transparency window width, Grad/s (0 when closed).
    #[wasm_bindgen(getter, js_name = windowWidth)]
    pub fn window_width(&self) -> f64 {
        self.width
    }

    #[wasm_bindgen(getter, js_name = groupIndexCenter)]
    pub fn group_index_center(&self) -> f64 {
        self.ng_center
    }
}

pub fn compute_spectrum(omega2_grad: f64, half_span_grad: f64, points: usize) -> Result<Spectrum, EitError> {
    if points < 2 || !(half_span_grad > 0.0) {
        return Err(EitError::InvalidParameter("need at least 2 points and a positive span".into()));
    }
    let sys = LadderSystem::cu2o_default();
    let d = drive(&sys, omega2_grad);
    let grid: Vec<f64> = (0..points)
        .map(|i| (-1.0 + 2.0 * i as f64 / (points - 1) as f64) * half_span_grad * GIGA)
        .collect();
    let table = spectrum(&sys, &d, &grid)?;
    let w = window_metrics(&sys, &d)?;
    Ok(Spectrum {
        offset: grid.iter().map(|x| x / GIGA).collect(),
        chi_re: table.chi_re,
        chi_im: table.chi_im,
        n_g: table.n_g,
        width: w.width / GIGA,
        ng_center: w.ng_center,
    })
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(omega2_grad: f64, half_span_grad: f64, points: usize) -> Result<Spectrum, JsError> {
    compute_spectrum(omega2_grad, half_span_grad, points).map_err(js)
}

#[wasm_bindgen]
pub struct Sweep {
    omega2: Vec<f64>,
    n_g: Vec<f64>,
    chi_im: Vec<f64>,
    argmax: usize,
}

#[wasm_bindgen]
impl Sweep {
    /// Control Rabi frequencies, Grad/s.
    #[wasm_bindgen(getter)]
    pub fn omega2(&self) -> Vec<f64> {
        self.omega2.clone()
    }

    #[wasm_bindgen(getter, js_name = groupIndex)]
    pub fn group_index(&self) -> Vec<f64> {
        self.n_g.clone()
    }

    #[wasm_bindgen(getter, js_name = chiIm)]
    pub fn chi_im(&self) -> Vec<f64> {
        self.chi_im.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn argmax(&self) -> usize {
        self.argmax
    }
}

pub fn compute_sweep(max_grad: f64, points: usize) -> Result<Sweep, EitError> {
    if points < 1 || !(max_grad > 0.0) {
        return Err(EitError::InvalidParameter("need at least 1 point and a positive maximum".into()));
    }
    let sys = LadderSystem::cu2o_default();
    let grid: Vec<f64> = (1..=points).map(|i| max_grad * GIGA * i as f64 / points as f64).collect();
    let s = sweep_control(&sys, &drive(&sys, 0.0), &grid)?;
    Ok(Sweep {
        omega2: s.points.iter().map(|p| p.omega2 / GIGA).collect(),
        n_g: s.points.iter().map(|p| p.ng_center).collect(),
        chi_im: s.points.iter().map(|p| p.chi_im_center).collect(),
        argmax: s.argmax,
    })
}

#[wasm_bindgen(js_name = controlSweep)]
pub fn sweep_js(max_grad: f64, points: usize) -> Result<Sweep, JsError> {
    compute_sweep(max_grad, points).map_err(js)
}

#[wasm_bindgen]
pub struct Pulse {
    times: Vec<f64>,
    input: Vec<f64>,
    output: Vec<f64>,
    analytic: Vec<f64>,
    delay: f64,
    predicted_delay: f64,
    attenuation: f64,
}

#[wasm_bindgen]
impl Pulse {
    /// Co-moving time, ns.
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    /// |input envelope|, normalised to its peak.
    #[wasm_bindgen(getter)]
    pub fn input(&self) -> Vec<f64> {
        self.input.clone()
    }

    /// |output envelope|, normalised to its own peak.
    #[wasm_bindgen(getter)]
    pub fn output(&self) -> Vec<f64> {
        self.output.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn analytic(&self) -> Vec<f64> {
        self.analytic.clone()
    }

    /// Lab-frame delay, ns.
    #[wasm_bindgen(getter)]
    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// L / v_g, ns.
    #[wasm_bindgen(getter, js_name = predictedDelay)]
    pub fn predicted_delay(&self) -> f64 {
        self.predicted_delay
    }

    #[wasm_bindgen(getter)]
    pub fn attenuation(&self) -> f64 {
        self.attenuation
    }
}

fn normalised(v: &[Complex64]) -> Vec<f64> {
    let peak = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    v.iter().map(|c| c.norm() * scale).collect()
}

pub fn compute_pulse(omega2_grad: f64, length_um: f64, z_steps: usize) -> Result<Pulse, EitError> {
    let sys = LadderSystem::cu2o_default();
    let d = drive(&sys, omega2_grad);
    let length = length_um * 1e-6;
    let mut setup = default_setup(&sys, &d, length, None, z_steps.max(1), 20.0)?;
    setup.params.check_convergence = false;
    let pulse = setup.pulse;
    let rec = propagate_pulse(|t| pulse.at(t), &setup.params, &d, &sys)?;
    let analytic = analytic_envelope(|t| pulse.at(t), &rec.times, length, &d, &sys)?;
    let vg = group_velocity(d.two_photon_center(), &sys, &d)?;
    Ok(Pulse {
        times: rec.times.iter().map(|t| t * 1e9).collect(),
        input: normalised(&rec.envelope_in),
        output: normalised(&rec.envelope_out),
        analytic: normalised(&analytic),
        delay: rec.measured_delay * 1e9,
        predicted_delay: length / vg * 1e9,
        attenuation: rec.measured_attenuation,
    })
}

#[wasm_bindgen(js_name = propagate)]
pub fn pulse_js(omega2_grad: f64, length_um: f64, z_steps: usize) -> Result<Pulse, JsError> {
    compute_pulse(omega2_grad, length_um, z_steps).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_has_a_window() {
        let s = compute_spectrum(25.0, 150.0, 301).unwrap();
        assert_eq!(s.offset.len(), 301);
        assert!(s.width > 0.0);
        assert!(s.ng_center > 1e4);
        assert!(compute_spectrum(25.0, 150.0, 1).is_err());
    }

    #[test]
    fn sweep_peaks_near_twenty_grad() {
        let s = compute_sweep(60.0, 120).unwrap();
        let best = s.omega2[s.argmax];
        assert!((15.0..30.0).contains(&best), "{best}");
    }

    #[test]
    fn pulse_is_delayed() {
        let p = compute_pulse(50.0, 30.0, 40).unwrap();
        assert!((p.delay / p.predicted_delay - 1.0).abs() < 0.05);
        assert!(p.attenuation > 0.0 && p.attenuation < 1.0);
    }
}
