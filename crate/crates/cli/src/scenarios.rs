//! Scenario runners. Each returns the reports to be written; nothing here
//! touches the filesystem.

use num_complex::Complex64;
use rydberg_eit::levels::{
    dipole_moment_squared, energy_nlm, eta_lm, mixed_level, Branch, MixedState,
};
use rydberg_eit::propagation::{
    analytic_envelope, default_pulse_duration, default_setup, propagate_pulse, relative_l2, GaussianPulse,
    PropagationParams,
};
use rydberg_eit::susceptibility::{chi, group_velocity, spectrum, sweep_control, window_metrics};
use rydberg_eit::units::{HBAR_EV, SPEED_OF_LIGHT};
use serde_json::{json, Value};

use crate::config::{Grid, ScenarioConfig};
use crate::error::CliError;
use crate::output::{jnum, Cell, Report};

const ANGULAR_NOTE: &str =
    "frequencies are angular (rad/s); *_ueV columns give the same quantity as an energy E = hbar*omega";

fn micro_ev(omega: f64) -> f64 {
    omega * HBAR_EV * 1e6
}

/// χ, n_g over the probe-offset grid, one report per control Rabi frequency.
pub fn run_spectrum(cfg: &ScenarioConfig) -> Result<Vec<Report>, CliError> {
    let sys = cfg.ladder()?;
    let base = cfg.field_drive(&sys);
    let grid = cfg.grids.probe_offset.values();
    let mut reports = Vec::new();
    for (i, &omega2) in cfg.grids.spectrum_omega2.iter().enumerate() {
        let phase = cfg.drive.rabi2_phase;
        let drive = base.with_control(Complex64::from_polar(omega2, phase));
        let table = spectrum(&sys, &drive, &grid)?;
        let w = window_metrics(&sys, &drive)?;
        let mut r = Report::new(
            format!("spectrum_{i:02}"),
            "spectrum",
            vec!["probe_offset_rad_per_s", "probe_offset_ueV", "chi_re", "chi_im", "n_g"],
        );
        r.note(ANGULAR_NOTE);
        r.set("Omega2_rad_per_s", jnum(omega2));
        r.set("Omega2_ueV", jnum(micro_ev(omega2)));
        r.set("window_open", json!(w.is_open()));
        r.set("window_center_rad_per_s", jnum(w.center));
        r.set("window_width_rad_per_s", jnum(w.width));
        r.set("chi_im_center", jnum(w.center_abs));
        r.set("chi_im_bare_peak", jnum(w.bare_peak));
        r.set("n_g_center", jnum(w.ng_center));
        r.set("vg_over_c_center", jnum(w.slowdown));
        for k in 0..table.len() {
            let x = table.omega_grid[k];
            r.rows.push(vec![
                Cell::Num(x),
                Cell::Num(micro_ev(x)),
                Cell::Num(table.chi_re[k]),
                Cell::Num(table.chi_im[k]),
                Cell::Num(table.n_g[k]),
            ]);
        }
        reports.push(r);
    }
    Ok(reports)
}

/// Window-centre n_g and χ″ against the control Rabi frequency.
pub fn run_sweep(cfg: &ScenarioConfig) -> Result<Vec<Report>, CliError> {
    let sys = cfg.ladder()?;
    let drive = cfg.field_drive(&sys);
    let sweep = sweep_control(&sys, &drive, &cfg.grids.sweep_omega2.values())?;
    let mut r = Report::new(
        "sweep",
        "sweep",
        vec!["Omega2_rad_per_s", "Omega2_ueV", "n_g_center", "chi_im_center"],
    );
    r.note(ANGULAR_NOTE);
    let best = sweep.best();
    r.set("argmax_index", json!(sweep.argmax));
    r.set("argmax_Omega2_rad_per_s", jnum(best.omega2));
    r.set("argmax_Omega2_ueV", jnum(micro_ev(best.omega2)));
    r.set("max_n_g_center", jnum(best.ng_center));
    r.set("chi_im_center_at_argmax", jnum(best.chi_im_center));
    for p in &sweep.points {
        r.rows.push(vec![
            Cell::Num(p.omega2),
            Cell::Num(micro_ev(p.omega2)),
            Cell::Num(p.ng_center),
            Cell::Num(p.chi_im_center),
        ]);
    }
    Ok(vec![r])
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Upper => "upper",
        Branch::Lower => "lower",
    }
}

/// Anisotropic level table plus the field-mixed 2P/10S roots.
pub fn run_levels(cfg: &ScenarioConfig) -> Result<Vec<Report>, CliError> {
    let p = &cfg.levels.params;
    let mut r = Report::new(
        "levels",
        "levels",
        vec!["kind", "n", "l", "m", "eta", "E_real_meV", "E_imag_meV", "branch", "selected"],
    );
    r.note("energies are relative to the band gap; E_imag = -Gamma");
    for &n in &cfg.levels.principal {
        for l in 0..n {
            for m in -(l as i32)..=(l as i32) {
                let eta = eta_lm(l, m, p.anisotropy)?;
                let e = energy_nlm(n, l, m, p)?;
                r.rows.push(vec![
                    Cell::Text("level".into()),
                    Cell::Int(n.into()),
                    Cell::Int(l.into()),
                    Cell::Int(m.into()),
                    Cell::Num(eta),
                    Cell::Num(e * 1e3),
                    Cell::Num(-p.damping(n, l, m) * 1e3),
                    Cell::Text(String::new()),
                    Cell::Text(String::new()),
                ]);
            }
        }
    }
    for state in [MixedState::TwoPz, MixedState::TenS] {
        let level = mixed_level(state, p)?;
        let (n, l, m) = state.quantum_numbers();
        let eta = eta_lm(l, m, p.anisotropy)?;
        for branch in [Branch::Upper, Branch::Lower] {
            let root = level.roots.select(branch);
            r.rows.push(vec![
                Cell::Text(format!("mixed:{}", state.label())),
                Cell::Int(n.into()),
                Cell::Int(l.into()),
                Cell::Int(m.into()),
                Cell::Num(eta),
                Cell::Num((root.re - p.band_gap) * 1e3),
                Cell::Num(root.im * 1e3),
                Cell::Text(branch_name(branch).into()),
                Cell::Text(if branch == state.branch() { "yes" } else { "no" }.into()),
            ]);
        }
        let res = level.roots.residuals(level.threshold_s, level.threshold_p, level.coupling);
        let label = state.label();
        r.set(&format!("{label}_coupling_meV"), jnum(level.coupling * 1e3));
        r.set(&format!("{label}_max_residual_eV2"), jnum(res[0].max(res[1])));
        r.set(&format!("{label}_energy_real_eV"), jnum(level.energy.re));
        r.set(&format!("{label}_energy_imag_eV"), jnum(level.energy.im));
    }
    let eta_11 = eta_lm(1, 1, p.anisotropy)?;
    r.set("eta_11", jnum(eta_11));
    r.set("M10_sq_C2m2", jnum(dipole_moment_squared(p, eta_11)?));
    Ok(vec![r])
}

/// Gaussian probe through the slab, with the narrowband prediction for
/// comparison.
pub fn run_propagation(cfg: &ScenarioConfig) -> Result<Vec<Report>, CliError> {
    let sys = cfg.ladder()?;
    let drive = cfg.field_drive(&sys);
    let pc = &cfg.propagation;
    let center = drive.two_photon_center();
    let (mut params, pulse) = match &cfg.grids.time_window {
        Some(Grid::Linspace { start, stop, n }) => {
            let duration = match pc.pulse_duration {
                Some(d) => d,
                None => default_pulse_duration(&sys, &drive)?,
            };
            let params = PropagationParams::new(&sys, &drive, pc.length, pc.z_steps, *start, *stop, *n)?;
            let pulse = GaussianPulse { center: 0.0, duration, peak: drive.rabi1.norm(), carrier_offset: center };
            (params, pulse)
        }
        _ => {
            let s = default_setup(&sys, &drive, pc.length, pc.pulse_duration, pc.z_steps, pc.samples_per_duration)?;
            (s.params, s.pulse)
        }
    };
    params.source = cfg.bloch_source();
    let rec = propagate_pulse(|t| pulse.at(t), &params, &drive, &sys)?;
    let analytic = analytic_envelope(|t| pulse.at(t), &rec.times, pc.length, &drive, &sys)?;

    let chi0 = chi(center, &sys, &drive)?;
    let vg = group_velocity(center, &sys, &drive)?;
    let predicted_delay = pc.length / vg;
    let predicted_attenuation = (-drive.omega1 * chi0.im * pc.length / (2.0 * SPEED_OF_LIGHT)).exp();

    let mut r = Report::new(
        "propagation",
        "propagation",
        vec!["t_s", "in_abs", "in_arg", "out_abs", "out_arg", "analytic_abs", "analytic_arg"],
    );
    r.note("t is co-moving time (lab time minus z/c); envelopes are probe Rabi frequencies in rad/s");
    r.set("delay_s", jnum(rec.measured_delay));
    r.set("excess_delay_s", jnum(rec.comoving_delay));
    r.set("predicted_delay_s", jnum(predicted_delay));
    r.set("attenuation", jnum(rec.measured_attenuation));
    r.set("predicted_attenuation", jnum(predicted_attenuation));
    r.set("phase_rad", jnum(rec.measured_phase));
    r.set("l2_deviation_from_analytic", jnum(relative_l2(&rec.envelope_out, &analytic)));
    r.set("slowdown_factor", jnum(rec.slowdown_factor(pc.length)));
    r.set("vg_over_c", jnum(vg / SPEED_OF_LIGHT));
    r.set("pulse_duration_s", jnum(pulse.duration));
    r.set("t_start_s", jnum(params.t_start));
    r.set("dt_s", jnum(params.dt));
    r.set("t_steps", json!(params.t_steps));
    r.set("dz_m", jnum(params.dz));
    r.set("z_steps", json!(params.z_steps));
    r.set("refinement_change", rec.refinement_change.map_or(Value::Null, jnum));
    r.set("warnings", json!(rec.warnings));
    for k in 0..rec.times.len() {
        let (a, b, c) = (rec.envelope_in[k], rec.envelope_out[k], analytic[k]);
        r.rows.push(vec![
            Cell::Num(rec.times[k]),
            Cell::Num(a.norm()),
            Cell::Num(a.arg()),
            Cell::Num(b.norm()),
            Cell::Num(b.arg()),
            Cell::Num(c.norm()),
            Cell::Num(c.arg()),
        ]);
    }
    Ok(vec![r])
}
