//! Steady-state probe response of the ladder.
//!
//! ```text
//! χ(ω) = −A / [ (ω − δ₁ + iγ_ab) − |Ω₂|² / (ω − δ₁ + δ₂ + iγ_bc) ],   A = N|d_ab|²/(ħε₀)
//! ```
//!
//! `ω` is the probe's offset from its carrier. The two-photon resonance, the
//! centre of the transparency window, sits at `ω = δ₁ − δ₂`. With the
//! leading minus sign a positive `χ″` means absorption.
//!
//! The group index `n_g = 1 + (ω₁/2) ∂Reχ/∂ω` uses the analytic derivative.
//! Some texts quote the slow-down as `v_g/c ~ 10⁻⁴`, others as
//! `c/v_g ~ 10⁴`; [`WindowMetrics`] carries both.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EitError, Result};
use crate::system::{FieldDrive, LadderSystem};
use crate::units::SPEED_OF_LIGHT;

/// Write χ as `−A·q/(p·q − s)` with `p = ω − δ₁ + iγ_ab`,
/// `q = ω − δ₁ + δ₂ + iγ_bc`, `s = |Ω₂|²`.
///
/// The rearranged form is algebraically identical and keeps the exact
/// two-photon transparency point (`q = 0`) finite.
#[derive(Debug, Clone, Copy)]
struct Rational {
    scale: f64,
    p: Complex64,
    q: Complex64,
    s: f64,
}

impl Rational {
    fn new(omega: f64, system: &LadderSystem, drive: &FieldDrive) -> Self {
        Rational {
            scale: system.susceptibility_scale(),
            p: Complex64::new(omega - drive.delta1, system.gamma_ab),
            q: Complex64::new(omega - drive.delta1 + drive.delta2, system.gamma_bc),
            s: drive.rabi2.norm_sqr(),
        }
    }

    fn denominator(&self) -> Complex64 {
        self.p * self.q - self.s
    }

    fn check(&self, omega: f64) -> Result<()> {
        let pole = if self.s == 0.0 { self.p.norm() == 0.0 } else { self.denominator().norm() == 0.0 };
        if pole {
            return Err(EitError::Pole(format!("χ has a pole at ω = {omega:e} rad/s")));
        }
        Ok(())
    }

    fn chi(&self) -> Complex64 {
        if self.s == 0.0 {
            -self.scale / self.p
        } else {
            -self.scale * self.q / self.denominator()
        }
    }

    /// dχ/dω = A (q² + s) / (pq − s)²
    fn dchi(&self) -> Complex64 {
        if self.s == 0.0 {
            self.scale / (self.p * self.p)
        } else {
            let d = self.denominator();
            self.scale * (self.q * self.q + self.s) / (d * d)
        }
    }
}

/// Complex susceptibility at probe offset `omega` (rad/s).
pub fn chi(omega: f64, system: &LadderSystem, drive: &FieldDrive) -> Result<Complex64> {
    let r = Rational::new(omega, system, drive);
    r.check(omega)?;
    Ok(r.chi())
}

/// Analytic `∂χ/∂ω`, s.
pub fn chi_derivative(omega: f64, system: &LadderSystem, drive: &FieldDrive) -> Result<Complex64> {
    let r = Rational::new(omega, system, drive);
    r.check(omega)?;
    Ok(r.dchi())
}

/// `n_g = 1 + (ω₁/2) ∂Reχ/∂ω`.
pub fn group_index(omega: f64, system: &LadderSystem, drive: &FieldDrive) -> Result<f64> {
    Ok(1.0 + 0.5 * drive.omega1 * chi_derivative(omega, system, drive)?.re)
}

/// Group index from a central difference of Reχ with step `step` (rad/s).
/// Cross-check for [`group_index`].
pub fn group_index_finite_difference(
    omega: f64,
    step: f64,
    system: &LadderSystem,
    drive: &FieldDrive,
) -> Result<f64> {
    let hi = chi(omega + step, system, drive)?.re;
    let lo = chi(omega - step, system, drive)?.re;
    Ok(1.0 + 0.5 * drive.omega1 * (hi - lo) / (2.0 * step))
}

/// `v_g = c / (1 + ½Reχ + (ω₁/2) ∂Reχ/∂ω)`, m/s. Negative values are
/// returned as they are (anomalous dispersion).
pub fn group_velocity(omega: f64, system: &LadderSystem, drive: &FieldDrive) -> Result<f64> {
    let r = Rational::new(omega, system, drive);
    r.check(omega)?;
    let denom = 1.0 + 0.5 * r.chi().re + 0.5 * drive.omega1 * r.dchi().re;
    if denom == 0.0 {
        return Err(EitError::Pole(format!("group velocity diverges at ω = {omega:e} rad/s")));
    }
    Ok(SPEED_OF_LIGHT / denom)
}

/// Metrics of the transparency window around the two-photon resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowMetrics {
    /// Probe offset of the window centre, rad/s.
    pub center: f64,
    /// χ″ at the centre.
    pub center_abs: f64,
    /// Peak χ″ of the bare (Ω₂ = 0) Lorentzian, `A/γ_ab`.
    pub bare_peak: f64,
    /// Span around the centre where χ″ stays below half the bare peak, rad/s.
    /// Zero when no window is open.
    pub width: f64,
    /// Group index at the centre.
    pub ng_center: f64,
    /// ∂Reχ/∂ω at the centre, s.
    pub slope: f64,
    /// `v_g/c` at the centre.
    pub slowdown: f64,
}

impl WindowMetrics {
    pub fn is_open(&self) -> bool {
        self.width > 0.0
    }
}

/// Half-width of the region scanned around the two-photon resonance.
pub fn scan_half_span(system: &LadderSystem, drive: &FieldDrive) -> f64 {
    (10.0 * system.gamma_ab).max(4.0 * drive.rabi2.norm())
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) < 0 ≤ f(hi), in either orientation of lo/hi
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scan χ″ away from the window centre for the first upward crossing of `level`.
fn edge(
    system: &LadderSystem,
    drive: &FieldDrive,
    center: f64,
    direction: f64,
    level: f64,
) -> Result<Option<f64>> {
    let span = scan_half_span(system, drive);
    let n = 4000;
    let absorb = |w: f64| chi(w, system, drive).map(|c| c.im - level);
    let mut prev = center;
    for i in 1..=n {
        let w = center + direction * span * i as f64 / n as f64;
        if absorb(w)? >= 0.0 {
            let f = |x: f64| absorb(x).unwrap_or(f64::NAN);
            return Ok(Some(bisect(f, prev, w)));
        }
        prev = w;
    }
    Ok(None)
}

pub fn window_metrics(system: &LadderSystem, drive: &FieldDrive) -> Result<WindowMetrics> {
    let center = drive.two_photon_center();
    let bare_peak = system.susceptibility_scale() / system.gamma_ab;
    let r = Rational::new(center, system, drive);
    r.check(center)?;
    let center_abs = r.chi().im;
    let slope = r.dchi().re;
    let ng_center = 1.0 + 0.5 * drive.omega1 * slope;
    let half = 0.5 * bare_peak;

    let width = if drive.rabi2.norm() == 0.0 || center_abs >= half {
        0.0
    } else {
        let right = edge(system, drive, center, 1.0, half)?;
        let left = edge(system, drive, center, -1.0, half)?;
        match (left, right) {
            (Some(l), Some(r)) => r - l,
            _ => {
                return Err(EitError::Numerical(
                    "transparency window edge not found inside the scan range".into(),
                ))
            }
        }
    };
    Ok(WindowMetrics {
        center,
        center_abs,
        bare_peak,
        width,
        ng_center,
        slope,
        slowdown: 1.0 / ng_center,
    })
}

/// One Ω₂ sample of a control sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// Control Rabi frequency, rad/s.
    pub omega2: f64,
    /// Group index at the window centre.
    pub ng_center: f64,
    /// χ″ at the window centre.
    pub chi_im_center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSweep {
    pub points: Vec<SweepPoint>,
    /// Index of the Ω₂ maximising the centre group index.
    pub argmax: usize,
}

impl ControlSweep {
    pub fn best(&self) -> SweepPoint {
        self.points[self.argmax]
    }
}

pub(crate) fn check_increasing(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(EitError::Domain(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(EitError::Domain(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn map_ordered<T, F>(items: &[f64], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_ordered<T, F>(items: &[f64], f: F) -> Result<Vec<T>>
where
    F: Fn(f64) -> Result<T>,
{
    items.iter().map(|&x| f(x)).collect()
}

/// Window-centre group index and absorption across a grid of control Rabi
/// frequencies (rad/s). Results are ordered by grid index.
pub fn sweep_control(
    system: &LadderSystem,
    drive: &FieldDrive,
    omega2_grid: &[f64],
) -> Result<ControlSweep> {
    check_increasing("omega2", omega2_grid)?;
    let center = drive.two_photon_center();
    let points = map_ordered(omega2_grid, |omega2| {
        let d = drive.with_control(Complex64::new(omega2, 0.0));
        let r = Rational::new(center, system, &d);
        r.check(center)?;
        Ok(SweepPoint {
            omega2,
            ng_center: 1.0 + 0.5 * d.omega1 * r.dchi().re,
            chi_im_center: r.chi().im,
        })
    })?;
    let argmax = points
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.ng_center > points[best].ng_center { i } else { best });
    Ok(ControlSweep { points, argmax })
}

/// Sampled spectrum: χ′, χ″ and n_g over a probe-offset grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub omega_grid: Vec<f64>,
    pub chi_re: Vec<f64>,
    pub chi_im: Vec<f64>,
    pub n_g: Vec<f64>,
    pub system: LadderSystem,
    pub drive: FieldDrive,
}

impl SpectrumTable {
    pub fn len(&self) -> usize {
        self.omega_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_grid.is_empty()
    }
}

pub fn spectrum(
    system: &LadderSystem,
    drive: &FieldDrive,
    omega_grid: &[f64],
) -> Result<SpectrumTable> {
    check_increasing("omega", omega_grid)?;
    let samples = map_ordered(omega_grid, |w| {
        let r = Rational::new(w, system, drive);
        r.check(w)?;
        let c = r.chi();
        Ok((c.re, c.im, 1.0 + 0.5 * drive.omega1 * r.dchi().re))
    })?;
    let mut table = SpectrumTable {
        omega_grid: omega_grid.to_vec(),
        chi_re: Vec::with_capacity(samples.len()),
        chi_im: Vec::with_capacity(samples.len()),
        n_g: Vec::with_capacity(samples.len()),
        system: *system,
        drive: *drive,
    };
    for (re, im, ng) in samples {
        table.chi_re.push(re);
        table.chi_im.push(im);
        table.n_g.push(ng);
    }
    Ok(table)
}

/// Absorption and group-index maps over (Ω₂, ω): row `i` belongs to
/// `omega2_grid[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMap {
    pub omega_grid: Vec<f64>,
    pub omega2_grid: Vec<f64>,
    pub chi_im: Vec<Vec<f64>>,
    pub chi_re: Vec<Vec<f64>>,
    pub n_g: Vec<Vec<f64>>,
}

pub fn spectrum_map(
    system: &LadderSystem,
    drive: &FieldDrive,
    omega_grid: &[f64],
    omega2_grid: &[f64],
) -> Result<SpectrumMap> {
    check_increasing("omega2", omega2_grid)?;
    let rows = map_ordered(omega2_grid, |omega2| {
        spectrum(system, &drive.with_control(Complex64::new(omega2, 0.0)), omega_grid)
    })?;
    Ok(SpectrumMap {
        omega_grid: omega_grid.to_vec(),
        omega2_grid: omega2_grid.to_vec(),
        chi_im: rows.iter().map(|t| t.chi_im.clone()).collect(),
        chi_re: rows.iter().map(|t| t.chi_re.clone()).collect(),
        n_g: rows.into_iter().map(|t| t.n_g).collect(),
    })
}

/// Dressed-state prediction of the absorption doublet, as offsets from the
/// two-photon resonance: `(−|Ω₂|, +|Ω₂|)`. Only valid with the control on
/// resonance.
pub fn dressed_peaks(drive: &FieldDrive) -> Result<(f64, f64)> {
    if drive.delta2 != 0.0 {
        return Err(EitError::Domain(format!(
            "dressed-state splitting ±Ω₂ needs δ₂ = 0, got {:e} rad/s",
            drive.delta2
        )));
    }
    let w = drive.rabi2.norm();
    Ok((-w, w))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (a.abs() + b.abs()).max(1.0) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Locate the χ″ maxima on either side of the two-photon resonance by a
/// coarse scan and golden-section refinement. Returns offsets from the
/// centre `(left, right)`.
pub fn locate_absorption_peaks(system: &LadderSystem, drive: &FieldDrive) -> Result<(f64, f64)> {
    let center = drive.two_photon_center();
    let span = scan_half_span(system, drive);
    let n = 4000;
    let absorb = |w: f64| chi(w, system, drive).map(|c| c.im).unwrap_or(f64::NEG_INFINITY);
    let side = |direction: f64| {
        let pts: Vec<f64> = (0..=n).map(|i| center + direction * span * i as f64 / n as f64).collect();
        let best = (0..pts.len())
            .max_by(|&i, &j| absorb(pts[i]).total_cmp(&absorb(pts[j])))
            .unwrap_or(0);
        let lo = pts[best.saturating_sub(1)];
        let hi = pts[(best + 1).min(n)];
        golden_max(absorb, lo.min(hi), lo.max(hi)) - center
    };
    Ok((side(-1.0), side(1.0)))
}
