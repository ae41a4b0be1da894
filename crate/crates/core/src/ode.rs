//! Adaptive Dormand–Prince 5(4) integration of real state vectors.

use crate::error::{EitError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { relative: 1e-9, absolute: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(relative: f64, absolute: f64) -> Self {
        Tolerance { relative, absolute }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// 5th-order weights (equal to the last row of A: FSAL).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` and report the state at each of
/// `sample_times` (ascending, all ≥ t0). Steps are clipped so that every
/// sample time is hit exactly.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    sample_times: &[f64],
    tol: Tolerance,
) -> Result<(Vec<[f64; N]>, Stats)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(sample_times.len());
    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let t_end = sample_times.last().copied().unwrap_or(t0);
    if sample_times.windows(2).any(|w| w[1] < w[0]) || sample_times.first().is_some_and(|&s| s < t0) {
        return Err(EitError::Domain("sample times must be ascending and ≥ t0".into()));
    }
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y);
    let span = (t_end - t0).abs().max(f64::MIN_POSITIVE);
    let mut h = initial_step(&k[0], &y, tol, span);
    let mut next_sample = 0;

    while next_sample < sample_times.len() && sample_times[next_sample] <= t {
        out.push(y);
        next_sample += 1;
    }

    while next_sample < sample_times.len() {
        let target = sample_times[next_sample];
        let mut step = h.min(target - t);
        let hits_target = step >= target - t;
        if hits_target {
            step = target - t;
        }
        let min_step = 1e-14 * t.abs().max(span);
        if step < min_step && !hits_target {
            return Err(EitError::StepUnderflow { t, h: step });
        }

        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += step * a * kj[i];
                    }
                }
            }
            k[s] = f(t + C[s] * step, &ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] = y[i] + step * d5;
            let scale = tol.absolute + tol.relative * y[i].abs().max(y5[i].abs());
            err = err.max((step * (d5 - d4)).abs() / scale);
        }
        if !err.is_finite() {
            return Err(EitError::Numerical(format!("non-finite state at t = {t:e}")));
        }

        if err <= 1.0 {
            stats.accepted += 1;
            t = if hits_target { target } else { t + step };
            y = y5;
            k[0] = k[6];
            while next_sample < sample_times.len() && sample_times[next_sample] <= t {
                out.push(y);
                next_sample += 1;
            }
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            // Keep the unclipped step as the proposal so sample clipping does not shrink h.
            h = if hits_target { h.max(step * grow) } else { step * grow };
        } else {
            stats.rejected += 1;
            h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < 1e-14 * t.abs().max(span) {
                return Err(EitError::StepUnderflow { t, h });
            }
        }
    }
    Ok((out, stats))
}

fn initial_step<const N: usize>(f0: &[f64; N], y0: &[f64; N], tol: Tolerance, span: f64) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..N {
        let sc = tol.absolute + tol.relative * y0[i].abs();
        d0 = d0.max(y0[i].abs() / sc);
        d1 = d1.max(f0[i].abs() / sc);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span)
}
