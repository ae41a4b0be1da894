//! Independent oracles for the steady-state response.

use num_complex::Complex64;
use proptest::prelude::*;
use rydberg_eit::susceptibility::{chi, chi_derivative, group_index, locate_absorption_peaks};
use rydberg_eit::units::GIGA;
use rydberg_eit::{FieldDrive, LadderSystem};

/// Gaussian elimination with partial pivoting on a complex 2×2 system.
fn solve2(a: [[Complex64; 2]; 2], b: [Complex64; 2]) -> [Complex64; 2] {
    let (mut a, mut b) = (a, b);
    if a[1][0].norm() > a[0][0].norm() {
        a.swap(0, 1);
        b.swap(0, 1);
    }
    let f = a[1][0] / a[0][0];
    let a11 = a[1][1] - f * a[0][1];
    let b1 = b[1] - f * b[0];
    let x1 = b1 / a11;
    let x0 = (b[0] - a[0][1] * x1) / a[0][0];
    [x0, x1]
}

/// σ_ab for a probe component e^{−iωt}: substituting into the linearised
/// equations shifts δ₁ → δ₁ − ω and gives the pair
/// (δ₁' − iγ_ab)σ_ab − Ω₂σ_cb = Ω₁,  Ω₂*σ_ab + (δ₂ − δ₁' + iγ_bc)σ_cb = 0.
fn sigma_ab_oracle(omega: f64, sys: &LadderSystem, drive: &FieldDrive) -> Complex64 {
    let d1 = drive.delta1 - omega;
    let a = [
        [Complex64::new(d1, -sys.gamma_ab), -drive.rabi2],
        [drive.rabi2.conj(), Complex64::new(drive.delta2 - d1, sys.gamma_bc)],
    ];
    solve2(a, [drive.rabi1, Complex64::new(0.0, 0.0)])[0]
}

fn random_case(
    gab: f64,
    gbc: f64,
    o2re: f64,
    o2im: f64,
    d1: f64,
    d2: f64,
    o1: f64,
) -> (LadderSystem, FieldDrive) {
    let mut sys = LadderSystem::cu2o_default();
    sys.gamma_ab = gab;
    sys.gamma_bc = gbc;
    let drive = FieldDrive::resonant(&sys, Complex64::new(o1, 0.3 * o1), Complex64::new(o2re, o2im))
        .with_detunings(d1, d2);
    (sys, drive)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn chi_equals_scaled_linear_solve(
        gab in 1e8f64..2e11,
        gbc in 1e7f64..1e11,
        o2re in -1e11f64..1e11,
        o2im in -3e10f64..3e10,
        d1 in -1e11f64..1e11,
        d2 in -1e11f64..1e11,
        o1 in 1e3f64..1e8,
        omega in -3e11f64..3e11,
    ) {
        let (sys, drive) = random_case(gab, gbc, o2re, o2im, d1, d2, o1);
        let got = chi(omega, &sys, &drive).unwrap();
        let want = sys.susceptibility_scale() * sigma_ab_oracle(omega, &sys, &drive) / drive.rabi1;
        prop_assert!((got - want).norm() <= 1e-12 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn absorption_is_positive(
        gab in 1e8f64..2e11,
        gbc in 1e6f64..1e11,
        o2 in 0f64..2e11,
        d1 in -1e11f64..1e11,
        d2 in -1e11f64..1e11,
        omega in -5e11f64..5e11,
    ) {
        let (sys, drive) = random_case(gab, gbc, o2, 0.0, d1, d2, 1e6);
        prop_assert!(chi(omega, &sys, &drive).unwrap().im > 0.0);
    }

    #[test]
    fn prefactor_scaling(scale in 0.01f64..100.0, omega in -2e11f64..2e11) {
        let (sys, drive) = random_case(45.573e9, 7.596e9, 25e9, 0.0, 0.0, 0.0, 1e6);
        let mut scaled = sys;
        scaled.d_ab *= scale.sqrt();
        let a = chi(omega, &sys, &drive).unwrap();
        let b = chi(omega, &scaled, &drive).unwrap();
        prop_assert!((b - a * scale).norm() <= 1e-12 * b.norm());
        let ga = group_index(omega, &sys, &drive).unwrap() - 1.0;
        let gb = group_index(omega, &scaled, &drive).unwrap() - 1.0;
        prop_assert!((gb - ga * scale).abs() <= 1e-10 * gb.abs().max(1e-300));
    }
}

#[test]
fn absorption_extrema_do_not_move_under_prefactor_scaling() {
    let sys = LadderSystem::cu2o_default();
    let drive = FieldDrive::resonant(&sys, Complex64::new(1e6, 0.0), Complex64::new(40.0 * GIGA, 0.0));
    let base = locate_absorption_peaks(&sys, &drive).unwrap();
    let mut scaled = sys;
    scaled.density *= 37.0;
    let moved = locate_absorption_peaks(&scaled, &drive).unwrap();
    assert!((base.0 - moved.0).abs() < 1e-6 * sys.gamma_ab);
    assert!((base.1 - moved.1).abs() < 1e-6 * sys.gamma_ab);
}

#[test]
fn symmetric_doublet_for_equal_dampings() {
    let mut sys = LadderSystem::cu2o_default();
    sys.gamma_bc = sys.gamma_ab;
    let drive = FieldDrive::resonant(&sys, Complex64::new(1e6, 0.0), Complex64::new(60.0 * GIGA, 0.0));
    for w in [1e9, 1e10, 6e10, 2e11] {
        let a = chi(w, &sys, &drive).unwrap();
        let b = chi(-w, &sys, &drive).unwrap();
        // χ(−ω) = −χ(ω)* at resonance
        assert!((a.im - b.im).abs() < 1e-13 * a.im);
        assert!((a.re + b.re).abs() < 1e-13 * a.norm());
    }
    let (l, r) = locate_absorption_peaks(&sys, &drive).unwrap();
    assert!((l + r).abs() < 1e-6 * sys.gamma_ab);
}

/// Principal-value Hilbert transform `(1/π) P∫ f(x)/(x − x_k) dx` on a uniform
/// grid by singularity subtraction, with the removable point filled in by a
/// central difference.
fn hilbert_at(xs: &[f64], f: &[f64], k: usize) -> f64 {
    let h = xs[1] - xs[0];
    let (a, b) = (xs[0], xs[xs.len() - 1]);
    let xk = xs[k];
    let g = |j: usize| {
        if j == k {
            (f[k + 1] - f[k - 1]) / (2.0 * h)
        } else {
            (f[j] - f[k]) / (xs[j] - xk)
        }
    };
    let mut sum = 0.5 * (g(0) + g(xs.len() - 1));
    for j in 1..xs.len() - 1 {
        sum += g(j);
    }
    (sum * h + f[k] * ((b - xk) / (xk - a)).ln()) / std::f64::consts::PI
}

#[test]
fn kramers_kronig_consistency() {
    let sys = LadderSystem::cu2o_default();
    let drive = FieldDrive::resonant(&sys, Complex64::new(1e6, 0.0), Complex64::new(25.0 * GIGA, 0.0));
    let half = 400.0 * sys.gamma_ab;
    let h = sys.gamma_bc / 10.0;
    let n = (2.0 * half / h) as usize + 1;
    let xs: Vec<f64> = (0..n).map(|i| -half + i as f64 * h).collect();
    let chis: Vec<Complex64> = xs.iter().map(|&w| chi(w, &sys, &drive).unwrap()).collect();
    let im: Vec<f64> = chis.iter().map(|c| c.im).collect();
    let max_re = chis.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    let mid = n / 2;
    let stride = (3.0 * sys.gamma_ab / h) as usize;
    for k in (mid - 40 * stride..=mid + 40 * stride).step_by(stride / 7) {
        let got = hilbert_at(&xs, &im, k);
        let want = chis[k].re;
        assert!((got - want).abs() < 0.02 * max_re, "ω = {:e}: {got} vs {want}", xs[k]);
    }
}

#[test]
fn derivative_is_exact_for_lorentzian() {
    let sys = LadderSystem::cu2o_default();
    let drive = FieldDrive::resonant(&sys, Complex64::new(1e6, 0.0), Complex64::new(0.0, 0.0));
    let a = sys.susceptibility_scale();
    for w in [-1e11, -3e9, 0.0, 5e10] {
        let p = Complex64::new(w, sys.gamma_ab);
        let want = a / (p * p);
        let got = chi_derivative(w, &sys, &drive).unwrap();
        assert!((got - want).norm() < 1e-13 * want.norm());
    }
}
