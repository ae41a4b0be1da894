//! Stark-mixed exciton levels of the yellow Cu₂O series.
//!
//! Energies are anisotropy-corrected hydrogenic levels `E_nℓm = −η²_ℓm R*/n²`.
//! The static field mixes `nS` with `nP₀` through the matrix element
//! `V⁽ⁿ⁾₀₁₀` (in units of e·F·a*); each mixed pair solves the 2×2 secular
//! equation `(E_T1 − E)(E_T2 − E) − V² = 0` with complex thresholds
//! `E_T − iΓ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EitError, Result};
use crate::quadrature::{assoc_legendre, gauss_laguerre, gauss_legendre, laguerre};
use crate::units::{ELEMENTARY_CHARGE, EPSILON_0};

/// Damping Γ (eV) of one `|n ℓ m⟩` state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDamping {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub gamma_ev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelModelParams {
    /// Band gap E_g, eV.
    pub band_gap: f64,
    /// Effective Rydberg R*, eV.
    pub rydberg: f64,
    /// Effective Bohr radius a*, m.
    pub bohr_radius: f64,
    /// Mass anisotropy μ∥/μ_z.
    pub anisotropy: f64,
    /// Background dielectric constant ε_b.
    pub eps_b: f64,
    /// Longitudinal-transverse splitting of the P excitons, eV.
    pub delta_lt: f64,
    /// Coherence radius r₀, m.
    pub coherence_radius: f64,
    /// Applied static field F, V/m.
    pub field: f64,
    /// Per-state dampings; states not listed are undamped.
    pub dampings: Vec<StateDamping>,
}

impl Default for LevelModelParams {
    /// Literature-style Cu₂O placeholders. Only the 2S/2P₀ and 10S/10P₀
    /// dampings are set: 10 µeV and 60 µeV, i.e. twice the 5 µeV and 30 µeV
    /// coherence widths of the ladder.
    fn default() -> Self {
        let damp = |n, l, gamma_ev| StateDamping { n, l, m: 0, gamma_ev };
        LevelModelParams {
            band_gap: 2.17208,
            rydberg: 87.78e-3,
            bohr_radius: 1.1e-9,
            anisotropy: 0.47,
            eps_b: 7.5,
            delta_lt: 1.25e-6,
            coherence_radius: 0.22e-9,
            field: 1500.0,
            dampings: vec![
                damp(2, 0, 10e-6),
                damp(2, 1, 10e-6),
                damp(10, 0, 60e-6),
                damp(10, 1, 60e-6),
            ],
        }
    }
}

impl LevelModelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("anisotropy", self.anisotropy),
            ("bohr_radius", self.bohr_radius),
            ("rydberg", self.rydberg),
            ("coherence_radius", self.coherence_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(EitError::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn damping(&self, n: u32, l: u32, m: i32) -> f64 {
        self.dampings
            .iter()
            .find(|d| d.n == n && d.l == l && d.m == m)
            .map_or(0.0, |d| d.gamma_ev)
    }

    /// e·F·a* in eV.
    pub fn stark_unit(&self) -> f64 {
        self.field * self.bohr_radius
    }

    /// Complex threshold `E_g + E_nℓm − iΓ_nℓm`, eV.
    pub fn threshold(&self, n: u32, l: u32, m: i32) -> Result<Complex64> {
        let e = energy_nlm(n, l, m, self)?;
        Ok(Complex64::new(self.band_gap + e, -self.damping(n, l, m)))
    }
}

fn check_lm(l: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > l {
        return Err(EitError::Domain(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(())
}

fn factorial_ratio(l: u32, m: u32) -> f64 {
    // (l − m)!/(l + m)!
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / f64::from(k))
}

/// Angular average `∫|Y_ℓm|² / √(sin²θ + γ² cos²θ) dΩ`.
///
/// The φ integral is trivial; the θ integral is reduced to u = cosθ ∈ [0, 1]
/// and evaluated with Gauss–Legendre rules of doubling order until two
/// successive estimates agree to 1e-12.
pub fn eta_lm(l: u32, m: i32, anisotropy: f64) -> Result<f64> {
    check_lm(l, m)?;
    if !(anisotropy > 0.0) || !anisotropy.is_finite() {
        return Err(EitError::Domain(format!(
            "anisotropy must be positive and finite, got {anisotropy}"
        )));
    }
    let mabs = m.unsigned_abs();
    let norm = f64::from(2 * l + 1) * factorial_ratio(l, mabs);
    let g2m1 = anisotropy * anisotropy - 1.0;
    let estimate = |order: usize| {
        let rule = gauss_legendre(order);
        0.5 * rule.integrate(|x| {
            let u = 0.5 * (x + 1.0);
            let p = assoc_legendre(l as usize, mabs as usize, u);
            p * p / (1.0 + g2m1 * u * u).sqrt()
        }) * norm
    };
    let mut order = 16;
    let mut prev = estimate(order);
    while order < 8192 {
        order *= 2;
        let next = estimate(order);
        if (next - prev).abs() < 1e-12 {
            return Ok(next);
        }
        prev = next;
    }
    Err(EitError::Quadrature(format!(
        "eta_lm(l = {l}, m = {m}, γ = {anisotropy}) not converged at order {order}"
    )))
}

/// `E_nℓm = −η²_ℓm R*/n²`, eV (relative to the gap).
pub fn energy_nlm(n: u32, l: u32, m: i32, params: &LevelModelParams) -> Result<f64> {
    if n < 1 || l >= n {
        return Err(EitError::Domain(format!("need n ≥ 1 and l ≤ n − 1, got n = {n}, l = {l}")));
    }
    let eta = eta_lm(l, m, params.anisotropy)?;
    Ok(-eta * eta / f64::from(n * n) * params.rydberg)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Closed-form `V⁽ⁿ⁾₀₁₀` in units of e·F·a*.
pub fn v010(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(EitError::Domain(format!("V010 requires n ≥ 2, got {n}")));
    }
    let nf = f64::from(n);
    let pref = (12.0 / (nf * nf * (nf * nf - 1.0))).sqrt();
    Ok(-pref * binomial(n, n - 2) * binomial(n + 1, n - 1))
}

/// Laguerre-product integral form of `V⁽ⁿ⁾₀₁₀`, by Gauss–Laguerre quadrature.
pub fn v010_integral(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(EitError::Domain(format!("V010 requires n ≥ 2, got {n}")));
    }
    // Integrand degree is 2n + 1; an order-(n + 1) rule is already exact.
    let order = 48.max(n as usize + 8);
    let rule = gauss_laguerre(order);
    let (a, b) = ((n - 1) as usize, (n - 2) as usize);
    let integral = rule.integrate(|x| x.powi(4) * laguerre(a, 1.0, x) * laguerre(b, 3.0, x));
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let ratio = fact(n - 1) * fact(n - 2) / (16.0 * fact(n) * fact(n + 1));
    Ok(ratio.sqrt() / 3f64.sqrt() * integral)
}

/// Which root of the secular quadratic a mixed state takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Root with the larger real part (ties: larger imaginary part).
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularRoots {
    pub e_plus: Complex64,
    pub e_minus: Complex64,
}

impl SecularRoots {
    pub fn select(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Upper => self.e_plus,
            Branch::Lower => self.e_minus,
        }
    }

    /// `|(E_T1 − E)(E_T2 − E) − V²|` for each root.
    pub fn residuals(&self, e_t1: Complex64, e_t2: Complex64, coupling: f64) -> [f64; 2] {
        let f = |e: Complex64| ((e_t1 - e) * (e_t2 - e) - coupling * coupling).norm();
        [f(self.e_plus), f(self.e_minus)]
    }
}

fn ordered(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    let a_first = a.re > b.re || (a.re == b.re && a.im >= b.im);
    if a_first {
        (a, b)
    } else {
        (b, a)
    }
}

/// Roots of `(E_T1 − E)(E_T2 − E) − V² = 0`; dampings are carried in the
/// imaginary parts of the thresholds.
pub fn solve_secular(e_t1: Complex64, e_t2: Complex64, coupling: f64) -> SecularRoots {
    if coupling == 0.0 {
        let (e_plus, e_minus) = ordered(e_t1, e_t2);
        return SecularRoots { e_plus, e_minus };
    }
    // E² + bE + c = 0
    let b = -(e_t1 + e_t2);
    let c = e_t1 * e_t2 - coupling * coupling;
    let half_diff = 0.5 * (e_t1 - e_t2);
    let disc = (half_diff * half_diff + coupling * coupling).sqrt() * 2.0;
    // Pick the sign that avoids cancellation, then recover the other root from c.
    let sign = if (b.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sign * disc);
    let (r1, r2) = if q.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (q, c / q)
    };
    let (e_plus, e_minus) = ordered(r1, r2);
    SecularRoots { e_plus, e_minus }
}

/// The two field-mixed states of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedState {
    /// |2,1,0⟩ mixed with |2,0,0⟩; takes the larger root.
    TwoPz,
    /// |10,0,0⟩ mixed with |10,1,0⟩; takes the smaller root.
    TenS,
}

impl MixedState {
    pub fn principal(self) -> u32 {
        match self {
            MixedState::TwoPz => 2,
            MixedState::TenS => 10,
        }
    }

    pub fn quantum_numbers(self) -> (u32, u32, i32) {
        match self {
            MixedState::TwoPz => (2, 1, 0),
            MixedState::TenS => (10, 0, 0),
        }
    }

    pub fn branch(self) -> Branch {
        match self {
            MixedState::TwoPz => Branch::Upper,
            MixedState::TenS => Branch::Lower,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MixedState::TwoPz => "2Pz",
            MixedState::TenS => "10S",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedLevel {
    pub state: MixedState,
    /// S-like and P₀-like complex thresholds, eV.
    pub threshold_s: Complex64,
    pub threshold_p: Complex64,
    /// Coupling V in eV.
    pub coupling: f64,
    pub roots: SecularRoots,
    /// The selected root, eV (absolute, including the gap).
    pub energy: Complex64,
}

pub fn mixed_level(state: MixedState, params: &LevelModelParams) -> Result<MixedLevel> {
    params.validate()?;
    let n = state.principal();
    let threshold_s = params.threshold(n, 0, 0)?;
    let threshold_p = params.threshold(n, 1, 0)?;
    let coupling = v010(n)? * params.stark_unit();
    let roots = solve_secular(threshold_s, threshold_p, coupling);
    Ok(MixedLevel {
        state,
        threshold_s,
        threshold_p,
        coupling,
        roots,
        energy: roots.select(state.branch()),
    })
}

/// `|M₁₀|² = 4ε₀ε_b a*³ Δ_LT / (π (r₀/a*)² η₁₁⁵)`, C²·m².
pub fn dipole_moment_squared(params: &LevelModelParams, eta_11: f64) -> Result<f64> {
    if !(params.coherence_radius > 0.0) || !(eta_11 > 0.0) {
        return Err(EitError::Domain("need r0 > 0 and eta_11 > 0".into()));
    }
    let a = params.bohr_radius;
    let delta_lt_joule = params.delta_lt * ELEMENTARY_CHARGE;
    let ratio = params.coherence_radius / a;
    Ok(4.0 * EPSILON_0 * params.eps_b * a.powi(3) * delta_lt_joule
        / (std::f64::consts::PI * ratio * ratio * eta_11.powi(5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Closed forms of the u = cosθ reduction for γ < 1, k² = 1 − γ².
    fn i0(g: f64) -> f64 {
        let k = (1.0 - g * g).sqrt();
        k.asin() / k
    }
    fn i2(g: f64) -> f64 {
        let k = (1.0 - g * g).sqrt();
        (k.asin() - k * g) / (2.0 * k.powi(3))
    }

    #[test]
    fn eta_isotropic_is_one() {
        assert!((eta_lm(0, 0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((eta_lm(1, 1, 1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((eta_lm(1, -1, 1.0).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn eta_matches_closed_forms() {
        for g in [0.3, 0.5, 0.7, 0.95] {
            assert!((eta_lm(0, 0, g).unwrap() - i0(g)).abs() < 1e-10, "γ = {g}");
            assert!((eta_lm(1, 0, g).unwrap() - 3.0 * i2(g)).abs() < 1e-10);
            assert!((eta_lm(1, 1, g).unwrap() - 1.5 * (i0(g) - i2(g))).abs() < 1e-10);
        }
        // γ > 1: arcsinh form.
        let g: f64 = 2.0;
        let k = (g * g - 1.0).sqrt();
        assert!((eta_lm(0, 0, g).unwrap() - k.asinh() / k).abs() < 1e-10);
    }

    #[test]
    fn eta_rejects_bad_indices() {
        assert!(matches!(eta_lm(1, 2, 1.0), Err(EitError::Domain(_))));
        assert!(matches!(eta_lm(0, 0, 0.0), Err(EitError::Domain(_))));
    }

    #[test]
    fn hydrogenic_limit() {
        let p = LevelModelParams { anisotropy: 1.0, ..Default::default() };
        assert!((energy_nlm(1, 0, 0, &p).unwrap() + p.rydberg).abs() < 1e-15);
        assert!((energy_nlm(10, 0, 0, &p).unwrap() + p.rydberg / 100.0).abs() < 1e-15);
    }

    #[test]
    fn anisotropic_2p0_energy() {
        let p = LevelModelParams { anisotropy: 0.7, ..Default::default() };
        let eta = 3.0 * i2(0.7);
        let want = -eta * eta / 4.0 * p.rydberg;
        assert!((energy_nlm(2, 1, 0, &p).unwrap() - want).abs() < 1e-12 * p.rydberg);
    }

    #[test]
    fn energy_index_errors() {
        let p = LevelModelParams::default();
        assert!(energy_nlm(0, 0, 0, &p).is_err());
        assert!(energy_nlm(2, 2, 0, &p).is_err());
        assert!(energy_nlm(3, 1, -2, &p).is_err());
    }

    #[test]
    fn v010_hand_values() {
        assert_eq!(v010(2).unwrap(), -3.0);
        assert!((v010(3).unwrap() + 18.0 / 6f64.sqrt()).abs() < 1e-13);
        assert!(v010(1).is_err());
        assert!(v010_integral(1).is_err());
    }

    #[test]
    fn v010_integral_hand_values() {
        // ∫ e^{-x} x⁴ (2 − x) dx = −72 and the prefactor is 1/24.
        assert!((v010_integral(2).unwrap() + 3.0).abs() < 1e-12);
        // n = 3: integral −432, prefactor √(2/2304)/√3.
        assert!((v010_integral(3).unwrap() + 18.0 / 6f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn secular_limits() {
        let a = Complex64::new(2.1, -1e-5);
        let b = Complex64::new(2.0, -2e-5);
        let r = solve_secular(a, b, 0.0);
        assert_eq!(r.e_plus, a);
        assert_eq!(r.e_minus, b);

        let e0 = Complex64::new(1.5, 0.0);
        let r = solve_secular(e0, e0, 0.2);
        assert!((r.e_plus - Complex64::new(1.7, 0.0)).norm() < 1e-15);
        assert!((r.e_minus - Complex64::new(1.3, 0.0)).norm() < 1e-15);
        assert_eq!(r.select(Branch::Upper), r.e_plus);
    }

    #[test]
    fn perturbative_shift() {
        let a = Complex64::new(1.0, -0.01);
        let b = Complex64::new(0.5, -0.02);
        let v = 1e-3;
        let r = solve_secular(a, b, v);
        let series = a + v * v / (a - b);
        assert!((r.e_plus - series).norm() < 1e-10);
    }

    #[test]
    fn dipole_scaling() {
        let p = LevelModelParams::default();
        let m1 = dipole_moment_squared(&p, 1.0).unwrap();
        let p2 = LevelModelParams { coherence_radius: 2.0 * p.coherence_radius, ..p.clone() };
        let m2 = dipole_moment_squared(&p2, 1.0).unwrap();
        assert!((m1 / m2 - 4.0).abs() < 1e-12);
        let a = p.bohr_radius;
        let r = p.coherence_radius / a;
        let iso = 4.0 * EPSILON_0 * p.eps_b * a.powi(3) * p.delta_lt * ELEMENTARY_CHARGE
            / (std::f64::consts::PI * r * r);
        assert!((m1 / iso - 1.0).abs() < 1e-14);
        assert!(dipole_moment_squared(&p, 0.0).is_err());
    }

    #[test]
    fn default_dipole_is_order_of_tabulated_value() {
        let p = LevelModelParams::default();
        let eta11 = eta_lm(1, 1, p.anisotropy).unwrap();
        let m = dipole_moment_squared(&p, eta11).unwrap();
        let ratio = m / 0.334e-60;
        assert!(ratio > 0.1 && ratio < 10.0, "|M10|² = {m:e}");
    }

    #[test]
    fn mixed_levels_select_branches() {
        let p = LevelModelParams::default();
        let two_p = mixed_level(MixedState::TwoPz, &p).unwrap();
        assert_eq!(two_p.energy, two_p.roots.e_plus);
        let ten_s = mixed_level(MixedState::TenS, &p).unwrap();
        assert_eq!(ten_s.energy, ten_s.roots.e_minus);
        for lvl in [two_p, ten_s] {
            let res = lvl.roots.residuals(lvl.threshold_s, lvl.threshold_p, lvl.coupling);
            assert!(res[0] < 1e-12 * p.rydberg && res[1] < 1e-12 * p.rydberg, "{res:?}");
        }
    }
}
