//! The ladder medium and the two driving fields.
//!
//! Levels: `b` is the crystal ground state (valence band), `a` the upper
//! exciton state reached by the probe, `c` the intermediate exciton state
//! coupled to `a` by the control field. Ordering `E_a > E_c > E_b`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EitError, Result};
use crate::units::{ev_to_rad_per_s, EPSILON_0, GIGA, HBAR, HBAR_EV, SPEED_OF_LIGHT, TERA};

/// Default probe transition, rad/s (10S exciton above the valence band).
pub const DEFAULT_OMEGA_AB: f64 = 3266.576 * TERA;
/// Default control transition, rad/s (10S ↔ 2P).
pub const DEFAULT_OMEGA_AC: f64 = 31.402 * TERA;
pub const DEFAULT_GAMMA_AB: f64 = 45.573 * GIGA;
pub const DEFAULT_GAMMA_BC: f64 = 7.596 * GIGA;
/// Exciton density, m⁻³ (6.2422×10¹⁹ cm⁻³).
pub const DEFAULT_DENSITY: f64 = 6.2422e25;
/// |d_ab|² in C²·m². The source value carries no unit; it is read as the
/// squared probe dipole because that is the only way it enters χ.
pub const DEFAULT_DIPOLE_AB_SQ: f64 = 0.334e-60;
/// Applied static field, V/m (15 V/cm).
pub const DEFAULT_FIELD: f64 = 1500.0;
/// Slab thickness, m.
pub const DEFAULT_SLAB_LENGTH: f64 = 30e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderSystem {
    /// Level energies, eV.
    pub energy_a: f64,
    pub energy_b: f64,
    pub energy_c: f64,
    /// Probe dipole moment |d_ab|, C·m.
    pub d_ab: f64,
    /// Control dipole moment |d_ac|, C·m. Zero when the control is specified
    /// directly through its Rabi frequency.
    pub d_ac: f64,
    /// Population damping Γ_ab, rad/s.
    pub decay_ab: f64,
    /// Population damping Γ_ca, rad/s.
    pub decay_ca: f64,
    /// Coherence damping rates, rad/s.
    pub gamma_ab: f64,
    pub gamma_bc: f64,
    pub gamma_ac: f64,
    /// Exciton density N, m⁻³.
    pub density: f64,
}

impl LadderSystem {
    /// Build from transition frequencies (rad/s) with `E_b = 0`.
    ///
    /// Population dampings follow `Γ_ab = 2γ_ab` and `Γ_ca = 2γ_ac`.
    pub fn from_transitions(
        omega_ab: f64,
        omega_ac: f64,
        gamma_ab: f64,
        gamma_bc: f64,
        gamma_ac: f64,
        density: f64,
        dipole_ab_sq: f64,
    ) -> Result<Self> {
        let energy_a = omega_ab * HBAR_EV;
        let sys = LadderSystem {
            energy_a,
            energy_b: 0.0,
            energy_c: energy_a - omega_ac * HBAR_EV,
            d_ab: dipole_ab_sq.max(0.0).sqrt(),
            d_ac: 0.0,
            decay_ab: 2.0 * gamma_ab,
            decay_ca: 2.0 * gamma_ac,
            gamma_ab,
            gamma_bc,
            gamma_ac,
            density,
        };
        if dipole_ab_sq < 0.0 {
            return Err(EitError::InvalidParameter("|d_ab|² must be ≥ 0".into()));
        }
        sys.validate()?;
        Ok(sys)
    }

    /// The Cu₂O 10S/2P ladder at F = 15 V/cm.
    pub fn cu2o_default() -> Self {
        Self::from_transitions(
            DEFAULT_OMEGA_AB,
            DEFAULT_OMEGA_AC,
            DEFAULT_GAMMA_AB,
            DEFAULT_GAMMA_BC,
            DEFAULT_GAMMA_AB,
            DEFAULT_DENSITY,
            DEFAULT_DIPOLE_AB_SQ,
        )
        .expect("default parameters are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.energy_a > self.energy_c && self.energy_c > self.energy_b) {
            return Err(EitError::InvalidParameter(format!(
                "ladder ordering E_a > E_c > E_b violated (E_a = {}, E_b = {}, E_c = {} eV)",
                self.energy_a, self.energy_b, self.energy_c
            )));
        }
        let rates = [
            ("Gamma_ab", self.decay_ab),
            ("Gamma_ca", self.decay_ca),
            ("gamma_ab", self.gamma_ab),
            ("gamma_bc", self.gamma_bc),
            ("gamma_ac", self.gamma_ac),
        ];
        for (name, r) in rates {
            if !(r >= 0.0) || !r.is_finite() {
                return Err(EitError::InvalidParameter(format!("{name} must be ≥ 0, got {r}")));
            }
        }
        // N = 0 is allowed: it is the empty-medium limit.
        if !(self.density >= 0.0) || !self.density.is_finite() {
            return Err(EitError::InvalidParameter(format!(
                "exciton density must be ≥ 0, got {}",
                self.density
            )));
        }
        if !(self.d_ab >= 0.0 && self.d_ac >= 0.0) {
            return Err(EitError::InvalidParameter("dipole moments must be ≥ 0".into()));
        }
        Ok(())
    }

    /// (E_a − E_b)/ħ, rad/s.
    pub fn omega_ab(&self) -> f64 {
        ev_to_rad_per_s(self.energy_a - self.energy_b)
    }

    /// (E_a − E_c)/ħ, rad/s.
    pub fn omega_ac(&self) -> f64 {
        ev_to_rad_per_s(self.energy_a - self.energy_c)
    }

    pub fn d_ab_sq(&self) -> f64 {
        self.d_ab * self.d_ab
    }

    /// N|d_ab|²/(ħε₀) in rad/s; the scale of χ times a damping rate.
    pub fn susceptibility_scale(&self) -> f64 {
        self.density * self.d_ab_sq() / (HBAR * EPSILON_0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldDrive {
    /// Carrier angular frequencies, rad/s.
    pub omega1: f64,
    pub omega2: f64,
    /// Wave numbers, 1/m.
    pub k1: f64,
    pub k2: f64,
    /// Probe and control Rabi frequencies, rad/s.
    pub rabi1: Complex64,
    pub rabi2: Complex64,
    /// Detunings δ₁ = ω_ab − ω₁ and δ₂ = ω_ac − ω₂, rad/s.
    pub delta1: f64,
    pub delta2: f64,
}

impl FieldDrive {
    /// Carriers given; detunings derived from the ladder.
    pub fn from_carriers(
        system: &LadderSystem,
        omega1: f64,
        omega2: f64,
        rabi1: Complex64,
        rabi2: Complex64,
    ) -> Self {
        FieldDrive {
            omega1,
            omega2,
            k1: omega1 / SPEED_OF_LIGHT,
            k2: omega2 / SPEED_OF_LIGHT,
            rabi1,
            rabi2,
            delta1: system.omega_ab() - omega1,
            delta2: system.omega_ac() - omega2,
        }
    }

    /// Both fields on resonance.
    pub fn resonant(system: &LadderSystem, rabi1: Complex64, rabi2: Complex64) -> Self {
        Self::from_carriers(system, system.omega_ab(), system.omega_ac(), rabi1, rabi2)
    }

    /// Carriers chosen so that the requested detunings hold.
    pub fn detuned(
        system: &LadderSystem,
        delta1: f64,
        delta2: f64,
        rabi1: Complex64,
        rabi2: Complex64,
    ) -> Self {
        Self::from_carriers(
            system,
            system.omega_ab() - delta1,
            system.omega_ac() - delta2,
            rabi1,
            rabi2,
        )
    }

    /// Replace the detunings without touching the carriers (free sweeps).
    pub fn with_detunings(mut self, delta1: f64, delta2: f64) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    pub fn with_control(mut self, rabi2: Complex64) -> Self {
        self.rabi2 = rabi2;
        self
    }

    pub fn with_probe(mut self, rabi1: Complex64) -> Self {
        self.rabi1 = rabi1;
        self
    }

    /// Probe offset of the two-photon resonance, `δ₁ − δ₂`.
    pub fn two_photon_center(&self) -> f64 {
        self.delta1 - self.delta2
    }

    /// κ₁² = N|d_ab|²ω₁/(2ħε₀).
    pub fn kappa1_sq(&self, system: &LadderSystem) -> f64 {
        system.susceptibility_scale() * self.omega1 / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_drive_has_zero_detunings() {
        let sys = LadderSystem::cu2o_default();
        let drive = FieldDrive::resonant(&sys, Complex64::new(1e6, 0.0), Complex64::new(25e9, 0.0));
        assert_eq!(drive.delta1, 0.0);
        assert_eq!(drive.delta2, 0.0);
    }

    #[test]
    fn default_system_reproduces_parameter_block() {
        let sys = LadderSystem::cu2o_default();
        assert!((sys.omega_ab() / DEFAULT_OMEGA_AB - 1.0).abs() < 1e-12);
        assert!((sys.omega_ac() / DEFAULT_OMEGA_AC - 1.0).abs() < 1e-9);
        assert!((sys.d_ab_sq() / DEFAULT_DIPOLE_AB_SQ - 1.0).abs() < 1e-12);
        assert_eq!(sys.decay_ab, 2.0 * sys.gamma_ab);
    }

    #[test]
    fn ordering_is_enforced() {
        let mut sys = LadderSystem::cu2o_default();
        sys.energy_c = sys.energy_a + 0.1;
        assert!(sys.validate().is_err());
        let err = LadderSystem::from_transitions(1e15, 2e15, 1e9, 1e9, 1e9, 1e25, 1e-60);
        assert!(err.is_err());
    }

    #[test]
    fn negative_rates_and_density_rejected() {
        let mut sys = LadderSystem::cu2o_default();
        sys.gamma_bc = -1.0;
        assert!(sys.validate().is_err());
        let mut sys = LadderSystem::cu2o_default();
        sys.density = -1.0;
        assert!(sys.validate().is_err());
        sys.density = 0.0;
        assert!(sys.validate().is_ok());
    }

    #[test]
    fn detuned_constructor_round_trips() {
        let sys = LadderSystem::cu2o_default();
        let d = FieldDrive::detuned(&sys, 3e9, -2e9, Complex64::default(), Complex64::default());
        assert!((d.delta1 - 3e9).abs() < 1.0);
        assert!((d.delta2 + 2e9).abs() < 1e-2);
    }
}
