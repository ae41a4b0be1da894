//! CODATA constants and the handful of unit conversions the simulator needs.
//!
//! Energies and angular frequencies are related through `ω = E/ħ`; a
//! "THz" label attached to an energy in meV is therefore read as Trad/s.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant, eV·s.
pub const HBAR_EV: f64 = HBAR / ELEMENTARY_CHARGE;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const GIGA: f64 = 1e9;
pub const TERA: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// J·s
    pub hbar: f64,
    /// eV·s
    pub hbar_ev: f64,
    /// F/m
    pub eps0: f64,
    /// m/s
    pub c: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        hbar_ev: HBAR_EV,
        eps0: EPSILON_0,
        c: SPEED_OF_LIGHT,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Energy in meV to angular frequency in rad/s.
pub fn energy_to_angular_frequency(energy_mev: f64) -> f64 {
    energy_mev * 1e-3 * ELEMENTARY_CHARGE / HBAR
}

/// Angular frequency in rad/s to energy in meV.
pub fn angular_frequency_to_energy(omega: f64) -> f64 {
    omega * HBAR / (1e-3 * ELEMENTARY_CHARGE)
}

pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev / HBAR_EV
}

pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR_EV
}

/// Rabi frequency `d·ε/ħ` for a dipole `d` (C·m) in a field amplitude `ε` (V/m).
pub fn rabi_frequency(dipole: f64, field_amplitude: f64) -> f64 {
    dipole * field_amplitude / HBAR
}
