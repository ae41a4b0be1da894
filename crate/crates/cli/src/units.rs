//! Unit suffixes accepted in configuration files.

use rydberg_eit::units::HBAR_EV;

/// Physical dimension of a configuration value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Angular frequency, stored in rad/s. Energies are accepted via E/ħ.
    Frequency,
    /// Energy, stored in eV. Angular frequencies are accepted via ħω.
    Energy,
    Length,
    Density,
    DipoleSquared,
    Dipole,
    Field,
    Time,
    Angle,
}

impl Dimension {
    /// Canonical unit used when writing a resolved config.
    pub fn base_unit(self) -> &'static str {
        match self {
            Dimension::Frequency => "rad/s",
            Dimension::Energy => "eV",
            Dimension::Length => "m",
            Dimension::Density => "m^-3",
            Dimension::DipoleSquared => "C^2m^2",
            Dimension::Dipole => "C*m",
            Dimension::Field => "V/m",
            Dimension::Time => "s",
            Dimension::Angle => "rad",
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Dimension::Frequency => "angular frequency (rad/s, Grad/s, Trad/s, ...) or energy (eV, meV, ueV)",
            Dimension::Energy => "energy (eV, meV, ueV) or angular frequency (rad/s, Grad/s, ...)",
            Dimension::Length => "length (m, cm, mm, um, nm)",
            Dimension::Density => "density (m^-3, cm^-3)",
            Dimension::DipoleSquared => "squared dipole moment (C^2m^2)",
            Dimension::Dipole => "dipole moment (C*m)",
            Dimension::Field => "field strength (V/m, V/cm)",
            Dimension::Time => "time (s, ns, ps, fs)",
            Dimension::Angle => "angle (rad, deg)",
        }
    }
}

const ANGULAR: [(&str, f64); 5] =
    [("rad/s", 1.0), ("krad/s", 1e3), ("Mrad/s", 1e6), ("Grad/s", 1e9), ("Trad/s", 1e12)];

const ENERGY: [(&str, f64); 6] =
    [("eV", 1.0), ("meV", 1e-3), ("ueV", 1e-6), ("µeV", 1e-6), ("μeV", 1e-6), ("neV", 1e-9)];

const CYCLIC: [&str; 5] = ["Hz", "kHz", "MHz", "GHz", "THz"];

fn lookup(table: &[(&str, f64)], unit: &str) -> Option<f64> {
    table.iter().find(|(u, _)| *u == unit).map(|&(_, f)| f)
}

/// Multiplier taking a value in `unit` to the base unit of `dim`.
pub fn factor(dim: Dimension, unit: &str) -> Result<f64, String> {
    let unit = unit.trim();
    let found = match dim {
        Dimension::Frequency => lookup(&ANGULAR, unit).or_else(|| lookup(&ENERGY, unit).map(|e| e / HBAR_EV)),
        Dimension::Energy => lookup(&ENERGY, unit).or_else(|| lookup(&ANGULAR, unit).map(|w| w * HBAR_EV)),
        Dimension::Length => {
            lookup(&[("m", 1.0), ("cm", 1e-2), ("mm", 1e-3), ("um", 1e-6), ("µm", 1e-6), ("nm", 1e-9)], unit)
        }
        Dimension::Density => lookup(&[("m^-3", 1.0), ("cm^-3", 1e6)], unit),
        Dimension::DipoleSquared => lookup(&[("C^2m^2", 1.0), ("C^2*m^2", 1.0), ("C^2 m^2", 1.0)], unit),
        Dimension::Dipole => lookup(&[("C*m", 1.0), ("Cm", 1.0), ("C m", 1.0)], unit),
        Dimension::Field => lookup(&[("V/m", 1.0), ("V/cm", 1e2), ("kV/cm", 1e5)], unit),
        Dimension::Time => lookup(&[("s", 1.0), ("ns", 1e-9), ("ps", 1e-12), ("fs", 1e-15)], unit),
        Dimension::Angle => lookup(&[("rad", 1.0), ("deg", std::f64::consts::PI / 180.0)], unit),
    };
    if let Some(f) = found {
        return Ok(f);
    }
    if matches!(dim, Dimension::Frequency | Dimension::Energy) && CYCLIC.contains(&unit) {
        return Err(format!(
            "'{unit}' is ambiguous: frequencies are angular here, write e.g. Grad/s or Trad/s"
        ));
    }
    Err(format!("unknown unit '{unit}', expected {}", dim.describe()))
}
