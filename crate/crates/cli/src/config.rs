//! Scenario configuration: a line-oriented `key = value unit` format.
//!
//! ```text
//! # comment
//! gamma_ab = 30 ueV
//! spectrum_Omega2 = 0, 10, 25, 50 Grad/s
//! probe_offset = linspace(-150, 150, 3001) Grad/s
//! pulse_duration = auto
//! Gamma[10,0,0] = 60 ueV
//! ```
//!
//! Every physical value needs a unit; dimensionless numbers and step counts
//! must not carry one. Missing keys take the Cu₂O defaults. See the README
//! for the full key list.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use num_complex::Complex64;
use rydberg_eit::bloch::{AcCoherenceTerm, BlochOptions, DecayConvention};
use rydberg_eit::levels::{LevelModelParams, StateDamping};
use rydberg_eit::propagation::BlochSource;
use rydberg_eit::system::{
    DEFAULT_DENSITY, DEFAULT_DIPOLE_AB_SQ, DEFAULT_GAMMA_AB, DEFAULT_GAMMA_BC, DEFAULT_OMEGA_AB,
    DEFAULT_OMEGA_AC, DEFAULT_SLAB_LENGTH,
};
use rydberg_eit::units::GIGA;
use rydberg_eit::{EitError, FieldDrive, LadderSystem};
use thiserror::Error;

use crate::units::{factor, Dimension};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    /// 1-based line and column, when the error is tied to a position.
    pub location: Option<(usize, usize)>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Some((line, column)) => write!(f, "line {line}, column {column}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl ConfigError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ConfigError { location: Some((line, column)), message: message.into() }
    }

    fn global(message: impl Into<String>) -> Self {
        ConfigError { location: None, message: message.into() }
    }
}

impl From<EitError> for ConfigError {
    fn from(e: EitError) -> Self {
        ConfigError::global(e.to_string())
    }
}

/// A grid of values in base units.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Linspace { start: f64, stop: f64, n: usize },
    List(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Linspace { start, n: 1, .. } => vec![start],
            Grid::Linspace { start, stop, n } => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        stop
                    } else {
                        start + (stop - start) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::List(v) => v.len(),
            Grid::Linspace { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn write(&self, unit: &str) -> String {
        match self {
            Grid::Linspace { start, stop, n } => format!("linspace({start:e}, {stop:e}, {n}) {unit}"),
            Grid::List(v) => format!("{} {unit}", join(v)),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            "both" => Some(OutputFormat::Both),
            _ => None,
        }
    }

    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Linear,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub omega_ab: f64,
    pub omega_ac: f64,
    pub gamma_ab: f64,
    pub gamma_bc: f64,
    /// `None`: equal to γ_ab.
    pub gamma_ac: Option<f64>,
    /// `None`: twice the matching coherence damping.
    pub decay_ab: Option<f64>,
    pub decay_ca: Option<f64>,
    pub density: f64,
    pub d_ab_sq: f64,
    pub d_ac: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveConfig {
    pub rabi1: f64,
    pub rabi2: f64,
    pub rabi2_phase: f64,
    pub delta1: f64,
    pub delta2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    /// Probe offsets ω around the carrier, rad/s.
    pub probe_offset: Grid,
    /// Control Rabi frequencies for `spectrum`, one file each.
    pub spectrum_omega2: Vec<f64>,
    /// Control Rabi frequencies for `sweep`.
    pub sweep_omega2: Grid,
    /// Co-moving time grid for `propagate`; `None` picks one from the pulse.
    pub time_window: Option<Grid>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationConfig {
    pub length: f64,
    pub z_steps: usize,
    pub samples_per_duration: f64,
    /// `None`: derived from the window width.
    pub pulse_duration: Option<f64>,
    pub source: SourceKind,
    pub decay: DecayConvention,
    pub ac_term: AcCoherenceTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelsConfig {
    pub params: LevelModelParams,
    /// Principal quantum numbers listed in the level table.
    pub principal: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    pub drive: DriveConfig,
    pub grids: GridConfig,
    pub propagation: PropagationConfig,
    pub levels: LevelsConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            system: SystemConfig {
                omega_ab: DEFAULT_OMEGA_AB,
                omega_ac: DEFAULT_OMEGA_AC,
                gamma_ab: DEFAULT_GAMMA_AB,
                gamma_bc: DEFAULT_GAMMA_BC,
                gamma_ac: None,
                decay_ab: None,
                decay_ca: None,
                density: DEFAULT_DENSITY,
                d_ab_sq: DEFAULT_DIPOLE_AB_SQ,
                d_ac: 0.0,
            },
            drive: DriveConfig {
                rabi1: 0.01 * GIGA,
                rabi2: 25.0 * GIGA,
                rabi2_phase: 0.0,
                delta1: 0.0,
                delta2: 0.0,
            },
            grids: GridConfig {
                probe_offset: Grid::Linspace { start: -150.0 * GIGA, stop: 150.0 * GIGA, n: 3001 },
                spectrum_omega2: vec![0.0, 10.0 * GIGA, 25.0 * GIGA, 50.0 * GIGA],
                sweep_omega2: Grid::Linspace { start: 1.0 * GIGA, stop: 100.0 * GIGA, n: 397 },
                time_window: None,
            },
            propagation: PropagationConfig {
                length: DEFAULT_SLAB_LENGTH,
                z_steps: 200,
                samples_per_duration: 40.0,
                pulse_duration: None,
                source: SourceKind::Linear,
                decay: DecayConvention::Literal,
                ac_term: AcCoherenceTerm::SelfConsistent,
            },
            levels: LevelsConfig { params: LevelModelParams::default(), principal: vec![2, 10] },
            output: OutputConfig { dir: PathBuf::from("out"), format: OutputFormat::Both },
        }
    }
}

impl ScenarioConfig {
    pub fn ladder(&self) -> Result<LadderSystem, EitError> {
        let s = &self.system;
        let gamma_ac = s.gamma_ac.unwrap_or(s.gamma_ab);
        let mut sys = LadderSystem::from_transitions(
            s.omega_ab,
            s.omega_ac,
            s.gamma_ab,
            s.gamma_bc,
            gamma_ac,
            s.density,
            s.d_ab_sq,
        )?;
        sys.decay_ab = s.decay_ab.unwrap_or(2.0 * s.gamma_ab);
        sys.decay_ca = s.decay_ca.unwrap_or(2.0 * gamma_ac);
        sys.d_ac = s.d_ac;
        sys.validate()?;
        Ok(sys)
    }

    pub fn field_drive(&self, system: &LadderSystem) -> FieldDrive {
        let d = &self.drive;
        FieldDrive::detuned(
            system,
            d.delta1,
            d.delta2,
            Complex64::new(d.rabi1, 0.0),
            Complex64::from_polar(d.rabi2, d.rabi2_phase),
        )
    }

    pub fn bloch_source(&self) -> BlochSource {
        match self.propagation.source {
            SourceKind::Linear => BlochSource::Linearized,
            SourceKind::Full => BlochSource::Full(BlochOptions {
                decay: self.propagation.decay,
                ac_term: self.propagation.ac_term,
            }),
        }
    }

    /// Cross-field checks that do not belong to a single line.
    pub fn check(&self) -> Result<(), ConfigError> {
        self.ladder()?;
        self.levels.params.validate()?;
        if self.levels.principal.is_empty() {
            return Err(ConfigError::global("level_n must list at least one principal number"));
        }
        Ok(())
    }

    /// Physics part of the resolved configuration, in base units. Used as
    /// the provenance header of every output file.
    pub fn physics_text(&self) -> String {
        let mut out = String::new();
        let s = &self.system;
        let line = |out: &mut String, key: &str, v: String| {
            let _ = writeln!(out, "{key} = {v}");
        };
        let q = |x: f64, dim: Dimension| format!("{x:e} {}", dim.base_unit());
        let opt = |x: Option<f64>, dim: Dimension| x.map_or_else(|| "auto".to_string(), |x| q(x, dim));
        use Dimension::*;

        out.push_str("# ladder\n");
        line(&mut out, "omega_ab", q(s.omega_ab, Frequency));
        line(&mut out, "omega_ac", q(s.omega_ac, Frequency));
        line(&mut out, "gamma_ab", q(s.gamma_ab, Frequency));
        line(&mut out, "gamma_bc", q(s.gamma_bc, Frequency));
        line(&mut out, "gamma_ac", opt(s.gamma_ac, Frequency));
        line(&mut out, "Gamma_ab", opt(s.decay_ab, Frequency));
        line(&mut out, "Gamma_ca", opt(s.decay_ca, Frequency));
        line(&mut out, "N", q(s.density, Density));
        line(&mut out, "d_ab_sq", q(s.d_ab_sq, DipoleSquared));
        line(&mut out, "d_ac", q(s.d_ac, Dipole));

        let d = &self.drive;
        out.push_str("# fields\n");
        line(&mut out, "Omega1", q(d.rabi1, Frequency));
        line(&mut out, "Omega2", q(d.rabi2, Frequency));
        line(&mut out, "Omega2_phase", q(d.rabi2_phase, Angle));
        line(&mut out, "delta1", q(d.delta1, Frequency));
        line(&mut out, "delta2", q(d.delta2, Frequency));

        let g = &self.grids;
        out.push_str("# grids\n");
        line(&mut out, "probe_offset", g.probe_offset.write(Frequency.base_unit()));
        line(&mut out, "spectrum_Omega2", format!("{} {}", join(&g.spectrum_omega2), Frequency.base_unit()));
        line(&mut out, "sweep_Omega2", g.sweep_omega2.write(Frequency.base_unit()));
        line(
            &mut out,
            "time_window",
            g.time_window.as_ref().map_or_else(|| "auto".to_string(), |w| w.write(Time.base_unit())),
        );

        let p = &self.propagation;
        out.push_str("# propagation\n");
        line(&mut out, "L", q(p.length, Length));
        line(&mut out, "z_steps", p.z_steps.to_string());
        line(&mut out, "samples_per_duration", format!("{:e}", p.samples_per_duration));
        line(&mut out, "pulse_duration", opt(p.pulse_duration, Time));
        line(&mut out, "bloch_source", source_name(p.source).to_string());
        line(&mut out, "decay", decay_name(p.decay).to_string());
        line(&mut out, "ac_term", ac_name(p.ac_term).to_string());

        let l = &self.levels.params;
        out.push_str("# exciton levels\n");
        line(&mut out, "E_g", q(l.band_gap, Energy));
        line(&mut out, "R_star", q(l.rydberg, Energy));
        line(&mut out, "a_star", q(l.bohr_radius, Length));
        line(&mut out, "gamma_aniso", format!("{:e}", l.anisotropy));
        line(&mut out, "eps_b", format!("{:e}", l.eps_b));
        line(&mut out, "Delta_LT", q(l.delta_lt, Energy));
        line(&mut out, "r0", q(l.coherence_radius, Length));
        line(&mut out, "F", q(l.field, Field));
        for st in &l.dampings {
            line(&mut out, &format!("Gamma[{},{},{}]", st.n, st.l, st.m), q(st.gamma_ev, Energy));
        }
        let ns: Vec<String> = self.levels.principal.iter().map(u32::to_string).collect();
        line(&mut out, "level_n", ns.join(", "));
        out
    }

    /// The full resolved configuration; parses back to an equal value.
    pub fn to_config_text(&self) -> String {
        let mut out = self.physics_text();
        out.push_str("# output\n");
        let _ = writeln!(out, "output_dir = {}", self.output.dir.display());
        let _ = writeln!(out, "format = {}", self.output.format.as_str());
        out
    }
}

fn source_name(s: SourceKind) -> &'static str {
    match s {
        SourceKind::Linear => "linear",
        SourceKind::Full => "full",
    }
}

fn decay_name(d: DecayConvention) -> &'static str {
    match d {
        DecayConvention::Literal => "literal",
        DecayConvention::Standard => "standard",
    }
}

fn ac_name(a: AcCoherenceTerm) -> &'static str {
    match a {
        AcCoherenceTerm::SelfConsistent => "self-consistent",
        AcCoherenceTerm::Printed => "printed",
    }
}

/// Right-hand side of one `key = value` line.
struct Value<'a> {
    raw: &'a str,
    line: usize,
    /// Column of the first character of `raw`.
    col: usize,
}

enum Numbers {
    List(Vec<f64>),
    Linspace(f64, f64, usize),
}

impl<'a> Value<'a> {
    fn err(&self, offset: usize, msg: impl Into<String>) -> ConfigError {
        ConfigError::at(self.line, self.col + self.raw[..offset].chars().count(), msg)
    }

    fn is_auto(&self) -> bool {
        self.raw == "auto"
    }

    fn parse_number(&self, token: &str, offset: usize) -> Result<f64, ConfigError> {
        match token.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.err(offset, format!("malformed number '{token}'"))),
        }
    }

    /// Numbers followed by an optional unit (with its byte offset).
    fn lex(&self) -> Result<(Numbers, Option<(&'a str, usize)>), ConfigError> {
        let raw = self.raw;
        let unit_from = |rest_start: usize| {
            let rest = &raw[rest_start..];
            let trimmed = rest.trim_start();
            let off = rest_start + (rest.len() - trimmed.len());
            (!trimmed.is_empty()).then_some((trimmed.trim_end(), off))
        };
        if let Some(inner) = raw.strip_prefix("linspace(") {
            let close = inner
                .find(')')
                .ok_or_else(|| self.err(0, "unterminated linspace(...)"))?;
            let base = "linspace(".len();
            let parts: Vec<&str> = inner[..close].split(',').collect();
            if parts.len() != 3 {
                return Err(self.err(0, "linspace takes (start, stop, count)"));
            }
            let mut offs = Vec::new();
            let mut pos = base;
            for p in &parts {
                offs.push(pos + (p.len() - p.trim_start().len()));
                pos += p.len() + 1;
            }
            let a = self.parse_number(parts[0].trim(), offs[0])?;
            let b = self.parse_number(parts[1].trim(), offs[1])?;
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| self.err(offs[2], format!("linspace count '{}' is not an integer", parts[2].trim())))?;
            if n == 0 {
                return Err(self.err(offs[2], "linspace count must be ≥ 1"));
            }
            return Ok((Numbers::Linspace(a, b, n), unit_from(base + close + 1)));
        }
        let mut values = Vec::new();
        let mut pos = 0;
        loop {
            let rest = &raw[pos..];
            let start = pos + (rest.len() - rest.trim_start().len());
            let end = raw[start..]
                .find(|c: char| c.is_whitespace() || c == ',')
                .map_or(raw.len(), |e| start + e);
            if start == end {
                return Err(self.err(start, "expected a number"));
            }
            values.push(self.parse_number(&raw[start..end], start)?);
            let after = &raw[end..];
            let next = end + (after.len() - after.trim_start().len());
            if raw[next..].starts_with(',') {
                pos = next + 1;
            } else {
                return Ok((Numbers::List(values), unit_from(end)));
            }
        }
    }

    fn convert(&self, dim: Dimension, unit: Option<(&str, usize)>) -> Result<f64, ConfigError> {
        match unit {
            None => Err(self.err(
                self.raw.len(),
                format!("missing unit; this key takes a unit such as '{}'", dim.base_unit()),
            )),
            Some((u, off)) => factor(dim, u).map_err(|m| self.err(off, m)),
        }
    }

    fn no_unit(&self, unit: Option<(&str, usize)>) -> Result<(), ConfigError> {
        match unit {
            Some((u, off)) => Err(self.err(off, format!("unexpected unit '{u}' on a dimensionless value"))),
            None => Ok(()),
        }
    }

    fn quantities(&self, dim: Dimension) -> Result<Vec<f64>, ConfigError> {
        match self.lex()? {
            (Numbers::List(v), unit) => {
                let f = self.convert(dim, unit)?;
                Ok(v.into_iter().map(|x| x * f).collect())
            }
            (Numbers::Linspace(..), _) => Err(self.err(0, "linspace is only allowed for grid keys")),
        }
    }

    fn quantity(&self, dim: Dimension) -> Result<f64, ConfigError> {
        let v = self.quantities(dim)?;
        if v.len() != 1 {
            return Err(self.err(0, "expected a single value"));
        }
        Ok(v[0])
    }

    fn quantity_where(&self, dim: Dimension, ok: fn(f64) -> bool, what: &str) -> Result<f64, ConfigError> {
        let x = self.quantity(dim)?;
        if !ok(x) {
            return Err(self.err(0, format!("value must be {what}")));
        }
        Ok(x)
    }

    fn quantity_or_auto(&self, dim: Dimension, ok: fn(f64) -> bool, what: &str) -> Result<Option<f64>, ConfigError> {
        if self.is_auto() {
            return Ok(None);
        }
        self.quantity_where(dim, ok, what).map(Some)
    }

    fn grid(&self, dim: Dimension) -> Result<Grid, ConfigError> {
        let (nums, unit) = self.lex()?;
        let f = self.convert(dim, unit)?;
        let grid = match nums {
            Numbers::List(v) => Grid::List(v.into_iter().map(|x| x * f).collect()),
            Numbers::Linspace(a, b, n) => Grid::Linspace { start: a * f, stop: b * f, n },
        };
        if grid.values().windows(2).any(|w| !(w[1] > w[0])) {
            return Err(self.err(0, "grid must be strictly increasing"));
        }
        Ok(grid)
    }

    fn plain(&self) -> Result<f64, ConfigError> {
        match self.lex()? {
            (Numbers::List(v), unit) if v.len() == 1 => {
                self.no_unit(unit)?;
                Ok(v[0])
            }
            _ => Err(self.err(0, "expected a single dimensionless number")),
        }
    }

    fn counts(&self) -> Result<Vec<u32>, ConfigError> {
        match self.lex()? {
            (Numbers::List(v), unit) => {
                self.no_unit(unit)?;
                v.into_iter()
                    .map(|x| {
                        if x >= 1.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) {
                            Ok(x as u32)
                        } else {
                            Err(self.err(0, format!("expected a positive integer, got {x}")))
                        }
                    })
                    .collect()
            }
            _ => Err(self.err(0, "expected positive integers")),
        }
    }

    fn count(&self) -> Result<usize, ConfigError> {
        let v = self.counts()?;
        if v.len() != 1 {
            return Err(self.err(0, "expected a single positive integer"));
        }
        Ok(v[0] as usize)
    }

    fn word<T>(&self, choices: &[(&str, T)]) -> Result<T, ConfigError>
    where
        T: Copy,
    {
        choices.iter().find(|(name, _)| *name == self.raw).map(|&(_, v)| v).ok_or_else(|| {
            let names: Vec<&str> = choices.iter().map(|(n, _)| *n).collect();
            self.err(0, format!("expected one of {}, got '{}'", names.join(" | "), self.raw))
        })
    }
}

fn positive(x: f64) -> bool {
    x > 0.0
}

fn non_negative(x: f64) -> bool {
    x >= 0.0
}

fn any(_: f64) -> bool {
    true
}

/// `Gamma[n,l,m]` → (n, l, m).
fn state_key(key: &str) -> Option<Result<(u32, u32, i32), String>> {
    let inner = key.strip_prefix("Gamma[")?.strip_suffix(']')?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    let parsed = (|| {
        if parts.len() != 3 {
            return None;
        }
        let n: u32 = parts[0].parse().ok()?;
        let l: u32 = parts[1].parse().ok()?;
        let m: i32 = parts[2].parse().ok()?;
        (n >= 1 && l < n && m.unsigned_abs() <= l).then_some((n, l, m))
    })();
    Some(parsed.ok_or_else(|| format!("'{key}' must be Gamma[n,l,m] with n ≥ 1, l < n, |m| ≤ l")))
}

fn apply(cfg: &mut ScenarioConfig, key: &str, v: &Value) -> Result<(), ConfigError> {
    use Dimension::*;
    let s = &mut cfg.system;
    let d = &mut cfg.drive;
    let g = &mut cfg.grids;
    let p = &mut cfg.propagation;
    let l = &mut cfg.levels.params;
    match key {
        "omega_ab" => s.omega_ab = v.quantity_where(Frequency, positive, "> 0")?,
        "omega_ac" => s.omega_ac = v.quantity_where(Frequency, positive, "> 0")?,
        "gamma_ab" => s.gamma_ab = v.quantity_where(Frequency, non_negative, "≥ 0")?,
        "gamma_bc" => s.gamma_bc = v.quantity_where(Frequency, non_negative, "≥ 0")?,
        "gamma_ac" => s.gamma_ac = v.quantity_or_auto(Frequency, non_negative, "≥ 0")?,
        "Gamma_ab" => s.decay_ab = v.quantity_or_auto(Frequency, non_negative, "≥ 0")?,
        "Gamma_ca" => s.decay_ca = v.quantity_or_auto(Frequency, non_negative, "≥ 0")?,
        "N" => s.density = v.quantity_where(Density, non_negative, "≥ 0")?,
        "d_ab_sq" => s.d_ab_sq = v.quantity_where(DipoleSquared, non_negative, "≥ 0")?,
        "d_ac" => s.d_ac = v.quantity_where(Dipole, non_negative, "≥ 0")?,
        "Omega1" => d.rabi1 = v.quantity_where(Frequency, non_negative, "≥ 0")?,
        "Omega2" => d.rabi2 = v.quantity_where(Frequency, non_negative, "≥ 0")?,
        "Omega2_phase" => d.rabi2_phase = v.quantity(Angle)?,
        "delta1" => d.delta1 = v.quantity_where(Frequency, any, "finite")?,
        "delta2" => d.delta2 = v.quantity_where(Frequency, any, "finite")?,
        "probe_offset" => g.probe_offset = v.grid(Frequency)?,
        "spectrum_Omega2" => {
            let list = v.quantities(Frequency)?;
            if list.iter().any(|&x| x < 0.0) {
                return Err(v.err(0, "control Rabi frequencies must be ≥ 0"));
            }
            g.spectrum_omega2 = list;
        }
        "sweep_Omega2" => g.sweep_omega2 = v.grid(Frequency)?,
        "time_window" => {
            g.time_window = if v.is_auto() {
                None
            } else {
                let w = v.grid(Time)?;
                if !matches!(w, Grid::Linspace { .. }) || w.len() < 2 {
                    return Err(v.err(0, "time_window must be auto or linspace(start, stop, n ≥ 2)"));
                }
                Some(w)
            }
        }
        "L" => p.length = v.quantity_where(Length, non_negative, "≥ 0")?,
        "z_steps" => p.z_steps = v.count()?,
        "samples_per_duration" => {
            let x = v.plain()?;
            if !(x > 0.0) {
                return Err(v.err(0, "samples_per_duration must be > 0"));
            }
            p.samples_per_duration = x;
        }
        "pulse_duration" => p.pulse_duration = v.quantity_or_auto(Time, positive, "> 0")?,
        "bloch_source" => p.source = v.word(&[("linear", SourceKind::Linear), ("full", SourceKind::Full)])?,
        "decay" => {
            p.decay = v.word(&[("literal", DecayConvention::Literal), ("standard", DecayConvention::Standard)])?
        }
        "ac_term" => {
            p.ac_term = v.word(&[
                ("self-consistent", AcCoherenceTerm::SelfConsistent),
                ("printed", AcCoherenceTerm::Printed),
            ])?
        }
        "E_g" => l.band_gap = v.quantity(Energy)?,
        "R_star" => l.rydberg = v.quantity_where(Energy, positive, "> 0")?,
        "a_star" => l.bohr_radius = v.quantity_where(Length, positive, "> 0")?,
        "gamma_aniso" => {
            let x = v.plain()?;
            if !(x > 0.0) {
                return Err(v.err(0, "gamma_aniso must be > 0"));
            }
            l.anisotropy = x;
        }
        "eps_b" => {
            let x = v.plain()?;
            if !(x > 0.0) {
                return Err(v.err(0, "eps_b must be > 0"));
            }
            l.eps_b = x;
        }
        "Delta_LT" => l.delta_lt = v.quantity_where(Energy, non_negative, "≥ 0")?,
        "r0" => l.coherence_radius = v.quantity_where(Length, positive, "> 0")?,
        "F" => l.field = v.quantity(Field)?,
        "level_n" => cfg.levels.principal = v.counts()?,
        "output_dir" => cfg.output.dir = PathBuf::from(v.raw),
        "format" => {
            cfg.output.format = OutputFormat::parse(v.raw)
                .ok_or_else(|| v.err(0, format!("expected csv | json | both, got '{}'", v.raw)))?
        }
        other => match state_key(other) {
            Some(Ok((n, ll, m))) => {
                let gamma_ev = v.quantity_where(Energy, non_negative, "≥ 0")?;
                match l.dampings.iter_mut().find(|st| (st.n, st.l, st.m) == (n, ll, m)) {
                    Some(st) => st.gamma_ev = gamma_ev,
                    None => l.dampings.push(StateDamping { n, l: ll, m, gamma_ev }),
                }
            }
            Some(Err(msg)) => return Err(ConfigError::at(v.line, 1, msg)),
            None => return Err(ConfigError::at(v.line, 1, format!("unknown key '{other}'"))),
        },
    }
    Ok(())
}

/// Parse a configuration file. Missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    let mut seen = HashSet::new();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = full_line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let eq = content
            .find('=')
            .ok_or_else(|| ConfigError::at(line_no, 1, "expected 'key = value'"))?;
        let key = content[..eq].trim();
        if key.is_empty() {
            return Err(ConfigError::at(line_no, 1, "missing key before '='"));
        }
        let key_col = content[..content.len() - content.trim_start().len()].chars().count() + 1;
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::at(line_no, key_col, format!("duplicate key '{key}'")));
        }
        let rhs = &content[eq + 1..];
        let lead = rhs.len() - rhs.trim_start().len();
        let raw = rhs.trim();
        let col = content[..eq + 1 + lead].chars().count() + 1;
        if raw.is_empty() {
            return Err(ConfigError::at(line_no, col, format!("missing value for '{key}'")));
        }
        let value = Value { raw, line: line_no, col };
        apply(&mut cfg, key, &value).map_err(|mut e| {
            if let Some((_, 1)) = e.location {
                e.location = Some((line_no, key_col));
            }
            e
        })?;
    }
    cfg.check()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        let sys = cfg.ladder().unwrap();
        assert_eq!(sys, LadderSystem::cu2o_default());
    }

    #[test]
    fn energy_units_convert() {
        let cfg = parse_config("gamma_ab = 30 ueV\n").unwrap();
        assert!((cfg.system.gamma_ab / 45.58e9 - 1.0).abs() < 5e-4);
    }

    #[test]
    fn bad_unit_names_line() {
        let err = parse_config("N = 1 banana").unwrap_err();
        assert_eq!(err.location, Some((1, 7)));
        assert!(err.message.contains("banana"));
    }

    #[test]
    fn missing_unit_rejected() {
        let err = parse_config("# header\n\nL = 30\n").unwrap_err();
        assert_eq!(err.location.unwrap().0, 3);
        assert!(err.message.contains("missing unit"));
    }

    #[test]
    fn unit_on_dimensionless_rejected() {
        assert!(parse_config("gamma_aniso = 0.5 m").is_err());
        assert!(parse_config("z_steps = 10 um").is_err());
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        let err = parse_config("foo = 1 m").unwrap_err();
        assert!(err.message.contains("unknown key"));
        let err = parse_config("L = 1 um\nL = 2 um").unwrap_err();
        assert_eq!(err.location, Some((2, 1)));
    }

    #[test]
    fn malformed_number_column() {
        let err = parse_config("Omega2 = 2x5 Grad/s").unwrap_err();
        assert_eq!(err.location, Some((1, 10)));
        let err = parse_config("spectrum_Omega2 = 0, 1x, 2 Grad/s").unwrap_err();
        assert_eq!(err.location, Some((1, 22)));
    }

    #[test]
    fn hertz_is_ambiguous() {
        let err = parse_config("Omega2 = 25 GHz").unwrap_err();
        assert!(err.message.contains("ambiguous"));
    }

    #[test]
    fn grids_and_lists() {
        let cfg = parse_config(
            "probe_offset = linspace(-1, 1, 5) Grad/s\nspectrum_Omega2 = 0, 5 Grad/s\nsweep_Omega2 = 1, 2, 4 Grad/s\n",
        )
        .unwrap();
        assert_eq!(cfg.grids.probe_offset.values(), vec![-1e9, -0.5e9, 0.0, 0.5e9, 1e9]);
        assert_eq!(cfg.grids.spectrum_omega2, vec![0.0, 5e9]);
        assert_eq!(cfg.grids.sweep_omega2.len(), 3);
        assert!(parse_config("sweep_Omega2 = 4, 2, 1 Grad/s").is_err());
        assert!(parse_config("sweep_Omega2 = linspace(4, 1, 3) Grad/s").is_err());
        assert!(parse_config("N = linspace(1, 2, 3) cm^-3").is_err());
    }

    #[test]
    fn auto_and_words() {
        let cfg = parse_config(
            "pulse_duration = 2 ns\ntime_window = linspace(-10, 20, 301) ns\nbloch_source = full\ndecay = standard\nformat = json\noutput_dir = results/run 1\n",
        )
        .unwrap();
        assert_eq!(cfg.propagation.pulse_duration, Some(2e-9));
        assert_eq!(cfg.propagation.source, SourceKind::Full);
        assert_eq!(cfg.output.format, OutputFormat::Json);
        assert_eq!(cfg.output.dir, PathBuf::from("results/run 1"));
        assert!(parse_config("bloch_source = fast").is_err());
        assert!(parse_config("time_window = 1, 2 ns").is_err());
    }

    #[test]
    fn state_dampings() {
        let cfg = parse_config("Gamma[10,0,0] = 80 ueV\nGamma[3,1,-1] = 5 ueV\n").unwrap();
        let l = &cfg.levels.params;
        assert!((l.damping(10, 0, 0) - 80e-6).abs() < 1e-18);
        assert!((l.damping(3, 1, -1) - 5e-6).abs() < 1e-18);
        assert!(parse_config("Gamma[2,2,0] = 1 ueV").is_err());
    }

    #[test]
    fn ladder_ordering_checked() {
        let err = parse_config("omega_ac = 4000 Trad/s").unwrap_err();
        assert!(err.location.is_none());
        assert!(err.message.contains("ordering"));
    }

    #[test]
    fn default_text_round_trips() {
        let cfg = ScenarioConfig::default();
        assert_eq!(parse_config(&cfg.to_config_text()).unwrap(), cfg);
    }
}
