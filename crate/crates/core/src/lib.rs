//! Electromagnetically induced transparency and slow light in a three-level
//! ladder of Cu₂O Rydberg excitons.
//!
//! The crate is organised bottom-up:
//!
//! * [`units`]: physical constants and energy/frequency conversions.
//! * [`system`]: the ladder medium ([`LadderSystem`]) and the probe/control
//!   drive ([`FieldDrive`]).
//! * [`levels`]: anisotropy-corrected exciton energies, Stark coupling
//!   elements, the 2×2 secular problem and the dipole matrix element.
//! * [`susceptibility`]: steady-state probe susceptibility, group index,
//!   transparency-window metrics and control-field sweeps.
//! * [`bloch`]: the six-component density-matrix dynamics and the
//!   first-order (linear-response) reduction.
//! * [`propagation`]: slab propagation of the probe Rabi envelope and the
//!   analytic narrowband envelope.
//!
//! All internal frequencies are angular (rad/s).

pub mod bloch;
pub mod error;
pub mod levels;
pub mod ode;
pub mod propagation;
pub mod quadrature;
pub mod susceptibility;
pub mod system;
pub mod units;

mod linalg;

pub use error::{EitError, Result};
pub use system::{FieldDrive, LadderSystem};

pub use num_complex::Complex64;
