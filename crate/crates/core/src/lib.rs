//! Pseudo-spectral simulation of incompressible ideal MHD on the periodic
//! torus, with and without an asymmetric stress term, plus numerical checks
//! of the Lie-algebraic structure behind it.
//!
//! * [`spectral`]: grids, Fourier fields, derivatives, Leray projection.
//! * [`algebra`]: brackets, the cocycle, the invariant form, the Euler
//!   right-hand side.
//! * [`dynamics`]: MHD right-hand sides, the stress tensor, pressure.
//! * [`integrator`]: RK4 stepping with a stability guard.
//! * [`diagnostics`]: conserved quantities and the exact Alfvén wave.
//! * [`config`], [`io`]: run configuration, CSV and snapshot formats.
//! * [`verify`]: randomized identity checks and convergence studies.

pub mod algebra;
pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod io;
mod products;
pub mod spectral;
pub mod verify;

pub use algebra::AlgebraElement;
pub use config::{parse_config, SimConfig};
pub use diagnostics::InvariantRecord;
pub use dynamics::{MhdState, Model};
pub use error::{Error, Result};
pub use integrator::{integrate, run, StepControl};
pub use spectral::{Scalar, SpectralField, TorusGrid};
