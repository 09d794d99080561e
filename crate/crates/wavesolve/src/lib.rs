//! Minimum-residual (DPG) solver for 2D time-harmonic wave scattering with
//! perfectly matched layers.
//!
//! The library discretizes broken ultraweak first-order formulations of the
//! Helmholtz, Maxwell, and Navier (elastodynamic) systems on a structured
//! quadrilateral mesh. Unbounded exteriors are truncated with a uniaxial
//! complex coordinate stretch whose Jacobian enters the element matrices as
//! complex material coefficients. Optimal test functions are computed
//! per element through the Gram matrix of an adjoint graph norm, field
//! unknowns are condensed out, and the remaining Hermitian positive-definite
//! skeleton system is solved directly.
//!
//! Scattering runs are verified against closed-form outgoing fundamental
//! solutions (Hankel-function based), and a manufactured plane wave drives
//! convergence studies on a square domain.

pub mod basis;
pub mod config;
pub mod driver;
pub mod error;
pub mod exact;
pub mod formulations;
pub mod mesh;
pub mod metrics;
pub mod pml;
pub mod quadrature;
pub mod solver;
pub mod spaces;
pub mod special;

pub use config::RunConfig;
pub use error::SolverError;

/// Complex scalar used throughout (re-exported from nalgebra to keep a
/// single `num-complex` version in play).
pub type C64 = nalgebra::Complex<f64>;

/// Shorthand for `Complex::new`.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);
