//! Self-similar solutions of the binormal curvature flow (the localized
//! induction approximation for vortex filaments).
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: complex gamma, confluent hypergeometric `1F1` and parabolic
//!   cylinder `D_nu` functions.
//! * [`odeint`]: adaptive Dormand-Prince 5(4) integration with dense output.
//! * [`flow`]: the self-similar ODE system for `G(s)`, its conserved quantity,
//!   curvature/torsion, the spherical-angle form and filament reconstruction.
//! * [`painleve`]: the sigma-form of Painleve IV, its direct integration and the
//!   maps to the conventional PIV functions.
//! * [`asympt`]: large-`s` models, tail fitting and the connection map between
//!   the `s -> +inf` and `s -> -inf` parameters.
//! * [`zero_a`]: the closed-form solution for a vanishing axis vector.
//! * [`symmetric`]: odd and mixed symmetric solutions.

pub mod asympt;
pub mod error;
pub mod flow;
pub mod odeint;
pub mod painleve;
pub mod specfun;
pub mod symmetric;
pub mod zero_a;

pub use error::{Error, Result};

pub use nalgebra::Vector3;
pub use num_complex::Complex64;
