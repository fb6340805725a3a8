//! Evans-function stability analysis for noncharacteristic boundary layers of
//! hyperbolic-parabolic conservation laws on the half-line,
//!
//!   U_t + F(U)_x = (B(U) U_x)_x,   x, t > 0,
//!
//! where the first (hyperbolic) equation carries no viscosity: the first block
//! row of B vanishes identically. The crate computes stationary layer profiles,
//! decides the spectral stability condition (no Evans-function zeros with
//! Re λ ≥ 0) by winding-number contour tests, cross-validates the resolvent
//! kernel against structural low/high-frequency predictions and a direct
//! discretization oracle, and probes the time-domain Green function with a
//! finite-volume half-line solver.
//!
//! Module map:
//! * [`model`]      — the system class, the concrete isentropic gas instance,
//!                    endpoint/reduced quantities, assumption audit.
//! * [`profile`]    — boundary-layer profile construction and decay certificates.
//! * [`eigen`]      — the first-order eigenvalue system, analytic subspace
//!                    continuation, Evans function and winding-number verdicts.
//! * [`resolvent`]  — resolvent kernel assembly, duality checks, frequency-regime
//!                    structure fits, inverse Laplace reconstruction.
//! * [`sim`]        — direct linear/nonlinear half-line solver, Green-function
//!                    probes, template evaluation, decay-rate fits.

#![forbid(unsafe_code)]

pub mod eigen;
pub mod linalg;
pub mod model;
pub mod ode;
pub mod profile;
pub mod resolvent;
pub mod sim;

pub use num_complex::Complex64;

/// Which way the hyperbolic characteristic crosses the boundary x = 0.
///
/// Inflow means the effective hyperbolic speed A_* is strictly positive
/// (signals enter the domain), outflow that it is strictly negative. The
/// boundary prescribes n pieces of data for inflow and n-1 for outflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCase {
    Inflow,
    Outflow,
}

impl std::fmt::Display for BoundaryCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryCase::Inflow => write!(f, "inflow"),
            BoundaryCase::Outflow => write!(f, "outflow"),
        }
    }
}
