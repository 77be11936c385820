//! Hamiltonian theory of two-layer stratified flow beyond the Boussinesq
//! approximation.
//!
//! The crate is organized by subsystem:
//!
//! * [`ratpoly`]: exact rationals, bivariate polynomials, spectral-parameter
//!   series, radical/log expressions, jet expressions and the Euler operator.
//! * [`models`]: Hamiltonian densities (full, first order in `r`, Boussinesq,
//!   fixed-gravity units), fluxes and quasilinear matrices.
//! * [`conserved`]: polynomial, algebraic and Toda families of conserved
//!   densities, Poisson tensors, recursion relations and conservation tests.
//! * [`deformation`]: first-order deformation of the polynomial family by a
//!   triangular solve in monomial subspaces.
//! * [`spectral`]: hyperbolicity region, simple waves, sonic tangents,
//!   characteristic velocities and Riemann invariants.
//! * [`hodograph`]: implicit hodograph solutions by Newton continuation.
//! * [`simulator`]: method-of-lines integrator used as an independent oracle.

pub mod conserved;
pub mod deformation;
pub mod hodograph;
pub mod models;
pub mod ratpoly;
pub mod simulator;
pub mod spectral;
