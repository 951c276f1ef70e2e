//! Wigner functions of the semiconfined (position-dependent-mass) harmonic
//! oscillator, with and without a homogeneous external field.
//!
//! [`wigner_closed`] evaluates the exact closed forms, [`oracle`] recomputes
//! them by brute-force quadrature, [`limits`] measures the approach to the
//! ordinary oscillator as the wall recedes, and [`cli`] drives it all from the
//! command line.

// Published coefficients and reference values keep all the digits they were
// quoted or computed with.
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod limits;
pub mod models;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod suites;
pub mod wigner_closed;
