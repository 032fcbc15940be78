//! Numerical laboratory for generalized Strichartz estimates of the
//! fractional dispersion `i∂ₜu + D^a u = 0`, `D^a` with symbol `|ξ|^a`.

pub mod exponents;
pub mod spectral;
pub mod mixednorm;
pub mod decomp;
pub mod runner;
