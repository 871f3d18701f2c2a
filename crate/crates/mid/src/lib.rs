//! Numerical machinery for the magnetically insulated diode model: cubic
//! root classification for the turning-point potential, parameter-plane
//! bifurcation analysis, effective-potential construction by singular
//! quadrature and inversion, Picard solution of the coupled potential
//! equations, Child-Langmuir limits, the tangent-function boundary-value
//! approximation, and figure-dataset generation.

pub mod childlangmuir;
pub mod cubic;
pub mod error;
pub mod model;
pub mod numerics;
pub mod potential;
pub mod sweep;
pub mod tangent;
pub mod thetad;
pub mod uvsolve;

pub use error::{Error, Result};
