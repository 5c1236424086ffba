//! Exact computations for lattice-polarized weak del Pezzo surfaces and the
//! rational elliptic surfaces mirror to them.
//!
//! Everything is carried out in exact arithmetic over the integers and
//! rationals: hyperbolic Picard lattices and their root systems, effective
//! and nef cones, mirror lattices inside the anticanonical fibers of rational
//! elliptic surfaces, toric theta-basis presentations of anticanonical
//! models, and singular-fiber analysis of the explicit elliptic fibrations
//! obtained from those presentations.

pub mod error;
pub mod exact;
pub mod cone;
pub mod delpezzo;
pub mod fibration;
pub mod lattice;
pub mod mirror;
pub mod roots;
pub mod theta;

pub use error::{Error, Result};
