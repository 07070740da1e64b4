//! Abelian anyons of the honeycomb spin model.
//!
//! The crate covers the microscopic three-coupling Hamiltonian on small
//! periodic clusters, its fourth-order plaquette model on the z-link lattice,
//! anyon creation, fusion and braiding by exact Pauli-string algebra, and
//! trap-driven transport of a single anyon.
//!
//! Numerical types are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`, which every tolerance in the test-suite assumes.

pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod pauli;
pub mod scalar;
pub mod spectra;
pub mod toric;

pub use error::{Error, Result};
pub use lattice::{AnyonType, EffectiveLattice, Endpoint, HoneycombLattice, StringPath};
pub use pauli::{Axis, PauliString};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type OperatorHandle = spectra::Operator<f64>;
pub type SpectrumResult = spectra::Spectrum<f64>;
pub type CouplingConfig = spectra::Couplings<f64>;
pub type StateVector = toric::State<f64>;
pub type TrapSchedule = dynamics::Schedule<f64>;
