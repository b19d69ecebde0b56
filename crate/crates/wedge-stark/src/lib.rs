//! Ground-state energy and Stark shift of an electron confined in a
//! wedge-shaped ("slice of a cake") quantum box under a lateral electric
//! field.
//!
//! The field-free problem is solved exactly in terms of fractional-order
//! Bessel functions; the field response comes from a one-parameter
//! variational ansatz multiplying the exact state by exp(-beta rho cos theta)
//! and minimizing the Rayleigh quotient over beta. An independent
//! finite-difference eigensolver on the same cross-section serves as a
//! built-in oracle.
//!
//! Everything is computed in reduced atomic units: lengths in effective Bohr
//! radii a*, energies in effective Rydbergs R*, fields in F0 = R*/(e a*);
//! see [`model::UnitScales`] for conversion to physical units.

pub mod energy;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod sweep;
pub mod variational;

pub use energy::{evaluate_trial, ground_state, GroundState, TrialEnergy, TrialEvaluation};
pub use model::{unit_scales, validate_geometry, FieldSpec, UnitScales, WedgeGeometry};
pub use oracle::{fd_ground_energy, fd_stark_shift, FdSolution, PolarGrid};
pub use sweep::{compare_apertures, run_sweep, SweepAxis, SweepSpec, SweepTable};
pub use variational::{stark_shift, VariationalResult};
