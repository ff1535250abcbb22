//! Minimum-detectable-displacement bounds for weak-force sensing.
//!
//! The crate is organised in four layers:
//!
//! - [`coherent`]: exact algebra of finite superpositions of multimode
//!   coherent states (overlaps, displacements, generator moments);
//! - [`fock`]: a brute-force truncated number-basis oracle used to check
//!   every closed-form result independently;
//! - [`bounds`]: closed-form bounds for coherent, squeezed, single-mode cat,
//!   separable-cat and entangled-cat probes, plus the photon-number inversion
//!   used to draw curves against `n_tot`;
//! - [`estimation`]: seeded homodyne and Ramsey/GHZ Monte Carlo.
//!
//! Quadrature convention, used everywhere: `X = a + a†`, `Y = -i(a - a†)`.
//! A weak force acts as `D(iε) = exp(iε X)` on every mode, so the collective
//! generator is `G = Σ_k (a_k + a_k†)` and the quantum Fisher information of a
//! pure probe is `4 Var(G)`.

pub mod bounds;
pub mod coherent;
pub mod error;
pub mod estimation;
pub mod fock;

pub use num_complex::Complex64;

pub use bounds::{BoundResult, ProbeFamily};
pub use coherent::{CoherentLabel, Quadrature, SuperpositionState};
pub use error::{Error, Result};
pub use estimation::{HomodyneExperiment, HomodyneProbe, RamseyModel, RamseyScheme};
pub use fock::{FockVector, OperatorLabel, OperatorMatrix};
