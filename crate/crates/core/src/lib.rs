//! Two-site quantum correlations of the infinite anisotropic XY chain after a
//! transverse-field quench.
//!
//! The chain starts in the ground state of
//! `H = J Σ [(1+γ) SˣSˣ + (1−γ) SʸSʸ] − a Σ Sᶻ` and evolves under the same
//! Hamiltonian with the field switched off. Everything here works in the
//! dimensionless variables `ã = a/J` and `t̃ = Jt/ħ`.
//!
//! The pipeline is
//!
//! 1. [`correlators`]: Brillouin-zone integrals for `Mᶻ`, `G(±1)` and `S`,
//!    assembled into a [`CorrelatorSet`].
//! 2. [`qstate`]: the nearest-neighbour density matrix built from those
//!    correlators, with eigenvalues, entropies, reductions and partial
//!    transposes.
//! 3. [`entanglement`], [`discord`], [`workdeficit`]: logarithmic negativity,
//!    quantum discord and one-way work-deficit of that state.
//! 4. [`analysis`]: field profiles, grid sweeps and the collapse/revival scan
//!    that checks whether a rising discord at the collapse field anticipates
//!    entanglement revival.
//!
//! ```
//! use xyquench::{correlators::ModelParams, qstate::TwoQubitState, QuadratureSpec};
//!
//! let params = ModelParams::new(0.5, 2.0, 1.0)?;
//! let set = xyquench::correlators::correlator_set(&params, &QuadratureSpec::default())?;
//! let state = TwoQubitState::from_correlators(&set)?;
//! let ln = xyquench::entanglement::log_negativity(&state);
//! assert!(ln >= 0.0);
//! # Ok::<(), xyquench::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analysis;
pub mod correlators;
pub mod discord;
pub mod entanglement;
mod error;
pub mod optimize;
pub mod qstate;
pub mod quadrature;
pub mod workdeficit;

pub use correlators::{CorrelatorSet, ModelParams};
pub use error::{Error, Result};
pub use optimize::{BasisSearch, MeasurementBasis};
pub use qstate::{Side, SingleQubitState, TwoQubitState};
pub use quadrature::QuadratureSpec;
