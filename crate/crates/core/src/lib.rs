//! Superoscillating quantum control (SQC) by sequential pre- and
//! post-selection.
//!
//! A two-level controller is repeatedly prepared in `|i⟩`, weakly coupled to
//! an apparatus, and projected onto `|f⟩`. Each successful round kicks the
//! apparatus by the weak value of the coupling operator, so `N` rounds add up
//! to an amplified, unidirectional shift. The crate simulates this for
//! trapped-ion transport (a Gaussian wave packet pushed by `g σx ⊗ p̂`) and
//! for an analog Grover search (a target qubit rotated by `−g σy ⊗ σy`),
//! together with the adiabatic baselines, energy-cost accounting and
//! Lindblad noise models used to judge them.
//!
//! Units: ħ = 1, trap mass and frequency dimensionless.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod openquantum;
pub mod qcore;
pub mod quadrature;
pub mod record;
pub mod search;
pub mod selection;
pub(crate) mod sparse;
pub mod transport;
pub mod wavepacket;

pub use error::{Error, Result};
pub use qcore::{DensityMatrix, Operator, StateVector, TrapSpec, C64};
pub use record::ExperimentRecord;
