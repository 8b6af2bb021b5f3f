//! Teleportation of a qubit through a uniformly accelerated two-qubit
//! channel, and the quantum Fisher information Bob retains about the weight
//! angle, the phase angle and the Unruh parameter.
//!
//! Every closed form in the crate has an independent numerical counterpart:
//! the acceleration channel is checked against an explicit Bogoliubov
//! isometry with a partial trace, the teleported state against a three-qubit
//! circuit simulation, and the analytic Bloch-vector derivatives against
//! finite differences. [`verify::verify`] runs all of them on seeded draws.

// Domain guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod fisher;
pub mod linalg;
pub mod parse;
pub mod sweep;
pub mod teleport;
pub mod unruh;
pub mod verify;

pub use channel::{dyadic_to_density, preset_dyadic, validate_physical, ChannelPreset, CorrelationDyadic};
pub use error::{Error, Result};
pub use fisher::{
    bloch_partial, bloch_teleported, fisher, fisher_from_bloch, BlochVector, DerivativeMethod,
    EstimandParam, FisherResult, NormalizationMode,
};
pub use teleport::{bloch_of, teleport_analytic, teleport_circuit_oracle, BobState, InputState};
pub use sweep::{run_sweep, FigurePreset, SweepRow, SweepSpec};
pub use unruh::{
    accelerate, accelerated_density, bogoliubov_oracle, r_from_acceleration, AcceleratedChannel,
    ModePreset, UnruhParams,
};
