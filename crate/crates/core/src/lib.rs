//! Exactly solvable qubit channel induced on a two-level Unruh-DeWitt detector
//! by an instantaneous (delta-switched) coupling to a massive scalar field,
//! together with its ℓ1 cohering and decohering power for coherent and
//! thermal field states.
//!
//! - [`quantum`]: qubit states, the ℓ1 coherence measure and the channel
//!   parameterised by the kernel `z = ⟨exp(2iλφ)⟩`.
//! - [`field`]: smeared-field integrals that turn detector and field
//!   parameters into `z`, plus mass inference and cohering-zero search.
//! - [`numerics`]: adaptive quadrature, Γ, Tricomi `U`, stable `coth`,
//!   bisection.
//! - [`oracle`]: truncated Fock-space brute force used to cross-check the
//!   closed forms.
//! - [`groups`], [`sweep`], [`commands`], [`verify`]: the dimensionless
//!   parameter interface and the operations behind the `udw-coherence` binary.
//!
//! Runnable walkthroughs live in `examples/`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod field;
pub mod groups;
pub mod numerics;
pub mod oracle;
pub mod quantum;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use field::{DetectorConfig, FieldConfig, FieldModel, FieldState};
pub use quantum::{
    apply_channel, choi_matrix, cohering_power, decohering_power, dephase, l1_coherence,
    monopole_matrix, remaining_coherence, ChannelKernel, MaxCoherentQubit, QubitState,
};
