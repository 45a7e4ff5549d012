//! Magic-state resources under the quantum SWITCH.
//!
//! The crate covers dense operator algebra and Kraus channels, the one- and
//! two-qubit stabilizer states, robustness of magic for qubit states and
//! channels (via an embedded simplex solver), discrete Wigner functions and
//! mana for odd prime dimension, the SWITCH of two channels, and the sweeps
//! that tie these together.

pub mod channel;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod lp;
pub mod models;
pub mod operator;
pub mod pauli;
pub mod qswitch;
pub mod robustness;
pub mod stabilizer;
pub mod state;
pub mod tolerance;
pub mod wigner;

pub use error::{Error, Result};
