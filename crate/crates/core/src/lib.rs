//! Discrete Wigner functions, mana and Haar-random states for odd-dimensional
//! qudits, with closed-form predictions for the typical mana of random states.

pub mod design_probe;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod output;
pub mod predictions;
pub mod qudit;
pub mod special;
pub mod state;
pub mod stats;
pub mod verify;
pub mod wigner;

pub use ensembles::{EnsembleSpec, SeededStream};
pub use error::{ManaError, Result};
pub use output::{Cell, Table};
pub use predictions::{ExactMixedParams, GaussianParams};
pub use qudit::{CMatrix, PauliLabel, PhasePoint, QuditDim};
pub use state::{DensityMatrix, PureState};
pub use wigner::{mana, wigner_norm, WignerFunction, WignerPath};
