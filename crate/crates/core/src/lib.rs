//! Dense density-matrix and quantum-channel toolkit for desk-scale
//! decoherence and environment-fragment experiments.
//!
//! The crate is organized in four layers:
//!
//! - [`layout`], [`state`], [`measures`]: complex dense linear algebra over
//!   explicitly laid-out tensor-product Hilbert spaces — states, composition,
//!   reduction, spectra, and information measures.
//! - [`channels`]: CPTP maps in Kraus and Choi form, POVMs, fragment
//!   restriction, and measure-and-prepare channels.
//! - [`models`]: constructors for the physical scenarios — the which-path
//!   interferometer, cat–photon recording, N-fragment record interactions,
//!   and the observer chain.
//! - [`darwin`]: objectivity diagnostics — fragment information curves and
//!   redundancy, the pointer-state sieve, measure-and-prepare fitting, and
//!   the emergence scan over growing environments.
//!
//! One index convention holds everywhere: the first subsystem of a layout is
//! the most significant factor of the composite index (big-endian). Storage is
//! dense; the intended scale is at most a dozen qubits. All values are
//! immutable after construction and safe to share across threads.
//!
//! ```
//! use qdarwin::models::{spam_interaction, DimensionBudget};
//!
//! // A system qubit writes perfect records into three fragment qubits.
//! let channel = spam_interaction(3, &DimensionBudget::default())?;
//! // The channel from the system to any single fragment carries no
//! // input-output entanglement: it is measure-and-prepare.
//! let fragment = channel.restrict_to_fragment(1)?;
//! assert!(fragment.eb_negativity() < 1e-9);
//! # Ok::<(), qdarwin::Error>(())
//! ```

pub mod channels;
pub mod darwin;
pub mod error;
pub mod layout;
pub mod linalg;
pub mod measures;
pub mod models;
pub mod random;
pub mod state;

pub use channels::{choi_trace_distance, ChoiMatrix, CptpValidation, KrausChannel, MeasureAndPrepareSpec, Povm};
pub use error::{Error, Result};
pub use layout::SubsystemLayout;
pub use measures::{
    fidelity, mutual_information, negativity, povm_probabilities, trace_distance,
    von_neumann_entropy,
};
pub use state::{DensityMatrix, HermitianOperator, Ket, DEFAULT_TOL};
