//! Quantum channels: Kraus and Choi representations, validation, composition,
//! fragment restriction, POVMs, and measure-and-prepare channels.

mod choi;
mod kraus;
mod povm;

pub use choi::{choi_trace_distance, ChoiMatrix};
pub use kraus::{CptpValidation, KrausChannel};
pub use povm::{MeasureAndPrepareSpec, Povm};
