//! Constructors for the physical scenarios: the which-path interferometer,
//! the cat–photon environment, record interactions over N fragments, and the
//! observer–cat–environment chain.
//!
//! All recording maps are embedded as unitaries (isometries) acting on an
//! explicitly initialized environment, so every model channel is CPTP by
//! construction. Record quality is exposed as a real overlap parameter
//! implemented by a relative rotation of the two record states.

mod budget;
mod cat;
mod gates;
mod interactions;
mod interferometer;
mod observer;

pub use budget::DimensionBudget;
pub use cat::{cat_photon, pointer_state_check, CatState};
pub use interactions::{
    partial_record_interaction, random_interaction, spam_interaction, system_fragment_layout,
};
pub use interferometer::{erase_and_postselect, mach_zehnder, EraserOutcome, InterferometerResult};
pub use observer::{observer_cat_scenario, BranchReport};
