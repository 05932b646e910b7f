//! Objectivity diagnostics: fragment information curves and redundancy, the
//! pointer-state sieve, measure-and-prepare fitting, and the emergence scan
//! over growing environments.

pub mod bloch;
mod emergence;
mod info;
mod mpfit;
mod sieve;

pub use emergence::{
    emergence_scan, EmergenceConfig, EmergenceRow, EmergenceScan, EmergenceSummary,
    InteractionFamily,
};
pub use info::{fragment_information_curve, redundancy, InfoCurve, InfoPoint, SamplingPolicy};
pub use mpfit::{mp_fit, MpFit};
pub use sieve::{pointer_sieve, system_purity_after, PointerSieve, SievePoint};
