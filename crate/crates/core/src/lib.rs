//! Exact workbench for lifts of circle homeomorphisms and annulus boundary traces.
//!
//! All quantities are exact rationals; real-valued invariants such as the
//! translation number are reported as certified rational enclosures.

pub mod annulus;
pub mod bounds;
pub mod fragmentation;
pub mod lift_maps;
pub mod qm_lab;
pub mod rational;
pub mod report;
pub mod rotation;

pub use annulus::AnnulusLift;
pub use lift_maps::{DisplacementSummary, FixedInterval, LiftError, Limits, PLLift};
pub use rational::Q;
pub use rotation::{CertifiedInterval, TauResult};
