//! Steklov spectra of surfaces with boundary and recovery of the number and
//! lengths of boundary components from a (truncated, perturbed) spectrum.
//!
//! - [`multiset`]: sorted multisets, the merged progressions `S(R)`, gap
//!   statistics and closeness diagnostics.
//! - [`spectra`]: disk, union, annulus, weighted disk and synthetic spectra.
//! - [`recovery`]: the peeling algorithm that reads boundary lengths off a
//!   spectrum.
//! - [`numtheory`]: simultaneous approximation witnesses behind the gap limsup.
//! - [`format`]: the versioned spectrum file format.

pub mod error;
pub mod format;
pub mod multiset;
pub mod numtheory;
pub mod recovery;
pub mod spectra;

pub use error::{Error, Result};
pub use format::{SpectrumFile, SpectrumMeta};
pub use multiset::{
    closeness_report, gaps, merge_progressions, merge_progressions_count, tail_max_gap, CloseMapReport, GeneratorSet,
    SortedSpectrum,
};
pub use recovery::{recover, BoundaryProfile, PeelParams, PeelStep, RecoveryReport};
pub use spectra::{NoiseKind, NoiseModel, Source, SourceSpec, Truncation, WeightSpec};
