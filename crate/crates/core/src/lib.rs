//! Streaming classification under concept drift.
//!
//! The crate is organised around the [`enhash`] learner, a projection-hash
//! ensemble that keeps decayed per-bucket class statistics and breaks ties by
//! distance to per-class bucket means. Around it sit:
//!
//! * [`stream`]: instances, stream descriptors and CSV ingestion,
//! * [`generators`]: deterministic synthetic drifting streams,
//! * [`metrics`]: prequential evaluation, Kappa statistics and RAM-hours,
//! * [`bench`]: experiment orchestration, sweeps and report rendering.

pub mod bench;
pub mod enhash;
mod error;
pub mod generators;
pub mod metrics;
pub mod stream;

pub use enhash::{EnhashConfig, EnhashModel, Prediction, Variant};
pub use error::{Error, Result};
pub use stream::{ClassId, LabeledInstance, StreamDescriptor};
