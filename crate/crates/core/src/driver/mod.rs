//! End-to-end driver: LAS pre-check, `K` search, proof and batch runs.

pub mod las;
pub mod pipeline;
pub mod webbook;

pub use las::{las_check, LasOutcome, LasVerdict};
pub use pipeline::{prove, prove_k, Attempt, FaceCheck, PipelineResult, PipelineVerdict, ProveOptions, Timings};
pub use webbook::{webbook, ParamRange, WebbookReport, WebbookRow};
