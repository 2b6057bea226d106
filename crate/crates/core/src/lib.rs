//! Leader-follower analysis of mixed EV/ICEV adaptive-cruise platoons:
//! trajectory ingest, kinematics, DTW similarity, traffic efficiency,
//! surrogate safety and microscopic emissions.

// `!(x > 0.0)` style guards are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod efficiency;
pub mod emissions;
pub mod error;
pub mod format;
pub mod ingest;
pub mod kinematics;
pub mod pipeline;
pub mod report;
pub mod safety;
pub mod similarity;
pub mod stats;
pub mod synthetic;

pub use error::{Error, ErrorKind, Result};
