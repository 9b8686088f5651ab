//! File formats, synthetic data, evaluation and batch running.

pub mod batch;
pub mod eval;
pub mod io;
pub mod output;
pub mod synth;
