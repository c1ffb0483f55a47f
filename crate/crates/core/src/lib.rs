//! Physical action classification from multi-channel surface EMG.
//!
//! The pipeline runs envelope preprocessing and overlapping segmentation
//! ([`preprocess`]), per-frame feature extraction ([`features`]), fold-local
//! normalization, selection and PCA ([`pipeline`]), k-NN / SVM / ELM
//! classification ([`classify`]) and cross-validated evaluation ([`eval`]).

pub mod classify;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
mod fft;
pub mod ingest;
pub mod pipeline;
pub mod preprocess;
pub mod seed;

pub use error::{Error, Result};
