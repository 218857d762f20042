//! Billboard slot selection under a total budget and per-zone influence
//! demands.
//!
//! Build an [`model::Instance`] from raw files with [`ingest`] or
//! synthetically with [`datagen`], then hand it to one of the [`solvers`].

pub mod cli;
pub mod datagen;
pub mod error;
pub mod influence;
pub mod ingest;
pub mod model;
pub mod solvers;

pub use error::{Error, Result};
