//! Ordered configuration spaces of finite graphs as cube complexes, their
//! exact integral homology, and checks of the stabilization phenomena for
//! families of graphs.

pub mod cache;
pub mod complex;
pub mod error;
pub mod graph;
pub mod homology;
pub mod lab;
pub mod rep;
pub mod serde_num;

pub use error::{Error, Result};
