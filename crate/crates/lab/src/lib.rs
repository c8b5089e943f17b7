//! File formats, reports and experiment drivers around `nodal-core`.
//!
//! Ensembles are stored as JSON documents of the form
//!
//! ```json
//! {"terms": [{"a": 1.0, "kx": 1.0, "ky": 0.0, "theta": 0.0}]}
//! ```
//!
//! Sign fields are written as binary PGM images and scaling runs as CSV with
//! the header `r,plain,certified,seconds`.

pub mod ensemble;
mod error;
pub mod pgm;
pub mod report;
pub mod scaling;

pub use error::{LabError, Result};
