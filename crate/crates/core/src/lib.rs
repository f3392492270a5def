//! Exact symbolic verification of Dirac geometry on polynomial coordinate
//! patches: Dirac structures, their morphisms, D-Lie groupoids, principal
//! bundles and bibundles, and D-Lie algebroids.

pub mod symbolic;
pub mod error;
pub mod exterior;
pub mod linalg;

pub use error::{Error, Result};
pub mod linear_dirac;
pub mod report;
pub mod dirac;
pub mod dman;
pub mod chart;
pub mod groupoid;
pub mod bundles;
pub mod algebroid;
pub mod fixtures;
pub mod scene;
