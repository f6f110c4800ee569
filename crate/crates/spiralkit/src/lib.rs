//! Spiral arcs of monotone curvature.

pub mod biarc;
pub mod chain;
pub mod clothoid;
pub mod construct;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod par;
pub mod selftest;
pub mod svg;
pub mod vogt;

pub use chain::{MultiArcCurve, Segment};
pub use error::{Error, ErrorClass, Reason, Result};
pub use geometry::{CurvatureElement, NormalizedEnds, Point, Similarity};
