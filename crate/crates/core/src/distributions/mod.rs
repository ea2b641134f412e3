//! One-dimensional laws, discrete measures and convex shapes.

mod law;
mod sample;
mod shape;

pub use law::*;
pub use sample::WeightedSample;
pub use shape::{ConvexShape, Slices};
