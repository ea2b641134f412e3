pub mod cli;
pub mod distributions;
pub mod error;
pub mod geometry;
pub mod numeric;
pub mod oracles;
pub mod risk;
pub mod rng;
pub mod transforms;
