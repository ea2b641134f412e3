mod polygon;
mod support;
pub use polygon::*;
pub use support::*;
mod sweep;
pub use sweep::*;
