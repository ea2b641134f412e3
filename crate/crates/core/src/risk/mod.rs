//! Law-determined sublinear expectations of scalar laws.

mod dual;
mod eval;
mod spec;

pub use dual::*;
pub use eval::*;
pub use spec::*;

#[cfg(test)]
mod tests;
