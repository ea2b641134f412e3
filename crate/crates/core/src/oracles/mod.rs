//! Independent checks: linear programs for the dual representations,
//! Monte Carlo support values, and a quadrature route for the maximum extension.

mod duals;
mod monte_carlo;
mod quadrature;
mod simplex;

pub use duals::*;
pub use monte_carlo::*;
pub use quadrature::alpha_m_direct;
pub use simplex::*;

#[cfg(test)]
mod tests;
