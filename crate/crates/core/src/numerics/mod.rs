//! Numerical building blocks: adaptive ODE stepping, quadrature, root finding.

pub mod ode;
pub mod quad;
pub mod roots;

pub use ode::{integrate, Dopri5, Tolerance};
pub use quad::{simpson_uniform, uniform_spacing};
pub use roots::brent;
