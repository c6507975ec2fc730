//! Analog-spacetime optics toolkit.
//!
//! Maps static and expanding metrics onto dielectric index profiles, designs
//! the vapor-cell medium and control-beam intensities that realize them, and
//! simulates the Mach–Zehnder read-out of a photon crossing a medium that is
//! either definite or in a superposition of two index profiles.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// small fixed-size matrix and grid loops read better with indices
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod interferometer;
pub mod medium;
pub mod numerics;
pub mod profile;
pub mod propagation;
pub mod spacetime;
pub mod table;

pub use error::{Error, Result};
