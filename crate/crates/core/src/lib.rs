//! Performance analysis of dual-hop project-and-forward relaying over a
//! MIMO-pinhole first hop and a Rayleigh second hop.
//!
//! - [`special`]: gamma products, `K_ν`, digamma, and Meijer G-functions of one
//!   and two variables evaluated on automatically placed Mellin-Barnes contours.
//! - [`analysis`]: SNR densities, outage probability and ergodic capacity
//!   (truncated series and asymptotes).
//! - [`montecarlo`]: channel simulator used as ground truth.

pub mod analysis;
pub mod error;
pub mod montecarlo;
pub mod special;

pub use error::{Error, Result};
