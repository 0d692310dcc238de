//! Exact and asymptotic interval estimation for the crosswise model.

pub mod ci_asymptotic;
pub mod ci_exact;
pub mod error;
pub mod evaluation;
pub mod model;
pub mod numkernel;
pub mod privacy;
pub mod sample_size;

pub use ci_asymptotic::{ap_interval, wp_interval};
pub use ci_exact::{cp_interval, ConfidenceLevel, IntervalEstimate, Method};
pub use error::{Error, Result};
pub use model::{ModelConfig, ObservedCount};
pub use numkernel::Probability;
