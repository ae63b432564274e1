//! Scalar types the library can be instantiated with.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point type carrying the max-plus arithmetic.
///
/// Every operation in the crate reduces to `max`, `min`, `+` and `-` on
/// values of this type, so both `f32` and `f64` work. The tolerances below
/// are the defaults used when a caller does not pass its own.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Default sup-norm tolerance for membership tests and solver stops.
    fn default_tol() -> Self;

    /// Pitch of the lattice iterates are snapped to for cycle detection.
    fn cycle_grid() -> Self;

    /// Lossy conversion used when reporting values in error payloads.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }

    fn cycle_grid() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-5
    }

    fn cycle_grid() -> Self {
        1e-6
    }
}
