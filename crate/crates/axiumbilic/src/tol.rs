//! Global tolerance scale.
//!
//! Every tolerance in the crate is a fixed base value times this factor
//! (default 1). The command-line front end sets it from `AXI_TOL`.

use std::sync::atomic::{AtomicU64, Ordering};

static SCALE_BITS: AtomicU64 = AtomicU64::new(0x3FF0_0000_0000_0000); // 1.0

pub fn scale() -> f64 {
    f64::from_bits(SCALE_BITS.load(Ordering::Relaxed))
}

/// Sets the factor; non-positive or non-finite values are rejected.
pub fn set_scale(v: f64) -> bool {
    if v.is_finite() && v > 0.0 {
        SCALE_BITS.store(v.to_bits(), Ordering::Relaxed);
        true
    } else {
        false
    }
}

pub fn tol(base: f64) -> f64 {
    base * scale()
}
