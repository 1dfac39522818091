//! Carries of digital sets in cyclic groups and the integers, Pollard-type
//! sumset bounds, and exhaustive verification of the extremal statements.

pub mod bounds;
pub mod carry;
pub mod error;
pub mod exact;
pub mod extremal;
pub mod pollard;
pub mod ring;

pub use error::{Error, Result};
