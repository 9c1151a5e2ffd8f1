//! Size limits for objects that live in the full `d^n`-dimensional space.
//!
//! The compressed path never consults these; they only guard the dense
//! oracle and the explicit full-space vectors.

use crate::error::{Error, Result};

/// Default cap on `d^n` for full-space vectors and index sets.
pub const FULL_CAP_DEFAULT: u128 = 1 << 20;

/// Upper bound accepted for the `SYMKRON_MAX_FULL` override.
pub const FULL_CAP_MAX: u128 = 1 << 24;

/// Cap on `d^n` for explicitly built Kronecker matrices.
pub const EXPLICIT_CAP: u128 = 1 << 12;

pub const ENV_MAX_FULL: &str = "SYMKRON_MAX_FULL";

/// Effective full-space cap: `SYMKRON_MAX_FULL` if set and parseable,
/// clamped to [`FULL_CAP_MAX`], otherwise [`FULL_CAP_DEFAULT`].
pub fn full_cap() -> u128 {
    std::env::var(ENV_MAX_FULL)
        .ok()
        .and_then(|s| s.trim().parse::<u128>().ok())
        .map(|v| v.min(FULL_CAP_MAX))
        .unwrap_or(FULL_CAP_DEFAULT)
}

/// `d^n` as a `u128`, or `None` if it does not fit.
pub fn full_len(dim: usize, order: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..order {
        acc = acc.checked_mul(dim as u128)?;
    }
    Some(acc)
}

pub(crate) fn check_cap(what: &'static str, dim: usize, order: usize, cap: u128) -> Result<usize> {
    match full_len(dim, order) {
        Some(len) if len <= cap => Ok(len as usize),
        Some(len) => Err(Error::CapExceeded { what, len, cap }),
        None => Err(Error::CapExceeded {
            what,
            len: u128::MAX,
            cap,
        }),
    }
}

/// Checks `d^n` against [`full_cap`] and returns it.
pub fn check_full(what: &'static str, dim: usize, order: usize) -> Result<usize> {
    check_cap(what, dim, order, full_cap())
}

/// Checks `d^n` against [`EXPLICIT_CAP`] and returns it.
pub fn check_explicit(what: &'static str, dim: usize, order: usize) -> Result<usize> {
    check_cap(what, dim, order, EXPLICIT_CAP)
}
