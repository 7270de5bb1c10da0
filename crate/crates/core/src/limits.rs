//! Process-wide enumeration cap.
//!
//! Operations that list every element of a group refuse to run when the
//! group order exceeds the cap.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Environment variable read by [`apply_env_override`].
pub const ENUMERATION_CAP_ENV: &str = "XRAT_ENUM_CAP";

static ENUMERATION_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ENUMERATION_CAP);

pub fn enumeration_cap() -> usize {
    ENUMERATION_CAP.load(Ordering::Relaxed)
}

pub fn set_enumeration_cap(cap: usize) {
    ENUMERATION_CAP.store(cap, Ordering::Relaxed);
}

/// Installs the cap from `XRAT_ENUM_CAP` when it is set.
pub fn apply_env_override() -> Result<()> {
    if let Ok(raw) = std::env::var(ENUMERATION_CAP_ENV) {
        let cap = raw.trim().parse::<usize>().map_err(|_| {
            Error::Input(format!("{ENUMERATION_CAP_ENV} must be a positive integer, got `{raw}`"))
        })?;
        set_enumeration_cap(cap);
    }
    Ok(())
}

pub(crate) fn check_cap(order: u128) -> Result<()> {
    let cap = enumeration_cap();
    if order > cap as u128 {
        return Err(Error::CapExceeded { order, cap });
    }
    Ok(())
}
