use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// An optional wall-clock limit for long generator constructions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Self(None)
    }

    pub fn at(instant: Instant) -> Self {
        Self(Some(instant))
    }

    pub fn after(budget: Duration) -> Self {
        Self(Instant::now().checked_add(budget))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }

    pub fn check(&self) -> Result<()> {
        if self.expired() {
            Err(Error::DeadlineExceeded)
        } else {
            Ok(())
        }
    }
}
