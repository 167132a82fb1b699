use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Optional wall-clock limit checked cooperatively by long computations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Some(Instant::now() + budget))
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn instant(&self) -> Option<Instant> {
        self.0
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }

    pub fn check(&self, phase: &'static str) -> Result<()> {
        if self.expired() {
            Err(Error::Timeout { phase })
        } else {
            Ok(())
        }
    }
}
