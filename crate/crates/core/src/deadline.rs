use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("solver ran past its deadline")]
pub struct Timeout;

/// Cooperative wall-clock budget polled by the solvers between iterations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(d: Duration) -> Self {
        Deadline(Instant::now().checked_add(d))
    }

    pub fn at(t: Instant) -> Self {
        Deadline(Some(t))
    }

    #[inline]
    pub fn check(&self) -> Result<(), Timeout> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(Timeout),
            _ => Ok(()),
        }
    }
}
