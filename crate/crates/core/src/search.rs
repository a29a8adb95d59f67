use std::time::{Duration, Instant};

/// Wall-clock cutoff shared by the driver and the turbochargers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn never() -> Self {
        Deadline(None)
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Instant::now().checked_add(budget))
    }

    pub fn from_timeout(timeout: Option<Duration>) -> Self {
        timeout.map_or(Deadline::never(), Deadline::after)
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

/// Result of one turbocharger invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurboOutcome {
    /// The subordering was repaired in place and is extendable again.
    Success,
    /// No repair exists within the reconstruction budget; state untouched.
    Failure,
    /// The deadline fired mid-search; state untouched.
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct TimedOut;
