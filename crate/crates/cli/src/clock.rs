//! Wall-clock implementation of the core [`Clock`] contract.

use std::time::Instant;

use cordon_core::clock::Clock;

/// Monotonic wall clock. Each instance measures elapsed time from its own
/// creation, which is all the planner needs: it only ever takes differences.
#[derive(Debug, Clone)]
pub struct WallClock {
    origin: Instant,
}

impl WallClock {
    pub fn new() -> WallClock {
        WallClock { origin: Instant::now() }
    }
}

impl Default for WallClock {
    fn default() -> WallClock {
        WallClock::new()
    }
}

impl Clock for WallClock {
    fn now(&self) -> core::time::Duration {
        self.origin.elapsed()
    }
}
