//! Clock abstraction so the solvers can be timed without depending on std.

use core::time::Duration;

/// Source of monotonic timestamps.
///
/// Implementations report time elapsed since an arbitrary fixed origin; only
/// differences between two readings are meaningful. The `cordon` companion
/// crate provides a wall clock backed by `std::time::Instant`.
pub trait Clock {
    /// Time elapsed since the clock's origin.
    fn now(&self) -> Duration;
}

/// Clock that always reads zero, for contexts where timing is irrelevant
/// (tests, no_std targets without a time source).
#[derive(Clone, Copy, Debug, Default)]
pub struct NullClock;

impl Clock for NullClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

impl<C: Clock + ?Sized> Clock for &C {
    fn now(&self) -> Duration {
        (**self).now()
    }
}
