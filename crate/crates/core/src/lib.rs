//! Placement of stationary monitors that cut every path from the border of an
//! occupancy grid to a set of target regions.
//!
//! The crate models the environment as a 4-connected occupancy grid
//! ([`grid`]), encodes the blocking problem as a flow network with split cells
//! ([`flownet`]), solves it with a preflow-push max-flow solver ([`maxflow`]),
//! and wraps the two placement strategies — one cut per target versus a single
//! merged cut — in [`planner`]. [`oracle`] holds independent checkers used to
//! validate solver output, and [`experiments`] drives the randomized sweeps
//! that compare the two strategies.
//!
//! The crate is `no_std` (with `alloc`); anything that needs an operating
//! system — wall clocks, files, threads — lives in the companion `cordon`
//! crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod clock;
pub mod experiments;
pub mod flownet;
pub mod grid;
pub mod maxflow;
pub mod oracle;
pub mod planner;
pub mod seed;
