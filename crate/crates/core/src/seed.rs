//! Deterministic seed derivation for sweep trials.
//!
//! Every trial of every experiment gets its own RNG seed derived from the
//! experiment's master seed and the trial's position in the sweep. Derivation
//! is a fixed-width integer mix (SplitMix64), so results are identical across
//! platforms and independent of execution order — a requirement for running
//! trials in parallel and still producing byte-identical result tables.

/// One round of the SplitMix64 output function.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the RNG seed for one generation attempt of one trial.
///
/// `attempt` counts regeneration after a failed target placement (attempt 0 is
/// the first try), so retries draw fresh environments instead of looping on
/// the same impossible one.
pub fn derive_seed(master: u64, point_index: usize, trial: usize, attempt: usize) -> u64 {
    let mut state = master;
    // Absorb each coordinate through the mixer so that distinct
    // (master, point, trial, attempt) tuples land on distinct streams.
    for part in [point_index as u64, trial as u64, attempt as u64] {
        let mixed = splitmix64(&mut state);
        state = mixed ^ part.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
    splitmix64(&mut state)
}
