//! The "Superduper" linear congruential generator.
//!
//! `S_i = (69069 * S_{i-1} + 1) mod 2^32`, and each step of the lattice walk
//! takes its sign from the freshly advanced state: `+1` when `S_i > 2^31`,
//! `-1` otherwise. The recurrence and the threshold are part of the
//! reproducibility contract and must not change.

/// LCG multiplier.
pub const MULTIPLIER: u32 = 69069;
/// LCG increment.
pub const INCREMENT: u32 = 1;
/// Sign threshold; states strictly above it map to `+1`.
pub const SIGN_THRESHOLD: u32 = 1 << 31;
/// Additive stride between replication substreams (odd, so injective mod 2^32).
pub const SUBSTREAM_STRIDE: u32 = 0x9E37_79B9;

/// One application of the recurrence.
#[inline]
pub const fn next_state(s: u32) -> u32 {
    s.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT)
}

/// Pure form of [`RngState::bernoulli`]: advances once and returns the sign
/// derived from the new state.
#[inline]
pub fn bernoulli_step(s: RngState) -> (i32, RngState) {
    let mut next = s;
    let sign = next.bernoulli();
    (sign, next)
}

/// Starting state for replication `index` under `master_seed`:
/// `master_seed + SUBSTREAM_STRIDE * (index + 1) mod 2^32`.
pub fn substream(master_seed: u32, index: u64) -> RngState {
    let k = (index as u32).wrapping_add(1);
    RngState::new(master_seed.wrapping_add(SUBSTREAM_STRIDE.wrapping_mul(k)))
}

/// Current state `S_i` of the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngState {
    state: u32,
}

impl RngState {
    pub const fn new(seed: u32) -> Self {
        Self { state: seed }
    }

    pub const fn state(&self) -> u32 {
        self.state
    }

    /// Advances once and returns the new state.
    #[inline]
    pub fn advance(&mut self) -> u32 {
        self.state = next_state(self.state);
        self.state
    }

    /// Advances once and returns `+1` if the new state exceeds `2^31`, else `-1`.
    #[inline]
    pub fn bernoulli(&mut self) -> i32 {
        if self.advance() > SIGN_THRESHOLD {
            1
        } else {
            -1
        }
    }

    /// Advances once and maps the new state to `[0, 1)`.
    ///
    /// Only used for placing starting walkers; the walk itself consumes
    /// signs exclusively.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        f64::from(self.advance()) / 4_294_967_296.0
    }
}
