//! Round-based Trickle timer.
//!
//! Intervals are counted in rounds. On an inconsistency the interval and
//! both bounds collapse to one round; on expiry the interval doubles up to
//! [`I_MAX_CAP`] and the bounds follow it.

use rand::Rng;
use serde::Serialize;

pub const I_MIN: u32 = 1;
pub const I_MAX_CAP: u32 = 1 << 16;
pub const INITIAL_INTERVAL: u32 = 2 * I_MIN;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrickleState {
    pub i_min: u32,
    pub i_max: u32,
    pub current_interval: u32,
    pub counter: u32,
    pub k: u32,
    pub t: u32,
}

/// Draws a transmission time in `[interval/2, interval)`, at least 1.
pub fn sample_t<R: Rng + ?Sized>(interval: u32, rng: &mut R) -> u32 {
    if interval < 2 {
        1
    } else {
        rng.gen_range(interval / 2..interval)
    }
}

impl TrickleState {
    pub fn new<R: Rng + ?Sized>(k: u32, rng: &mut R) -> Self {
        TrickleState {
            i_min: I_MIN,
            i_max: I_MAX_CAP,
            current_interval: INITIAL_INTERVAL,
            counter: 0,
            k,
            t: sample_t(INITIAL_INTERVAL, rng),
        }
    }

    /// True when this round is a transmission slot and the node has not
    /// yet heard `k` consistent messages.
    pub fn should_transmit(&self, round: u32) -> bool {
        round % self.t == 0 && self.counter < self.k
    }

    pub fn on_consistent(&mut self) {
        self.counter += 1;
    }

    pub fn on_inconsistent<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.counter = 0;
        self.current_interval = 1;
        self.i_min = 1;
        self.i_max = 1;
        self.t = sample_t(self.current_interval, rng);
    }

    /// Interval bookkeeping at the end of the node's turn. Returns true
    /// when the interval expired this round.
    pub fn on_round_end<R: Rng + ?Sized>(&mut self, round: u32, rng: &mut R) -> bool {
        if round % self.current_interval != 0 {
            return false;
        }
        self.counter = 0;
        self.current_interval = (self.current_interval.saturating_mul(2)).min(I_MAX_CAP);
        self.i_min = self.current_interval / 2;
        self.i_max = self.current_interval;
        self.t = sample_t(self.current_interval, rng);
        true
    }
}
