//! Urn occupation state and per-day outcomes.

/// Occupation counts within one day.
///
/// Both restaurants hold one seed agent before any arrival is processed, so
/// `n_a >= 1` and `n_b >= 1` always, and `n_a + n_b` equals 2 plus the number
/// of arrivals so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnState {
    pub n_a: u64,
    pub n_b: u64,
}

impl UrnState {
    /// State at the start of a day: one seed agent on each side.
    pub fn day_start() -> Self {
        UrnState { n_a: 1, n_b: 1 }
    }

    pub fn total(self) -> u64 {
        self.n_a + self.n_b
    }

    /// Fraction of agents currently in restaurant A (seeds included).
    pub fn share_a(self) -> f64 {
        self.n_a as f64 / self.total() as f64
    }
}

/// Outcome of a single day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayResult {
    /// Arrivals that chose restaurant A; the seed agents are not counted.
    pub q_a: u64,
    /// Arrivals that chose restaurant B.
    pub q_b: u64,
    /// The day's fixed point `q_a / (q_a + q_b)`.
    pub p_a: f64,
}

impl DayResult {
    /// Fixed point of restaurant B.
    pub fn p_b(self) -> f64 {
        1.0 - self.p_a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn day_start_has_one_seed_each() {
        let s = UrnState::day_start();
        assert_eq!((s.n_a, s.n_b), (1, 1));
        assert_eq!(s.total(), 2);
        assert_eq!(s.share_a(), 0.5);
    }

    #[test]
    fn share_a_is_count_ratio() {
        let s = UrnState { n_a: 3, n_b: 1 };
        assert_eq!(s.share_a(), 0.75);
    }
}
