//! Self-contained deterministic pseudo-random generator.
//!
//! Reproducibility across runs, platforms, and thread counts is part of the
//! public contract, so the generator is pinned here rather than delegated to
//! a library whose stream might change between versions. The state transition
//! is the splitmix64 finalizer: state advances by the odd constant
//! 0x9E3779B97F4A7C15, and each output is the advanced state mixed by two
//! xor-shift-multiply rounds (0xBF58476D1CE4E5B9, 0x94D049BB133111EB).
//! Identical seeds give identical streams, forever.

/// Odd constant used both for state advancement and stream derivation.
pub const STREAM_CONSTANT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed for the stream of the index-th instance under a master seed.
pub fn stream_seed(master_seed: u64, index: u64) -> u64 {
    master_seed ^ index.wrapping_mul(STREAM_CONSTANT)
}

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(STREAM_CONSTANT);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in 0..bound via unbiased rejection on the widening
    /// multiply. bound must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        loop {
            let x = self.next_u64();
            let wide = (x as u128) * (bound as u128);
            let low = wide as u64;
            if low >= bound.wrapping_neg() % bound {
                return (wide >> 64) as u64;
            }
        }
    }

    pub fn next_usize_below(&mut self, bound: usize) -> usize {
        self.next_below(bound as u64) as usize
    }

    /// Fisher-Yates shuffle, uniform given a uniform generator.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_usize_below(i + 1);
            items.swap(i, j);
        }
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.next_usize_below(items.len())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_frozen() {
        // Pinned outputs; a change here breaks every seeded artifact.
        let mut rng = Rng::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn bounded_draws_are_in_range() {
        let mut rng = Rng::new(7);
        for _ in 0..1000 {
            assert!(rng.next_below(13) < 13);
        }
        assert_eq!(rng.next_below(1), 0);
    }

    #[test]
    fn identical_seeds_identical_shuffles() {
        let mut a: Vec<u32> = (0..100).collect();
        let mut b = a.clone();
        Rng::new(99).shuffle(&mut a);
        Rng::new(99).shuffle(&mut b);
        assert_eq!(a, b);
        let mut c: Vec<u32> = (0..100).collect();
        Rng::new(100).shuffle(&mut c);
        assert_ne!(a, c);
    }

    #[test]
    fn stream_seeds_differ_per_index() {
        let s0 = stream_seed(5, 0);
        let s1 = stream_seed(5, 1);
        let s2 = stream_seed(5, 2);
        assert_eq!(s0, 5);
        assert_ne!(s1, s2);
        assert_eq!(s1, 5 ^ STREAM_CONSTANT);
    }
}
