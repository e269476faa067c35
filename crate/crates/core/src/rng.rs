//! Counter-based deterministic random number streams.
//!
//! Each stream is keyed by a (seed, stream index) pair and produces the same
//! sequence regardless of how work is partitioned across threads. The output
//! function is the splitmix64 finalizer, which passes standard statistical
//! batteries and is bitwise portable.

/// One independent random stream.
#[derive(Debug, Clone)]
pub struct Stream {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Stream {
    /// Stream `index` of the family identified by `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        // Decorrelate the key from both inputs before use.
        let key = mix(seed ^ mix(index.wrapping_mul(GOLDEN).wrapping_add(1)));
        Stream { state: key }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform double in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
