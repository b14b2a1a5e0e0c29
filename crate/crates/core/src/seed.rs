//! Stable hashing and per-record random streams.
//!
//! Every random decision in the pipeline is drawn from a ChaCha8 stream
//! whose seed is a SHA-256 digest of the master seed and the identity of the
//! thing being generated. Nothing depends on scheduling order or platform
//! word size.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// The random stream type used throughout the crate.
pub type SeededRng = ChaCha8Rng;

/// Incremental, length-prefixed SHA-256 hasher.
///
/// Each part is tagged with its type and length so that `("ab", "c")` and
/// `("a", "bc")` never collide.
#[derive(Clone)]
pub struct StableHasher {
    inner: Sha256,
}

impl StableHasher {
    pub fn new(domain: &str) -> Self {
        Self {
            inner: Sha256::new(),
        }
        .str(domain)
    }

    pub fn u64(mut self, value: u64) -> Self {
        self.inner.update([0x01]);
        self.inner.update(value.to_le_bytes());
        self
    }

    pub fn str(self, value: &str) -> Self {
        self.bytes(value.as_bytes())
    }

    pub fn bytes(mut self, value: &[u8]) -> Self {
        self.inner.update([0x02]);
        self.inner.update((value.len() as u64).to_le_bytes());
        self.inner.update(value);
        self
    }

    pub fn finish(self) -> [u8; 32] {
        self.inner.finalize().into()
    }

    /// First eight digest bytes, little endian.
    pub fn finish_u64(self) -> u64 {
        let digest = self.finish();
        u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
    }
}

/// Hex-encoded SHA-256 of arbitrary bytes.
pub fn sha256_hex(data: &[u8]) -> String {
    let digest: [u8; 32] = Sha256::digest(data).into();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Seed for the first generation attempt of a record.
pub fn record_seed(master_seed: u64, subset: &str, index: u64) -> u64 {
    attempt_seed(master_seed, subset, index, 0)
}

/// Seed for a given generation attempt; attempt 0 is the record seed.
pub fn attempt_seed(master_seed: u64, subset: &str, index: u64, attempt: u32) -> u64 {
    StableHasher::new("record")
        .u64(master_seed)
        .str(subset)
        .u64(index)
        .u64(u64::from(attempt))
        .finish_u64()
}

pub fn rng_from_seed(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Maps a 64-bit hash onto `[0, 1)` using its top 53 bits.
pub fn unit_interval(hash: u64) -> f64 {
    (hash >> 11) as f64 / (1u64 << 53) as f64
}
