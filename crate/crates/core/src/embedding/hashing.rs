use super::{EmbeddingError, EmbeddingProvider};
use crate::text::tokenize;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const SIGN_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

fn fnv1a(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for b in seed.to_le_bytes().iter().chain(bytes) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

// splitmix64 finalizer; FNV alone distributes poorly in the low bits.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic offline embedder: hashed bag of tokens.
///
/// Each lowercase alphanumeric token lands in one of `dim` buckets with a
/// ±1 sign taken from an independent hash; counts accumulate and the result
/// is L2-normalized. Similarity therefore tracks lexical overlap. The output
/// is a pure function of `(text, dim, seed)`.
#[derive(Debug, Clone)]
pub struct HashingProvider {
    dim: usize,
    seed: u64,
    model_id: String,
}

impl HashingProvider {
    pub const DEFAULT_DIM: usize = 256;

    /// # Panics
    /// If `dim` is zero.
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        Self {
            dim,
            seed,
            model_id: Self::model_id_for(dim, seed),
        }
    }

    pub fn model_id_for(dim: usize, seed: u64) -> String {
        format!("hashing-bow-v1/dim={dim}/seed={seed}")
    }

    pub fn embed_one(&self, text: &str) -> Vec<f64> {
        let mut values = vec![0.0; self.dim];
        for token in tokenize(text) {
            let bytes = token.as_bytes();
            let bucket = (mix(fnv1a(self.seed, bytes)) % self.dim as u64) as usize;
            let sign = if mix(fnv1a(self.seed ^ SIGN_SALT, bytes)) >> 63 == 0 {
                1.0
            } else {
                -1.0
            };
            values[bucket] += sign;
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        values
    }
}

impl EmbeddingProvider for HashingProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed_nonempty(&self, texts: &[&str]) -> Result<Vec<Vec<f64>>, EmbeddingError> {
        Ok(texts.iter().map(|t| self.embed_one(t)).collect())
    }
}
