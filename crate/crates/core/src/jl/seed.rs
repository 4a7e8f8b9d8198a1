//! Keyed deterministic randomness.
//!
//! Every random choice in the engine is drawn from a [`SeedStream`], which is
//! a master seed plus a hierarchical label naming the consumer. The label is
//! hashed together with the seed to key a ChaCha generator, so independent
//! consumers never share a sequence and the order in which streams are opened
//! does not matter.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedStream {
    master_seed: u64,
    label: Vec<u8>,
}

impl SeedStream {
    pub fn new(master_seed: u64, label: impl AsRef<[u8]>) -> Self {
        let mut stream = SeedStream {
            master_seed,
            label: Vec::new(),
        };
        stream.push(label.as_ref());
        stream
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn label(&self) -> &[u8] {
        &self.label
    }

    /// Child stream whose label is this label extended by `part`.
    ///
    /// Parts are length-prefixed, so `("ab", "c")` and `("a", "bc")` differ.
    pub fn child(&self, part: impl AsRef<[u8]>) -> Self {
        let mut stream = self.clone();
        stream.push(part.as_ref());
        stream
    }

    /// Child stream labelled by an integer index.
    pub fn index(&self, i: u64) -> Self {
        self.child(i.to_le_bytes())
    }

    fn push(&mut self, part: &[u8]) {
        self.label
            .extend_from_slice(&(part.len() as u32).to_le_bytes());
        self.label.extend_from_slice(part);
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(self.master_seed.to_le_bytes());
        hasher.update(&self.label);
        ChaCha8Rng::from_seed(hasher.finalize().into())
    }
}
