//! Hamming distances through a random binary character embedding.
//!
//! Each token `c` is mapped to a uniform random vector `μ(c) ∈ {0,1}^d`; for
//! distinct tokens `‖μ(a) − μ(b)‖²` concentrates around `d/2`, so the ℓ2²
//! distance between embedded words, scaled by `2/d`, estimates their Hamming
//! distance. Every alignment of the original strings lands on a block
//! boundary of the embedded ones, so no edge handling is needed.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::jl::{Regime, SeedStream, SketchParams};
use crate::l2::ENGINE_FAMILY;
use crate::oracle::exact_values;
use crate::profile::{DistanceProfile, Metric};
use crate::sketch::{aligned_profile, MapFamily};

/// Lazily realised map `μ` from tokens to `{0,1}^d`.
#[derive(Debug, Clone)]
pub struct CharEmbedder {
    d: usize,
    stream: SeedStream,
    cache: HashMap<i64, Vec<f64>>,
}

impl CharEmbedder {
    pub fn new(d: usize, seed: u64) -> Self {
        CharEmbedder {
            d,
            stream: SeedStream::new(seed, "mu"),
            cache: HashMap::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    fn draw(&self, token: i64) -> Vec<f64> {
        let mut rng = self.stream.child(token.to_le_bytes()).rng();
        (0..self.d)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { 0.0 })
            .collect()
    }

    /// Realises the codes of every token in `tokens` not seen before.
    pub fn prepare(&mut self, tokens: &[i64]) {
        let mut fresh: Vec<i64> = tokens
            .iter()
            .copied()
            .filter(|t| !self.cache.contains_key(t))
            .collect();
        fresh.sort_unstable();
        fresh.dedup();
        let codes: Vec<(i64, Vec<f64>)> = fresh
            .into_par_iter()
            .map(|t| (t, self.draw(t)))
            .collect();
        self.cache.extend(codes);
    }

    pub fn code(&mut self, token: i64) -> &[f64] {
        if !self.cache.contains_key(&token) {
            let code = self.draw(token);
            self.cache.insert(token, code);
        }
        &self.cache[&token]
    }

    /// `μ(c₁) … μ(c_L)` as one sequence of `L·d` values.
    pub fn embed_word(&mut self, word: &[i64]) -> Vec<f64> {
        self.prepare(word);
        let d = self.d;
        let mut out = vec![0.0; word.len() * d];
        out.par_chunks_mut(d.max(1))
            .zip(word.par_iter())
            .for_each(|(block, t)| block.copy_from_slice(&self.cache[t]));
        out
    }

    pub fn distinct_tokens(&self) -> usize {
        self.cache.len()
    }
}

/// Approximate Hamming profile of `pattern` against `text`.
pub fn hamming_profile(text: &[i64], pattern: &[i64], params: &SketchParams) -> Result<DistanceProfile> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || n < m {
        return usage(format!("need 1 <= m <= n; got n={n}, m={m}"));
    }
    if params.regime != Regime::Hamming {
        return usage("hamming_profile needs parameters derived for the Hamming regime");
    }
    if params.n != n || params.m != m {
        return usage(format!(
            "parameters were derived for n={}, m={} but inputs have n={n}, m={m}",
            params.n, params.m
        ));
    }
    params.validate()?;
    if params.uses_fallback() {
        let values = exact_values(text, pattern, Metric::Hamming)?;
        return Ok(DistanceProfile::exact(Metric::Hamming, values, Some(*params)));
    }

    let d = params.d;
    let mut embedder = CharEmbedder::new(d, params.master_seed);
    embedder.prepare(text);
    embedder.prepare(pattern);
    let text_emb = embedder.embed_word(text);
    let pattern_emb = embedder.embed_word(pattern);
    let family = MapFamily::for_engine(params.master_seed, ENGINE_FAMILY, d, params.sigma, params.k)?;
    let scale = 2.0 / d as f64;
    let values = aligned_profile(&text_emb, &pattern_emb, &family)?
        .into_iter()
        .map(|v| scale * v)
        .collect();
    Ok(DistanceProfile::estimated(Metric::Hamming, values, *params))
}
