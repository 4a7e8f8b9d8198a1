//! ℓ1 distances through an approximate unary embedding into ℓ2².
//!
//! The unary code `1^x 0^{u−x}` turns `|x − y|` into a squared ℓ2 distance.
//! Sketching that code with a single-sketch-style fold of `L` pair-compressors
//! gives a `d`-dimensional vector `ψ(x)`; [`UnaryProjector`] computes it in
//! `O(L)` map applications without materialising the code, because a half of
//! the fold is either all zeros or all ones at every level, and the sketches
//! `sᵢ` of all-ones halves are precomputed.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{param, usage, Result};
use crate::jl::{draw_compressor, projector_levels, PairCompressor, Regime, SeedStream, SketchParams};
use crate::l2::ENGINE_FAMILY;
use crate::oracle::exact_values;
use crate::profile::{DistanceProfile, Metric};
use crate::sketch::{aligned_profile, MapFamily};

#[derive(Debug)]
pub struct UnaryProjector {
    d: usize,
    universe: u64,
    padded: u64,
    maps: Vec<PairCompressor>,
    /// `ones[i]` is the image of the all-ones vector of length `d·2^i`.
    ones: Vec<Vec<f64>>,
    cache: Mutex<HashMap<u64, Vec<f64>>>,
}

/// Draws the `L = ⌈log₂(u/d)⌉` maps `φ′₁ … φ′_L` and the all-ones sketches.
pub fn l1_preprocess(universe: u64, d: usize, sigma: usize, stream: &SeedStream) -> Result<UnaryProjector> {
    if universe == 0 || d == 0 {
        return param("universe and d must be positive");
    }
    let levels = projector_levels(universe, d);
    let maps = (1..=levels)
        .into_par_iter()
        .map(|i| draw_compressor(&stream.index(i as u64), d, sigma))
        .collect::<Result<Vec<_>>>()?;
    let mut ones = Vec::with_capacity(levels + 1);
    ones.push(vec![1.0; d]);
    for phi in &maps {
        let prev = ones.last().unwrap();
        let next = phi.apply(prev, prev)?;
        ones.push(next);
    }
    Ok(UnaryProjector {
        d,
        universe,
        padded: (d as u64) << levels,
        maps,
        ones,
        cache: Mutex::new(HashMap::new()),
    })
}

impl UnaryProjector {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    /// `d·2^L`, the smallest such value `≥ universe`.
    pub fn padded_universe(&self) -> u64 {
        self.padded
    }

    pub fn levels(&self) -> usize {
        self.maps.len()
    }

    /// Map `φ′_level` (1-based).
    pub fn map(&self, level: usize) -> &PairCompressor {
        &self.maps[level - 1]
    }

    pub fn ones_sketch(&self, level: usize) -> &[f64] {
        &self.ones[level]
    }

    /// Image of `1^x 0^{d·2^c − x}` under the level-`c` fold.
    ///
    /// Walks the binary choices from the top level down, then applies the
    /// maps bottom-up: a left branch pairs with zeros, a right branch with
    /// the all-ones sketch of the level below.
    pub fn project(&self, x: u64, level: usize) -> Result<Vec<f64>> {
        if level > self.levels() {
            return usage(format!("level {level} exceeds projector depth {}", self.levels()));
        }
        let span = (self.d as u64) << level;
        if x > span {
            return usage(format!("value {x} exceeds the level-{level} span {span}"));
        }
        let mut right = Vec::with_capacity(level);
        let mut rem = x;
        for c in (1..=level).rev() {
            let half = (self.d as u64) << (c - 1);
            if rem < half {
                right.push(false);
            } else {
                rem -= half;
                right.push(true);
            }
        }
        let mut v = unary_block(rem as usize, self.d);
        let zeros = vec![0.0; self.d];
        for (c, &is_right) in (1..=level).zip(right.iter().rev()) {
            v = if is_right {
                self.map(c).apply(&self.ones[c - 1], &v)?
            } else {
                self.map(c).apply(&v, &zeros)?
            };
        }
        Ok(v)
    }

    /// `ψ(x)` for `x` in `[0, universe)`, memoised.
    pub fn psi(&self, x: u64) -> Result<Vec<f64>> {
        if x >= self.universe {
            return usage(format!("value {x} is outside [0, {})", self.universe));
        }
        if let Some(v) = self.cache.lock().unwrap().get(&x) {
            return Ok(v.clone());
        }
        let v = self.project(x, self.levels())?;
        self.cache.lock().unwrap().entry(x).or_insert_with(|| v.clone());
        Ok(v)
    }

    pub fn cached_values(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

fn unary_block(x: usize, d: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[..x].fill(1.0);
    v
}

/// Approximate ℓ1 profile over values in `[0, universe)`.
pub fn l1_profile(text: &[u64], pattern: &[u64], universe: u64, params: &SketchParams) -> Result<DistanceProfile> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || n < m {
        return usage(format!("need 1 <= m <= n; got n={n}, m={m}"));
    }
    if params.regime != (Regime::L1 { universe }) {
        return usage(format!(
            "l1_profile needs parameters derived for the ℓ1 regime with universe {universe}"
        ));
    }
    if params.n != n || params.m != m {
        return usage(format!(
            "parameters were derived for n={}, m={} but inputs have n={n}, m={m}",
            params.n, params.m
        ));
    }
    if let Some(&v) = text.iter().chain(pattern).find(|&&v| v >= universe) {
        return usage(format!("value {v} is outside [0, {universe})"));
    }
    params.validate()?;
    if params.uses_fallback() {
        let values = exact_values(text, pattern, Metric::L1)?;
        return Ok(DistanceProfile::exact(Metric::L1, values, Some(*params)));
    }

    let d = params.d;
    let projector = l1_preprocess(
        universe,
        d,
        params.embed_sigma(),
        &SeedStream::new(params.master_seed, "projector"),
    )?;
    let mut distinct: Vec<u64> = text.iter().chain(pattern).copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let images: HashMap<u64, Vec<f64>> = distinct
        .into_par_iter()
        .map(|x| projector.psi(x).map(|v| (x, v)))
        .collect::<Result<_>>()?;
    let embed = |word: &[u64]| -> Vec<f64> {
        let mut out = vec![0.0; word.len() * d];
        out.par_chunks_mut(d)
            .zip(word.par_iter())
            .for_each(|(block, x)| block.copy_from_slice(&images[x]));
        out
    };
    let family = MapFamily::for_engine(params.master_seed, ENGINE_FAMILY, d, params.sigma, params.k)?;
    let values = aligned_profile(&embed(text), &embed(pattern), &family)?;
    Ok(DistanceProfile::estimated(Metric::L1, values, *params))
}
