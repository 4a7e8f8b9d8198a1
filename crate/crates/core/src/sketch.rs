//! Sketch pyramids.
//!
//! A sequence is cut into blocks of `d` values (level 0). Level `i` holds
//! sketches of fragments spanning `2^i` blocks, each the image of two
//! level-`i−1` sketches under the level's pair-compressor `φᵢ`:
//!
//! * [`single_sketch`] folds disjoint pairs, so level `i` entry `j` covers
//!   blocks `[j·2^i, (j+1)·2^i)`;
//! * [`all_sketch`] folds every overlapping pair, so level `i` entry `j`
//!   covers blocks `[j, j + 2^i)`.
//!
//! Both use the same maps, so the sketch of a fragment does not depend on
//! which procedure produced it. Every level is retained, which lets a
//! fragment whose block count is not a power of two be covered by the
//! binary decomposition of its length (see [`decompose_blocks`]).

use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::jl::{draw_compressor, PairCompressor, SeedStream};

/// The maps `φ₁ … φ_k` shared by every pyramid that is to be compared.
#[derive(Debug, Clone)]
pub struct MapFamily {
    stream: SeedStream,
    d: usize,
    sigma: usize,
    compressors: Vec<PairCompressor>,
}

impl MapFamily {
    /// Draws `levels` independent compressors; map `i` (1-based) comes from
    /// the stream `stream/i`.
    pub fn draw(stream: &SeedStream, d: usize, sigma: usize, levels: usize) -> Result<Self> {
        let compressors = (1..=levels)
            .into_par_iter()
            .map(|i| draw_compressor(&stream.index(i as u64), d, sigma))
            .collect::<Result<Vec<_>>>()?;
        Ok(MapFamily {
            stream: stream.clone(),
            d,
            sigma,
            compressors,
        })
    }

    /// Family `family_id` of the engine, drawn from `("family", family_id, i)`.
    pub fn for_engine(master_seed: u64, family_id: u64, d: usize, sigma: usize, levels: usize) -> Result<Self> {
        Self::draw(
            &SeedStream::new(master_seed, "family").index(family_id),
            d,
            sigma,
            levels,
        )
    }

    /// Wraps already drawn compressors. All must share `d` and `sigma`.
    pub fn from_compressors(stream: SeedStream, compressors: Vec<PairCompressor>) -> Result<Self> {
        let (d, sigma) = match compressors.first() {
            Some(c) => (c.d(), c.sigma()),
            None => return usage("a family built from compressors needs at least one map"),
        };
        if compressors.iter().any(|c| c.d() != d || c.sigma() != sigma) {
            return usage("all compressors in a family must share d and sigma");
        }
        Ok(MapFamily {
            stream,
            d,
            sigma,
            compressors,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn levels(&self) -> usize {
        self.compressors.len()
    }

    /// Map for level `level` (1-based).
    pub fn map(&self, level: usize) -> &PairCompressor {
        &self.compressors[level - 1]
    }

    pub fn stream(&self) -> &SeedStream {
        &self.stream
    }

    fn key(&self) -> FamilyKey {
        FamilyKey {
            stream: self.stream.clone(),
            d: self.d,
            sigma: self.sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct FamilyKey {
    stream: SeedStream,
    d: usize,
    sigma: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SketchMode {
    Single,
    All,
}

/// All intermediate sketches of one [`single_sketch`] or [`all_sketch`] run.
#[derive(Debug, Clone)]
pub struct SketchPyramid {
    d: usize,
    mode: SketchMode,
    origin: usize,
    family: FamilyKey,
    /// `levels[i]` is a flat buffer of `entries(i) · d` values.
    levels: Vec<Vec<f64>>,
}

impl SketchPyramid {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> SketchMode {
        self.mode
    }

    /// Offset of block 0 within the source sequence.
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn with_origin(mut self, origin: usize) -> Self {
        self.origin = origin;
        self
    }

    /// Number of stored levels, including level 0.
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn entries(&self, level: usize) -> usize {
        self.levels.get(level).map_or(0, |l| l.len() / self.d)
    }

    pub fn entry(&self, level: usize, j: usize) -> Option<&[f64]> {
        let buf = self.levels.get(level)?;
        buf.get(j * self.d..(j + 1) * self.d)
    }

    /// Iterates the entries of one level in order.
    pub fn level(&self, level: usize) -> impl Iterator<Item = &[f64]> {
        self.levels
            .get(level)
            .map(|l| l.as_slice())
            .unwrap_or(&[])
            .chunks_exact(self.d)
    }

    /// Sketch of the fragment made of blocks `[start_block, start_block + 2^level)`.
    pub fn fragment(&self, level: usize, start_block: usize) -> Result<&[f64]> {
        let j = match self.mode {
            SketchMode::All => start_block,
            SketchMode::Single => {
                if !start_block.is_multiple_of(1usize << level) {
                    return usage(format!(
                        "block {start_block} is not aligned to a level-{level} entry"
                    ));
                }
                start_block >> level
            }
        };
        match self.entry(level, j) {
            Some(v) => Ok(v),
            None => usage(format!(
                "fragment at level {level}, block {start_block} is outside the pyramid"
            )),
        }
    }

    pub fn is_from(&self, family: &MapFamily) -> bool {
        self.family == family.key()
    }
}

fn check_blocks(len: usize, d: usize) -> Result<usize> {
    if !len.is_multiple_of(d) {
        return usage(format!("input length {len} is not a multiple of d={d}"));
    }
    Ok(len / d)
}

/// Folds disjoint pairs level by level until one vector remains.
///
/// The block count must be a power of two no larger than `2^levels`; callers
/// pad with zeros, which does not change the image of a linear map.
pub fn single_sketch(x: &[f64], family: &MapFamily) -> Result<SketchPyramid> {
    let d = family.d;
    let blocks = check_blocks(x.len(), d)?;
    if !blocks.is_power_of_two() {
        return usage(format!("block count {blocks} is not a power of two"));
    }
    let depth = blocks.trailing_zeros() as usize;
    if depth > family.levels() {
        return usage(format!(
            "{blocks} blocks need {depth} levels but the family has {}",
            family.levels()
        ));
    }
    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(x.to_vec());
    for i in 1..=depth {
        let phi = family.map(i);
        let prev: &Vec<f64> = &levels[i - 1];
        let mut next = vec![0.0; prev.len() / 2];
        next.par_chunks_mut(d).enumerate().for_each(|(j, out)| {
            let left = &prev[2 * j * d..(2 * j + 1) * d];
            let right = &prev[(2 * j + 1) * d..(2 * j + 2) * d];
            phi.apply_into(left, right, out);
        });
        levels.push(next);
    }
    Ok(SketchPyramid {
        d,
        mode: SketchMode::Single,
        origin: 0,
        family: family.key(),
        levels,
    })
}

/// Sketches every fragment of `2^i` consecutive blocks, for every level the
/// family provides.
pub fn all_sketch(x: &[f64], family: &MapFamily) -> Result<SketchPyramid> {
    let d = family.d;
    let blocks = check_blocks(x.len(), d)?;
    let mut levels = Vec::with_capacity(family.levels() + 1);
    levels.push(x.to_vec());
    for i in 1..=family.levels() {
        let span = 1usize << i;
        if blocks < span {
            break;
        }
        let count = blocks - span + 1;
        let half = span / 2;
        let phi = family.map(i);
        let prev: &Vec<f64> = &levels[i - 1];
        let mut next = vec![0.0; count * d];
        next.par_chunks_mut(d).enumerate().for_each(|(j, out)| {
            let left = &prev[j * d..(j + 1) * d];
            let right = &prev[(j + half) * d..(j + half + 1) * d];
            phi.apply_into(left, right, out);
        });
        levels.push(next);
    }
    Ok(SketchPyramid {
        d,
        mode: SketchMode::All,
        origin: 0,
        family: family.key(),
        levels,
    })
}

/// Exponents of the binary expansion of `block_count`, largest first.
pub fn decompose_blocks(block_count: usize) -> Result<Vec<usize>> {
    if block_count == 0 {
        return usage("block count must be positive");
    }
    Ok((0..usize::BITS as usize)
        .rev()
        .filter(|&b| block_count >> b & 1 == 1)
        .collect())
}

/// Sum over the decomposition of `‖v_text − v_pattern‖²`, where each term
/// compares the text fragment at the text cursor with the pattern fragment at
/// the pattern cursor. The pattern cursor starts at block 0.
pub fn estimate_aligned_l2sq(
    text: &SketchPyramid,
    pattern: &SketchPyramid,
    text_start_block: usize,
    decomposition: &[usize],
) -> Result<f64> {
    if text.family != pattern.family || text.d != pattern.d {
        return usage("text and pattern pyramids were built with different map families");
    }
    let mut text_cursor = text_start_block;
    let mut pattern_cursor = 0;
    let mut total = 0.0;
    for &level in decomposition {
        let a = text.fragment(level, text_cursor)?;
        let b = pattern.fragment(level, pattern_cursor)?;
        total += squared_distance(a, b);
        text_cursor += 1 << level;
        pattern_cursor += 1 << level;
    }
    Ok(total)
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}

/// Zero-pads a sequence of whole blocks up to the next power-of-two block count.
pub(crate) fn pad_to_power_of_two(mut x: Vec<f64>, d: usize) -> Vec<f64> {
    let blocks = x.len() / d;
    x.resize(blocks.next_power_of_two() * d, 0.0);
    x
}

/// `‖text[t·d ..] − pattern‖²` estimates for every block-aligned start `t`,
/// when both sequences are made of whole `d`-blocks.
pub(crate) fn aligned_profile(text: &[f64], pattern: &[f64], family: &MapFamily) -> Result<Vec<f64>> {
    let d = family.d();
    let n_blocks = check_blocks(text.len(), d)?;
    let m_blocks = check_blocks(pattern.len(), d)?;
    if m_blocks == 0 || m_blocks > n_blocks {
        return usage("pattern must span between 1 and n text blocks");
    }
    let text_pyr = all_sketch(text, family)?;
    let pattern_pyr = single_sketch(&pad_to_power_of_two(pattern.to_vec(), d), family)?;
    let parts = decompose_blocks(m_blocks)?;
    (0..=n_blocks - m_blocks)
        .into_par_iter()
        .map(|t| estimate_aligned_l2sq(&text_pyr, &pattern_pyr, t, &parts))
        .collect()
}
