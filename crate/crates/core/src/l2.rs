//! Approximate ℓ2 text-to-pattern distances.
//!
//! Every alignment `t` splits into three parts. With `t₁` the first multiple
//! of `h` at or after `t` and `o = t₁ − t`:
//!
//! * head `T[t..t₁)` vs `P[0..o)`, summed exactly;
//! * core `T[t₁..t₁+m′)` vs `P[o..o+m′)`, estimated from sketches;
//! * tail `T[t₁+m′..t+m)` vs `P[o+m′..m)`, summed exactly.
//!
//! The core length `m′` is a multiple of `d`, so the core of `T` starts on a
//! block boundary of the text shifted by `t₁ mod d` (one [`all_sketch`] run
//! per shift `r·h`), and the core of `P` is the prefix of the pattern shifted
//! by `o` (one [`single_sketch`] run per offset `0..=h`).

use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::jl::{Regime, SketchParams};
use crate::oracle::exact_values;
use crate::profile::{DistanceProfile, Metric};
use crate::sketch::{
    all_sketch, decompose_blocks, estimate_aligned_l2sq, pad_to_power_of_two, single_sketch,
    MapFamily, SketchPyramid,
};

/// Family id of the maps shared by text and pattern pyramids.
pub const ENGINE_FAMILY: u64 = 0;

/// ℓ2² profile of `pattern` against `text`. Use [`DistanceProfile::into_l2`]
/// for plain ℓ2 distances.
pub fn l2_profile(text: &[f64], pattern: &[f64], params: &SketchParams) -> Result<DistanceProfile> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || n < m {
        return usage(format!("need 1 <= m <= n; got n={n}, m={m}"));
    }
    if params.regime != Regime::L2 {
        return usage("l2_profile needs parameters derived for the ℓ2 regime");
    }
    if params.n != n || params.m != m {
        return usage(format!(
            "parameters were derived for n={}, m={} but inputs have n={n}, m={m}",
            params.n, params.m
        ));
    }
    params.validate()?;
    if params.uses_fallback() {
        let values = exact_values(text, pattern, Metric::L2Sq)?;
        return Ok(DistanceProfile::exact(Metric::L2Sq, values, Some(*params)));
    }

    let (d, h) = (params.d, params.h);
    let core = params.core_length();
    let core_blocks = core / d;
    let parts = decompose_blocks(core_blocks)?;
    let family = MapFamily::for_engine(params.master_seed, ENGINE_FAMILY, d, params.sigma, params.k)?;

    let pattern_pyramids: Vec<SketchPyramid> = (0..=h)
        .into_par_iter()
        .map(|o| {
            let fragment = pad_to_power_of_two(pattern[o..o + core].to_vec(), d);
            single_sketch(&fragment, &family).map(|p| p.with_origin(o))
        })
        .collect::<Result<_>>()?;

    let text_pyramids: Vec<SketchPyramid> = (0..d / h)
        .into_par_iter()
        .map(|r| {
            let start = r * h;
            let blocks = (n - start.min(n)) / d;
            all_sketch(&text[start..start + blocks * d], &family).map(|p| p.with_origin(start))
        })
        .collect::<Result<_>>()?;

    let values = (0..=n - m)
        .into_par_iter()
        .map(|t| {
            let t1 = t.div_ceil(h) * h;
            let offset = t1 - t;
            let head = partial_l2sq(&text[t..t1], &pattern[..offset]);
            let tail = partial_l2sq(&text[t1 + core..t + m], &pattern[offset + core..]);
            let text_pyr = &text_pyramids[(t1 % d) / h];
            let start_block = (t1 - text_pyr.origin()) / d;
            let middle =
                estimate_aligned_l2sq(text_pyr, &pattern_pyramids[offset], start_block, &parts)?;
            Ok(head + middle + tail)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DistanceProfile::estimated(Metric::L2Sq, values, *params))
}

fn partial_l2sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}
