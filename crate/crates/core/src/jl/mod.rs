//! Parameter derivation, keyed randomness and sparse pair-compressors.

mod compressor;
mod params;
mod seed;

pub use compressor::{compress_pair, draw_compressor, Column, PairCompressor};
pub use params::{
    core_length, derive_params, derive_params_for, projector_levels, Overrides, Regime,
    SketchParams, DEFAULT_CONSTANT,
};
pub use seed::SeedStream;
