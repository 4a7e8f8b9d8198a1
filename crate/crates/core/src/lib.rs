//! Approximate text-to-pattern distance profiles without convolutions.
//!
//! A pattern of length `m` is compared against every length-`m` window of a
//! text of length `n`. Instead of FFT-based correlation, both sequences are
//! cut into blocks of `d` values and folded level by level with sparse random
//! pair-compressors (`ℝᵈ × ℝᵈ → ℝᵈ`). Because every map is linear and shared
//! between text and pattern, the distance between two sketches estimates the
//! ℓ2² distance between the fragments they summarise.
//!
//! * [`l2::l2_profile`]: ℓ2 / ℓ2² profiles with exact edge sums;
//! * [`hamming::hamming_profile`]: Hamming profiles via a binary embedding;
//! * [`l1::l1_profile`]: ℓ1 profiles via a sketched unary embedding;
//! * [`oracle`]: the exact `O(nm)` reference and error statistics.

pub mod error;
pub mod hamming;
pub mod jl;
pub mod l1;
pub mod l2;
pub mod oracle;
pub mod profile;
pub mod sketch;

pub use error::{Error, Result};
pub use hamming::{hamming_profile, CharEmbedder};
pub use jl::{derive_params, derive_params_for, Overrides, Regime, SeedStream, SketchParams};
pub use l1::{l1_preprocess, l1_profile, UnaryProjector};
pub use l2::l2_profile;
pub use oracle::{error_report, exact_profile, ErrorReport, Symbol};
pub use profile::{DistanceProfile, Metric};
