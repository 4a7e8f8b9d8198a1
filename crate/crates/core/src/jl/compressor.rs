//! Sparse sign pair-compressors `φ(x, y) = A₀x + A₁y`.

use rand::Rng;

use crate::error::{param, usage, Result};
use crate::jl::SeedStream;

/// One column of a sparse sign matrix: `(row, sign)` pairs with distinct rows.
pub type Column = Vec<(u32, i8)>;

/// A linear map `ℝᵈ × ℝᵈ → ℝᵈ` stored as two column-sparse `±1` matrices.
///
/// The `1/√sigma` normalisation is applied once per output coordinate by
/// [`compress_pair`], not stored in the entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCompressor {
    d: usize,
    sigma: usize,
    left_cols: Vec<Column>,
    right_cols: Vec<Column>,
    scale: f64,
}

impl PairCompressor {
    /// Builds a compressor from explicit columns, validating the sparsity invariants.
    pub fn from_columns(
        d: usize,
        sigma: usize,
        left_cols: Vec<Column>,
        right_cols: Vec<Column>,
    ) -> Result<Self> {
        if sigma == 0 || sigma > d {
            return param(format!("sigma must be in [1, d]; got sigma={sigma}, d={d}"));
        }
        for (side, cols) in [("left", &left_cols), ("right", &right_cols)] {
            if cols.len() != d {
                return param(format!("{side} matrix has {} columns, expected {d}", cols.len()));
            }
            for (c, col) in cols.iter().enumerate() {
                if col.len() != sigma {
                    return param(format!("{side} column {c} has {} entries", col.len()));
                }
                let mut seen = vec![false; d];
                for &(r, s) in col {
                    let r = r as usize;
                    if r >= d || seen[r] || (s != 1 && s != -1) {
                        return param(format!("{side} column {c} has an invalid entry"));
                    }
                    seen[r] = true;
                }
            }
        }
        Ok(PairCompressor {
            d,
            sigma,
            left_cols,
            right_cols,
            scale: 1.0 / (sigma as f64).sqrt(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn left_cols(&self) -> &[Column] {
        &self.left_cols
    }

    pub fn right_cols(&self) -> &[Column] {
        &self.right_cols
    }

    /// Evaluates `φ(x, y)`; see [`compress_pair`].
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        compress_pair(self, x, y)
    }

    /// Writes `φ(x, y)` into `out`. Lengths must already be checked.
    pub(crate) fn apply_into(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        debug_assert!(x.len() == self.d && y.len() == self.d && out.len() == self.d);
        out.fill(0.0);
        for (col, &v) in self.left_cols.iter().zip(x) {
            for &(r, s) in col {
                out[r as usize] += f64::from(s) * v;
            }
        }
        for (col, &v) in self.right_cols.iter().zip(y) {
            for &(r, s) in col {
                out[r as usize] += f64::from(s) * v;
            }
        }
        for o in out.iter_mut() {
            *o *= self.scale;
        }
    }
}

/// Draws a compressor with `sigma` distinct random rows per column, each with
/// a uniform random sign.
///
/// Column `c` of side `s` is driven by its own stream `stream/s/c`, so the
/// result does not depend on the order columns are generated in.
pub fn draw_compressor(stream: &SeedStream, d: usize, sigma: usize) -> Result<PairCompressor> {
    if d == 0 {
        return param("compressor dimension must be positive");
    }
    if sigma == 0 || sigma > d {
        return param(format!("sigma must be in [1, d]; got sigma={sigma}, d={d}"));
    }
    // Scratch permutation of 0..d, restored to identity after every column.
    let mut perm: Vec<u32> = (0..d as u32).collect();
    let mut draw_side = |side: &str| -> Vec<Column> {
        let side_stream = stream.child(side);
        (0..d)
            .map(|c| {
                let mut rng = side_stream.index(c as u64).rng();
                let mut swaps = Vec::with_capacity(sigma);
                let mut col = Vec::with_capacity(sigma);
                let mut sign_bits = 0u64;
                for i in 0..sigma {
                    let j = i + below(&mut rng, (d - i) as u32) as usize;
                    perm.swap(i, j);
                    swaps.push(j);
                    if i % 64 == 0 {
                        sign_bits = rng.gen();
                    }
                    let sign = if sign_bits >> (i % 64) & 1 == 1 { 1 } else { -1 };
                    col.push((perm[i], sign));
                }
                for (i, &j) in swaps.iter().enumerate().rev() {
                    perm.swap(i, j);
                }
                col
            })
            .collect()
    };
    let left = draw_side("left");
    let right = draw_side("right");
    Ok(PairCompressor {
        d,
        sigma,
        left_cols: left,
        right_cols: right,
        scale: 1.0 / (sigma as f64).sqrt(),
    })
}

/// Uniform integer in `[0, range)` by multiply-and-reject (Lemire); the
/// modulo is only evaluated on the rare rejection path.
fn below(rng: &mut impl Rng, range: u32) -> u32 {
    debug_assert!(range > 0);
    let mut product = u64::from(rng.gen::<u32>()) * u64::from(range);
    if (product as u32) < range {
        let threshold = range.wrapping_neg() % range;
        while (product as u32) < threshold {
            product = u64::from(rng.gen::<u32>()) * u64::from(range);
        }
    }
    (product >> 32) as u32
}

/// `out[r] = (Σ_{(r,s) ∈ left col c} s·x[c] + Σ_{(r,s) ∈ right col c} s·y[c]) / √sigma`.
///
/// Columns are accumulated in a fixed left-to-right order, so equal inputs
/// give bit-identical outputs.
pub fn compress_pair(phi: &PairCompressor, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != phi.d || y.len() != phi.d {
        return usage(format!(
            "compress_pair expects two vectors of length {}; got {} and {}",
            phi.d,
            x.len(),
            y.len()
        ));
    }
    let mut out = vec![0.0; phi.d];
    phi.apply_into(x, y, &mut out);
    Ok(out)
}
