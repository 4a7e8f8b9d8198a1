//! Derived sketch parameters.
//!
//! All constants used by the pipelines (dimension, sparsity, level count,
//! edge granularity and the error budgets) come from [`derive_params_for`].
//!
//! The sketch dimension follows `d = ⌈C · log₂(max(n, 4)) / ε_s²⌉` with
//! `ε_s = share / (2(k + 1))`, where `share` is the part of the total error
//! budget assigned to sketching and `k` the number of compression levels.
//! Since `k` depends on `d` in the ℓ2 layout, the smallest `k` whose
//! dimension needs no more than `k` levels is chosen.

use crate::error::{param, Result};

/// Default constant `C` in the dimension formula.
pub const DEFAULT_CONSTANT: f64 = 4.0;

/// Which pipeline the parameters are derived for; this fixes the error budget
/// split and the block layout of the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Real-valued ℓ2 with exact edge sums; the whole budget goes to sketching.
    L2,
    /// Binary character embedding; half the budget each to embedding and sketching.
    Hamming,
    /// Unary projector over `[0, universe)`; a third of the budget to the
    /// projector levels, the rest to sketching.
    L1 { universe: u64 },
}

/// Optional user overrides of derived constants.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    /// Constant `C` in the dimension formula.
    pub constant: Option<f64>,
    /// Sketch dimension, bypassing the formula.
    pub d: Option<usize>,
    /// Edge granularity; must divide `d`.
    pub h: Option<usize>,
    /// Pattern length at or below which the exact fallback is used.
    pub m_min: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchParams {
    pub regime: Regime,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub master_seed: u64,
    pub constant: f64,
    /// Sketch dimension (block length).
    pub d: usize,
    /// Nonzeros per column of each compressor matrix.
    pub sigma: usize,
    /// Number of compression levels the map families provide.
    pub k: usize,
    /// Edge granularity of the ℓ2 pipeline.
    pub h: usize,
    /// Per-level sketching error budget.
    pub eps_sketch: f64,
    /// Embedding budget: the whole Hamming embedding budget, or the per-level
    /// budget of the ℓ1 projector. Zero for ℓ2.
    pub eps_embed: f64,
    /// Pattern length at or below which pipelines fall back to the exact oracle.
    pub m_min: usize,
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

fn dimension(constant: f64, n: usize, eps_sketch: f64) -> Result<usize> {
    let lg = (n.max(4) as f64).log2();
    let d = (constant * lg / (eps_sketch * eps_sketch)).ceil();
    if !d.is_finite() || d < 1.0 || d > u32::MAX as f64 {
        return param(format!("derived dimension {d} is out of range"));
    }
    Ok(d as usize)
}

/// Parameters for the ℓ2 pipeline.
pub fn derive_params(
    n: usize,
    m: usize,
    epsilon: f64,
    master_seed: u64,
    overrides: &Overrides,
) -> Result<SketchParams> {
    derive_params_for(Regime::L2, n, m, epsilon, master_seed, overrides)
}

pub fn derive_params_for(
    regime: Regime,
    n: usize,
    m: usize,
    epsilon: f64,
    master_seed: u64,
    overrides: &Overrides,
) -> Result<SketchParams> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return param(format!("epsilon must lie in (0, 1); got {epsilon}"));
    }
    if m == 0 || m > n {
        return param(format!("need 1 <= m <= n; got n={n}, m={m}"));
    }
    let constant = overrides.constant.unwrap_or(DEFAULT_CONSTANT);
    if !(constant > 0.0 && constant.is_finite()) {
        return param(format!("dimension constant must be positive; got {constant}"));
    }
    if overrides.d == Some(0) {
        return param("d must be positive");
    }
    if overrides.h == Some(0) {
        return param("h must be positive");
    }
    if let Regime::L1 { universe: 0 } = regime {
        return param("universe must be positive");
    }

    let share = match regime {
        Regime::L2 => epsilon,
        Regime::Hamming => epsilon / 2.0,
        Regime::L1 { .. } => 2.0 * epsilon / 3.0,
    };
    let eps_for = |k: usize| share / (2.0 * (k + 1) as f64);
    let d_for = |k: usize| match overrides.d {
        Some(d) => Ok(d),
        None => dimension(constant, n, eps_for(k)),
    };

    let (k, d, h) = match regime {
        Regime::L2 => {
            let mut found = None;
            for k in 0..usize::BITS as usize {
                let d = d_for(k)?;
                let h = overrides.h.unwrap_or(d);
                let core = core_length(m, d, h);
                let need = ceil_log2(core / d);
                if need <= k {
                    found = Some((k, d, h));
                    break;
                }
            }
            match found {
                Some(v) => v,
                None => return param("no consistent level count for these inputs"),
            }
        }
        Regime::Hamming | Regime::L1 { .. } => {
            let k = ceil_log2(m);
            let d = d_for(k)?;
            (k, d, overrides.h.unwrap_or(d))
        }
    };
    if h > d || d % h != 0 {
        return param(format!("h={h} must divide d={d}"));
    }
    let eps_sketch = eps_for(k);
    let sigma = ((eps_sketch * d as f64).ceil() as usize).clamp(1, d);
    let eps_embed = match regime {
        Regime::L2 => 0.0,
        Regime::Hamming => epsilon / 2.0,
        Regime::L1 { universe } => {
            let levels = projector_levels(universe, d).max(1);
            epsilon / (3.0 * levels as f64)
        }
    };
    let m_min = overrides.m_min.unwrap_or(match regime {
        Regime::L2 => 4 * d + 2 * h,
        Regime::Hamming | Regime::L1 { .. } => d,
    });
    let params = SketchParams {
        regime,
        n,
        m,
        epsilon,
        master_seed,
        constant,
        d,
        sigma,
        k,
        h,
        eps_sketch,
        eps_embed,
        m_min,
    };
    params.validate()?;
    Ok(params)
}

/// Length of the sketched pattern core in the ℓ2 layout: `m − 2h` rounded
/// down to a multiple of `d` (zero when `m < 2h`).
pub fn core_length(m: usize, d: usize, h: usize) -> usize {
    m.saturating_sub(2 * h) / d * d
}

/// Number of halvings `L` such that `d · 2^L` is the smallest such product `≥ universe`.
pub fn projector_levels(universe: u64, d: usize) -> usize {
    let mut levels = 0;
    let mut span = d as u128;
    while span < universe as u128 {
        span *= 2;
        levels += 1;
    }
    levels
}

impl SketchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return param(format!("epsilon must lie in (0, 1); got {}", self.epsilon));
        }
        if self.d == 0 || self.sigma == 0 || self.sigma > self.d {
            return param(format!(
                "need 1 <= sigma <= d; got sigma={}, d={}",
                self.sigma, self.d
            ));
        }
        if self.h == 0 || self.h > self.d || !self.d.is_multiple_of(self.h) {
            return param(format!("h={} must divide d={}", self.h, self.d));
        }
        if self.eps_sketch * (self.k + 1) as f64 > self.epsilon {
            return param("sketching budget exceeds the total error budget");
        }
        Ok(())
    }

    /// `m′` for the ℓ2 layout.
    pub fn core_length(&self) -> usize {
        core_length(self.m, self.d, self.h)
    }

    /// Column sparsity for the ℓ1 projector maps, sized by the embedding budget.
    pub fn embed_sigma(&self) -> usize {
        ((self.eps_embed * self.d as f64).ceil() as usize).clamp(1, self.d)
    }

    /// Whether a pattern of this length is answered by the exact oracle.
    pub fn uses_fallback(&self) -> bool {
        match self.regime {
            Regime::L2 => self.m <= self.m_min || self.core_length() < self.d,
            Regime::Hamming | Regime::L1 { .. } => self.m <= self.m_min,
        }
    }
}
