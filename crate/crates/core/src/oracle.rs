//! Brute-force profiles and error statistics.

use rayon::prelude::*;

use crate::error::{usage, Result};
use crate::profile::{DistanceProfile, Metric};

/// A sequence element the oracle can compare.
pub trait Symbol: Copy + PartialEq + Send + Sync {
    fn value(self) -> f64;
}

impl Symbol for f64 {
    fn value(self) -> f64 {
        self
    }
}

impl Symbol for i64 {
    fn value(self) -> f64 {
        self as f64
    }
}

impl Symbol for u64 {
    fn value(self) -> f64 {
        self as f64
    }
}

impl Symbol for u8 {
    fn value(self) -> f64 {
        f64::from(self)
    }
}

fn cost<T: Symbol>(metric: Metric, a: T, b: T) -> f64 {
    match metric {
        Metric::L2 | Metric::L2Sq => {
            let t = a.value() - b.value();
            t * t
        }
        Metric::L1 => (a.value() - b.value()).abs(),
        Metric::Hamming => f64::from(u8::from(a != b)),
    }
}

/// `value[t] = Σⱼ cost(text[t + j], pattern[j])` for every alignment `t`.
pub(crate) fn exact_values<T: Symbol>(text: &[T], pattern: &[T], metric: Metric) -> Result<Vec<f64>> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || n < m {
        return usage(format!("need 1 <= m <= n; got n={n}, m={m}"));
    }
    Ok((0..=n - m)
        .into_par_iter()
        .map(|t| {
            let s: f64 = text[t..t + m]
                .iter()
                .zip(pattern)
                .map(|(&a, &b)| cost(metric, a, b))
                .sum();
            if metric == Metric::L2 {
                s.sqrt()
            } else {
                s
            }
        })
        .collect())
}

pub fn exact_profile<T: Symbol>(text: &[T], pattern: &[T], metric: Metric) -> Result<DistanceProfile> {
    Ok(DistanceProfile::exact(
        metric,
        exact_values(text, pattern, metric)?,
        None,
    ))
}

/// Accuracy of an estimated profile against the exact one.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub epsilon: f64,
    /// `|estimate − exact| / exact` per position; `0` when both are zero,
    /// `f64::INFINITY` when only the exact value is zero.
    pub relative_errors: Vec<f64>,
    /// Fraction of estimated positions inside `(1 ± ε)·exact`.
    pub fraction_within: f64,
    pub median_rel_error: f64,
    pub max_rel_error: f64,
    /// Estimated positions whose exact value is zero but estimate is not.
    pub infinite_count: usize,
    /// Positions answered by the exact fallback, left out of the statistics.
    pub exact_count: usize,
}

impl ErrorReport {
    /// Number of positions that entered the statistics.
    pub fn estimated_count(&self) -> usize {
        self.relative_errors.len() - self.exact_count
    }
}

pub fn error_report(
    estimate: &DistanceProfile,
    exact: &DistanceProfile,
    epsilon: f64,
) -> Result<ErrorReport> {
    if estimate.len() != exact.len() {
        return usage(format!(
            "profile lengths differ: {} vs {}",
            estimate.len(),
            exact.len()
        ));
    }
    if estimate.metric() != exact.metric() {
        return usage(format!(
            "profile metrics differ: {} vs {}",
            estimate.metric(),
            exact.metric()
        ));
    }
    let relative_errors: Vec<f64> = estimate
        .values()
        .iter()
        .zip(exact.values())
        .map(|(&e, &x)| {
            if x == 0.0 {
                if e == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (e - x).abs() / x
            }
        })
        .collect();

    let mut stats: Vec<f64> = Vec::new();
    let mut within = 0usize;
    let mut exact_count = 0usize;
    let mut infinite_count = 0usize;
    for ((&rel, &flag), (&e, &x)) in relative_errors
        .iter()
        .zip(estimate.exact_flags())
        .zip(estimate.values().iter().zip(exact.values()))
    {
        if flag {
            exact_count += 1;
            continue;
        }
        if rel.is_infinite() {
            infinite_count += 1;
        }
        if (1.0 - epsilon) * x <= e && e <= (1.0 + epsilon) * x {
            within += 1;
        }
        stats.push(rel);
    }
    let counted = stats.len();
    stats.sort_by(|a, b| a.total_cmp(b));
    let median_rel_error = match counted {
        0 => 0.0,
        c if c % 2 == 1 => stats[c / 2],
        c => (stats[c / 2 - 1] + stats[c / 2]) / 2.0,
    };
    Ok(ErrorReport {
        epsilon,
        fraction_within: if counted == 0 {
            1.0
        } else {
            within as f64 / counted as f64
        },
        median_rel_error,
        max_rel_error: stats.last().copied().unwrap_or(0.0),
        infinite_count,
        exact_count,
        relative_errors,
    })
}
