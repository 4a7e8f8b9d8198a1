use std::fmt;
use std::str::FromStr;

use crate::error::{usage, Error, Result};
use crate::jl::SketchParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    L2,
    L2Sq,
    L1,
    Hamming,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::L2 => "l2",
            Metric::L2Sq => "l2sq",
            Metric::L1 => "l1",
            Metric::Hamming => "hamming",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(Metric::L2),
            "l2sq" => Ok(Metric::L2Sq),
            "l1" => Ok(Metric::L1),
            "hamming" => Ok(Metric::Hamming),
            other => usage(format!("unknown metric {other:?}")),
        }
    }
}

/// One distance value per alignment `0..=n−m` of the pattern in the text.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    metric: Metric,
    values: Vec<f64>,
    exact: Vec<bool>,
    params: Option<SketchParams>,
}

impl DistanceProfile {
    pub fn new(
        metric: Metric,
        values: Vec<f64>,
        exact: Vec<bool>,
        params: Option<SketchParams>,
    ) -> Result<Self> {
        if values.len() != exact.len() {
            return usage("values and exact flags differ in length");
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return usage("distance values must be non-negative");
        }
        Ok(DistanceProfile {
            metric,
            values,
            exact,
            params,
        })
    }

    /// Profile computed entirely by the exact oracle.
    pub(crate) fn exact(metric: Metric, values: Vec<f64>, params: Option<SketchParams>) -> Self {
        let exact = vec![true; values.len()];
        DistanceProfile {
            metric,
            values,
            exact,
            params,
        }
    }

    /// Profile made of estimates; negative rounding noise is clamped to zero.
    pub(crate) fn estimated(metric: Metric, mut values: Vec<f64>, params: SketchParams) -> Self {
        for v in &mut values {
            *v = v.max(0.0);
        }
        let exact = vec![false; values.len()];
        DistanceProfile {
            metric,
            values,
            exact,
            params: Some(params),
        }
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 0-based alignment indices.
    pub fn positions(&self) -> std::ops::Range<usize> {
        0..self.values.len()
    }

    pub fn exact_flags(&self) -> &[bool] {
        &self.exact
    }

    pub fn params(&self) -> Option<&SketchParams> {
        self.params.as_ref()
    }

    /// Converts an `l2sq` profile to `l2` by taking square roots.
    pub fn into_l2(mut self) -> Result<Self> {
        if self.metric != Metric::L2Sq {
            return usage(format!("cannot take square roots of a {} profile", self.metric));
        }
        for v in &mut self.values {
            *v = v.sqrt();
        }
        self.metric = Metric::L2;
        Ok(self)
    }
}
