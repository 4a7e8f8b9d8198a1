use std::fmt;
use std::time::Instant;

use anyhow::{anyhow, Result};
use log::{info, warn};
use tpsketch::{
    derive_params_for, error_report, exact_profile, hamming_profile, l1_profile, l2_profile,
    DistanceProfile, Metric, Regime,
};

use crate::io::{self, default_alphabet, random_symbols, read_tokens, render, write_output};
use crate::{BenchArgs, DistArgs, EstimatorArgs, GenArgs, MetricArg, Mode, VerifyArgs};

/// An error caused by the caller's input or flags.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage_err(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Library errors are all about rejected inputs or parameters, so they
/// count as usage errors too.
pub fn is_usage(err: &anyhow::Error) -> bool {
    err.chain()
        .any(|c| c.is::<UsageError>() || c.is::<tpsketch::Error>())
}

pub fn run_gen(args: &GenArgs) -> Result<()> {
    if args.n == 0 {
        return Err(usage_err("--n must be positive"));
    }
    let alphabet = args.alphabet.unwrap_or(default_alphabet(args.mode));
    if alphabet == 0 || (args.mode == Mode::Bytes && alphabet > 26) {
        return Err(usage_err(format!(
            "--alphabet must be in 1..={} for {:?} mode",
            if args.mode == Mode::Bytes { 26 } else { u64::MAX },
            args.mode
        )));
    }
    let symbols = random_symbols(args.n, alphabet, args.seed);
    write_output(Some(&args.out), &render(&symbols, args.mode))?;
    info!("wrote {} symbols to {}", args.n, args.out.display());
    Ok(())
}

pub fn run_dist(args: &DistArgs) -> Result<()> {
    let text = read_tokens(&args.text, args.mode)?;
    let pattern = read_tokens(&args.pattern, args.mode)?;
    if pattern.is_empty() {
        return Err(usage_err("pattern is empty"));
    }
    let estimate = estimate(&args.est, &text, &pattern)?;
    let exact = if args.emit_exact {
        Some(exact(args.est.metric, &text, &pattern)?)
    } else {
        None
    };
    let csv = io::profile_csv(estimate.values(), exact.as_ref().map(|p| p.values()));
    write_output(args.out.as_deref(), csv.as_bytes())
}

pub fn run_verify(args: &VerifyArgs) -> Result<()> {
    if args.seeds == 0 {
        return Err(usage_err("--seeds must be positive"));
    }
    let alphabet = args.alphabet.unwrap_or(metric_alphabet(args.est.metric));
    let (mut within, mut counted, mut positions) = (0usize, 0usize, 0usize);
    for seed in args.est.seed..args.est.seed + args.seeds {
        let (text, pattern) = generated_pair(args.n, args.m, alphabet, seed)?;
        let est_args = EstimatorArgs {
            seed,
            ..args.est.clone()
        };
        let estimate = estimate(&est_args, &text, &pattern)?;
        let exact = exact(args.est.metric, &text, &pattern)?;
        let report = error_report(&estimate, &exact, args.est.epsilon)?;
        let here = report.estimated_count();
        within += (report.fraction_within * here as f64).round() as usize;
        counted += here;
        positions += estimate.len();
        println!(
            "seed={seed} positions={} estimated={here} fraction_within={:.4} median_rel_error={:.4} max_rel_error={:.4}",
            estimate.len(),
            report.fraction_within,
            report.median_rel_error,
            report.max_rel_error
        );
    }
    if counted == 0 {
        warn!("every position was answered by the exact fallback");
    }
    let fraction = if counted == 0 { 1.0 } else { within as f64 / counted as f64 };
    println!(
        "total metric={} epsilon={} seeds={} positions={positions} estimated={counted} fraction_within={fraction:.4}",
        Metric::from(args.est.metric),
        args.est.epsilon,
        args.seeds
    );
    Ok(())
}

pub fn run_bench(args: &BenchArgs) -> Result<()> {
    if args.reps < 3 {
        return Err(usage_err("--reps must be at least 3"));
    }
    let alphabet = args.alphabet.unwrap_or(metric_alphabet(args.est.metric));
    let (text, pattern) = generated_pair(args.n, args.m, alphabet, args.est.seed)?;

    let mut approx_times = Vec::with_capacity(args.reps);
    let mut first: Option<Vec<u64>> = None;
    for _ in 0..args.reps {
        let start = Instant::now();
        let profile = estimate(&args.est, &text, &pattern)?;
        approx_times.push(start.elapsed().as_secs_f64() * 1e3);
        let bits: Vec<u64> = profile.values().iter().map(|v| v.to_bits()).collect();
        match &first {
            None => {
                if profile.exact_flags().iter().all(|&f| f) {
                    warn!("the estimator fell back to the exact oracle for every position");
                }
                first = Some(bits);
            }
            Some(prev) if *prev != bits => {
                return Err(anyhow!("repeated runs with the same seed gave different profiles"));
            }
            Some(_) => {}
        }
    }
    let mut exact_times = Vec::with_capacity(args.reps);
    for _ in 0..args.reps {
        let start = Instant::now();
        exact(args.est.metric, &text, &pattern)?;
        exact_times.push(start.elapsed().as_secs_f64() * 1e3);
    }

    let mut csv = String::from("method,n,m,epsilon,millis\n");
    for (method, times) in [("approx", approx_times), ("exact", exact_times)] {
        csv.push_str(&format!(
            "{method},{},{},{},{:.3}\n",
            args.n,
            args.m,
            args.est.epsilon,
            median(times)
        ));
    }
    write_output(args.out.as_deref(), csv.as_bytes())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

fn metric_alphabet(metric: MetricArg) -> u64 {
    match metric {
        MetricArg::Hamming => 4,
        _ => 1000,
    }
}

fn generated_pair(n: usize, m: usize, alphabet: u64, seed: u64) -> Result<(Vec<i64>, Vec<i64>)> {
    if m == 0 || m > n {
        return Err(usage_err(format!("need 1 <= m <= n; got n={n}, m={m}")));
    }
    if alphabet == 0 {
        return Err(usage_err("--alphabet must be positive"));
    }
    let text = random_symbols(n, alphabet, seed.wrapping_mul(2));
    let pattern = random_symbols(m, alphabet, seed.wrapping_mul(2).wrapping_add(1));
    Ok((text, pattern))
}

fn as_reals(v: &[i64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn as_naturals(v: &[i64]) -> Result<Vec<u64>> {
    v.iter()
        .map(|&x| u64::try_from(x).map_err(|_| usage_err(format!("l1 inputs must be non-negative; found {x}"))))
        .collect()
}

fn universe_for(est: &EstimatorArgs, text: &[u64], pattern: &[u64]) -> Result<u64> {
    match est.universe {
        Some(u) => Ok(u),
        None => {
            let max = text.iter().chain(pattern).copied().max().unwrap_or(0);
            max.checked_add(1)
                .ok_or_else(|| usage_err("input value too large to infer a universe"))
        }
    }
}

/// Runs the estimator selected by `est.metric`.
pub fn estimate(est: &EstimatorArgs, text: &[i64], pattern: &[i64]) -> Result<DistanceProfile> {
    if est.universe.is_some() && est.metric != MetricArg::L1 {
        return Err(usage_err("--universe only applies to --metric l1"));
    }
    let (n, m) = (text.len(), pattern.len());
    let o = est.overrides();
    let profile = match est.metric {
        MetricArg::L2 | MetricArg::L2sq => {
            let params = derive_params_for(Regime::L2, n, m, est.epsilon, est.seed, &o)?;
            info!("parameters: {params:?}");
            let sq = l2_profile(&as_reals(text), &as_reals(pattern), &params)?;
            if est.metric == MetricArg::L2 {
                sq.into_l2()?
            } else {
                sq
            }
        }
        MetricArg::Hamming => {
            let params = derive_params_for(Regime::Hamming, n, m, est.epsilon, est.seed, &o)?;
            info!("parameters: {params:?}");
            hamming_profile(text, pattern, &params)?
        }
        MetricArg::L1 => {
            let (t, p) = (as_naturals(text)?, as_naturals(pattern)?);
            let universe = universe_for(est, &t, &p)?;
            let params = derive_params_for(Regime::L1 { universe }, n, m, est.epsilon, est.seed, &o)?;
            info!("parameters: {params:?}");
            l1_profile(&t, &p, universe, &params)?
        }
    };
    let fallback = profile.exact_flags().iter().filter(|&&f| f).count();
    info!("{} positions, {fallback} answered exactly", profile.len());
    Ok(profile)
}

pub fn exact(metric: MetricArg, text: &[i64], pattern: &[i64]) -> Result<DistanceProfile> {
    let metric = Metric::from(metric);
    Ok(match metric {
        Metric::L2 | Metric::L2Sq => exact_profile(&as_reals(text), &as_reals(pattern), metric)?,
        _ => exact_profile(text, pattern, metric)?,
    })
}
