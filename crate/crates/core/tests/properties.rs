use proptest::prelude::*;
use tpsketch::jl::{compress_pair, draw_compressor};
use tpsketch::sketch::{all_sketch, decompose_blocks, estimate_aligned_l2sq, single_sketch, MapFamily};
use tpsketch::{derive_params_for, exact_profile, Metric, Overrides, Regime, SeedStream};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-12)
}

fn vectors(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len)
}

fn regime() -> impl Strategy<Value = Regime> {
    prop_oneof![
        Just(Regime::L2),
        Just(Regime::Hamming),
        (1u64..1 << 40).prop_map(|universe| Regime::L1 { universe }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derived_parameters_are_consistent(
        regime in regime(),
        n in 1usize..1 << 24,
        m_frac in 0.0f64..1.0,
        eps in 0.01f64..0.99,
        d_exp in prop::option::of(0u32..12),
        h_exp in 0u32..12,
        seed in any::<u64>(),
    ) {
        let m = ((n as f64 * m_frac) as usize).clamp(1, n);
        let d = d_exp.map(|e| 1usize << e);
        let h = d.map(|d| 1usize << h_exp.min(d.trailing_zeros()));
        let o = Overrides { d, h, ..Default::default() };
        let p = match derive_params_for(regime, n, m, eps, seed, &o) {
            Ok(p) => p,
            // Only the formula can overflow, at tiny budgets.
            Err(tpsketch::Error::Parameter(msg)) if d.is_none() && msg.contains("out of range") => {
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        prop_assert!(p.d >= 1);
        prop_assert!(1 <= p.sigma && p.sigma <= p.d);
        prop_assert_eq!(p.d % p.h, 0);
        prop_assert!(p.eps_sketch * (p.k + 1) as f64 <= eps * (1.0 + 1e-12));
        prop_assert!(p.validate().is_ok());
        if let Some(d) = d {
            prop_assert_eq!(p.d, d);
        }
        prop_assert!(p.m > p.m_min || p.uses_fallback());
    }

    #[test]
    fn non_divisor_stride_is_rejected(d in 2usize..512, h in 1usize..512) {
        prop_assume!(h > d || d % h != 0);
        let o = Overrides { d: Some(d), h: Some(h), ..Default::default() };
        prop_assert!(derive_params_for(Regime::L2, 1 << 16, 1 << 12, 0.25, 0, &o).is_err());
    }

    #[test]
    fn compressor_columns_are_sparse_and_distinct(d in 1usize..64, sigma_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let sigma = ((d as f64 * sigma_frac) as usize).clamp(1, d);
        let phi = draw_compressor(&SeedStream::new(seed, "prop"), d, sigma).unwrap();
        for col in phi.left_cols().iter().chain(phi.right_cols()) {
            prop_assert_eq!(col.len(), sigma);
            let mut rows: Vec<u32> = col.iter().map(|e| e.0).collect();
            rows.sort_unstable();
            rows.dedup();
            prop_assert_eq!(rows.len(), sigma);
            prop_assert!(rows.iter().all(|&r| (r as usize) < d));
        }
    }

    #[test]
    fn compressor_is_additive((x, y, x2, y2) in (vectors(16), vectors(16), vectors(16), vectors(16)), seed in any::<u64>()) {
        let phi = draw_compressor(&SeedStream::new(seed, "prop"), 16, 5).unwrap();
        let sx: Vec<f64> = x.iter().zip(&x2).map(|(a, b)| a + b).collect();
        let sy: Vec<f64> = y.iter().zip(&y2).map(|(a, b)| a + b).collect();
        let sum = compress_pair(&phi, &sx, &sy).unwrap();
        let a = compress_pair(&phi, &x, &y).unwrap();
        let b = compress_pair(&phi, &x2, &y2).unwrap();
        let scale = x.iter().chain(&y).chain(&x2).chain(&y2).fold(0.0f64, |m, v| m.max(v.abs()));
        for ((s, p), q) in sum.iter().zip(&a).zip(&b) {
            prop_assert!((s - (p + q)).abs() <= 1e-12 * scale * 16.0);
        }
    }

    #[test]
    fn single_sketch_is_linear(
        depth in 0usize..4,
        alpha in -10.0f64..10.0,
        beta in -10.0f64..10.0,
        seed in any::<u64>(),
        raw in vectors(2 * 8 * 8),
    ) {
        let d = 8;
        let len = d << depth;
        let (x, y) = (&raw[..len], &raw[len..2 * len]);
        let family = MapFamily::for_engine(seed, 0, d, 3, 3).unwrap();
        let combo: Vec<f64> = x.iter().zip(y).map(|(a, b)| alpha * a + beta * b).collect();
        let sx = single_sketch(x, &family).unwrap();
        let sy = single_sketch(y, &family).unwrap();
        let sc = single_sketch(&combo, &family).unwrap();
        let bound = 1e-9 * (alpha.abs() + beta.abs()) * 100.0 * len as f64;
        for level in 0..sc.level_count() {
            for ((c, a), b) in sc.level(level).flatten().zip(sx.level(level).flatten()).zip(sy.level(level).flatten()) {
                prop_assert!((c - (alpha * a + beta * b)).abs() <= bound);
            }
        }
    }

    #[test]
    fn all_sketch_entries_are_single_sketches_of_substrings(blocks in 1usize..12, seed in any::<u64>(), raw in vectors(12 * 4)) {
        let d = 4;
        let x = &raw[..blocks * d];
        let family = MapFamily::for_engine(seed, 0, d, 2, 3).unwrap();
        let all = all_sketch(x, &family).unwrap();
        for level in 0..all.level_count() {
            prop_assert_eq!(all.entries(level), blocks + 1 - (1 << level));
            for j in 0..all.entries(level) {
                let sub = &x[j * d..(j + (1 << level)) * d];
                let single = single_sketch(sub, &family).unwrap();
                let top = single.entry(level, 0).unwrap();
                for (a, b) in all.entry(level, j).unwrap().iter().zip(top) {
                    prop_assert!(close(*a, *b, 1e-9));
                }
            }
        }
    }

    #[test]
    fn single_sketch_preserves_zero(depth in 0usize..5, seed in any::<u64>()) {
        let family = MapFamily::for_engine(seed, 0, 8, 2, 4).unwrap();
        let p = single_sketch(&vec![0.0; 8 << depth], &family).unwrap();
        for level in 0..p.level_count() {
            prop_assert!(p.level(level).flatten().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn decomposition_is_the_binary_expansion(count in 1usize..1 << 40) {
        let parts = decompose_blocks(count).unwrap();
        prop_assert!(parts.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(parts.iter().map(|&e| 1usize << e).sum::<usize>(), count);
    }

    #[test]
    fn estimate_is_symmetric(blocks in 1usize..16, seed in any::<u64>(), raw in vectors(2 * 16 * 4)) {
        let d = 4;
        let len = blocks * d;
        let padded = blocks.next_power_of_two() * d;
        let (x, y) = (&raw[..len], &raw[16 * d..16 * d + len]);
        let family = MapFamily::for_engine(seed, 0, d, 2, 4).unwrap();
        let pad = |v: &[f64]| {
            let mut p = v.to_vec();
            p.resize(padded, 0.0);
            p
        };
        let parts = decompose_blocks(blocks).unwrap();
        let xy = estimate_aligned_l2sq(
            &all_sketch(x, &family).unwrap(),
            &single_sketch(&pad(y), &family).unwrap(),
            0,
            &parts,
        ).unwrap();
        let yx = estimate_aligned_l2sq(
            &all_sketch(y, &family).unwrap(),
            &single_sketch(&pad(x), &family).unwrap(),
            0,
            &parts,
        ).unwrap();
        prop_assert_eq!(xy.to_bits(), yx.to_bits());
        let self_est = estimate_aligned_l2sq(
            &all_sketch(x, &family).unwrap(),
            &single_sketch(&pad(x), &family).unwrap(),
            0,
            &parts,
        ).unwrap();
        prop_assert_eq!(self_est, 0.0);
    }

    #[test]
    fn oracle_cross_checks(
        text in prop::collection::vec(-20i64..20, 1..60),
        m_frac in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        let m = ((text.len() as f64 * m_frac) as usize).clamp(1, text.len());
        let start = (seed as usize) % (text.len() - m + 1);
        let mut pattern: Vec<i64> = text[start..start + m].to_vec();
        pattern.iter_mut().step_by(3).for_each(|v| *v = v.wrapping_mul(7) % 23);
        let ham = exact_profile(&text, &pattern, Metric::Hamming).unwrap();
        let l1 = exact_profile(&text, &pattern, Metric::L1).unwrap();
        let l2sq = exact_profile(&text, &pattern, Metric::L2Sq).unwrap();
        let max_diff = (0..=text.len() - m)
            .map(|t| (0..m).map(|i| (text[t + i] - pattern[i]).abs()).max().unwrap() as f64)
            .collect::<Vec<_>>();
        for (((h, a), q), md) in ham.values().iter().zip(l1.values()).zip(l2sq.values()).zip(&max_diff) {
            prop_assert!(h <= a);
            prop_assert!(*q <= md * a);
        }
        let rev_t: Vec<i64> = text.iter().rev().copied().collect();
        let rev_p: Vec<i64> = pattern.iter().rev().copied().collect();
        for metric in [Metric::Hamming, Metric::L1, Metric::L2Sq, Metric::L2] {
            let fwd = exact_profile(&text, &pattern, metric).unwrap();
            let bwd = exact_profile(&rev_t, &rev_p, metric).unwrap();
            let mut reversed = bwd.values().to_vec();
            reversed.reverse();
            prop_assert_eq!(fwd.values(), reversed.as_slice());
        }
    }
}
