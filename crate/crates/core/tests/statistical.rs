//! Frequency-bound checks of the randomized pieces, plus a few structural
//! properties that need whole pipelines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpsketch::sketch::{all_sketch, decompose_blocks, estimate_aligned_l2sq, single_sketch, MapFamily};
use tpsketch::{
    derive_params, derive_params_for, exact_profile, hamming_profile, l1_preprocess, l2_profile,
    CharEmbedder, Metric, Overrides, Regime, SeedStream,
};

fn uniform_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn energy(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[test]
fn top_sketch_energy_over_many_seeds() {
    // 2^6 blocks, eps_sketch = 0.3 / (k+1) / 2 with k = 6.
    let (d, k) = (512, 6);
    let eps_sketch = 0.3 / (k + 1) as f64 / 2.0;
    let sigma = (eps_sketch * d as f64).ceil() as usize;
    let mut ok = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = uniform_vec(&mut rng, d << k);
        let family = MapFamily::for_engine(seed, 0, d, sigma, k).unwrap();
        let pyramid = single_sketch(&x, &family).unwrap();
        let ratio = energy(pyramid.entry(k, 0).unwrap()) / energy(&x);
        ok += usize::from((ratio - 1.0).abs() <= 0.3);
    }
    assert!(ok >= 180, "{ok}/200 seeds within (1±0.3)");
}

#[test]
fn fragment_estimates_over_many_seeds() {
    // 13 blocks decompose as 8 + 4 + 1; the pattern side is padded to 16.
    let (d, blocks, k) = (512, 13, 4);
    let sigma = (0.3 / (2.0 * (k + 1) as f64) * d as f64).ceil() as usize;
    let parts = decompose_blocks(blocks).unwrap();
    let mut ok = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let t = uniform_vec(&mut rng, blocks * d);
        let mut p = uniform_vec(&mut rng, blocks * d);
        let exact: f64 = t.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
        p.resize(16 * d, 0.0);
        let family = MapFamily::for_engine(seed, 0, d, sigma, k).unwrap();
        let est = estimate_aligned_l2sq(
            &all_sketch(&t, &family).unwrap(),
            &single_sketch(&p, &family).unwrap(),
            0,
            &parts,
        )
        .unwrap();
        ok += usize::from((est / exact - 1.0).abs() <= 0.3);
    }
    assert!(ok >= 180, "{ok}/200 seeds within (1±0.3)");
}

#[test]
fn prepending_whole_blocks_shifts_the_profile() {
    let (n, m, d, h) = (900, 260, 32, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let text: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..50.0)).collect();
    let pattern: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..50.0)).collect();
    let o = Overrides {
        d: Some(d),
        h: Some(h),
        m_min: Some(8),
        ..Default::default()
    };
    let params = derive_params(n, m, 0.25, 5, &o).unwrap();
    assert!(!params.uses_fallback());
    let base = l2_profile(&text, &pattern, &params).unwrap();
    for j in [1usize, 3] {
        let mut shifted = vec![0.0; j * d];
        shifted.extend_from_slice(&text);
        let mut frozen = params;
        frozen.n = shifted.len();
        let prof = l2_profile(&shifted, &pattern, &frozen).unwrap();
        let tail: Vec<u64> = prof.values()[j * d..].iter().map(|v| v.to_bits()).collect();
        let orig: Vec<u64> = base.values().iter().map(|v| v.to_bits()).collect();
        assert_eq!(tail, orig, "shift by {j} blocks");
    }
}

#[test]
fn unary_projection_respects_chains() {
    // For x < y < z the two legs should add up to the whole span.
    let u = 1u64 << 16;
    let params = derive_params_for(
        Regime::L1 { universe: u },
        1 << 12,
        1 << 9,
        0.3,
        3,
        &Overrides {
            d: Some(1024),
            ..Default::default()
        },
    )
    .unwrap();
    let proj = l1_preprocess(u, params.d, params.embed_sigma(), &SeedStream::new(3, "projector")).unwrap();
    let tolerance = 2.0 * params.eps_embed * proj.levels() as f64;
    let dist = |a: u64, b: u64| -> f64 {
        let (pa, pb) = (proj.psi(a).unwrap(), proj.psi(b).unwrap());
        pa.iter().zip(&pb).map(|(p, q)| (p - q) * (p - q)).sum()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 200;
    let mut ok = 0;
    for _ in 0..trials {
        let mut v = [rng.gen_range(0..u), rng.gen_range(0..u), rng.gen_range(0..u)];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            continue;
        }
        let [x, y, z] = v;
        assert_eq!(z - x, (y - x) + (z - y));
        let ratio = (dist(x, y) + dist(y, z)) / dist(x, z);
        ok += usize::from((ratio - 1.0).abs() <= tolerance);
    }
    assert!(ok as f64 >= 0.9 * trials as f64, "{ok}/{trials} chains within tolerance {tolerance}");
}

#[test]
fn binary_codes_separate_every_pair_of_a_small_alphabet() {
    let eps = 0.3;
    let d = 2048;
    let mut e = CharEmbedder::new(d, 17);
    for a in 0..16i64 {
        for b in a + 1..16 {
            let (ca, cb) = (e.code(a).to_vec(), e.code(b).to_vec());
            let dist: f64 = ca.iter().zip(&cb).map(|(p, q)| (p - q) * (p - q)).sum();
            let ratio = 2.0 / d as f64 * dist;
            assert!((ratio - 1.0).abs() <= eps / 2.0, "({a},{b}): {ratio}");
        }
    }
}

#[test]
fn renamed_alphabets_keep_their_accuracy() {
    let (n, m, eps) = (2000, 400, 0.3);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let text: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let pattern: Vec<i64> = (0..m).map(|_| rng.gen_range(0..4)).collect();
    let renamings: [[i64; 4]; 3] = [[0, 1, 2, 3], [3, 0, 2, 1], [-9, 1_000_000, 7, i64::MAX]];
    let base_exact = exact_profile(&text, &pattern, Metric::Hamming).unwrap();
    for (seed, names) in renamings.iter().enumerate() {
        let rename = |w: &[i64]| -> Vec<i64> { w.iter().map(|&c| names[c as usize]).collect() };
        let (rt, rp) = (rename(&text), rename(&pattern));
        let exact = exact_profile(&rt, &rp, Metric::Hamming).unwrap();
        assert_eq!(exact.values(), base_exact.values());
        let o = Overrides {
            d: Some(256),
            ..Default::default()
        };
        let params = derive_params_for(Regime::Hamming, n, m, eps, seed as u64, &o).unwrap();
        let est = hamming_profile(&rt, &rp, &params).unwrap();
        let within = est
            .values()
            .iter()
            .zip(exact.values())
            .filter(|(e, x)| (*e - *x).abs() <= eps * *x)
            .count();
        assert!(within as f64 >= 0.9 * est.len() as f64, "renaming {seed}: {within}/{}", est.len());
        assert!(est.values().iter().all(|&v| v >= 0.0));
    }
}
