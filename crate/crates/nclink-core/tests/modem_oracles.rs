//! Detector and KL oracles that need Monte Carlo or exhaustive codebooks.

use nclink_core::channel::{apply_channel, ChannelRealization};
use nclink_core::design::{optimal_design, DesignSolution, GramStats, UserProfile};
use nclink_core::mat::Mat;
use nclink_core::modem::{
    assemble_codeword, detect_ncml, detect_ncml_general, kl_distance, RxBlock,
};
use nclink_core::rng::{BlockStreams, StreamRole};
use nclink_core::udcg::{BitWord, SubConstellationSet};
use nclink_core::Complex64;

fn setup(users: usize, sigma2: f64) -> (DesignSolution, Vec<UserProfile>, SubConstellationSet) {
    let profiles: Vec<UserProfile> =
        (0..users).map(|k| UserProfile::new(1.0 + k as f64, 1.0)).collect();
    let design = optimal_design(&profiles, sigma2).unwrap();
    let set = SubConstellationSet::new(users, design.min_distance).unwrap();
    (design, profiles, set)
}

fn codebook(
    design: &DesignSolution,
    profiles: &[UserProfile],
    set: &SubConstellationSet,
) -> Vec<Mat> {
    (0..1usize << (2 * design.users()))
        .map(|i| {
            let word = BitWord::from_index(i, 2 * design.users());
            assemble_codeword(&word, design, profiles, set).unwrap().symbols
        })
        .collect()
}

#[test]
fn near_noiseless_blocks_decode_perfectly() {
    let sigma2 = 3e-6;
    let (design, profiles, set) = setup(2, sigma2);
    let betas = vec![1.0, 1.0];
    let mut word_errors = 0;
    for block in 0..1000u64 {
        let streams = BlockStreams::new(21, block);
        let word = BitWord::random(&mut streams.stream(StreamRole::Data), 4);
        let tx = assemble_codeword(&word, &design, &profiles, &set).unwrap();
        let chan =
            ChannelRealization::draw(256, betas.clone(), &mut streams.stream(StreamRole::Fading));
        let y = apply_channel(&tx.symbols, &chan, sigma2, &mut streams.stream(StreamRole::Noise))
            .unwrap();
        let (_, decided) = detect_ncml(&RxBlock::from_mat(&y).unwrap(), &design, &set, sigma2)
            .unwrap();
        if decided != word {
            word_errors += 1;
        }
    }
    assert_eq!(word_errors, 0);
}

#[test]
fn general_and_two_slot_detectors_agree_on_noisy_blocks() {
    let sigma2 = 1.0;
    let (design, profiles, set) = setup(2, sigma2);
    let betas = vec![1.0, 1.0];
    let book = codebook(&design, &profiles, &set);
    let mut disagreements = 0;
    for block in 0..200u64 {
        let streams = BlockStreams::new(33, block);
        let word = BitWord::random(&mut streams.stream(StreamRole::Data), 4);
        let tx = assemble_codeword(&word, &design, &profiles, &set).unwrap();
        let chan =
            ChannelRealization::draw(8, betas.clone(), &mut streams.stream(StreamRole::Fading));
        let y = apply_channel(&tx.symbols, &chan, sigma2, &mut streams.stream(StreamRole::Noise))
            .unwrap();
        let (_, fast) = detect_ncml(&RxBlock::from_mat(&y).unwrap(), &design, &set, sigma2)
            .unwrap();
        let general = detect_ncml_general(&y, &book, &betas, sigma2).unwrap();
        if general != fast.to_index() {
            disagreements += 1;
        }
    }
    assert_eq!(disagreements, 0);
}

/// With one user all four hypotheses share `a`, `b`, and `|c|`, so under
/// noise that swamps the signal the decision must be uniform over the four
/// cells. Chi-square with 3 degrees of freedom, 95th percentile 7.815.
#[test]
fn decisions_under_pure_noise_are_uniform() {
    let sigma2 = 1e4;
    let (design, profiles, set) = setup(1, sigma2);
    let betas = vec![1.0];
    let blocks = 4000u64;
    let mut counts = [0u64; 4];
    for block in 0..blocks {
        let streams = BlockStreams::new(11, block);
        let word = BitWord::from_index(0, 2);
        let tx = assemble_codeword(&word, &design, &profiles, &set).unwrap();
        let chan =
            ChannelRealization::draw(4, betas.clone(), &mut streams.stream(StreamRole::Fading));
        let y = apply_channel(&tx.symbols, &chan, sigma2, &mut streams.stream(StreamRole::Noise))
            .unwrap();
        let (_, decided) = detect_ncml(&RxBlock::from_mat(&y).unwrap(), &design, &set, sigma2)
            .unwrap();
        counts[decided.to_index()] += 1;
    }
    let expected = blocks as f64 / 4.0;
    let chi2: f64 =
        counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < 7.815, "chi2 = {chi2}, counts {counts:?}");
}

fn quad_form(y1: Complex64, y2: Complex64, g: &GramStats) -> f64 {
    let det = g.a * g.b - g.c.norm_sqr();
    (g.b * y1.norm_sqr() + g.a * y2.norm_sqr() - 2.0 * (g.c * y1 * y2.conj()).re) / det
}

/// Samples the per-antenna log likelihood ratio under the true hypothesis;
/// its mean is the KL distance. Independent of the closed form's algebra.
#[test]
fn monte_carlo_likelihood_ratio_matches_closed_form() {
    let sigma2 = 0.5;
    let (design, profiles, set) = setup(2, sigma2);
    let betas = vec![1.0, 1.0];
    let book = codebook(&design, &profiles, &set);
    let (x, xt) = (&book[0], &book[5]);
    let closed = kl_distance(x, xt, &betas, sigma2).unwrap().value;

    let g = GramStats::of_block(x, &betas, sigma2).unwrap();
    let gt = GramStats::of_block(xt, &betas, sigma2).unwrap();
    let det = g.a * g.b - g.c.norm_sqr();
    let det_t = gt.a * gt.b - gt.c.norm_sqr();
    // Cholesky factor of the true covariance [[a, conj(c)], [c, b]].
    let l11 = g.a.sqrt();
    let l21 = g.c / l11;
    let l22 = (g.b - g.c.norm_sqr() / g.a).sqrt();

    let samples = 100_000;
    let streams = BlockStreams::new(7, 0);
    let mut rng = streams.stream(StreamRole::Noise);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let z1 = rng.next_cscg(1.0);
        let z2 = rng.next_cscg(1.0);
        let y1 = l11 * z1;
        let y2 = l21 * z1 + l22 * z2;
        let llr = quad_form(y1, y2, &gt) - quad_form(y1, y2, &g) + (det_t / det).ln();
        sum += llr;
        sum_sq += llr * llr;
    }
    let n = samples as f64;
    let mean = sum / n;
    let se = ((sum_sq / n - mean * mean) / n).sqrt();
    assert!(
        (mean - closed).abs() <= 2.0 * se,
        "mc {mean} closed {closed} se {se}"
    );
    assert!(se < 0.05 * closed, "oracle too noisy: se {se} closed {closed}");
}

#[test]
fn kl_is_zero_on_diagonal_and_positive_off_it() {
    let sigma2 = 0.5;
    let (design, profiles, set) = setup(2, sigma2);
    let betas = vec![1.0, 1.0];
    let book = codebook(&design, &profiles, &set);
    for (i, x) in book.iter().enumerate() {
        for (j, xt) in book.iter().enumerate() {
            let pair = kl_distance(x, xt, &betas, sigma2).unwrap();
            if i == j {
                assert_eq!(pair.value, 0.0, "diagonal pair {i}");
            } else {
                assert!(pair.value > 0.0, "pair ({i}, {j}) = {}", pair.value);
            }
            assert_eq!(pair.value_m(128), 128.0 * pair.value);
        }
    }
}

/// Distinct codewords must yield distinct Gram matrices (else the noncoherent
/// receiver could not separate them even with unlimited antennas), while the
/// diagonal stays constant by design.
#[test]
fn grams_identify_codewords_uniquely() {
    let sigma2 = 0.5;
    for users in 1..=3 {
        let (design, profiles, set) = setup(users, sigma2);
        let betas = vec![1.0; users];
        let book = codebook(&design, &profiles, &set);
        let grams: Vec<GramStats> =
            book.iter().map(|x| GramStats::of_block(x, &betas, sigma2).unwrap()).collect();
        let scale = grams[0].a;
        for g in &grams {
            assert!((g.a - grams[0].a).abs() <= 1e-12 * scale);
            assert!((g.b - grams[0].b).abs() <= 1e-12 * scale);
        }
        for (i, g) in grams.iter().enumerate() {
            for (j, gt) in grams.iter().enumerate() {
                if i == j {
                    continue;
                }
                let close = (g.a - gt.a).abs() <= 1e-9 * scale
                    && (g.b - gt.b).abs() <= 1e-9 * scale
                    && (g.c - gt.c).norm() <= 1e-9 * scale;
                assert!(!close, "{users} users: words {i} and {j} share a Gram");
            }
        }
    }
}
