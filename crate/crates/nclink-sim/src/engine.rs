//! Deterministic parallel Monte Carlo BER sweeps.
//!
//! Every block is a pure function of `(seed, block index)` through the
//! counter-based streams, so results are bit-identical for any worker count:
//! workers only decide who evaluates which block. Blocks are processed in
//! fixed-size batches and the early-stop condition is checked at batch
//! boundaries only, which keeps the set of simulated blocks itself
//! schedule-independent.
//!
//! The same `(seed, block)` pair feeds every scheme and every antenna count,
//! so scheme comparisons ride on common random numbers. Early stopping at an
//! error target makes each point a negative-binomial-style estimate; the
//! reported BER still uses exactly the trials that were run.

use std::fmt;

use nclink_core::baseline::{med_design, med_detect, zf_train_detect, ZfBaselineConfig};
use nclink_core::channel::{
    apply_channel, draw_large_scale, ChannelRealization, RadiusPolicy,
};
use nclink_core::design::{optimal_design, sort_users, UserProfile};
use nclink_core::modem::{assemble_codeword, detect_ncml, RxBlock};
use nclink_core::rng::{BlockStreams, StreamRole};
use nclink_core::udcg::{BitWord, SubConstellationSet};
use rayon::prelude::*;

use crate::config::{Placement, Scheme, SimConfig};
use crate::record::BerRecord;

/// Blocks simulated between early-stop checks.
const BATCH: u64 = 4096;

#[derive(Debug)]
pub enum EngineError {
    Config(crate::config::ConfigError),
    Core(nclink_core::Error),
    Pool(String),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Config(e) => write!(f, "{e}"),
            EngineError::Core(e) => write!(f, "simulation error: {e}"),
            EngineError::Pool(e) => write!(f, "worker pool error: {e}"),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<crate::config::ConfigError> for EngineError {
    fn from(e: crate::config::ConfigError) -> Self {
        EngineError::Config(e)
    }
}

impl From<nclink_core::Error> for EngineError {
    fn from(e: nclink_core::Error) -> Self {
        EngineError::Core(e)
    }
}

fn radius_policy(placement: Placement) -> RadiusPolicy {
    match placement {
        Placement::Disk { radius_m } => RadiusPolicy::UniformDisk { radius_m },
        Placement::Fixed { distance_m } => RadiusPolicy::FixedDistance(distance_m),
    }
}

/// Draws this block's sorted user profiles (budget order, stable).
fn sorted_block_profiles(
    cfg: &SimConfig,
    powers_w: &[f64],
    streams: &BlockStreams,
) -> Result<Vec<UserProfile>, nclink_core::Error> {
    let betas = draw_large_scale(cfg.users, radius_policy(cfg.placement), &cfg.radio, streams)?;
    let profiles: Vec<UserProfile> =
        powers_w.iter().zip(&betas).map(|(&p, &b)| UserProfile::new(p, b)).collect();
    let order = sort_users(&profiles);
    Ok(order.into_iter().map(|i| profiles[i]).collect())
}

/// Simulates one block; returns this block's bit errors.
fn simulate_block(
    cfg: &SimConfig,
    powers_w: &[f64],
    antennas: usize,
    block: u64,
) -> Result<u64, nclink_core::Error> {
    let streams = BlockStreams::new(cfg.seed, block);
    let sorted = sorted_block_profiles(cfg, powers_w, &streams)?;
    let betas: Vec<f64> = sorted.iter().map(|p| p.beta).collect();
    let sigma2 = cfg.radio.noise_power_w();
    let chan =
        ChannelRealization::draw(antennas, betas, &mut streams.stream(StreamRole::Fading));
    let mut noise = streams.stream(StreamRole::Noise);
    let mut data = streams.stream(StreamRole::Data);

    match cfg.scheme {
        Scheme::Proposed => {
            let design = optimal_design(&sorted, sigma2)?;
            let set = SubConstellationSet::new(cfg.users, design.min_distance)?;
            let word = BitWord::random(&mut data, 2 * cfg.users);
            let tx = assemble_codeword(&word, &design, &sorted, &set)?;
            let y = apply_channel(&tx.symbols, &chan, sigma2, &mut noise)?;
            let rx = RxBlock::from_mat(&y)?;
            let (_, decided) = detect_ncml(&rx, &design, &set, sigma2)?;
            Ok(word.hamming_distance(&decided) as u64)
        }
        Scheme::Med => {
            let design = med_design(&sorted)?;
            let word = BitWord::random(&mut data, cfg.users);
            let x = design.tx_column(&word)?;
            let y = apply_channel(&x, &chan, sigma2, &mut noise)?;
            let decided = med_detect(&y.col(0), &design, sigma2);
            Ok(word.hamming_distance(&decided) as u64)
        }
        Scheme::ZfTrain => {
            let zf = ZfBaselineConfig::new(&sorted)?;
            let labels: Vec<u8> =
                (0..cfg.users).map(|_| (data.next_u64() >> 58) as u8).collect();
            let x = zf.tx_block(&labels, &sorted)?;
            let y = apply_channel(&x, &chan, sigma2, &mut noise)?;
            let decided = zf_train_detect(&y, &zf, &sorted)?;
            let errors: u32 =
                labels.iter().zip(&decided).map(|(a, b)| (a ^ b).count_ones()).sum();
            Ok(errors as u64)
        }
    }
}

/// Runs the configured sweep: one record per antenna count, each stopping at
/// the error target or the trial cap, whichever comes first.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<Vec<BerRecord>, EngineError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    let powers_w = cfg.powers_w();
    let bits_per_block = cfg.scheme.bits_per_block(cfg.users);

    let mut records = Vec::with_capacity(cfg.m_list.len());
    for &antennas in &cfg.m_list {
        let mut trials = 0u64;
        let mut errors = 0u64;
        while trials < cfg.trials && errors < cfg.error_target {
            let batch = BATCH.min(cfg.trials - trials);
            let batch_errors: u64 = pool.install(|| {
                (trials..trials + batch)
                    .into_par_iter()
                    .map(|block| simulate_block(cfg, &powers_w, antennas, block))
                    .try_reduce(|| 0, |a, b| Ok(a + b))
            })?;
            trials += batch;
            errors += batch_errors;
        }
        records.push(BerRecord::new(cfg, antennas, trials, trials * bits_per_block, errors));
    }
    Ok(records)
}
