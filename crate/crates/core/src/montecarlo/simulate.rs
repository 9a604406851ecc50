use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sampling::{sample_af_snr, sample_pf_snr, ChainParams};
use super::stats::{EstimateWithCI, Moments, SimConfig};
use crate::analysis::SystemConfig;

/// Quantity estimated from end-to-end SNR samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    /// `P[γ < γ_th]`.
    Outage { gamma_th: f64 },
    /// `E[½ log2(1 + γ)]` in bits/s/Hz.
    Capacity,
}

impl Metric {
    pub fn observe(&self, snr: f64) -> f64 {
        match *self {
            Metric::Outage { gamma_th } => f64::from(u8::from(snr < gamma_th)),
            Metric::Capacity => 0.5 * snr.ln_1p() / std::f64::consts::LN_2,
        }
    }

    fn estimate(&self, m: &Moments) -> EstimateWithCI {
        match self {
            Metric::Outage { .. } => EstimateWithCI::from_indicator(m),
            Metric::Capacity => EstimateWithCI::from_mean(m),
        }
    }
}

/// Generator for batch `index`: ChaCha8 keyed by the seed, one stream per
/// batch.
pub fn batch_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Accumulate `metric` over the samples of `sampler`, batch by batch.
///
/// Batches run concurrently; their records are merged in batch order so the
/// result does not depend on scheduling.
pub fn run_batches<S>(metric: Metric, sim: &SimConfig, sampler: S) -> EstimateWithCI
where
    S: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let records: Vec<Moments> = (0..sim.batches())
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(sim.seed(), b);
            let mut m = Moments::default();
            for _ in 0..sim.batch_len(b) {
                m.push(metric.observe(sampler(&mut rng)));
            }
            m
        })
        .collect();
    let total = records.into_iter().fold(Moments::default(), Moments::merge);
    metric.estimate(&total)
}

/// Empirical outage probability of the PF chain. A non-positive threshold
/// gives exactly zero.
pub fn simulate_outage(gamma_th: f64, config: &SystemConfig, sim: &SimConfig) -> EstimateWithCI {
    if gamma_th <= 0.0 {
        return EstimateWithCI::new(0.0, 0.0, 0);
    }
    let p = ChainParams::from(config);
    run_batches(Metric::Outage { gamma_th }, sim, |rng| sample_pf_snr(&p, rng))
}

/// Empirical ergodic capacity of the PF chain.
pub fn simulate_capacity(config: &SystemConfig, sim: &SimConfig) -> EstimateWithCI {
    let p = ChainParams::from(config);
    run_batches(Metric::Capacity, sim, |rng| sample_pf_snr(&p, rng))
}

/// Outage or capacity of the per-antenna CSI-assisted AF baseline (see
/// [`sample_af_snr`]).
pub fn simulate_af_baseline(metric: Metric, params: &ChainParams, sim: &SimConfig) -> EstimateWithCI {
    let p = *params;
    run_batches(metric, sim, move |rng| sample_af_snr(&p, rng))
}
