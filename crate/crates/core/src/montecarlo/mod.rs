//! Monte-Carlo simulation of the relaying chain and of a CSI-assisted
//! amplify-and-forward baseline.

mod sampling;
mod simulate;
mod stats;

pub use sampling::{
    complex_gaussian, qr_projection, sample_af_snr, sample_e2e_snr, sample_pf_snr, sample_pinhole_snr,
    sample_qr_dof_snr, ChainParams, QrProjection,
};
pub use simulate::{batch_rng, run_batches, simulate_af_baseline, simulate_capacity, simulate_outage, Metric};
pub use stats::{EstimateWithCI, Moments, SimConfig, Z95};
