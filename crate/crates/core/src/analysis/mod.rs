//! SNR densities, outage probability and ergodic capacity of the relaying
//! chain: truncated series, asymptotes and quadrature references.

mod capacity;
mod config;
mod density;
mod outage;
mod series;

pub use capacity::{
    capacity_asymptotic_high_snr, capacity_asymptotic_large_beta, capacity_asymptotic_zero, capacity_exact,
    capacity_kernel_specs, capacity_numeric_quadrature, capacity_upper_limit, CAPACITY_TAIL, OUTER_TERM_WARNING,
};
pub use config::{db_to_linear, linear_to_db, SystemConfig, Truncation};
pub use density::{ccdf_gamma_sr, pdf_gamma_rd, pdf_gamma_sr};
pub use outage::{
    e2e_cdf_derivative, outage_asymptotic, outage_exact, outage_quadrature, OutageValue, NEGATIVE_DENSITY_FLOOR,
};
pub use series::{series_coefficient, CompensatedSum};
