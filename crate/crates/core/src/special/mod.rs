//! Special functions: complex gamma products, `K_ν`, digamma and Meijer
//! G-functions of one and two variables.

mod bessel;
mod contour;
mod gamma;
mod meijer;
pub mod quadrature;

pub use bessel::modified_bessel_k;
pub use contour::{
    auto_contour_bivariate, auto_contour_bivariate_with, auto_contour_univariate, auto_contour_univariate_with,
    BivariateGSpec, ContourSpec, MeijerGSpec,
};
pub use gamma::{digamma, gamma_prod, is_gamma_pole, ln_gamma, ln_gamma_prod, ln_gamma_real, EULER_GAMMA};
pub use meijer::{bivariate_meijer_g, bivariate_meijer_g_log, meijer_g, meijer_g_log, meijer_g_scaled, ScaledValue};
