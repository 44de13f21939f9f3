//! Gamma factors, the cutoff functions `V_s` of the approximate functional
//! equation, and the equation itself.

mod afe;
mod gamma;
mod kernel;
mod shape;

pub use afe::{
    afe_evaluate, afe_first_term, afe_quadratic, afe_second_term, afe_second_term_naive,
    epsilon_factor, AfeValue, Coefficients, FnCoefficients, SeriesValue,
};
pub use gamma::{gamma_complex, ln_gamma_complex, stirling_gamma};
pub use kernel::{
    cutoff_V, decay_check, default_height, truncation_bound, AfeConfig, CutoffKernel, DecayReport,
    KernelKind, KernelValue,
};
pub use shape::{gamma_factor, ln_gamma_factor, GammaShape};
