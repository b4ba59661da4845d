//! Complex special functions: gamma, `1F1` and parabolic cylinder `D_nu`.

mod dd;
mod gamma;
mod hyp1f1;
mod pcf;
mod weber;

pub use gamma::{arg_gamma, arg_gamma_one_plus_ix, cgamma, ln_gamma, rgamma};
pub use hyp1f1::{hyp1f1, hyp1f1_with, Evaluation, Regime, SeriesControl};
pub use pcf::{pcf_d, pcf_d_prime, pcf_d_with, pcf_sum_difference};
pub use weber::WeberRay;

/// Complex scalar used throughout the crate.
pub type ComplexVal = num_complex::Complex64;

/// Removes `2 pi` jumps from a sequence of principal-branch phases in place.
pub fn unwrap_phases(phases: &mut [f64]) {
    use std::f64::consts::TAU;
    for k in 1..phases.len() {
        let d = phases[k] - phases[k - 1];
        phases[k] -= TAU * (d / TAU).round();
    }
}
