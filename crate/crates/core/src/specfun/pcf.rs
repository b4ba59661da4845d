//! Parabolic cylinder function `D_nu(z)` through its even/odd `1F1` parts.

use super::gamma::rgamma;
use super::hyp1f1::{hyp1f1_with, SeriesControl};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

/// Even and odd parts `D_nu(z) + D_nu(-z)` and `D_nu(z) - D_nu(-z)`:
///
/// `D(z) + D(-z) = 2^{nu/2+1} sqrt(pi) e^{-z^2/4} M(-nu/2, 1/2, z^2/2) / Gamma((1-nu)/2)`
/// `D(z) - D(-z) = -2^{(nu+3)/2} sqrt(pi) z e^{-z^2/4} M((1-nu)/2, 3/2, z^2/2) / Gamma(-nu/2)`
pub fn pcf_sum_difference(
    order: Complex64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<(Complex64, Complex64, f64)> {
    let w = z * z / 2.0;
    let m_even = hyp1f1_with(-order / 2.0, Complex64::new(0.5, 0.0), w, ctl)?;
    let m_odd = hyp1f1_with((1.0 - order) / 2.0, Complex64::new(1.5, 0.0), w, ctl)?;
    let pref = Complex64::new(2.0, 0.0).powc(order / 2.0) * PI.sqrt() * (-z * z / 4.0).exp();
    let even = 2.0 * pref * m_even.value * rgamma((1.0 - order) / 2.0);
    let odd = -2.0 * SQRT_2 * pref * z * m_odd.value * rgamma(-order / 2.0);
    let abs_err = even.norm() * m_even.est_rel_err + odd.norm() * m_odd.est_rel_err;
    Ok((even, odd, abs_err))
}

/// `D_order(z)` with default [`SeriesControl`].
pub fn pcf_d(order: Complex64, z: Complex64) -> Result<Complex64> {
    pcf_d_with(order, z, &SeriesControl::default())
}

pub fn pcf_d_with(order: Complex64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    if !(order.re.is_finite() && order.im.is_finite() && z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidInput("non-finite argument to D".into()));
    }
    let (even, odd, abs_err) = pcf_sum_difference(order, z, ctl)?;
    let value = (even + odd) / 2.0;
    let scale = value.norm();
    // the even/odd split cancels when D is exponentially small
    let rel = if scale > 0.0 { abs_err / (2.0 * scale) } else if abs_err == 0.0 { 0.0 } else { f64::INFINITY };
    if rel > ctl.tol.max(1e-9) {
        return Err(Error::NonConvergence { what: "parabolic cylinder D", est_err: rel });
    }
    Ok(value)
}

/// `D'_nu(z) = z/2 D_nu(z) - D_{nu+1}(z)`.
pub fn pcf_d_prime(order: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(z / 2.0 * pcf_d(order, z)? - pcf_d(order + 1.0, z)?)
}
