//! Kummer's confluent hypergeometric function `1F1(alpha; gamma; z)`.
//!
//! Small `|z|`: the power series summed entirely in double-double so the
//! cancellation between terms of size `~e^|z|` on the imaginary axis does not
//! eat the result. Large `|z|`: the two-branch asymptotic expansion,
//! truncated at the smallest term.

use super::dd::{CDd, DD_EPS};
use super::gamma::{cgamma, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Controls the evaluation regimes of [`hyp1f1_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    /// Relative accuracy that a regime must reach to be accepted.
    pub tol: f64,
    /// `|z|` at which the asymptotic expansion takes over from the series.
    pub switch_radius: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { max_terms: 600, tol: 1e-12, switch_radius: 30.0 }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::InvalidInput("max_terms must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput("tol must be > 0".into()));
        }
        Ok(())
    }
}

/// Which expansion produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
}

/// Value plus the estimated relative error of the regime that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub est_rel_err: f64,
    pub regime: Regime,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_finite(args: &[Complex64]) -> Result<()> {
    if args.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("non-finite argument to 1F1".into()))
    }
}

/// `1F1(alpha; gamma; z)` with default [`SeriesControl`].
pub fn hyp1f1(alpha: Complex64, gamma: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(hyp1f1_with(alpha, gamma, z, &SeriesControl::default())?.value)
}

pub fn hyp1f1_with(
    alpha: Complex64,
    gamma: Complex64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<Evaluation> {
    ctl.validate()?;
    check_finite(&[alpha, gamma, z])?;
    if gamma.im == 0.0 && gamma.re <= 0.0 && gamma.re == gamma.re.round() {
        return Err(Error::GammaPole { re: gamma.re, im: gamma.im });
    }
    if z == c(0.0) || alpha == c(0.0) {
        return Ok(Evaluation { value: c(1.0), est_rel_err: 0.0, regime: Regime::Series });
    }

    let terminating = alpha.im == 0.0 && alpha.re < 0.0 && alpha.re == alpha.re.round();
    if terminating || z.norm() < ctl.switch_radius {
        let ev = series(alpha, gamma, z, ctl.max_terms);
        if ev.est_rel_err <= ctl.tol {
            return Ok(ev);
        }
        let asy = asymptotic(alpha, gamma, z, ctl.max_terms)?;
        return pick(ev, asy, ctl.tol);
    }
    let asy = asymptotic(alpha, gamma, z, ctl.max_terms)?;
    if asy.est_rel_err <= ctl.tol {
        return Ok(asy);
    }
    let ev = series(alpha, gamma, z, ctl.max_terms);
    pick(ev, asy, ctl.tol)
}

fn pick(a: Evaluation, b: Evaluation, tol: f64) -> Result<Evaluation> {
    let best = if a.est_rel_err <= b.est_rel_err { a } else { b };
    if best.est_rel_err <= tol {
        Ok(best)
    } else {
        Err(Error::NonConvergence { what: "1F1", est_err: best.est_rel_err })
    }
}

/// Power series in double-double arithmetic.
fn series(alpha: Complex64, gamma: Complex64, z: Complex64, max_terms: usize) -> Evaluation {
    let zd = CDd::from_c64(z);
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut max_term = 1.0_f64;
    // Terms can only shrink for good once n exceeds |z| and |alpha|.
    let n_min = (z.norm() + alpha.norm() + 2.0) as usize;
    let mut converged = false;
    let mut n = 0usize;
    let ad = CDd::from_c64(alpha);
    let gd = CDd::from_c64(gamma);
    while n < max_terms {
        let nf = CDd::from_c64(Complex64::new(n as f64, 0.0));
        let n1 = CDd::from_c64(Complex64::new(n as f64 + 1.0, 0.0));
        // parameter shifts in double-double: alpha + n rounds in f64
        term = term * (ad + nf) * zd / ((gd + nf) * n1);
        sum = sum + term;
        let t = term.norm_f64();
        max_term = max_term.max(t);
        n += 1;
        if t == 0.0 {
            converged = true;
            break;
        }
        if n > n_min && t < 1e-18 * sum.norm_f64() {
            converged = true;
            break;
        }
    }
    let value = sum.to_c64();
    let mag = value.norm();
    let est = if !converged || mag == 0.0 {
        f64::INFINITY
    } else {
        (max_term * DD_EPS * (n as f64)) / mag + f64::EPSILON
    };
    Evaluation { value, est_rel_err: est, regime: Regime::Series }
}

/// Large-`|z|` expansion with both exponential branches:
///
/// `1F1 = Gamma(g) [ e^{+-i pi a} z^{-a} / Gamma(g-a) S1 + e^z z^{a-g} / Gamma(a) S2 ]`
///
/// with `S1 = sum (a)_k (a-g+1)_k / k! (-z)^-k` and
/// `S2 = sum (g-a)_k (1-a)_k / k! z^-k`. The sign in the exponent is `+`
/// for `Im z >= 0`.
fn asymptotic(alpha: Complex64, gamma: Complex64, z: Complex64, max_terms: usize) -> Result<Evaluation> {
    let (s1, e1) = asymptotic_sum(alpha, alpha - gamma + 1.0, -z, max_terms);
    let (s2, e2) = asymptotic_sum(gamma - alpha, 1.0 - alpha, z, max_terms);

    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let ln_z = z.ln();
    let pref1 = (Complex64::new(0.0, sign * PI) * alpha - alpha * ln_z).exp() * rgamma(gamma - alpha);
    let pref2 = (z + (alpha - gamma) * ln_z).exp() * rgamma(alpha);
    let g = cgamma(gamma)?;
    let b1 = g * pref1 * s1;
    let b2 = g * pref2 * s2;
    let value = b1 + b2;
    let mag = value.norm();
    let abs_err = (g * pref1).norm() * e1 + (g * pref2).norm() * e2;
    let est = if mag == 0.0 { f64::INFINITY } else { abs_err / mag + 4.0 * f64::EPSILON };
    Ok(Evaluation { value, est_rel_err: est, regime: Regime::Asymptotic })
}

/// Sums `sum_k (p)_k (q)_k / k! w^{-k}` up to its smallest term.
/// Returns the partial sum and the size of the first omitted term.
fn asymptotic_sum(p: Complex64, q: Complex64, w: Complex64, max_terms: usize) -> (Complex64, f64) {
    let mut term = c(1.0);
    let mut sum = c(1.0);
    let mut last = 1.0_f64;
    for k in 0..max_terms {
        let kf = k as f64;
        let next = term * (p + kf) * (q + kf) / ((kf + 1.0) * w);
        let m = next.norm();
        if m == 0.0 {
            return (sum, 0.0);
        }
        if m > last {
            // divergence sets in; the omitted tail is of the order of `last`
            return (sum, last);
        }
        sum += next;
        term = next;
        last = m;
        if m < 1e-17 * sum.norm() {
            return (sum, m);
        }
    }
    (sum, last)
}
