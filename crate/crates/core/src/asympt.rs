//! Large-`|s|` behaviour of the sigma function and the connection between
//! the two tails.
//!
//! On the `+` side, with `k = (eps + 6w)/3`, `m = a^2 - 12w^2 + eps^2/3`,
//! `|A| = R(w)/9` and `Theta = s^2/4 - 6w ln(s/sqrt2) + delta`,
//!
//! ```text
//! sigma   = k s + m/s + 4|A| sin(Theta)/s^2 + 8 D1/s^3
//! sigma'  = k + 2|A| cos(Theta)/s - m/s^2
//! sigma'' = -|A| sin(Theta)
//! ```
//!
//! The `-` side is the reflection `sigma(s) = -sigma~(-s)` of a `+` side
//! solution `sigma~` with its own parameters.

use crate::error::{Error, Result};
use crate::flow::{FlowParams, FlowTrajectory, SigmaJet};
use crate::specfun::arg_gamma_one_plus_ix;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI, SQRT_2, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// Asymptotic data of one tail. `rho` is `None` when `Im rho` is infinite,
/// i.e. at the boundary values of `omega` where the oscillation vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams {
    pub side: Side,
    pub omega: f64,
    pub delta: f64,
    pub rho: Option<Complex64>,
}

impl TailParams {
    /// Builds the tail from `(omega, delta)`, deriving `rho`.
    pub fn new(side: Side, omega: f64, delta: f64, params: &FlowParams) -> Self {
        let delta = wrap_angle(delta);
        let rho = im_rho(omega, params).ok().map(|im| Complex64::new(re_rho(delta, omega, params), im));
        TailParams { side, omega, delta, rho }
    }
}

/// Coefficients `A`, `B` of the oscillating terms and the `D1` polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub d1: f64,
}

impl ExpansionCoeffs {
    /// Real-solution coefficients, `B = conj(A)`, `arg A = delta + 3 w ln 2`.
    pub fn from_tail(tail: &TailParams, params: &FlowParams) -> Result<Self> {
        let amp = r_of_omega(tail.omega, params)? / 9.0;
        let a = Complex64::from_polar(amp, tail.delta + 3.0 * tail.omega * LN_2);
        Ok(ExpansionCoeffs { a, b: a.conj(), d1: d1_coefficient(tail.omega, params) })
    }
}

/// Maps an angle to `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x - TAU * (x / TAU).round();
    if y <= -PI {
        y + TAU
    } else if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Closed interval allowed for `omega`.
pub fn omega_bounds(params: &FlowParams) -> (f64, f64) {
    let (a, e) = (params.a, params.eps);
    (-a / 2.0 - e / 6.0, (e / 3.0).min(a / 2.0 - e / 6.0))
}

fn bounds_slack(params: &FlowParams) -> f64 {
    1e-6 * (1.0 + params.a + params.eps.abs())
}

/// `R(w)^2 = 6 (eps - 3w)(9a^2 - (eps + 6w)^2)`.
pub fn r_squared(omega: f64, params: &FlowParams) -> f64 {
    let (a, e) = (params.a, params.eps);
    6.0 * (e - 3.0 * omega) * (9.0 * a * a - (e + 6.0 * omega).powi(2))
}

/// The nonnegative root `R(w)`. Values within rounding of a bound give 0.
pub fn r_of_omega(omega: f64, params: &FlowParams) -> Result<f64> {
    let (lo, hi) = omega_bounds(params);
    let slack = bounds_slack(params);
    if omega < lo - slack || omega > hi + slack {
        return Err(Error::OmegaOutOfBounds { omega, lo, hi });
    }
    Ok(r_squared(omega, params).max(0.0).sqrt())
}

/// `A B` for real solutions, `2 (eps - 3w)(9a^2 - (eps + 6w)^2) / 27`.
pub fn amplitude_product(omega: f64, params: &FlowParams) -> f64 {
    let (a, e) = (params.a, params.eps);
    2.0 * (e - 3.0 * omega) * (9.0 * a * a - (e + 6.0 * omega).powi(2)) / 27.0
}

pub fn d1_coefficient(omega: f64, params: &FlowParams) -> f64 {
    let (a, e) = (params.a, params.eps);
    -12.0 * omega.powi(3) + (e * e + 3.0 * a * a) * omega / 2.0 + e * (e * e - 9.0 * a * a) / 36.0
}

/// Linear coefficient `k = (eps + 6w)/3` and `1/s` coefficient `m`.
pub fn slope_and_drift(omega: f64, params: &FlowParams) -> (f64, f64) {
    let (a, e) = (params.a, params.eps);
    ((e + 6.0 * omega) / 3.0, a * a - 12.0 * omega * omega + e * e / 3.0)
}

/// Oscillation phase `s^2/4 - 6w ln(|s|/sqrt2) + delta`.
pub fn tail_phase(s: f64, omega: f64, delta: f64) -> f64 {
    s * s / 4.0 - 6.0 * omega * (s.abs() / SQRT_2).ln() + delta
}

/// Leading-plus-oscillatory models of `C^2` and `(eps - 3w)(T - s/2)`.
pub fn model_curv_tors(s: f64, tail: &TailParams, params: &FlowParams) -> Result<(f64, f64)> {
    let r = r_of_omega(tail.omega, params)?;
    let cth = tail_phase(s, tail.omega, tail.delta).cos();
    let c2 = 2.0 * (params.eps - 3.0 * tail.omega) / 3.0 - 2.0 * r * cth / (9.0 * s.abs());
    Ok((c2, tail.side.sign() * r * cth / 12.0))
}

/// `(sigma, sigma', sigma'')` from the truncated expansion on the side of `tail`.
pub fn sigma_model(s: f64, tail: &TailParams, coeffs: &ExpansionCoeffs, params: &FlowParams) -> (f64, f64, f64) {
    let t = s.abs();
    let (k, m) = slope_and_drift(tail.omega, params);
    let amp = coeffs.a.norm();
    let th = tail_phase(t, tail.omega, tail.delta);
    let (sn, cs) = th.sin_cos();
    let sig = k * t + m / t + 4.0 * amp * sn / (t * t) + 8.0 * coeffs.d1 / t.powi(3);
    let sig_p = k + 2.0 * amp * cs / t - m / (t * t);
    let sig_pp = -amp * sn;
    match tail.side {
        Side::Plus => (sig, sig_p, sig_pp),
        Side::Minus => (-sig, sig_p, -sig_pp),
    }
}

/// `Im rho` fixed by reality of the solution.
pub fn im_rho(omega: f64, params: &FlowParams) -> Result<f64> {
    let (a, e) = (params.a, params.eps);
    let v = 4.0
        * (-3.0 * PI * omega).exp()
        * (PI * (e - 3.0 * omega) / 3.0).sinh()
        * ((PI * a).cosh() - (PI * (e + 6.0 * omega) / 3.0).cosh());
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::NonPositiveExponential { value: v });
    }
    Ok(-0.5 * v.ln())
}

fn gamma_phases(omega: f64, params: &FlowParams) -> f64 {
    let (a, e) = (params.a, params.eps);
    arg_gamma_one_plus_ix((e + 6.0 * omega - 3.0 * a) / 6.0)
        + arg_gamma_one_plus_ix((e + 6.0 * omega + 3.0 * a) / 6.0)
        + arg_gamma_one_plus_ix((3.0 * omega - e) / 3.0)
}

/// `Re rho = delta - (three arg Gamma terms) + 3 pi / 4`, not reduced mod `2 pi`.
pub fn re_rho(delta: f64, omega: f64, params: &FlowParams) -> f64 {
    delta - gamma_phases(omega, params) + 0.75 * PI
}

/// Inverse of [`re_rho`], reduced to `(-pi, pi]`.
pub fn delta_from_rho(re_rho: f64, omega: f64, params: &FlowParams) -> f64 {
    wrap_angle(re_rho + gamma_phases(omega, params) - 0.75 * PI)
}

/// `2 e^{-pi eps/3} cosh(pi a) + e^{2 pi eps/3}`.
fn k_const(params: &FlowParams) -> f64 {
    2.0 * (-PI * params.eps / 3.0).exp() * (PI * params.a).cosh() + (2.0 * PI * params.eps / 3.0).exp()
}

/// Tolerance on `Im rho` consistency in [`connect`].
pub const IM_RHO_TOL: f64 = 1e-6;

/// The tail on the other side from the connection formulas.
pub fn connect(tail: &TailParams, params: &FlowParams) -> Result<TailParams> {
    let rho = tail.rho.ok_or(Error::NonPositiveExponential { value: 0.0 })?;
    let w = tail.omega;
    let k = k_const(params);
    let e2w = (2.0 * PI * w).exp();
    let lhs = 2.0 * (4.0 * PI * w).exp() * ((-rho.im).exp() * rho.re.cos() - 1.0) + e2w * k;
    if !(lhs > 0.0) {
        return Err(Error::NonPositiveExponential { value: lhs });
    }
    let w2 = -lhs.ln() / (2.0 * PI);
    let i = Complex64::new(0.0, 1.0);
    let e_irho = (i * rho).exp();
    let num = k - (-2.0 * PI * (w + w2)).exp() - e2w * (1.0 - e_irho);
    let e_irho2 = 1.0 - num / (2.0 * PI * w2).exp();
    let rho2 = Complex64::new(e_irho2.arg(), -e_irho2.norm().ln());
    let expected = im_rho(w2, params)?;
    let mismatch = (rho2.im - expected).abs();
    if mismatch > IM_RHO_TOL * (1.0 + expected.abs()) {
        return Err(Error::ImRhoMismatch { mismatch });
    }
    // keep Re rho on the branch that is continuous with the input
    let re = rho2.re + TAU * ((rho.re - rho2.re) / TAU).round();
    let delta = delta_from_rho(re, w2, params);
    Ok(TailParams { side: tail.side.other(), omega: w2, delta, rho: Some(Complex64::new(re, rho2.im)) })
}

/// Residuals of the two connection formulas for a pair of tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionResiduals {
    /// First formula, `e^{-2 pi w-}` from the `+` data.
    pub first_upper: f64,
    /// First formula, `e^{-2 pi w+}` from the `-` data.
    pub first_lower: f64,
    /// Second formula (complex), modulus.
    pub second: f64,
}

impl ConnectionResiduals {
    pub fn max(&self) -> f64 {
        self.first_upper.max(self.first_lower).max(self.second)
    }
}

pub fn connection_residuals(plus: &TailParams, minus: &TailParams, params: &FlowParams) -> Result<ConnectionResiduals> {
    let (rp, rm) = match (plus.rho, minus.rho) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NonPositiveExponential { value: 0.0 }),
    };
    let k = k_const(params);
    let first = |w_from: f64, r: Complex64, w_to: f64| {
        let rhs = 2.0 * (4.0 * PI * w_from).exp() * ((-r.im).exp() * r.re.cos() - 1.0) + (2.0 * PI * w_from).exp() * k;
        let lhs = (-2.0 * PI * w_to).exp();
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
    };
    let i = Complex64::new(0.0, 1.0);
    let (wp, wm) = (plus.omega, minus.omega);
    let lhs = (2.0 * PI * wp).exp() * (1.0 - (i * rp).exp()) + (2.0 * PI * wm).exp() * (1.0 - (i * rm).exp());
    let rhs = k - (-2.0 * PI * (wp + wm)).exp();
    Ok(ConnectionResiduals {
        first_upper: first(wp, rp, wm),
        first_lower: first(wm, rm, wp),
        second: (lhs - rhs).norm() / lhs.norm().max(rhs.abs()).max(1.0),
    })
}

/// Outcome of a tail fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub tail: TailParams,
    /// Fitted amplitude of `sigma'` oscillation times `|s|`, i.e. `2|A|`.
    pub amplitude: f64,
    /// RMS residual of the quadrature fit.
    pub residual: f64,
    pub samples: usize,
    /// Window in `|s|`.
    pub window: (f64, f64),
}

impl TailFit {
    /// Fitted amplitude over the model value `2 R(w) / 9`.
    pub fn amplitude_ratio(&self, params: &FlowParams) -> Result<f64> {
        Ok(self.amplitude / (2.0 * r_of_omega(self.tail.omega, params)? / 9.0))
    }
}

/// Minimum number of oscillation periods a window must cover.
pub const MIN_PERIODS: f64 = 5.0;

/// Smallest `|s|` accepted at the inner edge of a fit window.
pub const MIN_WINDOW_START: f64 = 15.0;

/// Fit settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Samples per local oscillation period at the outer edge.
    pub samples_per_period: usize,
    /// Apply the Gauss-Newton correction of `omega` from the phase residual.
    pub refine_omega: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { samples_per_period: 24, refine_omega: false }
    }
}

/// Default window `[0.6 s_max, s_max]` in `|s|`.
pub fn default_window(s_max: f64) -> (f64, f64) {
    (0.6 * s_max, s_max)
}

/// Fits one tail of a flow trajectory on the window `[s_lo, s_hi]`
/// (actual `s` values, on the side's half-line).
pub fn fit_tail(traj: &FlowTrajectory, side: Side, window: (f64, f64), opts: &FitOptions) -> Result<TailFit> {
    let (s_lo, s_hi) = window;
    if !(s_lo < s_hi) {
        return Err(Error::InvalidInput("fit window must have s_lo < s_hi".into()));
    }
    let (t_lo, t_hi) = match side {
        Side::Plus => (s_lo, s_hi),
        Side::Minus => (-s_hi, -s_lo),
    };
    check_window(t_lo, t_hi)?;
    let n = ((t_hi - t_lo) * t_hi / (4.0 * PI) * opts.samples_per_period as f64).ceil() as usize + 1;
    let mut jets = Vec::with_capacity(n);
    for k in 0..n {
        let t = t_lo + (t_hi - t_lo) * k as f64 / (n - 1) as f64;
        jets.push(traj.jet_at(side.sign() * t)?);
    }
    fit_tail_samples(&jets, &traj.params, side, opts)
}

fn check_window(t_lo: f64, t_hi: f64) -> Result<()> {
    if t_lo < MIN_WINDOW_START - 1e-12 {
        return Err(Error::InvalidInput(format!(
            "fit window must satisfy |s| >= {MIN_WINDOW_START} (inner edge {t_lo})"
        )));
    }
    let periods = (t_hi * t_hi - t_lo * t_lo) / (8.0 * PI);
    if periods < MIN_PERIODS {
        return Err(Error::WindowTooShort { periods, required: MIN_PERIODS });
    }
    Ok(())
}

/// Tail fit from jets sampled on one side.
///
/// `omega` comes from the slope of `sigma` corrected by the known `1/s` and
/// `1/s^3` terms; `delta` from a linear least-squares fit of the cosine and
/// sine quadratures of the detrended `sigma'` and of `sigma''`.
pub fn fit_tail_samples(jets: &[SigmaJet], params: &FlowParams, side: Side, opts: &FitOptions) -> Result<TailFit> {
    if params.a == 0.0 {
        return Err(Error::ZeroAxis);
    }
    let sg = side.sign();
    // reflected data: t > 0, sigma~(t) = sg sigma(s), sigma~' = sigma', sigma~'' = sg sigma''
    let data: Vec<(f64, f64, f64, f64)> = jets
        .iter()
        .filter(|j| j.s * sg > 0.0)
        .map(|j| (j.s * sg, sg * j.sigma, j.sigma_p, sg * j.sigma_pp))
        .collect();
    if data.len() < 16 {
        return Err(Error::InvalidInput("too few samples on the requested side".into()));
    }
    let t_lo = data.iter().map(|d| d.0).fold(f64::INFINITY, f64::min);
    let t_hi = data.iter().map(|d| d.0).fold(0.0, f64::max);
    check_window(t_lo, t_hi)?;

    let mut omega = (3.0 * data.iter().map(|d| d.2).sum::<f64>() / data.len() as f64 - params.eps) / 6.0;
    for _ in 0..8 {
        let (_, m) = slope_and_drift(omega, params);
        let d1 = d1_coefficient(omega, params);
        let (num, den) = data.iter().fold((0.0, 0.0), |(n, d), &(t, s, _, _)| {
            (n + t * (s - m / t - 8.0 * d1 / t.powi(3)), d + t * t)
        });
        omega = (3.0 * num / den - params.eps) / 6.0;
    }

    let (mut c1, mut c2) = quadratures(&data, omega, params);
    if opts.refine_omega {
        let (w, a1, a2) = gauss_newton(&data, omega, c1, c2, params);
        omega = w;
        c1 = a1;
        c2 = a2;
    }
    let (lo, hi) = omega_bounds(params);
    let slack = bounds_slack(params);
    if omega < lo - slack || omega > hi + slack {
        return Err(Error::OmegaOutOfBounds { omega, lo, hi });
    }
    if params.eps - 3.0 * omega < -slack {
        return Err(Error::OmegaOutOfBounds { omega, lo, hi });
    }
    let resid = quadrature_residual(&data, omega, c1, c2, params);
    let delta = (-c2).atan2(c1);
    Ok(TailFit {
        tail: TailParams::new(side, omega, delta, params),
        amplitude: c1.hypot(c2),
        residual: resid,
        samples: data.len(),
        window: (t_lo, t_hi),
    })
}

/// Rows `(phi0, r, v)` with `r = (sigma' - k + m/t^2) t ~ 2|A| cos(Theta)` and
/// `v = -2 sigma'' ~ 2|A| sin(Theta)`.
fn quadrature_rows(data: &[(f64, f64, f64, f64)], omega: f64, params: &FlowParams) -> Vec<(f64, f64, f64)> {
    let (k, m) = slope_and_drift(omega, params);
    data.iter()
        .map(|&(t, _, sp, spp)| (tail_phase(t, omega, 0.0), (sp - k + m / (t * t)) * t, -2.0 * spp))
        .collect()
}

/// Least squares for `r = c1 cos(phi0) + c2 sin(phi0)`, `v = c1 sin(phi0) - c2 cos(phi0)`.
/// Each pair of rows is orthonormal in `(c1, c2)`, so the normal matrix is `n I`.
fn quadratures(data: &[(f64, f64, f64, f64)], omega: f64, params: &FlowParams) -> (f64, f64) {
    let rows = quadrature_rows(data, omega, params);
    let (mut b1, mut b2) = (0.0, 0.0);
    for &(ph, r, v) in &rows {
        let (sn, cs) = ph.sin_cos();
        b1 += cs * r + sn * v;
        b2 += sn * r - cs * v;
    }
    let n = rows.len() as f64;
    (b1 / n, b2 / n)
}

fn quadrature_residual(data: &[(f64, f64, f64, f64)], omega: f64, c1: f64, c2: f64, params: &FlowParams) -> f64 {
    let rows = quadrature_rows(data, omega, params);
    let ss: f64 = rows
        .iter()
        .map(|&(ph, r, v)| {
            let (sn, cs) = ph.sin_cos();
            (r - c1 * cs - c2 * sn).powi(2) + (v - c1 * sn + c2 * cs).powi(2)
        })
        .sum();
    (ss / (2 * rows.len()) as f64).sqrt()
}

/// One Gauss-Newton step on `(omega, c1, c2)` for the quadrature residual.
/// The step is kept only if it lowers that residual.
fn gauss_newton(data: &[(f64, f64, f64, f64)], omega: f64, c1: f64, c2: f64, params: &FlowParams) -> (f64, f64, f64) {
    let h = 1e-7;
    let res = |w: f64, a1: f64, a2: f64| -> Vec<f64> {
        quadrature_rows(data, w, params)
            .iter()
            .flat_map(|&(ph, r, v)| {
                let (sn, cs) = ph.sin_cos();
                [r - a1 * cs - a2 * sn, v - a1 * sn + a2 * cs]
            })
            .collect()
    };
    let r0 = res(omega, c1, c2);
    let rw = res(omega + h, c1, c2);
    let rows = quadrature_rows(data, omega, params);
    let mut jtj = Matrix3::zeros();
    let mut jtr = Vector3::zeros();
    for (idx, &(ph, _, _)) in rows.iter().enumerate() {
        let (sn, cs) = ph.sin_cos();
        for (q, (dc1, dc2)) in [(-cs, -sn), (-sn, cs)].into_iter().enumerate() {
            let i = 2 * idx + q;
            let jrow = Vector3::new((rw[i] - r0[i]) / h, dc1, dc2);
            jtj += jrow * jrow.transpose();
            jtr += jrow * r0[i];
        }
    }
    let Some(step) = jtj.lu().solve(&(-jtr)) else {
        return (omega, c1, c2);
    };
    let (w1, a1, a2) = (omega + step[0], c1 + step[1], c2 + step[2]);
    let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    if norm(&res(w1, a1, a2)) < norm(&r0) {
        (w1, a1, a2)
    } else {
        (omega, c1, c2)
    }
}

/// Phase-averaged `s^3 (sigma~ - k t - m/t - 4|A| sin(Theta)/t^2)` over the
/// jets on one side; the expansion predicts `8 D1`.
pub fn d1_estimate(jets: &[SigmaJet], tail: &TailParams, params: &FlowParams) -> Result<f64> {
    let coeffs = ExpansionCoeffs::from_tail(tail, params)?;
    let sg = tail.side.sign();
    let (k, m) = slope_and_drift(tail.omega, params);
    let amp = coeffs.a.norm();
    // trapezoid average in t, which averages the oscillation out
    let pts: Vec<(f64, f64)> = jets
        .iter()
        .filter(|j| j.s * sg > 0.0)
        .map(|j| {
            let t = j.s * sg;
            let v = sg * j.sigma - k * t - m / t - 4.0 * amp * tail_phase(t, tail.omega, tail.delta).sin() / (t * t);
            (t, v * t.powi(3))
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidInput("too few samples for the D1 estimate".into()));
    }
    let mut area = 0.0;
    for w in pts.windows(2) {
        area += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    Ok(area / (pts[pts.len() - 1].0 - pts[0].0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(a: f64, e: f64) -> FlowParams {
        FlowParams::new(a, e).unwrap()
    }

    #[test]
    fn r_squared_over_ab_is_81() {
        for &(a, e) in &[(1.0, 0.0), (1.0, 0.3), (2.0, 1.0), (10.0, 4.0)] {
            let p = params(a, e);
            let (lo, hi) = omega_bounds(&p);
            for k in 1..10 {
                let w = lo + (hi - lo) * k as f64 / 10.0;
                assert_abs_diff_eq!(r_squared(w, &p) / amplitude_product(w, &p), 81.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn r_vanishes_at_the_bounds() {
        let p = params(1.0, 0.3);
        assert_eq!(r_of_omega(0.1, &p).unwrap(), 0.0);
        // eps + 6w = 3a
        assert_abs_diff_eq!(r_of_omega((3.0 - 0.3) / 6.0 - 1e-12, &FlowParams::new(1.0, 0.3).unwrap()).unwrap_or(0.0), 0.0, epsilon = 1e-5);
        assert!(matches!(r_of_omega(1.0, &p), Err(Error::OmegaOutOfBounds { .. })));
    }

    #[test]
    fn d1_at_zero_omega() {
        let p = params(1.3, 0.7);
        assert_abs_diff_eq!(d1_coefficient(0.0, &p), 0.7 * (0.49 - 9.0 * 1.69) / 36.0, epsilon = 1e-15);
    }

    #[test]
    fn curvature_model_is_flat_without_oscillation() {
        let p = params(1.0, 0.3);
        let tail = TailParams::new(Side::Plus, 0.1, 0.4, &p);
        for &s in &[20.0, 31.5, 44.0] {
            let (c2, t) = model_curv_tors(s, &tail, &p).unwrap();
            assert_abs_diff_eq!(c2, 2.0 * (0.3 - 0.3) / 3.0, epsilon = 1e-15);
            assert_eq!(t, 0.0);
        }
    }

    #[test]
    fn curvature_model_mean_over_a_period() {
        let p = params(1.0, 0.0);
        let tail = TailParams::new(Side::Plus, -0.2, 1.0, &p);
        let s0 = 30.0;
        let period = 4.0 * PI / s0;
        let n = 2000;
        let mean: f64 = (0..n)
            .map(|k| model_curv_tors(s0 + period * (k as f64 + 0.5) / n as f64, &tail, &p).unwrap().0)
            .sum::<f64>()
            / n as f64;
        assert!((mean - 2.0 * (0.0 + 0.6) / 3.0).abs() < 1.0 / (s0 * s0));
    }

    #[test]
    fn sigma_model_without_oscillation() {
        let p = params(1.2, 0.5);
        let tail = TailParams { side: Side::Plus, omega: -0.1, delta: 0.0, rho: None };
        let coeffs = ExpansionCoeffs { a: Complex64::new(0.0, 0.0), b: Complex64::new(0.0, 0.0), d1: 0.0 };
        let s = 7.0;
        let (_, sp, spp) = sigma_model(s, &tail, &coeffs, &p);
        let (k, m) = slope_and_drift(-0.1, &p);
        assert_abs_diff_eq!(sp, k - m / (s * s), epsilon = 1e-15);
        assert_eq!(spp, 0.0);
        // the sigma' model is the derivative of the sigma model
        let coeffs = ExpansionCoeffs::from_tail(&TailParams::new(Side::Plus, -0.1, 0.3, &p), &p).unwrap();
        let tail = TailParams::new(Side::Plus, -0.1, 0.3, &p);
        let h = 1e-5;
        let s = 40.0;
        let d = (sigma_model(s + h, &tail, &coeffs, &p).0 - sigma_model(s - h, &tail, &coeffs, &p).0) / (2.0 * h);
        // they differ at O(s^-3)
        assert_abs_diff_eq!(d, sigma_model(s, &tail, &coeffs, &p).1, epsilon = 10.0 / s.powi(3));
    }

    #[test]
    fn rho_maps_invert() {
        let p = params(1.0, 0.3);
        for &(d, w) in &[(0.3, -0.1), (-2.9, 0.05), (3.1, -0.4)] {
            let r = re_rho(d, w, &p);
            assert_abs_diff_eq!(delta_from_rho(r, w, &p), wrap_angle(d), epsilon = 1e-14);
        }
        // degenerate: all three gamma arguments zero needs eps = 3w and eps + 6w = +-3a
        let p0 = params(0.0, 0.0);
        assert_abs_diff_eq!(re_rho(0.2, 0.0, &p0), 0.2 + 0.75 * PI, epsilon = 1e-15);
    }

    #[test]
    fn im_rho_diverges_at_bounds() {
        let p = params(1.0, 0.0);
        assert!(im_rho(0.0, &p).is_err());
        for bound in [0.0, -0.5] {
            let toward = if bound == 0.0 { -1.0 } else { 1.0 };
            let v: Vec<f64> = [1e-3, 1e-6, 1e-9, 1e-12].iter().map(|d| im_rho(bound + toward * d, &p).unwrap()).collect();
            assert!(v.windows(2).all(|w| w[1] > w[0] + 1.0), "{v:?}");
        }
        assert!(im_rho(-0.2, &p).unwrap().is_finite());
    }

    #[test]
    fn connect_round_trip() {
        for &(a, e, w, d) in &[(1.0, 0.3, -0.12, 0.7), (2.0, 1.0, -0.3, -2.0), (1.0, 0.0, -0.05, 2.5)] {
            let p = params(a, e);
            let plus = TailParams::new(Side::Plus, w, d, &p);
            let minus = connect(&plus, &p).unwrap();
            assert_eq!(minus.side, Side::Minus);
            let res = connection_residuals(&plus, &minus, &p).unwrap();
            assert!(res.max() <= 1e-8, "{res:?}");
            let back = connect(&minus, &p).unwrap();
            assert_abs_diff_eq!(back.omega, plus.omega, epsilon = 1e-8);
            assert_abs_diff_eq!(wrap_angle(back.delta - plus.delta), 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn connect_fixed_point_at_conjectured_odd_data() {
        let (a, e) = (1.0f64, 0.0f64);
        let p = params(a, e);
        let w = e / 12.0 - (2.0 * (PI * a / 2.0).cosh() - (PI * e / 2.0).exp()).ln() / TAU;
        let d = delta_from_rho(PI, w, &p);
        let plus = TailParams::new(Side::Plus, w, d, &p);
        let minus = connect(&plus, &p).unwrap();
        assert_abs_diff_eq!(minus.omega, w, epsilon = 1e-10);
        assert_abs_diff_eq!(wrap_angle(minus.delta - d), 0.0, epsilon = 1e-8);
    }

    fn synthetic(p: &FlowParams, side: Side, w: f64, d: f64, t_lo: f64, t_hi: f64) -> Vec<SigmaJet> {
        let tail = TailParams::new(side, w, d, p);
        let coeffs = ExpansionCoeffs::from_tail(&tail, p).unwrap();
        let n = 6000;
        (0..n)
            .map(|k| {
                let t = t_lo + (t_hi - t_lo) * k as f64 / (n - 1) as f64;
                let s = side.sign() * t;
                let (sg, sp, spp) = sigma_model(s, &tail, &coeffs, p);
                SigmaJet { s, sigma: sg, sigma_p: sp, sigma_pp: spp }
            })
            .collect()
    }

    #[test]
    fn fit_round_trip_on_the_model() {
        let p = params(1.0, 0.3);
        for side in [Side::Plus, Side::Minus] {
            for &(w, d) in &[(-0.12, 0.7), (-0.3, -2.5), (0.02, 3.0)] {
                let jets = synthetic(&p, side, w, d, 27.0, 45.0);
                for refine in [false, true] {
                    let fit = fit_tail_samples(&jets, &p, side, &FitOptions { refine_omega: refine, ..Default::default() }).unwrap();
                    assert_abs_diff_eq!(fit.tail.omega, w, epsilon = 1e-4);
                    assert_abs_diff_eq!(wrap_angle(fit.tail.delta - d), 0.0, epsilon = 1e-3);
                    assert_abs_diff_eq!(fit.amplitude_ratio(&p).unwrap(), 1.0, epsilon = 1e-2);
                }
            }
        }
    }

    #[test]
    fn fit_of_a_straight_line() {
        // the line sigma = a s is a flow solution for eps = a, where omega sits
        // on both bounds and the 1/s, 1/s^3 coefficients vanish
        let (a, e) = (1.0, 1.0);
        let p = params(a, e);
        let jets: Vec<SigmaJet> = (0..3000)
            .map(|k| {
                let s = 27.0 + 18.0 * k as f64 / 2999.0;
                SigmaJet { s, sigma: a * s, sigma_p: a, sigma_pp: 0.0 }
            })
            .collect();
        let fit = fit_tail_samples(&jets, &p, Side::Plus, &FitOptions { refine_omega: false, ..Default::default() });
        let fit = fit.unwrap();
        assert_abs_diff_eq!(fit.tail.omega, (3.0 * a - e) / 6.0, epsilon = 1e-12);
        assert!(fit.amplitude < 1e-12);
        // Im rho is infinite on the bound, or huge within rounding of it
        assert!(fit.tail.rho.is_none_or(|r| r.im > 10.0));
    }

    #[test]
    fn window_checks() {
        let p = params(1.0, 0.3);
        let jets = synthetic(&p, Side::Plus, -0.1, 0.0, 15.0, 16.0);
        assert!(matches!(fit_tail_samples(&jets, &p, Side::Plus, &FitOptions::default()), Err(Error::WindowTooShort { .. })));
        let jets = synthetic(&p, Side::Plus, -0.1, 0.0, 10.0, 40.0);
        assert!(matches!(fit_tail_samples(&jets, &p, Side::Plus, &FitOptions::default()), Err(Error::InvalidInput(_))));
    }
}
