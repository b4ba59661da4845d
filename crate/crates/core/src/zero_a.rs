//! The `a = 0` flow in closed form: `1F1` and parabolic-cylinder
//! representations of `G'`, the scalar `zeta` equation and its Riccati
//! linearisation, and the limiting tangents as `s -> +-inf`.
//!
//! Cauchy data throughout: `G'(0) = e1`, `G''(0) = sqrt(eps) e2`.

use crate::error::{Error, Result};
use crate::flow::{g_second, g_third, make_initial_state, FlowParams, FlowState};
use crate::specfun::{arg_gamma, cgamma, hyp1f1, pcf_sum_difference, SeriesControl, WeberRay};
use nalgebra::{Matrix6, Vector3, Vector6};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroAParams {
    pub eps: f64,
}

impl ZeroAParams {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::Domain { what: "a = 0 flow needs eps >= 0", value: eps });
        }
        Ok(ZeroAParams { eps })
    }

    /// The same flow as a [`FlowParams`] with `a = 0` and the default frame.
    pub fn flow_params(&self) -> FlowParams {
        FlowParams::new(0.0, self.eps).expect("eps >= 0")
    }

    /// `G'(0) = e1`, `G''(0) = sqrt(eps) e2`, `G(0) = 2 sqrt(eps) e3`.
    pub fn initial_state(&self) -> FlowState {
        let p = self.flow_params();
        make_initial_state(&p, Vector3::x(), Vector3::y() * self.eps.sqrt()).expect("consistent by construction")
    }
}

/// `(G', G'')` from the `1F1` representation.
pub fn g_jet_hyp(s: f64, params: &ZeroAParams) -> Result<(Vector3<f64>, Vector3<f64>)> {
    let e = params.eps;
    if e == 0.0 {
        return Ok((Vector3::x(), Vector3::zeros()));
    }
    let z = c(0.0, s * s / 4.0);
    let dz = c(0.0, s / 2.0);
    // F = M(1/2 + i e/4, 3/2, i s^2/4), H = M(-i e/4, 1/2, -i s^2/4)
    let fa = c(0.5, e / 4.0);
    let f = hyp1f1(fa, c(1.5, 0.0), z)?;
    let fp = fa / 1.5 * hyp1f1(fa + 1.0, c(2.5, 0.0), z)? * dz;
    let ha = c(0.0, -e / 4.0);
    let h = hyp1f1(ha, c(0.5, 0.0), -z)?;
    let hp = ha / 0.5 * hyp1f1(ha + 1.0, c(1.5, 0.0), -z)? * (-dz);

    let g1 = 1.0 - e * s * s / 2.0 * f.norm_sqr();
    let g1p = -e * s * f.norm_sqr() - e * s * s * (f.conj() * fp).re;
    let se = e.sqrt();
    let w = se * s * f * h;
    let wp = se * (f * h + s * fp * h + s * f * hp);
    Ok((Vector3::new(g1, w.re, w.im), Vector3::new(g1p, wp.re, wp.im)))
}

/// Unit tangent `G'(s)` from the `1F1` representation.
pub fn g_prime_hyp(s: f64, params: &ZeroAParams) -> Result<Vector3<f64>> {
    Ok(g_jet_hyp(s, params)?.0)
}

/// `G = s G' + 2 G' x G''`, from the `1F1` jet.
pub fn reconstruct_g(s: f64, params: &ZeroAParams) -> Result<Vector3<f64>> {
    let (gp, gpp) = g_jet_hyp(s, params)?;
    Ok(gp * s + 2.0 * gp.cross(&gpp))
}

/// Closed-form flow state at `s`.
pub fn closed_form_state(s: f64, params: &ZeroAParams) -> Result<FlowState> {
    let (gp, gpp) = g_jet_hyp(s, params)?;
    Ok(FlowState { s, g: gp * s + 2.0 * gp.cross(&gpp), gp })
}

/// Integration constants `tanh(lambda_+-)` of one component in homogeneous
/// form `(p, q)`, `tanh = p / q`. `q = 0` stands for `lambda = i pi/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcfConstants {
    pub plus: (Complex64, Complex64),
    pub minus: (Complex64, Complex64),
}

/// `tanh(lambda_{+,2}) = -(2 e^{i pi/4} / sqrt(eps)) Gamma(1 + i eps/4) / Gamma(1/2 + i eps/4)`.
fn tanh_lambda_2(eps: f64) -> Result<Complex64> {
    let ratio = cgamma(c(1.0, eps / 4.0))? / cgamma(c(0.5, eps / 4.0))?;
    Ok(-2.0 * Complex64::from_polar(1.0, FRAC_PI_4) / eps.sqrt() * ratio)
}

/// Constants for component `j` (1, 2 or 3). For `j = 3`, `tanh(lambda_{+-,3})
/// = -+i tanh(lambda_{+-,2})`; the opposite sign choice flips `G3'`.
pub fn pcf_constants(params: &ZeroAParams, j: usize) -> Result<PcfConstants> {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    match j {
        1 => Ok(PcfConstants { plus: (one, zero), minus: (one, zero) }),
        2 | 3 => {
            let tp = tanh_lambda_2(params.eps)?;
            let tm = tp.conj();
            if j == 2 {
                Ok(PcfConstants { plus: (tp, one), minus: (tm, one) })
            } else {
                Ok(PcfConstants { plus: (-I * tp, one), minus: (I * tm, one) })
            }
        }
        _ => Err(Error::InvalidInput(format!("component index {j} not in 1..=3"))),
    }
}

/// `kappa` in homogeneous form, `e^{pi eps/4}(q+ q- + p+ p-) + e^{-pi eps/4}(q+ q- - p+ p-)`.
fn kappa_h(k: &PcfConstants, eps: f64) -> Complex64 {
    let (pp, qp) = k.plus;
    let (pm, qm) = k.minus;
    (PI * eps / 4.0).exp() * (qp * qm + pp * pm) + (-PI * eps / 4.0).exp() * (qp * qm - pp * pm)
}

/// `G'_j = 1 - prod_nu (q_nu (D(z_nu) + D(-z_nu)) + p_nu (D(z_nu) - D(-z_nu))) / kappa`,
/// with `z_+- = e^{+-i pi/4} s/sqrt2` and orders `-+i eps/2`.
fn assemble(k: &PcfConstants, eps: f64, sums: [(Complex64, Complex64); 2]) -> f64 {
    let f = |(p, q): (Complex64, Complex64), (even, odd): (Complex64, Complex64)| q * even + p * odd;
    let num = f(k.plus, sums[0]) * f(k.minus, sums[1]);
    (1.0 - num / kappa_h(k, eps)).re
}

/// Component `G'_j(s)` from the parabolic-cylinder representation, with
/// `D` evaluated through its `1F1` parts.
pub fn g_prime_pcf(s: f64, params: &ZeroAParams, j: usize) -> Result<f64> {
    let k = pcf_constants(params, j)?;
    let e = params.eps;
    if e == 0.0 {
        return Ok(if j == 1 { 1.0 } else { 0.0 });
    }
    let ctl = SeriesControl::default();
    let mut sums = [(c(0.0, 0.0), c(0.0, 0.0)); 2];
    for (idx, nu) in [1.0, -1.0].into_iter().enumerate() {
        let z = Complex64::from_polar(s / SQRT_2, nu * FRAC_PI_4);
        let (even, odd, _) = pcf_sum_difference(c(0.0, -nu * e / 2.0), z, &ctl)?;
        sums[idx] = (even, odd);
    }
    Ok(assemble(&k, e, sums))
}

/// The parabolic-cylinder representation on `[-s_max, s_max]` with `D`
/// from Weber's equation integrated along the four diagonal rays.
#[derive(Debug, Clone)]
pub struct PcfWeber {
    params: ZeroAParams,
    // rays for z_+, -z_+, z_-, -z_-
    rays: [WeberRay; 4],
    constants: [PcfConstants; 3],
}

impl PcfWeber {
    pub fn new(params: &ZeroAParams, s_max: f64) -> Result<Self> {
        if params.eps == 0.0 {
            return Err(Error::Domain { what: "Weber route needs eps > 0", value: 0.0 });
        }
        let r_max = s_max.abs() / SQRT_2 + 1e-9;
        let e = params.eps;
        let (np, nm) = (c(0.0, -e / 2.0), c(0.0, e / 2.0));
        let rays = [
            WeberRay::new(np, FRAC_PI_4, r_max, 1e-13)?,
            WeberRay::new(np, FRAC_PI_4 + PI, r_max, 1e-13)?,
            WeberRay::new(nm, -FRAC_PI_4, r_max, 1e-13)?,
            WeberRay::new(nm, PI - FRAC_PI_4, r_max, 1e-13)?,
        ];
        let constants = [pcf_constants(params, 1)?, pcf_constants(params, 2)?, pcf_constants(params, 3)?];
        Ok(PcfWeber { params: *params, rays, constants })
    }

    pub fn g_prime(&self, s: f64, j: usize) -> Result<f64> {
        if !(1..=3).contains(&j) {
            return Err(Error::InvalidInput(format!("component index {j} not in 1..=3")));
        }
        let r = s.abs() / SQRT_2;
        // for s < 0 the rays swap roles
        let (a, b, cc, d) = if s >= 0.0 { (0, 1, 2, 3) } else { (1, 0, 3, 2) };
        let dp = self.rays[a].eval(r)?.0;
        let dpm = self.rays[b].eval(r)?.0;
        let dm = self.rays[cc].eval(r)?.0;
        let dmm = self.rays[d].eval(r)?.0;
        Ok(assemble(&self.constants[j - 1], self.params.eps, [(dp + dpm, dp - dpm), (dm + dmm, dm - dmm)]))
    }

    pub fn g_prime_vec(&self, s: f64) -> Result<Vector3<f64>> {
        Ok(Vector3::new(self.g_prime(s, 1)?, self.g_prime(s, 2)?, self.g_prime(s, 3)?))
    }
}

/// Jet `(s, zeta, zeta', zeta'')` of a scalar projection `zeta = e . G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaJet<T> {
    pub s: f64,
    pub zeta: T,
    pub zeta_p: T,
    pub zeta_pp: T,
}

/// `zeta''^2 + (s zeta' - zeta)^2/4 - eps (1 - zeta'^2)`.
pub fn zeta_residual(jet: &ZetaJet<f64>, params: &ZeroAParams) -> f64 {
    let x = jet.s * jet.zeta_p - jet.zeta;
    jet.zeta_pp.powi(2) + x * x / 4.0 - params.eps * (1.0 - jet.zeta_p.powi(2))
}

/// Null-vector variant `zeta''^2 + (s zeta' - zeta)^2/4 + eps zeta'^2`.
pub fn zeta_residual_null(jet: &ZetaJet<Complex64>, params: &ZeroAParams) -> Complex64 {
    let x = jet.s * jet.zeta_p - jet.zeta;
    jet.zeta_pp * jet.zeta_pp + x * x / 4.0 + params.eps * jet.zeta_p * jet.zeta_p
}

/// Projection of an `a = 0` flow state on a fixed vector.
pub fn zeta_jet(state: &FlowState, e: &Vector3<f64>, params: &ZeroAParams) -> ZetaJet<f64> {
    let gpp = g_second(state, &params.flow_params());
    ZetaJet { s: state.s, zeta: e.dot(&state.g), zeta_p: e.dot(&state.gp), zeta_pp: e.dot(&gpp) }
}

/// Projection on the complex vector `e_re + i e_im`.
pub fn zeta_jet_complex(state: &FlowState, e_re: &Vector3<f64>, e_im: &Vector3<f64>, params: &ZeroAParams) -> ZetaJet<Complex64> {
    let a = zeta_jet(state, e_re, params);
    let b = zeta_jet(state, e_im, params);
    ZetaJet { s: a.s, zeta: c(a.zeta, b.zeta), zeta_p: c(a.zeta_p, b.zeta_p), zeta_pp: c(a.zeta_pp, b.zeta_pp) }
}

/// Riccati data at one point: `q_+-`, their derivatives and the residuals
/// of `2 q' = q^2 +- i s q + eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiSample {
    pub s: f64,
    pub q_plus: Complex64,
    pub q_minus: Complex64,
    pub dq_plus: Complex64,
    pub dq_minus: Complex64,
    pub residual_plus: f64,
    pub residual_minus: f64,
    /// `|q+ q- - eps (1 + zeta')/(1 - zeta')|`.
    pub product_residual: f64,
}

/// Builds `q_+- = (zeta'' +- (i/2)(s zeta' - zeta)) / (1 - zeta')` for
/// `zeta = e . G` and checks both Riccati equations. `q'` uses `zeta'''`
/// from the flow.
pub fn riccati_check(state: &FlowState, e: &Vector3<f64>, params: &ZeroAParams) -> Result<RiccatiSample> {
    let fp = params.flow_params();
    let s = state.s;
    let j = zeta_jet(state, e, params);
    let z3 = e.dot(&g_third(state, &fp));
    let den = 1.0 - j.zeta_p;
    if den.abs() < 1e-12 {
        return Err(Error::DenominatorVanishes { map: "Riccati q", s });
    }
    let x = s * j.zeta_p - j.zeta;
    let mut out = [(c(0.0, 0.0), c(0.0, 0.0), 0.0); 2];
    for (idx, sg) in [1.0, -1.0].into_iter().enumerate() {
        let n = c(j.zeta_pp, sg * x / 2.0);
        // (s zeta' - zeta)' = s zeta''
        let np = c(z3, sg * s * j.zeta_pp / 2.0);
        let q = n / den;
        let dq = (np * den + n * j.zeta_pp) / (den * den);
        let r = 2.0 * dq - q * q - sg * I * s * q - params.eps;
        out[idx] = (q, dq, r.norm() / (1.0 + q.norm_sqr() + params.eps));
    }
    let prod = out[0].0 * out[1].0 - params.eps * (1.0 + j.zeta_p) / den;
    Ok(RiccatiSample {
        s,
        q_plus: out[0].0,
        q_minus: out[1].0,
        dq_plus: out[0].1,
        dq_minus: out[1].1,
        residual_plus: out[0].2,
        residual_minus: out[1].2,
        product_residual: prod.norm(),
    })
}

/// Limiting tangents as `s -> +-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymTangents {
    pub t_plus: Vector3<f64>,
    pub t_minus: Vector3<f64>,
    /// `arg Gamma(1 + i eps/4)`.
    pub beta1: f64,
    /// `arg Gamma(1/2 + i eps/4) - pi/4`.
    pub beta2: f64,
}

impl AsymTangents {
    /// `T+ . T- = 2 e^{-pi eps} - 1`.
    pub fn dot(&self) -> f64 {
        self.t_plus.dot(&self.t_minus)
    }

    pub fn angle(&self) -> f64 {
        self.dot().clamp(-1.0, 1.0).acos()
    }
}

/// `T+- = (e^{-pi eps/2}, +-sqrt(1 - e^{-pi eps}) cos(b1 - b2), +-sqrt(1 - e^{-pi eps}) sin(b1 - b2))`.
pub fn asym_tangents(params: &ZeroAParams) -> Result<AsymTangents> {
    let e = params.eps;
    let beta1 = arg_gamma(1.0, e / 4.0)?;
    let beta2 = arg_gamma(0.5, e / 4.0)? - FRAC_PI_4;
    let x = (-PI * e / 2.0).exp();
    let r = (-(-PI * e).exp_m1()).sqrt();
    let (sn, cs) = (beta1 - beta2).sin_cos();
    Ok(AsymTangents {
        t_plus: Vector3::new(x, r * cs, r * sn),
        t_minus: Vector3::new(x, -r * cs, -r * sn),
        beta1,
        beta2,
    })
}

/// `Omega(s) = s^2/4 + eps ln(s/2)` for `s > 0`.
pub fn omega_phase(s: f64, eps: f64) -> f64 {
    s * s / 4.0 + eps * (s / 2.0).ln()
}

/// Large-`|s|` form of `G'` with the `O(s^-2)` remainder dropped; `s < 0`
/// by parity (`G1'` even, `G2'`, `G3'` odd).
pub fn g_prime_asymptotic(s: f64, params: &ZeroAParams) -> Result<Vector3<f64>> {
    if s == 0.0 {
        return Err(Error::Domain { what: "asymptotic form needs s != 0", value: s });
    }
    let e = params.eps;
    let t = asym_tangents(params)?;
    let (b1, b2) = (t.beta1, t.beta2);
    let u = s.abs();
    let om = omega_phase(u, e);
    let h = (-PI * e / 2.0).exp();
    let g1 = h + 2.0 * (e * -(-PI * e).exp_m1()).sqrt() / u * (om - b1 - b2).cos();
    let w = (-(-PI * e).exp_m1()).sqrt() * Complex64::from_polar(1.0, b1 - b2)
        + e.sqrt() / u
            * ((1.0 - h) * Complex64::from_polar(1.0, -om + 2.0 * b1) - (1.0 + h) * Complex64::from_polar(1.0, om - 2.0 * b2));
    let sg = s.signum();
    Ok(Vector3::new(g1, sg * w.re, sg * w.im))
}

/// Least-squares limiting direction from tangent samples on one side:
/// each component is fitted to `c0 + (c1 cos Omega + c2 sin Omega)/s +
/// c3/s^2 + (c4 cos 2 Omega + c5 sin 2 Omega)/s^2`; returns the normalised `c0`.
pub fn fit_limiting_tangent(samples: &[(f64, Vector3<f64>)], eps: f64) -> Result<Vector3<f64>> {
    if samples.len() < 12 {
        return Err(Error::InvalidInput("too few samples for a tangent fit".into()));
    }
    let mut ata = Matrix6::zeros();
    let mut atb = [Vector6::zeros(); 3];
    for &(s, v) in samples {
        let u = s.abs();
        if u == 0.0 {
            return Err(Error::Domain { what: "tangent fit needs s != 0", value: s });
        }
        let om = omega_phase(u, eps);
        let row = Vector6::new(1.0, om.cos() / u, om.sin() / u, 1.0 / (u * u), (2.0 * om).cos() / (u * u), (2.0 * om).sin() / (u * u));
        ata += row * row.transpose();
        for k in 0..3 {
            atb[k] += row * v[k];
        }
    }
    let lu = ata.lu();
    let mut t = Vector3::zeros();
    for k in 0..3 {
        let sol = lu.solve(&atb[k]).ok_or_else(|| Error::InvalidInput("degenerate tangent fit".into()))?;
        t[k] = sol[0];
    }
    Ok(t.normalize())
}
