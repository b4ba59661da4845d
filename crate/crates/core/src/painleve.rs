//! The sigma form of Painleve IV satisfied by `sigma = a . G`
//!
//! `(sigma'')^2 + 1/4 (s sigma' - sigma)^2 = (sigma' - a)(sigma' + a)(sigma' - eps)`,
//!
//! its direct integration, and the maps to solutions `q`, `p` of the
//! conventional Painleve IV equation.

use crate::error::{Error, Result};
use crate::flow::{integrate_flow, make_initial_state_at, sigma_jet, FlowParams, FlowState, FlowTrajectory, SigmaJet};
use crate::odeint::{integrate_two_sided, IntegratorConfig, Trajectory};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

/// Parameters of the conventional PIV equations satisfied by `q` and `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivParams {
    pub alpha_q: Complex64,
    pub beta_q: Complex64,
    pub alpha_p: Complex64,
    pub beta_p: Complex64,
}

impl PivParams {
    pub fn new(params: &FlowParams) -> Self {
        let (a, e) = (params.a, params.eps);
        PivParams {
            alpha_q: Complex64::new(1.0, -(e - 3.0 * a) / 2.0),
            beta_q: Complex64::new((a + e).powi(2) / 2.0, 0.0),
            alpha_p: Complex64::new(-1.0, -(e + 3.0 * a) / 2.0),
            beta_p: Complex64::new((a - e).powi(2) / 2.0, 0.0),
        }
    }
}

/// `P(x) = (x - a)(x + a)(x - eps)` and its first two derivatives.
fn cubic(x: f64, a: f64, e: f64) -> (f64, f64, f64) {
    ((x - a) * (x + a) * (x - e), 3.0 * x * x - 2.0 * e * x - a * a, 6.0 * x - 2.0 * e)
}

pub fn sp4_residual(jet: &SigmaJet, params: &FlowParams) -> f64 {
    let x = jet.s * jet.sigma_p - jet.sigma;
    jet.sigma_pp * jet.sigma_pp + 0.25 * x * x - cubic(jet.sigma_p, params.a, params.eps).0
}

/// `sigma'''` from the derivative of the sigma equation. The common factor
/// `sigma''` cancels, so this holds at `sigma'' = 0` as well.
pub fn sigma_third(jet: &SigmaJet, params: &FlowParams) -> f64 {
    let x = jet.s * jet.sigma_p - jet.sigma;
    0.5 * cubic(jet.sigma_p, params.a, params.eps).1 - 0.25 * jet.s * x
}

pub fn sigma_fourth(jet: &SigmaJet, params: &FlowParams) -> f64 {
    let x = jet.s * jet.sigma_p - jet.sigma;
    let p2 = cubic(jet.sigma_p, params.a, params.eps).2;
    0.5 * p2 * jet.sigma_pp - 0.25 * x - 0.25 * jet.s * jet.s * jet.sigma_pp
}

/// Third-order field `(sigma, sigma', sigma'')' = (sigma', sigma'', sigma''')`.
pub fn sigma_field(params: &FlowParams) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + Copy {
    let p = *params;
    move |s, y| {
        let jet = SigmaJet { s, sigma: y[0], sigma_p: y[1], sigma_pp: y[2] };
        [y[1], y[2], sigma_third(&jet, &p)]
    }
}

/// Residual tolerance accepted for an initial jet, `1e-10 (1 + |s|^3)`.
pub fn jet_tolerance(s: f64) -> f64 {
    1e-10 * (1.0 + s.abs().powi(3))
}

/// `|sigma''|` below which a start is treated as lying on `sigma'' = 0`.
pub const SIGMA_PP_BAND: f64 = 1e-8;

/// Flow state whose sigma jet is `jet`, with `G'` in the `(e1, axis)` plane.
pub fn flow_state_from_jet(jet: &SigmaJet, params: &FlowParams) -> Result<FlowState> {
    let a = params.a;
    if a == 0.0 {
        return Err(Error::ZeroAxis);
    }
    let r = sp4_residual(jet, params);
    if r.abs() > jet_tolerance(jet.s) {
        return Err(Error::InconsistentCauchyData { reason: "jet violates the sigma equation", residual: r });
    }
    let ct = jet.sigma_p / a;
    if ct.abs() > 1.0 + 1e-12 {
        return Err(Error::InconsistentCauchyData { reason: "|sigma'| exceeds a", residual: ct.abs() - 1.0 });
    }
    let ct = ct.clamp(-1.0, 1.0);
    let st = (1.0 - ct * ct).sqrt();
    let n2 = params.eps - jet.sigma_p;
    if n2 < -1e-12 {
        return Err(Error::InconsistentCauchyData { reason: "eps - sigma' is negative", residual: -n2 });
    }
    let (e1, e2, e3) = params.frame();
    let gp = e1 * st + e3 * ct;
    let e_theta = e1 * ct - e3 * st;
    let x = jet.s * jet.sigma_p - jet.sigma;
    let mut gpp = if st > 1e-8 {
        e_theta * (-jet.sigma_pp / (a * st)) + e2 * (-x / (2.0 * a * st))
    } else {
        // G' on the axis: sigma'' and s sigma' - sigma must vanish
        let bad = jet.sigma_pp.abs().max(0.5 * x.abs());
        if bad > 1e-10 * (1.0 + jet.s.abs()) {
            return Err(Error::InconsistentCauchyData { reason: "jet at sigma' = +-a is not on a line", residual: bad });
        }
        e2 * n2.max(0.0).sqrt()
    };
    let n = gpp.norm();
    if n > 0.0 {
        gpp *= n2.max(0.0).sqrt() / n;
    }
    make_initial_state_at(params, jet.s, gp, gpp)
}

/// Where the jets of a [`SigmaTrajectory`] come from.
#[derive(Debug, Clone)]
pub enum SigmaSource {
    /// The third-order sigma equation.
    Direct(Trajectory<3>),
    /// The flow system started from an equivalent state.
    Flow(FlowTrajectory),
}

/// A solution of the sigma equation.
#[derive(Debug, Clone)]
pub struct SigmaTrajectory {
    pub params: FlowParams,
    pub source: SigmaSource,
}

impl SigmaTrajectory {
    pub fn jet_at(&self, s: f64) -> Result<SigmaJet> {
        match &self.source {
            SigmaSource::Direct(t) => {
                let y = t.eval(s)?;
                Ok(SigmaJet { s, sigma: y[0], sigma_p: y[1], sigma_pp: y[2] })
            }
            SigmaSource::Flow(f) => f.jet_at(s),
        }
    }

    pub fn is_flow_backed(&self) -> bool {
        matches!(self.source, SigmaSource::Flow(_))
    }

    pub fn node_jets(&self) -> Vec<SigmaJet> {
        match &self.source {
            SigmaSource::Direct(t) => t
                .nodes()
                .iter()
                .zip(t.states())
                .map(|(&s, y)| SigmaJet { s, sigma: y[0], sigma_p: y[1], sigma_pp: y[2] })
                .collect(),
            SigmaSource::Flow(f) => f.node_states().map(|st| sigma_jet(&st, &self.params).expect("a > 0")).collect(),
        }
    }

    /// Largest `|residual| / (1 + |s|^3)` over the nodes.
    pub fn residual_drift(&self) -> f64 {
        self.node_jets()
            .iter()
            .map(|j| sp4_residual(j, &self.params).abs() / (1.0 + j.s.abs().powi(3)))
            .fold(0.0, f64::max)
    }
}

/// Integrates the sigma equation from `jet0` over `[s_lo, s_hi]`.
///
/// Away from `sigma'' = 0` the third-order equation is integrated directly;
/// its residual in the second-order equation is a first integral. At
/// `sigma'' = 0` the second-order equation also admits the singular lines
/// `sigma = +-a s` and `sigma = eps s`, so the start is handed to the flow
/// system, which is unambiguous.
pub fn sp4_integrate(jet0: &SigmaJet, params: &FlowParams, s_lo: f64, s_hi: f64, cfg: &IntegratorConfig) -> Result<SigmaTrajectory> {
    let r = sp4_residual(jet0, params);
    if r.abs() > jet_tolerance(jet0.s) {
        return Err(Error::InconsistentCauchyData { reason: "initial jet violates the sigma equation", residual: r });
    }
    let source = if jet0.sigma_pp.abs() <= SIGMA_PP_BAND {
        let st = flow_state_from_jet(jet0, params)?;
        SigmaSource::Flow(integrate_flow(params, &st, s_lo, s_hi, cfg)?)
    } else {
        let y0 = [jet0.sigma, jet0.sigma_p, jet0.sigma_pp];
        SigmaSource::Direct(integrate_two_sided(sigma_field(params), y0, jet0.s, s_lo, s_hi, cfg)?)
    };
    Ok(SigmaTrajectory { params: *params, source })
}

fn w() -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4)
}

/// Argument `u = e^{-i pi / 4} s / 2` of `q` and `p`.
pub fn piv_argument(s: f64) -> Complex64 {
    w().conj() * (s / 2.0)
}

/// `q`, `dq/du`, `d^2q/du^2` at `u = piv_argument(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivJet {
    pub u: Complex64,
    pub q: Complex64,
    pub q_u: Complex64,
    pub q_uu: Complex64,
}

struct Lifted {
    n: [Complex64; 3],
    d: [f64; 3],
}

fn lift(jet: &SigmaJet, params: &FlowParams, sign: f64) -> Lifted {
    let s = jet.s;
    let s3 = sigma_third(jet, params);
    let s4 = sigma_fourth(jet, params);
    let x = s * jet.sigma_p - jet.sigma;
    let x1 = s * jet.sigma_pp;
    let x2 = jet.sigma_pp + s * s3;
    let i2 = Complex64::new(0.0, 0.5 * sign);
    Lifted {
        n: [jet.sigma_pp + i2 * x, s3 + i2 * x1, s4 + i2 * x2],
        d: if sign > 0.0 {
            [params.a - jet.sigma_p, -jet.sigma_pp, -s3]
        } else {
            [params.a + jet.sigma_p, jet.sigma_pp, s3]
        },
    }
}

fn map_jet(l: &Lifted, s: f64, map: &'static str) -> Result<PivJet> {
    let [n0, n1, n2] = l.n;
    let [d0, d1, d2] = l.d;
    if d0.abs() <= 1e-14 {
        return Err(Error::DenominatorVanishes { map, s });
    }
    // Q = -N / D and its s-derivatives; q(u) = w Q(s), du/ds = 1 / (2w).
    let q0 = -n0 / d0;
    let q1 = -(n1 * d0 - n0 * d1) / (d0 * d0);
    let q2 = -(n2 / d0 - 2.0 * n1 * d1 / (d0 * d0) - n0 * d2 / (d0 * d0) + 2.0 * n0 * d1 * d1 / (d0 * d0 * d0));
    let w = w();
    Ok(PivJet { u: piv_argument(s), q: w * q0, q_u: 2.0 * w * w * q1, q_uu: 4.0 * w * w * w * q2 })
}

pub fn to_q_jet(jet: &SigmaJet, params: &FlowParams) -> Result<PivJet> {
    map_jet(&lift(jet, params, 1.0), jet.s, "q")
}

pub fn to_p_jet(jet: &SigmaJet, params: &FlowParams) -> Result<PivJet> {
    map_jet(&lift(jet, params, -1.0), jet.s, "p")
}

/// `q(u)` with `e^{-i pi/4} q(u) = -(sigma'' + i/2 (s sigma' - sigma)) / (a - sigma')`.
pub fn to_q(jet: &SigmaJet, params: &FlowParams) -> Result<Complex64> {
    Ok(to_q_jet(jet, params)?.q)
}

/// `p(u)` with `e^{-i pi/4} p(u) = -(sigma'' - i/2 (s sigma' - sigma)) / (a + sigma')`.
pub fn to_p(jet: &SigmaJet, params: &FlowParams) -> Result<Complex64> {
    Ok(to_p_jet(jet, params)?.q)
}

/// `q'' - q'^2/(2q) - 3/2 q^3 - 4 u q^2 - 2 (u^2 - alpha) q - beta / q`.
pub fn cp4_residual(q: Complex64, q_u: Complex64, q_uu: Complex64, u: Complex64, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
    if q.norm() == 0.0 {
        return Err(Error::QVanishes);
    }
    Ok(q_uu - q_u * q_u / (2.0 * q) - 1.5 * q * q * q - 4.0 * u * q * q - 2.0 * (u * u - alpha) * q - beta / q)
}

/// Residual of a [`PivJet`], normalized by the size of its largest term.
pub fn cp4_relative(j: &PivJet, alpha: Complex64, beta: Complex64) -> Result<f64> {
    let r = cp4_residual(j.q, j.q_u, j.q_uu, j.u, alpha, beta)?;
    let q = j.q;
    let scale = [
        j.q_uu.norm(),
        (j.q_u * j.q_u / (2.0 * q)).norm(),
        (1.5 * q * q * q).norm(),
        (4.0 * j.u * q * q).norm(),
        (2.0 * (j.u * j.u - alpha) * q).norm(),
        (beta / q).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(r.norm() / scale.max(f64::MIN_POSITIVE))
}
