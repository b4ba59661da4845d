//! The self-similar system `G'' = 1/2 (a^G + G) ^ G'` and everything read
//! off its solutions: conserved `eps`, the sigma jet, curvature and torsion,
//! the spherical-angle form, the rotated filament and the Hasimoto field.

use crate::error::{Error, Result};
use crate::odeint::{integrate_two_sided, IntegratorConfig, Trajectory};
use nalgebra::Vector3;
use num_complex::Complex64;

/// Torsion is left undefined where `C^2` is at or below this value.
pub const CURVATURE_FLOOR: f64 = 1e-10;

/// `(a, eps)` and the unit direction of the axis vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub a: f64,
    pub eps: f64,
    pub axis: Vector3<f64>,
}

impl FlowParams {
    pub fn new(a: f64, eps: f64) -> Result<Self> {
        Self::with_axis(a, eps, Vector3::z())
    }

    pub fn with_axis(a: f64, eps: f64, axis: Vector3<f64>) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::Domain { what: "a must be finite and >= 0", value: a });
        }
        if !eps.is_finite() || eps < -a - 1e-12 {
            return Err(Error::Domain { what: "eps must satisfy eps >= -a", value: eps });
        }
        let n = axis.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidInput("axis must be a non-zero finite vector".into()));
        }
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("axis must be a unit vector (norm {n})")));
        }
        Ok(FlowParams { a, eps, axis })
    }

    /// The axis vector `a * axis`.
    pub fn avec(&self) -> Vector3<f64> {
        self.axis * self.a
    }

    /// Orthonormal frame `(e1, e2, axis)`, right-handed.
    pub fn frame(&self) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let e3 = self.axis;
        let trial = if e3.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (trial - e3 * e3.dot(&trial)).normalize();
        let e2 = e3.cross(&e1);
        (e1, e2, e3)
    }
}

/// `(G, G')` at arc parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub s: f64,
    pub g: Vector3<f64>,
    pub gp: Vector3<f64>,
}

impl FlowState {
    pub fn to_array(&self) -> [f64; 6] {
        [self.g.x, self.g.y, self.g.z, self.gp.x, self.gp.y, self.gp.z]
    }

    pub fn from_array(s: f64, y: &[f64; 6]) -> Self {
        FlowState { s, g: Vector3::new(y[0], y[1], y[2]), gp: Vector3::new(y[3], y[4], y[5]) }
    }
}

/// `(s, sigma, sigma', sigma'')` with `sigma = a . G`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaJet {
    pub s: f64,
    pub sigma: f64,
    pub sigma_p: f64,
    pub sigma_pp: f64,
}

/// Curvature scaling `C` and torsion scaling `T` at `s`. `t` is `None` where
/// the curvature vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvTorsSample {
    pub s: f64,
    pub c: f64,
    pub t: Option<f64>,
}

/// State at `s = 0` from `G'(0)` and `G''(0)`.
pub fn make_initial_state(params: &FlowParams, gp0: Vector3<f64>, gpp0: Vector3<f64>) -> Result<FlowState> {
    make_initial_state_at(params, 0.0, gp0, gpp0)
}

/// State at `s0` from `G'(s0)` and `G''(s0)`, solving `a^G + G = W` with
/// `W = s G' + 2 G'^G''`.
pub fn make_initial_state_at(params: &FlowParams, s0: f64, gp0: Vector3<f64>, gpp0: Vector3<f64>) -> Result<FlowState> {
    let unit = (gp0.norm_squared() - 1.0).abs();
    if unit > 1e-12 {
        return Err(Error::InconsistentCauchyData { reason: "G' is not a unit vector", residual: unit });
    }
    let orth = gp0.dot(&gpp0).abs();
    if orth > 1e-12 * (1.0 + gpp0.norm()) {
        return Err(Error::InconsistentCauchyData { reason: "G'' is not orthogonal to G'", residual: orth });
    }
    let av = params.avec();
    let eps_res = (gpp0.norm_squared() + av.dot(&gp0) - params.eps).abs();
    if eps_res > 1e-12 * (1.0 + params.eps.abs()) {
        return Err(Error::InconsistentCauchyData { reason: "|G''|^2 + a.G' differs from eps", residual: eps_res });
    }
    let w = gp0 * s0 + gp0.cross(&gpp0) * 2.0;
    let g = (w - av.cross(&w) + av * av.dot(&w)) / (1.0 + params.a * params.a);
    Ok(FlowState { s: s0, g, gp: gp0 })
}

/// `(G', G'')` at the given state.
pub fn flow_rhs(state: &FlowState, params: &FlowParams) -> (Vector3<f64>, Vector3<f64>) {
    (state.gp, g_second(state, params))
}

pub fn g_second(state: &FlowState, params: &FlowParams) -> Vector3<f64> {
    let av = params.avec();
    (av.cross(&state.g) + state.g).cross(&state.gp) * 0.5
}

pub fn g_third(state: &FlowState, params: &FlowParams) -> Vector3<f64> {
    let av = params.avec();
    let gpp = g_second(state, params);
    (av.cross(&state.gp).cross(&state.gp) + (av.cross(&state.g) + state.g).cross(&gpp)) * 0.5
}

/// The right-hand side as an array field for [`crate::odeint`].
pub fn vector_field(params: &FlowParams) -> impl Fn(f64, &[f64; 6]) -> [f64; 6] + Copy {
    let av = params.avec();
    move |_s, y| {
        let (g0, g1, g2, p0, p1, p2) = (y[0], y[1], y[2], y[3], y[4], y[5]);
        // w = a^G + G
        let w0 = av.y * g2 - av.z * g1 + g0;
        let w1 = av.z * g0 - av.x * g2 + g1;
        let w2 = av.x * g1 - av.y * g0 + g2;
        [
            p0,
            p1,
            p2,
            0.5 * (w1 * p2 - w2 * p1),
            0.5 * (w2 * p0 - w0 * p2),
            0.5 * (w0 * p1 - w1 * p0),
        ]
    }
}

pub fn conserved_epsilon(state: &FlowState, params: &FlowParams) -> f64 {
    let av = params.avec();
    let ag = av.dot(&state.g);
    0.25 * ((params.a * params.a + 1.0) * state.g.norm_squared() - ag * ag + 4.0 * av.dot(&state.gp)
        - state.s * state.s)
}

/// `(a^G + G) . G' - s`, zero along exact solutions.
pub fn scalar_constraint(state: &FlowState, params: &FlowParams) -> f64 {
    (params.avec().cross(&state.g) + state.g).dot(&state.gp) - state.s
}

pub fn sigma_jet(state: &FlowState, params: &FlowParams) -> Result<SigmaJet> {
    if params.a == 0.0 {
        return Err(Error::ZeroAxis);
    }
    let av = params.avec();
    Ok(SigmaJet {
        s: state.s,
        sigma: av.dot(&state.g),
        sigma_p: av.dot(&state.gp),
        sigma_pp: av.dot(&g_second(state, params)),
    })
}

/// `a^-2 sigma^2 - s^2 + 4 sigma' - 4 eps`, reported for monitoring only.
pub fn remark_inequality(jet: &SigmaJet, params: &FlowParams) -> Result<f64> {
    if params.a == 0.0 {
        return Err(Error::ZeroAxis);
    }
    Ok(jet.sigma * jet.sigma / (params.a * params.a) - jet.s * jet.s + 4.0 * jet.sigma_p - 4.0 * params.eps)
}

/// `C` and `T` at one state. With `a > 0` they come from the sigma jet,
/// otherwise from the Frenet formulas of the curve with tangent `G'`.
pub fn curvature_torsion_at(state: &FlowState, params: &FlowParams) -> CurvTorsSample {
    let s = state.s;
    if params.a > 0.0 {
        let jet = sigma_jet(state, params).expect("a > 0");
        let c2 = params.eps - jet.sigma_p;
        let c = c2.max(0.0).sqrt();
        let t = (c2 > CURVATURE_FLOOR).then(|| s / 2.0 + (s * jet.sigma_p - jet.sigma) / (4.0 * c2));
        CurvTorsSample { s, c, t }
    } else {
        let gpp = g_second(state, params);
        let c2 = gpp.norm_squared();
        let t = (c2 > CURVATURE_FLOOR).then(|| state.gp.cross(&gpp).dot(&g_third(state, params)) / c2);
        CurvTorsSample { s, c: c2.sqrt(), t }
    }
}

/// Per-node conservation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeDiagnostics {
    pub s: f64,
    pub eps_drift: f64,
    pub unit_drift: f64,
    pub constraint_drift: f64,
}

/// Largest absolute drifts over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriftSummary {
    pub eps: f64,
    pub unit: f64,
    pub constraint: f64,
}

/// An integrated solution together with its parameters.
#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub params: FlowParams,
    pub traj: Trajectory<6>,
}

/// Integrates from `init` (at `init.s`) over `[s_lo, s_hi]`.
pub fn integrate_flow(params: &FlowParams, init: &FlowState, s_lo: f64, s_hi: f64, cfg: &IntegratorConfig) -> Result<FlowTrajectory> {
    let traj = integrate_two_sided(vector_field(params), init.to_array(), init.s, s_lo, s_hi, cfg)?;
    Ok(FlowTrajectory { params: *params, traj })
}

impl FlowTrajectory {
    pub fn s_min(&self) -> f64 {
        self.traj.s_min()
    }

    pub fn s_max(&self) -> f64 {
        self.traj.s_max()
    }

    pub fn state_at(&self, s: f64) -> Result<FlowState> {
        Ok(FlowState::from_array(s, &self.traj.eval(s)?))
    }

    pub fn node_states(&self) -> impl Iterator<Item = FlowState> + '_ {
        self.traj.nodes().iter().zip(self.traj.states()).map(|(&s, y)| FlowState::from_array(s, y))
    }

    pub fn jet_at(&self, s: f64) -> Result<SigmaJet> {
        sigma_jet(&self.state_at(s)?, &self.params)
    }

    pub fn diagnostics(&self) -> Vec<NodeDiagnostics> {
        let p = &self.params;
        self.node_states()
            .map(|st| NodeDiagnostics {
                s: st.s,
                eps_drift: conserved_epsilon(&st, p) - p.eps,
                unit_drift: st.gp.norm() - 1.0,
                constraint_drift: scalar_constraint(&st, p),
            })
            .collect()
    }

    pub fn drift_summary(&self) -> DriftSummary {
        self.diagnostics().iter().fold(DriftSummary::default(), |m, d| DriftSummary {
            eps: m.eps.max(d.eps_drift.abs()),
            unit: m.unit.max(d.unit_drift.abs()),
            constraint: m.constraint.max(d.constraint_drift.abs()),
        })
    }
}

/// Curvature and torsion at each requested `s`.
pub fn curvature_torsion(traj: &FlowTrajectory, s_values: &[f64]) -> Result<Vec<CurvTorsSample>> {
    s_values
        .iter()
        .map(|&s| Ok(curvature_torsion_at(&traj.state_at(s)?, &traj.params)))
        .collect()
}

/// Threshold of `sin(theta)` below which the spherical chart is refused.
pub const CHART_FLOOR: f64 = 1e-6;

/// `(theta'', phi'')` of the spherical form, `G' = (sin t cos p, sin t sin p, cos t)`
/// in the frame of [`FlowParams::frame`].
pub fn spherical_rhs(theta: f64, theta_p: f64, phi_p: f64, s: f64, params: &FlowParams) -> Result<(f64, f64)> {
    let (st, ct) = theta.sin_cos();
    if st.abs() < CHART_FLOOR {
        return Err(Error::ChartSingularity { s, sin_theta: st });
    }
    let theta_pp = 0.5 * st * (2.0 * ct * phi_p * phi_p - s * phi_p + params.a);
    let phi_pp = (s - 4.0 * ct * phi_p) * theta_p / (2.0 * st);
    Ok((theta_pp, phi_pp))
}

pub fn spherical_epsilon(theta: f64, theta_p: f64, phi_p: f64, params: &FlowParams) -> f64 {
    theta_p * theta_p + theta.sin().powi(2) * phi_p * phi_p + params.a * theta.cos()
}

/// Spherical data `(theta, theta', phi, phi')` of a state.
pub fn spherical_coordinates(state: &FlowState, params: &FlowParams) -> Result<[f64; 4]> {
    let (e1, e2, e3) = params.frame();
    let gp = state.gp;
    let gpp = g_second(state, params);
    let (x, y, z) = (gp.dot(&e1), gp.dot(&e2), gp.dot(&e3));
    let rho2 = x * x + y * y;
    let st = rho2.sqrt();
    if st < CHART_FLOOR {
        return Err(Error::ChartSingularity { s: state.s, sin_theta: st });
    }
    let theta = z.clamp(-1.0, 1.0).acos();
    let (xp, yp, zp) = (gpp.dot(&e1), gpp.dot(&e2), gpp.dot(&e3));
    Ok([theta, -zp / st, y.atan2(x), (x * yp - y * xp) / rho2])
}

/// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Azimuth increment `phi(s1) - phi(s0)` of `G'` about the axis from
/// `phi' = (a/2) (s sigma' - sigma) / (sigma'^2 - a^2)`.
pub fn phi_accumulate(traj: &FlowTrajectory, s0: f64, s1: f64) -> Result<f64> {
    let p = &traj.params;
    if p.a == 0.0 {
        return Err(Error::ZeroAxis);
    }
    if s0 == s1 {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if s0 < s1 { (s0, s1, 1.0) } else { (s1, s0, -1.0) };
    if !traj.traj.contains(lo) || !traj.traj.contains(hi) {
        return Err(Error::OutOfRange { s: if traj.traj.contains(lo) { hi } else { lo }, lo: traj.s_min(), hi: traj.s_max() });
    }
    let a = p.a;
    let integrand = |s: f64| -> Result<f64> {
        let j = traj.jet_at(s)?;
        let den = j.sigma_p * j.sigma_p - a * a;
        if den.abs() <= 1e-10 * a * a {
            return Err(Error::IntegrandPole { s });
        }
        Ok(0.5 * a * (s * j.sigma_p - j.sigma) / den)
    };
    let nodes = traj.traj.nodes();
    let mut cuts = vec![lo];
    cuts.extend(nodes.iter().copied().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (mid, half) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
        for &(t, wt) in GL5.iter() {
            total += half * wt * integrand(mid + half * t)?;
        }
    }
    Ok(sign * total)
}

/// Rotation of `v` about unit `k` by `angle`.
pub fn rotate(v: Vector3<f64>, k: Vector3<f64>, angle: f64) -> Vector3<f64> {
    let (sn, cs) = angle.sin_cos();
    v * cs + k.cross(&v) * sn + k * (k.dot(&v) * (1.0 - cs))
}

/// One sample of the physical filament at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilamentPoint {
    pub x: f64,
    pub gamma: Vector3<f64>,
    pub curvature: f64,
    pub torsion: Option<f64>,
}

/// `gamma(x, t) = sqrt(t) R((a/2) ln t) G(x / sqrt(t))` for each `t`, with
/// curvature `C/sqrt(t)` and torsion `T/sqrt(t)`.
pub fn reconstruct_filament(traj: &FlowTrajectory, t_values: &[f64], x_grid: &[f64]) -> Result<Vec<Vec<FilamentPoint>>> {
    let p = &traj.params;
    t_values
        .iter()
        .map(|&t| {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Domain { what: "t must be > 0", value: t });
            }
            let rt = t.sqrt();
            let angle = 0.5 * p.a * t.ln();
            x_grid
                .iter()
                .map(|&x| {
                    let st = traj.state_at(x / rt)?;
                    let ct = curvature_torsion_at(&st, p);
                    Ok(FilamentPoint {
                        x,
                        gamma: rotate(st.g, p.axis, angle) * rt,
                        curvature: ct.c / rt,
                        torsion: ct.t.map(|v| v / rt),
                    })
                })
                .collect()
        })
        .collect()
}

/// `psi(s) = C(s) exp(i int_0^s T)` with the phase integrated by the
/// trapezoid rule. Missing torsion values are linearly interpolated from the
/// neighbouring samples; the phase is anchored at `s = 0` when the samples
/// straddle it and at the first sample otherwise.
pub fn hasimoto_psi(samples: &[CurvTorsSample]) -> Vec<Complex64> {
    if samples.is_empty() {
        return Vec::new();
    }
    let t = fill_torsion(samples);
    let mut phase = vec![0.0; samples.len()];
    for k in 1..samples.len() {
        phase[k] = phase[k - 1] + 0.5 * (t[k] + t[k - 1]) * (samples[k].s - samples[k - 1].s);
    }
    let s_first = samples[0].s;
    let s_last = samples[samples.len() - 1].s;
    if s_first.min(s_last) <= 0.0 && s_first.max(s_last) >= 0.0 {
        let k = samples.windows(2).position(|w| (w[0].s <= 0.0) != (w[1].s <= 0.0) || w[0].s == 0.0).unwrap_or(0);
        let offset = if samples[k].s == 0.0 || k + 1 >= samples.len() {
            phase[k]
        } else {
            let (s0, s1) = (samples[k].s, samples[k + 1].s);
            // trapezoid between s0 and 0 with T linear on the sub-interval
            let t0 = t[k] + (t[k + 1] - t[k]) * (0.0 - s0) / (s1 - s0);
            phase[k] + 0.5 * (t[k] + t0) * (0.0 - s0)
        };
        phase.iter_mut().for_each(|p| *p -= offset);
    }
    samples
        .iter()
        .zip(&phase)
        .map(|(smp, &ph)| Complex64::from_polar(smp.c, ph))
        .collect()
}

fn fill_torsion(samples: &[CurvTorsSample]) -> Vec<f64> {
    let known: Vec<usize> = (0..samples.len()).filter(|&k| samples[k].t.is_some()).collect();
    if known.is_empty() {
        return vec![0.0; samples.len()];
    }
    (0..samples.len())
        .map(|k| {
            if let Some(v) = samples[k].t {
                return v;
            }
            let after = known.partition_point(|&j| j < k);
            match (after.checked_sub(1).map(|i| known[i]), known.get(after).copied()) {
                (Some(i), Some(j)) => {
                    let (ti, tj) = (samples[i].t.unwrap(), samples[j].t.unwrap());
                    let w = (samples[k].s - samples[i].s) / (samples[j].s - samples[i].s);
                    ti + w * (tj - ti)
                }
                (Some(i), None) => samples[i].t.unwrap(),
                (None, Some(j)) => samples[j].t.unwrap(),
                (None, None) => 0.0,
            }
        })
        .collect()
}
