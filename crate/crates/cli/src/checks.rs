//! Verification suite: each check measures a quantity from the numerics
//! and judges it against a fixed tolerance.

use filpiv::asympt::{
    connect, connection_residuals, d1_coefficient, d1_estimate, fit_tail, wrap_angle, FitOptions, Side,
};
use filpiv::flow::{integrate_flow, make_initial_state, sigma_jet, FlowParams, FlowTrajectory};
use filpiv::odeint::IntegratorConfig;
use filpiv::painleve::sp4_residual;
use filpiv::symmetric::{conjecture_omega, conjecture_tail, make_symmetric_ic, planar_spiral, SymBranch};
use filpiv::zero_a::{asym_tangents, fit_limiting_tangent, g_prime_hyp, g_prime_pcf, PcfWeber, ZeroAParams};
use filpiv::Vector3;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::angle_between;
use crate::output::{json_doc, Artifact, CmdOutput};
use crate::CliError;

pub fn tight() -> IntegratorConfig {
    IntegratorConfig::with_tolerances(1e-12, 1e-14)
}

/// One judged quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub criterion: u32,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckLine {
    pub fn new(criterion: u32, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        CheckLine { criterion, name: name.into(), measured, tolerance, pass: measured.abs() <= tolerance }
    }
}

fn run(p: &FlowParams, st: &filpiv::flow::FlowState, s_max: f64) -> Result<FlowTrajectory, CliError> {
    Ok(integrate_flow(p, st, -s_max, s_max, &tight())?)
}

/// Drifts and residual of one run of the conservation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationCase {
    pub a: f64,
    pub eps: f64,
    pub unit: f64,
    pub eps_drift: f64,
    pub constraint: f64,
    /// `max |sigma residual| / (1 + |s|^3)`.
    pub sigma_scaled: f64,
}

/// Generic (non-symmetric) Cauchy data: `a . G'(0) = a c0` with
/// `c0 = min(eps/a, 1) - 0.1`, `G''(0)` fixed by `eps`.
pub fn generic_state(p: &FlowParams) -> Result<filpiv::flow::FlowState, CliError> {
    let c0 = ((p.eps / p.a).min(1.0) - 0.1).clamp(-1.0, 1.0);
    let (phi, psi) = (0.4f64, 0.7f64);
    let sn = (1.0 - c0 * c0).sqrt();
    let gp = Vector3::new(sn * phi.cos(), sn * phi.sin(), c0);
    let u = gp.cross(&Vector3::z()).normalize();
    let v = gp.cross(&u);
    let m = (p.eps - p.a * c0).max(0.0).sqrt();
    Ok(make_initial_state(p, gp, (u * psi.cos() + v * psi.sin()) * m)?)
}

pub fn conservation_suite() -> Result<Vec<ConservationCase>, CliError> {
    let mut pts = Vec::new();
    for &a in &[0.5, 1.0, 2.0, 10.0] {
        for &e in &[-a / 2.0, 0.0, a / 2.0, 2.0 * a] {
            pts.push((a, e));
        }
    }
    pts.par_iter()
        .map(|&(a, e)| {
            let p = FlowParams::new(a, e)?;
            let tr = run(&p, &generic_state(&p)?, 40.0)?;
            let d = tr.drift_summary();
            let sigma_scaled = tr
                .node_states()
                .map(|st| sp4_residual(&sigma_jet(&st, &p).expect("a > 0"), &p).abs() / (1.0 + st.s.abs().powi(3)))
                .fold(0.0, f64::max);
            Ok(ConservationCase { a, eps: e, unit: d.unit, eps_drift: d.eps, constraint: d.constraint, sigma_scaled })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormCase {
    pub eps: f64,
    pub hyp_vs_numeric: f64,
    pub pcf_vs_hyp: f64,
    pub pcf_weber_vs_hyp: f64,
}

pub fn closed_form_suite() -> Result<Vec<ClosedFormCase>, CliError> {
    [0.5, 1.0, 2.0]
        .par_iter()
        .map(|&e| {
            let z = ZeroAParams::new(e)?;
            let tr = integrate_flow(&z.flow_params(), &z.initial_state(), -20.0, 20.0, &tight())?;
            let weber = PcfWeber::new(&z, 20.0)?;
            let mut c = ClosedFormCase { eps: e, hyp_vs_numeric: 0.0, pcf_vs_hyp: 0.0, pcf_weber_vs_hyp: 0.0 };
            for k in 0..400 {
                let s = -20.0 + 40.0 * k as f64 / 399.0;
                let hyp = g_prime_hyp(s, &z)?;
                let num = tr.state_at(s)?.gp;
                c.hyp_vs_numeric = c.hyp_vs_numeric.max((hyp - num).amax());
                for j in 1..=3 {
                    c.pcf_vs_hyp = c.pcf_vs_hyp.max((g_prime_pcf(s, &z, j)? - hyp[j - 1]).abs());
                    c.pcf_weber_vs_hyp = c.pcf_weber_vs_hyp.max((weber.g_prime(s, j)? - hyp[j - 1]).abs());
                }
            }
            Ok(c)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentCase {
    pub eps: f64,
    pub angle_plus: f64,
    pub angle_minus: f64,
    pub dot_error: f64,
}

/// Limiting tangents fitted on `|s| in [24, 40]` of a numeric `a = 0` run.
pub fn tangent_suite() -> Result<Vec<TangentCase>, CliError> {
    [0.5, 1.0, 2.0]
        .par_iter()
        .map(|&e| {
            let z = ZeroAParams::new(e)?;
            let tr = integrate_flow(&z.flow_params(), &z.initial_state(), -40.0, 40.0, &tight())?;
            let t = asym_tangents(&z)?;
            let sample = |sg: f64| -> Result<Vec<(f64, Vector3<f64>)>, CliError> {
                (0..=1600).map(|k| {
                    let s = sg * (24.0 + 16.0 * k as f64 / 1600.0);
                    Ok((s, tr.state_at(s)?.gp))
                }).collect()
            };
            let fp = fit_limiting_tangent(&sample(1.0)?, e)?;
            let fm = fit_limiting_tangent(&sample(-1.0)?, e)?;
            Ok(TangentCase {
                eps: e,
                angle_plus: angle_between(&fp, &t.t_plus),
                angle_minus: angle_between(&fm, &t.t_minus),
                dot_error: t.dot() - (2.0 * (-std::f64::consts::PI * e).exp() - 1.0),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarCase {
    pub eps: f64,
    pub delta: f64,
    /// `a . G'(0) / a` of the constructed initial data.
    pub delta_from_ic: f64,
    pub flatness_plus: f64,
    pub flatness_minus: f64,
}

pub fn planar_spiral_case(a: f64) -> Result<PlanarCase, CliError> {
    let (e, d) = planar_spiral(a)?;
    let p = FlowParams::new(a, e)?;
    let st = make_symmetric_ic(&p, SymBranch::Odd)?;
    let tr = run(&p, &st, 45.0)?;
    let opts = FitOptions::default();
    let fp = fit_tail(&tr, Side::Plus, (27.0, 45.0), &opts)?;
    let fm = fit_tail(&tr, Side::Minus, (-45.0, -27.0), &opts)?;
    Ok(PlanarCase {
        eps: e,
        delta: d,
        delta_from_ic: st.gp.dot(&p.axis),
        flatness_plus: e + 6.0 * fp.tail.omega,
        flatness_minus: e + 6.0 * fm.tail.omega,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricTailCase {
    pub a: f64,
    pub eps: f64,
    pub branch: &'static str,
    pub omega_pred: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub re_rho_error_plus: f64,
    pub re_rho_error_minus: f64,
}

pub const SYMMETRIC_POINTS: [(f64, f64, SymBranch); 5] = [
    (1.0, 0.0, SymBranch::Odd),
    (1.0, 0.5, SymBranch::Odd),
    (2.0, 1.0, SymBranch::Odd),
    (1.0, 1.5, SymBranch::MixedPlus),
    (1.0, 1.5, SymBranch::MixedMinus),
];

pub fn symmetric_tail_suite() -> Result<Vec<SymmetricTailCase>, CliError> {
    SYMMETRIC_POINTS
        .par_iter()
        .map(|&(a, e, b)| {
            let p = FlowParams::new(a, e)?;
            let tr = run(&p, &make_symmetric_ic(&p, b)?, 45.0)?;
            let (w, re) = conjecture_omega(&p, b)?;
            let opts = FitOptions::default();
            let fp = fit_tail(&tr, Side::Plus, (27.0, 45.0), &opts)?;
            let fm = fit_tail(&tr, Side::Minus, (-45.0, -27.0), &opts)?;
            let err = |f: &filpiv::asympt::TailFit| f.tail.rho.map(|r| wrap_angle(r.re - re)).unwrap_or(f64::NAN);
            Ok(SymmetricTailCase {
                a,
                eps: e,
                branch: b.name(),
                omega_pred: w,
                omega_plus: fp.tail.omega,
                omega_minus: fm.tail.omega,
                re_rho_error_plus: err(&fp),
                re_rho_error_minus: err(&fm),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionCase {
    pub theta: f64,
    pub psi: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub d_omega: f64,
    pub d_delta: f64,
    pub first_from_plus: f64,
    pub first_from_minus: f64,
}

/// Non-symmetric runs at `a = 1`, `eps = 0.3`: `G'(0)` at polar angle
/// `theta`, `G''(0)` at angle `psi` in the orthogonal plane.
pub const CONNECTION_DATA: [(f64, f64); 2] = [(2.0, 0.9), (1.4, 2.5)];

pub fn connection_suite() -> Result<Vec<ConnectionCase>, CliError> {
    CONNECTION_DATA
        .par_iter()
        .map(|&(theta, psi)| {
            let p = FlowParams::new(1.0, 0.3)?;
            let gp = Vector3::new(theta.sin() * 0.3f64.cos(), theta.sin() * 0.3f64.sin(), theta.cos());
            let u = gp.cross(&Vector3::z()).normalize();
            let v = gp.cross(&u);
            let m = (p.eps - p.a * theta.cos()).sqrt();
            let st = make_initial_state(&p, gp, (u * psi.cos() + v * psi.sin()) * m)?;
            let tr = run(&p, &st, 45.0)?;
            let opts = FitOptions::default();
            let fp = fit_tail(&tr, Side::Plus, (27.0, 45.0), &opts)?;
            let fm = fit_tail(&tr, Side::Minus, (-45.0, -27.0), &opts)?;
            let pred = connect(&fp.tail, &p)?;
            let res = connection_residuals(&fp.tail, &fm.tail, &p)?;
            Ok(ConnectionCase {
                theta,
                psi,
                omega_plus: fp.tail.omega,
                omega_minus: fm.tail.omega,
                d_omega: pred.omega - fm.tail.omega,
                d_delta: wrap_angle(pred.delta - fm.tail.delta),
                first_from_plus: res.first_upper,
                first_from_minus: res.first_lower,
            })
        })
        .collect()
}

/// Phase-averaged `s^3 (sigma - leading terms)` on `s in [30, 45]` for the
/// odd solution at `(a, eps) = (1, 0)`, against `D1` at the predicted omega.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D1Case {
    pub measured: f64,
    pub d1: f64,
}

impl D1Case {
    /// Relative deviation of `measured` from `factor * D1`.
    pub fn rel_error(&self, factor: f64) -> f64 {
        (self.measured - factor * self.d1).abs() / (factor * self.d1).abs()
    }
}

pub fn d1_case() -> Result<D1Case, CliError> {
    let p = FlowParams::new(1.0, 0.0)?;
    let tr = run(&p, &make_symmetric_ic(&p, SymBranch::Odd)?, 46.0)?;
    let tail = conjecture_tail(&p, SymBranch::Odd, Side::Plus)?;
    let n = 20_000;
    let jets = (0..=n)
        .map(|k| Ok(tr.jet_at(30.0 + 15.0 * k as f64 / n as f64)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(D1Case { measured: d1_estimate(&jets, &tail, &p)?, d1: d1_coefficient(tail.omega, &p) })
}

/// Judged lines for the suites run by `selfcheck`.
pub fn selfcheck_lines() -> Result<Vec<CheckLine>, CliError> {
    let mut out = Vec::new();
    for c in conservation_suite()? {
        let tag = format!("a={} eps={}", c.a, c.eps);
        out.push(CheckLine::new(1, format!("unit drift {tag}"), c.unit, 1e-10));
        out.push(CheckLine::new(1, format!("eps drift {tag}"), c.eps_drift, 1e-9));
        out.push(CheckLine::new(1, format!("constraint drift {tag}"), c.constraint, 1e-9));
        out.push(CheckLine::new(1, format!("sigma residual / (1+|s|^3) {tag}"), c.sigma_scaled, 1e-8));
    }
    for c in closed_form_suite()? {
        out.push(CheckLine::new(2, format!("1F1 vs ODE eps={}", c.eps), c.hyp_vs_numeric, 1e-8));
        out.push(CheckLine::new(2, format!("PCF vs 1F1 eps={}", c.eps), c.pcf_vs_hyp, 1e-9));
        out.push(CheckLine::new(2, format!("PCF (Weber rays) vs 1F1 eps={}", c.eps), c.pcf_weber_vs_hyp, 1e-9));
    }
    for c in tangent_suite()? {
        out.push(CheckLine::new(3, format!("T+ angle eps={}", c.eps), c.angle_plus, 1e-3));
        out.push(CheckLine::new(3, format!("T- angle eps={}", c.eps), c.angle_minus, 1e-3));
        out.push(CheckLine::new(3, format!("T+.T- eps={}", c.eps), c.dot_error, 1e-6));
    }
    for c in symmetric_tail_suite()? {
        let tag = format!("{} a={} eps={}", c.branch, c.a, c.eps);
        out.push(CheckLine::new(5, format!("omega+ {tag}"), c.omega_plus - c.omega_pred, 1e-3));
        out.push(CheckLine::new(5, format!("omega- {tag}"), c.omega_minus - c.omega_pred, 1e-3));
        out.push(CheckLine::new(5, format!("Re rho+ {tag}"), c.re_rho_error_plus, 3e-2));
        out.push(CheckLine::new(5, format!("Re rho- {tag}"), c.re_rho_error_minus, 3e-2));
        out.push(CheckLine::new(5, format!("omega+ - omega- {tag}"), c.omega_plus - c.omega_minus, 2e-3));
    }
    let d = d1_case()?;
    out.push(CheckLine::new(7, "D1: relative deviation from -8 D1", d.rel_error(-8.0), 0.05));
    out.push(CheckLine::new(7, "D1: relative deviation from +8 D1", d.rel_error(8.0), 0.05));
    Ok(out)
}

pub fn cmd_selfcheck() -> Result<CmdOutput, CliError> {
    let lines = selfcheck_lines()?;
    let failed: Vec<String> = lines.iter().filter(|l| !l.pass).map(|l| format!("criterion {}: {}", l.criterion, l.name)).collect();
    let summary = json!({
        "checks": lines.len(),
        "passed": lines.len() - failed.len(),
        "lines": lines,
    });
    let artifacts = vec![Artifact { name: "selfcheck.json".into(), contents: json_doc("selfcheck", &json!({}), summary.clone()) }];
    Ok(CmdOutput { artifacts, summary, violations: failed })
}
