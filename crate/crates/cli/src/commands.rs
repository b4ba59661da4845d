//! One function per subcommand. Each takes a resolved config and returns
//! its artifacts and summary; nothing here touches the file system.

use filpiv::asympt::{self, connect, connection_residuals, fit_tail, wrap_angle, FitOptions, Side, TailFit, TailParams};
use filpiv::flow::{
    conserved_epsilon, curvature_torsion_at, g_second, integrate_flow, make_initial_state, make_initial_state_at,
    reconstruct_filament, remark_inequality, sigma_jet, FlowParams, FlowState, FlowTrajectory,
};
use filpiv::painleve::sp4_residual;
use filpiv::symmetric::{conjecture_omega, make_symmetric_ic, planar_spiral, x_roots, SymBranch};
use filpiv::zero_a::{self, asym_tangents, fit_limiting_tangent, g_prime_hyp, g_prime_pcf, PcfWeber, ZeroAParams};
use filpiv::Vector3;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{InitialCfg, RunConfig, SideCfg, SweepPoint};
use crate::output::{csv, json_doc, Artifact, CmdOutput};
use crate::CliError;

fn vec3(v: [f64; 3]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

pub fn flow_params(cfg: &RunConfig) -> Result<FlowParams, CliError> {
    let axis = vec3(cfg.params.axis).normalize();
    Ok(FlowParams::with_axis(cfg.params.a, cfg.params.eps, axis)?)
}

/// Parameters and initial state described by the config.
pub fn initial_state(cfg: &RunConfig) -> Result<(FlowParams, FlowState), CliError> {
    let p = flow_params(cfg)?;
    let init = cfg.initial.clone().ok_or_else(|| CliError::config("initial data missing"))?;
    let st = match init {
        InitialCfg::Cauchy { gp0, gpp0, s0 } => make_initial_state_at(&p, s0, vec3(gp0), vec3(gpp0))?,
        InitialCfg::Angles { theta, phi, psi } => {
            let (e1, e2, e3) = p.frame();
            let gp = (e1 * phi.cos() + e2 * phi.sin()) * theta.sin() + e3 * theta.cos();
            let m2 = p.eps - p.a * theta.cos();
            if m2 < -1e-12 {
                return Err(CliError::config(format!("angles give |G''(0)|^2 = {m2} < 0 for this eps")));
            }
            let u = if theta.sin().abs() > 1e-12 { gp.cross(&e3).normalize() } else { e1 };
            let v = gp.cross(&u);
            make_initial_state(&p, gp, (u * psi.cos() + v * psi.sin()) * m2.max(0.0).sqrt())?
        }
        InitialCfg::Symmetric { branch } => make_symmetric_ic(&p, branch.into())?,
        InitialCfg::PlanarSpiral => make_symmetric_ic(&p, SymBranch::Odd)?,
        InitialCfg::ZeroA => {
            if p.a != 0.0 {
                return Err(CliError::config("initial kind zero_a requires a = 0"));
            }
            ZeroAParams::new(p.eps)?.initial_state()
        }
    };
    Ok((p, st))
}

fn run(cfg: &RunConfig, p: &FlowParams, st: &FlowState, lo: f64, hi: f64) -> Result<FlowTrajectory, CliError> {
    Ok(integrate_flow(p, st, lo.min(st.s), hi.max(st.s), &cfg.integrator_config())?)
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = (((hi - lo) / step).round() as usize).max(1) + 1;
    (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect()
}

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

pub const TRAJECTORY_COLUMNS: [&str; 14] =
    ["s", "G1", "G2", "G3", "Gp1", "Gp2", "Gp3", "sigma", "sigma_p", "sigma_pp", "C", "T", "eps_drift", "unit_drift"];

pub fn trajectory_rows(traj: &FlowTrajectory, s_values: &[f64]) -> Result<Vec<Vec<f64>>, CliError> {
    let p = &traj.params;
    let av = p.avec();
    s_values
        .iter()
        .map(|&s| {
            let st = traj.state_at(s)?;
            let gpp = g_second(&st, p);
            let ct = curvature_torsion_at(&st, p);
            Ok(vec![
                s,
                st.g.x,
                st.g.y,
                st.g.z,
                st.gp.x,
                st.gp.y,
                st.gp.z,
                av.dot(&st.g),
                av.dot(&st.gp),
                av.dot(&gpp),
                ct.c,
                opt(ct.t),
                conserved_epsilon(&st, p) - p.eps,
                st.gp.norm() - 1.0,
            ])
        })
        .collect()
}

/// Node-level diagnostics of a run, with threshold violations.
fn diagnostics(cfg: &RunConfig, traj: &FlowTrajectory) -> (Value, Vec<String>) {
    let p = &traj.params;
    let d = traj.drift_summary();
    let th = &cfg.thresholds;
    let mut sigma_scaled: f64 = 0.0;
    let mut remark_min = f64::INFINITY;
    let mut axis_aligned = 0usize;
    let mut flat = 0usize;
    for st in traj.node_states() {
        let ct = curvature_torsion_at(&st, p);
        if ct.t.is_none() {
            flat += 1;
        }
        if p.a > 0.0 {
            let j = sigma_jet(&st, p).expect("a > 0");
            sigma_scaled = sigma_scaled.max(sp4_residual(&j, p).abs() / (1.0 + st.s.abs().powi(3)));
            remark_min = remark_min.min(remark_inequality(&j, p).expect("a > 0"));
            if (j.sigma_p.abs() - p.a).abs() <= 1e-9 * p.a {
                axis_aligned += 1;
            }
        }
    }
    let mut v = Vec::new();
    if d.unit > th.unit_drift {
        v.push(format!("unit drift {:e} exceeds {:e}", d.unit, th.unit_drift));
    }
    if d.eps > th.eps_drift {
        v.push(format!("eps drift {:e} exceeds {:e}", d.eps, th.eps_drift));
    }
    if d.constraint > th.constraint_drift {
        v.push(format!("constraint drift {:e} exceeds {:e}", d.constraint, th.constraint_drift));
    }
    if sigma_scaled > th.sigma_residual {
        v.push(format!("sigma equation residual {:e} exceeds {:e}", sigma_scaled, th.sigma_residual));
    }
    let t = &traj.traj;
    let summary = json!({
        "nodes": t.len(),
        "rejected_steps": t.rejected_steps(),
        "rhs_evaluations": t.rhs_evaluations(),
        "s_min": t.s_min(),
        "s_max": t.s_max(),
        "max_unit_drift": d.unit,
        "max_eps_drift": d.eps,
        "max_constraint_drift": d.constraint,
        "max_sigma_residual_scaled": if p.a > 0.0 { Some(sigma_scaled) } else { None },
        "min_remark_inequality": if p.a > 0.0 { Some(remark_min) } else { None },
        "pole_flags": {
            "tangent_along_axis_nodes": axis_aligned,
            "zero_curvature_nodes": flat,
        },
    });
    (summary, v)
}

pub fn cmd_integrate(cfg: &RunConfig) -> Result<CmdOutput, CliError> {
    let (p, st) = initial_state(cfg)?;
    let (lo, hi) = cfg.s_span();
    let traj = run(cfg, &p, &st, lo, hi)?;
    let rows = trajectory_rows(&traj, &grid(lo, hi, cfg.output.sample_step))?;
    let (summary, violations) = diagnostics(cfg, &traj);
    let prefix = &cfg.output.prefix;
    let artifacts = vec![
        Artifact { name: format!("{prefix}_trajectory.csv"), contents: csv("integrate", cfg, &[], &TRAJECTORY_COLUMNS, &rows) },
        Artifact { name: format!("{prefix}_diagnostics.json"), contents: json_doc("integrate", cfg, json!({ "diagnostics": summary, "violations": violations })) },
    ];
    Ok(CmdOutput { artifacts, summary, violations })
}

fn side_window(cfg: &RunConfig, side: Side) -> Result<(f64, f64), CliError> {
    let w = match side {
        Side::Plus => cfg.fit.window_plus,
        Side::Minus => cfg.fit.window_minus,
    };
    let [a, b] = w.ok_or_else(|| CliError::config(format!("no fit window on the {side:?} side")))?;
    Ok((a, b))
}

fn fit_options(cfg: &RunConfig) -> FitOptions {
    FitOptions { samples_per_period: cfg.fit.samples_per_period, refine_omega: cfg.fit.refine_omega }
}

fn tail_json(t: &TailParams) -> Value {
    json!({
        "omega": t.omega,
        "delta": t.delta,
        "rho": t.rho.map(|r| [r.re, r.im]),
    })
}

fn fit_json(f: &TailFit, p: &FlowParams) -> Value {
    json!({
        "omega": f.tail.omega,
        "delta": f.tail.delta,
        "rho": f.tail.rho.map(|r| [r.re, r.im]),
        "amplitude": f.amplitude,
        "amplitude_ratio": f.amplitude_ratio(p).ok(),
        "residual": f.residual,
        "samples": f.samples,
        "window_abs_s": [f.window.0, f.window.1],
    })
}

fn fit_both(cfg: &RunConfig, traj: &FlowTrajectory) -> Result<(TailFit, TailFit), CliError> {
    let opts = fit_options(cfg);
    let plus = fit_tail(traj, Side::Plus, side_window(cfg, Side::Plus)?, &opts).map_err(|e| CliError::from(e).context("plus-side fit"))?;
    let minus = fit_tail(traj, Side::Minus, side_window(cfg, Side::Minus)?, &opts).map_err(|e| CliError::from(e).context("minus-side fit"))?;
    Ok((plus, minus))
}

pub fn cmd_fit(cfg: &RunConfig) -> Result<CmdOutput, CliError> {
    let (p, st) = initial_state(cfg)?;
    if p.a == 0.0 {
        return Err(CliError::config("tail fits need a > 0; use zero-a for a = 0"));
    }
    let (lo, hi) = cfg.s_span();
    for side in [Side::Plus, Side::Minus] {
        let (a, b) = side_window(cfg, side)?;
        if a < lo || b > hi {
            return Err(CliError::config(format!("{side:?} fit window [{a}, {b}] outside s_span [{lo}, {hi}]")));
        }
    }
    let traj = run(cfg, &p, &st, lo, hi)?;
    let (fp, fm) = fit_both(cfg, &traj)?;
    let res = connection_residuals(&fp.tail, &fm.tail, &p)?;
    let predicted = connect(&fp.tail, &p).ok();
    let mut violations = Vec::new();
    let th = cfg.fit.connection_threshold;
    if res.first_upper.max(res.first_lower) > th {
        violations.push(format!("first connection formula residual {:e} exceeds {:e}", res.first_upper.max(res.first_lower), th));
    }
    let amp = [fp.amplitude_ratio(&p).ok(), fm.amplitude_ratio(&p).ok()];
    for (name, r) in ["plus", "minus"].iter().zip(amp) {
        if let Some(r) = r {
            if (r - 1.0).abs() > cfg.fit.amplitude_tolerance {
                violations.push(format!("{name} amplitude ratio {r} outside 1 +- {}", cfg.fit.amplitude_tolerance));
            }
        }
    }
    let r = |t: &TailParams| t.rho.map(|r| [r.re, r.im]);
    let summary = json!({
        "omega_plus": fp.tail.omega,
        "delta_plus": fp.tail.delta,
        "omega_minus": fm.tail.omega,
        "delta_minus": fm.tail.delta,
        "rho_plus": r(&fp.tail),
        "rho_minus": r(&fm.tail),
        "connfI_residuals": { "from_plus": res.first_upper, "from_minus": res.first_lower },
        "connfII_residual": res.second,
        "amp_consistency": { "plus": amp[0], "minus": amp[1] },
        "predicted_minus": predicted.as_ref().map(tail_json),
        "fits": { "plus": fit_json(&fp, &p), "minus": fit_json(&fm, &p) },
    });
    let artifacts = vec![Artifact {
        name: format!("{}_fit.json", cfg.output.prefix),
        contents: json_doc("fit", cfg, json!({ "fit": summary, "violations": violations })),
    }];
    Ok(CmdOutput { artifacts, summary, violations })
}

pub fn cmd_connect(cfg: &RunConfig) -> Result<CmdOutput, CliError> {
    let p = flow_params(cfg)?;
    if p.a == 0.0 {
        return Err(CliError::config("connection formulas need a > 0"));
    }
    let c = cfg.connect.as_ref().ok_or_else(|| CliError::config("connect section missing"))?;
    let side = match c.side {
        SideCfg::Plus => Side::Plus,
        SideCfg::Minus => Side::Minus,
    };
    let (lo, hi) = asympt::omega_bounds(&p);
    if c.omega < lo || c.omega > hi {
        return Err(CliError::config(format!("omega = {} outside [{lo}, {hi}]", c.omega)));
    }
    let input = TailParams::new(side, c.omega, c.delta, &p);
    let other = connect(&input, &p)?;
    let (plus, minus) = if side == Side::Plus { (input, other) } else { (other, input) };
    let res = connection_residuals(&plus, &minus, &p)?;
    let summary = json!({
        "input": tail_json(&input),
        "output_side": if side == Side::Plus { "minus" } else { "plus" },
        "output": tail_json(&other),
        "residuals": { "from_plus": res.first_upper, "from_minus": res.first_lower, "second": res.second },
    });
    let artifacts = vec![Artifact {
        name: format!("{}_connect.json", cfg.output.prefix),
        contents: json_doc("connect", cfg, summary.clone()),
    }];
    Ok(CmdOutput { artifacts, summary, violations: Vec::new() })
}

/// Angle between unit vectors, accurate for nearly parallel ones.
pub fn angle_between(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

pub fn cmd_zero_a(cfg: &RunConfig) -> Result<CmdOutput, CliError> {
    if cfg.params.a != 0.0 {
        return Err(CliError::config(format!("zero-a requires a = 0 (got a = {})", cfg.params.a)));
    }
    let z = ZeroAParams::new(cfg.params.eps)?;
    let zc = &cfg.zero_a;
    let reach = zc.s_range.max(zc.tangent_s_max);
    let p = z.flow_params();
    let traj = integrate_flow(&p, &z.initial_state(), -reach, reach, &cfg.integrator_config())?;
    let weber = if z.eps > 0.0 { Some(PcfWeber::new(&z, zc.s_range)?) } else { None };
    let s_grid: Vec<f64> = (0..zc.n).map(|k| -zc.s_range + 2.0 * zc.s_range * k as f64 / (zc.n - 1) as f64).collect();
    let mut rows = Vec::with_capacity(zc.n);
    let (mut d_num, mut d_pcf, mut d_web, mut d_par) = ([0.0f64; 3], [0.0f64; 3], [0.0f64; 3], [0.0f64; 3]);
    let mut d_g: f64 = 0.0;
    for &s in &s_grid {
        let hyp = g_prime_hyp(s, &z)?;
        let hm = g_prime_hyp(-s, &z)?;
        let st = traj.state_at(s)?;
        d_g = d_g.max((zero_a::reconstruct_g(s, &z)? - st.g).amax());
        let mut row = vec![s, hyp.x, hyp.y, hyp.z, st.gp.x, st.gp.y, st.gp.z];
        for j in 0..3 {
            let pcf = g_prime_pcf(s, &z, j + 1)?;
            d_num[j] = d_num[j].max((hyp[j] - st.gp[j]).abs());
            d_pcf[j] = d_pcf[j].max((pcf - hyp[j]).abs());
            if let Some(w) = &weber {
                d_web[j] = d_web[j].max((w.g_prime(s, j + 1)? - hyp[j]).abs());
            }
            let par = if j == 0 { hyp[j] - hm[j] } else { hyp[j] + hm[j] };
            d_par[j] = d_par[j].max(par.abs());
            row.push(pcf);
        }
        rows.push(row);
    }
    let t = asym_tangents(&z)?;
    let window = |sg: f64| -> Result<Vec<(f64, Vector3<f64>)>, CliError> {
        let n = 1601;
        (0..n)
            .map(|k| {
                let s = sg * zc.tangent_s_max * (0.6 + 0.4 * k as f64 / (n - 1) as f64);
                Ok((s, traj.state_at(s)?.gp))
            })
            .collect()
    };
    let fit_p = fit_limiting_tangent(&window(1.0)?, z.eps)?;
    let fit_m = fit_limiting_tangent(&window(-1.0)?, z.eps)?;
    let ang_p = angle_between(&fit_p, &t.t_plus);
    let ang_m = angle_between(&fit_m, &t.t_minus);
    let max3 = |a: [f64; 3]| a.iter().cloned().fold(0.0, f64::max);
    let mut violations = Vec::new();
    if max3(d_num) > zc.threshold {
        violations.push(format!("closed form and numeric G' differ by {:e} > {:e}", max3(d_num), zc.threshold));
    }
    let summary = json!({
        "eps": z.eps,
        "max_abs_closed_minus_numeric": d_num,
        "max_abs_g_closed_minus_numeric": d_g,
        "max_abs_pcf_minus_hyp": d_pcf,
        "max_abs_pcf_weber_minus_hyp": weber.as_ref().map(|_| d_web),
        "parity_residuals": d_par,
        "tangents": {
            "t_plus": [t.t_plus.x, t.t_plus.y, t.t_plus.z],
            "t_minus": [t.t_minus.x, t.t_minus.y, t.t_minus.z],
            "beta1": t.beta1,
            "beta2": t.beta2,
            "dot": t.dot(),
            "fitted_plus": [fit_p.x, fit_p.y, fit_p.z],
            "fitted_minus": [fit_m.x, fit_m.y, fit_m.z],
            "angle_error_plus": ang_p,
            "angle_error_minus": ang_m,
        },
    });
    let cols = ["s", "hyp1", "hyp2", "hyp3", "num1", "num2", "num3", "pcf1", "pcf2", "pcf3"];
    let prefix = &cfg.output.prefix;
    let artifacts = vec![
        Artifact { name: format!("{prefix}_zero_a.csv"), contents: csv("zero-a", cfg, &[], &cols, &rows) },
        Artifact { name: format!("{prefix}_zero_a.json"), contents: json_doc("zero-a", cfg, json!({ "report": summary, "violations": violations })) },
    ];
    Ok(CmdOutput { artifacts, summary, violations })
}

/// Symmetric run at one parameter point: initial data, X-roots, the
/// conjectured tails and the fitted ones.
fn symmetric_point(cfg: &RunConfig, pt: &SweepPoint) -> Result<Value, CliError> {
    let p = FlowParams::with_axis(pt.a, pt.eps, vec3(cfg.params.axis).normalize())?;
    let branch: SymBranch = pt.branch.into();
    let st = make_symmetric_ic(&p, branch)?;
    let roots: Vec<Value> = x_roots(&p).iter().map(|r| json!({ "value": r.value, "admissible": r.admissible, "omega": r.omega })).collect();
    let (w_c, re_c) = conjecture_omega(&p, branch)?;
    let (lo, hi) = cfg.s_span();
    let traj = run(cfg, &p, &st, lo, hi)?;
    let (fp, fm) = fit_both(cfg, &traj)?;
    let re = |f: &TailFit| f.tail.rho.map(|r| wrap_angle(r.re - re_c));
    let mut entry = json!({
        "a": pt.a,
        "eps": pt.eps,
        "branch": branch.name(),
        "sigma_p0": branch.sigma_p0(&p),
        "x_roots": roots,
        "conjecture": { "omega": w_c, "re_rho": re_c },
        "fit_plus": fit_json(&fp, &p),
        "fit_minus": fit_json(&fm, &p),
        "omega_error": [fp.tail.omega - w_c, fm.tail.omega - w_c],
        "re_rho_error": [re(&fp), re(&fm)],
        "omega_asymmetry": fp.tail.omega - fm.tail.omega,
    });
    if branch == SymBranch::Odd {
        if let Ok((e, d)) = planar_spiral(pt.a) {
            if (e - pt.eps).abs() <= 1e-12 * (1.0 + e) {
                entry["planar_spiral"] = json!({
                    "delta": d,
                    "eps_plus_6_omega": [pt.eps + 6.0 * fp.tail.omega, pt.eps + 6.0 * fm.tail.omega],
                });
            }
        }
    }
    Ok(entry)
}

pub fn cmd_symmetric(cfg: &RunConfig) -> Result<CmdOutput, CliError> {
    let mut points = Vec::new();
    match &cfg.initial {
        Some(InitialCfg::Symmetric { branch }) => points.push(SweepPoint { a: cfg.params.a, eps: cfg.params.eps, branch: *branch }),
        Some(InitialCfg::PlanarSpiral) => points.push(SweepPoint { a: cfg.params.a, eps: cfg.params.eps, branch: crate::config::BranchCfg::Odd }),
        _ => {}
    }
    points.extend(cfg.symmetric.sweep.iter().cloned());
    if points.is_empty() {
        return Err(CliError::config("symmetric needs symmetric initial data or a sweep"));
    }
    let results: Vec<Result<Value, CliError>> = points.par_iter().map(|pt| symmetric_point(cfg, pt)).collect();
    let mut entries = Vec::with_capacity(results.len());
    for (pt, r) in points.iter().zip(results) {
        match r {
            Ok(v) => entries.push(v),
            // a lone point fails the command; sweeps keep going
            Err(e) if points.len() == 1 => return Err(e),
            Err(e) => entries.push(json!({ "a": pt.a, "eps": pt.eps, "branch": SymBranch::from(pt.branch).name(), "error": e })),
        }
    }
    let summary = json!({
        "note": "predicted tails are conjectural (closed-form omega and Re rho); fitted values are numerical",
        "points": entries,
    });
    let artifacts = vec![Artifact {
        name: format!("{}_symmetric.json", cfg.output.prefix),
        contents: json_doc("symmetric", cfg, summary.clone()),
    }];
    Ok(CmdOutput { artifacts, summary, violations: Vec::new() })
}

pub const FILAMENT_COLUMNS: [&str; 8] = ["x", "gamma1", "gamma2", "gamma3", "curvature", "torsion", "arclength_err", "s"];

pub fn cmd_filament(cfg: &RunConfig) -> Result<CmdOutput, CliError> {
    let (p, st) = initial_state(cfg)?;
    let fc = &cfg.filament;
    if fc.t.is_empty() {
        return Err(CliError::config("filament.t is empty"));
    }
    let [x_lo, x_hi] = fc.x_range;
    if !(x_lo < x_hi) {
        return Err(CliError::config("filament.x_range must be increasing"));
    }
    let h = fc.fd_step;
    let t_min = fc.t.iter().cloned().fold(f64::INFINITY, f64::min);
    let reach = (x_lo.abs().max(x_hi.abs()) + 3.0 * h) / t_min.sqrt();
    let (lo, hi) = cfg.s_span();
    let traj = run(cfg, &p, &st, lo.min(-reach), hi.max(reach))?;
    let xs: Vec<f64> = (0..fc.n).map(|k| x_lo + (x_hi - x_lo) * k as f64 / (fc.n - 1) as f64).collect();
    let shifted = |d: f64| -> Vec<f64> { xs.iter().map(|x| x + d).collect() };
    let mut artifacts = Vec::new();
    let mut worst: f64 = 0.0;
    let mut per_t = Vec::new();
    for (idx, &t) in fc.t.iter().enumerate() {
        let main = reconstruct_filament(&traj, &[t], &xs)?.remove(0);
        let stencil: Vec<Vec<Vector3<f64>>> = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|&k| Ok(reconstruct_filament(&traj, &[t], &shifted(k * h))?.remove(0).iter().map(|q| q.gamma).collect()))
            .collect::<Result<_, CliError>>()?;
        let mut t_worst: f64 = 0.0;
        let rows: Vec<Vec<f64>> = main
            .iter()
            .enumerate()
            .map(|(k, q)| {
                let d = (stencil[0][k] - stencil[1][k] * 8.0 + stencil[2][k] * 8.0 - stencil[3][k]) / (12.0 * h);
                let err = (d.norm() - 1.0).abs();
                t_worst = t_worst.max(err);
                vec![q.x, q.gamma.x, q.gamma.y, q.gamma.z, q.curvature, opt(q.torsion), err, q.x / t.sqrt()]
            })
            .collect();
        worst = worst.max(t_worst);
        per_t.push(json!({ "index": idx, "t": t, "max_arclength_err": t_worst }));
        artifacts.push(Artifact {
            name: format!("{}_filament_t{idx}.csv", cfg.output.prefix),
            contents: csv("filament", cfg, &[format!("t = {}", crate::output::fmt_f64(t))], &FILAMENT_COLUMNS, &rows),
        });
    }
    let mut violations = Vec::new();
    if worst > cfg.thresholds.arclength {
        violations.push(format!("arc-length error {:e} exceeds {:e}", worst, cfg.thresholds.arclength));
    }
    let summary = json!({ "times": per_t, "max_arclength_err": worst });
    Ok(CmdOutput { artifacts, summary, violations })
}
