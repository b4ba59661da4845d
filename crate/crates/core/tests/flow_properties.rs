use filpiv::flow::*;
use filpiv::odeint::IntegratorConfig;
use filpiv::painleve::{sp4_integrate, sp4_residual};
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use std::f64::consts::TAU;

/// Unit `G'(0)` at polar angle `theta` from the axis and a `G''(0)` of
/// length `m` orthogonal to it; `eps = m^2 + a cos(theta)`.
fn cauchy_data(a: f64, theta: f64, phi: f64, psi: f64, m: f64) -> (FlowParams, FlowState) {
    let gp = Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
    let u = gp.cross(&Vector3::z()).normalize();
    let v = gp.cross(&u);
    let gpp = (u * psi.cos() + v * psi.sin()) * m;
    let p = FlowParams::new(a, m * m + a * theta.cos()).unwrap();
    let st = make_initial_state(&p, gp, gpp).unwrap();
    (p, st)
}

fn tight() -> IntegratorConfig {
    IntegratorConfig::with_tolerances(1e-12, 1e-14)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conserved_quantities_and_identities(
        a in 0.3f64..3.0, theta in 0.2f64..2.9, phi in 0.0f64..TAU, psi in 0.0f64..TAU, m in 0.0f64..1.5,
    ) {
        let (p, st) = cauchy_data(a, theta, phi, psi, m);
        let tr = integrate_flow(&p, &st, -40.0, 40.0, &tight()).unwrap();
        let d = tr.drift_summary();
        prop_assert!(d.unit <= 1e-10, "unit drift {}", d.unit);
        prop_assert!(d.eps <= 1e-9, "eps drift {}", d.eps);
        prop_assert!(d.constraint <= 1e-9, "constraint drift {}", d.constraint);
        let av = p.avec();
        for st in tr.node_states().step_by(97) {
            let gpp = g_second(&st, &p);
            let j = sigma_jet(&st, &p).unwrap();
            prop_assert!((gpp.norm_squared() + j.sigma_p - conserved_epsilon(&st, &p)).abs() <= 1e-12 * (1.0 + st.s * st.s));
            let triple = av.dot(&st.gp.cross(&gpp));
            prop_assert!((triple - 0.5 * (j.sigma - st.s * j.sigma_p)).abs() <= 1e-9 * (1.0 + st.s.abs()));
            let cols = [av, st.gp, gpp];
            let gram = Matrix3::from_fn(|r, c| cols[r].dot(&cols[c]));
            prop_assert!((triple * triple - gram.determinant()).abs() <= 1e-9 * (1.0 + triple * triple));
            prop_assert!(sp4_residual(&j, &p).abs() <= 1e-8 * (1.0 + st.s.abs().powi(3)));
        }
    }

    #[test]
    fn sigma_equation_matches_flow(
        a in 0.3f64..3.0, theta in 0.3f64..2.8, phi in 0.0f64..TAU, psi in 0.3f64..2.8, m in 0.2f64..1.5,
    ) {
        let (p, st) = cauchy_data(a, theta, phi, psi, m);
        let tr = integrate_flow(&p, &st, -20.0, 20.0, &tight()).unwrap();
        let j0 = tr.jet_at(0.0).unwrap();
        let sig = sp4_integrate(&j0, &p, -20.0, 20.0, &tight()).unwrap();
        for k in 0..=80 {
            let s = -20.0 + 0.5 * k as f64;
            let (a1, b1) = (tr.jet_at(s).unwrap(), sig.jet_at(s).unwrap());
            let err = (a1.sigma - b1.sigma).abs().max((a1.sigma_p - b1.sigma_p).abs()).max((a1.sigma_pp - b1.sigma_pp).abs());
            prop_assert!(err <= 1e-7, "s={} err={:e}", s, err);
        }
    }

    #[test]
    fn reversibility(a in 0.3f64..3.0, theta in 0.2f64..2.9, m in 0.0f64..1.5, s1 in 2.0f64..15.0) {
        let (p, st) = cauchy_data(a, theta, 0.4, 1.1, m);
        let cfg = tight();
        let fwd = integrate_flow(&p, &st, 0.0, s1, &cfg).unwrap();
        let end = fwd.state_at(s1).unwrap();
        let back = integrate_flow(&p, &end, 0.0, s1, &cfg).unwrap();
        let ret = back.state_at(0.0).unwrap();
        let err = (ret.g - st.g).amax().max((ret.gp - st.gp).amax());
        prop_assert!(err <= 100.0 * cfg.rel_tol * (1.0 + s1), "err {:e}", err);
    }
}

#[test]
fn sigma_residual_grid() {
    for &a in &[0.5f64, 1.0, 2.0, 10.0] {
        for &e in &[-a / 2.0, 0.0, a / 2.0, 2.0 * a] {
            let c: f64 = e / a;
            let gp = if c.abs() <= 1.0 {
                Vector3::new((1.0 - c * c).sqrt(), 0.0, c)
            } else {
                Vector3::z()
            };
            let p = FlowParams::new(a, e).unwrap();
            let m2 = e - a * gp.z;
            let st = make_initial_state(&p, gp, Vector3::new(0.0, m2.max(0.0).sqrt(), 0.0)).unwrap();
            let tr = integrate_flow(&p, &st, -40.0, 40.0, &tight()).unwrap();
            for j in tr.node_states().map(|s| sigma_jet(&s, &p).unwrap()) {
                assert!(sp4_residual(&j, &p).abs() <= 1e-8 * (1.0 + j.s.abs().powi(3)));
            }
        }
    }
}
