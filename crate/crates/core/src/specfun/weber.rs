//! `D_nu` along a ray from the origin by integrating Weber's equation.
//!
//! Independent of the `1F1` route. On the rays `arg z = (2k+1) pi/4` the
//! equation is oscillatory in `r = |z|` and the integration is well
//! conditioned; elsewhere the recessive solution is lost for large `r`.

use super::gamma::rgamma;
use crate::error::{Error, Result};
use crate::odeint::{integrate, IntegratorConfig, Trajectory};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Dense solution of `w'' = (z^2/4 - nu - 1/2) w` along `z = r e^{i theta}`.
#[derive(Debug, Clone)]
pub struct WeberRay {
    pub order: Complex64,
    pub theta: f64,
    traj: Trajectory<4>,
}

fn to_c(y: &[f64; 4]) -> (Complex64, Complex64) {
    (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]))
}

impl WeberRay {
    /// Integrates from `r = 0` to `r_max` at relative tolerance `rel_tol`.
    pub fn new(order: Complex64, theta: f64, r_max: f64, rel_tol: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::Domain { what: "Weber ray length", value: r_max });
        }
        let sqrt_pi = PI.sqrt();
        let two = Complex64::new(2.0, 0.0);
        let d0 = two.powc(order / 2.0) * sqrt_pi * rgamma((1.0 - order) / 2.0);
        let dp0 = -two.powc((order + 1.0) / 2.0) * sqrt_pi * rgamma(-order / 2.0);
        let rot = Complex64::from_polar(1.0, theta);
        let rot2 = rot * rot;
        let w0p = rot * dp0;
        let rhs = move |r: f64, y: &[f64; 4]| {
            let (w, wp) = to_c(y);
            let z = rot * r;
            let wpp = rot2 * (z * z / 4.0 - order - 0.5) * w;
            [wp.re, wp.im, wpp.re, wpp.im]
        };
        let cfg = IntegratorConfig { max_step: 0.05, tail_resolve: true, ..IntegratorConfig::with_tolerances(rel_tol, rel_tol * 1e-2) };
        let traj = integrate(rhs, [d0.re, d0.im, w0p.re, w0p.im], 0.0, r_max, &cfg)?;
        Ok(WeberRay { order, theta, traj })
    }

    pub fn r_max(&self) -> f64 {
        self.traj.s_max()
    }

    /// `(D_nu(z), D_nu'(z))` at `z = r e^{i theta}`.
    pub fn eval(&self, r: f64) -> Result<(Complex64, Complex64)> {
        let (w, wr) = to_c(&self.traj.eval(r)?);
        Ok((w, wr / Complex64::from_polar(1.0, self.theta)))
    }
}

#[cfg(test)]
mod tests {
    use super::super::pcf::pcf_d;
    use super::*;

    #[test]
    fn matches_kummer_route_on_the_diagonals() {
        for &(nr, ni) in &[(0.0, -0.5), (0.0, 0.25), (0.0, 1.0), (-0.5, 0.3)] {
            let nu = Complex64::new(nr, ni);
            for k in 0..4 {
                let theta = PI / 4.0 + k as f64 * PI / 2.0;
                let ray = WeberRay::new(nu, theta, 12.0, 1e-13).unwrap();
                for &r in &[0.0, 0.7, 3.3, 8.0, 12.0] {
                    let z = Complex64::from_polar(r, theta);
                    let (d, _) = ray.eval(r).unwrap();
                    let want = pcf_d(nu, z).unwrap();
                    assert!((d - want).norm() <= 1e-10 * want.norm().max(1.0), "nu={nu} z={z}: {d} vs {want}");
                }
            }
        }
    }

    #[test]
    fn hermite_order_on_real_axis() {
        // D_2(x) = (x^2 - 1) e^{-x^2/4}, moderate r only
        let ray = WeberRay::new(Complex64::new(2.0, 0.0), 0.0, 3.0, 1e-13).unwrap();
        for &x in &[0.5f64, 1.5, 3.0] {
            let (d, dp) = ray.eval(x).unwrap();
            let e = (-x * x / 4.0).exp();
            assert!((d.re - (x * x - 1.0) * e).abs() < 1e-11 && d.im.abs() < 1e-12);
            assert!((dp.re - (2.0 * x - x * (x * x - 1.0) / 2.0) * e).abs() < 1e-11);
        }
    }
}
