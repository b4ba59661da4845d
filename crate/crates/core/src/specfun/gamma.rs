//! Complex gamma function.
//!
//! `cgamma` uses the Lanczos approximation (g = 7, nine coefficients) with
//! the reflection formula for `Re z < 1/2`. `ln_gamma` is the continuous
//! branch of log-gamma on the right half-plane, built from the Stirling
//! series after an upward shift; its imaginary part is the phase used by the
//! connection formulas.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// B_{2k} / (2k (2k - 1)), k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Lanczos log-gamma, valid for `Re z >= 1/2`.
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    HALF_LN_2PI + (zm + 0.5) * t.ln() - t + x.ln()
}

/// Gamma function of a complex argument.
pub fn cgamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite gamma argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z).exp())
    } else {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_lanczos(1.0 - z).exp()))
    }
}

/// Reciprocal gamma function; entire, so zero at the poles of `cgamma`.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_lanczos(z)).exp()
    } else {
        (PI * z).sin() * ln_gamma_lanczos(1.0 - z).exp() / PI
    }
}

/// Continuous log-gamma on `Re z > 0` (the branch analytic in the right
/// half-plane and real on the positive axis).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::Domain { what: "ln_gamma needs Re z > 0", value: z.re });
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    // Each ln(z + k) has Re > 0, so the sum stays on the continuous branch.
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for &c in STIRLING.iter() {
        series += c * p;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift)
}

/// `arg Gamma(1 + i x)`, continuous in `x` and odd.
pub fn arg_gamma_one_plus_ix(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    // Evaluate at |x| and use the conjugation symmetry so the result is odd
    // to the last bit.
    let v = ln_gamma(Complex64::new(1.0, x.abs()))
        .expect("Re(1 + ix) = 1 > 0")
        .im;
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Continuous phase of `Gamma(x0 + i y)` for fixed `x0 > 0`.
pub fn arg_gamma(x0: f64, y: f64) -> Result<f64> {
    Ok(ln_gamma(Complex64::new(x0, y))?.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        let g1 = cgamma(c(1.0, 0.0)).unwrap();
        assert!((g1 - 1.0).norm() < 1e-14);
        let gh = cgamma(c(0.5, 0.0)).unwrap();
        assert!((gh.re - PI.sqrt()).abs() < 1e-14 && gh.im.abs() < 1e-15);
        let g5 = cgamma(c(5.0, 0.0)).unwrap();
        assert!((g5.re - 24.0).abs() < 1e-12);
    }

    #[test]
    fn modulus_on_unit_imaginary_shift() {
        // |Gamma(1+i)|^2 = pi / sinh(pi)
        let g = cgamma(c(1.0, 1.0)).unwrap();
        let expected = (PI / PI.sinh()).sqrt();
        assert!((g.norm() - expected).abs() < 1e-14 * expected);
    }

    #[test]
    fn poles_are_errors() {
        for n in 0..5 {
            let r = cgamma(c(-(n as f64), 0.0));
            assert!(matches!(r, Err(Error::GammaPole { .. })));
            assert_eq!(rgamma(c(-(n as f64), 0.0)), c(0.0, 0.0));
        }
    }

    #[test]
    fn lanczos_and_stirling_agree() {
        for &(re, im) in &[(0.7, 0.0), (1.0, 3.0), (2.5, -11.0), (0.6, 40.0), (9.0, 49.0)] {
            let z = c(re, im);
            let a = cgamma(z).unwrap();
            let b = ln_gamma(z).unwrap().exp();
            assert!((a - b).norm() <= 2e-13 * b.norm(), "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn reflection_branch() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let g = cgamma(c(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13);
        let z = c(-3.3, 2.1);
        let lhs = cgamma(z).unwrap() * cgamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }

    #[test]
    fn arg_gamma_basics() {
        assert_eq!(arg_gamma_one_plus_ix(0.0), 0.0);
        for &x in &[0.1, 1.0, 2.7, 10.0] {
            assert_eq!(arg_gamma_one_plus_ix(-x), -arg_gamma_one_plus_ix(x));
        }
        let ph = cgamma(c(1.0, 1.0)).unwrap().arg();
        assert!((arg_gamma_one_plus_ix(1.0) - ph).abs() < 1e-14);
    }

    #[test]
    fn arg_gamma_tracks_large_phases_continuously() {
        // The principal phase of Gamma wraps; the continuous branch must not.
        let mut prev = 0.0;
        let mut x = 0.0;
        while x < 30.0 {
            x += 0.01;
            let v = arg_gamma_one_plus_ix(x);
            let principal = cgamma(c(1.0, x)).unwrap().arg();
            let k = ((v - principal) / (2.0 * PI)).round();
            assert!((v - principal - 2.0 * PI * k).abs() < 1e-11);
            // phase speed is ln|1+ix| + O(1/x), so steps of 0.01 move < 0.05
            assert!((v - prev).abs() < 0.05, "jump at x = {x}");
            prev = v;
        }
    }
}
