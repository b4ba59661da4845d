//! Odd and mixed symmetric solutions and the closed-form predictions for
//! their tails.

use crate::asympt::{delta_from_rho, Side, TailParams};
use crate::error::{Error, Result};
use crate::flow::{make_initial_state, FlowParams, FlowState};
use nalgebra::Vector3;
use std::f64::consts::{LN_2, PI, TAU};

/// Symmetry class, fixed by `sigma'(0)`: `eps` (odd), `-a` or `+a` (mixed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymBranch {
    Odd,
    MixedMinus,
    MixedPlus,
}

impl SymBranch {
    pub fn name(self) -> &'static str {
        match self {
            SymBranch::Odd => "odd",
            SymBranch::MixedMinus => "mixed_minus",
            SymBranch::MixedPlus => "mixed_plus",
        }
    }

    pub fn sigma_p0(self, params: &FlowParams) -> f64 {
        match self {
            SymBranch::Odd => params.eps,
            SymBranch::MixedMinus => -params.a,
            SymBranch::MixedPlus => params.a,
        }
    }

    /// `|eps| <= a` (odd), `eps >= -a` (mixed minus), `eps >= a` (mixed plus).
    pub fn is_feasible(self, params: &FlowParams) -> bool {
        let (a, e) = (params.a, params.eps);
        match self {
            SymBranch::Odd => a > 0.0 && e.abs() <= a,
            SymBranch::MixedMinus => e >= -a,
            SymBranch::MixedPlus => e >= a,
        }
    }

    fn check(self, params: &FlowParams) -> Result<()> {
        if self.is_feasible(params) {
            Ok(())
        } else {
            Err(Error::BranchInfeasible { branch: self.name(), a: params.a, eps: params.eps })
        }
    }
}

impl std::str::FromStr for SymBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(SymBranch::Odd),
            "mixed_minus" => Ok(SymBranch::MixedMinus),
            "mixed_plus" => Ok(SymBranch::MixedPlus),
            _ => Err(Error::InvalidInput(format!("unknown branch {s:?}"))),
        }
    }
}

/// Initial state at `s = 0`. Odd: `a . G'(0) = eps`, `G''(0) = 0`, `G(0) = 0`.
/// Mixed: `G'(0) = -+axis` and `G''(0) = sqrt(eps +- a) e1`.
pub fn make_symmetric_ic(params: &FlowParams, branch: SymBranch) -> Result<FlowState> {
    branch.check(params)?;
    let (e1, _, e3) = params.frame();
    let (a, e) = (params.a, params.eps);
    match branch {
        SymBranch::Odd => {
            let c = e / a;
            let gp = e1 * (1.0 - c * c).max(0.0).sqrt() + e3 * c;
            make_initial_state(params, gp, Vector3::zeros())
        }
        SymBranch::MixedMinus => make_initial_state(params, -e3, e1 * (e + a).max(0.0).sqrt()),
        SymBranch::MixedPlus => make_initial_state(params, e3, e1 * (e - a).max(0.0).sqrt()),
    }
}

/// One root `X = e^{2 pi (eps - 3w)/3}` of the symmetric monodromy condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XRoot {
    pub value: f64,
    pub admissible: bool,
    pub omega: Option<f64>,
}

/// `X in {-e^{pi eps} -+ 2 e^{pi eps/2} cosh(pi a/2), e^{pi eps} -+ 2 e^{pi eps/2} sinh(pi a/2)}`,
/// in that order. A root is admissible when `X >= 1`.
pub fn x_roots(params: &FlowParams) -> [XRoot; 4] {
    let (a, e) = (params.a, params.eps);
    let (big, half) = ((PI * e).exp(), (PI * e / 2.0).exp());
    let (ch, sh) = ((PI * a / 2.0).cosh(), (PI * a / 2.0).sinh());
    let snap = 1e-13 * big.max(1.0) * ch;
    [-big - 2.0 * half * ch, -big + 2.0 * half * ch, big - 2.0 * half * sh, big + 2.0 * half * sh].map(|x| {
        // X = 1 exactly at eps = a, up to cancellation
        let x = if (x - 1.0).abs() <= snap { 1.0 } else { x };
        let admissible = x >= 1.0;
        XRoot { value: x, admissible, omega: admissible.then(|| e / 3.0 - x.ln() / TAU) }
    })
}

/// Conjectured `(omega, Re rho)` shared by both tails of a symmetric solution.
pub fn conjecture_omega(params: &FlowParams, branch: SymBranch) -> Result<(f64, f64)> {
    let (a, e) = (params.a, params.eps);
    let half = (PI * e / 2.0).exp();
    let (arg, re_rho) = match branch {
        SymBranch::Odd => (2.0 * (PI * a / 2.0).cosh() - half, PI),
        SymBranch::MixedPlus => (half - 2.0 * (PI * a / 2.0).sinh(), PI),
        SymBranch::MixedMinus => (half + 2.0 * (PI * a / 2.0).sinh(), 0.0),
    };
    if !(arg > 0.0) {
        return Err(Error::BranchInfeasible { branch: branch.name(), a, eps: e });
    }
    Ok((e / 12.0 - arg.ln() / TAU, re_rho))
}

/// The conjectured tail on `side`, with `delta` from inverting the `Re rho` map.
pub fn conjecture_tail(params: &FlowParams, branch: SymBranch, side: Side) -> Result<TailParams> {
    let (w, re) = conjecture_omega(params, branch)?;
    Ok(TailParams::new(side, w, delta_from_rho(re, w, params), params))
}

/// `ln cosh x` without overflow.
fn ln_cosh(x: f64) -> f64 {
    let y = x.abs();
    if y < 20.0 {
        (2.0 * (y / 2.0).sinh().powi(2)).ln_1p()
    } else {
        y + (-2.0 * y).exp().ln_1p() - LN_2
    }
}

/// The odd solution whose tails are planar: `eps = (2/pi) ln cosh(pi a/2)`
/// and `delta = a . G'(0) / a = eps / a`.
pub fn planar_spiral(a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain { what: "planar spiral needs a > 0", value: a });
    }
    let eps = 2.0 / PI * ln_cosh(PI * a / 2.0);
    Ok((eps, eps / a))
}
