//! Run configuration: JSON schema, defaults and validation.

use filpiv::symmetric::SymBranch;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchCfg {
    Odd,
    MixedMinus,
    MixedPlus,
}

impl From<BranchCfg> for SymBranch {
    fn from(b: BranchCfg) -> Self {
        match b {
            BranchCfg::Odd => SymBranch::Odd,
            BranchCfg::MixedMinus => SymBranch::MixedMinus,
            BranchCfg::MixedPlus => SymBranch::MixedPlus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsCfg {
    pub a: f64,
    pub eps: f64,
    #[serde(default = "default_axis")]
    pub axis: [f64; 3],
}

fn default_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

/// Cauchy data at `s0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCfg {
    /// `G'(s0)` and `G''(s0)`; `G(s0)` follows from the flow equation.
    Cauchy {
        gp0: [f64; 3],
        gpp0: [f64; 3],
        #[serde(default)]
        s0: f64,
    },
    /// Spherical angles of `G'(0)` relative to the frame of the axis, and
    /// the angle of `G''(0)` in the plane orthogonal to `G'(0)`. `|G''(0)|`
    /// is fixed by `eps`.
    Angles { theta: f64, phi: f64, psi: f64 },
    Symmetric { branch: BranchCfg },
    /// The odd solution with planar tails; `eps` is replaced by its value.
    PlanarSpiral,
    /// `G'(0) = e1`, `G''(0) = sqrt(eps) e2` (requires `a = 0`).
    ZeroA,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorCfg {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorCfg {
    fn default() -> Self {
        IntegratorCfg { rel_tol: 1e-12, abs_tol: 1e-14, max_step: 0.1, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputCfg {
    /// Spacing of the uniform `s` grid written to trajectory CSVs.
    pub sample_step: f64,
    pub prefix: String,
}

impl Default for OutputCfg {
    fn default() -> Self {
        OutputCfg { sample_step: 0.05, prefix: "run".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitCfg {
    /// Window on `s > 0`; defaults to `[0.6 s_hi, s_hi]`.
    pub window_plus: Option<[f64; 2]>,
    /// Window on `s < 0`; defaults to `[s_lo, 0.6 s_lo]`.
    pub window_minus: Option<[f64; 2]>,
    pub samples_per_period: usize,
    pub refine_omega: bool,
    /// Largest accepted residual of the first connection formula.
    pub connection_threshold: f64,
    /// Largest accepted relative deviation of the fitted amplitude.
    pub amplitude_tolerance: f64,
}

impl Default for FitCfg {
    fn default() -> Self {
        FitCfg {
            window_plus: None,
            window_minus: None,
            samples_per_period: 24,
            refine_omega: false,
            connection_threshold: 1e-3,
            amplitude_tolerance: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideCfg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectCfg {
    pub side: SideCfg,
    pub omega: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZeroACfg {
    /// Comparison grid `[-s_range, s_range]` with `n` points.
    pub s_range: f64,
    pub n: usize,
    /// Tangent fit window `[0.6 s, s]` with `s = tangent_s_max`.
    pub tangent_s_max: f64,
    pub threshold: f64,
}

impl Default for ZeroACfg {
    fn default() -> Self {
        ZeroACfg { s_range: 20.0, n: 400, tangent_s_max: 40.0, threshold: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    pub a: f64,
    pub eps: f64,
    pub branch: BranchCfg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SymmetricCfg {
    /// Extra parameter points; the top-level point is included when its
    /// initial data are symmetric.
    pub sweep: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilamentCfg {
    pub t: Vec<f64>,
    pub x_range: [f64; 2],
    pub n: usize,
    /// Step of the five-point stencil behind the arc-length column.
    pub fd_step: f64,
}

impl Default for FilamentCfg {
    fn default() -> Self {
        FilamentCfg { t: vec![1.0], x_range: [-10.0, 10.0], n: 401, fd_step: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdsCfg {
    pub unit_drift: f64,
    pub eps_drift: f64,
    pub constraint_drift: f64,
    /// Scaled by `1 + |s|^3`.
    pub sigma_residual: f64,
    pub arclength: f64,
}

impl Default for ThresholdsCfg {
    fn default() -> Self {
        ThresholdsCfg { unit_drift: 1e-10, eps_drift: 1e-9, constraint_drift: 1e-9, sigma_residual: 1e-8, arclength: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Informational; must match the subcommand when present.
    #[serde(default)]
    pub mode: Option<String>,
    pub params: ParamsCfg,
    #[serde(default)]
    pub initial: Option<InitialCfg>,
    #[serde(default)]
    pub s_span: Option<[f64; 2]>,
    #[serde(default)]
    pub integrator: IntegratorCfg,
    #[serde(default)]
    pub output: OutputCfg,
    #[serde(default)]
    pub fit: FitCfg,
    #[serde(default)]
    pub connect: Option<ConnectCfg>,
    #[serde(default)]
    pub zero_a: ZeroACfg,
    #[serde(default)]
    pub symmetric: SymmetricCfg,
    #[serde(default)]
    pub filament: FilamentCfg,
    #[serde(default)]
    pub thresholds: ThresholdsCfg,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub s_max: Option<f64>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::config(msg)
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("{name} must be positive and finite (got {v})")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| bad(format!("config parse error: {e}")))
    }

    /// Fills every default so the emitted config is fully explicit, applies
    /// overrides and validates.
    pub fn resolve(mut self, mode: &str, ov: Overrides) -> Result<Self, CliError> {
        if let Some(m) = &self.mode {
            if m != mode {
                return Err(bad(format!("config mode {m:?} does not match subcommand {mode:?}")));
            }
        }
        self.mode = Some(mode.to_string());
        if let Some(v) = ov.rel_tol {
            self.integrator.rel_tol = v;
        }
        if let Some(v) = ov.abs_tol {
            self.integrator.abs_tol = v;
        }
        if let Some(v) = ov.s_max {
            positive("--s-max", v)?;
            self.s_span = Some([-v, v]);
        }
        let p = &self.params;
        if !(p.a >= 0.0 && p.a.is_finite() && p.eps.is_finite()) {
            return Err(bad(format!("params need a >= 0 and finite eps (got a = {}, eps = {})", p.a, p.eps)));
        }
        if p.axis.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-12 {
            return Err(bad("axis must be nonzero"));
        }
        if self.initial.is_none() {
            self.initial = Some(if p.a == 0.0 { InitialCfg::ZeroA } else { InitialCfg::Symmetric { branch: BranchCfg::Odd } });
        }
        if let Some(InitialCfg::PlanarSpiral) = self.initial {
            self.params.eps = filpiv::symmetric::planar_spiral(self.params.a).map_err(CliError::from)?.0;
        }
        let [lo, hi] = *self.s_span.get_or_insert([-40.0, 40.0]);
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(bad(format!("s_span must satisfy lo < hi (got [{lo}, {hi}])")));
        }
        let ic = &self.integrator;
        positive("rel_tol", ic.rel_tol)?;
        positive("abs_tol", ic.abs_tol)?;
        positive("max_step", ic.max_step)?;
        positive("output.sample_step", self.output.sample_step)?;
        if self.fit.window_plus.is_none() && hi > 0.0 {
            self.fit.window_plus = Some([0.6 * hi, hi]);
        }
        if self.fit.window_minus.is_none() && lo < 0.0 {
            self.fit.window_minus = Some([lo, 0.6 * lo]);
        }
        for &t in &self.filament.t {
            positive("filament.t", t)?;
        }
        positive("filament.fd_step", self.filament.fd_step)?;
        if self.filament.n < 2 || self.zero_a.n < 2 {
            return Err(bad("grid sizes must be at least 2"));
        }
        Ok(self)
    }

    pub fn s_span(&self) -> (f64, f64) {
        let [lo, hi] = self.s_span.unwrap_or([-40.0, 40.0]);
        (lo, hi)
    }

    pub fn integrator_config(&self) -> filpiv::odeint::IntegratorConfig {
        let ic = &self.integrator;
        filpiv::odeint::IntegratorConfig {
            max_step: ic.max_step,
            max_steps: ic.max_steps,
            ..filpiv::odeint::IntegratorConfig::with_tolerances(ic.rel_tol, ic.abs_tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let c = RunConfig::from_json(r#"{"params": {"a": 1.0, "eps": 0.3}}"#).unwrap();
        let r = c.resolve("integrate", Overrides::default()).unwrap();
        assert_eq!(r.s_span, Some([-40.0, 40.0]));
        assert_eq!(r.fit.window_plus, Some([24.0, 40.0]));
        assert_eq!(r.initial, Some(InitialCfg::Symmetric { branch: BranchCfg::Odd }));
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"window_minus\":[-40.0,-24.0]"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_json(r#"{"params": {"a": 1.0}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"params": {"a": 1.0, "eps": 0.0}, "bogus": 1}"#).is_err());
        let c = RunConfig::from_json(r#"{"mode": "fit", "params": {"a": 1.0, "eps": 0.0}}"#).unwrap();
        assert!(c.clone().resolve("integrate", Overrides::default()).is_err());
        let ov = Overrides { rel_tol: Some(-1.0), ..Default::default() };
        assert!(c.resolve("fit", ov).is_err());
    }

    #[test]
    fn overrides_apply() {
        let c = RunConfig::from_json(r#"{"params": {"a": 0.0, "eps": 1.0}}"#).unwrap();
        let ov = Overrides { rel_tol: Some(1e-10), abs_tol: None, s_max: Some(12.0) };
        let r = c.resolve("integrate", ov).unwrap();
        assert_eq!(r.integrator.rel_tol, 1e-10);
        assert_eq!(r.s_span(), (-12.0, 12.0));
        assert_eq!(r.initial, Some(InitialCfg::ZeroA));
    }

    #[test]
    fn planar_spiral_sets_eps() {
        let c = RunConfig::from_json(r#"{"params": {"a": 10.0, "eps": 0.0}, "initial": {"kind": "planar_spiral"}}"#).unwrap();
        let r = c.resolve("symmetric", Overrides::default()).unwrap();
        assert!((r.params.eps - 2.0 / std::f64::consts::PI * (5.0 * std::f64::consts::PI).cosh().ln()).abs() < 1e-12);
    }
}
